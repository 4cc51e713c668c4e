//! Finite orthomodular lattices: built from the closed subspaces of a
//! form, from a finitely generated family, or from explicit tables
//! (counterexample material). Axiom scans, atoms/covering/center,
//! the atom-set embedding into the associated projective geometry, and
//! Hasse-diagram DOT export.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::{
    norm_equiv_by_harmonic, GeometryError, HarmonicNormVerdict, Polarity, ProjPoint,
};
use crate::hermitian::{HermitianSpace, SpaceError};
use crate::linalg::LinalgError;
use crate::linalg::Subspace;
use crate::report::Report;
use crate::run::{find_first_range, CheckConfig, SplitMix64};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("space is not orthomodular, witness {0}")]
    NonOrthomodular(String),
    #[error("lattice would exceed the cap: {0} elements, cap {1}")]
    CapExceeded(usize, usize),
    #[error("full lattice construction requires a prime field")]
    NotEnumerable,
    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("not an orthocomplementation: {0}")]
    NotAnOrthocomplementation(String),
    #[error("lattice is not atomistic, witness element {0}")]
    NotAtomistic(String),
    #[error("no orthogonal atom pair exists")]
    NoOrthogonalAtomPair,
    #[error("element is not in the lattice: {0}")]
    MissingElement(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone)]
struct Backing {
    space: HermitianSpace,
    subs: Vec<Subspace>,
}

/// A finite ortholattice held as explicit order/meet/join/perp tables.
#[derive(Debug, Clone)]
pub struct FiniteOML {
    labels: Vec<String>,
    n: usize,
    le: Vec<bool>,
    perp: Vec<usize>,
    meet_t: Vec<u32>,
    join_t: Vec<u32>,
    bottom: usize,
    top: usize,
    atoms: Vec<usize>,
    backing: Option<Backing>,
}

impl FiniteOML {
    /// The lattice of all (closed) subspaces of an orthomodular prime-field
    /// space, elements in canonical order.
    pub fn from_space(
        space: &HermitianSpace,
        cfg: &CheckConfig,
    ) -> Result<FiniteOML, LatticeError> {
        if !space.descriptor().is_prime_field() {
            return Err(LatticeError::NotEnumerable);
        }
        let check = space.check_orthomodular_space(cfg)?;
        if let Some(w) = check.witness {
            return Err(LatticeError::NonOrthomodular(w.key()));
        }
        let subs = space.all_subspaces(cfg)?;
        FiniteOML::from_subspace_family(space, subs, cfg)
    }

    /// The sublattice generated by the given subspaces: closed under perp,
    /// sum, and intersection. Works over any field; every element must be
    /// orthomodular (M meet M-perp = 0, M + M-perp = E).
    pub fn from_generators(
        space: &HermitianSpace,
        generators: &[Subspace],
        cfg: &CheckConfig,
    ) -> Result<FiniteOML, LatticeError> {
        let mut family: BTreeMap<String, Subspace> = BTreeMap::new();
        let insert = |family: &mut BTreeMap<String, Subspace>, s: Subspace| {
            family.entry(s.key()).or_insert(s);
        };
        insert(&mut family, space.zero_subspace());
        insert(&mut family, space.full());
        for g in generators {
            insert(&mut family, g.clone());
        }
        loop {
            let current: Vec<Subspace> = family.values().cloned().collect();
            let before = family.len();
            for s in &current {
                insert(&mut family, space.perp(s));
            }
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    insert(&mut family, a.sum(b)?);
                    insert(&mut family, a.intersect(b)?);
                }
            }
            if family.len() == before {
                break;
            }
            if family.len() > cfg.cap {
                return Err(LatticeError::CapExceeded(family.len(), cfg.cap));
            }
        }
        let subs: Vec<Subspace> = family.into_values().collect();
        FiniteOML::from_subspace_family(space, subs, cfg)
    }

    fn from_subspace_family(
        space: &HermitianSpace,
        mut subs: Vec<Subspace>,
        cfg: &CheckConfig,
    ) -> Result<FiniteOML, LatticeError> {
        subs.sort_by(|a, b| a.canonical_cmp(b));
        if subs.len() > cfg.cap {
            return Err(LatticeError::CapExceeded(subs.len(), cfg.cap));
        }
        let n = subs.len();
        let index: BTreeMap<String, usize> =
            subs.iter().enumerate().map(|(i, s)| (s.key(), i)).collect();
        let lookup = |s: &Subspace| -> Result<usize, LatticeError> {
            index
                .get(&s.key())
                .copied()
                .ok_or_else(|| LatticeError::MissingElement(s.key()))
        };

        for m in &subs {
            let p = space.perp(m);
            if !m.intersect(&p)?.is_zero() || !m.sum(&p)?.is_full() {
                return Err(LatticeError::NonOrthomodular(m.key()));
            }
        }

        let mut le = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                le[i * n + j] = subs[j].contains_subspace(&subs[i]);
            }
        }
        let mut perp = vec![0usize; n];
        for i in 0..n {
            perp[i] = lookup(&space.perp(&subs[i]))?;
        }
        let mut meet_t = vec![0u32; n * n];
        let mut join_t = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                meet_t[i * n + j] = lookup(&subs[i].intersect(&subs[j])?)? as u32;
                join_t[i * n + j] = lookup(&subs[i].sum(&subs[j])?)? as u32;
            }
        }
        let labels = subs
            .iter()
            .map(|s| {
                if s.is_zero() {
                    "0".to_string()
                } else if s.is_full() {
                    "1".to_string()
                } else {
                    s.to_string()
                }
            })
            .collect();
        let mut lat = FiniteOML {
            labels,
            n,
            le,
            perp,
            meet_t,
            join_t,
            bottom: 0,
            top: 0,
            atoms: Vec::new(),
            backing: Some(Backing {
                space: space.clone(),
                subs,
            }),
        };
        lat.finish_construction()
            .map_err(LatticeError::NotAnOrthocomplementation)?;
        Ok(lat)
    }

    /// Explicit tables: a labelled order matrix and an orthocomplement map.
    /// Validates the partial order, lattice property, and the
    /// orthocomplementation axioms; the orthomodular law itself is left to
    /// `check_oml_axioms` so counterexamples remain constructible.
    pub fn from_tables(
        labels: Vec<String>,
        le_rows: Vec<Vec<bool>>,
        perp: Vec<usize>,
    ) -> Result<FiniteOML, LatticeError> {
        let n = labels.len();
        if le_rows.len() != n || le_rows.iter().any(|r| r.len() != n) || perp.len() != n {
            return Err(LatticeError::NotAPartialOrder("table shape".into()));
        }
        let mut le = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                le[i * n + j] = le_rows[i][j];
            }
        }
        for i in 0..n {
            if !le[i * n + i] {
                return Err(LatticeError::NotAPartialOrder(format!(
                    "not reflexive at {}",
                    labels[i]
                )));
            }
            for j in 0..n {
                if i != j && le[i * n + j] && le[j * n + i] {
                    return Err(LatticeError::NotAPartialOrder(format!(
                        "antisymmetry fails at {},{}",
                        labels[i], labels[j]
                    )));
                }
                for k in 0..n {
                    if le[i * n + j] && le[j * n + k] && !le[i * n + k] {
                        return Err(LatticeError::NotAPartialOrder(format!(
                            "transitivity fails at {},{},{}",
                            labels[i], labels[j], labels[k]
                        )));
                    }
                }
            }
        }
        // meets and joins must exist and be unique
        let mut meet_t = vec![0u32; n * n];
        let mut join_t = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let lower: Vec<usize> =
                    (0..n).filter(|&c| le[c * n + i] && le[c * n + j]).collect();
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&c| lower.iter().all(|&d| le[d * n + c]));
                let upper: Vec<usize> =
                    (0..n).filter(|&c| le[i * n + c] && le[j * n + c]).collect();
                let lub = upper
                    .iter()
                    .copied()
                    .find(|&c| upper.iter().all(|&d| le[c * n + d]));
                match (glb, lub) {
                    (Some(m), Some(j2)) => {
                        meet_t[i * n + j] = m as u32;
                        join_t[i * n + j] = j2 as u32;
                    }
                    _ => {
                        return Err(LatticeError::NotALattice(format!(
                            "meet/join missing for {},{}",
                            labels[i], labels[j]
                        )))
                    }
                }
            }
        }
        let mut lat = FiniteOML {
            labels,
            n,
            le,
            perp,
            meet_t,
            join_t,
            bottom: 0,
            top: 0,
            atoms: Vec::new(),
            backing: None,
        };
        lat.finish_construction()
            .map_err(LatticeError::NotAnOrthocomplementation)?;
        Ok(lat)
    }

    fn finish_construction(&mut self) -> Result<(), String> {
        let n = self.n;
        self.bottom = (0..n)
            .find(|&b| (0..n).all(|x| self.le[b * n + x]))
            .ok_or("no bottom element")?;
        self.top = (0..n)
            .find(|&t| (0..n).all(|x| self.le[x * n + t]))
            .ok_or("no top element")?;
        if self.bottom == self.top {
            return Err("bottom equals top".into());
        }
        for a in 0..n {
            let p = self.perp[a];
            if p >= n {
                return Err("orthocomplement out of range".into());
            }
            if self.perp[p] != a {
                return Err(format!(
                    "orthocomplement not involutive at {}",
                    self.labels[a]
                ));
            }
            if self.meet(a, p) != self.bottom {
                return Err(format!("a meet a-perp != 0 at {}", self.labels[a]));
            }
            if self.join(a, p) != self.top {
                return Err(format!("a join a-perp != 1 at {}", self.labels[a]));
            }
            for b in 0..n {
                if self.le[a * n + b] && !self.le[self.perp[b] * n + p] {
                    return Err(format!(
                        "orthocomplement not order-reversing at {},{}",
                        self.labels[a], self.labels[b]
                    ));
                }
            }
        }
        self.atoms = (0..n).filter(|&a| self.covers(self.bottom, a)).collect();
        Ok(())
    }

    /// The benzene-ring ortholattice O6: 0 < a < b < 1 and 0 < b' < a' < 1.
    /// An ortholattice that fails the orthomodular law at (a, b).
    pub fn benzene() -> FiniteOML {
        let labels = ["0", "a", "b", "bp", "ap", "1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let ord: &[(usize, usize)] = &[
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (0, 5),
            (1, 2),
            (1, 5),
            (2, 5),
            (3, 4),
            (3, 5),
            (4, 5),
        ];
        let mut le = vec![vec![false; 6]; 6];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in ord {
            le[i][j] = true;
        }
        FiniteOML::from_tables(labels, le, vec![5, 4, 3, 2, 1, 0]).expect("O6 is an ortholattice")
    }

    /// The Boolean cube 2^k on bitmask elements.
    pub fn boolean(k: u32) -> FiniteOML {
        let n = 1usize << k;
        let labels = (0..n)
            .map(|m| format!("{m:0width$b}", width = k as usize))
            .collect();
        let mut le = vec![vec![false; n]; n];
        for (a, row) in le.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = a & !b == 0;
            }
        }
        let perp = (0..n).map(|a| !a & (n - 1)).collect();
        FiniteOML::from_tables(labels, le, perp).expect("the Boolean cube is an OML")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a * self.n + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet_t[a * self.n + b] as usize
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join_t[a * self.n + b] as usize
    }

    pub fn orthocomplement(&self, a: usize) -> usize {
        self.perp[a]
    }

    pub fn orthogonal(&self, a: usize, b: usize) -> bool {
        self.le(a, self.perp[b])
    }

    pub fn covers(&self, a: usize, b: usize) -> bool {
        a != b
            && self.le(a, b)
            && !(0..self.n).any(|c| c != a && c != b && self.le(a, c) && self.le(c, b))
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn space(&self) -> Option<&HermitianSpace> {
        self.backing.as_ref().map(|b| &b.space)
    }

    pub fn subspace(&self, a: usize) -> Option<&Subspace> {
        self.backing.as_ref().map(|b| &b.subs[a])
    }

    pub fn index_of_subspace(&self, s: &Subspace) -> Option<usize> {
        let b = self.backing.as_ref()?;
        b.subs.iter().position(|t| t == s)
    }

    /// Orthocomplementation axioms, the orthomodular law over all comparable
    /// pairs, its dual form, and their pairwise agreement.
    pub fn check_oml_axioms(&self, cfg: &CheckConfig) -> Report {
        let n = self.n;
        let mut report = Report::new();

        let inv = find_first_range(n, cfg.parallel, |a| {
            (self.perp[self.perp[a]] != a).then(|| self.labels[a].clone())
        });
        report.check("ortho_involution", inv.is_none(), inv);

        let compl = find_first_range(n, cfg.parallel, |a| {
            (self.meet(a, self.perp[a]) != self.bottom || self.join(a, self.perp[a]) != self.top)
                .then(|| self.labels[a].clone())
        });
        report.check("ortho_complement_laws", compl.is_none(), compl);

        let rev = find_first_range(n * n, cfg.parallel, |idx| {
            let (a, b) = (idx / n, idx % n);
            (self.le(a, b) && !self.le(self.perp[b], self.perp[a]))
                .then(|| format!("{},{}", self.labels[a], self.labels[b]))
        });
        report.check("ortho_order_reversal", rev.is_none(), rev);

        let law = |a: usize, b: usize| self.join(a, self.meet(b, self.perp[a])) == b;
        let dual = |a: usize, b: usize| self.meet(self.perp[self.meet(self.perp[a], b)], b) == a;

        let law_fail = find_first_range(n * n, cfg.parallel, |idx| {
            let (a, b) = (idx / n, idx % n);
            (self.le(a, b) && !law(a, b)).then(|| format!("{},{}", self.labels[a], self.labels[b]))
        });
        report.check("orthomodular_law", law_fail.is_none(), law_fail);

        let dual_fail = find_first_range(n * n, cfg.parallel, |idx| {
            let (a, b) = (idx / n, idx % n);
            (self.le(a, b) && !dual(a, b)).then(|| format!("{},{}", self.labels[a], self.labels[b]))
        });
        report.check("orthomodular_dual_form", dual_fail.is_none(), dual_fail);

        let agree_fail = find_first_range(n * n, cfg.parallel, |idx| {
            let (a, b) = (idx / n, idx % n);
            (self.le(a, b) && law(a, b) != dual(a, b))
                .then(|| format!("{},{}", self.labels[a], self.labels[b]))
        });
        report.check("law_forms_agree_pairwise", agree_fail.is_none(), agree_fail);
        report
    }

    /// Every nonzero element is the join of the atoms below it.
    pub fn is_atomistic(&self) -> bool {
        self.atomistic_witness().is_none()
    }

    fn atomistic_witness(&self) -> Option<usize> {
        (0..self.n).find(|&a| {
            if a == self.bottom {
                return false;
            }
            let mut acc = self.bottom;
            for &p in &self.atoms {
                if self.le(p, a) {
                    acc = self.join(acc, p);
                }
            }
            acc != a
        })
    }

    /// a meet p = 0 for an atom p implies a join p covers a.
    pub fn covering_check(&self, cfg: &CheckConfig) -> Report {
        let mut report = Report::new();
        let pairs: Vec<(usize, usize)> = (0..self.n)
            .flat_map(|a| self.atoms.iter().map(move |&p| (a, p)))
            .filter(|&(a, p)| self.meet(a, p) == self.bottom)
            .collect();
        let fail = find_first_range(pairs.len(), cfg.parallel, |i| {
            let (a, p) = pairs[i];
            (!self.covers(a, self.join(a, p)))
                .then(|| format!("a={},p={}", self.labels[a], self.labels[p]))
        });
        report.note("pairs", pairs.len());
        report.check("covering_property", fail.is_none(), fail);
        report
    }

    /// z commutes with a when z = (z meet a) join (z meet a-perp).
    pub fn commutes(&self, z: usize, a: usize) -> bool {
        self.join(self.meet(z, a), self.meet(z, self.perp[a])) == z
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&z| (0..self.n).all(|a| self.commutes(z, a)))
            .collect()
    }

    pub fn is_irreducible(&self) -> bool {
        self.center() == vec![self.bottom, self.top] || self.center() == vec![self.top, self.bottom]
    }

    /// The atom-set embedding omega(a) = atoms below a.
    pub fn omega_embed(&self) -> Result<OmegaImage, LatticeError> {
        if let Some(w) = self.atomistic_witness() {
            return Err(LatticeError::NotAtomistic(self.labels[w].clone()));
        }
        let sets = (0..self.n)
            .map(|a| {
                self.atoms
                    .iter()
                    .copied()
                    .filter(|&p| self.le(p, a))
                    .collect::<BTreeSet<usize>>()
            })
            .collect();
        Ok(OmegaImage { sets })
    }

    /// Deterministic maximal pairwise-orthogonal atom sequence, and for each
    /// consecutive pair the harmonic norm-equivalence witness search.
    pub fn atom_pair_harmonic_report(&self, cfg: &CheckConfig) -> Result<Report, LatticeError> {
        let backing = self
            .backing
            .as_ref()
            .ok_or(LatticeError::NoOrthogonalAtomPair)?;
        let mut seq: Vec<ProjPoint> = Vec::new();
        for &p in &self.atoms {
            if seq
                .iter()
                .all(|q| self.orthogonal(p, self.index_of_subspace(q.subspace()).unwrap()))
            {
                seq.push(ProjPoint::from_subspace(backing.subs[p].clone())?);
            }
        }
        let pol = Polarity::from_space(backing.space.clone());
        harmonic_pairs_report(&pol, &seq, cfg)
    }

    /// Height of each element: length of a longest chain from the bottom.
    fn heights(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&a| (0..self.n).filter(|&b| self.le(b, a)).count());
        let mut h = vec![0usize; self.n];
        for &a in &order {
            for &b in &order {
                if b != a && self.le(b, a) {
                    h[a] = h[a].max(h[b] + 1);
                }
            }
        }
        h
    }

    /// Deterministic rank-layered DOT digraph: covering edges upward,
    /// orthocomplement pairs as dashed undirected edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph oml {\n  rankdir=BT;\n  node [shape=box];\n");
        for i in 0..self.n {
            let _ = writeln!(
                out,
                "  n{} [label=\"{}\"];",
                i,
                self.labels[i].replace('"', "'")
            );
        }
        let heights = self.heights();
        let max_h = heights.iter().copied().max().unwrap_or(0);
        for level in 0..=max_h {
            let members: Vec<String> = (0..self.n)
                .filter(|&i| heights[i] == level)
                .map(|i| format!("n{i}"))
                .collect();
            if !members.is_empty() {
                let _ = writeln!(out, "  {{ rank=same; {}; }}", members.join("; "));
            }
        }
        for a in 0..self.n {
            for b in 0..self.n {
                if self.covers(a, b) {
                    let _ = writeln!(out, "  n{a} -> n{b};");
                }
            }
        }
        for a in 0..self.n {
            if a < self.perp[a] {
                let _ = writeln!(
                    out,
                    "  n{} -> n{} [style=dashed, dir=none, constraint=false];",
                    a, self.perp[a]
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

fn harmonic_pairs_report(
    pol: &Polarity,
    seq: &[ProjPoint],
    cfg: &CheckConfig,
) -> Result<Report, LatticeError> {
    if seq.len() < 2 {
        return Err(LatticeError::NoOrthogonalAtomPair);
    }
    let mut report = Report::new();
    report.note("orthogonal_atom_sequence_len", seq.len());
    for w in 0..seq.len() - 1 {
        let (p, q) = (&seq[w], &seq[w + 1]);
        match norm_equiv_by_harmonic(pol, p, q, cfg)? {
            HarmonicNormVerdict::Witness(c) => {
                report.check(&format!("atom_pair_harmonic_{w}"), true, None);
                report.note(&format!("witness_{w}"), c);
            }
            HarmonicNormVerdict::NoWitness => {
                report.check(
                    &format!("atom_pair_harmonic_{w}"),
                    false,
                    Some(format!("pair=({p},{q})")),
                );
            }
            HarmonicNormVerdict::Unknown => {
                report.note(&format!("atom_pair_harmonic_{w}"), "unknown");
            }
        }
    }
    Ok(report)
}

/// Space-level variant of the consecutive-pair harmonic check: the
/// orthogonal sequence is drawn from the non-isotropic projective points
/// (prime fields) or an orthogonalized standard basis (infinite fields), so
/// it also applies to spaces whose full lattice does not exist.
pub fn atom_pair_harmonic_for_space(
    space: &HermitianSpace,
    cfg: &CheckConfig,
) -> Result<Report, LatticeError> {
    let pol = Polarity::from_space(space.clone());
    let mut seq: Vec<ProjPoint> = Vec::new();
    if space.descriptor().is_prime_field() {
        for s in crate::linalg::enumerate_points(space.descriptor(), space.dim())? {
            let pt = ProjPoint::from_subspace(s)?;
            if space.self_form(pt.rep()).is_zero() {
                continue;
            }
            if seq.iter().all(|q| space.orthogonal(pt.rep(), q.rep())) {
                seq.push(pt);
            }
        }
    } else {
        let basis: Vec<crate::linalg::Vector> = (0..space.dim())
            .map(|i| crate::linalg::Vector::standard_basis(space.descriptor(), space.dim(), i))
            .collect();
        for v in space.orthogonalize(&basis)? {
            seq.push(ProjPoint::from_vector(&v)?);
        }
    }
    harmonic_pairs_report(&pol, &seq, cfg)
}

/// The association a -> omega(a) = atom set of a, with its verification.
#[derive(Debug, Clone)]
pub struct OmegaImage {
    sets: Vec<BTreeSet<usize>>,
}

impl OmegaImage {
    pub fn set(&self, a: usize) -> &BTreeSet<usize> {
        &self.sets[a]
    }

    /// Projective subspace sum of two atom sets: all atoms on lines joining
    /// one set to the other (one pass suffices for subspace arguments).
    pub fn geometry_sum(
        &self,
        lat: &FiniteOML,
        a: &BTreeSet<usize>,
        b: &BTreeSet<usize>,
    ) -> BTreeSet<usize> {
        if a.is_empty() {
            return b.clone();
        }
        if b.is_empty() {
            return a.clone();
        }
        let mut out: BTreeSet<usize> = a.union(b).copied().collect();
        for &p in a {
            for &q in b {
                if p == q {
                    continue;
                }
                let line = lat.join(p, q);
                for &r in &lat.atoms {
                    if lat.le(r, line) {
                        out.insert(r);
                    }
                }
            }
        }
        out
    }

    /// Polar of an atom set: intersection of the polar point-sets of its
    /// members (all atoms for the empty set).
    pub fn polar_of_set(&self, lat: &FiniteOML, s: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = lat.atoms.iter().copied().collect();
        for &p in s {
            let polar = &self.sets[lat.orthocomplement(p)];
            out = out.intersection(polar).copied().collect();
        }
        out
    }

    /// All the embedding identities: injectivity, order transport, meets to
    /// intersections, joins to geometric sums, polar transport, hyperplane
    /// polars, and the atom double-polar.
    pub fn verify(&self, lat: &FiniteOML, cfg: &CheckConfig) -> Report {
        let mut report = Report::new();
        let n = lat.len();

        let inj = (0..n).find(|&a| (0..n).any(|b| b != a && self.sets[a] == self.sets[b]));
        report.check(
            "omega_injective",
            inj.is_none(),
            inj.map(|a| lat.label(a).to_string()),
        );

        let ord = find_first_range(n * n, cfg.parallel, |idx| {
            let (a, b) = (idx / n, idx % n);
            (lat.le(a, b) != self.sets[a].is_subset(&self.sets[b]))
                .then(|| format!("{},{}", lat.label(a), lat.label(b)))
        });
        report.check("omega_order_preserving", ord.is_none(), ord);

        let meets = find_first_range(n * n, cfg.parallel, |idx| {
            let (a, b) = (idx / n, idx % n);
            let lhs = &self.sets[lat.meet(a, b)];
            let rhs: BTreeSet<usize> = self.sets[a].intersection(&self.sets[b]).copied().collect();
            (*lhs != rhs).then(|| format!("{},{}", lat.label(a), lat.label(b)))
        });
        report.check("omega_meets_to_intersections", meets.is_none(), meets);

        // random finite families (triples)
        let mut rng = SplitMix64::new(cfg.seed ^ 0x03eb);
        let mut family_witness = None;
        for _ in 0..50 {
            let (a, b, c) = (
                rng.below(n as u64) as usize,
                rng.below(n as u64) as usize,
                rng.below(n as u64) as usize,
            );
            let lhs = &self.sets[lat.meet(lat.meet(a, b), c)];
            let rhs: BTreeSet<usize> = self.sets[a]
                .intersection(&self.sets[b])
                .copied()
                .collect::<BTreeSet<usize>>()
                .intersection(&self.sets[c])
                .copied()
                .collect();
            if *lhs != rhs {
                family_witness = Some(format!(
                    "{},{},{}",
                    lat.label(a),
                    lat.label(b),
                    lat.label(c)
                ));
                break;
            }
        }
        report.check(
            "omega_family_meets",
            family_witness.is_none(),
            family_witness,
        );

        let joins = find_first_range(n * n, cfg.parallel, |idx| {
            let (a, b) = (idx / n, idx % n);
            let lhs = &self.sets[lat.join(a, b)];
            let rhs = self.geometry_sum(lat, &self.sets[a], &self.sets[b]);
            (*lhs != rhs).then(|| format!("{},{}", lat.label(a), lat.label(b)))
        });
        report.check("omega_joins_to_geometry_sums", joins.is_none(), joins);

        let polar_transport = find_first_range(n, cfg.parallel, |a| {
            let lhs = &self.sets[lat.orthocomplement(a)];
            let rhs = self.polar_of_set(lat, &self.sets[a]);
            (*lhs != rhs).then(|| lat.label(a).to_string())
        });
        report.check(
            "omega_polar_transport",
            polar_transport.is_none(),
            polar_transport,
        );

        let all_atoms: BTreeSet<usize> = lat.atoms.iter().copied().collect();
        let mut hyper_witness = None;
        let mut double_witness = None;
        for &p in lat.atoms() {
            let h = &self.sets[lat.orthocomplement(p)];
            if *h == all_atoms {
                hyper_witness = Some(lat.label(p).to_string());
                break;
            }
            if let Some(&q) = all_atoms.difference(h).next() {
                let mut single = BTreeSet::new();
                single.insert(q);
                if self.geometry_sum(lat, h, &single) != all_atoms {
                    hyper_witness = Some(lat.label(p).to_string());
                    break;
                }
            }
            let dp = self.polar_of_set(lat, h);
            let expected: BTreeSet<usize> = [p].into_iter().collect();
            if dp != expected {
                double_witness = Some(lat.label(p).to_string());
                break;
            }
        }
        report.check(
            "omega_atom_polars_are_hyperplanes",
            hyper_witness.is_none(),
            hyper_witness,
        );
        report.check(
            "omega_atom_double_polar",
            double_witness.is_none(),
            double_witness,
        );
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;
    use crate::scalar::FieldDescriptor;

    fn p3() -> FieldDescriptor {
        FieldDescriptor::prime(3).unwrap()
    }

    fn p5() -> FieldDescriptor {
        FieldDescriptor::prime(5).unwrap()
    }

    fn rat() -> FieldDescriptor {
        FieldDescriptor::rational()
    }

    fn cfg() -> CheckConfig {
        CheckConfig::default()
    }

    fn mo4() -> FiniteOML {
        FiniteOML::from_space(&HermitianSpace::identity_gram(p3(), 2), &cfg()).unwrap()
    }

    #[test]
    fn build_gf3_lattice() {
        let lat = mo4();
        assert_eq!(lat.len(), 6);
        assert_eq!(lat.atoms().len(), 4); // (9-1)/2
        assert!(lat.check_oml_axioms(&cfg()).passed());
        assert!(lat.is_atomistic());
        assert!(lat.covering_check(&cfg()).passed());
        assert!(lat.is_irreducible());
    }

    #[test]
    fn build_gf5_lattice() {
        let space = HermitianSpace::diagonal_from_integers(p5(), &[1, 2]);
        let lat = FiniteOML::from_space(&space, &cfg()).unwrap();
        assert_eq!(lat.len(), 8);
        assert_eq!(lat.atoms().len(), 6); // (25-1)/4
        assert!(lat.check_oml_axioms(&cfg()).passed());
        assert!(lat.is_irreducible());
    }

    #[test]
    fn isotropic_space_is_rejected_with_witness() {
        let space = HermitianSpace::identity_gram(p3(), 3);
        match FiniteOML::from_space(&space, &cfg()) {
            Err(LatticeError::NonOrthomodular(w)) => assert!(w.contains("(1,1,1)")),
            other => panic!("expected non-orthomodular error, got {other:?}"),
        }
    }

    #[test]
    fn benzene_fails_orthomodular_law_at_classic_pair() {
        let o6 = FiniteOML::benzene();
        let r = o6.check_oml_axioms(&cfg());
        assert_eq!(r.pass_of("ortho_involution"), Some(true));
        assert_eq!(r.pass_of("ortho_complement_laws"), Some(true));
        assert_eq!(r.pass_of("ortho_order_reversal"), Some(true));
        assert_eq!(r.pass_of("orthomodular_law"), Some(false));
        assert_eq!(r.witness_of("orthomodular_law"), Some("a,b"));
        assert_eq!(r.pass_of("orthomodular_dual_form"), Some(false));
        assert_eq!(r.pass_of("law_forms_agree_pairwise"), Some(true));
        // O6 is not atomistic: b is not a join of atoms
        assert!(!o6.is_atomistic());
        assert!(matches!(
            o6.omega_embed(),
            Err(LatticeError::NotAtomistic(_))
        ));
    }

    #[test]
    fn boolean_cube_is_orthomodular_and_atomistic() {
        let b3 = FiniteOML::boolean(3);
        assert_eq!(b3.len(), 8);
        assert_eq!(b3.atoms().len(), 3);
        assert!(b3.check_oml_axioms(&cfg()).passed());
        assert!(b3.is_atomistic());
        assert!(b3.covering_check(&cfg()).passed());
        // distributive cube: everything is central
        assert_eq!(b3.center().len(), 8);
        assert!(!b3.is_irreducible());
    }

    #[test]
    fn one_element_table_is_rejected() {
        // 0 = 1 is not a lattice carrier here
        let r = FiniteOML::from_tables(vec!["x".into()], vec![vec![true]], vec![0]);
        assert!(matches!(r, Err(LatticeError::NotAnOrthocomplementation(_))));
    }

    #[test]
    fn chain_with_self_complement_is_rejected() {
        // 0 < m < 1 with m-perp = m is not an orthocomplementation
        let labels = vec!["0".into(), "m".into(), "1".into()];
        let le = vec![
            vec![true, true, true],
            vec![false, true, true],
            vec![false, false, true],
        ];
        assert!(matches!(
            FiniteOML::from_tables(labels, le, vec![2, 1, 0]),
            Err(LatticeError::NotAnOrthocomplementation(_))
        ));
    }

    #[test]
    fn commutation_and_center() {
        let lat = mo4();
        let bottom = lat.bottom();
        let top = lat.top();
        for a in 0..lat.len() {
            assert!(lat.commutes(bottom, a));
            assert!(lat.commutes(top, a));
            // commuting is symmetric here
            for b in 0..lat.len() {
                assert_eq!(lat.commutes(a, b), lat.commutes(b, a));
            }
        }
        assert_eq!(lat.center(), vec![bottom, top]);

        let b2 = FiniteOML::boolean(2);
        assert_eq!(b2.center().len(), 4);
        assert!(!b2.is_irreducible());
    }

    #[test]
    fn de_morgan_holds() {
        for lat in [mo4(), FiniteOML::boolean(3)] {
            for a in 0..lat.len() {
                for b in 0..lat.len() {
                    assert_eq!(
                        lat.orthocomplement(lat.join(a, b)),
                        lat.meet(lat.orthocomplement(a), lat.orthocomplement(b))
                    );
                }
            }
        }
    }

    #[test]
    fn omega_identities() {
        let lat = mo4();
        let omega = lat.omega_embed().unwrap();
        assert!(omega.set(lat.bottom()).is_empty());
        assert_eq!(omega.set(lat.top()).len(), 4);
        for &p in lat.atoms() {
            assert_eq!(omega.set(p).len(), 1);
        }
        // distinct atoms meet at 0
        let a0 = lat.atoms()[0];
        let a1 = lat.atoms()[1];
        assert!(omega.set(lat.meet(a0, a1)).is_empty());
        let r = omega.verify(&lat, &cfg());
        assert!(r.passed(), "{r}");

        let space = HermitianSpace::diagonal_from_integers(p5(), &[1, 2]);
        let lat5 = FiniteOML::from_space(&space, &cfg()).unwrap();
        let omega5 = lat5.omega_embed().unwrap();
        let r5 = omega5.verify(&lat5, &cfg());
        assert!(r5.passed(), "{r5}");

        let rb = FiniteOML::boolean(3);
        let ob = rb.omega_embed().unwrap();
        let rr = ob.verify(&rb, &cfg());
        assert!(rr.passed(), "{rr}");
    }

    #[test]
    fn generated_lattice_over_rationals() {
        let space = HermitianSpace::identity_gram(rat(), 3);
        let gens = vec![
            Subspace::span(rat(), 3, vec![Vector::from_integers(rat(), &[1, 0, 0])]),
            Subspace::span(rat(), 3, vec![Vector::from_integers(rat(), &[0, 1, 0])]),
            Subspace::span(rat(), 3, vec![Vector::from_integers(rat(), &[0, 0, 1])]),
        ];
        let lat = FiniteOML::from_generators(&space, &gens, &cfg()).unwrap();
        // the Boolean cube on three orthogonal lines
        assert_eq!(lat.len(), 8);
        assert_eq!(lat.atoms().len(), 3);
        assert!(lat.check_oml_axioms(&cfg()).passed());
        assert!(!lat.is_irreducible());

        // indefinite form: the generated family hits a singular element
        let bad = HermitianSpace::diagonal_from_integers(rat(), &[1, -1]);
        let iso = vec![Subspace::span(
            rat(),
            2,
            vec![Vector::from_integers(rat(), &[1, 1])],
        )];
        assert!(matches!(
            FiniteOML::from_generators(&bad, &iso, &cfg()),
            Err(LatticeError::NonOrthomodular(_))
        ));
    }

    #[test]
    fn atom_pair_harmonic_reports() {
        // three orthogonal axes over the rationals: witnesses exist (rho = 1)
        let space = HermitianSpace::identity_gram(rat(), 3);
        let gens: Vec<Subspace> = (0..3)
            .map(|i| Subspace::span(rat(), 3, vec![Vector::standard_basis(rat(), 3, i)]))
            .collect();
        let lat = FiniteOML::from_generators(&space, &gens, &cfg()).unwrap();
        let r = lat.atom_pair_harmonic_report(&cfg()).unwrap();
        assert!(r.passed(), "{r}");

        // GF(5) diag(1,2): 2 is not represented, no witness
        let lat12 = FiniteOML::from_space(
            &HermitianSpace::diagonal_from_integers(p5(), &[1, 2]),
            &cfg(),
        )
        .unwrap();
        let r12 = lat12.atom_pair_harmonic_report(&cfg()).unwrap();
        assert!(!r12.passed(), "{r12}");

        // GF(5) diag(1,4): the space is isotropic (1+4=0) so the full lattice
        // does not exist, but the space-level pair check finds the witness
        // via rho = 2
        let space14 = HermitianSpace::diagonal_from_integers(p5(), &[1, 4]);
        let r14 = atom_pair_harmonic_for_space(&space14, &cfg()).unwrap();
        assert!(r14.passed(), "{r14}");

        // dimension one: no orthogonal pair
        let line = FiniteOML::from_space(&HermitianSpace::identity_gram(p3(), 1), &cfg()).unwrap();
        assert!(matches!(
            line.atom_pair_harmonic_report(&cfg()),
            Err(LatticeError::NoOrthogonalAtomPair)
        ));
    }

    #[test]
    fn atom_counts_match_projective_point_counts() {
        for (p, dim) in [(3u64, 2usize), (5, 2)] {
            let desc = FieldDescriptor::prime(p).unwrap();
            // any anisotropic diagonal form
            let entries: Vec<i64> = match (p, dim) {
                (3, 2) => vec![1, 1],
                (5, 2) => vec![1, 2],
                _ => unreachable!(),
            };
            let space = HermitianSpace::diagonal_from_integers(desc, &entries);
            let lat = FiniteOML::from_space(&space, &cfg()).unwrap();
            let expected = (p.pow(dim as u32) - 1) / (p - 1);
            assert_eq!(lat.atoms().len() as u64, expected);
        }
    }

    #[test]
    fn dot_export_counts() {
        let b2 = FiniteOML::boolean(2);
        let dot = b2.to_dot();
        assert_eq!(dot.matches("label=").count(), 4);
        assert_eq!(
            dot.matches(" -> ").count() - dot.matches("dashed").count(),
            4
        );

        let lat = mo4();
        let dot = lat.to_dot();
        assert_eq!(dot.matches("label=").count(), 6);
        // 0 under 4 atoms under 1
        assert_eq!(
            dot.matches(" -> ").count() - dot.matches("dashed").count(),
            8
        );
        // deterministic output
        assert_eq!(dot, lat.to_dot());
    }
}
