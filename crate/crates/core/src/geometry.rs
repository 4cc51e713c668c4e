//! The projective layer: points and subspaces of P(E, K), the three
//! incidence axioms, polarities, the three equivalent orthomodularity
//! conditions, harmonic conjugates (synthetic and analytic, cross-checked
//! on every call), relative polars, and the harmonic norm-equivalence
//! criterion.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::hermitian::{HermitianSpace, NormEquiv, SpaceCheck, SpaceError};
use crate::linalg::{enumerate_subspaces, LinalgError, Subspace, Vector};
use crate::report::Report;
use crate::run::{find_first_range, CheckConfig, Mode, ModeChoice, SplitMix64};
use crate::scalar::{FieldDescriptor, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("subspace {0} is not a projective point")]
    NotAPoint(String),
    #[error("the two points must be different")]
    PointsEqual,
    #[error("point {0} does not lie on the given line")]
    NotOnLine(String),
    #[error("degenerate input: C coincides with P or Q")]
    DegenerateInput,
    #[error("relative polar degenerates (isotropic point or singular line), witness {0}")]
    SingularLine(String),
    #[error("auxiliary point must lie off the base line")]
    AuxOnLine,
    #[error("auxiliary point Y must lie on X+P, different from X and P")]
    BadAuxY,
    #[error("points are not orthogonal")]
    NotOrthogonal,
    #[error("point {0} is isotropic")]
    IsotropicPoint(String),
    #[error("operation requires a prime field")]
    NotEnumerable,
    #[error("operation requires ambient dimension {0}")]
    WrongAmbient(usize),
    #[error("cap exceeded: workload {0}, cap {1}")]
    CapExceeded(u128, usize),
    #[error("the exhaustive axiom check supports ambient dimension <= {0}")]
    AmbientCap(usize),
    #[error("polar table is missing an entry for {0}")]
    MissingPolarEntry(String),
    #[error("polarity axiom {0} fails, witness {1}")]
    PolarityAxiom(u8, String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A projective point: a one-dimensional subspace with its canonical
/// representative (first nonzero coordinate 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjPoint {
    sub: Subspace,
}

impl ProjPoint {
    pub fn from_vector(v: &Vector) -> Result<ProjPoint, GeometryError> {
        if v.is_zero() {
            return Err(GeometryError::NotAPoint("{}".into()));
        }
        Ok(ProjPoint {
            sub: Subspace::line(v),
        })
    }

    pub fn from_subspace(s: Subspace) -> Result<ProjPoint, GeometryError> {
        if s.dim() != 1 {
            return Err(GeometryError::NotAPoint(s.key()));
        }
        Ok(ProjPoint { sub: s })
    }

    pub fn rep(&self) -> &Vector {
        &self.sub.basis()[0]
    }

    pub fn subspace(&self) -> &Subspace {
        &self.sub
    }

    pub fn ambient(&self) -> usize {
        self.sub.ambient()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep())
    }
}

/// A projective subspace; projective dimension = vector dimension - 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjSubspace {
    sub: Subspace,
}

impl ProjSubspace {
    pub fn new(sub: Subspace) -> ProjSubspace {
        ProjSubspace { sub }
    }

    pub fn subspace(&self) -> &Subspace {
        &self.sub
    }

    pub fn proj_dim(&self) -> i64 {
        self.sub.dim() as i64 - 1
    }
}

/// Join and meet delegate to subspace sum and intersection.
pub fn join(a: &ProjSubspace, b: &ProjSubspace) -> Result<ProjSubspace, GeometryError> {
    Ok(ProjSubspace::new(a.sub.sum(&b.sub)?))
}

pub fn meet(a: &ProjSubspace, b: &ProjSubspace) -> Result<ProjSubspace, GeometryError> {
    Ok(ProjSubspace::new(a.sub.intersect(&b.sub)?))
}

/// The points of a subspace over a prime field, canonical order;
/// (p^d - 1)/(p - 1) of them for vector dimension d.
pub fn points_on(l: &Subspace) -> Result<Vec<ProjPoint>, GeometryError> {
    let desc = l.descriptor();
    let Some(p) = desc.modulus else {
        return Err(GeometryError::NotEnumerable);
    };
    let k = l.dim();
    let mut seen: BTreeMap<String, ProjPoint> = BTreeMap::new();
    let mut coeffs = vec![0u64; k];
    loop {
        if coeffs.iter().any(|&c| c != 0) {
            let mut v = Vector::zero(desc, l.ambient());
            for (i, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    v = v.add(&l.basis()[i].scale_left(&Scalar::residue(desc, c)));
                }
            }
            let pt = ProjPoint::from_vector(&v).unwrap();
            seen.entry(pt.sub.key()).or_insert(pt);
        }
        let mut idx = 0usize;
        loop {
            if idx == k {
                let mut pts: Vec<ProjPoint> = seen.into_values().collect();
                pts.sort_by(|a, b| a.sub.canonical_cmp(&b.sub));
                return Ok(pts);
            }
            coeffs[idx] += 1;
            if coeffs[idx] < p {
                break;
            }
            coeffs[idx] = 0;
            idx += 1;
        }
    }
}

/// A polarity: form-backed in the usual case, or an explicit table over an
/// enumerated prime-field geometry (validated against the polarity axioms
/// at construction).
#[derive(Debug, Clone)]
pub enum Polarity {
    Form(HermitianSpace),
    Table {
        desc: FieldDescriptor,
        ambient: usize,
        map: BTreeMap<String, Subspace>,
    },
}

impl Polarity {
    pub fn from_space(space: HermitianSpace) -> Polarity {
        Polarity::Form(space)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            Polarity::Form(s) => s.descriptor(),
            Polarity::Table { desc, .. } => *desc,
        }
    }

    pub fn ambient(&self) -> usize {
        match self {
            Polarity::Form(s) => s.dim(),
            Polarity::Table { ambient, .. } => *ambient,
        }
    }

    pub fn space(&self) -> Option<&HermitianSpace> {
        match self {
            Polarity::Form(s) => Some(s),
            Polarity::Table { .. } => None,
        }
    }

    pub fn perp(&self, m: &Subspace) -> Subspace {
        match self {
            Polarity::Form(s) => s.perp(m),
            Polarity::Table { map, .. } => map
                .get(&m.key())
                .unwrap_or_else(|| panic!("polar table validated total, missing {}", m.key()))
                .clone(),
        }
    }

    pub fn closure(&self, m: &Subspace) -> Subspace {
        self.perp(&self.perp(m))
    }

    /// Explicit subspace-to-polar association; prime fields only. The three
    /// polarity axioms are verified on construction over the whole geometry.
    pub fn from_table(
        desc: FieldDescriptor,
        ambient: usize,
        pairs: Vec<(Subspace, Subspace)>,
        cfg: &CheckConfig,
    ) -> Result<Polarity, GeometryError> {
        if !desc.is_prime_field() {
            return Err(GeometryError::NotEnumerable);
        }
        let all = enumerate_subspaces(desc, ambient, cfg.cap)?;
        let mut map = BTreeMap::new();
        for (m, polar) in pairs {
            map.insert(m.key(), polar);
        }
        for m in &all {
            if !map.contains_key(&m.key()) {
                return Err(GeometryError::MissingPolarEntry(m.key()));
            }
        }
        let pol = Polarity::Table { desc, ambient, map };
        let report = check_polarity_axioms(&pol, cfg)?;
        if let Some(pos) = [
            "polarity_full_to_zero",
            "polarity_order_reversal",
            "polarity_point_polars",
        ]
        .iter()
        .position(|n| report.pass_of(n) == Some(false))
        {
            let witness = report
                .witness_of(
                    [
                        "polarity_full_to_zero",
                        "polarity_order_reversal",
                        "polarity_point_polars",
                    ][pos],
                )
                .unwrap_or("unavailable")
                .to_string();
            return Err(GeometryError::PolarityAxiom(pos as u8 + 1, witness));
        }
        Ok(pol)
    }

    fn resolve_mode(&self, cfg: &CheckConfig) -> Result<Mode, GeometryError> {
        let count = self
            .descriptor()
            .modulus
            .map(|p| crate::linalg::count_subspaces(p, self.ambient()));
        match (cfg.mode, count) {
            (ModeChoice::Sampled, _) => Ok(Mode::Sampled),
            (ModeChoice::Exhaustive, None) => Err(GeometryError::NotEnumerable),
            (ModeChoice::Exhaustive, Some(n)) if n > cfg.cap as u128 => {
                Err(GeometryError::CapExceeded(n, cfg.cap))
            }
            (ModeChoice::Exhaustive, Some(_)) => Ok(Mode::Exhaustive),
            (ModeChoice::Auto, Some(n)) if n <= cfg.cap as u128 => Ok(Mode::Exhaustive),
            (ModeChoice::Auto, _) => Ok(Mode::Sampled),
        }
    }

    fn subspace_pool(&self, cfg: &CheckConfig) -> Result<(Vec<Subspace>, Mode), GeometryError> {
        let mode = self.resolve_mode(cfg)?;
        let pool = match mode {
            Mode::Exhaustive => enumerate_subspaces(self.descriptor(), self.ambient(), cfg.cap)?,
            Mode::Sampled => {
                let mut rng = SplitMix64::new(cfg.seed);
                (0..cfg.samples)
                    .map(|_| {
                        crate::linalg::random_subspace(self.descriptor(), self.ambient(), &mut rng)
                    })
                    .collect()
            }
        };
        Ok((pool, mode))
    }
}

/// m is nonsingular when m meets its polar only in 0.
pub fn is_nonsingular(pol: &Polarity, m: &Subspace) -> bool {
    m.intersect(&pol.perp(m)).expect("same ambient").is_zero()
}

/// A random subspace of `m` (left combinations of its basis rows).
fn random_subspace_of(m: &Subspace, rng: &mut SplitMix64) -> Subspace {
    let k = m.dim();
    let rank = rng.below(k as u64 + 1) as usize;
    let rows = (0..rank)
        .map(|_| {
            let mut v = Vector::zero(m.descriptor(), m.ambient());
            for row in m.basis() {
                let c = crate::linalg::random_scalar(m.descriptor(), rng);
                v = v.add(&row.scale_left(&c));
            }
            v
        })
        .collect();
    Subspace::span(m.descriptor(), m.ambient(), rows)
}

/// Deterministic nested pairs (inner, outer) with inner <= outer, for
/// sampled-mode checks of pairwise-quantified conditions.
fn sampled_nested_pairs(
    desc: FieldDescriptor,
    ambient: usize,
    samples: usize,
    seed: u64,
) -> Vec<(Subspace, Subspace)> {
    let mut rng = SplitMix64::new(seed);
    (0..samples)
        .map(|_| {
            let outer = crate::linalg::random_subspace(desc, ambient, &mut rng);
            let inner = random_subspace_of(&outer, &mut rng);
            (inner, outer)
        })
        .collect()
}

/// Exhaustive verification of the three projective axioms over GF(p)^dim.
pub fn check_projective_axioms(
    desc: FieldDescriptor,
    dim: usize,
    cfg: &CheckConfig,
) -> Result<Report, GeometryError> {
    if !desc.is_prime_field() {
        return Err(GeometryError::NotEnumerable);
    }
    if dim > 4 {
        return Err(GeometryError::AmbientCap(4));
    }
    let p = desc.modulus.unwrap();
    let points = points_on(&Subspace::full(desc, dim))?;
    let lines: Vec<Subspace> = enumerate_subspaces(desc, dim, cfg.cap)?
        .into_iter()
        .filter(|s| s.dim() == 2)
        .collect();
    let n = points.len();
    let per_line = (p + 1) as u128;
    let workload = (n as u128).pow(3) * per_line * per_line;
    if workload > 200_000_000 {
        return Err(GeometryError::CapExceeded(workload, cfg.cap));
    }

    let mut report = Report::new();
    report.note("points", n);
    report.note("lines", lines.len());

    // Axiom 1: two different points lie on exactly one line.
    let pair_fail = find_first_range(n * n, cfg.parallel, |idx| {
        let (i, j) = (idx / n, idx % n);
        if i >= j {
            return None;
        }
        let count = lines
            .iter()
            .filter(|l| l.contains(points[i].rep()) && l.contains(points[j].rep()))
            .count();
        (count != 1).then(|| format!("{}+{} on {} lines", points[i], points[j], count))
    });
    report.check("axiom1_unique_line", pair_fail.is_none(), pair_fail);

    // Axiom 2: every line carries at least three points.
    let mut axiom2_witness = None;
    for l in &lines {
        let pts = points_on(l)?;
        if pts.len() < 3 {
            axiom2_witness = Some(l.key());
            break;
        }
    }
    report.check(
        "axiom2_three_points",
        axiom2_witness.is_none(),
        axiom2_witness,
    );

    // Axiom 3: a line meeting two sides of a triangle at different points
    // meets the third side.
    let mut triangle_count = 0u64;
    let triple_fail = find_first_range(n * n * n, cfg.parallel, |idx| {
        let i = idx / (n * n);
        let j = (idx / n) % n;
        let k = idx % n;
        if !(i < j && j < k) {
            return None;
        }
        let (pp, qq, rr) = (&points[i], &points[j], &points[k]);
        let pq = pp.sub.sum(&qq.sub).unwrap();
        if pq.contains(rr.rep()) {
            return None; // collinear
        }
        let qr = qq.sub.sum(&rr.sub).unwrap();
        let rp = rr.sub.sum(&pp.sub).unwrap();
        for s in points_on(&pq).unwrap() {
            for t in points_on(&qr).unwrap() {
                if s.sub == t.sub {
                    continue;
                }
                let st = s.sub.sum(&t.sub).unwrap();
                if st.intersect(&rp).unwrap().is_zero() {
                    return Some(format!("triangle({},{},{}) S={} T={}", pp, qq, rr, s, t));
                }
            }
        }
        None
    });
    // count noncollinear triples for the note (cheap second pass)
    for i in 0..n {
        for j in i + 1..n {
            let pq = points[i].sub.sum(&points[j].sub).unwrap();
            for pt in points.iter().skip(j + 1) {
                if !pq.contains(pt.rep()) {
                    triangle_count += 1;
                }
            }
        }
    }
    report.note("triangles", triangle_count);
    report.check("axiom3_triangle", triple_fail.is_none(), triple_fail);
    Ok(report)
}

/// The three polarity axioms: the whole geometry maps to zero, the map
/// reverses inclusion, and every point polar is a hyperplane whose double
/// polar returns the point.
pub fn check_polarity_axioms(pol: &Polarity, cfg: &CheckConfig) -> Result<Report, GeometryError> {
    let desc = pol.descriptor();
    let ambient = pol.ambient();
    let (pool, mode) = pol.subspace_pool(cfg)?;
    let mut report = Report::new();
    report.note("mode", mode);

    let full = Subspace::full(desc, ambient);
    let ax1 = pol.perp(&full).is_zero();
    report.check(
        "polarity_full_to_zero",
        ax1,
        (!ax1).then(|| pol.perp(&full).key()),
    );

    let nested: Vec<(Subspace, Subspace)> = match mode {
        Mode::Exhaustive => pool
            .iter()
            .flat_map(|a| {
                pool.iter()
                    .filter(|b| b.contains_subspace(a))
                    .map(|b| (a.clone(), b.clone()))
            })
            .collect(),
        Mode::Sampled => sampled_nested_pairs(desc, ambient, cfg.samples, cfg.seed ^ 0x2b7e),
    };
    let ax2_fail = find_first_range(nested.len(), cfg.parallel, |idx| {
        let (a, b) = &nested[idx];
        (!pol.perp(a).contains_subspace(&pol.perp(b))).then(|| format!("{}<={}", a.key(), b.key()))
    });
    report.check("polarity_order_reversal", ax2_fail.is_none(), ax2_fail);

    let points: Vec<ProjPoint> = match mode {
        Mode::Exhaustive => points_on(&full)?,
        Mode::Sampled => {
            let mut rng = SplitMix64::new(cfg.seed ^ 0x9e37);
            (0..cfg.samples.min(50))
                .map(|_| {
                    let v = crate::linalg::random_nonzero_vector(desc, ambient, &mut rng);
                    ProjPoint::from_vector(&v).unwrap()
                })
                .collect()
        }
    };
    let ax3_fail = find_first_range(points.len(), cfg.parallel, |i| {
        let p = &points[i];
        let polar = pol.perp(&p.sub);
        if polar.dim() != ambient - 1 {
            return Some(format!("{}:polar_dim={}", p, polar.dim()));
        }
        (pol.perp(&polar) != p.sub).then(|| format!("{}:double_polar", p))
    });
    report.check("polarity_point_polars", ax3_fail.is_none(), ax3_fail);
    Ok(report)
}

/// The three equivalent orthomodularity conditions, evaluated independently:
///   (1) l <= m, m closed  =>  (l-perp meet m)-perp meet m = l-perp-perp
///   (2) l closed          =>  l + l-perp = everything
///   (3) m <= n, m closed  =>  m + (n meet m-perp) = n
/// In exhaustive mode the report also asserts the three outcomes agree.
pub fn ortho_conditions(pol: &Polarity, cfg: &CheckConfig) -> Result<Report, GeometryError> {
    let (pool, mode) = pol.subspace_pool(cfg)?;
    let full = Subspace::full(pol.descriptor(), pol.ambient());
    let n = pool.len();

    // Nested pairs (inner <= outer): the full square in exhaustive mode,
    // directly sampled tuples otherwise.
    let pairs: Vec<(Subspace, Subspace)> = match mode {
        Mode::Exhaustive => pool
            .iter()
            .flat_map(|inner| {
                pool.iter()
                    .filter(|outer| outer.contains_subspace(inner))
                    .map(|outer| (inner.clone(), outer.clone()))
            })
            .collect(),
        Mode::Sampled => sampled_nested_pairs(
            pol.descriptor(),
            pol.ambient(),
            cfg.samples,
            cfg.seed ^ 0x517c,
        ),
    };

    let cond1 = find_first_range(pairs.len(), cfg.parallel, |idx| {
        let (l, m) = &pairs[idx];
        if pol.closure(m) != *m {
            return None;
        }
        let lhs = pol
            .perp(&pol.perp(l).intersect(m).unwrap())
            .intersect(m)
            .unwrap();
        (lhs != pol.closure(l)).then(|| format!("l={},m={}", l.key(), m.key()))
    });

    let cond2 = find_first_range(n, cfg.parallel, |i| {
        let l = &pool[i];
        if pol.closure(l) != *l {
            return None;
        }
        (l.sum(&pol.perp(l)).unwrap() != full).then(|| format!("l={}", l.key()))
    });

    let cond3 = find_first_range(pairs.len(), cfg.parallel, |idx| {
        let (m, nn) = &pairs[idx];
        if pol.closure(m) != *m {
            return None;
        }
        let lhs = m.sum(&nn.intersect(&pol.perp(m)).unwrap()).unwrap();
        (lhs != *nn).then(|| format!("m={},n={}", m.key(), nn.key()))
    });

    let mut report = Report::new();
    report.note("mode", mode);
    let outcomes = [&cond1, &cond2, &cond3];
    for (i, w) in outcomes.iter().enumerate() {
        report.check(&format!("condition{}", i + 1), w.is_none(), (*w).clone());
    }
    if mode == Mode::Exhaustive {
        let flags: Vec<bool> = outcomes.iter().map(|w| w.is_none()).collect();
        let agree = flags.iter().all(|&f| f == flags[0]);
        report.check(
            "conditions_agree",
            agree,
            (!agree).then(|| format!("flags={flags:?}")),
        );
    } else {
        report.note("conditions_agree", "unchecked-in-sampled-mode");
    }
    Ok(report)
}

/// Orthomodularity of the geometry is condition (2).
pub fn is_orthomodular_geometry(
    pol: &Polarity,
    cfg: &CheckConfig,
) -> Result<SpaceCheck, GeometryError> {
    let (pool, mode) = pol.subspace_pool(cfg)?;
    let full = Subspace::full(pol.descriptor(), pol.ambient());
    let witness = find_first_range(pool.len(), cfg.parallel, |i| {
        let l = pol.closure(&pool[i]);
        (l.sum(&pol.perp(&l)).unwrap() != full).then(|| l.clone())
    });
    Ok(SpaceCheck {
        holds: witness.is_none(),
        witness,
        mode,
    })
}

fn validate_harmonic_inputs(
    c: &ProjPoint,
    p: &ProjPoint,
    q: &ProjPoint,
) -> Result<Subspace, GeometryError> {
    if p.sub == q.sub {
        return Err(GeometryError::PointsEqual);
    }
    let line = p.sub.sum(&q.sub)?;
    if !line.contains(c.rep()) {
        return Err(GeometryError::NotOnLine(c.to_string()));
    }
    if c.sub == p.sub || c.sub == q.sub {
        return Err(GeometryError::DegenerateInput);
    }
    Ok(line)
}

/// Writes C = K(e + rho f) in the representatives of P and Q and returns
/// the analytic conjugate K(e - rho f).
fn harmonic_analytic(
    c: &ProjPoint,
    p: &ProjPoint,
    q: &ProjPoint,
) -> Result<ProjPoint, GeometryError> {
    let e = p.rep().clone();
    let f = q.rep().clone();
    let coeffs = crate::linalg::express(&[e.clone(), f.clone()], c.rep())
        .ok_or_else(|| GeometryError::NotOnLine(c.to_string()))?;
    let (alpha, beta) = (&coeffs[0], &coeffs[1]);
    if alpha.is_zero() || beta.is_zero() {
        return Err(GeometryError::DegenerateInput);
    }
    let rho = alpha.invert().unwrap().mul(beta);
    ProjPoint::from_vector(&e.sub(&f.scale_left(&rho)))
}

/// Fourth harmonic point of C with respect to P and Q. Runs the synthetic
/// quadrilateral construction whenever the ambient allows an off-line
/// auxiliary point (vector dimension >= 3) and cross-checks it against the
/// analytic value on every call; a mismatch is a hard internal fault.
pub fn harmonic_conjugate(
    pol: &Polarity,
    c: &ProjPoint,
    p: &ProjPoint,
    q: &ProjPoint,
) -> Result<ProjPoint, GeometryError> {
    let line = validate_harmonic_inputs(c, p, q)?;
    let analytic = harmonic_analytic(c, p, q)?;
    if pol.ambient() >= 3 {
        let desc = pol.descriptor();
        let ambient = pol.ambient();
        // Deterministic scan: a 2-dimensional subspace cannot contain the
        // whole standard basis.
        let x_vec = (0..ambient)
            .map(|i| Vector::standard_basis(desc, ambient, i))
            .find(|v| !line.contains(v))
            .expect("line is a proper subspace");
        let x = ProjPoint::from_vector(&x_vec)?;
        let y = ProjPoint::from_vector(&x_vec.add(p.rep()))?;
        let synthetic = harmonic_conjugate_with(pol, c, p, q, &x, &y)?;
        assert_eq!(
            synthetic.sub, analytic.sub,
            "synthetic and analytic harmonic conjugates disagree"
        );
    }
    assert_ne!(
        analytic.sub, c.sub,
        "harmonic conjugate equals C; characteristic 2 is excluded"
    );
    Ok(analytic)
}

/// The synthetic construction with explicit auxiliary points:
/// C' = (C+Y) meet (Q+X), C'' = (P+C') meet (Q+Y), result = (X+C'') meet (P+Q).
pub fn harmonic_conjugate_with(
    _pol: &Polarity,
    c: &ProjPoint,
    p: &ProjPoint,
    q: &ProjPoint,
    x: &ProjPoint,
    y: &ProjPoint,
) -> Result<ProjPoint, GeometryError> {
    let line = validate_harmonic_inputs(c, p, q)?;
    if line.contains(x.rep()) {
        return Err(GeometryError::AuxOnLine);
    }
    let xp = x.sub.sum(&p.sub)?;
    if !xp.contains(y.rep()) || y.sub == x.sub || y.sub == p.sub {
        return Err(GeometryError::BadAuxY);
    }
    let point = |s: Subspace| -> ProjPoint {
        ProjPoint::from_subspace(s).expect("harmonic construction meets in points")
    };
    let c1 = point(
        c.sub
            .sum(&y.sub)
            .unwrap()
            .intersect(&q.sub.sum(&x.sub).unwrap())
            .unwrap(),
    );
    let c2 = point(
        p.sub
            .sum(&c1.sub)
            .unwrap()
            .intersect(&q.sub.sum(&y.sub).unwrap())
            .unwrap(),
    );
    let result = point(x.sub.sum(&c2.sub).unwrap().intersect(&line).unwrap());
    Ok(result)
}

/// The polar of C relative to the line geometry [0, P+Q]: C-perp meet (P+Q).
pub fn relative_polar(
    pol: &Polarity,
    c: &ProjPoint,
    p: &ProjPoint,
    q: &ProjPoint,
) -> Result<ProjPoint, GeometryError> {
    let line = validate_harmonic_inputs(c, p, q)?;
    let polar = pol.perp(&c.sub);
    if polar.contains_subspace(&c.sub) {
        return Err(GeometryError::SingularLine(c.to_string()));
    }
    let r = polar.intersect(&line)?;
    if r.dim() != 1 {
        return Err(GeometryError::SingularLine(line.key()));
    }
    ProjPoint::from_subspace(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HarmonicNormVerdict {
    Witness(ProjPoint),
    NoWitness,
    Unknown,
}

/// Norm-equivalence of the two points' self-form values, detected through
/// the geometry: a point C on P+Q whose harmonic conjugate coincides with
/// its relative polar.
pub fn norm_equiv_by_harmonic(
    pol: &Polarity,
    p: &ProjPoint,
    q: &ProjPoint,
    cfg: &CheckConfig,
) -> Result<HarmonicNormVerdict, GeometryError> {
    if p.sub == q.sub {
        return Err(GeometryError::PointsEqual);
    }
    if !pol.perp(&p.sub).contains_subspace(&q.sub) {
        return Err(GeometryError::NotOrthogonal);
    }
    for pt in [p, q] {
        if pol.perp(&pt.sub).contains_subspace(&pt.sub) {
            return Err(GeometryError::IsotropicPoint(pt.to_string()));
        }
    }
    if pol.descriptor().is_prime_field() {
        let line = p.sub.sum(&q.sub)?;
        for c in points_on(&line)? {
            if c.sub == p.sub || c.sub == q.sub {
                continue;
            }
            let conj = harmonic_conjugate(pol, &c, p, q)?;
            match relative_polar(pol, &c, p, q) {
                Ok(polar) if polar.sub == conj.sub => {
                    return Ok(HarmonicNormVerdict::Witness(c));
                }
                Ok(_) => {}
                // isotropic C: its relative polar is C itself, never the conjugate
                Err(GeometryError::SingularLine(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(HarmonicNormVerdict::NoWitness)
    } else {
        let space = pol.space().ok_or(GeometryError::NotEnumerable)?;
        let lambda = space.self_form(p.rep());
        let mu = space.self_form(q.rep());
        match space.norm_equiv(&lambda, &mu, cfg)? {
            NormEquiv::Equivalent(rho) => {
                let c = ProjPoint::from_vector(&p.rep().add(&q.rep().scale_left(&rho)))?;
                let conj = harmonic_conjugate(pol, &c, p, q)?;
                let polar = relative_polar(pol, &c, p, q)?;
                assert_eq!(
                    conj.sub, polar.sub,
                    "norm witness must satisfy the harmonic criterion"
                );
                Ok(HarmonicNormVerdict::Witness(c))
            }
            NormEquiv::Inequivalent => Ok(HarmonicNormVerdict::NoWitness),
            NormEquiv::Unknown => Ok(HarmonicNormVerdict::Unknown),
        }
    }
}

/// Point/line incidence tables for a prime-field plane (ambient vector
/// dimension 3): joins of distinct points and meets of distinct lines by
/// table lookup.
pub struct PlaneIncidence {
    pub points: Vec<ProjPoint>,
    pub lines: Vec<Subspace>,
    on: Vec<Vec<bool>>,
    join_pt: Vec<Vec<u32>>,
    meet_ln: Vec<Vec<u32>>,
}

impl PlaneIncidence {
    pub fn build(
        desc: FieldDescriptor,
        cfg: &CheckConfig,
    ) -> Result<PlaneIncidence, GeometryError> {
        let points = points_on(&Subspace::full(desc, 3))?;
        let lines: Vec<Subspace> = enumerate_subspaces(desc, 3, cfg.cap)?
            .into_iter()
            .filter(|s| s.dim() == 2)
            .collect();
        let np = points.len();
        let nl = lines.len();
        let mut on = vec![vec![false; np]; nl];
        for (li, l) in lines.iter().enumerate() {
            for (pi, pt) in points.iter().enumerate() {
                on[li][pi] = l.contains(pt.rep());
            }
        }
        let key_of_line: BTreeMap<String, u32> = lines
            .iter()
            .enumerate()
            .map(|(i, l)| (l.key(), i as u32))
            .collect();
        let key_of_point: BTreeMap<String, u32> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.sub.key(), i as u32))
            .collect();
        let mut join_pt = vec![vec![u32::MAX; np]; np];
        for i in 0..np {
            for j in 0..np {
                if i == j {
                    continue;
                }
                let l = points[i].sub.sum(&points[j].sub).unwrap();
                join_pt[i][j] = key_of_line[&l.key()];
            }
        }
        let mut meet_ln = vec![vec![u32::MAX; nl]; nl];
        for i in 0..nl {
            for j in 0..nl {
                if i == j {
                    continue;
                }
                let m = lines[i].intersect(&lines[j]).unwrap();
                meet_ln[i][j] = key_of_point[&m.key()];
            }
        }
        Ok(PlaneIncidence {
            points,
            lines,
            on,
            join_pt,
            meet_ln,
        })
    }

    pub fn point_index(&self, p: &ProjPoint) -> usize {
        self.points
            .iter()
            .position(|q| q.sub == p.sub)
            .expect("point belongs to the plane")
    }

    fn on_line(&self, line: usize, pt: usize) -> bool {
        self.on[line][pt]
    }

    fn join(&self, a: usize, b: usize) -> usize {
        self.join_pt[a][b] as usize
    }

    fn meet(&self, a: usize, b: usize) -> usize {
        self.meet_ln[a][b] as usize
    }

    /// Table-driven synthetic harmonic conjugate (all indices are points,
    /// except `line`).
    fn harmonic(&self, line: usize, c: usize, p: usize, q: usize, x: usize, y: usize) -> usize {
        let c1 = self.meet(self.join(c, y), self.join(q, x));
        let c2 = self.meet(self.join(p, c1), self.join(q, y));
        self.meet(self.join(x, c2), line)
    }
}

/// Exhaustive agreement sweep over a prime-field plane: for every line,
/// every ordered pair (P, Q) on it, every admissible C, and every
/// admissible auxiliary choice (X, Y), the synthetic value from incidence
/// tables must match the production harmonic conjugate, and must differ
/// from C.
pub fn verify_harmonic_choice_independence(
    pol: &Polarity,
    cfg: &CheckConfig,
) -> Result<Report, GeometryError> {
    if pol.ambient() != 3 {
        return Err(GeometryError::WrongAmbient(3));
    }
    let inc = PlaneIncidence::build(pol.descriptor(), cfg)?;
    let np = inc.points.len();
    let nl = inc.lines.len();

    let per_line = crate::run::map_range(nl, cfg.parallel, |li| {
        let mut tuples = 0u64;
        let on_l: Vec<usize> = (0..np).filter(|&pi| inc.on_line(li, pi)).collect();
        let off_l: Vec<usize> = (0..np).filter(|&pi| !inc.on_line(li, pi)).collect();
        for (ai, &p) in on_l.iter().enumerate() {
            for &q in &on_l[ai + 1..] {
                for &c in &on_l {
                    if c == p || c == q {
                        continue;
                    }
                    let expected =
                        harmonic_conjugate(pol, &inc.points[c], &inc.points[p], &inc.points[q])
                            .expect("admissible harmonic inputs");
                    let expected_idx = inc.point_index(&expected);
                    // conjugation is symmetric in P and Q
                    let swapped =
                        harmonic_conjugate(pol, &inc.points[c], &inc.points[q], &inc.points[p])
                            .unwrap();
                    if inc.point_index(&swapped) != expected_idx {
                        return Err(format!("pq_symmetry c={} line={}", inc.points[c], li));
                    }
                    if expected_idx == c {
                        return Err(format!("conjugate_equals_c c={}", inc.points[c]));
                    }
                    for &x in &off_l {
                        let xp = inc.join(x, p);
                        for y in 0..np {
                            if y == x || y == p || !inc.on_line(xp, y) {
                                continue;
                            }
                            tuples += 1;
                            let got = inc.harmonic(li, c, p, q, x, y);
                            if got != expected_idx {
                                return Err(format!(
                                    "c={} p={} q={} x={} y={}",
                                    inc.points[c],
                                    inc.points[p],
                                    inc.points[q],
                                    inc.points[x],
                                    inc.points[y]
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(tuples)
    });

    let mut report = Report::new();
    let mut total = 0u64;
    let mut witness = None;
    for outcome in per_line {
        match outcome {
            Ok(t) => total += t,
            Err(w) => {
                witness = Some(w);
                break;
            }
        }
    }
    report.note("lines", nl);
    report.note("tuples", total);
    report.check("harmonic_choice_independence", witness.is_none(), witness);
    Ok(report)
}
