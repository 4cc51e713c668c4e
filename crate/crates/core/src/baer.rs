//! Matrix *-rings with the conjugate-transpose involution: annihilators
//! and their generating projections, relative equivalence of projections,
//! the normalization-witness search, and the coordinatization that turns
//! the ring into a Hermitian space over its corner *-field.
//!
//! A full matrix ring over one of our *-fields has the annihilator
//! property exactly when the standard form x1 x1* + ... + xn xn* is
//! anisotropic; the constructor verifies this and rejects the rest (for
//! example M2 over GF(5), where (1,2) is a null vector). The infinite and
//! separability factor properties have no finite carrier here and stay out
//! of the executable scope.

use num_rational::BigRational;
use thiserror::Error;

use crate::hermitian::{AnisotropyVerdict, HermitianSpace, NormEquiv, SpaceError};
use crate::linalg::{left_row_kernel, LinalgError, Subspace, Vector};
use crate::mat::SquareMatrix;
use crate::report::Report;
use crate::run::{CheckConfig, SplitMix64};
use crate::scalar::{FieldDescriptor, FieldKind, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("not a Baer *-ring: the standard form is isotropic, witness {0}")]
    NotBaer(String),
    #[error("anisotropy of the standard form could not be decided")]
    BaerUndecided,
    #[error("element is not a projection: {0}")]
    NotAProjection(String),
    #[error("element must be nonzero")]
    ZeroElement,
    #[error("element is not row-compressed (x != e0 x)")]
    NotCompressed,
    #[error("annihilator set must be nonempty")]
    EmptySet,
    #[error("matrix size mismatch")]
    SizeMismatch,
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The *-ring of n x n matrices over a *-field, involution = conjugate
/// transpose.
#[derive(Debug, Clone)]
pub struct MatStarRing {
    desc: FieldDescriptor,
    n: usize,
    standard: HermitianSpace,
}

/// Right annihilator as a right ideal: common right kernel plus the
/// projection generating it.
#[derive(Debug, Clone)]
pub struct RightAnnihilator {
    /// Column vectors spanning the common right kernel.
    pub kernel_columns: Vec<Vector>,
    /// The projection e with RtAnn(S) = eA.
    pub generator: SquareMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivVerdict {
    Witness(SquareMatrix),
    NoWitness,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum EpVerdict {
    /// The symmetric corner witness lambda with lambda <x,x> lambda = 1.
    Witness(Scalar),
    NoWitness,
    Unknown,
}

impl MatStarRing {
    pub fn new(
        desc: FieldDescriptor,
        n: usize,
        cfg: &CheckConfig,
    ) -> Result<MatStarRing, RingError> {
        assert!(n >= 1);
        let standard = HermitianSpace::identity_gram(desc, n);
        match standard.anisotropy(cfg)? {
            AnisotropyVerdict::Anisotropic => {}
            AnisotropyVerdict::Isotropic(w) => return Err(RingError::NotBaer(w.to_string())),
            AnisotropyVerdict::Unknown => return Err(RingError::BaerUndecided),
        }
        Ok(MatStarRing { desc, n, standard })
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.desc
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> SquareMatrix {
        SquareMatrix::identity(self.desc, self.n)
    }

    pub fn zero(&self) -> SquareMatrix {
        SquareMatrix::zero(self.desc, self.n)
    }

    pub fn unit(&self, i: usize, j: usize) -> SquareMatrix {
        SquareMatrix::unit(self.desc, self.n, i, j)
    }

    /// The distinguished minimal projection e0 = E11.
    pub fn minimal_projection(&self) -> SquareMatrix {
        self.unit(0, 0)
    }

    pub fn is_projection(&self, x: &SquareMatrix) -> bool {
        x.is_projection()
    }

    /// Minimal projections of a matrix ring are exactly the rank-one ones.
    pub fn is_minimal_projection(&self, e: &SquareMatrix) -> bool {
        e.is_projection() && e.rank() == 1
    }

    /// Right kernel {v : s v = 0} of one matrix, as column vectors.
    fn right_kernel(&self, s: &SquareMatrix) -> Subspace {
        // v is in the right kernel iff the starred row w (w_j = v_j*) lies in
        // the left row kernel of the conjugate transpose.
        left_row_kernel(self.desc, self.n, &s.star().rows_as_vectors())
    }

    fn unstar(&self, rows: &Subspace) -> Vec<Vector> {
        rows.basis()
            .iter()
            .map(|w| Vector::new(self.desc, w.coords().iter().map(|c| c.star()).collect()))
            .collect()
    }

    /// Projection onto the span of the given columns: e = B (B* B)^-1 B*.
    fn projection_onto_columns(&self, cols: &[Vector]) -> SquareMatrix {
        if cols.is_empty() {
            return self.zero();
        }
        let k = cols.len();
        // B is n x k with the given columns.
        let bstar_b = {
            let mut g = vec![vec![Scalar::zero(self.desc); k]; k];
            for (i, gi) in g.iter_mut().enumerate() {
                for (j, gij) in gi.iter_mut().enumerate() {
                    let mut acc = Scalar::zero(self.desc);
                    for l in 0..self.n {
                        acc = acc.add(&cols[i].get(l).star().mul(cols[j].get(l)));
                    }
                    *gij = acc;
                }
            }
            // pad to a SquareMatrix of size k
            SquareMatrix::new(self.desc, g)
        };
        let ginv = bstar_b
            .invert()
            .expect("column gram is invertible over a Baer matrix ring");
        let mut e = self.zero();
        for r in 0..self.n {
            for c in 0..self.n {
                let mut acc = Scalar::zero(self.desc);
                for i in 0..k {
                    for j in 0..k {
                        acc = acc.add(
                            &cols[i]
                                .get(r)
                                .mul(ginv.get(i, j))
                                .mul(&cols[j].get(c).star()),
                        );
                    }
                }
                e.set(r, c, acc);
            }
        }
        debug_assert!(e.is_projection());
        e
    }

    /// RtAnn(S) = {x : s x = 0 for all s in S} = eA, with e verified on both
    /// inclusions.
    pub fn right_annihilator(&self, set: &[SquareMatrix]) -> Result<RightAnnihilator, RingError> {
        if set.is_empty() {
            return Err(RingError::EmptySet);
        }
        if set.iter().any(|s| s.size() != self.n) {
            return Err(RingError::SizeMismatch);
        }
        let mut kernel = self.right_kernel(&set[0]);
        for s in &set[1..] {
            kernel = kernel.intersect(&self.right_kernel(s))?;
        }
        let cols = self.unstar(&kernel);
        let e = self.projection_onto_columns(&cols);
        // eA is annihilated by S ...
        for s in set {
            assert!(s.mul(&e).is_zero(), "generator must lie in the annihilator");
        }
        // ... and e fixes the kernel columns, so RtAnn(S) = eA.
        for v in &cols {
            let mut ev = Vector::zero(self.desc, self.n);
            for r in 0..self.n {
                let mut acc = Scalar::zero(self.desc);
                for c in 0..self.n {
                    acc = acc.add(&e.get(r, c).mul(v.get(c)));
                }
                ev = {
                    let mut coords = ev.coords().to_vec();
                    coords[r] = acc;
                    Vector::new(self.desc, coords)
                };
            }
            assert_eq!(ev, *v, "generator must fix the annihilator columns");
        }
        Ok(RightAnnihilator {
            kernel_columns: cols,
            generator: e,
        })
    }

    /// Orthogonal column bases of the images of two projections, paired by
    /// norm equivalence, produce a partial isometry w with w*w = e and
    /// ww* = f. Exhaustive over small prime-field rings, tri-state
    /// otherwise.
    pub fn projections_equivalent(
        &self,
        e: &SquareMatrix,
        f: &SquareMatrix,
        cfg: &CheckConfig,
    ) -> Result<EquivVerdict, RingError> {
        for p in [e, f] {
            if !p.is_projection() {
                return Err(RingError::NotAProjection(p.to_string()));
            }
        }
        if e == f {
            return Ok(EquivVerdict::Witness(e.clone()));
        }
        if e.rank() != f.rank() {
            return Ok(EquivVerdict::NoWitness);
        }
        if let Some(p) = self.desc.modulus {
            let cells = (self.n * self.n) as u32;
            if let Some(total) = (p as u128).checked_pow(cells) {
                if total <= cfg.cap as u128 {
                    return Ok(self.equivalence_exhaustive(e, f, p));
                }
            }
        }
        self.equivalence_constructive(e, f, cfg)
    }

    fn equivalence_exhaustive(&self, e: &SquareMatrix, f: &SquareMatrix, p: u64) -> EquivVerdict {
        let cells = self.n * self.n;
        let mut digits = vec![0u64; cells];
        loop {
            let mut w = self.zero();
            for (idx, &d) in digits.iter().enumerate() {
                w.set(idx / self.n, idx % self.n, Scalar::residue(self.desc, d));
            }
            if w.star().mul(&w) == *e && w.mul(&w.star()) == *f {
                return EquivVerdict::Witness(w);
            }
            let mut i = 0usize;
            loop {
                if i == cells {
                    return EquivVerdict::NoWitness;
                }
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    fn equivalence_constructive(
        &self,
        e: &SquareMatrix,
        f: &SquareMatrix,
        cfg: &CheckConfig,
    ) -> Result<EquivVerdict, RingError> {
        let image_basis = |p: &SquareMatrix| -> Vec<Vector> {
            // rows of p span the image of the row action; columns of p span
            // the column image. We work with columns: p applied to the
            // standard columns.
            let cols: Vec<Vector> = (0..self.n)
                .map(|j| {
                    Vector::new(
                        self.desc,
                        (0..self.n).map(|i| p.get(i, j).clone()).collect(),
                    )
                })
                .collect();
            let span = Subspace::span(self.desc, self.n, cols);
            // orthogonalize in the standard form; columns of a projection
            // span a nonsingular subspace in a Baer matrix ring
            self.standard
                .orthogonalize(span.basis())
                .expect("projection image is anisotropic here")
        };
        let us = image_basis(e);
        let vs = image_basis(f);
        debug_assert_eq!(us.len(), vs.len());
        // w = sum_i v_i alpha_i u_i* with alpha_i* <u_i,u_i>-norm-matched
        let mut w = self.zero();
        for (u, v) in us.iter().zip(vs.iter()) {
            let nu = self.standard.self_form(u);
            let mv = self.standard.self_form(v);
            // need alpha* m alpha = n^-1, i.e. norm_equiv(n^-1, m) with
            // witness rho = alpha*
            let target = nu.invert().expect("anisotropic norm");
            match self.standard.norm_equiv(&target, &mv, cfg)? {
                NormEquiv::Equivalent(rho) => {
                    let alpha = rho.star();
                    for r in 0..self.n {
                        for c in 0..self.n {
                            let add = v.get(r).mul(&alpha).mul(&u.get(c).star());
                            let cur = w.get(r, c).add(&add);
                            w.set(r, c, cur);
                        }
                    }
                }
                NormEquiv::Inequivalent => return Ok(EquivVerdict::NoWitness),
                NormEquiv::Unknown => return Ok(EquivVerdict::Unknown),
            }
        }
        if w.star().mul(&w) == *e && w.mul(&w.star()) == *f {
            Ok(EquivVerdict::Witness(w))
        } else {
            // frame pairing can fail even when some other witness exists
            Ok(EquivVerdict::Unknown)
        }
    }

    /// Normalization witness for a row-compressed nonzero x = e0 x: a
    /// symmetric corner element lambda with lambda <x,x> lambda = 1, which
    /// extends to the EP-style y = lambda e0 + (1 - e0). The double
    /// commutation is verified against a generating set of the commutant.
    pub fn ep_witness(&self, x: &SquareMatrix, cfg: &CheckConfig) -> Result<EpVerdict, RingError> {
        if x.is_zero() {
            return Err(RingError::ZeroElement);
        }
        let e0 = self.minimal_projection();
        if e0.mul(x) != *x {
            return Err(RingError::NotCompressed);
        }
        let row = x.row(0);
        let norm = self.standard.self_form(&row);
        debug_assert!(!norm.is_zero(), "anisotropy of the standard form");
        // lambda norm lambda = 1 with lambda symmetric: norm_equiv(1, norm^-1)
        // restricted to symmetric witnesses; over the commutative identity
        // fields this is exactly the square test on norm^-1.
        let verdict = match self.desc.kind {
            FieldKind::PrimeField => {
                let p = self.desc.modulus.unwrap();
                let hit = (1..p)
                    .map(|v| Scalar::residue(self.desc, v))
                    .find(|lam| lam.mul(&norm).mul(lam).is_one());
                match hit {
                    Some(lam) => EpVerdict::Witness(lam),
                    None => EpVerdict::NoWitness,
                }
            }
            _ => {
                // norm is a symmetric (rational) value; lambda must be
                // rational too, so lambda^2 = norm^-1 exactly.
                let ninv = norm.rational_part().expect("self-form is symmetric");
                if !num_traits::Signed::is_positive(&ninv) {
                    EpVerdict::NoWitness
                } else {
                    let inv = BigRational::new(ninv.denom().clone(), ninv.numer().clone());
                    match rational_sqrt(&inv) {
                        Some(lam) => EpVerdict::Witness(Scalar::from_rational(self.desc, lam)),
                        None => EpVerdict::NoWitness,
                    }
                }
            }
        };
        if let EpVerdict::Witness(lam) = &verdict {
            // ... doubly checked: y = lam e0 + (1 - e0) is symmetric, makes
            // x x* y^2 a nonzero projection, and commutes with the commutant
            // generators of x x*.
            let y = e0.scale_left(lam).add(&self.identity().sub(&e0));
            assert_eq!(y.star(), y);
            let xxs = x.mul(&x.star());
            let proj = xxs.mul(&y.mul(&y));
            assert!(proj.is_projection() && !proj.is_zero());
            let mut commutant_gens = vec![e0.clone(), self.identity()];
            for i in 1..self.n {
                for j in 1..self.n {
                    commutant_gens.push(self.unit(i, j));
                }
            }
            let _ = cfg;
            for c in &commutant_gens {
                if c.mul(&xxs) == xxs.mul(c) {
                    assert_eq!(c.mul(&y), y.mul(c), "EP witness must doubly commute");
                }
            }
        }
        Ok(verdict)
    }

    /// The corner coordinatization: K = e0 A e0, E = e0 A with
    /// <x, y> = e0 a b* e0, which lands on the identity-gram space K^n.
    pub fn coordinatize(&self) -> Coordinatization {
        Coordinatization {
            ring: self.clone(),
            space: self.standard.clone(),
        }
    }
}

/// The Hermitian space carried by the row e0 A of a matrix *-ring, plus the
/// verification transcript of the embedding identities.
#[derive(Debug, Clone)]
pub struct Coordinatization {
    ring: MatStarRing,
    space: HermitianSpace,
}

impl Coordinatization {
    pub fn space(&self) -> &HermitianSpace {
        &self.space
    }

    pub fn ring(&self) -> &MatStarRing {
        &self.ring
    }

    /// The form on row-compressed elements: <e0 a, e0 b> = e0 a b* e0 as a
    /// corner scalar.
    pub fn form_from_ring(&self, a: &SquareMatrix, b: &SquareMatrix) -> Scalar {
        let prod = a.mul(&b.star());
        prod.get(0, 0).clone()
    }

    /// Row vector to the compressed ring element carrying it.
    pub fn embed_row(&self, v: &Vector) -> SquareMatrix {
        let n = self.ring.n;
        let mut m = self.ring.zero();
        for j in 0..n {
            m.set(0, j, v.get(j).clone());
        }
        m
    }

    pub fn verify(&self, cfg: &CheckConfig) -> Report {
        let desc = self.ring.desc;
        let n = self.ring.n;
        let mut report = Report::new();
        let mut rng = SplitMix64::new(cfg.seed ^ 0xba3a);
        let rand_mat = |rng: &mut SplitMix64| {
            let rows = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| crate::linalg::random_scalar(desc, rng))
                        .collect()
                })
                .collect();
            SquareMatrix::new(desc, rows)
        };
        let e0 = self.ring.minimal_projection();

        // corner field: e0 a e0 is the (0,0) entry in the corner
        let mut corner_ok = true;
        let mut corner_witness = None;
        for _ in 0..10 {
            let a = rand_mat(&mut rng);
            let corner = e0.mul(&a).mul(&e0);
            let expected = e0.scale_left(a.get(0, 0));
            if corner != expected || corner.star() != e0.scale_left(&a.get(0, 0).star()) {
                corner_ok = false;
                corner_witness = Some(a.to_string());
                break;
            }
        }
        report.check("corner_field_isomorphism", corner_ok, corner_witness);

        // gram of the row space is the identity
        let mut gram_ok = true;
        for i in 0..n {
            for j in 0..n {
                let a = self.embed_row(&Vector::standard_basis(desc, n, i));
                let b = self.embed_row(&Vector::standard_basis(desc, n, j));
                let v = self.form_from_ring(&a, &b);
                let expected = if i == j {
                    Scalar::one(desc)
                } else {
                    Scalar::zero(desc)
                };
                gram_ok &= v == expected;
            }
        }
        report.check(
            "identity_gram",
            gram_ok,
            (!gram_ok).then(|| "basis".to_string()),
        );

        // anisotropy via x x* = 0 => x = 0, sampled
        let mut aniso_witness = None;
        for _ in 0..25 {
            let v = crate::linalg::random_vector(desc, n, &mut rng);
            let x = self.embed_row(&v);
            if x.mul(&x.star()).is_zero() != x.is_zero() {
                aniso_witness = Some(v.to_string());
                break;
            }
        }
        report.check("anisotropic_xxstar", aniso_witness.is_none(), aniso_witness);

        // hat embedding: right multiplication, star goes to adjoint
        let mut hat_witness = None;
        for _ in 0..10 {
            let xm = rand_mat(&mut rng);
            let u = crate::linalg::random_vector(desc, n, &mut rng);
            let v = crate::linalg::random_vector(desc, n, &mut rng);
            let lhs = self.space.form_eval(&xm.apply_row(&u), &v);
            let rhs = self.space.form_eval(&u, &xm.star().apply_row(&v));
            if lhs != rhs {
                hat_witness = Some(xm.to_string());
                break;
            }
        }
        report.check("hat_star_is_adjoint", hat_witness.is_none(), hat_witness);

        // rank-one realization: s = l* e0 m acts as <., e0 l> e0 m
        let mut rank1_witness = None;
        for _ in 0..10 {
            let l = rand_mat(&mut rng);
            let m = rand_mat(&mut rng);
            let s = l.star().mul(&e0).mul(&m);
            let a = crate::linalg::random_vector(desc, n, &mut rng);
            let lhs = s.apply_row(&a);
            let y = e0.mul(&l).row(0);
            let z = e0.mul(&m).row(0);
            let rhs = z.scale_left(&self.space.form_eval(&a, &y));
            if lhs != rhs {
                rank1_witness = Some(s.to_string());
                break;
            }
        }
        report.check(
            "rank_one_realization",
            rank1_witness.is_none(),
            rank1_witness,
        );

        // projections of the ring decompose the space: E = (E)e + (E)(1-e)
        let mut decomp_witness = None;
        for _ in 0..10 {
            let sub = crate::linalg::random_subspace(desc, n, &mut rng);
            if sub.is_zero() {
                continue;
            }
            // column projection onto the starred rows so the IMAGE of the
            // row action x -> x e is exactly `sub`
            let cols: Vec<Vector> = sub
                .basis()
                .iter()
                .map(|r| Vector::new(desc, r.coords().iter().map(|c| c.star()).collect()))
                .collect();
            let e = self.ring.projection_onto_columns(&cols);
            let image: Vec<Vector> = (0..n)
                .map(|i| e.apply_row(&Vector::standard_basis(desc, n, i)))
                .collect();
            let image_span = Subspace::span(desc, n, image);
            if image_span != sub {
                decomp_witness = Some(format!("image={}", image_span));
                break;
            }
            let co: Vec<Vector> = (0..n)
                .map(|i| {
                    self.ring
                        .identity()
                        .sub(&e)
                        .apply_row(&Vector::standard_basis(desc, n, i))
                })
                .collect();
            let co_span = Subspace::span(desc, n, co);
            let total = image_span.sum(&co_span).unwrap();
            if !total.is_full()
                || co_span != self.space.perp(&sub)
                || !image_span.intersect(&co_span).unwrap().is_zero()
            {
                decomp_witness = Some(sub.key());
                break;
            }
        }
        report.check(
            "projections_decompose_space",
            decomp_witness.is_none(),
            decomp_witness,
        );
        report
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    let (n, d) = (r.numer(), r.denom());
    if num_traits::Signed::is_negative(n) {
        return None;
    }
    let sn = n.sqrt();
    let sd = d.sqrt();
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}
