//! Hermitian forms and their perp geometry: closure, orthomodularity,
//! anisotropy, orthogonalization, projection, involution rescaling, and
//! norm equivalence of represented values.
//!
//! The form is evaluated as sum_ij x_i * g[i][j] * y_j-star, left
//! coefficients first, so sesquilinearity holds verbatim over the
//! quaternions. Alternate (symplectic) grams over identity involutions are
//! admitted alongside Hermitian ones; both are reflexive, which is all the
//! perp map needs.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{
    self, enumerate_nonzero_vectors, enumerate_subspaces, left_row_kernel, random_subspace,
    LinalgError, Subspace, Vector,
};
use crate::run::{find_first_range, CheckConfig, Mode, ModeChoice, SplitMix64};
use crate::scalar::{FieldDescriptor, FieldKind, Involution, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("gram matrix must be {0}x{0}")]
    BadShape(usize),
    #[error("gram entry ({0},{1}) breaks both the Hermitian and the alternate symmetry")]
    NotReflexive(usize, usize),
    #[error("gram matrix is singular")]
    Singular,
    #[error("zero scalar where a nonzero one is required")]
    ZeroScalar,
    #[error("scalar {0} is not symmetric")]
    NotSymmetric(String),
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("isotropic pivot with witness {0}")]
    IsotropicPivot(Vector),
    #[error("subspace is not orthomodular, witness {0}")]
    ProjectionHypothesis(Subspace),
    #[error("exhaustive mode requires an enumerable (prime) field")]
    NotEnumerable,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Verdict of the anisotropy check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnisotropyVerdict {
    Anisotropic,
    Isotropic(Vector),
    Unknown,
}

impl AnisotropyVerdict {
    pub fn is_anisotropic(&self) -> bool {
        matches!(self, AnisotropyVerdict::Anisotropic)
    }
}

/// Result of a universally quantified space-level check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceCheck {
    pub holds: bool,
    pub witness: Option<Subspace>,
    pub mode: Mode,
}

/// Norm-equivalence verdict for lambda = rho mu rho*.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum NormEquiv {
    Equivalent(Scalar),
    Inequivalent,
    Unknown,
}

impl NormEquiv {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, NormEquiv::Equivalent(_))
    }
}

/// Hermitian/symplectic dichotomy of the induced polarity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormClass {
    HermitianCase(Vector),
    SymplecticCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// A nonsingular reflexive form on K^dim given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianSpace {
    desc: FieldDescriptor,
    dim: usize,
    gram: Vec<Vec<Scalar>>,
    alternate: bool,
}

impl HermitianSpace {
    pub fn new(desc: FieldDescriptor, gram: Vec<Vec<Scalar>>) -> Result<Self, SpaceError> {
        let dim = gram.len();
        if dim == 0 || gram.iter().any(|r| r.len() != dim) {
            return Err(SpaceError::BadShape(dim));
        }
        if gram.iter().flatten().any(|s| s.descriptor() != desc) {
            return Err(SpaceError::BadShape(dim));
        }
        let hermitian = (0..dim).all(|i| (0..dim).all(|j| gram[i][j].star() == gram[j][i]));
        let alternate = !hermitian
            && desc.involution == Involution::Identity
            && (0..dim)
                .all(|i| gram[i][i].is_zero() && (0..dim).all(|j| gram[j][i] == gram[i][j].neg()));
        if !hermitian && !alternate {
            let (i, j) = (0..dim)
                .flat_map(|i| (0..dim).map(move |j| (i, j)))
                .find(|&(i, j)| gram[i][j].star() != gram[j][i])
                .unwrap();
            return Err(SpaceError::NotReflexive(i, j));
        }
        let rows: Vec<Vector> = gram.iter().map(|r| Vector::new(desc, r.clone())).collect();
        if Subspace::span(desc, dim, rows).dim() != dim {
            return Err(SpaceError::Singular);
        }
        Ok(HermitianSpace {
            desc,
            dim,
            gram,
            alternate,
        })
    }

    pub fn identity_gram(desc: FieldDescriptor, dim: usize) -> HermitianSpace {
        HermitianSpace::diagonal_from_integers(desc, &vec![1; dim])
    }

    pub fn diagonal_from_integers(desc: FieldDescriptor, entries: &[i64]) -> HermitianSpace {
        let dim = entries.len();
        let mut gram = vec![vec![Scalar::zero(desc); dim]; dim];
        for (i, &e) in entries.iter().enumerate() {
            gram[i][i] = Scalar::from_integer(desc, e);
        }
        HermitianSpace::new(desc, gram).expect("diagonal gram with nonzero entries")
    }

    pub fn from_integer_gram(desc: FieldDescriptor, rows: &[&[i64]]) -> Result<Self, SpaceError> {
        let gram = rows
            .iter()
            .map(|r| r.iter().map(|&e| Scalar::from_integer(desc, e)).collect())
            .collect();
        HermitianSpace::new(desc, gram)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.desc
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &[Vec<Scalar>] {
        &self.gram
    }

    pub fn is_alternate(&self) -> bool {
        self.alternate
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.desc, self.dim)
    }

    pub fn zero_subspace(&self) -> Subspace {
        Subspace::zero(self.desc, self.dim)
    }

    /// <x, y> = sum_ij x_i * g[i][j] * y_j-star.
    pub fn form_eval(&self, x: &Vector, y: &Vector) -> Scalar {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut acc = Scalar::zero(self.desc);
        for i in 0..self.dim {
            if x.get(i).is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if self.gram[i][j].is_zero() || y.get(j).is_zero() {
                    continue;
                }
                acc = acc.add(&x.get(i).mul(&self.gram[i][j]).mul(&y.get(j).star()));
            }
        }
        acc
    }

    pub fn self_form(&self, x: &Vector) -> Scalar {
        self.form_eval(x, x)
    }

    pub fn orthogonal(&self, x: &Vector, y: &Vector) -> bool {
        self.form_eval(x, y).is_zero()
    }

    /// S-perp: the full solution subspace of <x, s> = 0 for s in M.
    pub fn perp(&self, m: &Subspace) -> Subspace {
        assert_eq!(m.ambient(), self.dim);
        let k = m.dim();
        // Condition matrix row i holds sum_j g[i][j] * b_t[j]* for each basis
        // vector b_t of M; x is in M-perp iff x annihilates every column.
        let rows: Vec<Vector> = (0..self.dim)
            .map(|i| {
                let coords = (0..k)
                    .map(|t| {
                        let mut acc = Scalar::zero(self.desc);
                        for j in 0..self.dim {
                            if self.gram[i][j].is_zero() || m.basis()[t].get(j).is_zero() {
                                continue;
                            }
                            acc = acc.add(&self.gram[i][j].mul(&m.basis()[t].get(j).star()));
                        }
                        acc
                    })
                    .collect();
                Vector::new(self.desc, coords)
            })
            .collect();
        left_row_kernel(self.desc, k, &rows)
    }

    pub fn closure(&self, m: &Subspace) -> Subspace {
        self.perp(&self.perp(m))
    }

    pub fn is_closed(&self, m: &Subspace) -> bool {
        self.closure(m) == *m
    }

    /// Does M (closed first) satisfy M + M-perp = E?
    pub fn check_orthomodular_subspace(&self, m: &Subspace) -> bool {
        let mc = self.closure(m);
        let p = self.perp(&mc);
        mc.sum(&p).expect("same ambient").is_full()
    }

    /// Auto mode enumerates when the field is prime and the subspace count
    /// fits the cap, and falls back to sampling (labelled) otherwise.
    /// Explicit exhaustive mode refuses instead of sampling.
    fn resolve_mode(&self, cfg: &CheckConfig) -> Result<Mode, SpaceError> {
        let count = self
            .desc
            .modulus
            .map(|p| linalg::count_subspaces(p, self.dim));
        match (cfg.mode, count) {
            (ModeChoice::Sampled, _) => Ok(Mode::Sampled),
            (ModeChoice::Exhaustive, None) => Err(SpaceError::NotEnumerable),
            (ModeChoice::Exhaustive, Some(n)) if n > cfg.cap as u128 => {
                Err(SpaceError::Linalg(LinalgError::CapExceeded(n, cfg.cap)))
            }
            (ModeChoice::Exhaustive, Some(_)) => Ok(Mode::Exhaustive),
            (ModeChoice::Auto, Some(n)) if n <= cfg.cap as u128 => Ok(Mode::Exhaustive),
            (ModeChoice::Auto, _) => Ok(Mode::Sampled),
        }
    }

    /// All subspaces (prime fields, within cap).
    pub fn all_subspaces(&self, cfg: &CheckConfig) -> Result<Vec<Subspace>, SpaceError> {
        Ok(enumerate_subspaces(self.desc, self.dim, cfg.cap)?)
    }

    /// Deterministic sampled subspace pool.
    pub fn sampled_subspaces(&self, cfg: &CheckConfig) -> Vec<Subspace> {
        let mut rng = SplitMix64::new(cfg.seed);
        (0..cfg.samples)
            .map(|_| random_subspace(self.desc, self.dim, &mut rng))
            .collect()
    }

    fn subspace_pool(&self, cfg: &CheckConfig) -> Result<(Vec<Subspace>, Mode), SpaceError> {
        let mode = self.resolve_mode(cfg)?;
        let pool = match mode {
            Mode::Exhaustive => self.all_subspaces(cfg)?,
            Mode::Sampled => self.sampled_subspaces(cfg),
        };
        Ok((pool, mode))
    }

    /// The universal quantification of the subspace check: exhaustive over
    /// prime fields within the cap, sampled otherwise.
    pub fn check_orthomodular_space(&self, cfg: &CheckConfig) -> Result<SpaceCheck, SpaceError> {
        let (pool, mode) = self.subspace_pool(cfg)?;
        let witness = find_first_range(pool.len(), cfg.parallel, |i| {
            (!self.check_orthomodular_subspace(&pool[i])).then(|| pool[i].clone())
        });
        Ok(SpaceCheck {
            holds: witness.is_none(),
            witness,
            mode,
        })
    }

    /// Gram-Schmidt on the standard basis. Either an orthogonal basis with
    /// its (rational) diagonal values, or a nonzero isotropic witness.
    fn diagonalize(&self) -> Result<(Vec<Vector>, Vec<BigRational>), Vector> {
        let mut basis = Vec::with_capacity(self.dim);
        let mut diag = Vec::with_capacity(self.dim);
        for idx in 0..self.dim {
            let mut v = Vector::standard_basis(self.desc, self.dim, idx);
            for w in basis.iter() {
                let d: &Vector = w;
                let c = self
                    .form_eval(&v, d)
                    .mul(&self.self_form(d).invert().unwrap());
                v = v.sub(&d.scale_left(&c));
            }
            debug_assert!(!v.is_zero());
            let s = self.self_form(&v);
            if s.is_zero() {
                return Err(v);
            }
            diag.push(s.rational_part().expect("self-form values are symmetric"));
            basis.push(v);
        }
        Ok((basis, diag))
    }

    /// Definiteness sign when the diagonalization has uniform sign.
    pub fn definiteness(&self) -> Option<Sign> {
        if self.alternate {
            return None;
        }
        let (_, diag) = self.diagonalize().ok()?;
        if diag.iter().all(|d| d.is_positive()) {
            Some(Sign::Positive)
        } else if diag.iter().all(|d| d.is_negative()) {
            Some(Sign::Negative)
        } else {
            None
        }
    }

    /// Prime fields: exhaustive, never unknown. Infinite fields: diagonalize,
    /// uniform sign means anisotropic, otherwise a bounded witness search.
    pub fn anisotropy(&self, cfg: &CheckConfig) -> Result<AnisotropyVerdict, SpaceError> {
        if self.alternate {
            return Ok(AnisotropyVerdict::Isotropic(Vector::standard_basis(
                self.desc, self.dim, 0,
            )));
        }
        if self.desc.is_prime_field() {
            let vectors = enumerate_nonzero_vectors(self.desc, self.dim)?;
            if vectors.len() > cfg.cap {
                return Err(SpaceError::Linalg(LinalgError::CapExceeded(
                    vectors.len() as u128,
                    cfg.cap,
                )));
            }
            let witness = find_first_range(vectors.len(), cfg.parallel, |i| {
                self.self_form(&vectors[i])
                    .is_zero()
                    .then(|| vectors[i].clone())
            });
            return Ok(match witness {
                Some(w) => AnisotropyVerdict::Isotropic(w),
                None => AnisotropyVerdict::Anisotropic,
            });
        }
        let (basis, diag) = match self.diagonalize() {
            Err(witness) => return Ok(AnisotropyVerdict::Isotropic(witness)),
            Ok(pair) => pair,
        };
        if diag.iter().all(|d| d.is_positive()) || diag.iter().all(|d| d.is_negative()) {
            return Ok(AnisotropyVerdict::Anisotropic);
        }
        Ok(self.isotropy_search(&basis, &diag))
    }

    /// Mixed-sign diagonal: search sum n_l d_l = 0 with n_l ranging over the
    /// norm values of small field elements, mapping any hit back to a vector.
    fn isotropy_search(&self, basis: &[Vector], diag: &[BigRational]) -> AnisotropyVerdict {
        match self.desc.kind {
            FieldKind::RationalQuaternion => {
                // Norms are all nonnegative rationals: a mixed-sign diagonal is
                // always isotropic, via a four-square witness.
                let i = diag.iter().position(|d| d.is_positive()).unwrap();
                let j = diag.iter().position(|d| d.is_negative()).unwrap();
                // need N(rho) = -d_j / d_i > 0
                let target = -&diag[j] / &diag[i];
                let (num, den) = (target.numer().clone(), target.denom().clone());
                let Some(nd) = (&num * &den).to_u64() else {
                    return AnisotropyVerdict::Unknown;
                };
                let Some([a, b, c, d]) = four_squares(nd) else {
                    return AnisotropyVerdict::Unknown;
                };
                let rho = Scalar::from_components(
                    self.desc,
                    &[
                        BigRational::new(a.into(), den.clone()),
                        BigRational::new(b.into(), den.clone()),
                        BigRational::new(c.into(), den.clone()),
                        BigRational::new(d.into(), den),
                    ],
                );
                let witness = basis[i].scale_left(&rho).add(&basis[j]);
                debug_assert!(self.self_form(&witness).is_zero());
                AnisotropyVerdict::Isotropic(witness)
            }
            FieldKind::Rational | FieldKind::GaussianRational => {
                // Attainable norms of height-bounded elements, with witnesses.
                let mut norm_values: Vec<(BigRational, Scalar)> = Vec::new();
                if self.desc.kind == FieldKind::Rational {
                    for a in 0..=6i64 {
                        norm_values.push((
                            BigRational::from_integer((a * a).into()),
                            Scalar::from_integer(self.desc, a),
                        ));
                    }
                } else {
                    for a in 0..=4i64 {
                        for b in 0..=4i64 {
                            let s = Scalar::from_components(
                                self.desc,
                                &[
                                    BigRational::from_integer(a.into()),
                                    BigRational::from_integer(b.into()),
                                ],
                            );
                            norm_values
                                .push((BigRational::from_integer((a * a + b * b).into()), s));
                        }
                    }
                    norm_values.sort_by(|x, y| x.0.cmp(&y.0));
                    norm_values.dedup_by(|x, y| x.0 == y.0);
                }
                let mut choice = vec![0usize; diag.len()];
                loop {
                    let total: BigRational = diag
                        .iter()
                        .zip(&choice)
                        .map(|(d, &c)| d * &norm_values[c].0)
                        .sum();
                    if total.is_zero() && choice.iter().any(|&c| !norm_values[c].0.is_zero()) {
                        let mut witness = Vector::zero(self.desc, self.dim);
                        for (l, &c) in choice.iter().enumerate() {
                            witness = witness.add(&basis[l].scale_left(&norm_values[c].1));
                        }
                        debug_assert!(self.self_form(&witness).is_zero());
                        return AnisotropyVerdict::Isotropic(witness);
                    }
                    let mut idx = 0usize;
                    loop {
                        if idx == choice.len() {
                            return AnisotropyVerdict::Unknown;
                        }
                        choice[idx] += 1;
                        if choice[idx] < norm_values.len() {
                            break;
                        }
                        choice[idx] = 0;
                        idx += 1;
                    }
                }
            }
            FieldKind::PrimeField => unreachable!("prime fields are handled exhaustively"),
        }
    }

    /// Repeated subtraction z = u - <u, x><x, x>^-1 x over the accumulated
    /// orthogonal prefix; zero intermediates (dependent inputs) are dropped.
    pub fn orthogonalize(&self, vectors: &[Vector]) -> Result<Vec<Vector>, SpaceError> {
        let mut out: Vec<Vector> = Vec::new();
        for u in vectors {
            if u.len() != self.dim {
                return Err(SpaceError::DimensionMismatch);
            }
            let mut z = u.clone();
            for x in &out {
                let c = self
                    .form_eval(&z, x)
                    .mul(&self.self_form(x).invert().unwrap());
                z = z.sub(&x.scale_left(&c));
            }
            if z.is_zero() {
                continue;
            }
            if self.self_form(&z).is_zero() {
                return Err(SpaceError::IsotropicPivot(z));
            }
            out.push(z);
        }
        Ok(out)
    }

    /// Unique decomposition x = m + m_perp for orthomodular M.
    pub fn project(&self, m: &Subspace, x: &Vector) -> Result<(Vector, Vector), SpaceError> {
        let mc = self.closure(m);
        let p = self.perp(&mc);
        if !mc.intersect(&p)?.is_zero() || !mc.sum(&p)?.is_full() {
            return Err(SpaceError::ProjectionHypothesis(mc));
        }
        let mut rows = mc.basis().to_vec();
        rows.extend(p.basis().iter().cloned());
        let coeffs = linalg::express(&rows, x).expect("M + M-perp covers the space");
        let mut part = Vector::zero(self.desc, self.dim);
        for (row, coeff) in mc.basis().iter().zip(&coeffs) {
            part = part.add(&row.scale_left(coeff));
        }
        let rest = x.sub(&part);
        debug_assert!(p.contains(&rest));
        Ok((part, rest))
    }

    /// New involution rho# = lambda rho* lambda^-1 and form [x,y] = <x,y> lambda^-1.
    pub fn rescale(&self, lambda: &Scalar) -> Result<RescaledStructure, SpaceError> {
        if lambda.is_zero() {
            return Err(SpaceError::ZeroScalar);
        }
        if !lambda.is_symmetric() {
            return Err(SpaceError::NotSymmetric(lambda.to_string()));
        }
        // Symmetric elements of the four supported fields are central.
        assert!(lambda.is_central());
        let inv = lambda.invert().unwrap();
        let gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(|g| g.mul(&inv)).collect())
            .collect();
        let space = HermitianSpace::new(self.desc, gram)?;
        Ok(RescaledStructure {
            lambda: lambda.clone(),
            space,
        })
    }

    /// lambda = rho mu rho* for some nonzero rho?
    pub fn norm_equiv(
        &self,
        lambda: &Scalar,
        mu: &Scalar,
        _cfg: &CheckConfig,
    ) -> Result<NormEquiv, SpaceError> {
        for s in [lambda, mu] {
            if !s.is_symmetric() {
                return Err(SpaceError::NotSymmetric(s.to_string()));
            }
        }
        if lambda == mu {
            return Ok(NormEquiv::Equivalent(Scalar::one(self.desc)));
        }
        if lambda.is_zero() || mu.is_zero() {
            return Ok(NormEquiv::Inequivalent);
        }
        match self.desc.kind {
            FieldKind::PrimeField => {
                let p = self.desc.modulus.unwrap();
                for r in 1..p {
                    let rho = Scalar::residue(self.desc, r);
                    if rho.mul(mu).mul(&rho.star()) == *lambda {
                        return Ok(NormEquiv::Equivalent(rho));
                    }
                }
                Ok(NormEquiv::Inequivalent)
            }
            FieldKind::Rational => {
                let ratio = lambda.rational_part().unwrap() / mu.rational_part().unwrap();
                if ratio.is_negative() {
                    return Ok(NormEquiv::Inequivalent);
                }
                let (n, d) = (ratio.numer().clone(), ratio.denom().clone());
                match (exact_sqrt(&n), exact_sqrt(&d)) {
                    (Some(sn), Some(sd)) => Ok(NormEquiv::Equivalent(Scalar::from_rational(
                        self.desc,
                        BigRational::new(sn, sd),
                    ))),
                    _ => Ok(NormEquiv::Inequivalent),
                }
            }
            FieldKind::GaussianRational => {
                let ratio = lambda.rational_part().unwrap() / mu.rational_part().unwrap();
                if ratio.is_negative() {
                    return Ok(NormEquiv::Inequivalent);
                }
                let (n, d) = (ratio.numer().clone(), ratio.denom().clone());
                let Some(nd) = (&n * &d).to_u64().filter(|&v| v <= 100_000_000) else {
                    return Ok(NormEquiv::Unknown);
                };
                match two_squares(nd) {
                    Some([a, b]) => {
                        let den = d;
                        let rho = Scalar::from_components(
                            self.desc,
                            &[
                                BigRational::new(a.into(), den.clone()),
                                BigRational::new(b.into(), den),
                            ],
                        );
                        debug_assert_eq!(rho.mul(mu).mul(&rho.star()), *lambda);
                        Ok(NormEquiv::Equivalent(rho))
                    }
                    None => Ok(NormEquiv::Inequivalent),
                }
            }
            FieldKind::RationalQuaternion => {
                let ratio = lambda.rational_part().unwrap() / mu.rational_part().unwrap();
                if ratio.is_negative() {
                    return Ok(NormEquiv::Inequivalent);
                }
                let (n, d) = (ratio.numer().clone(), ratio.denom().clone());
                let Some(nd) = (&n * &d).to_u64().filter(|&v| v <= 1_000_000) else {
                    return Ok(NormEquiv::Unknown);
                };
                match four_squares(nd) {
                    Some([a, b, c, e]) => {
                        let den = d;
                        let rho = Scalar::from_components(
                            self.desc,
                            &[
                                BigRational::new(a.into(), den.clone()),
                                BigRational::new(b.into(), den.clone()),
                                BigRational::new(c.into(), den.clone()),
                                BigRational::new(e.into(), den),
                            ],
                        );
                        debug_assert_eq!(rho.mul(mu).mul(&rho.star()), *lambda);
                        Ok(NormEquiv::Equivalent(rho))
                    }
                    None => Ok(NormEquiv::Unknown),
                }
            }
        }
    }

    /// Symplectic iff <x,x> = 0 on a spanning scan set (basis, pairwise sums,
    /// and unit-twisted pairs over conjugation involutions).
    pub fn classify_form(&self) -> FormClass {
        let mut scan: Vec<Vector> = (0..self.dim)
            .map(|i| Vector::standard_basis(self.desc, self.dim, i))
            .collect();
        let units: &[usize] = match self.desc.kind {
            FieldKind::GaussianRational => &[1],
            FieldKind::RationalQuaternion => &[1, 2, 3],
            _ => &[],
        };
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let ei = Vector::standard_basis(self.desc, self.dim, i);
                let ej = Vector::standard_basis(self.desc, self.dim, j);
                scan.push(ei.add(&ej));
                for &u in units {
                    scan.push(ei.add(&ej.scale_left(&Scalar::unit(self.desc, u))));
                }
            }
        }
        for v in scan {
            if !self.self_form(&v).is_zero() {
                return FormClass::HermitianCase(v);
            }
        }
        FormClass::SymplecticCase
    }
}

/// The rescaled structure: twisted involution and rescaled form.
#[derive(Debug, Clone)]
pub struct RescaledStructure {
    pub lambda: Scalar,
    space: HermitianSpace,
}

impl RescaledStructure {
    /// rho# = lambda rho* lambda^-1.
    pub fn twisted_star(&self, rho: &Scalar) -> Scalar {
        self.lambda
            .mul(&rho.star())
            .mul(&self.lambda.invert().unwrap())
    }

    /// [x, y] = <x, y> lambda^-1.
    pub fn form_eval(&self, x: &Vector, y: &Vector) -> Scalar {
        self.space.form_eval(x, y)
    }

    pub fn rescaled_space(&self) -> &HermitianSpace {
        &self.space
    }

    pub fn perp(&self, m: &Subspace) -> Subspace {
        self.space.perp(m)
    }
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// n = a^2 + b^2 over the integers, by complete descent on a.
pub fn two_squares(n: u64) -> Option<[u64; 2]> {
    let mut a = 0u64;
    while a * a <= n {
        let rem = n - a * a;
        let b = rem.sqrt();
        if b * b == rem {
            return Some([a, b]);
        }
        a += 1;
    }
    None
}

/// n = a^2 + b^2 + c^2 + d^2; exists for every n >= 0.
pub fn four_squares(n: u64) -> Option<[u64; 4]> {
    let mut a = n.sqrt();
    loop {
        let rem_a = n - a * a;
        let mut b = rem_a.sqrt();
        loop {
            let rem_b = rem_a - b * b;
            if let Some([c, d]) = two_squares(rem_b) {
                return Some([a, b, c, d]);
            }
            if b == 0 {
                break;
            }
            b -= 1;
        }
        if a == 0 {
            return None;
        }
        a -= 1;
    }
}
