//! Question/state systems on finite orthomodular lattices: exact
//! probability measures, supports, purity, mixtures, the state axioms, and
//! the ample-unitary-group witness search.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::geometry::{GeometryError, ProjPoint};
use crate::hermitian::{HermitianSpace, NormEquiv, Sign, SpaceError};
use crate::lattice::{FiniteOML, LatticeError};
use crate::linalg::{LinalgError, Subspace, Vector};
use crate::mat::SquareMatrix;
use crate::report::Report;
use crate::run::CheckConfig;
use crate::scalar::{FieldKind, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QlogicError {
    #[error("vector states need a definite form")]
    IndefiniteForm,
    #[error("vector states need a commutative coefficient field")]
    NonCommutativeField,
    #[error("state vector must be nonzero")]
    ZeroVector,
    #[error("lattice is not backed by the given space")]
    SpaceMismatch,
    #[error("not a probability measure: {0}")]
    NotAMeasure(String),
    #[error("mixture weights must be positive with exact sum 1, got {0}")]
    WeightSum(String),
    #[error("state is not a member of the model")]
    UnknownState,
    #[error("model violates the support laws: {0}")]
    ModelViolation(String),
    #[error("the two atoms must be orthogonal")]
    NotOrthogonalAtoms,
    #[error("atom {0} is isotropic")]
    IsotropicAtom(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An exact probability measure on the elements of a finite OML.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    values: Vec<BigRational>,
}

fn validate_measure(lat: &FiniteOML, values: &[BigRational]) -> Result<(), QlogicError> {
    let n = lat.len();
    if values.len() != n {
        return Err(QlogicError::NotAMeasure("wrong length".into()));
    }
    if !values[lat.bottom()].is_zero() {
        return Err(QlogicError::NotAMeasure("m(0) != 0".into()));
    }
    if !values[lat.top()].is_one() {
        return Err(QlogicError::NotAMeasure("m(1) != 1".into()));
    }
    for (a, v) in values.iter().enumerate() {
        if v.is_negative() || v > &BigRational::one() {
            return Err(QlogicError::NotAMeasure(format!(
                "m({}) outside [0,1]",
                lat.label(a)
            )));
        }
        for b in 0..n {
            if lat.orthogonal(a, b) {
                let join = lat.join(a, b);
                let sum = v + &values[b];
                if values[join] != sum {
                    return Err(QlogicError::NotAMeasure(format!(
                        "additivity fails at {},{}",
                        lat.label(a),
                        lat.label(b)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The support of a state: the unique minimal element of measure 1, with
/// its orthocomplement as the maximal null element. Both characterizations
/// are verified and a failure is reported as a model violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Support {
    pub support: usize,
    pub max_null: usize,
}

impl State {
    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn value(&self, a: usize) -> &BigRational {
        &self.values[a]
    }

    pub fn from_values(lat: &FiniteOML, values: Vec<BigRational>) -> Result<State, QlogicError> {
        validate_measure(lat, &values)?;
        Ok(State { values })
    }

    /// m(M) = <P_M(x), x> / <x, x> on a form-backed lattice over a definite
    /// commutative form. Exact rationals throughout.
    pub fn vector_state(
        space: &HermitianSpace,
        lat: &FiniteOML,
        x: &Vector,
    ) -> Result<State, QlogicError> {
        let backing = lat.space().ok_or(QlogicError::SpaceMismatch)?;
        if backing.gram() != space.gram() || backing.descriptor() != space.descriptor() {
            return Err(QlogicError::SpaceMismatch);
        }
        if !matches!(
            space.descriptor().kind,
            FieldKind::Rational | FieldKind::GaussianRational
        ) {
            return Err(QlogicError::NonCommutativeField);
        }
        if space.definiteness().is_none() {
            return Err(QlogicError::IndefiniteForm);
        }
        let _ = Sign::Positive;
        if x.is_zero() {
            return Err(QlogicError::ZeroVector);
        }
        let denom = space
            .self_form(x)
            .rational_part()
            .expect("self-form values are symmetric");
        let values: Result<Vec<BigRational>, QlogicError> = (0..lat.len())
            .map(|a| {
                let m = lat.subspace(a).expect("form-backed lattice");
                let (proj, _) = space.project(m, x)?;
                let num = space
                    .form_eval(&proj, x)
                    .rational_part()
                    .expect("projection pairing is symmetric");
                Ok(num / &denom)
            })
            .collect();
        State::from_values(lat, values?)
    }

    /// The height-two atom state: 1 above the atom, 0 under its polar,
    /// 1/2 elsewhere. Validated, so misuse on deeper lattices is caught.
    pub fn atom_state(lat: &FiniteOML, atom: usize) -> Result<State, QlogicError> {
        let half = BigRational::new(1.into(), 2.into());
        let values = (0..lat.len())
            .map(|x| {
                if lat.le(atom, x) {
                    BigRational::one()
                } else if lat.le(x, lat.orthocomplement(atom)) {
                    BigRational::zero()
                } else {
                    half.clone()
                }
            })
            .collect();
        State::from_values(lat, values)
    }

    /// Pointwise convex combination; weights positive with exact sum 1.
    pub fn mixture(lat: &FiniteOML, parts: &[(BigRational, &State)]) -> Result<State, QlogicError> {
        let total: BigRational = parts.iter().map(|(w, _)| w.clone()).sum();
        if parts.iter().any(|(w, _)| !w.is_positive()) || !total.is_one() {
            return Err(QlogicError::WeightSum(total.to_string()));
        }
        let n = lat.len();
        let mut values = vec![BigRational::zero(); n];
        for (w, m) in parts {
            for (slot, v) in values.iter_mut().zip(m.values.iter()) {
                *slot += w * v;
            }
        }
        State::from_values(lat, values)
    }

    pub fn support(&self, lat: &FiniteOML) -> Result<Support, QlogicError> {
        let ones: Vec<usize> = (0..lat.len())
            .filter(|&x| self.values[x].is_one())
            .collect();
        debug_assert!(!ones.is_empty(), "m(1) = 1");
        let a = ones
            .iter()
            .copied()
            .fold(lat.top(), |acc, x| lat.meet(acc, x));
        for x in 0..lat.len() {
            let is_one = self.values[x].is_one();
            if is_one != lat.le(a, x) {
                return Err(QlogicError::ModelViolation(format!(
                    "m(x) = 1 iff x >= support fails at {}",
                    lat.label(x)
                )));
            }
        }
        let b = lat.orthocomplement(a);
        for x in 0..lat.len() {
            let is_zero = self.values[x].is_zero();
            if is_zero != lat.le(x, b) {
                return Err(QlogicError::ModelViolation(format!(
                    "m(x) = 0 iff x <= max-null fails at {}",
                    lat.label(x)
                )));
            }
        }
        Ok(Support {
            support: a,
            max_null: b,
        })
    }

    /// Purity through the atomic-support characterization.
    pub fn is_pure(&self, lat: &FiniteOML, model: &[State]) -> Result<bool, QlogicError> {
        if !model.iter().any(|m| m == self) {
            return Err(QlogicError::UnknownState);
        }
        let s = self.support(lat)?;
        Ok(lat.atoms().contains(&s.support))
    }

    /// A proper convex decomposition within the model, if one exists.
    pub fn decomposition_in_model<'a>(
        &self,
        model: &'a [State],
    ) -> Option<(&'a State, &'a State, BigRational)> {
        for m1 in model {
            for m2 in model {
                if m1 == self || m2 == self || m1 == m2 {
                    continue;
                }
                // solve self = t m1 + (1-t) m2 from the first separating slot
                let Some(i) = (0..self.values.len()).find(|&i| m1.values[i] != m2.values[i]) else {
                    continue;
                };
                let t = (&self.values[i] - &m2.values[i]) / (&m1.values[i] - &m2.values[i]);
                if !t.is_positive() || t >= BigRational::one() {
                    continue;
                }
                let one_minus = BigRational::one() - &t;
                let matches = (0..self.values.len())
                    .all(|j| self.values[j] == &t * &m1.values[j] + &one_minus * &m2.values[j]);
                if matches {
                    return Some((m1, m2, t));
                }
            }
        }
        None
    }
}

/// Largest pairwise-orthogonal family of nonzero elements, by branch and
/// bound (fine at enumerated scale).
fn max_orthogonal_family(lat: &FiniteOML) -> usize {
    let candidates: Vec<usize> = (0..lat.len()).filter(|&a| a != lat.bottom()).collect();
    fn recurse(lat: &FiniteOML, cands: &[usize], chosen: usize, best: &mut usize) {
        *best = (*best).max(chosen);
        if chosen + cands.len() <= *best {
            return;
        }
        for (i, &c) in cands.iter().enumerate() {
            let rest: Vec<usize> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&d| lat.orthogonal(c, d))
                .collect();
            recurse(lat, &rest, chosen + 1, best);
        }
    }
    let mut best = 0;
    recurse(lat, &candidates, 0, &mut best);
    best
}

/// The state-axiom suite over a finite model, with the lattice-property
/// cross-checks for the superposition axioms.
pub fn check_axioms(
    lat: &FiniteOML,
    model: &[State],
    _cfg: &CheckConfig,
) -> Result<Report, QlogicError> {
    let mut report = Report::new();
    let n = lat.len();

    report.note("max_orthogonal_family", max_orthogonal_family(lat));
    report.check("axiomA1_separable", true, None);

    let mut a2_witness = None;
    'a2: for (mi, m) in model.iter().enumerate() {
        for a in 0..n {
            for b in 0..n {
                if !m.values[a].is_zero() || !m.values[b].is_zero() {
                    continue;
                }
                let found = (0..n).any(|c| lat.le(a, c) && lat.le(b, c) && m.values[c].is_zero());
                if !found {
                    a2_witness = Some(format!("state{},{},{}", mi, lat.label(a), lat.label(b)));
                    break 'a2;
                }
            }
        }
    }
    report.check("axiomA2_null_join", a2_witness.is_none(), a2_witness);

    let mut purity = Vec::with_capacity(model.len());
    for m in model {
        purity.push(m.is_pure(lat, model)?);
    }

    // the atomic-support and convex-decomposition views of purity must
    // agree across the model
    let mut purity_witness = None;
    for (mi, m) in model.iter().enumerate() {
        let decomposable = m.decomposition_in_model(model).is_some();
        if purity[mi] == decomposable {
            purity_witness = Some(format!("state{mi}"));
            break;
        }
    }
    report.check(
        "purity_definitions_agree",
        purity_witness.is_none(),
        purity_witness,
    );

    let mut b1_witness = None;
    for a in 0..n {
        if a == lat.bottom() {
            continue;
        }
        let found = model
            .iter()
            .zip(&purity)
            .any(|(m, &pure)| pure && m.values[a].is_one());
        if !found {
            b1_witness = Some(lat.label(a).to_string());
            break;
        }
    }
    report.check(
        "axiomB1_pure_state_exists",
        b1_witness.is_none(),
        b1_witness,
    );

    let mut b2_witness = None;
    'b2: for (mi, m) in model.iter().enumerate() {
        if !purity[mi] {
            continue;
        }
        let s = m.support(lat)?;
        for (oi, other) in model.iter().enumerate() {
            if other.values[s.support].is_one() && other != m {
                b2_witness = Some(format!("state{mi},state{oi}"));
                break 'b2;
            }
        }
    }
    report.check(
        "axiomB2_unique_at_support",
        b2_witness.is_none(),
        b2_witness,
    );

    // fullness (m(a) <= m(b) for every model state implies a <= b) is a
    // property of the model, reported rather than assumed
    let mut full_witness = None;
    'full: for a in 0..n {
        for b in 0..n {
            if lat.le(a, b) {
                continue;
            }
            if model.iter().all(|m| m.values[a] <= m.values[b]) {
                full_witness = Some(format!("{},{}", lat.label(a), lat.label(b)));
                break 'full;
            }
        }
    }
    report.note("model_full", full_witness.is_none());
    if let Some(w) = full_witness {
        report.note("model_full_witness", w);
    }

    let atoms = lat.atoms();
    let mut c1_witness = None;
    'c1: for &a in atoms {
        for &b in atoms {
            if a == b {
                continue;
            }
            let line = lat.join(a, b);
            let found = atoms.iter().any(|&c| c != a && c != b && lat.le(c, line));
            if !found {
                c1_witness = Some(format!("{},{}", lat.label(a), lat.label(b)));
                break 'c1;
            }
        }
    }
    let c1 = c1_witness.is_none();
    report.check("axiomC1_superposition_exists", c1, c1_witness);

    let mut c2_witness = None;
    'c2: for &a in atoms {
        for &b in atoms {
            for &c in atoms {
                if a == b || b == c || a == c {
                    continue;
                }
                if lat.le(c, lat.join(a, b)) && !lat.le(a, lat.join(b, c)) {
                    c2_witness = Some(format!(
                        "{},{},{}",
                        lat.label(a),
                        lat.label(b),
                        lat.label(c)
                    ));
                    break 'c2;
                }
            }
        }
    }
    let c2 = c2_witness.is_none();
    report.check("axiomC2_symmetry", c2, c2_witness);

    // cross-checks against the lattice-theoretic properties
    let irreducible = lat.is_irreducible();
    report.check(
        "c1_implies_irreducible",
        !c1 || irreducible,
        (c1 && !irreducible).then(|| "C1_holds_but_center_is_larger".to_string()),
    );
    let covering = lat.covering_check(&CheckConfig::default()).passed();
    report.check(
        "c2_implies_covering",
        !c2 || covering,
        (c2 && !covering).then(|| "C2_holds_but_covering_fails".to_string()),
    );
    Ok(report)
}

/// Form preservation checked on all basis pairs, plus bijectivity.
pub fn check_unitary(space: &HermitianSpace, u: &SquareMatrix) -> bool {
    if u.size() != space.dim() || u.invert().is_none() {
        return false;
    }
    let n = space.dim();
    for i in 0..n {
        for j in 0..n {
            let ei = Vector::standard_basis(space.descriptor(), n, i);
            let ej = Vector::standard_basis(space.descriptor(), n, j);
            if space.form_eval(&u.apply_row(&ei), &u.apply_row(&ej)) != space.form_eval(&ei, &ej) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomDVerdict {
    Witness(SquareMatrix),
    NoWitness,
    Unknown,
}

/// Searches for a unitary mapping atom a to atom b (projectively): when the
/// self-form values are norm-equivalent via rho, the plane rotation
/// e -> rho f, f -> -(lambda^-1 rho mu)* e extended by the identity on the
/// orthocomplement is unitary; a definitive inequivalence rules any U out.
pub fn axiom_d_witness(
    space: &HermitianSpace,
    a: &ProjPoint,
    b: &ProjPoint,
    cfg: &CheckConfig,
) -> Result<AxiomDVerdict, QlogicError> {
    let e = a.rep().clone();
    let f = b.rep().clone();
    if !space.form_eval(&e, &f).is_zero() || a.subspace() == b.subspace() {
        return Err(QlogicError::NotOrthogonalAtoms);
    }
    let lambda = space.self_form(&e);
    let mu = space.self_form(&f);
    for (pt, v) in [(a, &lambda), (b, &mu)] {
        if v.is_zero() {
            return Err(QlogicError::IsotropicAtom(pt.to_string()));
        }
    }
    match space.norm_equiv(&lambda, &mu, cfg)? {
        NormEquiv::Equivalent(rho) => {
            let desc = space.descriptor();
            let n = space.dim();
            let plane = Subspace::span(desc, n, vec![e.clone(), f.clone()]);
            let mut rows = vec![e.clone(), f.clone()];
            rows.extend(space.perp(&plane).basis().iter().cloned());
            let basis = SquareMatrix::from_rows(&rows);
            let sigma = lambda.invert().unwrap().mul(&rho).mul(&mu).star().neg();
            let mut action = SquareMatrix::identity(desc, n);
            action.set(0, 0, Scalar::zero(desc));
            action.set(0, 1, rho.clone());
            action.set(1, 1, Scalar::zero(desc));
            action.set(1, 0, sigma);
            let u = basis
                .invert()
                .expect("adapted basis is invertible")
                .mul(&action)
                .mul(&basis);
            assert!(check_unitary(space, &u), "constructed map must be unitary");
            assert_eq!(
                Subspace::line(&u.apply_row(&e)),
                *b.subspace(),
                "witness must map a to b projectively"
            );
            Ok(AxiomDVerdict::Witness(u))
        }
        NormEquiv::Inequivalent => Ok(AxiomDVerdict::NoWitness),
        NormEquiv::Unknown => Ok(AxiomDVerdict::Unknown),
    }
}
