//! Left-vector-space linear algebra over the *-fields: canonical subspace
//! bases in reduced row-echelon form under left row operations, sums,
//! intersections, membership, and prime-field enumeration.
//!
//! Scalars act on the left throughout, so every routine is safe over the
//! quaternions.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::run::SplitMix64;
use crate::scalar::{FieldDescriptor, FieldKind, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("ragged input: row {0} has length {1}, expected {2}")]
    Ragged(usize, usize, usize),
    #[error("descriptor mismatch between vectors")]
    DescriptorMismatch,
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("enumeration cap exceeded: {0} objects, cap {1}")]
    CapExceeded(u128, usize),
    #[error("enumeration requires a prime field")]
    NotEnumerable,
}

/// A coordinate vector over one *-field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    desc: FieldDescriptor,
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn new(desc: FieldDescriptor, coords: Vec<Scalar>) -> Vector {
        assert!(coords.iter().all(|c| c.descriptor() == desc));
        Vector { desc, coords }
    }

    pub fn zero(desc: FieldDescriptor, n: usize) -> Vector {
        Vector {
            desc,
            coords: vec![Scalar::zero(desc); n],
        }
    }

    pub fn standard_basis(desc: FieldDescriptor, n: usize, i: usize) -> Vector {
        let mut v = Vector::zero(desc, n);
        v.coords[i] = Scalar::one(desc);
        v
    }

    pub fn from_integers(desc: FieldDescriptor, entries: &[i64]) -> Vector {
        Vector {
            desc,
            coords: entries
                .iter()
                .map(|&e| Scalar::from_integer(desc, e))
                .collect(),
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.desc
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len());
        Vector {
            desc: self.desc,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len());
        Vector {
            desc: self.desc,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    /// Left scalar action: `s * v`.
    pub fn scale_left(&self, s: &Scalar) -> Vector {
        Vector {
            desc: self.desc,
            coords: self.coords.iter().map(|c| s.mul(c)).collect(),
        }
    }

    pub fn neg(&self) -> Vector {
        Vector {
            desc: self.desc,
            coords: self.coords.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn canonical_cmp(&self, other: &Vector) -> Ordering {
        debug_assert_eq!(self.len(), other.len());
        for (a, b) in self.coords.iter().zip(&other.coords) {
            let o = a.canonical_cmp(b);
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A subspace held as its unique reduced left row-echelon basis.
///
/// Pivots are 1 with zeros above and below, pivot columns strictly
/// increase, and the zero subspace has an empty basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    desc: FieldDescriptor,
    ambient: usize,
    rows: Vec<Vector>,
}

/// In-place reduced row echelon form under left row operations.
/// Returns pivot column indices. Zero rows are dropped.
fn rref(rows: &mut Vec<Vector>, ambient: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for col in 0..ambient {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i].coords[col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r].coords[col].invert().expect("pivot is nonzero");
        rows[r] = rows[r].scale_left(&inv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row.coords[col].is_zero() {
                continue;
            }
            let c = row.coords[col].clone();
            *row = row.sub(&pivot_row.scale_left(&c));
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Canonical basis of the left row span of the given vectors.
pub fn canonicalize(
    desc: FieldDescriptor,
    ambient: usize,
    rows: Vec<Vector>,
) -> Result<Subspace, LinalgError> {
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ambient {
            return Err(LinalgError::Ragged(i, row.len(), ambient));
        }
        if row.descriptor() != desc {
            return Err(LinalgError::DescriptorMismatch);
        }
    }
    let mut rows = rows;
    rref(&mut rows, ambient);
    Ok(Subspace {
        desc,
        ambient,
        rows,
    })
}

impl Subspace {
    pub fn zero(desc: FieldDescriptor, ambient: usize) -> Subspace {
        Subspace {
            desc,
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(desc: FieldDescriptor, ambient: usize) -> Subspace {
        let rows = (0..ambient)
            .map(|i| Vector::standard_basis(desc, ambient, i))
            .collect();
        Subspace {
            desc,
            ambient,
            rows,
        }
    }

    pub fn span(desc: FieldDescriptor, ambient: usize, rows: Vec<Vector>) -> Subspace {
        canonicalize(desc, ambient, rows).expect("well-formed generators")
    }

    pub fn line(v: &Vector) -> Subspace {
        Subspace::span(v.descriptor(), v.len(), vec![v.clone()])
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.desc
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient || self.desc != other.desc {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    /// Span of the union; dim(A+B) + dim(A∩B) = dim A + dim B.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        canonicalize(self.desc, self.ambient, rows)
    }

    /// Largest subspace contained in both, by the kernel-of-stacked-coefficients
    /// method: left coefficient rows (c, d) with c·A = d·B give the witnesses.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let a = self.rows.len();
        let mut stacked = self.rows.clone();
        stacked.extend(other.rows.iter().cloned());
        if stacked.is_empty() {
            return Ok(Subspace::zero(self.desc, self.ambient));
        }
        let kernel = left_row_kernel(self.desc, self.ambient, &stacked);
        let mut rows = Vec::new();
        for coeffs in kernel.basis() {
            let mut v = Vector::zero(self.desc, self.ambient);
            for i in 0..a {
                v = v.add(&self.rows[i].scale_left(coeffs.get(i)));
            }
            rows.push(v);
        }
        canonicalize(self.desc, self.ambient, rows)
    }

    /// Membership by reduction against the echelon basis.
    pub fn contains(&self, x: &Vector) -> bool {
        assert_eq!(x.len(), self.ambient);
        let mut r = x.clone();
        for row in &self.rows {
            let pivot = row
                .coords
                .iter()
                .position(|c| c.is_one())
                .expect("canonical row");
            let c = r.coords[pivot].clone();
            if !c.is_zero() {
                r = r.sub(&row.scale_left(&c));
            }
        }
        r.is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    /// Canonical representative text, also used as a deterministic map key.
    pub fn key(&self) -> String {
        self.to_string()
    }

    pub fn canonical_cmp(&self, other: &Subspace) -> Ordering {
        self.dim().cmp(&other.dim()).then_with(|| {
            for (a, b) in self.rows.iter().zip(&other.rows) {
                let o = a.canonical_cmp(b);
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{row}")?;
        }
        write!(f, "}}")
    }
}

/// Basis of {c : sum_i c_i * rows_i = 0} (left coefficients), as a canonical
/// subspace of coefficient space.
pub fn left_row_kernel(desc: FieldDescriptor, ambient: usize, rows: &[Vector]) -> Subspace {
    let m = rows.len();
    // Augment each row with a coefficient-tracking identity block, then pick
    // pivots in the first `ambient` columns only.
    let mut aug: Vec<Vector> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut coords = row.coords().to_vec();
            for j in 0..m {
                coords.push(if i == j {
                    Scalar::one(desc)
                } else {
                    Scalar::zero(desc)
                });
            }
            Vector::new(desc, coords)
        })
        .collect();

    let mut r = 0usize;
    for col in 0..ambient {
        let Some(pr) = (r..aug.len()).find(|&i| !aug[i].coords[col].is_zero()) else {
            continue;
        };
        aug.swap(r, pr);
        let inv = aug[r].coords[col].invert().expect("pivot is nonzero");
        aug[r] = aug[r].scale_left(&inv);
        let pivot_row = aug[r].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == r || row.coords[col].is_zero() {
                continue;
            }
            let c = row.coords[col].clone();
            *row = row.sub(&pivot_row.scale_left(&c));
        }
        r += 1;
        if r == aug.len() {
            break;
        }
    }

    let mut kernel_rows = Vec::new();
    for row in &aug[r..] {
        debug_assert!(row.coords[..ambient].iter().all(|c| c.is_zero()));
        kernel_rows.push(Vector::new(desc, row.coords[ambient..].to_vec()));
    }
    Subspace::span(desc, m, kernel_rows)
}

/// Left coefficients expressing `target` in the given spanning rows,
/// if `target` lies in their span.
pub fn express(rows: &[Vector], target: &Vector) -> Option<Vec<Scalar>> {
    let desc = target.descriptor();
    let ambient = target.len();
    let m = rows.len();
    let mut aug: Vec<Vector> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), ambient);
            let mut coords = row.coords().to_vec();
            for j in 0..m {
                coords.push(if i == j {
                    Scalar::one(desc)
                } else {
                    Scalar::zero(desc)
                });
            }
            Vector::new(desc, coords)
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0usize;
    for col in 0..ambient {
        let Some(pr) = (r..aug.len()).find(|&i| !aug[i].coords[col].is_zero()) else {
            continue;
        };
        aug.swap(r, pr);
        let inv = aug[r].coords[col].invert().expect("pivot is nonzero");
        aug[r] = aug[r].scale_left(&inv);
        let pivot_row = aug[r].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == r || row.coords[col].is_zero() {
                continue;
            }
            let c = row.coords[col].clone();
            *row = row.sub(&pivot_row.scale_left(&c));
        }
        pivots.push(col);
        r += 1;
        if r == aug.len() {
            break;
        }
    }

    let mut residual = target.clone();
    let mut coeffs = vec![Scalar::zero(desc); m];
    for (row_idx, &col) in pivots.iter().enumerate() {
        let a = residual.coords[col].clone();
        if a.is_zero() {
            continue;
        }
        let reduced = Vector::new(desc, aug[row_idx].coords[..ambient].to_vec());
        residual = residual.sub(&reduced.scale_left(&a));
        for (j, coeff) in coeffs.iter_mut().enumerate() {
            *coeff = coeff.add(&a.mul(&aug[row_idx].coords[ambient + j]));
        }
    }
    residual.is_zero().then_some(coeffs)
}

/// Number of subspaces of GF(p)^n (sum of Gaussian binomials).
pub fn count_subspaces(p: u64, n: usize) -> u128 {
    let mut total = 0u128;
    for r in 0..=n {
        total += gaussian_binomial(p, n, r);
    }
    total
}

fn gaussian_binomial(p: u64, n: usize, r: usize) -> u128 {
    // prod_{i=0..r-1} (p^(n-i) - 1) / (p^(r-i) - 1)
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..r {
        num *= pow_u128(p as u128, n - i) - 1;
        den *= pow_u128(p as u128, r - i) - 1;
    }
    num / den
}

fn pow_u128(b: u128, e: usize) -> u128 {
    let mut out = 1u128;
    for _ in 0..e {
        out *= b;
    }
    out
}

/// All subspaces of GF(p)^n in canonical order, by direct enumeration of
/// reduced echelon bases.
pub fn enumerate_subspaces(
    desc: FieldDescriptor,
    ambient: usize,
    cap: usize,
) -> Result<Vec<Subspace>, LinalgError> {
    let Some(p) = desc.modulus else {
        return Err(LinalgError::NotEnumerable);
    };
    let total = count_subspaces(p, ambient);
    if total > cap as u128 {
        return Err(LinalgError::CapExceeded(total, cap));
    }
    let mut out = Vec::with_capacity(total as usize);
    for rank in 0..=ambient {
        enumerate_rank(desc, p, ambient, rank, &mut out);
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

fn enumerate_rank(
    desc: FieldDescriptor,
    p: u64,
    ambient: usize,
    rank: usize,
    out: &mut Vec<Subspace>,
) {
    let mut pivots = (0..rank).collect::<Vec<usize>>();
    if rank == 0 {
        out.push(Subspace::zero(desc, ambient));
        return;
    }
    if rank > ambient {
        return;
    }
    loop {
        emit_for_pivots(desc, p, ambient, &pivots, out);
        // next combination
        let mut i = rank;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pivots[i] < ambient - (rank - i) {
                pivots[i] += 1;
                for j in i + 1..rank {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn emit_for_pivots(
    desc: FieldDescriptor,
    p: u64,
    ambient: usize,
    pivots: &[usize],
    out: &mut Vec<Subspace>,
) {
    let rank = pivots.len();
    // Free positions: (row i, col j) with j > pivots[i] and j not a pivot.
    let mut free = Vec::new();
    for (i, &pc) in pivots.iter().enumerate() {
        for j in pc + 1..ambient {
            if !pivots.contains(&j) {
                free.push((i, j));
            }
        }
    }
    let mut values = vec![0u64; free.len()];
    loop {
        let mut rows = Vec::with_capacity(rank);
        for (i, &pc) in pivots.iter().enumerate() {
            let mut v = Vector::zero(desc, ambient);
            v.coords[pc] = Scalar::one(desc);
            for (slot, &(fi, fj)) in free.iter().enumerate() {
                if fi == i {
                    v.coords[fj] = Scalar::residue(desc, values[slot]);
                }
            }
            rows.push(v);
        }
        out.push(Subspace {
            desc,
            ambient,
            rows,
        });
        // odometer
        let mut idx = 0usize;
        loop {
            if idx == values.len() {
                return;
            }
            values[idx] += 1;
            if values[idx] < p {
                break;
            }
            values[idx] = 0;
            idx += 1;
        }
    }
}

/// The 1-dimensional subspaces (projective points) of GF(p)^n, canonical order.
pub fn enumerate_points(
    desc: FieldDescriptor,
    ambient: usize,
) -> Result<Vec<Subspace>, LinalgError> {
    let Some(p) = desc.modulus else {
        return Err(LinalgError::NotEnumerable);
    };
    let mut out = Vec::new();
    let total = gaussian_binomial(p, ambient, 1) as usize;
    enumerate_rank(desc, p, ambient, 1, &mut out);
    debug_assert_eq!(out.len(), total);
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

/// All nonzero vectors of GF(p)^n in odometer order.
pub fn enumerate_nonzero_vectors(
    desc: FieldDescriptor,
    ambient: usize,
) -> Result<Vec<Vector>, LinalgError> {
    let Some(p) = desc.modulus else {
        return Err(LinalgError::NotEnumerable);
    };
    let mut out = Vec::new();
    let mut values = vec![0u64; ambient];
    loop {
        if values.iter().any(|&v| v != 0) {
            out.push(Vector::new(
                desc,
                values.iter().map(|&v| Scalar::residue(desc, v)).collect(),
            ));
        }
        let mut idx = 0usize;
        loop {
            if idx == ambient {
                return Ok(out);
            }
            values[idx] += 1;
            if values[idx] < p {
                break;
            }
            values[idx] = 0;
            idx += 1;
        }
    }
}

/// Small random scalar for sampled-mode checks.
pub fn random_scalar(desc: FieldDescriptor, rng: &mut SplitMix64) -> Scalar {
    match desc.kind {
        FieldKind::PrimeField => Scalar::residue(desc, rng.below(desc.modulus.unwrap())),
        _ => {
            let comps = match desc.kind {
                FieldKind::Rational => 1,
                FieldKind::GaussianRational => 2,
                _ => 4,
            };
            let parts: Vec<BigRational> = (0..comps)
                .map(|_| {
                    let num = rng.int_in(-3, 3);
                    let den = rng.int_in(1, 2);
                    BigRational::new(num.into(), den.into())
                })
                .collect();
            Scalar::from_components(desc, &parts)
        }
    }
}

pub fn random_vector(desc: FieldDescriptor, ambient: usize, rng: &mut SplitMix64) -> Vector {
    Vector::new(
        desc,
        (0..ambient).map(|_| random_scalar(desc, rng)).collect(),
    )
}

pub fn random_nonzero_vector(
    desc: FieldDescriptor,
    ambient: usize,
    rng: &mut SplitMix64,
) -> Vector {
    loop {
        let v = random_vector(desc, ambient, rng);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn random_subspace(desc: FieldDescriptor, ambient: usize, rng: &mut SplitMix64) -> Subspace {
    let rank = rng.below(ambient as u64 + 1) as usize;
    let rows = (0..rank)
        .map(|_| random_vector(desc, ambient, rng))
        .collect();
    Subspace::span(desc, ambient, rows)
}
