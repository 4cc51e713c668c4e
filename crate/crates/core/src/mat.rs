//! Square matrices over a *-field: ring operations, conjugate transpose,
//! and inversion by left row reduction. Shared by the operator, rescaling,
//! and *-ring layers.

use std::fmt;

use crate::linalg::{Subspace, Vector};
use crate::scalar::{FieldDescriptor, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    desc: FieldDescriptor,
    n: usize,
    rows: Vec<Vec<Scalar>>,
}

impl SquareMatrix {
    pub fn new(desc: FieldDescriptor, rows: Vec<Vec<Scalar>>) -> SquareMatrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n));
        assert!(rows.iter().flatten().all(|s| s.descriptor() == desc));
        SquareMatrix { desc, n, rows }
    }

    pub fn zero(desc: FieldDescriptor, n: usize) -> SquareMatrix {
        SquareMatrix {
            desc,
            n,
            rows: vec![vec![Scalar::zero(desc); n]; n],
        }
    }

    pub fn identity(desc: FieldDescriptor, n: usize) -> SquareMatrix {
        let mut m = SquareMatrix::zero(desc, n);
        for i in 0..n {
            m.rows[i][i] = Scalar::one(desc);
        }
        m
    }

    /// Matrix unit E_{ij}.
    pub fn unit(desc: FieldDescriptor, n: usize, i: usize, j: usize) -> SquareMatrix {
        let mut m = SquareMatrix::zero(desc, n);
        m.rows[i][j] = Scalar::one(desc);
        m
    }

    pub fn from_integers(desc: FieldDescriptor, entries: &[&[i64]]) -> SquareMatrix {
        let rows = entries
            .iter()
            .map(|r| r.iter().map(|&e| Scalar::from_integer(desc, e)).collect())
            .collect();
        SquareMatrix::new(desc, rows)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.desc
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.descriptor(), self.desc);
        self.rows[i][j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector::new(self.desc, self.rows[i].clone())
    }

    pub fn rows_as_vectors(&self) -> Vec<Vector> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    pub fn from_rows(rows: &[Vector]) -> SquareMatrix {
        let desc = rows[0].descriptor();
        SquareMatrix::new(desc, rows.iter().map(|r| r.coords().to_vec()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|s| s.is_zero())
    }

    pub fn add(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, other.n);
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            .collect();
        SquareMatrix {
            desc: self.desc,
            n: self.n,
            rows,
        }
    }

    pub fn sub(&self, other: &SquareMatrix) -> SquareMatrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SquareMatrix {
        let rows = self
            .rows
            .iter()
            .map(|a| a.iter().map(|x| x.neg()).collect())
            .collect();
        SquareMatrix {
            desc: self.desc,
            n: self.n,
            rows,
        }
    }

    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, other.n);
        let mut out = SquareMatrix::zero(self.desc, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = Scalar::zero(self.desc);
                for k in 0..self.n {
                    acc = acc.add(&self.rows[i][k].mul(&other.rows[k][j]));
                }
                out.rows[i][j] = acc;
            }
        }
        out
    }

    pub fn scale_left(&self, s: &Scalar) -> SquareMatrix {
        let rows = self
            .rows
            .iter()
            .map(|a| a.iter().map(|x| s.mul(x)).collect())
            .collect();
        SquareMatrix {
            desc: self.desc,
            n: self.n,
            rows,
        }
    }

    /// Conjugate transpose: the involution of the matrix *-ring.
    pub fn star(&self) -> SquareMatrix {
        let mut out = SquareMatrix::zero(self.desc, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.rows[i][j] = self.rows[j][i].star();
            }
        }
        out
    }

    /// Row vector times matrix (operators act on rows from the right).
    pub fn apply_row(&self, x: &Vector) -> Vector {
        assert_eq!(x.len(), self.n);
        let mut out = Vector::zero(self.desc, self.n);
        for (i, c) in x.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&self.row(i).scale_left(c));
        }
        out
    }

    pub fn rank(&self) -> usize {
        Subspace::span(self.desc, self.n, self.rows_as_vectors()).dim()
    }

    /// Two-sided inverse via left row reduction of the augmented matrix.
    pub fn invert(&self) -> Option<SquareMatrix> {
        let n = self.n;
        let mut aug: Vec<Vector> = (0..n)
            .map(|i| {
                let mut coords = self.rows[i].clone();
                for j in 0..n {
                    coords.push(if i == j {
                        Scalar::one(self.desc)
                    } else {
                        Scalar::zero(self.desc)
                    });
                }
                Vector::new(self.desc, coords)
            })
            .collect();
        for col in 0..n {
            let pr = (col..n).find(|&i| !aug[i].coords()[col].is_zero())?;
            aug.swap(col, pr);
            let inv = aug[col].coords()[col].invert().ok()?;
            aug[col] = aug[col].scale_left(&inv);
            let pivot_row = aug[col].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i == col || row.coords()[col].is_zero() {
                    continue;
                }
                let c = row.coords()[col].clone();
                *row = row.sub(&pivot_row.scale_left(&c));
            }
        }
        let rows = aug.into_iter().map(|r| r.coords()[n..].to_vec()).collect();
        Some(SquareMatrix {
            desc: self.desc,
            n,
            rows,
        })
    }

    pub fn is_projection(&self) -> bool {
        self.mul(self) == *self && self.star() == *self
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "(")?;
            for (j, s) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{s}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_scalar, random_vector};
    use crate::run::SplitMix64;

    #[test]
    fn inverse_round_trip_over_quaternions() {
        let qd = FieldDescriptor::quaternion();
        let mut rng = SplitMix64::new(21);
        let mut found = 0;
        while found < 10 {
            let rows = (0..3)
                .map(|_| (0..3).map(|_| random_scalar(qd, &mut rng)).collect())
                .collect();
            let m = SquareMatrix::new(qd, rows);
            if let Some(inv) = m.invert() {
                assert_eq!(m.mul(&inv), SquareMatrix::identity(qd, 3));
                assert_eq!(inv.mul(&m), SquareMatrix::identity(qd, 3));
                found += 1;
            }
        }
    }

    #[test]
    fn star_is_an_involution_reversing_products() {
        let gd = FieldDescriptor::gaussian();
        let mut rng = SplitMix64::new(22);
        for _ in 0..10 {
            let a = SquareMatrix::from_rows(&[
                random_vector(gd, 2, &mut rng),
                random_vector(gd, 2, &mut rng),
            ]);
            let b = SquareMatrix::from_rows(&[
                random_vector(gd, 2, &mut rng),
                random_vector(gd, 2, &mut rng),
            ]);
            assert_eq!(a.star().star(), a);
            assert_eq!(a.mul(&b).star(), b.star().mul(&a.star()));
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let rd = FieldDescriptor::rational();
        let m = SquareMatrix::from_integers(rd, &[&[1, 2], &[2, 4]]);
        assert!(m.invert().is_none());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn matrix_units_multiply() {
        let gd = FieldDescriptor::gaussian();
        let e12 = SquareMatrix::unit(gd, 2, 0, 1);
        let e21 = SquareMatrix::unit(gd, 2, 1, 0);
        assert_eq!(e12.mul(&e21), SquareMatrix::unit(gd, 2, 0, 0));
        assert_eq!(e21.mul(&e12), SquareMatrix::unit(gd, 2, 1, 1));
    }
}
