use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// A free abelian group of finite rank with a symmetric integer bilinear form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    gram: IntMatrix,
}

/// Parity and unimodularity of a form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FormClass {
    pub even: bool,
    pub unimodular: bool,
}

impl Lattice {
    /// Any symmetric gram matrix; degenerate forms are allowed (v⊥ is one).
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Lattice { gram })
    }

    /// Like [`Lattice::new`] but also rejects forms with zero determinant.
    pub fn nondegenerate(gram: IntMatrix) -> Result<Self> {
        let l = Self::new(gram)?;
        if l.determinant().is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(l)
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn pairing(&self, a: &[BigInt], b: &[BigInt]) -> Result<BigInt> {
        if a.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: a.len(),
            });
        }
        self.gram.bilinear(a, b)
    }

    /// Pairing with rational coordinates on the left.
    pub fn pairing_rational(&self, a: &[BigRational], b: &[BigInt]) -> Result<BigRational> {
        if a.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: a.len(),
            });
        }
        let gb = self.gram.mul_vec(b)?;
        Ok(a.iter()
            .zip(&gb)
            .map(|(x, y)| x * BigRational::from_integer(y.clone()))
            .fold(BigRational::zero(), |s, t| s + t))
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant().expect("gram is square")
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn classify_form(&self) -> FormClass {
        let even = (0..self.rank()).all(|i| self.gram[(i, i)].is_even());
        FormClass {
            even,
            unimodular: self.determinant().abs().is_one(),
        }
    }

    /// `(p, q)`: the number of positive and negative squares.
    ///
    /// Symmetric elimination over Q. When the leading diagonal entry is
    /// zero, the lowest-index row `j` with a nonzero cross term is added to
    /// (or, if that cancels, subtracted from) the leading row and column.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let n = self.rank();
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(self.gram[(i, j)].clone()))
                    .collect()
            })
            .collect();
        let (mut p, mut q) = (0, 0);
        for k in 0..n {
            if a[k][k].is_zero() {
                let j = (k + 1..n)
                    .find(|&j| !a[k][j].is_zero())
                    .ok_or(Error::Degenerate)?;
                let two = BigRational::from_integer(BigInt::from(2));
                let sign = if (&two * &a[k][j] + &a[j][j]).is_zero() {
                    -BigRational::one()
                } else {
                    BigRational::one()
                };
                // row k += sign·row j, then column k += sign·column j
                for c in k..n {
                    let v = &sign * &a[j][c];
                    a[k][c] += v;
                }
                for r in k..n {
                    let v = &sign * &a[r][j];
                    a[r][k] += v;
                }
            }
            let pivot = a[k][k].clone();
            debug_assert!(!pivot.is_zero());
            if pivot.is_positive() {
                p += 1;
            } else {
                q += 1;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                for c in k..n {
                    let v = &f * &a[k][c];
                    a[i][c] -= v;
                }
            }
            for i in k + 1..n {
                a[k][i] = BigRational::zero();
            }
        }
        Ok((p, q))
    }

    pub fn direct_sum(parts: &[&Lattice]) -> Lattice {
        let grams: Vec<&IntMatrix> = parts.iter().map(|l| &l.gram).collect();
        Lattice {
            gram: IntMatrix::block_diagonal(&grams),
        }
    }

    pub fn basis_vector(self: &Arc<Self>, i: usize) -> LatticeVector {
        let mut coords = vec![BigInt::zero(); self.rank()];
        coords[i] = BigInt::one();
        LatticeVector {
            lattice: Arc::clone(self),
            coords,
        }
    }
}

/// An element of a specific lattice, in its basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeVector {
    lattice: Arc<Lattice>,
    coords: Vec<BigInt>,
}

impl LatticeVector {
    pub fn new(lattice: Arc<Lattice>, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != lattice.rank() {
            return Err(Error::DimensionMismatch {
                expected: lattice.rank(),
                found: coords.len(),
            });
        }
        Ok(LatticeVector { lattice, coords })
    }

    pub fn from_i64(lattice: &Arc<Lattice>, coords: &[i64]) -> Result<Self> {
        Self::new(
            Arc::clone(lattice),
            coords.iter().map(|&x| BigInt::from(x)).collect(),
        )
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn same_ambient(&self, other: &LatticeVector) -> bool {
        Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice
    }

    pub fn square(&self) -> BigInt {
        pairing(self, self).expect("same ambient")
    }
}

/// `vᵀ · G · w`.
pub fn pairing(v: &LatticeVector, w: &LatticeVector) -> Result<BigInt> {
    if !v.same_ambient(w) {
        return Err(Error::AmbientMismatch);
    }
    v.lattice.pairing(&v.coords, &w.coords)
}
