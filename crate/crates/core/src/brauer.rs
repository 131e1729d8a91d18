//! Brauer classes of a K3 surface as finite-order functionals T → Q/Z.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::linalg::kernel_mod;
use crate::lattice::standard::K3_RANK;
use crate::lattice::{IntMatrix, Sublattice};
use crate::mukai::K3Surface;

/// Representative of `q` mod Z in `[0, 1)`.
pub fn frac_mod_one(q: &BigRational) -> BigRational {
    q - q.floor()
}

/// A homomorphism `T → Q/Z` stored by its values on the basis of `T`.
#[derive(Debug, Clone)]
pub struct BrauerClass {
    lattice: Sublattice,
    values: Vec<BigRational>,
}

impl BrauerClass {
    pub fn new(lattice: Sublattice, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != lattice.rank() {
            return Err(Error::DimensionMismatch {
                expected: lattice.rank(),
                found: values.len(),
            });
        }
        let values = values.iter().map(frac_mod_one).collect();
        Ok(BrauerClass { lattice, values })
    }

    pub fn zero(lattice: Sublattice) -> Self {
        let values = vec![BigRational::zero(); lattice.rank()];
        BrauerClass { lattice, values }
    }

    pub fn lattice(&self) -> &Sublattice {
        &self.lattice
    }

    /// Values on the basis, each in `[0, 1)` and in lowest terms.
    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Value on the element with the given basis coordinates, in `[0, 1)`.
    pub fn evaluate(&self, coords: &[BigInt]) -> Result<BigRational> {
        if coords.len() != self.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                found: coords.len(),
            });
        }
        let total = coords
            .iter()
            .zip(&self.values)
            .fold(BigRational::zero(), |acc, (c, v)| {
                acc + v * BigRational::from_integer(c.clone())
            });
        Ok(frac_mod_one(&total))
    }

    pub fn evaluate_ambient(&self, x: &[BigInt]) -> Result<BigRational> {
        let c = self
            .lattice
            .coordinates_of(x)
            .ok_or_else(|| Error::NotContained("vector is not in the lattice of the class".into()))?;
        self.evaluate(&c)
    }

    /// Least m ≥ 1 with m·α = 0: the lcm of the value denominators.
    pub fn order(&self) -> BigInt {
        self.values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
    }

    fn check_same(&self, other: &BrauerClass) -> Result<()> {
        if self.lattice.basis() != other.lattice.basis()
            || self.lattice.ambient() != other.lattice.ambient()
        {
            return Err(Error::invalid(
                "classes live on different bases; rebase explicitly first",
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &BrauerClass) -> Result<BrauerClass> {
        self.check_same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        BrauerClass::new(self.lattice.clone(), values)
    }

    pub fn scale(&self, k: &BigInt) -> BrauerClass {
        let k = BigRational::from_integer(k.clone());
        let values = self.values.iter().map(|v| frac_mod_one(&(v * &k))).collect();
        BrauerClass {
            lattice: self.lattice.clone(),
            values,
        }
    }

    pub fn neg(&self) -> BrauerClass {
        self.scale(&BigInt::from(-1))
    }

    /// Value-wise equality; both classes must share the same basis.
    pub fn equals(&self, other: &BrauerClass) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.values == other.values)
    }

    /// `{t : α(t) ≡ 0}`, a sublattice of index `order(α)`.
    pub fn kernel(&self) -> Sublattice {
        let m = self.order();
        let mf = BigRational::from_integer(m.clone());
        let row: Vec<BigInt> = self.values.iter().map(|v| (v * &mf).to_integer()).collect();
        let map = IntMatrix::from_rows(vec![row]).expect("single row");
        let k = kernel_mod(&map, &m);
        let basis = self
            .lattice
            .basis()
            .checked_mul(&k)
            .expect("kernel coordinates have lattice rank");
        Sublattice::new(Arc::clone(self.lattice.ambient()), basis).expect("finite index, full rank")
    }

    /// The functional composed with the inclusion `K ⊆ T`.
    pub fn restrict(&self, k: &Sublattice) -> Result<BrauerClass> {
        let c = self
            .lattice
            .coordinates_of_sublattice(k)
            .ok_or_else(|| Error::NotContained("restriction target is not a sublattice of T".into()))?;
        let values = c
            .columns()
            .iter()
            .map(|col| self.evaluate(col))
            .collect::<Result<Vec<_>>>()?;
        BrauerClass::new(k.clone(), values)
    }

    /// The same functional expressed on another basis of the same lattice.
    pub fn rebase(&self, basis: &Sublattice) -> Result<BrauerClass> {
        if !basis.same_as(&self.lattice) {
            return Err(Error::invalid("rebase target spans a different lattice"));
        }
        self.restrict(basis)
    }
}

impl fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "[{}] (order {})", vals.join(", "), self.order())
    }
}

/// `[w]`: the functional `t ↦ (w . t) mod Z` on the basis of `t_lattice`.
/// The pairing is the ambient form of the sublattice.
pub fn brauer_from_rational_class(t_lattice: &Sublattice, w: &[BigRational]) -> Result<BrauerClass> {
    let ambient = t_lattice.ambient();
    let values = t_lattice
        .basis()
        .columns()
        .iter()
        .map(|t| ambient.pairing_rational(w, t))
        .collect::<Result<Vec<_>>>()?;
    BrauerClass::new(t_lattice.clone(), values)
}

/// `[w]` on the transcendental lattice of a K3.
pub fn brauer_from_h2_class(x: &K3Surface, w: &[BigRational]) -> Result<BrauerClass> {
    brauer_from_rational_class(x.transcendental(), w)
}

/// `[−c₁/r]`, the obstruction class coming from a twisted bundle of rank r.
pub fn obstruction_from_bundle(t_lattice: &Sublattice, c1: &[BigInt], r: &BigInt) -> Result<BrauerClass> {
    if !r.is_positive() {
        return Err(Error::invalid("bundle rank must be positive"));
    }
    let w: Vec<BigRational> = c1
        .iter()
        .map(|c| BigRational::new(-c, r.clone()))
        .collect();
    brauer_from_rational_class(t_lattice, &w)
}

/// An element of H²(X, Z/n), stored as residues in `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModNClass {
    n: BigInt,
    coords: Vec<BigInt>,
}

impl ModNClass {
    pub fn new(n: BigInt, coords: Vec<BigInt>) -> Result<Self> {
        if !n.is_positive() {
            return Err(Error::invalid("modulus must be positive"));
        }
        let coords = coords.iter().map(|c| c.mod_floor(&n)).collect();
        Ok(ModNClass { n, coords })
    }

    pub fn modulus(&self) -> &BigInt {
        &self.n
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// `t = −c₁ mod n`.
pub fn topological_twisting_class(c1: &[BigInt], n: &BigInt) -> Result<ModNClass> {
    ModNClass::new(n.clone(), c1.iter().map(|c| -c).collect())
}

/// `H²(X, Z/n) → Br(X)`, `x ↦ [x/n]` with x lifted to `[0, n)`.
pub fn p_map(t_lattice: &Sublattice, class: &ModNClass) -> Result<BrauerClass> {
    let w: Vec<BigRational> = class
        .coords
        .iter()
        .map(|c| BigRational::new(c.clone(), class.n.clone()))
        .collect();
    brauer_from_rational_class(t_lattice, &w)
}

/// `|Br(X)[n]| = n^(22 − ρ)` for a K3 of Picard rank ρ, read off the
/// Kummer sequence with H³(X, Z) = 0.
pub fn kummer_torsion_order(rho: usize, n: &BigInt) -> Result<BigInt> {
    if !(1..=20).contains(&rho) {
        return Err(Error::invalid(format!("Picard rank {rho} outside 1..=20")));
    }
    if !n.is_positive() {
        return Err(Error::invalid("modulus must be positive"));
    }
    Ok(num_traits::pow(n.clone(), K3_RANK - rho))
}
