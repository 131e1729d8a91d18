use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::form::{Lattice, LatticeVector};
use super::linalg::{column_span_basis, gcd_all, integer_kernel, solve_integer};
use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use crate::error::{Error, Result};

/// A sublattice given by a basis of ambient-coordinate columns.
#[derive(Debug, Clone)]
pub struct Sublattice {
    ambient: Arc<Lattice>,
    basis: IntMatrix,
    saturated: bool,
}

impl Sublattice {
    /// Columns of `basis` must be independent over Q.
    pub fn new(ambient: Arc<Lattice>, basis: IntMatrix) -> Result<Self> {
        if basis.rows() != ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: ambient.rank(),
                found: basis.rows(),
            });
        }
        let snf = smith_normal_form(&basis);
        if snf.rank() != basis.cols() {
            return Err(Error::invalid("sublattice basis columns are dependent"));
        }
        let saturated = snf.invariant_factors().iter().all(One::is_one);
        Ok(Sublattice {
            ambient,
            basis,
            saturated,
        })
    }

    /// The span of arbitrary (possibly dependent) generator columns.
    pub fn from_generators(ambient: Arc<Lattice>, generators: &IntMatrix) -> Result<Self> {
        if generators.rows() != ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: ambient.rank(),
                found: generators.rows(),
            });
        }
        Self::new(ambient, column_span_basis(generators))
    }

    pub fn full(ambient: Arc<Lattice>) -> Self {
        let n = ambient.rank();
        Sublattice {
            ambient,
            basis: IntMatrix::identity(n),
            saturated: true,
        }
    }

    pub fn ambient(&self) -> &Arc<Lattice> {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// Gram matrix of the restricted form in this basis.
    pub fn gram(&self) -> IntMatrix {
        self.ambient
            .gram()
            .congruence(&self.basis)
            .expect("basis rows match ambient rank")
    }

    /// The sublattice as an abstract lattice (its own basis, restricted form).
    pub fn as_lattice(&self) -> Lattice {
        Lattice::new(self.gram()).expect("restriction of a symmetric form")
    }

    /// Ambient coordinates of the element with the given basis coordinates.
    pub fn element(&self, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        self.basis.mul_vec(coords)
    }

    pub fn basis_vectors(&self) -> Vec<LatticeVector> {
        self.basis
            .columns()
            .into_iter()
            .map(|c| LatticeVector::new(Arc::clone(&self.ambient), c).expect("rank checked"))
            .collect()
    }

    /// Basis coordinates of an ambient vector, if it lies in the sublattice.
    pub fn coordinates_of(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        if x.len() != self.ambient.rank() {
            return None;
        }
        solve_integer(&self.basis, x)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coordinates_of(x).is_some()
    }

    fn check_ambient(&self, other: &Sublattice) -> Result<()> {
        if Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    /// Basis of `other` expressed in this sublattice's basis, or `None` if
    /// `other ⊄ self`.
    pub fn coordinates_of_sublattice(&self, other: &Sublattice) -> Option<IntMatrix> {
        self.check_ambient(other).ok()?;
        let cols: Option<Vec<Vec<BigInt>>> = other
            .basis
            .columns()
            .iter()
            .map(|c| self.coordinates_of(c))
            .collect();
        Some(IntMatrix::from_columns(self.rank(), &cols?).expect("coordinate length is rank"))
    }

    pub fn contains_sublattice(&self, other: &Sublattice) -> bool {
        self.coordinates_of_sublattice(other).is_some()
    }

    /// Equality as sets, by mutual membership of generators.
    pub fn same_as(&self, other: &Sublattice) -> bool {
        self.rank() == other.rank() && self.contains_sublattice(other) && other.contains_sublattice(self)
    }

    /// Smallest sublattice containing this one with torsion-free quotient.
    /// With `U · B · V = D`, it is spanned by the first `rank` columns of U⁻¹.
    pub fn saturation(&self) -> Sublattice {
        if self.saturated {
            return self.clone();
        }
        let snf = smith_normal_form(&self.basis);
        let basis = snf.u_inv.select_columns(0..self.rank());
        Sublattice {
            ambient: Arc::clone(&self.ambient),
            basis,
            saturated: true,
        }
    }

    /// `{x : (x . s) = 0 for every s in self}`, saturated by construction.
    pub fn orthogonal_complement(&self) -> Sublattice {
        let map = self
            .basis
            .transpose()
            .checked_mul(self.ambient.gram())
            .expect("shapes agree");
        Sublattice {
            ambient: Arc::clone(&self.ambient),
            basis: integer_kernel(&map),
            saturated: true,
        }
    }

    pub fn intersection(&self, other: &Sublattice) -> Result<Sublattice> {
        self.check_ambient(other)?;
        // a·x = b·y  ⇔  [a | −b](x, y) = 0
        let neg_b = other.basis.scale(&BigInt::from(-1));
        let ker = integer_kernel(&self.basis.hstack(&neg_b)?);
        let xs = ker.select_rows(0..self.rank());
        let gens = self.basis.checked_mul(&xs)?;
        Sublattice::from_generators(Arc::clone(&self.ambient), &gens)
    }

    /// Structure of `self / sub` for a finite-index `sub ⊆ self`.
    pub fn quotient_structure(&self, sub: &Sublattice) -> Result<QuotientStructure> {
        self.check_ambient(sub)?;
        if sub.rank() != self.rank() {
            return Err(Error::InfiniteIndex {
                sub: sub.rank(),
                sup: self.rank(),
            });
        }
        let change = self
            .coordinates_of_sublattice(sub)
            .ok_or_else(|| Error::NotContained("sublattice is not inside the lattice".into()))?;
        let snf = smith_normal_form(&change);
        let factors = snf.invariant_factors();
        let nontrivial: Vec<usize> = (0..factors.len()).filter(|&i| !factors[i].is_one()).collect();
        let map = snf.u.select_rows(nontrivial.iter().copied());
        let group = FiniteAbelianGroup {
            invariant_factors: nontrivial.iter().map(|&i| factors[i].clone()).collect(),
        };
        Ok(QuotientStructure {
            lattice: self.clone(),
            group,
            map,
            index: change.determinant()?.abs(),
        })
    }
}

impl fmt::Display for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span of columns {}", self.basis.transpose())
    }
}

/// A finite abelian group Z/d₁ ⊕ … ⊕ Z/d_k with d₁ | … | d_k, all dᵢ > 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            invariant_factors: Vec::new(),
        }
    }

    pub fn from_invariant_factors(factors: Vec<BigInt>) -> Result<Self> {
        if factors.iter().any(|d| d <= &BigInt::one()) {
            return Err(Error::invalid("invariant factors must exceed 1"));
        }
        if factors.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::invalid("invariant factors must form a divisibility chain"));
        }
        Ok(FiniteAbelianGroup {
            invariant_factors: factors,
        })
    }

    /// Normalizes an arbitrary direct sum of cyclic groups Z/m₁ ⊕ … .
    /// Orders of 0 are rejected (the group would be infinite).
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Result<Self> {
        if orders.iter().any(|m| m.is_zero()) {
            return Err(Error::invalid("cyclic factor of infinite order"));
        }
        let diag: Vec<BigInt> = orders.iter().map(|m| m.abs()).collect();
        let snf = smith_normal_form(&IntMatrix::diagonal(&diag));
        Ok(FiniteAbelianGroup {
            invariant_factors: snf
                .invariant_factors()
                .into_iter()
                .filter(|d| !d.is_one())
                .collect(),
        })
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    /// Exponent of the group (largest invariant factor).
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `T / S` together with an explicit residue map on T-coordinates.
#[derive(Debug, Clone)]
pub struct QuotientStructure {
    lattice: Sublattice,
    group: FiniteAbelianGroup,
    map: IntMatrix,
    index: BigInt,
}

impl QuotientStructure {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// `[T : S]`, the absolute determinant of the change of basis.
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    /// Residue tuple of an element given in T-basis coordinates.
    pub fn residues(&self, t_coords: &[BigInt]) -> Result<Vec<BigInt>> {
        let raw = self.map.mul_vec(t_coords)?;
        Ok(raw
            .iter()
            .zip(self.group.invariant_factors())
            .map(|(x, d)| x.mod_floor(d))
            .collect())
    }

    /// Residue tuple of an element given in ambient coordinates.
    pub fn residues_of_ambient(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let c = self
            .lattice
            .coordinates_of(x)
            .ok_or_else(|| Error::NotContained("vector is not in the lattice".into()))?;
        self.residues(&c)
    }

    /// Additive order of the residue class of a T-coordinate vector.
    pub fn element_order(&self, t_coords: &[BigInt]) -> Result<BigInt> {
        let res = self.residues(t_coords)?;
        Ok(res
            .iter()
            .zip(self.group.invariant_factors())
            .map(|(r, d)| d / r.gcd(d))
            .fold(BigInt::one(), |acc, o| acc.lcm(&o)))
    }
}

/// An isometric embedding `source ↪ target`, columns are images of the
/// source basis in target coordinates.
#[derive(Debug, Clone)]
pub struct LatticeEmbedding {
    source: Arc<Lattice>,
    target: Arc<Lattice>,
    matrix: IntMatrix,
}

impl LatticeEmbedding {
    pub fn new(source: Arc<Lattice>, target: Arc<Lattice>, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::DimensionMismatch {
                expected: target.rank() * source.rank(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        let pulled = target.gram().congruence(&matrix)?;
        if &pulled != source.gram() {
            return Err(Error::NotIsometric(format!(
                "Mᵀ·G·M = {pulled} but source gram is {}",
                source.gram()
            )));
        }
        if matrix.rank() != source.rank() {
            return Err(Error::invalid("embedding matrix lacks full column rank"));
        }
        Ok(LatticeEmbedding {
            source,
            target,
            matrix,
        })
    }

    pub fn source(&self) -> &Arc<Lattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Lattice> {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.matrix.mul_vec(x)
    }

    /// The image as a sublattice of the target.
    pub fn image(&self) -> Sublattice {
        Sublattice::new(Arc::clone(&self.target), self.matrix.clone())
            .expect("full column rank checked on construction")
    }

    /// `Mᵀ · G_target · M = G_source`, re-checked.
    pub fn is_isometric(&self) -> bool {
        self.target
            .gram()
            .congruence(&self.matrix)
            .map(|g| &g == self.source.gram())
            .unwrap_or(false)
    }
}

/// Some `u` with `(u . v) = g`.
///
/// A single basis vector is used when one pairs with `v` to exactly ±d
/// (d the gcd of all basis pairings, lowest index first); otherwise the
/// extended-gcd combination of all basis vectors.
pub fn solve_pairing_value(v: &LatticeVector, g: &BigInt) -> Result<LatticeVector> {
    let lattice = v.lattice();
    let pairings = lattice.gram().mul_vec(v.coords())?;
    let d = gcd_all(&pairings);
    if d.is_zero() {
        return Err(Error::NoSolution(
            "vector pairs to zero with everything".into(),
        ));
    }
    if !g.is_multiple_of(&d) {
        return Err(Error::NoSolution(format!(
            "pairings with v are all divisible by {d}, cannot reach {g}"
        )));
    }
    let scale = g / &d;
    let n = lattice.rank();
    let mut coeffs = vec![BigInt::zero(); n];
    if let Some(i) = pairings.iter().position(|p| p == &d) {
        coeffs[i] = scale;
    } else if let Some(i) = pairings.iter().position(|p| p == &-&d) {
        coeffs[i] = -scale;
    } else {
        let mut acc = BigInt::zero();
        for (i, p) in pairings.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let eg = acc.extended_gcd(p);
            let (mut gg, mut x, mut y) = (eg.gcd, eg.x, eg.y);
            if gg.is_negative() {
                gg = -gg;
                x = -x;
                y = -y;
            }
            for c in coeffs.iter_mut() {
                *c *= &x;
            }
            coeffs[i] = y;
            acc = gg;
        }
        debug_assert_eq!(acc, d);
        for c in coeffs.iter_mut() {
            *c *= &scale;
        }
    }
    LatticeVector::new(Arc::clone(lattice), coeffs)
}
