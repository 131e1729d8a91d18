//! Čech cochains on finite nerves with Z/n or Q/Z coefficients, and rank-one
//! twisted gluing data λ with δλ = α.
//!
//! Simplices are stored with sorted vertices; face i drops vertex i and
//! carries the sign (−1)^i.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::brauer::frac_mod_one;
use crate::error::{Error, Result};
use crate::lattice::linalg::{column_span_basis, kernel_mod, solve_integer, solve_mod};
use crate::lattice::{smith_normal_form, FiniteAbelianGroup, IntMatrix};

pub const MAX_DEGREE: usize = 3;

/// A finite simplicial complex of dimension ≤ 3, closed under faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nerve {
    vertices: usize,
    simplices: Vec<Vec<Vec<usize>>>,
}

impl Nerve {
    /// Closes `faces` under taking faces. Every vertex `0..vertices` is a
    /// 0-simplex whether or not it is listed.
    pub fn from_maximal(vertices: usize, faces: &[Vec<usize>]) -> Result<Self> {
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); MAX_DEGREE + 1];
        for v in 0..vertices {
            sets[0].insert(vec![v]);
        }
        for f in faces {
            let mut s = f.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != f.len() {
                return Err(Error::invalid(format!("simplex {f:?} repeats a vertex")));
            }
            if s.is_empty() || s.len() > MAX_DEGREE + 1 {
                return Err(Error::invalid(format!("simplex {f:?} has unsupported size")));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertices) {
                return Err(Error::invalid(format!("vertex {v} out of range")));
            }
            // all nonempty subsets
            let k = s.len();
            for mask in 1u32..(1 << k) {
                let sub: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
                sets[sub.len() - 1].insert(sub);
            }
        }
        Ok(Nerve {
            vertices,
            simplices: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    /// The full simplex on four vertices (contractible).
    pub fn solid_tetrahedron() -> Self {
        Self::from_maximal(4, &[vec![0, 1, 2, 3]]).expect("valid")
    }

    /// The four triangles of a tetrahedron (a 2-sphere).
    pub fn boundary_of_tetrahedron() -> Self {
        let faces = [vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        Self::from_maximal(4, &faces).expect("valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn index_of(&self, k: usize, simplex: &[usize]) -> Option<usize> {
        self.simplices(k).binary_search_by(|s| s.as_slice().cmp(simplex)).ok()
    }

    /// Integer matrix of δ: C^k → C^(k+1), of shape count(k+1) × count(k).
    pub fn coboundary_matrix(&self, k: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.count(k + 1), self.count(k));
        for (row, s) in self.simplices(k + 1).iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let col = self.index_of(k, &face).expect("closed under faces");
                d[(row, col)] += if i % 2 == 0 { 1 } else { -1 };
            }
        }
        d
    }
}

/// Coefficient group: Z/n for n ≥ 1, or Q/Z (`modulus` 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    Mod(BigInt),
    RationalModOne,
}

impl Coefficients {
    /// n = 0 encodes Q/Z.
    pub fn from_modulus(n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            Ok(Coefficients::RationalModOne)
        } else if n.is_positive() {
            Ok(Coefficients::Mod(n.clone()))
        } else {
            Err(Error::invalid("modulus must be nonnegative"))
        }
    }

    pub fn modulus(&self) -> BigInt {
        match self {
            Coefficients::Mod(n) => n.clone(),
            Coefficients::RationalModOne => BigInt::zero(),
        }
    }

    fn reduce(&self, x: &BigRational) -> Result<BigRational> {
        match self {
            Coefficients::Mod(n) => {
                if !x.is_integer() {
                    return Err(Error::invalid(format!("{x} is not an element of Z/{n}")));
                }
                Ok(BigRational::from_integer(x.to_integer().mod_floor(n)))
            }
            Coefficients::RationalModOne => Ok(frac_mod_one(x)),
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Mod(n) => write!(f, "Z/{n}"),
            Coefficients::RationalModOne => write!(f, "Q/Z"),
        }
    }
}

/// One coefficient per k-simplex, in the nerve's simplex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    nerve: Arc<Nerve>,
    degree: usize,
    coefficients: Coefficients,
    values: Vec<BigRational>,
}

impl Cochain {
    pub fn new(
        nerve: Arc<Nerve>,
        degree: usize,
        coefficients: Coefficients,
        values: Vec<BigRational>,
    ) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::invalid(format!("degree {degree} exceeds {MAX_DEGREE}")));
        }
        if values.len() != nerve.count(degree) {
            return Err(Error::DimensionMismatch {
                expected: nerve.count(degree),
                found: values.len(),
            });
        }
        let values = values
            .iter()
            .map(|v| coefficients.reduce(v))
            .collect::<Result<_>>()?;
        Ok(Cochain {
            nerve,
            degree,
            coefficients,
            values,
        })
    }

    pub fn from_integers(
        nerve: Arc<Nerve>,
        degree: usize,
        coefficients: Coefficients,
        values: &[BigInt],
    ) -> Result<Self> {
        let v = values.iter().cloned().map(BigRational::from_integer).collect();
        Self::new(nerve, degree, coefficients, v)
    }

    pub fn zero(nerve: Arc<Nerve>, degree: usize, coefficients: Coefficients) -> Self {
        let values = vec![BigRational::zero(); nerve.count(degree)];
        Cochain {
            nerve,
            degree,
            coefficients,
            values,
        }
    }

    pub fn nerve(&self) -> &Arc<Nerve> {
        &self.nerve
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Value on a sorted simplex.
    pub fn value(&self, simplex: &[usize]) -> Option<&BigRational> {
        self.nerve
            .index_of(self.degree, simplex)
            .map(|i| &self.values[i])
    }

    fn check_compatible(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::invalid("cochains have different degrees"));
        }
        if self.coefficients != other.coefficients {
            return Err(Error::invalid("cochains have different coefficients"));
        }
        if !Arc::ptr_eq(&self.nerve, &other.nerve) && self.nerve != other.nerve {
            return Err(Error::invalid("cochains live on different nerves"));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Cochain,
        f: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Result<Cochain> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        Cochain::new(Arc::clone(&self.nerve), self.degree, self.coefficients.clone(), values)
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Cochain {
        let values = self.values.iter().map(|v| -v).collect();
        Cochain::new(Arc::clone(&self.nerve), self.degree, self.coefficients.clone(), values)
            .expect("same shape")
    }

    pub fn is_cocycle(&self) -> bool {
        self.degree == MAX_DEGREE || coboundary(self).map_or(false, |d| d.is_zero())
    }
}

/// The alternating-sum differential.
pub fn coboundary(c: &Cochain) -> Result<Cochain> {
    if c.degree >= MAX_DEGREE {
        return Err(Error::invalid("no coboundary out of the top degree"));
    }
    let d = c.nerve.coboundary_matrix(c.degree);
    let values = (0..d.rows())
        .map(|i| {
            d.row(i)
                .iter()
                .zip(&c.values)
                .fold(BigRational::zero(), |acc, (s, v)| acc + v * s)
        })
        .collect();
    Cochain::new(Arc::clone(&c.nerve), c.degree + 1, c.coefficients.clone(), values)
}

/// H^k(N, Z/n) = {x : δx ≡ 0} / (im δ + n·C^k), read off an SNF.
pub fn cech_cohomology(nerve: &Nerve, k: usize, n: &BigInt) -> Result<FiniteAbelianGroup> {
    if k > MAX_DEGREE {
        return Err(Error::invalid(format!("degree {k} exceeds {MAX_DEGREE}")));
    }
    if !n.is_positive() {
        return Err(Error::invalid("cohomology needs a positive modulus"));
    }
    let c = nerve.count(k);
    if c == 0 {
        return Ok(FiniteAbelianGroup::trivial());
    }
    let cocycles = if k < MAX_DEGREE {
        kernel_mod(&nerve.coboundary_matrix(k), n)
    } else {
        IntMatrix::identity(c)
    };
    let before = if k == 0 {
        IntMatrix::zeros(c, 0)
    } else {
        nerve.coboundary_matrix(k - 1)
    };
    let boundaries = column_span_basis(&before.hstack(&IntMatrix::identity(c).scale(n))?);
    let coords: Vec<Vec<BigInt>> = boundaries
        .columns()
        .iter()
        .map(|b| solve_integer(&cocycles, b).ok_or_else(|| Error::invariant("δ∘δ ≠ 0")))
        .collect::<Result<_>>()?;
    let rel = IntMatrix::from_columns(c, &coords)?;
    let s = smith_normal_form(&rel);
    FiniteAbelianGroup::from_cyclic_orders(&s.invariant_factors())
}

/// Decides whether two cocycles differ by a coboundary; the witness x has
/// δx = a − b.
pub fn is_cohomologous(a: &Cochain, b: &Cochain) -> Result<Option<Cochain>> {
    a.check_compatible(b)?;
    if !a.is_cocycle() || !b.is_cocycle() {
        return Err(Error::invalid("is_cohomologous needs cocycles"));
    }
    let diff = a.sub(b)?;
    let nerve = Arc::clone(&a.nerve);
    let coeff = a.coefficients.clone();
    if a.degree == 0 {
        // nothing maps into degree 0; the zero 0-cochain stands in as witness
        return Ok(diff.is_zero().then(|| Cochain::zero(nerve, 0, coeff)));
    }
    let d = nerve.coboundary_matrix(a.degree - 1);
    let x = match &coeff {
        Coefficients::Mod(n) => {
            let rhs: Vec<BigInt> = diff.values.iter().map(|v| v.to_integer()).collect();
            match solve_mod(&d, &rhs, n) {
                Some(x) => x.into_iter().map(BigRational::from_integer).collect(),
                None => return Ok(None),
            }
        }
        Coefficients::RationalModOne => match solve_rational_mod_one(&d, &diff.values) {
            Some(x) => x,
            None => return Ok(None),
        },
    };
    let w = Cochain::new(nerve, a.degree - 1, coeff, x)?;
    if coboundary(&w)? != diff {
        return Err(Error::invariant("cohomology witness fails δx = a − b"));
    }
    Ok(Some(w))
}

/// Solves D x ≡ d (mod Z^m) over Q.
fn solve_rational_mod_one(d: &IntMatrix, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let s = smith_normal_form(d);
    let e: Vec<BigRational> = (0..d.rows())
        .map(|i| {
            s.u.row(i)
                .iter()
                .zip(rhs)
                .fold(BigRational::zero(), |acc, (u, r)| acc + r * u)
        })
        .collect();
    if e[s.rank()..].iter().any(|x| !x.is_integer()) {
        return None;
    }
    let mut y = vec![BigRational::zero(); d.cols()];
    for i in 0..s.rank() {
        y[i] = &e[i] / BigRational::from_integer(s.d[(i, i)].clone());
    }
    Some(
        (0..d.cols())
            .map(|i| {
                s.v.row(i)
                    .iter()
                    .zip(&y)
                    .fold(BigRational::zero(), |acc, (v, yj)| acc + yj * v)
            })
            .collect(),
    )
}

/// Rank-one transition data λ (a 1-cochain) and its twist α (a 2-cochain).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingData {
    pub lambda: Cochain,
    pub alpha: Cochain,
}

impl GluingData {
    pub fn new(lambda: Cochain, alpha: Cochain) -> Result<Self> {
        if lambda.degree != 1 || alpha.degree != 2 {
            return Err(Error::invalid("gluing data needs a 1-cochain and a 2-cochain"));
        }
        if lambda.coefficients != alpha.coefficients {
            return Err(Error::invalid("λ and α use different coefficients"));
        }
        if !Arc::ptr_eq(&lambda.nerve, &alpha.nerve) && lambda.nerve != alpha.nerve {
            return Err(Error::invalid("λ and α live on different nerves"));
        }
        Ok(GluingData { lambda, alpha })
    }

    /// The data λ with the twist it actually satisfies, α = δλ.
    pub fn untwisted_by(lambda: Cochain) -> Result<Self> {
        let alpha = coboundary(&lambda)?;
        Self::new(lambda, alpha)
    }

    /// λ_ij for any ordered pair with an edge: λ_ii = 0 and λ_ji = −λ_ij.
    pub fn transition(&self, i: usize, j: usize) -> Option<BigRational> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => (i < self.lambda.nerve.vertex_count()).then(BigRational::zero),
            Less => self.lambda.value(&[i, j]).cloned(),
            Greater => self
                .lambda
                .value(&[j, i])
                .map(|v| self.lambda.coefficients.reduce(&-v).expect("same group")),
        }
    }

    pub fn inverse(&self) -> GluingData {
        GluingData {
            lambda: self.lambda.neg(),
            alpha: self.alpha.neg(),
        }
    }
}

/// Result of [`verify_gluing`]: the triangles where λ_ij + λ_jk + λ_ki ≠ α_ijk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingCheck {
    pub passed: bool,
    pub failures: Vec<Vec<usize>>,
}

pub fn verify_gluing(g: &GluingData) -> GluingCheck {
    let nerve = &g.lambda.nerve;
    let mut failures = Vec::new();
    for v in 0..nerve.vertex_count() {
        if g.transition(v, v).map_or(true, |x| !x.is_zero()) {
            failures.push(vec![v]);
        }
    }
    for e in nerve.simplices(1) {
        let (i, j) = (e[0], e[1]);
        let sum = match (g.transition(i, j), g.transition(j, i)) {
            (Some(a), Some(b)) => g.lambda.coefficients.reduce(&(a + b)).ok(),
            _ => None,
        };
        if sum.map_or(true, |s| !s.is_zero()) {
            failures.push(e.clone());
        }
    }
    for (t, s) in nerve.simplices(2).iter().enumerate() {
        let (i, j, k) = (s[0], s[1], s[2]);
        let total = [(i, j), (j, k), (k, i)]
            .iter()
            .map(|&(a, b)| g.transition(a, b).expect("faces of a triangle are edges"))
            .fold(BigRational::zero(), |acc, x| acc + x);
        let lhs = g.lambda.coefficients.reduce(&total).expect("same group");
        if lhs != g.alpha.values[t] {
            failures.push(s.clone());
        }
    }
    GluingCheck {
        passed: failures.is_empty(),
        failures,
    }
}

/// Tensor product of rank-one twisted data: transitions and twists add.
pub fn tensor_gluing(g: &GluingData, h: &GluingData) -> Result<GluingData> {
    GluingData::new(g.lambda.add(&h.lambda)?, g.alpha.add(&h.alpha)?)
}

/// Hom(g, h): twist(h) − twist(g).
pub fn hom_gluing(g: &GluingData, h: &GluingData) -> Result<GluingData> {
    GluingData::new(h.lambda.sub(&g.lambda)?, h.alpha.sub(&g.alpha)?)
}
