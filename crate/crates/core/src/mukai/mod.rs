//! The Mukai lattice of a K3 surface and Chern-character bookkeeping.
//!
//! Vectors are triples `(r, l, s)` in H⁰ ⊕ H² ⊕ H⁴, with `l` in the fixed
//! K3 basis E8(−1)² ⊕ U³ and `s` an integer multiple of the fundamental class.
//! As a rank-24 lattice the coordinate order is `(r, l₁, …, l₂₂, s)`.

mod surface;

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::linalg::is_primitive;
use crate::lattice::standard::{k3_lattice, K3_RANK};
use crate::lattice::{IntMatrix, Lattice};

pub use surface::K3Surface;

pub const MUKAI_RANK: usize = K3_RANK + 2;
/// Position of the H⁴ coefficient in rank-24 coordinates.
pub const S_INDEX: usize = K3_RANK + 1;

/// The shared Λ_K3 instance.
pub fn k3() -> &'static Arc<Lattice> {
    static K3: OnceLock<Arc<Lattice>> = OnceLock::new();
    K3.get_or_init(|| Arc::new(k3_lattice()))
}

/// The rank-24 Mukai lattice: Λ_K3 on the middle block, [[0,−1],[−1,0]] on
/// the (r, s) coordinates.
pub fn mukai_lattice() -> &'static Arc<Lattice> {
    static MUKAI: OnceLock<Arc<Lattice>> = OnceLock::new();
    MUKAI.get_or_init(|| {
        let mut g = IntMatrix::zeros(MUKAI_RANK, MUKAI_RANK);
        let k = k3().gram();
        for i in 0..K3_RANK {
            for j in 0..K3_RANK {
                g[(i + 1, j + 1)] = k[(i, j)].clone();
            }
        }
        g[(0, S_INDEX)] = BigInt::from(-1);
        g[(S_INDEX, 0)] = BigInt::from(-1);
        Arc::new(Lattice::new(g).expect("symmetric by construction"))
    })
}

fn h2_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    k3().pairing(a, b).expect("H² coordinates have length 22")
}

fn h2_dot_rational(a: &[BigRational], b: &[BigRational]) -> BigRational {
    let g = k3().gram();
    let mut acc = BigRational::zero();
    for i in 0..K3_RANK {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..K3_RANK {
            if !g[(i, j)].is_zero() && !b[j].is_zero() {
                acc += &a[i] * &b[j] * BigRational::from_integer(g[(i, j)].clone());
            }
        }
    }
    acc
}

fn check_h2_len(len: usize) -> Result<()> {
    if len != K3_RANK {
        return Err(Error::DimensionMismatch {
            expected: K3_RANK,
            found: len,
        });
    }
    Ok(())
}

/// An integral Mukai vector `(r, l, s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MukaiVector {
    pub r: BigInt,
    pub l: Vec<BigInt>,
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new(r: BigInt, l: Vec<BigInt>, s: BigInt) -> Result<Self> {
        check_h2_len(l.len())?;
        Ok(MukaiVector { r, l, s })
    }

    pub fn from_i64(r: i64, l: &[i64], s: i64) -> Result<Self> {
        Self::new(
            BigInt::from(r),
            l.iter().map(|&x| BigInt::from(x)).collect(),
            BigInt::from(s),
        )
    }

    /// `(r, 0, s)`.
    pub fn rs(r: i64, s: i64) -> Self {
        MukaiVector {
            r: BigInt::from(r),
            l: vec![BigInt::zero(); K3_RANK],
            s: BigInt::from(s),
        }
    }

    /// `(0, l, 0)`.
    pub fn from_h2(l: Vec<BigInt>) -> Result<Self> {
        Self::new(BigInt::zero(), l, BigInt::zero())
    }

    pub fn from_coords(coords: &[BigInt]) -> Result<Self> {
        if coords.len() != MUKAI_RANK {
            return Err(Error::DimensionMismatch {
                expected: MUKAI_RANK,
                found: coords.len(),
            });
        }
        Ok(MukaiVector {
            r: coords[0].clone(),
            l: coords[1..=K3_RANK].to_vec(),
            s: coords[S_INDEX].clone(),
        })
    }

    pub fn to_coords(&self) -> Vec<BigInt> {
        let mut c = Vec::with_capacity(MUKAI_RANK);
        c.push(self.r.clone());
        c.extend(self.l.iter().cloned());
        c.push(self.s.clone());
        c
    }

    pub fn is_primitive(&self) -> bool {
        is_primitive(&self.to_coords())
    }

    pub fn to_rational(&self) -> RationalMukaiVector {
        RationalMukaiVector {
            r: BigRational::from_integer(self.r.clone()),
            l: self.l.iter().cloned().map(BigRational::from_integer).collect(),
            s: BigRational::from_integer(self.s.clone()),
        }
    }
}

impl std::ops::Add for &MukaiVector {
    type Output = MukaiVector;

    fn add(self, o: &MukaiVector) -> MukaiVector {
        MukaiVector {
            r: &self.r + &o.r,
            l: self.l.iter().zip(&o.l).map(|(a, b)| a + b).collect(),
            s: &self.s + &o.s,
        }
    }
}

impl std::ops::Sub for &MukaiVector {
    type Output = MukaiVector;

    fn sub(self, o: &MukaiVector) -> MukaiVector {
        MukaiVector {
            r: &self.r - &o.r,
            l: self.l.iter().zip(&o.l).map(|(a, b)| a - b).collect(),
            s: &self.s - &o.s,
        }
    }
}

/// A Mukai vector (or Chern character) with rational entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMukaiVector {
    pub r: BigRational,
    pub l: Vec<BigRational>,
    pub s: BigRational,
}

impl RationalMukaiVector {
    pub fn new(r: BigRational, l: Vec<BigRational>, s: BigRational) -> Result<Self> {
        check_h2_len(l.len())?;
        Ok(RationalMukaiVector { r, l, s })
    }

    pub fn one() -> Self {
        RationalMukaiVector {
            r: BigRational::from_integer(1.into()),
            l: vec![BigRational::zero(); K3_RANK],
            s: BigRational::zero(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        RationalMukaiVector {
            r: &self.r * k,
            l: self.l.iter().map(|x| x * k).collect(),
            s: &self.s * k,
        }
    }

    /// Chern character of a line bundle: `(1, c, c²/2)`.
    pub fn line_bundle(c: &[BigInt]) -> Result<Self> {
        check_h2_len(c.len())?;
        let sq = h2_dot(c, c);
        Ok(RationalMukaiVector {
            r: BigRational::from_integer(1.into()),
            l: c.iter().cloned().map(BigRational::from_integer).collect(),
            s: BigRational::new(sq, 2.into()),
        })
    }
}

/// `(l.l') − r s' − r' s`.
pub fn mukai_pairing(a: &MukaiVector, b: &MukaiVector) -> BigInt {
    h2_dot(&a.l, &b.l) - &a.r * &b.s - &b.r * &a.s
}

pub fn mukai_pairing_rational(a: &RationalMukaiVector, b: &RationalMukaiVector) -> BigRational {
    h2_dot_rational(&a.l, &b.l) - &a.r * &b.s - &b.r * &a.s
}

/// `χ(E, F) = −(v(E) . v(F))`.
pub fn euler_pairing(a: &MukaiVector, b: &MukaiVector) -> BigInt {
    -mukai_pairing(a, b)
}

/// Mukai vector `ch(F)·√Td(X) = (r, c₁, r + c₁²/2 − c₂)`.
///
/// The K3 lattice is even, so `c₁²/2` is always an integer.
pub fn mukai_vector_of_sheaf(r: &BigInt, c1: &[BigInt], c2: &BigInt) -> Result<MukaiVector> {
    check_h2_len(c1.len())?;
    let half_square = h2_dot(c1, c1) / 2;
    Ok(MukaiVector {
        r: r.clone(),
        l: c1.to_vec(),
        s: r + half_square - c2,
    })
}

/// Product in the truncated cohomology ring H⁰ ⊕ H² ⊕ H⁴ of a K3.
pub fn k3_ring_multiply(a: &RationalMukaiVector, b: &RationalMukaiVector) -> RationalMukaiVector {
    RationalMukaiVector {
        r: &a.r * &b.r,
        l: a.l
            .iter()
            .zip(&b.l)
            .map(|(la, lb)| &a.r * lb + &b.r * la)
            .collect(),
        s: &a.r * &b.s + &b.r * &a.s + h2_dot_rational(&a.l, &b.l),
    }
}

/// Todd class of a K3: `(1, 0, 2ω)`.
pub fn todd_class() -> RationalMukaiVector {
    let mut t = RationalMukaiVector::one();
    t.s = BigRational::from_integer(2.into());
    t
}

/// `√Td(X) = (1, 0, ω)`.
pub fn sqrt_todd_class() -> RationalMukaiVector {
    let mut t = RationalMukaiVector::one();
    t.s = BigRational::from_integer(1.into());
    t
}

/// Change of twisted Chern character when the reference sheaf changes:
/// `ch_E'(F) = ch_E(F) · ch(G) / rk(G)`.
pub fn twisted_chern_change(
    ch_e: &RationalMukaiVector,
    ch_g: &RationalMukaiVector,
) -> Result<RationalMukaiVector> {
    if ch_g.r.is_zero() {
        return Err(Error::invalid("reference sheaf G has rank zero"));
    }
    let inv = ch_g.r.recip();
    Ok(k3_ring_multiply(ch_e, ch_g).scale(&inv))
}

/// Twisted slope `(c₁ . H) / r` on a surface.
pub fn twisted_slope(ch: &RationalMukaiVector, polarization: &[BigInt]) -> Result<BigRational> {
    check_h2_len(polarization.len())?;
    if !ch.r.is_positive() {
        return Err(Error::invalid("slope needs positive rank"));
    }
    let h: Vec<BigRational> = polarization
        .iter()
        .cloned()
        .map(BigRational::from_integer)
        .collect();
    Ok(h2_dot_rational(&ch.l, &h) / &ch.r)
}

/// The three hypotheses on a Mukai vector for the moduli space to be a K3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub algebraic: bool,
    pub primitive: bool,
    pub isotropic: bool,
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        self.algebraic && self.primitive && self.isotropic
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.algebraic {
            out.push("not algebraic (H² part is not in NS)");
        }
        if !self.primitive {
            out.push("not primitive");
        }
        if !self.isotropic {
            out.push("not isotropic");
        }
        out
    }
}

pub fn is_admissible_mukai_vector(x: &K3Surface, v: &MukaiVector) -> Admissibility {
    Admissibility {
        algebraic: x.is_algebraic_class(&v.l),
        primitive: v.is_primitive(),
        isotropic: mukai_pairing(v, v).is_zero(),
    }
}
