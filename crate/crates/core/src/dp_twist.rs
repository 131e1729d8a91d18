//! Kernel arithmetic for pairs of Brauer classes on one transcendental
//! lattice: Ker α ∩ Ker β, and the identity Ker_{Ker α}(β|Ker α) = Ker α ∩ Ker β.

use num_bigint::BigInt;

use crate::brauer::BrauerClass;
use crate::error::{Error, Result};
use crate::lattice::Sublattice;

/// Two Brauer classes on the same lattice t.
#[derive(Debug, Clone)]
pub struct TwistedPair {
    t: Sublattice,
    alpha: BrauerClass,
    beta: BrauerClass,
}

impl TwistedPair {
    pub fn new(alpha: BrauerClass, beta: BrauerClass) -> Result<Self> {
        let t = alpha.lattice().clone();
        let beta = if beta.lattice().basis() == t.basis() {
            beta
        } else if beta.lattice().same_as(&t) {
            beta.rebase(&t)?
        } else {
            return Err(Error::invalid("α and β live on different lattices"));
        };
        Ok(TwistedPair { t, alpha, beta })
    }

    pub fn t(&self) -> &Sublattice {
        &self.t
    }

    pub fn alpha(&self) -> &BrauerClass {
        &self.alpha
    }

    pub fn beta(&self) -> &BrauerClass {
        &self.beta
    }

    pub fn swapped(&self) -> TwistedPair {
        TwistedPair {
            t: self.t.clone(),
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }
}

/// Ker α ∩ Ker β, a finite-index sublattice of t.
pub fn kernel_intersection(p: &TwistedPair) -> Sublattice {
    p.alpha
        .kernel()
        .intersection(&p.beta.kernel())
        .expect("kernels share the ambient lattice and have full rank")
}

/// Outcome of [`dp_identity_check`]. On failure `witness` is an ambient
/// vector lying in exactly one of the two sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpCheck {
    pub passed: bool,
    pub index: BigInt,
    pub witness: Option<Vec<BigInt>>,
    pub detail: String,
}

fn one_direction(p: &TwistedPair, expected: &Sublattice) -> Result<Option<Vec<BigInt>>> {
    let k = p.alpha.kernel();
    let restricted = p.beta.restrict(&k)?;
    let lhs = restricted.kernel();
    for x in lhs.basis().columns() {
        if !expected.contains(&x) {
            return Ok(Some(x));
        }
    }
    for x in expected.basis().columns() {
        if !lhs.contains(&x) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Checks Ker_{Ker α}(β̄) = Ker α ∩ Ker β, and the same with α, β swapped.
pub fn dp_identity_check(p: &TwistedPair) -> DpCheck {
    let inter = kernel_intersection(p);
    let index = p
        .t
        .quotient_structure(&inter)
        .map(|q| q.index().clone())
        .unwrap_or_default();
    let mut detail = Vec::new();
    let mut witness = None;
    for (label, pair) in [("α then β", p.clone()), ("β then α", p.swapped())] {
        match one_direction(&pair, &inter) {
            Ok(None) => {}
            Ok(Some(w)) => {
                detail.push(format!("{label}: sides differ"));
                witness.get_or_insert(w);
            }
            Err(e) => detail.push(format!("{label}: {e}")),
        }
    }
    let divides = (p.alpha.order() * p.beta.order()) % &index == BigInt::from(0);
    if !divides {
        detail.push(format!("index {index} does not divide ord α · ord β"));
    }
    DpCheck {
        passed: detail.is_empty(),
        index,
        witness,
        detail: if detail.is_empty() {
            "identity holds in both orders".into()
        } else {
            detail.join("; ")
        },
    }
}
