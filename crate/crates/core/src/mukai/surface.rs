use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{k3, mukai_lattice, MUKAI_RANK, S_INDEX};
use crate::error::{Error, Result};
use crate::lattice::standard::{rank_one, FIRST_U_E, FIRST_U_F, K3_RANK};
use crate::lattice::{IntMatrix, Lattice, LatticeEmbedding, Sublattice};

/// A K3 surface seen through its lattice data: a primitive Néron–Severi
/// sublattice of Λ_K3 and the transcendental lattice T = NS⊥.
#[derive(Debug, Clone)]
pub struct K3Surface {
    ns_embedding: LatticeEmbedding,
    ns: Sublattice,
    transcendental: Sublattice,
}

impl K3Surface {
    pub fn new(ns_embedding: LatticeEmbedding) -> Result<Self> {
        if ns_embedding.target().as_ref() != k3().as_ref() {
            return Err(Error::invalid("NS must embed into the K3 lattice"));
        }
        let rho = ns_embedding.source().rank();
        if !(1..=20).contains(&rho) {
            return Err(Error::invalid(format!("Picard rank {rho} outside 1..=20")));
        }
        let ns = Sublattice::new(Arc::clone(k3()), ns_embedding.matrix().clone())?;
        if !ns.is_saturated() {
            return Err(Error::NotSaturated);
        }
        let sig = ns_embedding
            .source()
            .signature()
            .map_err(|_| Error::invalid("NS form is degenerate"))?;
        if sig != (1, rho - 1) {
            return Err(Error::invalid(format!(
                "NS signature {sig:?} is not hyperbolic (1, {})",
                rho - 1
            )));
        }
        let transcendental = ns.orthogonal_complement();
        let tsig = transcendental.as_lattice().signature()?;
        if tsig != (2, 20 - rho) {
            return Err(Error::invariant(format!(
                "transcendental signature {tsig:?}, expected (2, {})",
                20 - rho
            )));
        }
        Ok(K3Surface {
            ns_embedding,
            ns,
            transcendental,
        })
    }

    /// NS from a gram matrix and a 22 × ρ embedding matrix.
    pub fn from_gram_and_embedding(ns_gram: IntMatrix, embedding: IntMatrix) -> Result<Self> {
        let source = Arc::new(Lattice::nondegenerate(ns_gram)?);
        let emb = LatticeEmbedding::new(source, Arc::clone(k3()), embedding)?;
        Self::new(emb)
    }

    /// Picard rank one with NS = ⟨2k⟩, generated by `h = e + k·f` in the
    /// first hyperbolic plane.
    pub fn picard_rank_one(k: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::invalid("degree 2k must be positive"));
        }
        let mut m = IntMatrix::zeros(K3_RANK, 1);
        m[(FIRST_U_E, 0)] = BigInt::one();
        m[(FIRST_U_F, 0)] = BigInt::from(k);
        let emb = LatticeEmbedding::new(Arc::new(rank_one(2 * k)), Arc::clone(k3()), m)?;
        Self::new(emb)
    }

    pub fn ns_embedding(&self) -> &LatticeEmbedding {
        &self.ns_embedding
    }

    pub fn ns(&self) -> &Sublattice {
        &self.ns
    }

    pub fn transcendental(&self) -> &Sublattice {
        &self.transcendental
    }

    pub fn picard_rank(&self) -> usize {
        self.ns.rank()
    }

    /// Whether an H² class lies in NS (NS is primitive, so rational and
    /// integral membership agree).
    pub fn is_algebraic_class(&self, l: &[BigInt]) -> bool {
        l.len() == K3_RANK && self.ns.contains(l)
    }

    /// The algebraic part of the Mukai lattice, spanned by (1,0,0), the NS
    /// basis and (0,0,1), as columns in rank-24 coordinates.
    pub fn algebraic_sublattice(&self) -> Sublattice {
        let rho = self.picard_rank();
        let mut b = IntMatrix::zeros(MUKAI_RANK, rho + 2);
        b[(0, 0)] = BigInt::one();
        let nsb = self.ns.basis();
        for j in 0..rho {
            for i in 0..K3_RANK {
                b[(i + 1, j + 1)] = nsb[(i, j)].clone();
            }
        }
        b[(S_INDEX, rho + 1)] = BigInt::one();
        Sublattice::new(Arc::clone(mukai_lattice()), b).expect("independent by construction")
    }

    /// The transcendental lattice placed in the Mukai lattice as (0, λ, 0).
    pub fn transcendental_in_mukai(&self) -> Sublattice {
        let t = self.transcendental.basis();
        let mut b = IntMatrix::zeros(MUKAI_RANK, t.cols());
        for j in 0..t.cols() {
            for i in 0..K3_RANK {
                b[(i + 1, j)] = t[(i, j)].clone();
            }
        }
        Sublattice::new(Arc::clone(mukai_lattice()), b).expect("independent by construction")
    }

    /// NS generator for the rank-one helper, if this surface came from it.
    pub fn polarization(&self) -> Option<Vec<BigInt>> {
        (self.picard_rank() == 1).then(|| self.ns.basis().column(0))
    }

    pub fn is_zero_on_transcendental(&self, l: &[BigInt]) -> bool {
        self.transcendental
            .basis()
            .columns()
            .iter()
            .all(|t| k3().pairing(l, t).map_or(false, |x| x.is_zero()))
    }
}
