//! Fixed lattices: the hyperbolic plane, negative E8 and the K3 lattice.

use num_bigint::BigInt;

use super::form::Lattice;
use super::matrix::IntMatrix;

/// Rank of H²(X, Z) for a K3 surface.
pub const K3_RANK: usize = 22;

/// Index of the first hyperbolic plane's `e` in the K3 basis
/// (E8(−1) ⊕ E8(−1) ⊕ U ⊕ U ⊕ U).
pub const FIRST_U_E: usize = 16;
/// Index of the first hyperbolic plane's `f`.
pub const FIRST_U_F: usize = 17;

/// U with gram [[0, 1], [1, 0]].
pub fn hyperbolic_plane() -> Lattice {
    Lattice::new(IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]])).expect("symmetric")
}

/// The negated Cartan matrix of E8 (Bourbaki labelling: chain 1-3-4-5-6-7-8
/// with node 2 attached to node 4). Negative definite, even, unimodular.
pub fn e8_negative() -> Lattice {
    const EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    let mut g = IntMatrix::zeros(8, 8);
    for i in 0..8 {
        g[(i, i)] = BigInt::from(-2);
    }
    for (a, b) in EDGES {
        g[(a, b)] = BigInt::from(1);
        g[(b, a)] = BigInt::from(1);
    }
    Lattice::new(g).expect("symmetric")
}

/// Λ_K3 = E8(−1)² ⊕ U³, signature (3, 19).
pub fn k3_lattice() -> Lattice {
    let e8 = e8_negative();
    let u = hyperbolic_plane();
    Lattice::direct_sum(&[&e8, &e8, &u, &u, &u])
}

/// The rank-one lattice ⟨d⟩.
pub fn rank_one(d: i64) -> Lattice {
    Lattice::new(IntMatrix::from_i64_rows(&[&[d]])).expect("1x1 is symmetric")
}
