//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mukai_lattice::brauer::BrauerClass;
use mukai_lattice::cech::{Coefficients, Cochain, Nerve};
use mukai_lattice::dp_twist::TwistedPair;
use mukai_lattice::lattice::standard::{FIRST_U_E, FIRST_U_F, K3_RANK};
use mukai_lattice::lattice::{IntMatrix, Lattice, Sublattice};
use mukai_lattice::mukai::{k3, K3Surface, MukaiVector};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Cofactor expansion; fine for the small sizes used in oracles.
pub fn det_cofactor(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * det_cofactor(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in subsets(n, k - 1).into_iter().filter(|r| r.first().map_or(true, |&x| x > first)) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Invariant factors via determinantal divisors: d_k = gcd of k×k minors,
/// factor k = d_k / d_{k−1}.
pub fn invariant_factors_by_minors(a: &IntMatrix) -> Vec<BigInt> {
    let rows = a.to_rows();
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=a.rows().min(a.cols()) {
        let mut g = BigInt::zero();
        for rs in subsets(a.rows(), k) {
            for cs in subsets(a.cols(), k) {
                let minor: Vec<Vec<BigInt>> =
                    rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect()).collect();
                g = g.gcd(&det_cofactor(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// Characteristic polynomial coefficients (leading first) by Faddeev–LeVerrier.
pub fn char_poly(a: &IntMatrix) -> Vec<BigRational> {
    let n = a.rows();
    let am: Vec<Vec<BigRational>> = a
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mul = |x: &Vec<Vec<BigRational>>, y: &Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &x[i][k] * &y[k][j]))
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![BigRational::one()];
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k−1} + c_{k−1} I
        let mut next = mul(&am, &m);
        for i in 0..n {
            next[i][i] += &coeffs[k - 1];
        }
        m = next;
        let am_k = mul(&am, &m);
        let tr = (0..n).fold(BigRational::zero(), |acc, i| acc + &am_k[i][i]);
        coeffs.push(-tr / BigRational::from_integer(BigInt::from(k as i64)));
    }
    coeffs
}

/// (positive, negative) eigenvalue counts of a nondegenerate symmetric
/// matrix by Descartes' rule (exact because all roots are real).
pub fn signature_by_descartes(a: &IntMatrix) -> (usize, usize) {
    let c = char_poly(a);
    let changes = |cs: &[BigRational]| {
        let signs: Vec<bool> = cs.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let pos = changes(&c);
    // p(−x): flip the sign of odd-degree terms
    let n = c.len() - 1;
    let flipped: Vec<BigRational> = c
        .iter()
        .enumerate()
        .map(|(i, x)| if (n - i) % 2 == 1 { -x } else { x.clone() })
        .collect();
    (pos, changes(&flipped))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::new(rows, cols, data).unwrap()
}

/// Even symmetric nondegenerate gram of the given rank.
pub fn random_even_gram<R: Rng>(rng: &mut R, rank: usize) -> IntMatrix {
    loop {
        let mut m = IntMatrix::zeros(rank, rank);
        for i in 0..rank {
            m[(i, i)] = BigInt::from(2 * rng.gen_range(-3..=3));
            for j in i + 1..rank {
                let x = BigInt::from(rng.gen_range(-3..=3));
                m[(i, j)] = x.clone();
                m[(j, i)] = x;
            }
        }
        if !m.determinant().unwrap().is_zero() {
            return m;
        }
    }
}

/// Random element of (1/m)Z^rank / Z^rank for m in 1..=max_den.
pub fn random_functional<R: Rng>(rng: &mut R, rank: usize, max_den: i64) -> Vec<BigRational> {
    let m = rng.gen_range(1..=max_den);
    (0..rank).map(|_| q(rng.gen_range(0..m), m)).collect()
}

/// The subgroup of (Q/Z)^k generated by `gens`, by breadth-first closure.
pub fn generated_subgroup(gens: &[Vec<BigRational>]) -> BTreeSet<Vec<BigRational>> {
    let reduce = |v: Vec<BigRational>| -> Vec<BigRational> {
        v.into_iter().map(|x| &x - x.floor()).collect()
    };
    let k = gens.first().map_or(0, Vec::len);
    let zero = vec![BigRational::zero(); k];
    let mut seen = BTreeSet::new();
    seen.insert(zero.clone());
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = reduce(x.iter().zip(g).map(|(a, b)| a + b).collect());
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

pub fn h(k: i64) -> Vec<BigInt> {
    let mut l = vec![BigInt::zero(); K3_RANK];
    l[FIRST_U_E] = BigInt::one();
    l[FIRST_U_F] = BigInt::from(k);
    l
}

/// Admissible v = (r, m·h, s) on ⟨2k⟩ with r ∈ [0,6], s ∈ [−12,12], m ∈ [−3,3]:
/// isotropy reads m²k = rs, primitivity gcd(r, m, s) = 1.
pub fn admissible_vectors(k: i64) -> Vec<MukaiVector> {
    let mut out = Vec::new();
    for r in 0..=6i64 {
        for s in -12..=12i64 {
            for m in -3..=3i64 {
                if m * m * k != r * s || r.gcd(&m).gcd(&s) != 1 {
                    continue;
                }
                let l: Vec<BigInt> = h(k).iter().map(|c| c * m).collect();
                out.push(MukaiVector::new(r.into(), l, s.into()).unwrap());
            }
        }
    }
    out
}

/// All cochains of a given length with values in Z/n, as integer vectors.
pub fn all_vectors_mod(len: usize, n: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn random_nerve(r: &mut ChaCha8Rng, max_vertices: usize) -> Nerve {
    let v = r.gen_range(3..=max_vertices);
    let count = r.gen_range(1..=5);
    let faces: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let size = r.gen_range(2..=4.min(v));
            let mut all: Vec<usize> = (0..v).collect();
            for i in 0..size {
                let j = r.gen_range(i..v);
                all.swap(i, j);
            }
            all.truncate(size);
            all
        })
        .collect();
    Nerve::from_maximal(v, &faces).unwrap()
}

pub fn random_cochain(r: &mut ChaCha8Rng, nerve: &Arc<Nerve>, degree: usize, coeff: &Coefficients) -> Cochain {
    let values = (0..nerve.count(degree))
        .map(|_| match coeff {
            Coefficients::Mod(n) => BigRational::from_integer(BigInt::from(r.gen_range(0..100)) % n),
            Coefficients::RationalModOne => q(r.gen_range(0..60), 60),
        })
        .collect();
    Cochain::new(Arc::clone(nerve), degree, coeff.clone(), values).unwrap()
}

pub fn random_coefficients(r: &mut ChaCha8Rng) -> Coefficients {
    match r.gen_range(0..6) {
        0 => Coefficients::RationalModOne,
        n => Coefficients::Mod(BigInt::from(n + 1)),
    }
}

/// |ker δ_k| / |im δ_{k−1}| with Z/n coefficients by listing every cochain.
pub fn brute_force_order(nerve: &Nerve, k: usize, n: i64) -> usize {
    let apply = |deg: usize, x: &[i64]| -> Vec<i64> {
        let d = nerve.coboundary_matrix(deg);
        (0..d.rows())
            .map(|i| {
                let s: i64 = d.row(i).iter().zip(x).map(|(a, b)| i64::try_from(a).unwrap() * b).sum();
                s.rem_euclid(n)
            })
            .collect()
    };
    let cocycles = all_vectors_mod(nerve.count(k), n)
        .into_iter()
        .filter(|x| k == 3 || apply(k, x).iter().all(|&y| y == 0))
        .count();
    let boundaries: BTreeSet<Vec<i64>> = if k == 0 {
        BTreeSet::from([vec![0; nerve.count(0)]])
    } else {
        all_vectors_mod(nerve.count(k - 1), n).iter().map(|x| apply(k - 1, x)).collect()
    };
    cocycles / boundaries.len()
}

pub fn random_twisted_pair(seed: u64) -> (TwistedPair, BrauerClass) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let rank = r.gen_range(1..=6);
    let t = Sublattice::full(Arc::new(Lattice::nondegenerate(random_even_gram(&mut r, rank)).unwrap()));
    let class = |r: &mut ChaCha8Rng| BrauerClass::new(t.clone(), random_functional(r, rank, 6)).unwrap();
    let (a, b, c) = (class(&mut r), class(&mut r), class(&mut r));
    (TwistedPair::new(a, b).unwrap(), c)
}

/// Size of the image of T → (Q/Z)², x ↦ (α(x), β(x)), by residue enumeration.
pub fn joint_image_order(p: &TwistedPair) -> usize {
    let gens: Vec<_> = p
        .alpha()
        .values()
        .iter()
        .zip(p.beta().values())
        .map(|(a, b)| vec![a.clone(), b.clone()])
        .collect();
    generated_subgroup(&gens).len()
}

pub fn random_class(seed: u64, rank: usize) -> BrauerClass {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let t = Sublattice::full(Arc::new(Lattice::nondegenerate(random_even_gram(&mut r, rank)).unwrap()));
    BrauerClass::new(t, random_functional(&mut r, rank, 12)).unwrap()
}

/// A Picard rank 20 surface: NS = E8(−1)² ⊕ U ⊕ ⟨−2⟩ ⊕ ⟨−2⟩, T = ⟨2⟩ ⊕ ⟨2⟩.
pub fn rank_twenty() -> K3Surface {
    let mut m = IntMatrix::zeros(K3_RANK, 20);
    for i in 0..18 {
        m[(i, i)] = 1.into();
    }
    m[(18, 18)] = 1.into();
    m[(19, 18)] = (-1).into();
    m[(20, 19)] = 1.into();
    m[(21, 19)] = (-1).into();
    let gram = k3().gram().congruence(&m).unwrap();
    K3Surface::from_gram_and_embedding(gram, m).unwrap()
}
