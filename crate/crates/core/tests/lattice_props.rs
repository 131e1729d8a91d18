mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use mukai_lattice::lattice::linalg::{hermite_normal_form, kernel_mod, solve_mod};
use mukai_lattice::lattice::standard::{k3_lattice, e8_negative, hyperbolic_plane};
use mukai_lattice::lattice::{smith_normal_form, IntMatrix, Lattice, Sublattice};
use mukai_lattice::mukai::mukai_lattice;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_matches_determinantal_divisors(seed: u64, rows in 1usize..=6, cols in 1usize..=6) {
        let a = random_matrix(&mut rng(seed), rows, cols, 9);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.checked_mul(&a).unwrap().checked_mul(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(s.u.checked_mul(&s.u_inv).unwrap(), IntMatrix::identity(rows));
        prop_assert_eq!(s.v.checked_mul(&s.v_inv).unwrap(), IntMatrix::identity(cols));
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(f.iter().all(|x| x.is_positive()));
        prop_assert_eq!(f, invariant_factors_by_minors(&a));
    }

    #[test]
    fn hermite_form_is_a_row_lattice_invariant(seed: u64, rows in 1usize..=5, cols in 1usize..=5) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, rows, cols, 9);
        // a unimodular left factor from a random matrix's Smith transform
        let u = smith_normal_form(&random_matrix(&mut r, rows, rows, 5)).u;
        let b = u.checked_mul(&a).unwrap();
        prop_assert_eq!(hermite_normal_form(&a), hermite_normal_form(&b));
    }

    #[test]
    fn signature_matches_descartes(seed: u64, rank in 1usize..=6) {
        let g = random_even_gram(&mut rng(seed), rank);
        let l = Lattice::nondegenerate(g.clone()).unwrap();
        prop_assert_eq!(l.signature().unwrap(), signature_by_descartes(&g));
    }

    #[test]
    fn complements(seed: u64, rank in 2usize..=6, sub in 1usize..=3) {
        let mut r = rng(seed);
        let ambient = Arc::new(Lattice::nondegenerate(random_even_gram(&mut r, rank)).unwrap());
        let gens = random_matrix(&mut r, rank, sub.min(rank - 1), 4);
        prop_assume!(gens.rank() == gens.cols());
        let s = Sublattice::new(Arc::clone(&ambient), gens).unwrap();
        let c = s.orthogonal_complement();
        prop_assert_eq!(s.rank() + c.rank(), rank);
        prop_assert!(c.is_saturated());
        for x in s.basis().columns() {
            for y in c.basis().columns() {
                prop_assert!(ambient.pairing(&x, &y).unwrap().is_zero());
            }
        }
        let sat = s.saturation();
        prop_assert!(sat.is_saturated());
        prop_assert!(sat.contains_sublattice(&s));
        prop_assert!(c.orthogonal_complement().contains_sublattice(&sat));
        if !s.gram().determinant().unwrap().is_zero() {
            prop_assert!(c.orthogonal_complement().same_as(&sat));
        }
        // [sat : s] is the product of the Smith factors of the basis
        let q = sat.quotient_structure(&s).unwrap();
        let prod = smith_normal_form(s.basis()).invariant_factors().iter().fold(BigInt::one(), |a, b| a * b);
        prop_assert_eq!(q.index().clone(), prod);
    }

    #[test]
    fn modular_solutions(seed: u64, rows in 1usize..=4, cols in 1usize..=4, n in 2i64..=12) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, rows, cols, 9);
        let x: Vec<BigInt> = (0..cols).map(|i| BigInt::from((seed as i64).wrapping_add(i as i64) % 7)).collect();
        let b = a.mul_vec(&x).unwrap();
        let n = BigInt::from(n);
        let y = solve_mod(&a, &b, &n).expect("b is in the image");
        let ay = a.mul_vec(&y).unwrap();
        prop_assert!(ay.iter().zip(&b).all(|(p, q)| ((p - q) % &n).is_zero()));
        let k = kernel_mod(&a, &n);
        prop_assert_eq!(k.rank(), cols);
        for col in k.columns() {
            prop_assert!(a.mul_vec(&col).unwrap().iter().all(|v| (v % &n).is_zero()));
        }
    }
}

#[test]
fn fixed_lattices() {
    let u = hyperbolic_plane();
    assert_eq!(u.determinant(), BigInt::from(-1));
    let e8 = e8_negative();
    assert_eq!(signature_by_descartes(e8.gram()), (0, 8));
    assert_eq!(e8.determinant(), BigInt::one());
    let k3 = k3_lattice();
    assert_eq!(k3.signature().unwrap(), (3, 19));
    assert_eq!(k3.determinant(), BigInt::from(-1));
    assert!(k3.classify_form().even && k3.classify_form().unimodular);
    let m = mukai_lattice();
    assert_eq!(m.signature().unwrap(), (4, 20));
    assert_eq!(m.determinant(), BigInt::one());
    assert!(m.classify_form().even);
}
