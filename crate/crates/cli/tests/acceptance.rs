//! Acceptance criteria, one PASS/FAIL line each. Exact arithmetic throughout,
//! so every comparison is equality; only the runtime limits are bounds.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use mukai_lattice::brauer::{
    brauer_from_h2_class, kummer_torsion_order, obstruction_from_bundle, p_map, topological_twisting_class,
};
use mukai_lattice::cech::{
    cech_cohomology, coboundary, hom_gluing, tensor_gluing, verify_gluing, GluingData, Nerve,
};
use mukai_lattice::dp_twist::dp_identity_check;
use mukai_lattice::lattice::standard::{k3_lattice, FIRST_U_E, FIRST_U_F, K3_RANK};
use mukai_lattice::moduli::{
    fineness_index, moduli_lattice, moduli_ns_and_t, mukai_lambda, obstruction_group, phi_transcendental,
    satisfies_lambda_condition, verify_theorem_suite, ModuliProblem,
};
use mukai_lattice::mukai::{mukai_lattice, K3Surface, MukaiVector};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn c1_lattice_constants() -> Outcome {
    let k3 = k3_lattice();
    let f = k3.classify_form();
    ensure!(f.even, "K3 lattice not even");
    ensure!(k3.determinant() == BigInt::from(-1), "K3 det {}", k3.determinant());
    ensure!(k3.signature().ok() == Some((3, 19)), "K3 signature {:?}", k3.signature());
    let m = mukai_lattice();
    ensure!(m.classify_form().even, "Mukai lattice not even");
    ensure!(m.determinant() == BigInt::one(), "Mukai det {}", m.determinant());
    ensure!(m.signature().ok() == Some((4, 20)), "Mukai signature {:?}", m.signature());
    Ok("K3 even, det −1, (3,19); Mukai even, det 1, (4,20)".into())
}

fn problem(k: i64, r: i64, m: i64, s: i64) -> ModuliProblem {
    let l: Vec<BigInt> = h(k).iter().map(|c| c * m).collect();
    ModuliProblem::new(K3Surface::picard_rank_one(k).unwrap(), MukaiVector::new(r.into(), l, s.into()).unwrap()).unwrap()
}

fn c2_fine_desk() -> Outcome {
    let p = problem(2, 2, 1, 1);
    let n = fineness_index(&p);
    ensure!(n.is_one(), "n = {n}");
    let ml = moduli_lattice(&p).map_err(|e| e.to_string())?;
    let l = ml.lattice();
    let f = l.classify_form();
    ensure!(f.even && f.unimodular && l.signature().ok() == Some((3, 19)), "v⊥/v is {f:?}, {:?}", l.signature());
    let (_, t_m) = moduli_ns_and_t(&p, &ml).map_err(|e| e.to_string())?;
    let phi = phi_transcendental(&p, &ml, &t_m).map_err(|e| e.to_string())?;
    ensure!(phi.cokernel.index().is_one(), "[T_M : φ(T_X)] = {}", phi.cokernel.index());
    ensure!(phi.image.same_as(&t_m), "φ(T_X) ≠ T_M");
    let lambda = mukai_lambda(&p, &phi).map_err(|e| e.to_string())?;
    let obs = obstruction_group(&phi, &lambda).map_err(|e| e.to_string())?;
    ensure!(obs.order.is_one() && obs.canonical().is_zero(), "obstruction order {}", obs.order);
    Ok("n = 1, v⊥/v even unimodular (3,19), φ onto T_M, obstruction trivial".into())
}

fn c3_nonfine_desk() -> Outcome {
    let p = problem(4, 2, 1, 2);
    let n = fineness_index(&p);
    ensure!(n == BigInt::from(2), "n = {n}");
    let ml = moduli_lattice(&p).map_err(|e| e.to_string())?;
    let (_, t_m) = moduli_ns_and_t(&p, &ml).map_err(|e| e.to_string())?;
    let phi = phi_transcendental(&p, &ml, &t_m).map_err(|e| e.to_string())?;
    ensure!(phi.cokernel.index() == &BigInt::from(2), "[T_M : φ(T_X)] = {}", phi.cokernel.index());
    let mut e_minus_4f = vec![BigInt::zero(); K3_RANK];
    e_minus_4f[FIRST_U_E] = 1.into();
    e_minus_4f[FIRST_U_F] = (-4).into();
    ensure!(satisfies_lambda_condition(&p, &e_minus_4f), "e − 4f fails the λ condition");
    let lambda = mukai_lambda(&p, &phi).map_err(|e| e.to_string())?;
    ensure!(lambda.h2 == e_minus_4f, "computed λ differs from e − 4f");
    let obs = obstruction_group(&phi, &lambda).map_err(|e| e.to_string())?;
    ensure!(obs.generators.len() == 1, "{} generators", obs.generators.len());
    let g = &obs.generators[0].1;
    ensure!(g.order() == BigInt::from(2), "generator order {}", g.order());
    ensure!(g.kernel().same_as(&phi.image), "Ker α ≠ φ(T_X)");
    Ok("n = 2, index 2, λ = e − 4f, one generator of order 2 with kernel φ(T_X)".into())
}

fn c4_theorem_suite() -> Outcome {
    let mut runs = 0;
    let mut non_fine = 0;
    for k in 1..=12 {
        for v in admissible_vectors(k) {
            let p = ModuliProblem::new(K3Surface::picard_rank_one(k).unwrap(), v.clone()).map_err(|e| e.to_string())?;
            let report = verify_theorem_suite(&p);
            if let Some(c) = report.checks.iter().find(|c| !c.passed) {
                return Err(format!("k={k} v=({}, .., {}): clause {} {}", v.r, v.s, c.id, c.detail));
            }
            ensure!(!report.checks.is_empty(), "no clauses recorded");
            runs += 1;
            non_fine += usize::from(!report.n.is_one());
        }
    }
    ensure!(runs >= 100, "only {runs} runs");
    Ok(format!("{runs} runs ({non_fine} non-fine), every clause passes"))
}

fn c5_brauer() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let a = random_class(r.gen(), r.gen_range(1..=6));
        let k = a.kernel();
        let q = a.lattice().quotient_structure(&k).map_err(|e| e.to_string())?;
        ensure!(q.index() == &a.order(), "case {i}: index {} ≠ order {}", q.index(), a.order());
        let image = generated_subgroup(&a.values().iter().map(|v| vec![v.clone()]).collect::<Vec<_>>());
        ensure!(BigInt::from(image.len()) == a.order(), "case {i}: oracle image {} ≠ order", image.len());
    }
    for i in 0..100 {
        let k = r.gen_range(1..=12);
        let x = K3Surface::picard_rank_one(k).unwrap();
        let w: Vec<BigRational> = (0..K3_RANK).map(|_| q(r.gen_range(-6..=6), r.gen_range(1..=6))).collect();
        let t = q(r.gen_range(-7..=7), r.gen_range(1..=7));
        let shifted: Vec<BigRational> = w
            .iter()
            .zip(h(k))
            .map(|(wi, hi)| wi + BigRational::from_integer(r.gen_range(-4..=4).into()) + &t * BigRational::from_integer(hi))
            .collect();
        let same = brauer_from_h2_class(&x, &w).unwrap().equals(&brauer_from_h2_class(&x, &shifted).unwrap());
        ensure!(same == Ok(true), "case {i}: B-field class moved");
    }
    for i in 0..100 {
        let x = K3Surface::picard_rank_one(r.gen_range(1..=12)).unwrap();
        let c1: Vec<BigInt> = (0..K3_RANK).map(|_| BigInt::from(r.gen_range(-20..=20))).collect();
        let n = BigInt::from(r.gen_range(1..=12));
        let t = topological_twisting_class(&c1, &n).map_err(|e| e.to_string())?;
        let via_p = p_map(x.transcendental(), &t).map_err(|e| e.to_string())?;
        let direct = obstruction_from_bundle(x.transcendental(), &c1, &n).map_err(|e| e.to_string())?;
        ensure!(via_p.equals(&direct) == Ok(true), "case {i}: p∘t ≠ [−c₁/n]");
    }
    Ok("100 kernel indices, 100 B-field shifts, 100 twisting classes".into())
}

fn c6_kummer() -> Outcome {
    for (rho, n) in [(1usize, 2i64), (20, 3)] {
        let n = BigInt::from(n);
        let got = kummer_torsion_order(rho, &n).map_err(|e| e.to_string())?;
        let expect = num_traits::pow(n.clone(), K3_RANK - rho);
        // |H²(Z/n)| / |NS/n| from 0 → NS/n → H²(Z/n) → Br[n] → 0
        let exact = num_traits::pow(n.clone(), K3_RANK) / num_traits::pow(n.clone(), rho);
        ensure!(got == expect && got == exact, "(ρ,n)=({rho},{n}): {got}");
    }
    let x = rank_twenty();
    ensure!(x.picard_rank() == 20, "rank-20 surface has ρ = {}", x.picard_rank());
    let mut classes = std::collections::BTreeSet::new();
    for a in 0..3 {
        for b in 0..3 {
            let mut w = vec![BigRational::zero(); K3_RANK];
            w[18] = q(a, 3);
            w[20] = q(b, 3);
            classes.insert(brauer_from_h2_class(&x, &w).unwrap().values().to_vec());
        }
    }
    ensure!(classes.len() == 9, "enumerated |Br[3]| = {}", classes.len());
    Ok("(1,2) → 2^21, (20,3) → 9, matching the exact sequence and enumeration".into())
}

fn c7_dp() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let mut largest = 0;
    for i in 0..200 {
        let (p, _) = random_twisted_pair(r.gen());
        let check = dp_identity_check(&p);
        ensure!(check.passed, "pair {i}: {}", check.detail);
        let oracle = joint_image_order(&p);
        ensure!(oracle <= 36, "pair {i}: quotient of order {oracle}");
        ensure!(check.index == BigInt::from(oracle), "pair {i}: index {} ≠ oracle {oracle}", check.index);
        largest = largest.max(oracle);
    }
    Ok(format!("200 pairs agree with residue enumeration (largest quotient {largest})"))
}

fn c8_cech() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let nerve = Arc::new(random_nerve(&mut r, 7));
        let coeff = random_coefficients(&mut r);
        for degree in 0..=1 {
            let c = random_cochain(&mut r, &nerve, degree, &coeff);
            let dd = coboundary(&coboundary(&c).unwrap()).unwrap();
            ensure!(dd.is_zero(), "case {i}: δδ ≠ 0 in degree {degree}");
        }
        let lambda = random_cochain(&mut r, &nerve, 1, &coeff);
        let good = GluingData::untwisted_by(lambda.clone()).unwrap();
        ensure!(verify_gluing(&good).passed, "case {i}: α = δλ rejected");
        let bump = random_cochain(&mut r, &nerve, 2, &coeff);
        let bad = GluingData::new(lambda, good.alpha.add(&bump).unwrap()).unwrap();
        ensure!(verify_gluing(&bad).passed == bump.is_zero(), "case {i}: α ≠ δλ accepted");
        let other = GluingData::new(random_cochain(&mut r, &nerve, 1, &coeff), random_cochain(&mut r, &nerve, 2, &coeff)).unwrap();
        let t = tensor_gluing(&good, &other).unwrap();
        let hm = hom_gluing(&good, &other).unwrap();
        ensure!(t.alpha == good.alpha.add(&other.alpha).unwrap(), "case {i}: tensor law");
        ensure!(hm.alpha == other.alpha.sub(&good.alpha).unwrap(), "case {i}: hom law");
    }
    let sphere = Nerve::boundary_of_tetrahedron();
    let ball = Nerve::solid_tetrahedron();
    for n in [2i64, 3, 4, 6] {
        let nb = BigInt::from(n);
        let h2 = cech_cohomology(&sphere, 2, &nb).map_err(|e| e.to_string())?;
        ensure!(h2.invariant_factors() == [nb.clone()], "H²(sphere, Z/{n}) = {h2}");
        let b2 = cech_cohomology(&ball, 2, &nb).map_err(|e| e.to_string())?;
        ensure!(b2.is_trivial(), "H²(ball, Z/{n}) = {b2}");
    }
    Ok("δδ = 0, gluing iff α = δλ, twist laws on 100 cases; H²(sphere) = Z/n, H²(ball) = 0".into())
}

fn c10_determinism() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    files.sort();
    let commands = ["analyze-moduli", "brauer-order", "brauer-kernel", "dp-check", "cech-h2", "twist-class"];
    for f in &files {
        let name = f.file_name().unwrap().to_string_lossy();
        let cmd = commands
            .iter()
            .filter(|c| name.starts_with(*c))
            .max_by_key(|c| c.len())
            .ok_or_else(|| format!("no command for {name}"))?;
        let run = || Command::new(env!("CARGO_BIN_EXE_mukai")).args([cmd, "-i"]).arg(f).output().unwrap();
        let (a, b) = (run(), run());
        ensure!(!a.stdout.is_empty(), "{name}: empty output");
        ensure!(a.stdout == b.stdout && a.status.code() == b.status.code(), "{name}: outputs differ");
    }
    Ok(format!("{} corpus files, two runs each, byte-identical", files.len()))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 9] = [
        (1, "lattice constants", Duration::from_secs(1), c1_lattice_constants),
        (2, "fine desk instance", Duration::from_secs(5), c2_fine_desk),
        (3, "non-fine desk instance", Duration::from_secs(5), c3_nonfine_desk),
        (4, "randomized theorem suite", Duration::from_secs(60), c4_theorem_suite),
        (5, "Brauer identities", Duration::MAX, c5_brauer),
        (6, "Kummer count", Duration::MAX, c6_kummer),
        (7, "kernel intersection identity", Duration::MAX, c7_dp),
        (8, "Čech suite", Duration::MAX, c8_cech),
        (10, "determinism", Duration::MAX, c10_determinism),
    ];
    let mut failed = 0;
    let mut lattice_level = true;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let line = match outcome {
            Ok(detail) if elapsed <= limit => format!("PASS {id:>2} {name}: {detail} [{} ms]", elapsed.as_millis()),
            Ok(_) => format!("FAIL {id:>2} {name}: took {} ms, limit {} ms", elapsed.as_millis(), limit.as_millis()),
            Err(e) => format!("FAIL {id:>2} {name}: {e}"),
        };
        if line.starts_with("FAIL") {
            failed += 1;
            if (2..=4).contains(&id) {
                lattice_level = false;
            }
        }
        println!("{line}");
        if id == 8 {
            // nothing to compute: the derived equivalence, the general criterion and
            // the conjecture are outside the lattice model; their lattice-level
            // consequences are criteria 2 to 4
            if lattice_level {
                println!("PASS  9 scope: derived equivalence and conjecture out of scope; lattice shadows 2-4 hold");
            } else {
                failed += 1;
                println!("FAIL  9 scope: a lattice-level consequence (2-4) failed");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
