//! Subcommand drivers: a JSON document in, a report out.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use mukai_lattice::brauer::{obstruction_from_bundle, p_map, topological_twisting_class, BrauerClass};
use mukai_lattice::cech::{
    cech_cohomology, coboundary, is_cohomologous, verify_gluing, Coefficients, Cochain, GluingData,
};
use mukai_lattice::dp_twist::{dp_identity_check, kernel_intersection, TwistedPair};
use mukai_lattice::lattice::{IntMatrix, Lattice};
use mukai_lattice::moduli::{verify_theorem_suite, ClauseCheck, ModuliProblem};
use mukai_lattice::mukai::MukaiVector;

use crate::error::{exit, CliError};
use crate::input::*;
use crate::numbers::{ints, rats, unwrap_rats, JsonInt, JsonRat};

pub const REPORT_SCHEMA: &str = "mukai/report/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    AnalyzeModuli,
    BrauerOrder,
    BrauerKernel,
    DpCheck,
    CechH2,
    TwistClass,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::AnalyzeModuli => "analyze-moduli",
            Command::BrauerOrder => "brauer-order",
            Command::BrauerKernel => "brauer-kernel",
            Command::DpCheck => "dp-check",
            Command::CechH2 => "cech-h2",
            Command::TwistClass => "twist-class",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub message: String,
}

/// One report per input document.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub status: Status,
    pub input: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
    #[serde(skip)]
    pub exit_code: i32,
}

/// What a command computed, before it is wrapped in a report.
pub struct Outcome {
    pub input: Value,
    pub result: Value,
    pub passed: bool,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn parse<T: serde::de::DeserializeOwned>(doc: &Value, command: Command) -> Result<T, CliError> {
    let tag = schema_tag(command.name());
    match doc.get("schema").and_then(Value::as_str) {
        Some(s) if s == tag => {}
        Some(s) => {
            return Err(CliError::Malformed(format!(
                "schema {s:?} does not match {tag:?}"
            )))
        }
        None => return Err(CliError::Malformed(format!("missing schema field {tag:?}"))),
    }
    serde_json::from_value(doc.clone()).map_err(|e| CliError::Malformed(e.to_string()))
}

/// Runs one document. Errors become reports with status "error".
pub fn run_document(command: Command, doc: &Value, timing: bool) -> RunReport {
    let start = Instant::now();
    let outcome = match command {
        Command::AnalyzeModuli => parse(doc, command).and_then(|i| run_analyze_moduli(&i)),
        Command::BrauerOrder => parse(doc, command).and_then(|i| run_brauer(&i, false)),
        Command::BrauerKernel => parse(doc, command).and_then(|i| run_brauer(&i, true)),
        Command::DpCheck => parse(doc, command).and_then(|i| run_dp(&i)),
        Command::CechH2 => parse(doc, command).and_then(|i| run_cech(&i)),
        Command::TwistClass => parse(doc, command).and_then(|i| run_twist(&i)),
    };
    let timing_ms = timing.then(|| start.elapsed().as_millis());
    let base = |status, input, exit_code| RunReport {
        schema: REPORT_SCHEMA,
        tool: "mukai",
        version: env!("CARGO_PKG_VERSION"),
        command: command.name(),
        status,
        input,
        result: None,
        error: None,
        timing_ms,
        exit_code,
    };
    match outcome {
        Ok(o) => {
            let (status, code) = if o.passed {
                (Status::Pass, exit::PASS)
            } else {
                (Status::Fail, exit::INVARIANT)
            };
            RunReport {
                result: Some(o.result),
                ..base(status, o.input, code)
            }
        }
        Err(e) => RunReport {
            error: Some(ErrorReport {
                kind: e.kind(),
                message: e.to_string(),
            }),
            ..base(Status::Error, doc.clone(), e.exit_code())
        },
    }
}

/// A single document or an array of documents; batches keep input order.
pub fn run_batch(command: Command, doc: &Value, timing: bool) -> (Value, i32) {
    match doc {
        Value::Array(items) => {
            let reports: Vec<RunReport> = items
                .par_iter()
                .map(|d| run_document(command, d, timing))
                .collect();
            let code = reports.iter().map(|r| r.exit_code).max().unwrap_or(exit::PASS);
            (to_value(&reports), code)
        }
        _ => {
            let r = run_document(command, doc, timing);
            let code = r.exit_code;
            (to_value(&r), code)
        }
    }
}

#[derive(Serialize)]
struct MukaiOut {
    r: JsonInt,
    l: Vec<JsonInt>,
    s: JsonInt,
}

impl From<&MukaiVector> for MukaiOut {
    fn from(v: &MukaiVector) -> Self {
        MukaiOut {
            r: (&v.r).into(),
            l: ints(&v.l),
            s: (&v.s).into(),
        }
    }
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<JsonInt>> {
    m.to_rows().iter().map(|r| ints(r)).collect()
}

fn column_list(m: &IntMatrix) -> Vec<Vec<JsonInt>> {
    m.columns().iter().map(|c| ints(c)).collect()
}

#[derive(Serialize)]
struct LatticeOut {
    rank: usize,
    determinant: JsonInt,
    signature: Option<(usize, usize)>,
    even: bool,
    unimodular: bool,
}

impl From<&Lattice> for LatticeOut {
    fn from(l: &Lattice) -> Self {
        let c = l.classify_form();
        LatticeOut {
            rank: l.rank(),
            determinant: l.determinant().into(),
            signature: l.signature().ok(),
            even: c.even,
            unimodular: c.unimodular,
        }
    }
}

#[derive(Serialize)]
struct ClassOut {
    order: JsonInt,
    values: Vec<JsonRat>,
}

impl From<&BrauerClass> for ClassOut {
    fn from(a: &BrauerClass) -> Self {
        ClassOut {
            order: a.order().into(),
            values: rats(a.values()),
        }
    }
}

#[derive(Serialize)]
struct GeneratorOut {
    k: JsonInt,
    order: JsonInt,
    values: Vec<JsonRat>,
}

#[derive(Serialize)]
struct ObstructionOut {
    order: JsonInt,
    canonical: ClassOut,
    generators: Vec<GeneratorOut>,
}

#[derive(Serialize)]
struct ModuliOut {
    picard_rank: usize,
    v: MukaiOut,
    fineness_index: JsonInt,
    moduli_lattice: Option<LatticeOut>,
    moduli_gram: Option<Vec<Vec<JsonInt>>>,
    ns_m_basis: Option<Vec<Vec<JsonInt>>>,
    ns_m_gram: Option<Vec<Vec<JsonInt>>>,
    t_m: Option<LatticeOut>,
    cokernel: Option<Vec<JsonInt>>,
    lambda: Option<Vec<JsonInt>>,
    lambda_t_coords: Option<Vec<JsonInt>>,
    obstruction: Option<ObstructionOut>,
    u: Option<MukaiOut>,
    checks: Vec<ClauseCheck>,
}

pub fn run_analyze_moduli(input: &AnalyzeModuliInput) -> Result<Outcome, CliError> {
    let x = input.surface.build()?;
    let v = input.v.build(&x)?;
    let problem = ModuliProblem::new(x.clone(), v)?;
    let r = verify_theorem_suite(&problem);
    let out = ModuliOut {
        picard_rank: x.picard_rank(),
        v: (&r.v).into(),
        fineness_index: (&r.n).into(),
        moduli_lattice: r.moduli_lattice.as_ref().map(|m| m.lattice().as_ref().into()),
        moduli_gram: r.moduli_lattice.as_ref().map(|m| matrix_rows(m.lattice().gram())),
        ns_m_basis: r.ns_m.as_ref().map(|s| column_list(s.basis())),
        ns_m_gram: r.ns_m.as_ref().map(|s| matrix_rows(&s.gram())),
        t_m: r.t_m.as_ref().map(|t| (&t.as_lattice()).into()),
        cokernel: r.phi.as_ref().map(|p| ints(p.cokernel.group().invariant_factors())),
        lambda: r.lambda.as_ref().map(|l| ints(&l.h2)),
        lambda_t_coords: r.lambda.as_ref().map(|l| ints(&l.t_coords)),
        obstruction: r.obstruction.as_ref().map(|o| ObstructionOut {
            order: (&o.order).into(),
            canonical: o.canonical().into(),
            generators: o
                .generators
                .iter()
                .map(|(k, a)| GeneratorOut {
                    k: k.into(),
                    order: a.order().into(),
                    values: rats(a.values()),
                })
                .collect(),
        }),
        u: r.u.as_ref().map(Into::into),
        checks: r.checks.clone(),
    };
    Ok(Outcome {
        input: to_value(input),
        result: to_value(&out),
        passed: r.all_passed(),
    })
}

#[derive(Serialize)]
struct BrauerOut {
    lattice_rank: usize,
    order: JsonInt,
    values: Vec<JsonRat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kernel_index: Option<JsonInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kernel_basis: Option<Vec<Vec<JsonInt>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expect_order_met: Option<bool>,
}

fn run_brauer(input: &BrauerInput, with_kernel: bool) -> Result<Outcome, CliError> {
    let host = input.lattice.build()?;
    let a = host.class(&input.class, "class")?;
    let (kernel_index, kernel_basis, kernel_ok) = if with_kernel {
        let k = a.kernel();
        let q = a.lattice().quotient_structure(&k)?;
        let ok = q.index() == &a.order() && q.group().is_cyclic();
        (Some(q.index().into()), Some(column_list(k.basis())), ok)
    } else {
        (None, None, true)
    };
    let expect_order_met = input.expect_order.as_ref().map(|e| e.0 == a.order());
    let passed = kernel_ok && expect_order_met != Some(false);
    let out = BrauerOut {
        lattice_rank: a.lattice().rank(),
        order: a.order().into(),
        values: rats(a.values()),
        kernel_index,
        kernel_basis,
        expect_order_met,
    };
    Ok(Outcome {
        input: to_value(input),
        result: to_value(&out),
        passed,
    })
}

#[derive(Serialize)]
struct DpOut {
    passed: bool,
    detail: String,
    order_alpha: JsonInt,
    order_beta: JsonInt,
    intersection_index: JsonInt,
    intersection_basis: Vec<Vec<JsonInt>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<JsonInt>>,
}

fn run_dp(input: &DpInput) -> Result<Outcome, CliError> {
    let host = input.lattice.build()?;
    let alpha = host.class(&input.alpha, "alpha")?;
    let beta = host.class(&input.beta, "beta")?;
    let pair = TwistedPair::new(alpha, beta)?;
    let check = dp_identity_check(&pair);
    let inter = kernel_intersection(&pair);
    let out = DpOut {
        passed: check.passed,
        detail: check.detail.clone(),
        order_alpha: pair.alpha().order().into(),
        order_beta: pair.beta().order().into(),
        intersection_index: (&check.index).into(),
        intersection_basis: column_list(inter.basis()),
        witness: check.witness.as_deref().map(ints),
    };
    Ok(Outcome {
        input: to_value(input),
        result: to_value(&out),
        passed: check.passed,
    })
}

#[derive(Serialize)]
struct CocycleOut {
    is_cocycle: bool,
    trivial: Option<bool>,
    witness: Option<Vec<JsonRat>>,
}

#[derive(Serialize)]
struct GluingOut {
    passed: bool,
    coboundary_of_lambda: Vec<JsonRat>,
    failures: Vec<Vec<usize>>,
    twist_trivial: Option<bool>,
}

#[derive(Serialize)]
struct CechOut {
    coefficients: String,
    degree: usize,
    simplex_counts: Vec<usize>,
    simplices: Vec<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cohomology: Option<Vec<JsonInt>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cohomology_order: Option<JsonInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cocycle: Option<CocycleOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gluing: Option<GluingOut>,
}

fn run_cech(input: &CechInput) -> Result<Outcome, CliError> {
    let nerve = Arc::new(input.nerve.build()?);
    let coeff = Coefficients::from_modulus(&input.modulus.0)?;
    if input.degree > 2 {
        return Err(CliError::invalid("degree must be at most 2"));
    }
    let group = match &coeff {
        Coefficients::Mod(n) => Some(cech_cohomology(&nerve, input.degree, n)?),
        Coefficients::RationalModOne => None,
    };
    let cochain = |deg: usize, vals: &[JsonRat]| {
        Cochain::new(Arc::clone(&nerve), deg, coeff.clone(), unwrap_rats(vals))
    };
    let cocycle = match &input.cocycle {
        None => None,
        Some(vals) => {
            let c = cochain(input.degree, vals)?;
            if c.is_cocycle() {
                let w = is_cohomologous(&c, &Cochain::zero(Arc::clone(&nerve), c.degree(), coeff.clone()))?;
                Some(CocycleOut {
                    is_cocycle: true,
                    trivial: Some(w.is_some()),
                    witness: w.map(|w| rats(w.values())),
                })
            } else {
                Some(CocycleOut {
                    is_cocycle: false,
                    trivial: None,
                    witness: None,
                })
            }
        }
    };
    let gluing = match &input.gluing {
        None => None,
        Some(g) => {
            let data = GluingData::new(cochain(1, &g.lambda)?, cochain(2, &g.alpha)?)?;
            let check = verify_gluing(&data);
            let zero = Cochain::zero(Arc::clone(&nerve), 2, coeff.clone());
            let twist_trivial = if data.alpha.is_cocycle() {
                Some(is_cohomologous(&data.alpha, &zero)?.is_some())
            } else {
                None
            };
            Some(GluingOut {
                passed: check.passed,
                coboundary_of_lambda: rats(coboundary(&data.lambda)?.values()),
                failures: check.failures,
                twist_trivial,
            })
        }
    };
    let out = CechOut {
        coefficients: coeff.to_string(),
        degree: input.degree,
        simplex_counts: (0..=3).map(|k| nerve.count(k)).collect(),
        simplices: (0..=3).map(|k| nerve.simplices(k).to_vec()).collect(),
        cohomology: group.as_ref().map(|g| ints(g.invariant_factors())),
        cohomology_order: group.as_ref().map(|g| g.order().into()),
        cocycle,
        gluing,
    };
    Ok(Outcome {
        input: to_value(input),
        result: to_value(&out),
        passed: true,
    })
}

#[derive(Serialize)]
struct TwistOut {
    c1: Vec<JsonInt>,
    rank: JsonInt,
    twisting_class: Vec<JsonInt>,
    brauer: ClassOut,
    bundle_obstruction: ClassOut,
    compatible: bool,
}

fn run_twist(input: &TwistInput) -> Result<Outcome, CliError> {
    let x = input.surface.build()?;
    let c1 = h2_class(&x, &input.c1, &input.c1_ns, "c1")?;
    let n: BigInt = input.rank.0.clone();
    if n <= BigInt::from(0) {
        return Err(CliError::invalid("rank must be positive"));
    }
    let t = topological_twisting_class(&c1, &n)?;
    let via_p = p_map(x.transcendental(), &t)?;
    let direct = obstruction_from_bundle(x.transcendental(), &c1, &n)?;
    let compatible = via_p.equals(&direct)?;
    let out = TwistOut {
        c1: ints(&c1),
        rank: (&n).into(),
        twisting_class: ints(t.coords()),
        brauer: (&via_p).into(),
        bundle_obstruction: (&direct).into(),
        compatible,
    };
    Ok(Outcome {
        input: to_value(input),
        result: to_value(&out),
        passed: compatible,
    })
}
