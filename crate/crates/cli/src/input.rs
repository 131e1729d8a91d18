//! Input documents. Every document carries a `schema` tag naming its
//! subcommand and version; unknown fields are rejected.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use mukai_lattice::brauer::{brauer_from_h2_class, BrauerClass};
use mukai_lattice::cech::Nerve;
use mukai_lattice::lattice::standard::K3_RANK;
use mukai_lattice::lattice::{IntMatrix, Lattice, Sublattice};
use mukai_lattice::mukai::{K3Surface, MukaiVector};

use crate::error::CliError;
use crate::numbers::{unwrap_ints, unwrap_rats, JsonInt, JsonRat};

pub const SCHEMA_VERSION: u32 = 1;

pub fn schema_tag(command: &str) -> String {
    format!("mukai/{command}/v{SCHEMA_VERSION}")
}

/// Either `{"picard_rank_one": k}` (NS = ⟨2k⟩, h = e + k·f) or an explicit
/// NS gram with a 22 × ρ embedding matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub picard_rank_one: Option<JsonInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ns_gram: Option<Vec<Vec<JsonInt>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<Vec<JsonInt>>>,
}

fn matrix(rows: &[Vec<JsonInt>], what: &str) -> Result<IntMatrix, CliError> {
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| unwrap_ints(r)).collect();
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(CliError::Malformed(format!("{what}: rows have different lengths")));
    }
    IntMatrix::from_rows(rows).map_err(|e| CliError::Malformed(format!("{what}: {e}")))
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<K3Surface, CliError> {
        match (&self.picard_rank_one, &self.ns_gram, &self.embedding) {
            (Some(k), None, None) => {
                let k: i64 = (&k.0)
                    .try_into()
                    .map_err(|_| CliError::invalid("picard_rank_one is out of range"))?;
                Ok(K3Surface::picard_rank_one(k)?)
            }
            (None, Some(g), Some(e)) => {
                let gram = matrix(g, "ns_gram")?;
                if !gram.is_square() || !gram.is_symmetric() {
                    return Err(CliError::invalid("ns_gram must be a symmetric square matrix"));
                }
                if (0..gram.rows()).any(|i| gram[(i, i)].is_odd()) {
                    return Err(CliError::NotEven("ns_gram has an odd diagonal entry".into()));
                }
                let emb = matrix(e, "embedding")?;
                if emb.rows() != K3_RANK || emb.cols() != gram.rows() {
                    return Err(CliError::invalid(format!(
                        "embedding must be {K3_RANK} × {}, found {} × {}",
                        gram.rows(),
                        emb.rows(),
                        emb.cols()
                    )));
                }
                Ok(K3Surface::from_gram_and_embedding(gram, emb)?)
            }
            _ => Err(CliError::Malformed(
                "surface needs either picard_rank_one or both ns_gram and embedding".into(),
            )),
        }
    }
}

/// Parses a standalone surface document.
pub fn parse_surface_spec(text: &str) -> Result<K3Surface, CliError> {
    let spec: SurfaceSpec =
        serde_json::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))?;
    spec.build()
}

/// A Mukai vector (r, l, s) with l given either in full H² coordinates (`l`)
/// or as coefficients on the NS basis (`ns`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MukaiSpec {
    pub r: JsonInt,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<JsonInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ns: Option<Vec<JsonInt>>,
    pub s: JsonInt,
}

/// An H² class given in full coordinates or on the NS basis.
pub fn h2_class(
    x: &K3Surface,
    l: &Option<Vec<JsonInt>>,
    ns: &Option<Vec<JsonInt>>,
    what: &str,
) -> Result<Vec<BigInt>, CliError> {
    match (l, ns) {
        (Some(l), None) => {
            if l.len() != K3_RANK {
                return Err(CliError::invalid(format!(
                    "{what} needs {K3_RANK} coordinates, found {}",
                    l.len()
                )));
            }
            Ok(unwrap_ints(l))
        }
        (None, Some(c)) => Ok(x.ns().element(&unwrap_ints(c))?),
        _ => Err(CliError::Malformed(format!("{what}: give exactly one of l or ns"))),
    }
}

impl MukaiSpec {
    pub fn build(&self, x: &K3Surface) -> Result<MukaiVector, CliError> {
        let l = h2_class(x, &self.l, &self.ns, "v")?;
        Ok(MukaiVector::new(self.r.0.clone(), l, self.s.0.clone())?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeModuliInput {
    pub schema: String,
    pub surface: SurfaceSpec,
    pub v: MukaiSpec,
}

/// Where a Brauer class lives: T_X of a surface (classes given as B-fields
/// w ∈ H²(X, Q)) or a lattice with the given gram (classes given by their
/// values on the basis).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<JsonInt>>>,
}

pub enum ClassHost {
    Surface(K3Surface),
    Lattice(Sublattice),
}

impl LatticeSpec {
    pub fn build(&self) -> Result<ClassHost, CliError> {
        match (&self.surface, &self.gram) {
            (Some(s), None) => Ok(ClassHost::Surface(s.build()?)),
            (None, Some(g)) => {
                let gram = matrix(g, "gram")?;
                let lat = Lattice::nondegenerate(gram)?;
                Ok(ClassHost::Lattice(Sublattice::full(Arc::new(lat))))
            }
            _ => Err(CliError::Malformed("lattice needs exactly one of surface or gram".into())),
        }
    }
}

impl ClassHost {
    pub fn class(&self, values: &[JsonRat], what: &str) -> Result<BrauerClass, CliError> {
        let v = unwrap_rats(values);
        match self {
            ClassHost::Surface(x) => {
                if v.len() != K3_RANK {
                    return Err(CliError::invalid(format!(
                        "{what}: a B-field needs {K3_RANK} entries, found {}",
                        v.len()
                    )));
                }
                Ok(brauer_from_h2_class(x, &v)?)
            }
            ClassHost::Lattice(t) => {
                if v.len() != t.rank() {
                    return Err(CliError::invalid(format!(
                        "{what}: needs {} values, found {}",
                        t.rank(),
                        v.len()
                    )));
                }
                Ok(BrauerClass::new(t.clone(), v)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BrauerInput {
    pub schema: String,
    pub lattice: LatticeSpec,
    pub class: Vec<JsonRat>,
    /// Asserted order; the run fails when the computed order differs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_order: Option<JsonInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DpInput {
    pub schema: String,
    pub lattice: LatticeSpec,
    pub alpha: Vec<JsonRat>,
    pub beta: Vec<JsonRat>,
}

/// A nerve given by its maximal simplices; faces are added automatically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NerveSpec {
    pub vertices: usize,
    pub simplices: Vec<Vec<usize>>,
}

impl NerveSpec {
    pub fn build(&self) -> Result<Nerve, CliError> {
        Ok(Nerve::from_maximal(self.vertices, &self.simplices)?)
    }
}

/// Cochain values are listed in the nerve's sorted simplex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingSpec {
    pub lambda: Vec<JsonRat>,
    pub alpha: Vec<JsonRat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CechInput {
    pub schema: String,
    pub nerve: NerveSpec,
    /// n ≥ 1 for Z/n; 0 means Q/Z (allowed for cocycle and gluing checks only).
    pub modulus: JsonInt,
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<Vec<JsonRat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gluing: Option<GluingSpec>,
}

fn default_degree() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistInput {
    pub schema: String,
    pub surface: SurfaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<Vec<JsonInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1_ns: Option<Vec<JsonInt>>,
    pub rank: JsonInt,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surfaces_from_text() {
        let x = parse_surface_spec(r#"{"picard_rank_one": 2}"#).unwrap();
        assert_eq!(x.transcendental().rank(), 21);
        let x = parse_surface_spec(r#"{"picard_rank_one": 4, "label": "desk"}"#).unwrap();
        assert_eq!(x.ns().gram()[(0, 0)], BigInt::from(8));
        assert!(matches!(parse_surface_spec("{"), Err(CliError::Malformed(_))));
        assert!(matches!(
            parse_surface_spec(r#"{"picard_rank_one": 2, "ns_gram": [[4]]}"#),
            Err(CliError::Malformed(_))
        ));
    }

    fn embedding_doc(gram: i64, e: i64, f: i64) -> String {
        let mut rows = vec!["[0]".to_string(); K3_RANK];
        rows[16] = format!("[{e}]");
        rows[17] = format!("[{f}]");
        format!(r#"{{"ns_gram": [[{gram}]], "embedding": [{}]}}"#, rows.join(","))
    }

    #[test]
    fn distinct_diagnostics() {
        assert!(parse_surface_spec(&embedding_doc(4, 1, 2)).is_ok());
        let e = parse_surface_spec(&embedding_doc(6, 1, 2)).unwrap_err();
        assert_eq!(e.kind(), "not-isometric");
        let e = parse_surface_spec(&embedding_doc(8, 2, 2)).unwrap_err();
        assert_eq!(e.kind(), "not-saturated");
        let e = parse_surface_spec(&embedding_doc(3, 1, 2)).unwrap_err();
        assert_eq!(e.kind(), "not-even");
    }
}
