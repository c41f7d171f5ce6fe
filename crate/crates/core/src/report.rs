//! Serializable reports. Every report carries `schema_version`; rationals are
//! written as strings such as `"4/3"` so that values stay exact.

use serde::{Deserialize, Serialize};

use crate::alpha::AlphaValue;
use crate::invariants::InvariantRecord;
use crate::obstruction::{Evaluation, HomeoType};
use crate::scalar::Tri;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaReport {
    /// `exact`, `lower_bound`, `unknown` or `undefined`.
    pub status: String,
    pub value: Option<String>,
    /// Catalog rule label, `R0` to `R5`.
    pub rule: String,
    pub trace: Vec<String>,
}

impl From<&AlphaValue> for AlphaReport {
    fn from(a: &AlphaValue) -> Self {
        AlphaReport {
            status: a.status.name().to_string(),
            value: a.status.value().map(|q| q.to_string()),
            rule: a.rule.label().to_string(),
            trace: a.trace.clone(),
        }
    }
}

/// Output of `eval`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub schema_version: u32,
    pub expr: String,
    pub chi: i64,
    pub tau: i64,
    pub b_plus: i64,
    pub b_minus: i64,
    pub spin: Tri,
    pub alpha_sq: AlphaReport,
    /// `exists`, `obstructed` or `unknown`.
    pub conclusion: String,
    pub tag: Option<String>,
    pub reason: String,
    pub certificate: Vec<String>,
}

impl From<&Evaluation> for EvalReport {
    fn from(e: &Evaluation) -> Self {
        let c = &e.verdict.conclusion;
        EvalReport {
            schema_version: SCHEMA_VERSION,
            expr: e.manifold.to_string(),
            chi: e.record.chi,
            tau: e.record.tau,
            b_plus: e.record.b_plus,
            b_minus: e.record.b_minus,
            spin: e.record.spin,
            alpha_sq: AlphaReport::from(&e.alpha),
            conclusion: c.name().to_string(),
            tag: c.tag().map(|t| t.to_string()),
            reason: c.reason().to_string(),
            certificate: e
                .verdict
                .certificate
                .iter()
                .map(|l| l.to_string())
                .collect(),
        }
    }
}

/// Output of `invariants`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub schema_version: u32,
    pub expr: String,
    #[serde(flatten)]
    pub record: InvariantRecord,
}

/// Output of `alpha` for an expression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaExprReport {
    pub schema_version: u32,
    pub expr: String,
    pub alpha_sq: AlphaReport,
}

/// Output of `homeo`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomeoReport {
    pub schema_version: u32,
    pub left: String,
    pub right: String,
    pub homeomorphic: Tri,
    pub left_type: Option<HomeoType>,
    pub right_type: Option<HomeoType>,
}

/// Output of `alpha --form`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericReport {
    pub schema_version: u32,
    pub b_plus: usize,
    pub b_minus: usize,
    pub classes: usize,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub attained: bool,
    /// Basis of the optimal positive subspace, one row per basis vector.
    pub witness: Vec<Vec<f64>>,
    pub oracle: Option<OracleReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub value: f64,
    pub attained: bool,
    pub evaluations: usize,
}

/// One curvature model in `models --check`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelRow {
    pub name: String,
    pub gauss_bonnet_plus: Option<String>,
    pub gauss_bonnet_minus: Option<String>,
    pub kaehler_spectrum: Option<bool>,
    pub weitzenboeck: Option<String>,
    pub saturation: Option<bool>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelsReport {
    pub schema_version: u32,
    pub models: Vec<ModelRow>,
    pub pass: bool,
}

/// Any failure. `internal` maps to exit code 2, every other kind to 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub schema_version: u32,
    /// `parse`, `domain`, `input`, `usage` or `internal`.
    pub kind: String,
    pub message: String,
    /// Byte offset into the expression for parse and domain errors.
    pub position: Option<usize>,
    pub expected: Vec<String>,
}

/// One input line of `batch`, with either a report or an error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchItem {
    /// 1-based line number in the input file.
    pub line: usize,
    pub input: String,
    pub report: Option<EvalReport>,
    pub error: Option<ErrorReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchReport {
    pub schema_version: u32,
    pub results: Vec<BatchItem>,
}
