//! Request and response envelopes.

use serde::{Deserialize, Serialize};

use crate::number::{ComplexOut, F17};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Roots,
    Limit,
    Oracle,
    Simulate,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Roots => "roots",
            Command::Limit => "limit",
            Command::Oracle => "oracle",
            Command::Simulate => "simulate",
        }
    }
}

/// A root given either as a plain real number or as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootInput {
    Real(f64),
    Pair([f64; 2]),
}

impl RootInput {
    pub fn to_complex(self) -> arlimit::Complex64 {
        match self {
            RootInput::Real(re) => arlimit::Complex64::new(re, 0.0),
            RootInput::Pair([re, im]) => arlimit::Complex64::new(re, im),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    pub command: Option<Command>,
    pub alphas: Option<Vec<f64>>,
    pub roots: Option<Vec<RootInput>>,
    pub shifts: Option<Vec<i64>>,
    #[serde(rename = "S")]
    pub s: Option<u64>,
    pub n: Option<usize>,
    pub n1: Option<usize>,
    pub n2: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub points: Option<usize>,
    pub sigma: Option<f64>,
    pub seed: Option<u64>,
    pub burn_in: Option<usize>,
    pub tol: Option<f64>,
    pub cluster_tol: Option<f64>,
    pub max_lag: Option<usize>,
    pub include_values: Option<bool>,
    /// Path for the single-column series export of `simulate`.
    pub export: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Response {
    pub schema_version: u32,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub result: Option<Payload>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<ErrorBody>,
}

impl Response {
    pub fn ok(command: Command, result: Payload) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            status: Status::Ok,
            command: Some(command),
            result: Some(result),
            error: None,
        }
    }

    pub fn error(command: Option<Command>, error: ErrorBody) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            status: Status::Error,
            command,
            result: None,
            error: Some(error),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("responses always serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("responses always serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub details: Option<Vec<Discrepancy>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
#[allow(clippy::large_enum_variant)]
pub enum Payload {
    Roots(RootsResult),
    Limit(LimitResult),
    Oracle(OracleResult),
    Simulate(SimulateResult),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootsResult {
    pub alphas: Vec<F17>,
    pub polynomial: Vec<F17>,
    pub roots: Vec<ComplexOut>,
    pub stationary: bool,
    pub conjugate_closed: bool,
    pub max_modulus: F17,
    pub residual: F17,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterOut {
    pub members: Vec<usize>,
    pub multiplicity: usize,
    pub centroid: ComplexOut,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalOut {
    pub value: ComplexOut,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub real_value: Option<F17>,
    pub max_imag: F17,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tail_bound: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub clusters: Option<Vec<ClusterOut>>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub points: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitResult {
    #[serde(rename = "S")]
    pub s: u64,
    pub k: usize,
    pub roots: Vec<ComplexOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub shifts: Option<Vec<i64>>,
    #[serde(flatten)]
    pub eval: EvalOut,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeOut {
    pub n1: usize,
    pub n2: usize,
    pub shifts: Vec<i64>,
    pub value: ComplexOut,
    pub raw_sums: [ComplexOut; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub a: String,
    pub b: String,
    pub abs: F17,
    pub rel: F17,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    #[serde(rename = "S")]
    pub s: u64,
    pub k: usize,
    pub roots: Vec<ComplexOut>,
    pub tolerance: F17,
    pub closed_form: EvalOut,
    pub bs_truncated: EvalOut,
    pub contour: EvalOut,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub slope: Option<SlopeOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub slope_skipped: Option<String>,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateResult {
    pub alphas: Vec<F17>,
    pub sigma: F17,
    pub n: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub roots: Vec<ComplexOut>,
    pub sum_x: F17,
    pub mean: F17,
    pub variance: F17,
    /// `Σ_{i=1}^{n−j} X_i X_{i+j}` for `j = 0..=max_lag`.
    pub lagged_cross_sums: Vec<F17>,
    /// `lagged_cross_sums[j] / lagged_cross_sums[0]`.
    pub lag_ratios: Vec<F17>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub values: Option<Vec<F17>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub export: Option<String>,
}
