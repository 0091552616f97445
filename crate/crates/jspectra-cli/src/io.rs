//! File schemas and deterministic serialization.
//!
//! Inputs are parsed with serde against strict schemas (unknown fields are
//! rejected, except a `gamma` field in parameter files, which is accepted
//! and ignored — γ is always recomputed from θ and h). Outputs are composed
//! by hand with every number at 17 significant digits, so identical inputs
//! produce byte-identical files and values roundtrip losslessly.

use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub q: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub masses: Vec<f64>,
    pub springs: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub theta: f64,
    pub h: f64,
    /// Ignored if present: γ is derived, never read.
    #[serde(default, rename = "gamma")]
    pub _gamma: Option<serde_json::Value>,
}

/// A spectra pair, optionally with the measure weights and γ as written by
/// `forward` — its output feeds straight back into `invert` and `verify`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectraFile {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub omega: Option<f64>,
    #[serde(default)]
    pub mode: Option<String>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

/// 17 significant digits: lossless f64 ↔ decimal roundtrip, fixed format.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn json_array(xs: &[f64]) -> String {
    let body: Vec<String> = xs.iter().map(|&x| fmt_f64(x)).collect();
    format!("[{}]", body.join(","))
}

pub fn json_opt_f64(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_f64(v),
        None => "null".into(),
    }
}

pub fn json_string(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn write_output(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Schema(format!("cannot write {}: {e}", path.display())))
}
