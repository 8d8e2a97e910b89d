//! Scenario and report files.
//!
//! Both are JSON with `schema_version = 1`. Complex numbers are `[re, im]`
//! pairs and matrices are row-major arrays of rows. Unknown fields are
//! rejected. Reports are written canonically: sorted keys, no whitespace,
//! reals with 17 significant digits, so equal reports are byte-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::linalg::{ComplexMatrix, StateVector};
use crate::symmetry::SymmetryTransform;
use crate::tolerance::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{path}: {message}")]
pub struct ScenarioError {
    /// Location in the document, e.g. `requests[2].state_in`.
    pub path: String,
    pub message: String,
}

impl ScenarioError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixName {
    Hamiltonian,
    H0,
    V,
    Smatrix,
}

impl MatrixName {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixName::Hamiltonian => "hamiltonian",
            MatrixName::H0 => "h0",
            MatrixName::V => "v",
            MatrixName::Smatrix => "smatrix",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Matrices {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smatrix: Option<ComplexMatrix>,
}

impl Matrices {
    pub fn get(&self, name: MatrixName) -> Option<&ComplexMatrix> {
        match name {
            MatrixName::Hamiltonian => self.hamiltonian.as_ref(),
            MatrixName::H0 => self.h0.as_ref(),
            MatrixName::V => self.v.as_ref(),
            MatrixName::Smatrix => self.smatrix.as_ref(),
        }
    }

    fn declared(&self) -> impl Iterator<Item = (MatrixName, &ComplexMatrix)> {
        [
            (MatrixName::Hamiltonian, &self.hamiltonian),
            (MatrixName::H0, &self.h0),
            (MatrixName::V, &self.v),
            (MatrixName::Smatrix, &self.smatrix),
        ]
        .into_iter()
        .filter_map(|(n, m)| m.as_ref().map(|m| (n, m)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeWindow {
    pub ti: f64,
    pub tf: f64,
}

/// One detector invocation. Optional `matrix` fields default to the
/// Hamiltonian (or the S-matrix for amplitude detectors); a `t` on an
/// amplitude detector means "use `e^{−itM}` instead of `M`".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "detector", rename_all = "snake_case", deny_unknown_fields)]
pub enum Request {
    UnitaryCurie {
        symmetry: String,
        state: String,
        t: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<MatrixName>,
    },
    ScatteringCurie {
        symmetry: String,
        state_in: String,
        state_out: String,
    },
    SMatrixInference {
        symmetry: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<TimeWindow>,
    },
    Kabir {
        symmetry: String,
        state_in: String,
        state_out: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<MatrixName>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t: Option<f64>,
    },
    ProbabilityAsymmetry {
        state_a: String,
        state_b: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<MatrixName>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t: Option<f64>,
    },
    InvarianceMargin {
        symmetry: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<MatrixName>,
    },
    TimeReversalConsistency {
        symmetry: String,
        t: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<MatrixName>,
    },
    CptLink {
        cpt: String,
        cp: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<MatrixName>,
    },
    Wigner {
        symmetry: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<MatrixName>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gap_tol: Option<f64>,
    },
    KramersVerify {
        symmetry: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<MatrixName>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gap_tol: Option<f64>,
    },
}

impl Request {
    pub fn detector(&self) -> &'static str {
        match self {
            Request::UnitaryCurie { .. } => "unitary_curie",
            Request::ScatteringCurie { .. } => "scattering_curie",
            Request::SMatrixInference { .. } => "s_matrix_inference",
            Request::Kabir { .. } => "kabir",
            Request::ProbabilityAsymmetry { .. } => "probability_asymmetry",
            Request::InvarianceMargin { .. } => "invariance_margin",
            Request::TimeReversalConsistency { .. } => "time_reversal_consistency",
            Request::CptLink { .. } => "cpt_link",
            Request::Wigner { .. } => "wigner",
            Request::KramersVerify { .. } => "kramers_verify",
        }
    }

    /// Matrices this request reads (after defaults are applied).
    pub fn matrices(&self) -> Vec<MatrixName> {
        use MatrixName::*;
        match self {
            Request::UnitaryCurie { matrix, .. }
            | Request::InvarianceMargin { matrix, .. }
            | Request::TimeReversalConsistency { matrix, .. }
            | Request::CptLink { matrix, .. }
            | Request::Wigner { matrix, .. }
            | Request::KramersVerify { matrix, .. } => vec![matrix.unwrap_or(Hamiltonian)],
            Request::ScatteringCurie { .. } => vec![Smatrix],
            Request::SMatrixInference { window: Some(_), .. } => vec![H0, V],
            Request::SMatrixInference { window: None, .. } => vec![H0, Smatrix],
            Request::Kabir { matrix, .. } | Request::ProbabilityAsymmetry { matrix, .. } => {
                vec![matrix.unwrap_or(Smatrix)]
            }
        }
    }

    /// (field name, symmetry label) pairs.
    fn symmetries(&self) -> Vec<(&'static str, &str)> {
        match self {
            Request::CptLink { cpt, cp, .. } => vec![("cpt", cpt), ("cp", cp)],
            Request::ProbabilityAsymmetry { .. } => vec![],
            Request::UnitaryCurie { symmetry, .. }
            | Request::ScatteringCurie { symmetry, .. }
            | Request::SMatrixInference { symmetry, .. }
            | Request::Kabir { symmetry, .. }
            | Request::InvarianceMargin { symmetry, .. }
            | Request::TimeReversalConsistency { symmetry, .. }
            | Request::Wigner { symmetry, .. }
            | Request::KramersVerify { symmetry, .. } => vec![("symmetry", symmetry)],
        }
    }

    fn states(&self) -> Vec<(&'static str, &str)> {
        match self {
            Request::UnitaryCurie { state, .. } => vec![("state", state)],
            Request::ScatteringCurie {
                state_in, state_out, ..
            }
            | Request::Kabir {
                state_in, state_out, ..
            } => vec![("state_in", state_in), ("state_out", state_out)],
            Request::ProbabilityAsymmetry { state_a, state_b, .. } => vec![("state_a", state_a), ("state_b", state_b)],
            _ => vec![],
        }
    }

    /// Required antilinearity for each symmetry field, if constrained.
    fn symmetry_kind(&self, field: &str) -> Option<bool> {
        match (self, field) {
            (Request::UnitaryCurie { .. }, _)
            | (Request::ScatteringCurie { .. }, _)
            | (Request::SMatrixInference { .. }, _) => Some(false),
            (Request::Kabir { .. }, _)
            | (Request::TimeReversalConsistency { .. }, _)
            | (Request::Wigner { .. }, _)
            | (Request::KramersVerify { .. }, _) => Some(true),
            (Request::CptLink { .. }, "cpt") => Some(true),
            (Request::CptLink { .. }, "cp") => Some(false),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_zero: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_violation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_tol: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            tau_zero: self.tau_zero.unwrap_or(base.tau_zero),
            tau_violation: self.tau_violation.unwrap_or(base.tau_violation),
            gap_tol: self.gap_tol.unwrap_or(base.gap_tol),
            ..base
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub dim: usize,
    #[serde(default)]
    pub matrices: Matrices,
    #[serde(default)]
    pub symmetries: Vec<SymmetryTransform>,
    #[serde(default)]
    pub states: BTreeMap<String, StateVector>,
    #[serde(default)]
    pub requests: Vec<Request>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Scenario {
    pub fn new(dim: usize) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dim,
            matrices: Matrices::default(),
            symmetries: Vec::new(),
            states: BTreeMap::new(),
            requests: Vec::new(),
            tolerances: None,
            seed: None,
        }
    }

    pub fn symmetry(&self, label: &str) -> Option<&SymmetryTransform> {
        self.symmetries.iter().find(|s| s.label == label)
    }

    /// Tolerances after applying this scenario's overrides to `base`.
    pub fn tolerances(&self, base: Tolerances) -> Tolerances {
        self.tolerances.map_or(base, |o| o.apply(base))
    }

    /// Structural checks beyond what the JSON schema enforces.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ScenarioError::new(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        if self.dim == 0 {
            return Err(ScenarioError::new("dim", "must be at least 1"));
        }
        let tol = self.tolerances(Tolerances::default());
        tol.validate()
            .map_err(|e| ScenarioError::new("tolerances", e.to_string()))?;

        for (name, m) in self.matrices.declared() {
            let path = format!("matrices.{}", name.as_str());
            if m.dim() != self.dim {
                return Err(ScenarioError::new(
                    path,
                    format!("dimension {} does not match declared dim {}", m.dim(), self.dim),
                ));
            }
        }
        for (k, s) in self.symmetries.iter().enumerate() {
            let path = format!("symmetries[{k}]");
            if s.dim() != self.dim {
                return Err(ScenarioError::new(
                    format!("{path}.unitary_part"),
                    format!("dimension {} does not match declared dim {}", s.dim(), self.dim),
                ));
            }
            let dev = s.unitary_part.unitary_deviation();
            if dev > tol.tau_zero {
                return Err(ScenarioError::new(
                    format!("{path}.unitary_part"),
                    format!("symmetry {} is not unitary (‖U†U − I‖_F = {dev:.3e})", s.label),
                ));
            }
            if self.symmetries[..k].iter().any(|o| o.label == s.label) {
                return Err(ScenarioError::new(
                    format!("{path}.label"),
                    format!("duplicate symmetry label {:?}", s.label),
                ));
            }
        }
        for (name, v) in &self.states {
            let path = format!("states.{name}");
            if v.dim() != self.dim {
                return Err(ScenarioError::new(
                    path,
                    format!("dimension {} does not match declared dim {}", v.dim(), self.dim),
                ));
            }
            if !v.is_normalized(tol.tau_zero) {
                return Err(ScenarioError::new(
                    path,
                    format!("state is not normalized (norm {})", v.norm()),
                ));
            }
        }
        for (k, r) in self.requests.iter().enumerate() {
            let path = format!("requests[{k}]");
            for name in r.matrices() {
                if self.matrices.get(name).is_none() {
                    return Err(ScenarioError::new(
                        format!("{path}.matrix"),
                        format!("{} requires undeclared matrix {:?}", r.detector(), name.as_str()),
                    ));
                }
            }
            for (field, label) in r.symmetries() {
                let Some(sym) = self.symmetry(label) else {
                    return Err(ScenarioError::new(
                        format!("{path}.{field}"),
                        format!("undeclared symmetry {label:?}"),
                    ));
                };
                if let Some(antilinear) = r.symmetry_kind(field) {
                    if sym.antilinear != antilinear {
                        let want = if antilinear { "antilinear" } else { "linear" };
                        return Err(ScenarioError::new(
                            format!("{path}.{field}"),
                            format!("{} needs a {want} symmetry, {label:?} is not", r.detector()),
                        ));
                    }
                }
            }
            for (field, name) in r.states() {
                if !self.states.contains_key(name) {
                    return Err(ScenarioError::new(
                        format!("{path}.{field}"),
                        format!("undeclared state {name:?}"),
                    ));
                }
            }
            let times: Vec<(&str, f64)> = match r {
                Request::UnitaryCurie { t, .. } | Request::TimeReversalConsistency { t, .. } => {
                    vec![("t", *t)]
                }
                Request::Kabir { t: Some(t), .. } | Request::ProbabilityAsymmetry { t: Some(t), .. } => {
                    vec![("t", *t)]
                }
                Request::SMatrixInference { window: Some(w), .. } => {
                    if w.ti > w.tf {
                        return Err(ScenarioError::new(format!("{path}.window"), "ti must not exceed tf"));
                    }
                    vec![("window.ti", w.ti), ("window.tf", w.tf)]
                }
                Request::Wigner { gap_tol: Some(g), .. } | Request::KramersVerify { gap_tol: Some(g), .. }
                    if *g <= 0.0 =>
                {
                    return Err(ScenarioError::new(format!("{path}.gap_tol"), "must be positive"));
                }
                _ => vec![],
            };
            if let Some((field, _)) = times.iter().find(|(_, x)| !x.is_finite()) {
                return Err(ScenarioError::new(format!("{path}.{field}"), "must be finite"));
            }
        }
        Ok(())
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &[u8]) -> Result<Scenario, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_slice(text);
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "<document>".to_string() } else { path };
        ScenarioError::new(path, e.into_inner().to_string())
    })?;
    scenario.validate()?;
    Ok(scenario)
}

/// Indented JSON with shortest round-trip floats, meant to be read and edited
/// by hand. Matrix rows and state vectors each stay on one line.
pub fn serialize_scenario(scenario: &Scenario) -> Vec<u8> {
    let value = serde_json::to_value(scenario).expect("scenario is always representable");
    let mut out = String::new();
    write_pretty(&mut out, &value, 0);
    out.push('\n');
    out.into_bytes()
}

/// Arrays nested at most two deep with no objects inside.
fn is_leaf_array(value: &Value) -> bool {
    fn depth(v: &Value) -> Option<usize> {
        match v {
            Value::Object(_) => None,
            Value::Array(items) => {
                let mut d = 0;
                for item in items {
                    d = d.max(depth(item)?);
                }
                Some(d + 1)
            }
            _ => Some(0),
        }
    }
    matches!(depth(value), Some(d) if d <= 2)
}

fn write_pretty(out: &mut String, value: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', 2 * n));
    match value {
        Value::Array(items) if !items.is_empty() && !is_leaf_array(value) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_pretty(out, item, indent + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&serde_json::to_string(key).expect("string"));
                out.push_str(": ");
                write_pretty(out, item, indent + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_pretty(out, item, indent);
            }
            out.push(']');
        }
        other => out.push_str(&serde_json::to_string(other).expect("json value")),
    }
}

/// Output of a single request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecordBody {
    Verdict(crate::verdict::Verdict),
    Margin {
        value: f64,
        comparison: crate::symmetry::ComparisonKind,
    },
    Value {
        name: String,
        value: f64,
    },
    Kramers(crate::wigner::KramersReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub index: usize,
    pub detector: String,
    pub result: RecordBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tool_version: String,
}

/// Independent recomputation of one request by direct matrix arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleRecord {
    pub index: usize,
    pub detector: String,
    pub agrees: bool,
    /// Ground-truth quantity recomputed by the oracle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub records: Vec<Record>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<OracleRecord>>,
}

impl Report {
    pub fn new(provenance: Provenance) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            provenance,
            records: Vec::new(),
            oracle: None,
        }
    }
}

pub fn serialize_report(report: &Report) -> Vec<u8> {
    let value = serde_json::to_value(report).expect("report is always representable");
    to_canonical_json(&value).into_bytes()
}

pub fn parse_report(text: &[u8]) -> Result<Report, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_slice(text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| ScenarioError::new(e.path().to_string(), e.into_inner().to_string()))
}

/// Compact JSON with keys in sorted order and every float written with 17
/// significant digits in exponent form. Integers stay integers.
pub fn to_canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value);
    out
}

fn write_value(out: &mut String, value: &Value) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                write!(out, "{i}").unwrap();
            } else if let Some(u) = n.as_u64() {
                write!(out, "{u}").unwrap();
            } else {
                write_f64(out, n.as_f64().expect("finite"));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (k, key) in keys.into_iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("string"));
                out.push(':');
                write_value(out, &map[key]);
            }
            out.push('}');
        }
    }
}

fn write_f64(out: &mut String, x: f64) {
    if x == 0.0 {
        // Normalize −0.
        out.push_str("0.0000000000000000e0");
    } else {
        write!(out, "{x:.16e}").unwrap();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "schema_version": 1,
        "dim": 2,
        "matrices": {"hamiltonian": [[[1,0],[0,0]],[[0,0],[-1,0]]]},
        "symmetries": [{"label": "K", "unitary_part": [[[1,0],[0,0]],[[0,0],[1,0]]], "antilinear": true}],
        "states": {"up": [[1,0],[0,0]]},
        "requests": [{"detector": "wigner", "symmetry": "K"}]
    }"#;

    #[test]
    fn minimal_document_parses() {
        let s = parse_scenario(MINIMAL.as_bytes()).unwrap();
        assert_eq!(s.dim, 2);
        assert_eq!(s.requests.len(), 1);
        let again = parse_scenario(&serialize_scenario(&s)).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn undeclared_state_is_named() {
        let doc = MINIMAL.replace(
            r#"{"detector": "wigner", "symmetry": "K"}"#,
            r#"{"detector": "kabir", "symmetry": "K", "state_in": "up", "state_out": "psi9", "matrix": "hamiltonian", "t": 1.0}"#,
        );
        let err = parse_scenario(doc.as_bytes()).unwrap_err();
        assert_eq!(err.path, "requests[0].state_out");
        assert!(err.message.contains("psi9"));
    }

    #[test]
    fn unknown_detector_rejected() {
        let doc = MINIMAL.replace("\"wigner\"", "\"curie\"");
        let err = parse_scenario(doc.as_bytes()).unwrap_err();
        assert!(err.path.starts_with("requests[0]"), "{err}");
        assert!(err.message.contains("unknown variant"), "{err}");
    }

    #[test]
    fn unknown_tolerance_field_rejected() {
        let doc = MINIMAL.replace("\"dim\": 2,", "\"dim\": 2, \"tolerances\": {\"tau_zeroo\": 1e-9},");
        let err = parse_scenario(doc.as_bytes()).unwrap_err();
        assert!(err.path.starts_with("tolerances"), "{err}");
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let doc = MINIMAL.replace("\"dim\": 2", "\"dim\": 3");
        let err = parse_scenario(doc.as_bytes()).unwrap_err();
        assert_eq!(err.path, "matrices.hamiltonian");
    }

    #[test]
    fn non_unitary_symmetry_rejected() {
        let doc = MINIMAL.replace("[[[1,0],[0,0]],[[0,0],[1,0]]]", "[[[2,0],[0,0]],[[0,0],[1,0]]]");
        let err = parse_scenario(doc.as_bytes()).unwrap_err();
        assert_eq!(err.path, "symmetries[0].unitary_part");
    }

    #[test]
    fn wrong_symmetry_kind_rejected() {
        let doc = MINIMAL.replace("\"antilinear\": true", "\"antilinear\": false");
        let err = parse_scenario(doc.as_bytes()).unwrap_err();
        assert_eq!(err.path, "requests[0].symmetry");
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(parse_scenario(b"{\"schema_version\": 1,").is_err());
    }

    #[test]
    fn canonical_floats_and_keys() {
        let v: Value = serde_json::json!({"b": 0.2, "a": [1, -0.0, 1e-300], "c": "x"});
        assert_eq!(
            to_canonical_json(&v),
            r#"{"a":[1,0.0000000000000000e0,1.0000000000000000e-300],"b":2.0000000000000001e-1,"c":"x"}"#
        );
    }

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new(Provenance {
            tolerances: Tolerances::default(),
            seed: None,
            tool_version: "0".into(),
        });
        let bytes = serialize_report(&r);
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.contains("\"records\":[]"));
        assert_eq!(parse_report(&bytes).unwrap(), r);
        assert_eq!(serialize_report(&r), bytes);
    }
}
