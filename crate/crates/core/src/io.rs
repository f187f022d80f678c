//! JSON input parsing and the report emitter used by the command-line tool.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), which
//! round-trips any `f64` exactly. Integers are written as integers. Object
//! keys come out sorted, so identical reports are byte-identical.

use nalgebra::DMatrix;
use serde_json::{Map, Value};

use crate::critical::{PluckerPolynomial, PluckerTerm};
use crate::error::GrassError;
use crate::grassmann::plane::{make_plane, Plane};

/// Version of the report layout, embedded in every report.
pub const SCHEMA_VERSION: u64 = 1;

/// A failure with a stable code, a message and the JSON path it refers to.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub path: String,
    pub exit: i32,
}

/// Exit code for malformed or unusable input.
pub const EXIT_INPUT: i32 = 2;
/// Exit code for well-formed input that violates a mathematical precondition.
pub const EXIT_DOMAIN: i32 = 3;
/// Exit code for numerical failures.
pub const EXIT_SOLVER: i32 = 4;

impl CliError {
    pub fn input(code: &str, message: impl Into<String>, path: impl Into<String>) -> CliError {
        CliError { code: code.into(), message: message.into(), path: path.into(), exit: EXIT_INPUT }
    }

    /// Wraps a library error raised while processing the input at `path`.
    pub fn from_grass(e: GrassError, path: &str) -> CliError {
        let exit = match e {
            GrassError::RankDeficient { .. }
            | GrassError::DimensionError(_)
            | GrassError::DimensionMismatch(_)
            | GrassError::NotUnit { .. }
            | GrassError::InvalidArgument(_)
            | GrassError::IndexOutOfRange { .. }
            | GrassError::InsufficientSamples { .. }
            | GrassError::FrameMismatch => EXIT_INPUT,
            GrassError::NoConvergence(_) | GrassError::StepTooSmall { .. } | GrassError::RankCollapse { .. } | GrassError::DegenerateAuxSpace { .. } => {
                EXIT_SOLVER
            }
            _ => EXIT_DOMAIN,
        };
        CliError { code: e.code().into(), message: e.to_string(), path: path.into(), exit }
    }

    pub fn to_json(&self) -> Value {
        let mut err = Map::new();
        err.insert("code".into(), Value::from(self.code.clone()));
        err.insert("message".into(), Value::from(self.message.clone()));
        err.insert("path".into(), Value::from(self.path.clone()));
        let mut top = Map::new();
        top.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        top.insert("error".into(), Value::Object(err));
        Value::Object(top)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Serializes a value as indented JSON with 17-digit floats.
pub fn emit(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

/// Formats one float the way [`emit`] does (`null` for non-finite values).
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize, out: &mut String| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            // Arrays of scalars stay on one line.
            if items.iter().all(|i| !i.is_array() && !i.is_object()) {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(item, depth, out);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(depth + 1, out);
                write_value(item, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                pad(depth + 1, out);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(item, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push('}');
        }
    }
}

pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

/// Row-major nested arrays.
pub fn matrix(m: &DMatrix<f64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| floats(&m.row(i).iter().copied().collect::<Vec<_>>())).collect())
}

pub fn indices(xs: &[usize]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::from(x as u64)).collect())
}

/// Looks up a required field.
pub fn field<'a>(obj: &'a Value, key: &str) -> CliResult<&'a Value> {
    obj.get(key).ok_or_else(|| CliError::input("MissingField", format!("missing field \"{key}\""), format!("$.{key}")))
}

pub fn parse_matrix(v: &Value, path: &str) -> CliResult<DMatrix<f64>> {
    let bad = |msg: &str| CliError::input("ParseError", msg.to_string(), path.to_string());
    let rows = v.as_array().ok_or_else(|| bad("expected an array of rows"))?;
    if rows.is_empty() {
        return Err(bad("matrix has no rows"));
    }
    let mut data: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| CliError::input("ParseError", "expected an array", format!("{path}[{i}]")))?;
        let vals = row
            .iter()
            .enumerate()
            .map(|(j, x)| x.as_f64().ok_or_else(|| CliError::input("ParseError", "expected a number", format!("{path}[{i}][{j}]"))))
            .collect::<CliResult<Vec<f64>>>()?;
        data.push(vals);
    }
    crate::linalg::from_rows(&data).ok_or_else(|| bad("rows have different lengths"))
}

/// A plane given by a spanning `n x k` matrix (orthonormalized on input).
pub fn parse_plane(obj: &Value, key: &str, tol_orth: f64) -> CliResult<Plane> {
    let path = format!("$.{key}");
    let m = parse_matrix(field(obj, key)?, &path)?;
    make_plane(&m, tol_orth).map_err(|e| CliError::from_grass(e, &path))
}

pub fn parse_usize(obj: &Value, key: &str) -> CliResult<usize> {
    field(obj, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| CliError::input("ParseError", format!("\"{key}\" must be a non-negative integer"), format!("$.{key}")))
}

/// Parses `{n, k, terms: [{idx, coef}]}`, or `{equations: [that]}` with
/// exactly one equation.
pub fn parse_polynomial(v: &Value) -> CliResult<PluckerPolynomial> {
    let (poly, base) = match v.get("equations") {
        Some(eqs) => {
            let eqs = eqs.as_array().ok_or_else(|| CliError::input("ParseError", "\"equations\" must be an array", "$.equations"))?;
            if eqs.len() != 1 {
                return Err(CliError {
                    code: "NotHypersurface".into(),
                    message: format!("expected exactly one defining equation, got {}", eqs.len()),
                    path: "$.equations".into(),
                    exit: EXIT_DOMAIN,
                });
            }
            (&eqs[0], "$.equations[0]".to_string())
        }
        None => (v, "$".to_string()),
    };
    let get = |key: &str| poly.get(key).ok_or_else(|| CliError::input("MissingField", format!("missing field \"{key}\""), format!("{base}.{key}")));
    let n = get("n")?.as_u64().ok_or_else(|| CliError::input("ParseError", "n must be an integer", format!("{base}.n")))? as usize;
    let k = get("k")?.as_u64().ok_or_else(|| CliError::input("ParseError", "k must be an integer", format!("{base}.k")))? as usize;
    let terms: Vec<PluckerTerm> =
        serde_json::from_value(get("terms")?.clone()).map_err(|e| CliError::input("ParseError", e.to_string(), format!("{base}.terms")))?;
    let p = PluckerPolynomial::new(n, k, terms).map_err(|e| CliError::from_grass(e, &base))?;
    p.check_hypersurface().map_err(|e| CliError::from_grass(e, &base))?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::f64::consts::PI, 0.0] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(format_float(f64::INFINITY), "null");
    }

    #[test]
    fn emitted_json_parses_back() {
        let v = json!({"b": [1, 2], "a": {"x": 0.1, "m": [[1.5, 2.0], [3.0, 4.0]]}, "s": "q\""});
        let text = emit(&v);
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["a"]["x"].as_f64(), Some(0.1));
        assert_eq!(back["b"][1].as_u64(), Some(2));
        assert_eq!(back["s"], "q\"");
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
    }

    #[test]
    fn equations_must_be_single() {
        let v = json!({"equations": [{"n": 4, "k": 2, "terms": [{"idx": [0], "coef": 1.0}]}, {"n": 4, "k": 2, "terms": [{"idx": [1], "coef": 1.0}]}]});
        let e = parse_polynomial(&v).unwrap_err();
        assert_eq!((e.code.as_str(), e.exit), ("NotHypersurface", EXIT_DOMAIN));
        let ok = json!({"equations": [{"n": 4, "k": 2, "terms": [{"idx": [0], "coef": 1.0}]}]});
        assert_eq!(parse_polynomial(&ok).unwrap().degree, 1);
    }
}
