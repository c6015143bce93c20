//! JSON problem files and lossless report output.
//!
//! Complex entries are `[re, im]` pairs and matrices are row-major nested
//! arrays. Reports print every float with 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// A complex matrix that (de)serializes as rows of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat(pub CMatrix);

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m = &self.0;
        let rows: Vec<Vec<[f64; 2]>> =
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        rows_to_matrix(&rows).map(Mat).map_err(serde::de::Error::custom)
    }
}

pub fn rows_to_matrix(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    if nr == 0 || nc == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::Dimension("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(nr, nc, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

/// Input file for the command-line tool.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub dim: usize,
    #[serde(rename = "A")]
    pub a: Mat,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Mat>,
    #[serde(rename = "A2", default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<Mat>,
    #[serde(rename = "T2", default, skip_serializing_if = "Option::is_none")]
    pub t2: Option<Mat>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let pf: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        pf.validate_shapes()?;
        Ok(pf)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate_shapes(&self) -> Result<()> {
        let n = self.dim;
        let check = |m: &Mat, what: &str, n: usize| {
            if m.0.shape() != (n, n) {
                Err(Error::Dimension(format!("{what} must be {n}x{n}, got {}x{}", m.0.nrows(), m.0.ncols())))
            } else {
                Ok(())
            }
        };
        check(&self.a, "A", n)?;
        if let Some(t) = &self.t {
            check(t, "T", n)?;
        }
        match (&self.a2, &self.t2) {
            (Some(a2), Some(t2)) => check(t2, "T2", a2.0.nrows()),
            (None, Some(t2)) => check(t2, "T2", n),
            _ => Ok(()),
        }
    }

    pub fn require_t(&self) -> Result<&CMatrix> {
        self.t.as_ref().map(|m| &m.0).ok_or_else(|| Error::InvalidArgument("problem file has no T".into()))
    }
}

/// Serialize to pretty JSON with every float written as `{:.16e}`.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let f = n.as_f64().unwrap_or(f64::NAN);
                let _ = write!(out, "{:.16e}", f);
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap_or_default()),
        Value::Array(items) => {
            // short arrays of scalars stay on one line
            if items.iter().all(|x| !x.is_array() && !x.is_object()) {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, x, indent + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&serde_json::to_string(k).unwrap_or_default());
                out.push_str(": ");
                write_value(out, x, indent + 1);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}
