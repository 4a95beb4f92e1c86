//! Matrix interchange format: `{"rows": r, "cols": c, "data": [[[re, im], ...], ...]}`.
//!
//! Numbers are written with 17 significant digits, which round-trips every
//! finite `f64` bit-exactly.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<[f64; 2]>>,
}

fn push_number(out: &mut String, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Json(format!("cannot serialize non-finite entry {x}")));
    }
    write!(out, "{x:.16e}").expect("writing to a String");
    Ok(())
}

pub fn matrix_to_json(m: &CMatrix) -> Result<String> {
    let mut out = String::new();
    write!(out, "{{\"rows\": {}, \"cols\": {}, \"data\": [", m.rows(), m.cols()).expect("String");
    for i in 0..m.rows() {
        out.push_str(if i == 0 { "\n  [" } else { ",\n  [" });
        for j in 0..m.cols() {
            if j > 0 {
                out.push_str(", ");
            }
            let z = m[(i, j)];
            out.push('[');
            push_number(&mut out, z.re)?;
            out.push_str(", ");
            push_number(&mut out, z.im)?;
            out.push(']');
        }
        out.push(']');
    }
    out.push_str("\n]}\n");
    Ok(out)
}

pub fn matrix_from_json(text: &str) -> Result<CMatrix> {
    let raw: RawMatrix = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    if raw.data.len() != raw.rows {
        return Err(Error::Json(format!("\"rows\" is {} but data has {} rows", raw.rows, raw.data.len())));
    }
    let mut entries = Vec::with_capacity(raw.rows * raw.cols);
    for (i, row) in raw.data.iter().enumerate() {
        if row.len() != raw.cols {
            return Err(Error::Json(format!("row {i} has {} entries, expected {}", row.len(), raw.cols)));
        }
        entries.extend(row.iter().map(|&[re, im]| Complex64::new(re, im)));
    }
    CMatrix::new(raw.rows, raw.cols, entries).map_err(|e| Error::Json(e.to_string()))
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<CMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    matrix_from_json(&text).map_err(|e| match e {
        Error::Json(msg) => Error::Json(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_matrix(path: impl AsRef<Path>, m: &CMatrix) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, matrix_to_json(m)?).map_err(|source| Error::Io { path: path.display().to_string(), source })
}
