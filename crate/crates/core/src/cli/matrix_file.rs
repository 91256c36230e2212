//! `{"rows": r, "cols": c, "data": [[re, im], ...]}` with row-major data.
//!
//! Entries may also be bare numbers (purely real). Output always uses pairs
//! and the shortest decimal that round-trips, so write-then-read is
//! bit-identical.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::densela::{CMatrix, LinalgError};

#[derive(Debug, Error)]
pub enum MatrixFileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: malformed matrix file: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Invalid { path: String, source: LinalgError },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    rows: usize,
    cols: usize,
    data: Vec<Entry>,
}

#[derive(Serialize)]
struct OutFile {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

/// Parses a matrix document. `origin` names the source in error messages.
pub fn parse_matrix(text: &str, origin: &str) -> Result<CMatrix, MatrixFileError> {
    let raw: RawFile = serde_json::from_str(text).map_err(|source| MatrixFileError::Json {
        path: origin.to_string(),
        source,
    })?;
    let entries = raw
        .data
        .into_iter()
        .map(|e| match e {
            Entry::Pair([re, im]) => Complex64::new(re, im),
            Entry::Real(re) => Complex64::new(re, 0.0),
        })
        .collect();
    CMatrix::new(raw.rows, raw.cols, entries).map_err(|source| MatrixFileError::Invalid {
        path: origin.to_string(),
        source,
    })
}

pub fn read_matrix(path: &Path) -> Result<CMatrix, MatrixFileError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| MatrixFileError::Io {
        path: shown.clone(),
        source,
    })?;
    parse_matrix(&text, &shown)
}

pub fn matrix_to_json(m: &CMatrix) -> serde_json::Value {
    let doc = OutFile {
        rows: m.rows(),
        cols: m.cols(),
        data: m.entries().into_iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_value(doc).expect("finite entries serialize")
}

pub fn write_matrix(path: &Path, m: &CMatrix) -> Result<(), MatrixFileError> {
    let mut text = serde_json::to_string(&matrix_to_json(m)).expect("value serializes");
    text.push('\n');
    fs::write(path, text).map_err(|source| MatrixFileError::Io {
        path: path.display().to_string(),
        source,
    })
}
