//! JSON state files.
//!
//! ```json
//! { "dims": [2, 2, 2], "matrix": [[0.125, 0.0], [0.0, 0.0], ...] }
//! ```
//!
//! `matrix` holds the `(d1·d2·d3)²` entries row by row as `[re, im]` pairs,
//! in the lexicographic basis with party A slowest.

use std::{ fs, io, path::{ Path, PathBuf } };
use num_complex::Complex64 as C64;
use serde::{ Deserialize, Serialize };
use thiserror::Error;
use crate::{
    hilbert::{ HilbertError, Operator, PartyDims },
    linalg::{ ComplexMatrix, LinalgError },
};

/// Largest `|M_ij − conj(M_ji)|` accepted on load.
pub const LOAD_HERMITIAN_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: [usize; 3],
    pub matrix: Vec<[f64; 2]>,
}

#[derive(Debug, Error)]
pub enum StateFileError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },

    #[error("parse error at byte {offset} (line {line}, column {column}): {message}")]
    Parse { offset: usize, line: usize, column: usize, message: String },

    #[error("invalid dims: {0}")]
    Dims(#[source] HilbertError),

    #[error("dims {dims:?} need {expected} matrix entries, found {got}")]
    DimensionMismatch { dims: [usize; 3], expected: usize, got: usize },

    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: |M[{row},{col}] - conj(M[{col},{row}])| = {deviation:e} exceeds {tol:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64, tol: f64 },
}

/// Byte offset of a 1-based `(line, column)` position in `text`.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

impl StateFile {
    pub fn from_operator(op: &Operator) -> Self {
        Self {
            dims: op.dims().as_array(),
            matrix: op.matrix().entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    /// Validate dims, length, finiteness and Hermiticity.
    pub fn into_operator(self) -> Result<Operator, StateFileError> {
        let [a, b, c] = self.dims;
        let dims = PartyDims::new(a, b, c).map_err(StateFileError::Dims)?;
        let n = dims.total();
        if self.matrix.len() != n * n {
            return Err(StateFileError::DimensionMismatch { dims: self.dims, expected: n * n, got: self.matrix.len() });
        }
        let data: Vec<C64> = self.matrix.iter().map(|&[re, im]| C64::new(re, im)).collect();
        let matrix = ComplexMatrix::from_row_major(n, data).map_err(|e| match e {
            LinalgError::NonFinite { row, col } => StateFileError::NonFinite { row, col },
            other => unreachable!("length already checked: {other}"),
        })?;
        let (deviation, row, col) = matrix.hermitian_deviation();
        if deviation > LOAD_HERMITIAN_TOL {
            return Err(StateFileError::NotHermitian { row, col, deviation, tol: LOAD_HERMITIAN_TOL });
        }
        Ok(Operator::new(dims, matrix).expect("size checked"))
    }
}

pub fn parse_state(text: &str) -> Result<Operator, StateFileError> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| StateFileError::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.into_operator()
}

pub fn load_state(path: impl AsRef<Path>) -> Result<Operator, StateFileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|source| StateFileError::Read { path: path.to_path_buf(), source })?;
    parse_state(&text)
}

/// Serialize to JSON. Entries are written in shortest round-trip form, so
/// [`parse_state`] restores them bit for bit.
pub fn to_json(op: &Operator) -> Result<String, StateFileError> {
    let n = op.matrix().dim();
    if let Some(k) = op.matrix().entries().iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(StateFileError::NonFinite { row: k / n, col: k % n });
    }
    Ok(serde_json::to_string(&StateFile::from_operator(op)).expect("finite floats serialize"))
}

pub fn save_state(op: &Operator, path: impl AsRef<Path>) -> Result<(), StateFileError> {
    let path = path.as_ref();
    let mut text = to_json(op)?;
    text.push('\n');
    fs::write(path, text).map_err(|source| StateFileError::Write { path: path.to_path_buf(), source })
}
