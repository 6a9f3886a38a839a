use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::layout::SubsystemLayout;
use super::linalg::ComplexMatrix;
use crate::error::{invalid, Error, Result};

/// On-disk state: `{"layout": [["a",2],["b",2]], "matrix": [[[re,im],...],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub layout: Vec<(String, usize)>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(invalid("matrix has no rows"));
    }
    let cols = rows[0].len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(invalid(format!(
            "matrix row {i} has {} entries, expected {cols}",
            r.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(n, cols, |r, c| {
        let [re, im] = rows[r][c];
        Complex64::new(re, im)
    }))
}

pub fn state_to_json(state: &DensityMatrix) -> StateFile {
    StateFile {
        layout: state
            .layout()
            .factors()
            .iter()
            .map(|f| (f.label.clone(), f.dim))
            .collect(),
        matrix: matrix_to_json(state.matrix()),
    }
}

/// Rejects non-square and layout-inconsistent matrices. Physical validity is
/// not checked here.
pub fn state_from_json(file: &StateFile) -> Result<DensityMatrix> {
    let layout = SubsystemLayout::new(file.layout.iter().cloned())?;
    let m = matrix_from_json(&file.matrix)?;
    DensityMatrix::new(layout, m)
}

/// Reads a bare [`StateFile`] or an output envelope whose `result` holds one.
pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)?;
    let parse_err = |e: serde_json::Error| Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut doc: serde_json::Value = serde_json::from_str(&text).map_err(parse_err)?;
    if doc.get("layout").is_none() {
        if let Some(inner) = doc.get_mut("result").map(serde_json::Value::take) {
            doc = inner;
        }
    }
    let file: StateFile = serde_json::from_value(doc).map_err(parse_err)?;
    state_from_json(&file).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_state(path: &Path, state: &DensityMatrix) -> Result<()> {
    let text = serde_json::to_string_pretty(&state_to_json(state))?;
    crate::report::write_atomic(path, text.as_bytes())
}
