//! JSON state files.
//!
//! ```json
//! {"n_qubits": 2, "kind": "pure", "amplitudes": [[0.7071067811865476, 0.0], [0, 0], [0, 0], [0.7071067811865476, 0.0]]}
//! {"n_qubits": 1, "kind": "mixed", "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::CMatrix;
use super::state::{DensityMatrix, PureState, QuantumState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateFile {
    Pure {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n_qubits: Option<usize>,
        amplitudes: Vec<[f64; 2]>,
    },
    Mixed {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n_qubits: Option<usize>,
        matrix: Vec<Vec<[f64; 2]>>,
    },
}

fn infer_qubits(declared: Option<usize>, dim: usize) -> Result<usize> {
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::InvalidState(format!(
            "dimension {dim} is not a power of two ≥ 2"
        )));
    }
    let n = dim.trailing_zeros() as usize;
    match declared {
        Some(d) if d != n => Err(Error::InvalidState(format!(
            "n_qubits = {d} but the data has dimension {dim}"
        ))),
        _ => Ok(n),
    }
}

fn c([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

impl StateFile {
    pub fn into_state(self) -> Result<QuantumState> {
        match self {
            StateFile::Pure {
                n_qubits,
                amplitudes,
            } => {
                let n = infer_qubits(n_qubits, amplitudes.len())?;
                let amps = amplitudes.into_iter().map(c).collect();
                Ok(QuantumState::Pure(PureState::new(n, amps)?))
            }
            StateFile::Mixed { n_qubits, matrix } => {
                let n = infer_qubits(n_qubits, matrix.len())?;
                let rows: Vec<Vec<Complex64>> = matrix
                    .into_iter()
                    .map(|row| row.into_iter().map(c).collect())
                    .collect();
                let m = CMatrix::from_rows(&rows)
                    .ok_or_else(|| Error::InvalidState("ragged matrix rows".into()))?;
                Ok(QuantumState::Mixed(DensityMatrix::new(n, m)?))
            }
        }
    }

    pub fn from_state(state: &QuantumState) -> Self {
        let pair = |z: &Complex64| [z.re, z.im];
        match state {
            QuantumState::Pure(p) => StateFile::Pure {
                n_qubits: Some(p.n_qubits()),
                amplitudes: p.amplitudes().iter().map(pair).collect(),
            },
            QuantumState::Mixed(m) => StateFile::Mixed {
                n_qubits: Some(m.n_qubits()),
                matrix: (0..m.dim())
                    .map(|r| m.entries().row(r).iter().map(pair).collect())
                    .collect(),
            },
        }
    }
}

pub fn parse_state(json: &str) -> Result<QuantumState> {
    serde_json::from_str::<StateFile>(json)?.into_state()
}

pub fn load_state(path: impl AsRef<Path>) -> Result<QuantumState> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_state(&text)
}

pub fn state_to_json(state: &QuantumState) -> Result<String> {
    Ok(serde_json::to_string(&StateFile::from_state(state))?)
}
