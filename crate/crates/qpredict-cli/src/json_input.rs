//! JSON input documents for states and observables: complex numbers as
//! `[re, im]` pairs, matrices as row-major nested lists. Values may be
//! passed inline or as a path to a file.

use num_complex::Complex64;
use serde::Deserialize;

use qpredict::{ComplexMatrix, StateVector};

use crate::output::{usage, CliError};

#[derive(Deserialize)]
struct StateSpec {
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
struct ObservableSpec {
    matrix: Vec<Vec<[f64; 2]>>,
}

/// Inline JSON when the value starts with `{`, otherwise a file path.
fn load(text: &str) -> Result<String, CliError> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        Ok(trimmed.to_string())
    } else {
        std::fs::read_to_string(trimmed)
            .map_err(|e| CliError::Usage(format!("cannot read {trimmed:?}: {e}")))
    }
}

pub fn parse_state(text: &str) -> Result<StateVector, CliError> {
    let doc = load(text)?;
    let spec: StateSpec = serde_json::from_str(&doc)
        .map_err(|e| CliError::Usage(format!("bad state document: {e}")))?;
    let amplitudes: Vec<Complex64> = spec
        .amplitudes
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    StateVector::new(amplitudes).map_err(usage)
}

pub fn parse_observable(text: &str) -> Result<ComplexMatrix, CliError> {
    let doc = load(text)?;
    let spec: ObservableSpec = serde_json::from_str(&doc)
        .map_err(|e| CliError::Usage(format!("bad observable document: {e}")))?;
    let rows: Vec<Vec<Complex64>> = spec
        .matrix
        .iter()
        .map(|row| row.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(usage)
}
