//! `qpredict measure`: the measurement chain for one state and observable.
//! Prints the outcome distribution, the von Neumann mixture, interference
//! norms before and after, and the residual between the two descriptions
//! of the measurement (reduced compound pure state vs. mixture).

use num_complex::Complex64;
use serde::Serialize;

use qpredict::hilbert::spectral_decompose;
use qpredict::measurement::{
    interference_norm, partial_trace, premeasurement, von_neumann_mixture, DensityOperator,
    Factor,
};
use qpredict::prediction::state_distribution;
use qpredict::{ComplexMatrix, StateVector};

use crate::args::{Format, MeasureArgs, RunConfig};
use crate::output::{emit, matrix_rows, numerical, render_json, usage, CliError, Meta};
use crate::json_input::{parse_observable, parse_state};

#[derive(Serialize)]
struct MeasureReport {
    meta: Meta,
    distribution: Vec<OutcomeRow>,
    mixture_matrix: Vec<Vec<[f64; 2]>>,
    interference_norm_pure: f64,
    interference_norm_mixture: f64,
    premeasurement_residual: f64,
}

#[derive(Serialize)]
struct OutcomeRow {
    eigenvalue: f64,
    probability: f64,
}

pub fn run(config: &RunConfig, args: &MeasureArgs) -> Result<(), CliError> {
    let state = match &args.state {
        Some(text) => parse_state(text)?,
        None => equal_superposition(),
    };
    let matrix = match &args.observable {
        Some(text) => parse_observable(text)?,
        None => pauli_z(),
    };
    let obs = spectral_decompose(&matrix).map_err(usage)?;
    if obs.dim() != state.dim() {
        return Err(CliError::Usage(format!(
            "state dimension {} does not match observable dimension {}",
            state.dim(),
            obs.dim()
        )));
    }
    let meta = Meta::new("measure", config);

    let dist = state_distribution(&state, &obs).map_err(numerical)?;
    let total: f64 = dist.probabilities().iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(CliError::Numerical(format!(
            "outcome probabilities sum to {total}"
        )));
    }

    let pure = DensityOperator::from_pure(&state);
    let mixture = von_neumann_mixture(&state, &obs).map_err(numerical)?;
    let before = interference_norm(&pure, &obs).map_err(numerical)?;
    let after = interference_norm(&mixture, &obs).map_err(numerical)?;

    // The compound description: entangle with a pointer per eigenspace,
    // trace the apparatus out, compare with the mixture.
    let readings = obs.spectrum().len();
    if state.dim() * readings > qpredict::DEFAULT_DIM_LIMIT {
        return Err(CliError::Usage(format!(
            "system ({}) with {} pointer states exceeds the dimension cap {}",
            state.dim(),
            readings,
            qpredict::DEFAULT_DIM_LIMIT
        )));
    }
    let ready = StateVector::basis_state(readings, 0).map_err(numerical)?;
    let compound = premeasurement(&state, &obs, &ready).map_err(numerical)?;
    let reduced = partial_trace(
        &DensityOperator::from_pure(&compound),
        state.dim(),
        readings,
        Factor::Left,
    )
    .map_err(numerical)?;
    let residual = reduced
        .matrix()
        .sub(mixture.matrix())
        .map_err(numerical)?
        .max_abs();
    if residual > 1e-9 {
        return Err(CliError::Numerical(format!(
            "reduced compound state differs from the mixture by {residual:e}"
        )));
    }

    let report = MeasureReport {
        meta,
        distribution: dist
            .outcomes()
            .iter()
            .map(|&(eigenvalue, probability)| OutcomeRow {
                eigenvalue,
                probability,
            })
            .collect(),
        mixture_matrix: matrix_rows(mixture.matrix()),
        interference_norm_pure: before,
        interference_norm_mixture: after,
        premeasurement_residual: residual,
    };
    let text = match config.format {
        Format::Json => render_json(&report)?,
        Format::Csv => render_csv(&report),
    };
    emit(config, &text)
}

fn equal_superposition() -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)])
        .expect("equal superposition is unit norm")
}

fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![Complex64::ONE, Complex64::ZERO],
        vec![Complex64::ZERO, -Complex64::ONE],
    ])
    .expect("pauli-z is a valid matrix")
}

fn render_csv(report: &MeasureReport) -> String {
    let mut out = report.meta.csv_header();
    out.push_str("# outcome distribution\n");
    out.push_str("eigenvalue,probability\n");
    for row in &report.distribution {
        out.push_str(&format!("{:.9},{:.9}\n", row.eigenvalue, row.probability));
    }
    out.push_str("# von Neumann mixture (row,col,re,im)\n");
    for (i, row) in report.mixture_matrix.iter().enumerate() {
        for (j, [re, im]) in row.iter().enumerate() {
            out.push_str(&format!("{i},{j},{re:.9},{im:.9}\n"));
        }
    }
    out.push_str("# diagnostics\n");
    out.push_str("quantity,value\n");
    out.push_str(&format!(
        "interference_norm_pure,{:.9}\n",
        report.interference_norm_pure
    ));
    out.push_str(&format!(
        "interference_norm_mixture,{:.3e}\n",
        report.interference_norm_mixture
    ));
    out.push_str(&format!(
        "premeasurement_residual,{:.3e}\n",
        report.premeasurement_residual
    ));
    out
}
