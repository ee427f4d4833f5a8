//! Output plumbing: run metadata, CSV/JSON emission, error-to-exit-code
//! mapping.

use std::io::Write;

use serde::Serialize;

use crate::args::RunConfig;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Errors carrying their exit-code category.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or malformed input documents → exit 1.
    Usage(String),
    /// Filesystem trouble → exit 1.
    Io(String),
    /// An internal numerical self-check failed → exit 2.
    Numerical(String),
}

/// Maps engine errors raised while interpreting user input.
pub fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Maps engine errors raised during computation: at that point the inputs
/// were valid, so a failure is a numerical invariant violation.
pub fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Run provenance embedded in every output: CSV comment header lines,
/// JSON `meta` object.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub command: &'static str,
    pub seed: u64,
    pub trials: u64,
    pub rng: &'static str,
    pub version: &'static str,
}

impl Meta {
    pub fn new(command: &'static str, config: &RunConfig) -> Self {
        Self {
            command,
            seed: config.seed,
            trials: config.trials,
            rng: qpredict::rng::RNG_ALGORITHM,
            version: ARTIFACT_VERSION,
        }
    }

    pub fn csv_header(&self) -> String {
        format!(
            "# qpredict {} seed={} trials={} rng={} version={}\n",
            self.command, self.seed, self.trials, self.rng, self.version
        )
    }
}

/// Writes the rendered document to `--out` or standard output.
pub fn emit(config: &RunConfig, text: &str) -> Result<(), CliError> {
    match &config.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{path:?}: {e}"))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Renders a serializable report as pretty JSON with a trailing newline.
pub fn render_json<T: Serialize>(report: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Numerical(format!("JSON serialization: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Complex number as a `[re, im]` pair for JSON outputs.
pub fn complex_pair(z: num_complex::Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Matrix as row-major nested `[re, im]` pairs.
pub fn matrix_rows(m: &qpredict::ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    m.rows()
        .into_iter()
        .map(|row| row.into_iter().map(complex_pair).collect())
        .collect()
}

/// Fixed-precision angle formatting: 12 significant digits, matching the
/// trial-log CSV convention.
pub fn fmt_angle(x: f64) -> String {
    format!("{x:.11e}")
}
