//! `qpredict dice`: the 12-throw table. Exact probabilities of finding n
//! 'four's among 12 throws of a fair die, next to the relative frequency
//! observed over `--trials` simulated series.

use serde::Serialize;

use qpredict::prediction::{binomial_pmf, ratio};
use qpredict::rng::Sampler;

use crate::args::{DiceArgs, Format, RunConfig};
use crate::output::{emit, numerical, render_json, CliError, Meta};

const THROWS: u64 = 12;

#[derive(Serialize)]
struct DiceReport {
    meta: Meta,
    rows: Vec<DiceRow>,
    exact_total: f64,
}

#[derive(Serialize)]
struct DiceRow {
    n: u64,
    exact: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampled_frequency: Option<f64>,
}

pub fn run(config: &RunConfig, args: &DiceArgs) -> Result<(), CliError> {
    let meta = Meta::new("dice", config);
    let sixth = ratio(1, 6);
    let exact: Vec<f64> = (0..=THROWS)
        .map(|n| binomial_pmf(n, THROWS, &sixth))
        .collect::<Result<_, _>>()
        .map_err(numerical)?;

    let exact_total: f64 = exact.iter().sum();
    if (exact_total - 1.0).abs() > 1e-12 {
        return Err(CliError::Numerical(format!(
            "exact table sums to {exact_total}, not 1"
        )));
    }

    let sampled = if args.exact_only {
        None
    } else {
        Some(simulate_series(config.trials, config.seed))
    };

    let rows: Vec<DiceRow> = (0..=THROWS as usize)
        .map(|n| DiceRow {
            n: n as u64,
            exact: exact[n],
            sampled_frequency: sampled.as_ref().map(|counts| {
                counts[n] as f64 / config.trials as f64
            }),
        })
        .collect();

    let report = DiceReport {
        meta,
        rows,
        exact_total,
    };
    let text = match config.format {
        Format::Json => render_json(&report)?,
        Format::Csv => render_csv(&report, args.exact_only),
    };
    emit(config, &text)
}

/// Repeats a series of 12 die throws and counts how many series contained
/// exactly n 'four's, for every n.
fn simulate_series(trials: u64, seed: u64) -> Vec<u64> {
    let mut sampler = Sampler::new(seed);
    let mut counts = vec![0u64; THROWS as usize + 1];
    for _ in 0..trials {
        let fours = (0..THROWS).filter(|_| sampler.index(6) == 3).count();
        counts[fours] += 1;
    }
    counts
}

fn render_csv(report: &DiceReport, exact_only: bool) -> String {
    let mut out = report.meta.csv_header();
    if exact_only {
        out.push_str("n,exact\n");
        for row in &report.rows {
            out.push_str(&format!("{},{:.12e}\n", row.n, row.exact));
        }
    } else {
        out.push_str("n,exact,sampled_frequency\n");
        for row in &report.rows {
            out.push_str(&format!(
                "{},{:.12e},{:.6}\n",
                row.n,
                row.exact,
                row.sampled_frequency.unwrap_or(0.0)
            ));
        }
    }
    out.push_str(&format!("# exact_total={:.6}\n", report.exact_total));
    out
}
