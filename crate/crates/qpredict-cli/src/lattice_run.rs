//! `qpredict lattice`: axiom checks on random subspaces of the requested
//! dimension, the explicit non-distributive witness triple, and the
//! classical powerset lattice for contrast.

use num_complex::Complex64;
use serde::Serialize;

use qpredict::lattice::{
    self, c_join, c_meet, ClassicalEvent, Subspace,
};
use qpredict::random::random_subspace_any_rank;
use qpredict::rng::Sampler;

use crate::args::{Format, LatticeArgs, RunConfig};
use crate::output::{emit, numerical, render_json, CliError, Meta};

#[derive(Serialize)]
struct LatticeReport {
    meta: Meta,
    dim: usize,
    samples: u64,
    checks: Vec<CheckRow>,
    witness: Witness,
    classical: Classical,
}

#[derive(Serialize)]
struct CheckRow {
    check: &'static str,
    passes: u64,
    failures: u64,
}

#[derive(Serialize)]
struct Witness {
    description: &'static str,
    left_equals_a: bool,
    right_is_zero: bool,
    distributive: bool,
}

#[derive(Serialize)]
struct Classical {
    universe_size: usize,
    triples_checked: u64,
    distributivity_failures: u64,
}

pub fn run(config: &RunConfig, args: &LatticeArgs) -> Result<(), CliError> {
    if args.dim < 2 {
        return Err(CliError::Usage(format!(
            "dimension must be at least 2, got {}",
            args.dim
        )));
    }
    if args.dim > qpredict::DEFAULT_DIM_LIMIT {
        return Err(CliError::Usage(format!(
            "dimension must be at most {}, got {}",
            qpredict::DEFAULT_DIM_LIMIT,
            args.dim
        )));
    }
    let meta = Meta::new("lattice", config);
    let dim = args.dim;
    let mut sampler = Sampler::new(config.seed);

    let names = [
        "meet_with_complement_is_zero",
        "join_with_complement_is_full",
        "double_complement_restores",
        "order_reversal",
        "de_morgan",
    ];
    let mut passes = [0u64; 5];
    let mut failures = [0u64; 5];
    for _ in 0..args.samples {
        let e = random_subspace_any_rank(dim, &mut sampler).map_err(numerical)?;
        let ec = lattice::orthocomplement(&e);
        let partner = random_subspace_any_rank(dim, &mut sampler).map_err(numerical)?;
        let f = lattice::join(&e, &partner).map_err(numerical)?;
        let outcomes = [
            lattice::meet(&e, &ec).map_err(numerical)?.is_zero(),
            lattice::join(&e, &ec).map_err(numerical)?.is_full(),
            lattice::orthocomplement(&ec)
                .coincides_with(&e)
                .map_err(numerical)?,
            lattice::leq(&lattice::orthocomplement(&f), &ec).map_err(numerical)?,
            lattice::orthocomplement(&lattice::join(&e, &partner).map_err(numerical)?)
                .coincides_with(
                    &lattice::meet(&ec, &lattice::orthocomplement(&partner))
                        .map_err(numerical)?,
                )
                .map_err(numerical)?,
        ];
        for (k, ok) in outcomes.into_iter().enumerate() {
            if ok {
                passes[k] += 1;
            } else {
                failures[k] += 1;
            }
        }
    }
    if failures.iter().any(|&f| f > 0) {
        let broken: Vec<&str> = names
            .iter()
            .zip(&failures)
            .filter(|(_, &f)| f > 0)
            .map(|(n, _)| *n)
            .collect();
        return Err(CliError::Numerical(format!(
            "lattice axiom failures in: {}",
            broken.join(", ")
        )));
    }

    // Witness triple embedded in the first two coordinates: A = spin-x up,
    // B = spin-z up, C = spin-z down.
    let mut up = vec![Complex64::ZERO; dim];
    up[0] = Complex64::ONE;
    let mut down = vec![Complex64::ZERO; dim];
    down[1] = Complex64::ONE;
    let mut diag = vec![Complex64::ZERO; dim];
    diag[0] = Complex64::ONE;
    diag[1] = Complex64::ONE;
    let a = Subspace::span(dim, &[diag]).map_err(numerical)?;
    let b = Subspace::span(dim, &[up]).map_err(numerical)?;
    let c = Subspace::span(dim, &[down]).map_err(numerical)?;
    let left = lattice::meet(&a, &lattice::join(&b, &c).map_err(numerical)?)
        .map_err(numerical)?;
    let right = lattice::join(
        &lattice::meet(&a, &b).map_err(numerical)?,
        &lattice::meet(&a, &c).map_err(numerical)?,
    )
    .map_err(numerical)?;
    let witness = Witness {
        description: "A = spin-x up, B = spin-z up, C = spin-z down",
        left_equals_a: left.coincides_with(&a).map_err(numerical)?,
        right_is_zero: right.is_zero(),
        distributive: lattice::distributivity_holds(&a, &b, &c).map_err(numerical)?,
    };
    if !witness.left_equals_a || !witness.right_is_zero || witness.distributive {
        return Err(CliError::Numerical(
            "distributivity counterexample did not evaluate to left = A, right = ∅".into(),
        ));
    }

    // Classical side: exhaustive distributivity over a 4-element universe.
    let events: Vec<ClassicalEvent> = (0u32..16)
        .map(|mask| ClassicalEvent::new(4, (0..4).filter(|b| mask & (1 << b) != 0)))
        .collect::<Result<_, _>>()
        .map_err(numerical)?;
    let mut classical_failures = 0u64;
    let mut triples = 0u64;
    for x in &events {
        for y in &events {
            for z in &events {
                triples += 1;
                let lhs = c_meet(x, &c_join(y, z).map_err(numerical)?).map_err(numerical)?;
                let rhs = c_join(
                    &c_meet(x, y).map_err(numerical)?,
                    &c_meet(x, z).map_err(numerical)?,
                )
                .map_err(numerical)?;
                if lhs != rhs {
                    classical_failures += 1;
                }
            }
        }
    }
    if classical_failures > 0 {
        return Err(CliError::Numerical(format!(
            "{classical_failures} classical distributivity failures"
        )));
    }

    let report = LatticeReport {
        meta,
        dim,
        samples: args.samples,
        checks: names
            .iter()
            .zip(passes.iter().zip(&failures))
            .map(|(check, (&passes, &failures))| CheckRow {
                check,
                passes,
                failures,
            })
            .collect(),
        witness,
        classical: Classical {
            universe_size: 4,
            triples_checked: triples,
            distributivity_failures: classical_failures,
        },
    };
    let text = match config.format {
        Format::Json => render_json(&report)?,
        Format::Csv => render_csv(&report),
    };
    emit(config, &text)
}

fn render_csv(report: &LatticeReport) -> String {
    let mut out = report.meta.csv_header();
    out.push_str(&format!(
        "# axiom checks, dim={} samples={}\n",
        report.dim, report.samples
    ));
    out.push_str("check,passes,failures\n");
    for row in &report.checks {
        out.push_str(&format!("{},{},{}\n", row.check, row.passes, row.failures));
    }
    out.push_str(&format!("# witness triple: {}\n", report.witness.description));
    out.push_str("property,value\n");
    out.push_str(&format!("left_equals_a,{}\n", report.witness.left_equals_a));
    out.push_str(&format!("right_is_zero,{}\n", report.witness.right_is_zero));
    out.push_str(&format!("distributive,{}\n", report.witness.distributive));
    out.push_str(&format!(
        "# classical powerset, universe={} (exhaustive)\n",
        report.classical.universe_size
    ));
    out.push_str("quantity,value\n");
    out.push_str(&format!(
        "triples_checked,{}\n",
        report.classical.triples_checked
    ));
    out.push_str(&format!(
        "distributivity_failures,{}\n",
        report.classical.distributivity_failures
    ));
    out
}
