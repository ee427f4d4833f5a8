//! `qpredict epr`: one long singlet experiment over a grid of settings,
//! then the bookkeeping — per-pair counts and correlations, post-selected
//! conditional ensembles, and no-signaling deltas.

use serde::Serialize;

use qpredict::epr::{self, Direction, TrialLog};

use crate::args::{EprArgs, Format, RunConfig};
use crate::output::{emit, fmt_angle, numerical, render_json, CliError, Meta};

#[derive(Serialize)]
struct EprReport {
    meta: Meta,
    pairs: Vec<PairRow>,
    postselected: Vec<PostselectedRow>,
    no_signaling: Vec<NoSignalingRow>,
}

#[derive(Serialize)]
struct PairRow {
    alice_theta: f64,
    alice_phi: f64,
    bob_theta: f64,
    bob_phi: f64,
    trials: u64,
    n_mm: u64,
    n_mp: u64,
    n_pm: u64,
    n_pp: u64,
    alice_plus_freq: f64,
    bob_plus_freq: f64,
    same_outcome_count: u64,
    corr_sampled: f64,
    corr_exact: f64,
}

#[derive(Serialize)]
struct PostselectedRow {
    alice_theta: f64,
    alice_phi: f64,
    bob_theta: f64,
    bob_phi: f64,
    selected: u64,
    bob_plus_freq: f64,
    predicted_plus: f64,
    sigma: f64,
}

#[derive(Serialize)]
struct NoSignalingRow {
    /// Which wing's marginal is being watched.
    wing: &'static str,
    theta: f64,
    phi: f64,
    /// Largest spread of this wing's +1 frequency across the other wing's
    /// settings.
    max_delta: f64,
    /// 3σ allowance for that spread at the observed cell sizes.
    three_sigma: f64,
    ok: bool,
}

pub fn run(config: &RunConfig, args: &EprArgs) -> Result<(), CliError> {
    let alice = parse_angles(&args.alice_angles)?;
    let bob = parse_angles(&args.bob_angles)?;
    let meta = Meta::new("epr", config);

    let log = epr::run_trials(&alice, &bob, config.trials, config.seed).map_err(numerical)?;
    if let Some(path) = &args.log_out {
        std::fs::write(path, log.to_csv())
            .map_err(|e| CliError::Io(format!("{path:?}: {e}")))?;
    }

    let mut pairs = Vec::new();
    for a in &alice {
        for b in &bob {
            pairs.push(pair_row(&log, a, b)?);
        }
    }

    let mut postselected = Vec::new();
    for a in &alice {
        let report = epr::postselect(&log, 1, a).map_err(numerical)?;
        for cond in &report.conditionals {
            let n = cond.observed.trials() as f64;
            let predicted = cond.predicted.probability_of(1.0);
            postselected.push(PostselectedRow {
                alice_theta: a.theta(),
                alice_phi: a.phi(),
                bob_theta: cond.bob_dir.theta(),
                bob_phi: cond.bob_dir.phi(),
                selected: cond.observed.trials(),
                bob_plus_freq: cond.observed.frequency_of(1.0),
                predicted_plus: predicted,
                sigma: (predicted * (1.0 - predicted) / n).sqrt(),
            });
        }
    }

    let mut no_signaling = Vec::new();
    for b in &bob {
        no_signaling.push(no_signaling_row(&log, "bob", b, &alice, |t| {
            (t.bob_dir, t.alice_dir, t.bob_out)
        })?);
    }
    for a in &alice {
        no_signaling.push(no_signaling_row(&log, "alice", a, &bob, |t| {
            (t.alice_dir, t.bob_dir, t.alice_out)
        })?);
    }
    for row in &no_signaling {
        if !row.ok {
            return Err(CliError::Numerical(format!(
                "no-signaling delta {} on {} wing exceeds 3σ = {}",
                row.max_delta, row.wing, row.three_sigma
            )));
        }
    }

    let report = EprReport {
        meta,
        pairs,
        postselected,
        no_signaling,
    };
    let text = match config.format {
        Format::Json => render_json(&report)?,
        Format::Csv => render_csv(&report),
    };
    emit(config, &text)
}

fn parse_angles(text: &str) -> Result<Vec<Direction>, CliError> {
    let mut out = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let angle: f64 = token
            .parse()
            .map_err(|e| CliError::Usage(format!("bad angle {token:?}: {e}")))?;
        if !angle.is_finite() {
            return Err(CliError::Usage(format!("angle {token:?} is not finite")));
        }
        out.push(Direction::planar(angle));
    }
    if out.is_empty() {
        return Err(CliError::Usage("no angles given".into()));
    }
    Ok(out)
}

fn pair_row(log: &TrialLog, a: &Direction, b: &Direction) -> Result<PairRow, CliError> {
    let mut counts = [[0u64; 2]; 2];
    for t in log.trials() {
        if t.alice_dir == *a && t.bob_dir == *b {
            let i = usize::from(t.alice_out == 1);
            let j = usize::from(t.bob_out == 1);
            counts[i][j] += 1;
        }
    }
    let trials: u64 = counts.iter().flatten().sum();
    if trials == 0 {
        return Err(CliError::Numerical(format!(
            "no trials landed on setting pair ({}, {})",
            a.theta(),
            b.theta()
        )));
    }
    let n = trials as f64;
    let joint = epr::joint_distribution(a, b).map_err(numerical)?;
    let sampled_corr =
        (counts[0][0] as f64 - counts[0][1] as f64 - counts[1][0] as f64 + counts[1][1] as f64)
            / n;
    Ok(PairRow {
        alice_theta: a.theta(),
        alice_phi: a.phi(),
        bob_theta: b.theta(),
        bob_phi: b.phi(),
        trials,
        n_mm: counts[0][0],
        n_mp: counts[0][1],
        n_pm: counts[1][0],
        n_pp: counts[1][1],
        alice_plus_freq: (counts[1][0] + counts[1][1]) as f64 / n,
        bob_plus_freq: (counts[0][1] + counts[1][1]) as f64 / n,
        same_outcome_count: counts[0][0] + counts[1][1],
        corr_sampled: sampled_corr,
        corr_exact: joint.correlation(),
    })
}

/// Watches one wing's +1 frequency while the other wing's setting varies;
/// the spread must stay within 3σ of sampling noise.
fn no_signaling_row(
    log: &TrialLog,
    wing: &'static str,
    own: &Direction,
    other_settings: &[Direction],
    extract: impl Fn(&epr::Trial) -> (Direction, Direction, i8),
) -> Result<NoSignalingRow, CliError> {
    let mut freqs = Vec::new();
    let mut min_cell = u64::MAX;
    for other in other_settings {
        let mut plus = 0u64;
        let mut total = 0u64;
        for t in log.trials() {
            let (own_dir, other_dir, own_out) = extract(t);
            if own_dir == *own && other_dir == *other {
                total += 1;
                if own_out == 1 {
                    plus += 1;
                }
            }
        }
        if total == 0 {
            return Err(CliError::Numerical(format!(
                "empty cell for no-signaling check on {wing} wing"
            )));
        }
        min_cell = min_cell.min(total);
        freqs.push(plus as f64 / total as f64);
    }
    let max = freqs.iter().cloned().fold(f64::MIN, f64::max);
    let min = freqs.iter().cloned().fold(f64::MAX, f64::min);
    let max_delta = max - min;
    // Difference of two independent binomial frequencies at p = ½.
    let three_sigma = 3.0 * (2.0 * 0.25 / min_cell as f64).sqrt();
    Ok(NoSignalingRow {
        wing,
        theta: own.theta(),
        phi: own.phi(),
        max_delta,
        three_sigma,
        ok: max_delta <= three_sigma,
    })
}

fn render_csv(report: &EprReport) -> String {
    let mut out = report.meta.csv_header();
    out.push_str("# per setting pair\n");
    out.push_str("alice_theta,alice_phi,bob_theta,bob_phi,trials,n_mm,n_mp,n_pm,n_pp,alice_plus_freq,bob_plus_freq,same_outcome_count,corr_sampled,corr_exact\n");
    for r in &report.pairs {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{:.6},{:.6},{},{:.6},{:.6}\n",
            fmt_angle(r.alice_theta),
            fmt_angle(r.alice_phi),
            fmt_angle(r.bob_theta),
            fmt_angle(r.bob_phi),
            r.trials,
            r.n_mm,
            r.n_mp,
            r.n_pm,
            r.n_pp,
            r.alice_plus_freq,
            r.bob_plus_freq,
            r.same_outcome_count,
            r.corr_sampled,
            r.corr_exact,
        ));
    }
    out.push_str("# post-selected on Alice +1\n");
    out.push_str(
        "alice_theta,alice_phi,bob_theta,bob_phi,selected,bob_plus_freq,predicted_plus,sigma\n",
    );
    for r in &report.postselected {
        out.push_str(&format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6}\n",
            fmt_angle(r.alice_theta),
            fmt_angle(r.alice_phi),
            fmt_angle(r.bob_theta),
            fmt_angle(r.bob_phi),
            r.selected,
            r.bob_plus_freq,
            r.predicted_plus,
            r.sigma,
        ));
    }
    out.push_str("# no-signaling deltas\n");
    out.push_str("wing,theta,phi,max_delta,three_sigma,ok\n");
    for r in &report.no_signaling {
        out.push_str(&format!(
            "{},{},{},{:.6},{:.6},{}\n",
            r.wing,
            fmt_angle(r.theta),
            fmt_angle(r.phi),
            r.max_delta,
            r.three_sigma,
            r.ok,
        ));
    }
    out
}
