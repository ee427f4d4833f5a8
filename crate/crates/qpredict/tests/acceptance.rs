//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them all). Thresholds and
//! case counts are pinned here, not configurable.

use qpredict::epr::{self, Direction};
use qpredict::hilbert::{
    born_probability, evolve, tensor_op, tensor_state, EvolutionConfig,
};
use qpredict::lattice::{self, c_complement, c_join, c_meet, ClassicalEvent, Subspace};
use qpredict::measurement::{
    interference_norm, partial_trace, premeasurement, von_neumann_mixture, DensityOperator,
    Factor,
};
use qpredict::prediction::{binomial_pmf, ratio};
use qpredict::random::{
    random_diagonal_observable, random_observable, random_state, random_subspace_any_rank,
};
use qpredict::rng::Sampler;
use qpredict::StateVector;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};

fn report(number: u32, name: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("ACCEPTANCE {number} ({name}): PASS");
    } else {
        println!("ACCEPTANCE {number} ({name}): FAIL");
        for f in &failures {
            println!("  - {f}");
        }
        panic!("acceptance criterion {number} ({name}) failed");
    }
}

#[test]
fn criterion_1_binomial_table() {
    let mut failures = Vec::new();
    let sixth = ratio(1, 6);
    // Three significant figures for the four quoted percentages.
    for (n, expected) in [(2u64, 0.296), (1, 0.269), (3, 0.197), (0, 0.112)] {
        let p = binomial_pmf(n, 12, &sixth).unwrap();
        let rounded = (p * 1000.0).round() / 1000.0;
        if (rounded - expected).abs() > 1e-12 {
            failures.push(format!("p({n}) = {p} rounds to {rounded}, expected {expected}"));
        }
    }
    // One significant figure for p(12) = 5e-10.
    let p12 = binomial_pmf(12, 12, &sixth).unwrap();
    if (p12 * 1e10).round() != 5.0 {
        failures.push(format!("p(12) = {p12:e}, expected 5e-10 to 1 s.f."));
    }
    report(1, "binomial table", failures);
}

#[test]
fn criterion_2_perfect_anticorrelation() {
    let mut failures = Vec::new();
    for (label, dir) in [
        ("vertical", Direction::polar(0.0).unwrap()),
        ("tilted", Direction::new(1.234, 0.777).unwrap()),
    ] {
        let joint = epr::joint_distribution(&dir, &dir).unwrap();
        let same = joint.probability(1, 1).unwrap() + joint.probability(-1, -1).unwrap();
        if same > 1e-12 {
            failures.push(format!("{label}: same-outcome probability {same:e} > 1e-12"));
        }
    }
    let dir = Direction::polar(0.6).unwrap();
    let log = epr::run_trials(&[dir], &[dir], 100_000, 0xacc2).unwrap();
    let same_events = log
        .trials()
        .iter()
        .filter(|t| t.alice_out == t.bob_out)
        .count();
    if same_events != 0 {
        failures.push(format!("{same_events} same-outcome events in 1e5 aligned trials"));
    }
    report(2, "perfect anticorrelation", failures);
}

#[test]
fn criterion_3_no_signaling() {
    let mut failures = Vec::new();
    let grid: Vec<Direction> = (0..16)
        .map(|k| Direction::planar(k as f64 * TAU / 16.0))
        .collect();
    // Exact marginals over the whole grid of setting pairs.
    for a in &grid {
        for b in &grid {
            let joint = epr::joint_distribution(a, b).unwrap();
            let (bm, bp) = joint.bob_marginal();
            let (am, ap) = joint.alice_marginal();
            for (label, p) in [("bob-", bm), ("bob+", bp), ("alice-", am), ("alice+", ap)] {
                if (p - 0.5).abs() > 1e-12 {
                    failures.push(format!(
                        "exact {label} marginal {p} at a={:.3}, b={:.3}",
                        a.theta(),
                        b.theta()
                    ));
                }
            }
        }
    }
    // Sampled marginals: 1e5 trials per Alice cell, fixed Bob apparatus.
    let trials = 100_000u64;
    let sigma = (0.25 / trials as f64).sqrt();
    let bob = Direction::polar(0.9).unwrap();
    for (k, a) in grid.iter().enumerate() {
        let log = epr::run_trials(&[*a], &[bob], trials, 0xacc3 + k as u64).unwrap();
        let bob_plus =
            log.trials().iter().filter(|t| t.bob_out == 1).count() as f64 / trials as f64;
        if (bob_plus - 0.5).abs() > 3.0 * sigma {
            failures.push(format!(
                "sampled Bob marginal {bob_plus} at Alice cell {k} strays past 3σ"
            ));
        }
    }
    report(3, "no-signaling", failures);
}

#[test]
fn criterion_4_postselection_bookkeeping() {
    let mut failures = Vec::new();
    let alice = Direction::polar(0.0).unwrap();
    let trials = 100_000u64;
    for k in 0..8u32 {
        let theta = k as f64 * PI / 8.0;
        let bob = Direction::planar(theta);
        let log = epr::run_trials(&[alice], &[bob], trials, 0xacc4 + k as u64).unwrap();
        let report_ps = epr::postselect(&log, 1, &alice).unwrap();
        let cond = &report_ps.conditionals[0];
        let predicted = (theta / 2.0).sin().powi(2);
        if (cond.predicted.probability_of(1.0) - predicted).abs() > 1e-12 {
            failures.push(format!(
                "collapsed-state prediction at θ={theta:.3} is {} not sin²(θ/2)={predicted}",
                cond.predicted.probability_of(1.0)
            ));
        }
        let n = cond.observed.trials() as f64;
        let freq = cond.observed.frequency_of(1.0);
        let sigma = (predicted * (1.0 - predicted) / n).sqrt();
        if (freq - predicted).abs() > 4.0 * sigma {
            failures.push(format!(
                "θ={theta:.3}: conditional frequency {freq} vs {predicted} exceeds 4σ={:.2e}",
                4.0 * sigma
            ));
        }
    }
    report(4, "post-selection bookkeeping", failures);
}

#[test]
fn criterion_5_bell_violation() {
    let mut failures = Vec::new();
    let a = Direction::planar(0.0);
    let a2 = Direction::planar(FRAC_PI_2);
    let b = Direction::planar(FRAC_PI_4);
    let b2 = Direction::planar(3.0 * FRAC_PI_4);
    let s_exact = epr::chsh(&a, &a2, &b, &b2).unwrap();
    if (s_exact.abs() - 2.0 * SQRT_2).abs() > 1e-9 {
        failures.push(format!("exact |S| = {} not 2√2 ± 1e-9", s_exact.abs()));
    }
    if epr::lhv_max_chsh() != 2.0 {
        failures.push(format!(
            "LHV brute force max |S| = {} not exactly 2",
            epr::lhv_max_chsh()
        ));
    }
    // Sampled S over the four setting pairs, 1e5 trials each.
    let trials = 100_000u64;
    let mut s_sampled = 0.0;
    let mut variance = 0.0;
    for (idx, (x, y, sign)) in [
        (a, b, 1.0),
        (a, b2, -1.0),
        (a2, b, 1.0),
        (a2, b2, 1.0),
    ]
    .into_iter()
    .enumerate()
    {
        let log = epr::run_trials(&[x], &[y], trials, 0xacc5 + idx as u64).unwrap();
        let e = log.empirical_correlation(&x, &y).unwrap();
        s_sampled += sign * e;
        variance += (1.0 - e * e) / trials as f64;
    }
    let sigma = variance.sqrt();
    if (s_sampled - s_exact).abs() > 3.0 * sigma {
        failures.push(format!(
            "sampled S = {s_sampled} vs exact {s_exact}, past 3σ = {:.2e}",
            3.0 * sigma
        ));
    }
    report(5, "Bell violation", failures);
}

#[test]
fn criterion_6_measurement_theory_core() {
    let mut failures = Vec::new();
    let mut sampler = Sampler::new(0xacc6);
    let mut checked = 0;
    while checked < 200 {
        let dim = 2 + sampler.index(3); // dims 2..=4
        let state = random_state(dim, &mut sampler).unwrap();
        let obs = random_observable(dim, &mut sampler).unwrap();
        let ready = StateVector::basis_state(dim, 0).unwrap();
        let compound = premeasurement(&state, &obs, &ready).unwrap();
        let reduced = partial_trace(
            &DensityOperator::from_pure(&compound),
            dim,
            dim,
            Factor::Left,
        )
        .unwrap();
        let mixture = von_neumann_mixture(&state, &obs).unwrap();
        let residual = reduced.matrix().sub(mixture.matrix()).unwrap().max_abs();
        if residual > 1e-9 {
            failures.push(format!("pair {checked}: reduced-vs-mixture residual {residual:e}"));
        }
        // Interference terms of the mixture in the measured eigenbasis:
        // nothing left beyond strict rounding noise.
        let off = interference_norm(&mixture, &obs).unwrap();
        if off > 1e-24 {
            failures.push(format!("pair {checked}: interference norm {off:e}"));
        }
        checked += 1;
    }
    // Exactly-representable eigenbases: the interference norm is 0.0, not
    // merely small.
    for k in 0..200 {
        let dim = 2 + sampler.index(3);
        let state = random_state(dim, &mut sampler).unwrap();
        let obs = random_diagonal_observable(dim, &mut sampler).unwrap();
        let mixture = von_neumann_mixture(&state, &obs).unwrap();
        let off = interference_norm(&mixture, &obs).unwrap();
        if off != 0.0 {
            failures.push(format!("diagonal pair {k}: interference norm {off:e} != 0"));
        }
    }
    report(6, "measurement-theory core", failures);
}

#[test]
fn criterion_7_lattice_axioms() {
    let mut failures = Vec::new();
    let mut sampler = Sampler::new(0xacc7);
    for dim in 2..=6 {
        for case in 0..500 {
            let e = random_subspace_any_rank(dim, &mut sampler).unwrap();
            let ec = lattice::orthocomplement(&e);
            let mut check = |ok: bool, what: &str| {
                if !ok {
                    failures.push(format!("dim {dim} case {case}: {what}"));
                }
            };
            check(
                lattice::meet(&e, &ec).unwrap().is_zero(),
                "E ∧ E⊥ is not ∅",
            );
            check(
                lattice::join(&e, &ec).unwrap().is_full(),
                "E ∨ E⊥ is not 𝟏",
            );
            check(
                lattice::orthocomplement(&ec).coincides_with(&e).unwrap(),
                "E⊥⊥ is not E",
            );
            // Order reversal on a constructed comparable pair, plus De
            // Morgan against an independent partner.
            let partner = random_subspace_any_rank(dim, &mut sampler).unwrap();
            let f = lattice::join(&e, &partner).unwrap();
            check(lattice::leq(&e, &f).unwrap(), "E is not below E ∨ R");
            check(
                lattice::leq(&lattice::orthocomplement(&f), &ec).unwrap(),
                "order reversal fails",
            );
            let lhs = lattice::orthocomplement(&lattice::join(&e, &partner).unwrap());
            let rhs = lattice::meet(&ec, &lattice::orthocomplement(&partner)).unwrap();
            check(lhs.coincides_with(&rhs).unwrap(), "De Morgan fails");
        }
    }
    // The canonical non-distributive witness: A = spin-x up, B/C = spin-z
    // up/down. Left side is A, right side is ∅.
    let one = num_complex::Complex64::ONE;
    let a = Subspace::span(2, &[vec![one, one]]).unwrap();
    let b = Subspace::span(2, &[vec![one, num_complex::Complex64::ZERO]]).unwrap();
    let c = Subspace::span(2, &[vec![num_complex::Complex64::ZERO, one]]).unwrap();
    let left = lattice::meet(&a, &lattice::join(&b, &c).unwrap()).unwrap();
    let right = lattice::join(
        &lattice::meet(&a, &b).unwrap(),
        &lattice::meet(&a, &c).unwrap(),
    )
    .unwrap();
    if !left.coincides_with(&a).unwrap() {
        failures.push("witness triple: left side is not A".into());
    }
    if !right.is_zero() {
        failures.push("witness triple: right side is not ∅".into());
    }
    // Classical contrast: the powerset lattice distributes, exhaustively.
    let events: Vec<ClassicalEvent> = (0u32..16)
        .map(|mask| ClassicalEvent::new(4, (0..4).filter(|b| mask & (1 << b) != 0)).unwrap())
        .collect();
    let mut classical_failures = 0;
    for x in &events {
        for y in &events {
            for z in &events {
                let lhs = c_meet(x, &c_join(y, z).unwrap()).unwrap();
                let rhs = c_join(&c_meet(x, y).unwrap(), &c_meet(x, z).unwrap()).unwrap();
                if lhs != rhs {
                    classical_failures += 1;
                }
            }
        }
    }
    if classical_failures != 0 {
        failures.push(format!("{classical_failures} classical distributivity failures"));
    }
    let all = ClassicalEvent::all(4).unwrap();
    if c_complement(&ClassicalEvent::empty(4).unwrap()) != all {
        failures.push("classical complement of ∅ is not the full set".into());
    }
    report(7, "lattice axioms", failures);
}

#[test]
fn criterion_8_formalism_invariants() {
    let mut failures = Vec::new();
    let mut sampler = Sampler::new(0xacc8);

    // Born probabilities over a full spectrum sum to 1 (1e-9): 100 states
    // per random observable, dims 2..=8.
    for dim in 2..=8 {
        let obs = random_observable(dim, &mut sampler).unwrap();
        for _ in 0..100 {
            let state = random_state(dim, &mut sampler).unwrap();
            let total: f64 = obs
                .spectrum()
                .iter()
                .map(|line| born_probability(&state, &line.projector).unwrap())
                .sum();
            if (total - 1.0).abs() > 1e-9 {
                failures.push(format!("dim {dim}: Born sum {total}"));
            }
        }
    }

    // Evolution preserves norm (1e-10) and composes additively in time
    // (1e-9): 120 randomized cases each.
    for case in 0..120 {
        let dim = 2 + sampler.index(5);
        let h = random_observable(dim, &mut sampler).unwrap();
        let state = random_state(dim, &mut sampler).unwrap();
        let t1 = sampler.uniform() * 20.0 - 10.0;
        let t2 = sampler.uniform() * 20.0 - 10.0;
        let once = evolve(&state, &h, &EvolutionConfig::new(t1)).unwrap();
        if (once.norm() - 1.0).abs() > 1e-10 {
            failures.push(format!("case {case}: evolved norm {}", once.norm()));
        }
        let twice = evolve(&once, &h, &EvolutionConfig::new(t2)).unwrap();
        let direct = evolve(&state, &h, &EvolutionConfig::new(t1 + t2)).unwrap();
        let gap = (0..dim)
            .map(|k| (twice.amplitude(k) - direct.amplitude(k)).norm())
            .fold(0.0f64, f64::max);
        if gap > 1e-9 {
            failures.push(format!("case {case}: group-property gap {gap:e}"));
        }
    }

    // Tensor-product probabilities factor (1e-10): 100 randomized cases.
    for case in 0..100 {
        let da = 2 + sampler.index(3);
        let db = 2 + sampler.index(3);
        let sa = random_state(da, &mut sampler).unwrap();
        let sb = random_state(db, &mut sampler).unwrap();
        let oa = random_observable(da, &mut sampler).unwrap();
        let ob = random_observable(db, &mut sampler).unwrap();
        let joint_state = tensor_state(&sa, &sb).unwrap();
        for la in oa.spectrum() {
            for lb in ob.spectrum() {
                let joint = born_probability(
                    &joint_state,
                    &tensor_op(&la.projector, &lb.projector).unwrap(),
                )
                .unwrap();
                let product = born_probability(&sa, &la.projector).unwrap()
                    * born_probability(&sb, &lb.projector).unwrap();
                if (joint - product).abs() > 1e-10 {
                    failures.push(format!(
                        "case {case}: joint {joint} vs product {product}"
                    ));
                }
            }
        }
    }
    report(8, "formalism invariants", failures);
}
