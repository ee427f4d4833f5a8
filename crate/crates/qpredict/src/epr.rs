//! The Bohm spin-½ EPR experiment.
//!
//! Two spin-½ particles fly apart in the singlet state; Alice and Bob each
//! pick a measurement direction per trial. The joint statistics show
//! perfect anticorrelation at equal settings and violate the CHSH bound,
//! yet each wing's marginal stays at 50/50 no matter what the other wing
//! does. Conditioning Bob's records on Alice's results — plain bookkeeping
//! after the fact — reconstructs exactly the collapsed-state predictions.
//!
//! Outcome labels are ±1 throughout; "up" along the measurement axis is +1.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{
    born_probability, spectral_decompose, tensor_op, ComplexMatrix, Observable, StateVector,
};
use crate::measurement::{collapse, partial_trace, DensityOperator, Factor};
use crate::prediction::{FrequencyRecord, OutcomeDistribution};
use crate::rng::{Sampler, RNG_ALGORITHM};

/// A measurement axis on the Bloch sphere: polar angle `θ ∈ [0, π]` from
/// +z and azimuth `φ ∈ [0, 2π)`. Planar directions (`φ ∈ {0, π}`) suffice
/// for every angle-difference claim.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidArgument {
                reason: format!("polar angle {theta} outside [0, π]"),
            });
        }
        if !phi.is_finite() || !(0.0..TAU).contains(&phi) {
            return Err(Error::InvalidArgument {
                reason: format!("azimuth {phi} outside [0, 2π)"),
            });
        }
        Ok(Self { theta, phi })
    }

    /// Direction in the x-z plane at `theta` from +z (`φ = 0`).
    pub fn polar(theta: f64) -> Result<Self> {
        Self::new(theta, 0.0)
    }

    /// Any signed planar angle, folded into a valid direction: angles past π
    /// wrap around through `φ = π`.
    pub fn planar(angle: f64) -> Self {
        let a = angle.rem_euclid(TAU);
        if a <= PI {
            Self { theta: a, phi: 0.0 }
        } else {
            Self {
                theta: TAU - a,
                phi: PI,
            }
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Cartesian unit vector (x, y, z).
    pub fn unit_vector(&self) -> [f64; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }

    /// Angle between two axes, in `[0, π]`.
    pub fn angle_between(&self, other: &Self) -> f64 {
        let a = self.unit_vector();
        let b = other.unit_vector();
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        dot.clamp(-1.0, 1.0).acos()
    }
}

/// The total-spin-zero state of two spin-½ systems:
/// `(1/√2)(|01⟩ - |10⟩)` on the dim-4 compound space.
pub fn singlet() -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(vec![
        Complex64::ZERO,
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::ZERO,
    ])
    .expect("singlet is unit norm")
}

/// The spin component along `d`: the operator `n·σ` with eigenvalues ±1 and
/// eigenprojectors `½(I ± n·σ)`.
pub fn spin_observable(d: &Direction) -> Result<Observable> {
    let [x, y, z] = d.unit_vector();
    let m = ComplexMatrix::from_rows(&[
        vec![Complex64::new(z, 0.0), Complex64::new(x, -y)],
        vec![Complex64::new(x, y), Complex64::new(-z, 0.0)],
    ])?;
    spectral_decompose(&m)
}

fn outcome_index(outcome: i8) -> Result<usize> {
    match outcome {
        -1 => Ok(0),
        1 => Ok(1),
        _ => Err(Error::InvalidArgument {
            reason: format!("outcome {outcome} must be -1 or +1"),
        }),
    }
}

/// Eigenprojector of `n·σ` for the given ±1 outcome.
pub fn spin_projector(d: &Direction, outcome: i8) -> Result<ComplexMatrix> {
    let obs = spin_observable(d)?;
    Ok(obs.spectrum()[outcome_index(outcome)?].projector.clone())
}

/// Joint outcome probabilities for one pair of settings, indexed by
/// (alice, bob) outcomes in `{-1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSpinDistribution {
    // probs[i][j]: i = Alice outcome index (0 ↦ -1, 1 ↦ +1), j = Bob's.
    probs: [[f64; 2]; 2],
}

impl JointSpinDistribution {
    pub fn probability(&self, alice: i8, bob: i8) -> Result<f64> {
        Ok(self.probs[outcome_index(alice)?][outcome_index(bob)?])
    }

    /// Probabilities in canonical pair order:
    /// `(-1,-1), (-1,+1), (+1,-1), (+1,+1)`.
    pub fn canonical_probs(&self) -> [f64; 4] {
        [
            self.probs[0][0],
            self.probs[0][1],
            self.probs[1][0],
            self.probs[1][1],
        ]
    }

    /// Alice's marginal `(p(-1), p(+1))`.
    pub fn alice_marginal(&self) -> (f64, f64) {
        (
            self.probs[0][0] + self.probs[0][1],
            self.probs[1][0] + self.probs[1][1],
        )
    }

    /// Bob's marginal `(p(-1), p(+1))`.
    pub fn bob_marginal(&self) -> (f64, f64) {
        (
            self.probs[0][0] + self.probs[1][0],
            self.probs[0][1] + self.probs[1][1],
        )
    }

    /// The correlation `E = Σ αβ·p(α, β)`.
    pub fn correlation(&self) -> f64 {
        self.probs[0][0] - self.probs[0][1] - self.probs[1][0] + self.probs[1][1]
    }
}

/// Born-rule joint distribution of the singlet under settings `a` (Alice)
/// and `b` (Bob): `p(α, β) = ⟨ψ|(P_α ⊗ P_β)|ψ⟩`.
pub fn joint_distribution(a: &Direction, b: &Direction) -> Result<JointSpinDistribution> {
    let psi = singlet();
    let obs_a = spin_observable(a)?;
    let obs_b = spin_observable(b)?;
    let mut probs = [[0.0; 2]; 2];
    let mut total = 0.0;
    for (i, line_a) in obs_a.spectrum().iter().enumerate() {
        for (j, line_b) in obs_b.spectrum().iter().enumerate() {
            let p = born_probability(&psi, &tensor_op(&line_a.projector, &line_b.projector)?)?;
            probs[i][j] = p;
            total += p;
        }
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvariantViolation {
            reason: format!("joint probabilities sum to {total}"),
        });
    }
    Ok(JointSpinDistribution { probs })
}

/// The singlet correlation `E(a, b)`; equals `-cos∠(a, b)`.
pub fn correlation(a: &Direction, b: &Direction) -> Result<f64> {
    Ok(joint_distribution(a, b)?.correlation())
}

/// CHSH combination `S = E(a,b) - E(a,b') + E(a',b) + E(a',b')`.
pub fn chsh(a: &Direction, a2: &Direction, b: &Direction, b2: &Direction) -> Result<f64> {
    Ok(correlation(a, b)? - correlation(a, b2)? + correlation(a2, b)? + correlation(a2, b2)?)
}

/// Largest |S| any deterministic local strategy reaches in the 2-setting
/// CHSH scenario, by brute force over all 16 assignments
/// `(A(a), A(a'), B(b), B(b')) ∈ {±1}⁴`. Exactly 2.
pub fn lhv_max_chsh() -> f64 {
    let mut best = 0i32;
    for a in [-1i32, 1] {
        for a2 in [-1i32, 1] {
            for b in [-1i32, 1] {
                for b2 in [-1i32, 1] {
                    best = best.max((a * b - a * b2 + a2 * b + a2 * b2).abs());
                }
            }
        }
    }
    best as f64
}

/// One recorded coincidence: both settings and both ±1 outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trial {
    pub alice_dir: Direction,
    pub alice_out: i8,
    pub bob_dir: Direction,
    pub bob_out: i8,
}

/// The bookkeeping substrate: every trial of an experiment run, with the
/// seed and generator that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialLog {
    trials: Vec<Trial>,
    seed: u64,
    rng_algorithm: &'static str,
}

impl TrialLog {
    pub fn trials(&self) -> &[Trial] {
        &self.trials
    }

    pub fn len(&self) -> usize {
        self.trials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trials.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng_algorithm(&self) -> &'static str {
        self.rng_algorithm
    }

    /// Empirical `E(a, b)` over the trials recorded with exactly these
    /// settings (bitwise angle equality; settings come from the run lists).
    pub fn empirical_correlation(&self, a: &Direction, b: &Direction) -> Result<f64> {
        let mut sum = 0i64;
        let mut n = 0u64;
        for t in &self.trials {
            if t.alice_dir == *a && t.bob_dir == *b {
                sum += (t.alice_out as i64) * (t.bob_out as i64);
                n += 1;
            }
        }
        if n == 0 {
            return Err(Error::EmptySelection);
        }
        Ok(sum as f64 / n as f64)
    }

    /// Serializes to CSV: mandatory header, one row per trial, angles with
    /// 12 significant digits, and a footer comment recording seed and
    /// generator.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for (idx, t) in self.trials.iter().enumerate() {
            out.push_str(&format!(
                "{idx},{:.11e},{:.11e},{},{:.11e},{:.11e},{}\n",
                t.alice_dir.theta(),
                t.alice_dir.phi(),
                t.alice_out,
                t.bob_dir.theta(),
                t.bob_dir.phi(),
                t.bob_out,
            ));
        }
        out.push_str(&format!("# seed={} rng={}\n", self.seed, self.rng_algorithm));
        out
    }

    /// Parses the CSV form written by [`Self::to_csv`]. Angles survive with
    /// 12 significant digits, so reparsed directions may differ from the
    /// originals in the last bits; rows from the same setting stay
    /// bitwise-identical to each other.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => {
                return Err(Error::InvalidArgument {
                    reason: format!("bad or missing CSV header: {other:?}"),
                })
            }
        }
        let mut trials = Vec::new();
        let mut seed = None;
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                for token in comment.split_whitespace() {
                    if let Some(s) = token.strip_prefix("seed=") {
                        seed = Some(s.parse::<u64>().map_err(|e| Error::InvalidArgument {
                            reason: format!("bad seed in footer: {e}"),
                        })?);
                    } else if let Some(rng) = token.strip_prefix("rng=") {
                        if rng != RNG_ALGORITHM {
                            return Err(Error::InvalidArgument {
                                reason: format!("unknown generator {rng}"),
                            });
                        }
                    }
                }
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(Error::InvalidArgument {
                    reason: format!("expected 7 CSV fields, got {}", fields.len()),
                });
            }
            let angle = |s: &str| -> Result<f64> {
                s.parse::<f64>().map_err(|e| Error::InvalidArgument {
                    reason: format!("bad angle {s}: {e}"),
                })
            };
            let out = |s: &str| -> Result<i8> {
                let v = s.parse::<i8>().map_err(|e| Error::InvalidArgument {
                    reason: format!("bad outcome {s}: {e}"),
                })?;
                outcome_index(v)?;
                Ok(v)
            };
            trials.push(Trial {
                alice_dir: Direction::new(angle(fields[1])?, angle(fields[2])?)?,
                alice_out: out(fields[3])?,
                bob_dir: Direction::new(angle(fields[4])?, angle(fields[5])?)?,
                bob_out: out(fields[6])?,
            });
        }
        let seed = seed.ok_or_else(|| Error::InvalidArgument {
            reason: "missing footer comment with seed".into(),
        })?;
        Ok(Self {
            trials,
            seed,
            rng_algorithm: RNG_ALGORITHM,
        })
    }
}

const CSV_HEADER: &str = "trial_index,alice_theta,alice_phi,alice_out,bob_theta,bob_phi,bob_out";

/// Runs `n` singlet trials. Each wing's setting is drawn independently and
/// uniformly from its list (a length-1 list models a fixed apparatus), then
/// the outcome pair is drawn from the Born joint distribution by
/// inverse-CDF in canonical pair order. Deterministic given `seed`; draw
/// order per trial is Alice's setting, Bob's setting, outcome.
pub fn run_trials(
    a_settings: &[Direction],
    b_settings: &[Direction],
    n: u64,
    seed: u64,
) -> Result<TrialLog> {
    if a_settings.is_empty() || b_settings.is_empty() {
        return Err(Error::InvalidArgument {
            reason: "setting lists must be nonempty".into(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidArgument {
            reason: "trial count must be at least 1".into(),
        });
    }
    // All joints up front; per trial only three draws remain.
    let mut joints = Vec::with_capacity(a_settings.len() * b_settings.len());
    for a in a_settings {
        for b in b_settings {
            joints.push(joint_distribution(a, b)?.canonical_probs());
        }
    }
    const OUTCOME_PAIRS: [(i8, i8); 4] = [(-1, -1), (-1, 1), (1, -1), (1, 1)];
    let mut sampler = Sampler::new(seed);
    let mut trials = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let i = sampler.index(a_settings.len());
        let j = sampler.index(b_settings.len());
        let pair = OUTCOME_PAIRS[sampler.categorical(&joints[i * b_settings.len() + j])];
        trials.push(Trial {
            alice_dir: a_settings[i],
            alice_out: pair.0,
            bob_dir: b_settings[j],
            bob_out: pair.1,
        });
    }
    Ok(TrialLog {
        trials,
        seed,
        rng_algorithm: RNG_ALGORITHM,
    })
}

/// Bob's conditional statistics for one post-selected ensemble, per Bob
/// setting: observed counts next to the collapsed-state prediction.
#[derive(Debug, Clone)]
pub struct ConditionalRecord {
    pub bob_dir: Direction,
    /// Observed conditional frequencies over labels (-1, +1).
    pub observed: FrequencyRecord,
    /// Born prediction from Bob's reduced state after Alice's collapse.
    pub predicted: OutcomeDistribution,
}

/// Result of filtering a trial log by one Alice setting and outcome.
#[derive(Debug, Clone)]
pub struct PostselectionReport {
    pub alice_dir: Direction,
    pub alice_outcome: i8,
    /// One record per Bob setting present in the selection, in order of
    /// first appearance.
    pub conditionals: Vec<ConditionalRecord>,
}

/// The bookkeeping step: keep only trials where Alice measured along
/// `alice_dir` and found `alice_outcome`; group Bob's results by his
/// setting; and put next to each group the distribution Bob would have
/// predicted for the post-measurement state — the singlet collapsed by
/// Alice's projector, reduced to Bob's side.
pub fn postselect(
    log: &TrialLog,
    alice_outcome: i8,
    alice_dir: &Direction,
) -> Result<PostselectionReport> {
    outcome_index(alice_outcome)?;
    let selected: Vec<&Trial> = log
        .trials
        .iter()
        .filter(|t| t.alice_dir == *alice_dir && t.alice_out == alice_outcome)
        .collect();
    if selected.is_empty() {
        return Err(Error::EmptySelection);
    }

    // Bob's state conditioned on Alice's result.
    let projector = spin_projector(alice_dir, alice_outcome)?;
    let identity = ComplexMatrix::identity(2)?;
    let collapsed = collapse(&singlet(), &tensor_op(&projector, &identity)?)?;
    let bob_state = partial_trace(
        &DensityOperator::from_pure(&collapsed),
        2,
        2,
        Factor::Right,
    )?;

    let mut conditionals: Vec<ConditionalRecord> = Vec::new();
    let mut order: Vec<Direction> = Vec::new();
    for t in &selected {
        if !order.contains(&t.bob_dir) {
            order.push(t.bob_dir);
        }
    }
    for bob_dir in order {
        let mut counts = [0u64; 2];
        for t in &selected {
            if t.bob_dir == bob_dir {
                counts[outcome_index(t.bob_out)?] += 1;
            }
        }
        let bob_obs = spin_observable(&bob_dir)?;
        let p_minus = bob_state.probability(&bob_obs.spectrum()[0].projector)?;
        let p_plus = bob_state.probability(&bob_obs.spectrum()[1].projector)?;
        let total = p_minus + p_plus;
        let predicted = OutcomeDistribution::new(vec![
            (-1.0, p_minus / total),
            (1.0, p_plus / total),
        ])?;
        let observed = FrequencyRecord::from_parts(
            counts[0] + counts[1],
            vec![-1.0, 1.0],
            counts.to_vec(),
            log.seed,
        );
        conditionals.push(ConditionalRecord {
            bob_dir,
            observed,
            predicted,
        });
    }
    Ok(PostselectionReport {
        alice_dir: *alice_dir,
        alice_outcome,
        conditionals,
    })
}
