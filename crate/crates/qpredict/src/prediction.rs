//! Probability as predicted relative frequency.
//!
//! The binomial table is computed in exact rational arithmetic so its values
//! are hard (non-statistical) facts; sampling then shows that observed
//! relative frequencies scatter around the predictions without ever being
//! identical to them.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::hilbert::{born_probability, Observable, StateVector};
use crate::rng::{Sampler, RNG_ALGORITHM};

/// Exact probability of seeing `n` successes in `trials` independent draws
/// with success probability `p`. Binomial coefficient and powers are exact
/// rationals; no floating-point cancellation.
pub fn binomial_pmf_exact(n: u64, trials: u64, p: &BigRational) -> Result<BigRational> {
    if n > trials {
        return Err(Error::InvalidArgument {
            reason: format!("n = {n} out of range for {trials} trials"),
        });
    }
    if p.is_negative() || p > &BigRational::one() {
        return Err(Error::InvalidArgument {
            reason: format!("success probability {p} outside [0, 1]"),
        });
    }
    let coeff = BigRational::from_integer(binomial(BigInt::from(trials), BigInt::from(n)));
    let q = BigRational::one() - p;
    Ok(coeff * pow_rational(p, n) * pow_rational(&q, trials - n))
}

/// [`binomial_pmf_exact`] converted to `f64` at the last step.
pub fn binomial_pmf(n: u64, trials: u64, p: &BigRational) -> Result<f64> {
    Ok(binomial_pmf_exact(n, trials, p)?
        .to_f64()
        .expect("rational in [0,1] converts to f64"))
}

fn pow_rational(base: &BigRational, exp: u64) -> BigRational {
    // BigRational::pow takes i32; stay exact for any u64 exponent.
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Convenience: the rational `num/den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Probabilities for every possible result of one measurement, labelled by
/// eigenvalue, in strictly increasing label order.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    outcomes: Vec<(f64, f64)>,
}

impl OutcomeDistribution {
    /// Validates ordering, non-negativity, and normalization (1e-9).
    pub fn new(outcomes: Vec<(f64, f64)>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::InvalidDistribution {
                reason: "no outcomes".into(),
            });
        }
        for pair in outcomes.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::InvalidDistribution {
                    reason: "labels must be strictly increasing".into(),
                });
            }
        }
        let mut total = 0.0;
        for &(label, p) in &outcomes {
            if p.is_nan() || p < 0.0 {
                return Err(Error::InvalidDistribution {
                    reason: format!("negative probability {p} at label {label}"),
                });
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution {
                reason: format!("probabilities sum to {total}, not 1"),
            });
        }
        Ok(Self { outcomes })
    }

    /// Uniform distribution over `0, 1, …, n-1`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution {
                reason: "no outcomes".into(),
            });
        }
        let p = 1.0 / n as f64;
        Self::new((0..n).map(|k| (k as f64, p)).collect())
    }

    /// `(label, probability)` pairs in canonical (ascending label) order.
    pub fn outcomes(&self) -> &[(f64, f64)] {
        &self.outcomes
    }

    pub fn labels(&self) -> Vec<f64> {
        self.outcomes.iter().map(|&(l, _)| l).collect()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.outcomes.iter().map(|&(_, p)| p).collect()
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Probability attached to `label`, zero for unknown labels.
    pub fn probability_of(&self, label: f64) -> f64 {
        self.outcomes
            .iter()
            .find(|&&(l, _)| l == label)
            .map_or(0.0, |&(_, p)| p)
    }
}

/// Outcome distribution of measuring `obs` in `state`: one entry per
/// spectral eigenvalue with its Born probability.
pub fn state_distribution(state: &StateVector, obs: &Observable) -> Result<OutcomeDistribution> {
    if state.dim() != obs.dim() {
        return Err(Error::DimensionMismatch {
            expected: obs.dim(),
            got: state.dim(),
        });
    }
    let outcomes = obs
        .spectrum()
        .iter()
        .map(|line| Ok((line.eigenvalue, born_probability(state, &line.projector)?)))
        .collect::<Result<Vec<_>>>()?;
    OutcomeDistribution::new(outcomes)
}

/// Observed counts from a finite series of measurements, together with the
/// seed and generator that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyRecord {
    trials: u64,
    labels: Vec<f64>,
    counts: Vec<u64>,
    seed: u64,
    rng_algorithm: &'static str,
}

impl FrequencyRecord {
    /// Assembles a record from counts gathered elsewhere (post-selection,
    /// trial-log aggregation). The seed is the one that produced the
    /// underlying samples.
    pub(crate) fn from_parts(trials: u64, labels: Vec<f64>, counts: Vec<u64>, seed: u64) -> Self {
        debug_assert_eq!(labels.len(), counts.len());
        debug_assert_eq!(counts.iter().sum::<u64>(), trials);
        Self {
            trials,
            labels,
            counts,
            seed,
            rng_algorithm: RNG_ALGORITHM,
        }
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    /// Labels in canonical order, parallel to [`Self::counts`].
    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count_of(&self, label: f64) -> u64 {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map_or(0, |k| self.counts[k])
    }

    /// Relative frequency of `label` among the trials.
    pub fn frequency_of(&self, label: f64) -> f64 {
        self.count_of(label) as f64 / self.trials as f64
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Identifier of the generator that produced the record.
    pub fn rng_algorithm(&self) -> &'static str {
        self.rng_algorithm
    }
}

/// Draws `trials` i.i.d. outcomes from `dist` by inverse-CDF over the
/// canonical label order; deterministic given `seed`.
pub fn sample_frequencies(
    dist: &OutcomeDistribution,
    trials: u64,
    seed: u64,
) -> Result<FrequencyRecord> {
    if trials == 0 {
        return Err(Error::InvalidArgument {
            reason: "trials must be at least 1".into(),
        });
    }
    let probabilities = dist.probabilities();
    let mut sampler = Sampler::new(seed);
    let mut counts = vec![0u64; dist.len()];
    for _ in 0..trials {
        counts[sampler.categorical(&probabilities)] += 1;
    }
    Ok(FrequencyRecord {
        trials,
        labels: dist.labels(),
        counts,
        seed,
        rng_algorithm: RNG_ALGORITHM,
    })
}

/// Joint distribution of two independently prepared systems. Kept in
/// factored form: `p(x, y) = p_a(x) · p_b(y)` by construction, so marginals
/// recover the inputs bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductDistribution {
    left: OutcomeDistribution,
    right: OutcomeDistribution,
}

impl ProductDistribution {
    /// Joint probability of the pair `(left index i, right index j)`.
    pub fn probability(&self, i: usize, j: usize) -> f64 {
        self.left.outcomes()[i].1 * self.right.outcomes()[j].1
    }

    /// All `((label_a, label_b), probability)` pairs, left-major order.
    pub fn pairs(&self) -> Vec<((f64, f64), f64)> {
        let mut out = Vec::with_capacity(self.left.len() * self.right.len());
        for &(la, pa) in self.left.outcomes() {
            for &(lb, pb) in self.right.outcomes() {
                out.push(((la, lb), pa * pb));
            }
        }
        out
    }

    pub fn marginal_left(&self) -> &OutcomeDistribution {
        &self.left
    }

    pub fn marginal_right(&self) -> &OutcomeDistribution {
        &self.right
    }
}

/// Composes two independent systems: the probability of a joint result is
/// the product of the two probabilities involved.
pub fn independent_product(
    a: &OutcomeDistribution,
    b: &OutcomeDistribution,
) -> ProductDistribution {
    ProductDistribution {
        left: a.clone(),
        right: b.clone(),
    }
}
