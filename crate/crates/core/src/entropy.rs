//! Entropy and cross-entropy functionals over distributions and occupation
//! vectors, the negentropy relation and the Einstein fluctuation formula.
//!
//! Throughout, `0 · ln 0` is taken as `0`.

use serde::Serialize;

use crate::combinatorics::statistical_weight;
use crate::error::{Error, Result};
use crate::system::{Macrostate, ProbabilityVector};

/// Slack allowed when comparing an entropy against its reference.
pub const REFERENCE_TOLERANCE: f64 = 1e-12;

/// Slack allowed between `Σ N_i` and `Σ N̄_i`.
pub const MEAN_SUM_TOLERANCE: f64 = 1e-9;

/// An entropy together with the Boltzmann constant it was expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyValue {
    pub value: f64,
    pub k_used: f64,
}

impl EntropyValue {
    pub fn new(value: f64, k_used: f64) -> Self {
        Self { value, k_used }
    }
}

/// `x ln x` with the continuous extension at zero.
pub fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `x ln(x / y)` with `0 ln(0/y) = 0`.
fn xlog_ratio(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (x / y).ln()
    }
}

/// `-k Σ p_i ln p_i`.
pub fn shannon_entropy(p: &ProbabilityVector, k: f64) -> EntropyValue {
    let h: f64 = -p.entries().iter().map(|&x| xlogx(x)).sum::<f64>();
    EntropyValue::new(k * h, k)
}

/// `-k Σ N_i ln N_i` on raw occupation numbers.
pub fn boltzmann_shannon_entropy(m: &Macrostate, k: f64) -> EntropyValue {
    let s: f64 = m.occupations().iter().map(|&c| xlogx(c as f64)).sum();
    EntropyValue::new(-k * s, k)
}

/// Stirling form `-k N Σ (N_i/N) ln(N_i/N)`, written as `-k Σ N_i ln(N_i/N)`.
pub fn stirling_entropy(m: &Macrostate, k: f64) -> EntropyValue {
    let n = m.total() as f64;
    let s: f64 = m
        .occupations()
        .iter()
        .map(|&c| xlog_ratio(c as f64, n))
        .sum();
    EntropyValue::new(-k * s, k)
}

/// `k ln W` from the exact statistical weight (via its log-gamma value).
pub fn exact_boltzmann_entropy(m: &Macrostate, k: f64) -> EntropyValue {
    EntropyValue::new(k * statistical_weight(m).log_value, k)
}

/// Relative entropy between a distribution and a reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossEntropy {
    /// `-N k Σ p_i ln(p_i / p0_i)`, never positive.
    pub signed: f64,
    /// `D(p ‖ p0) = Σ p_i ln(p_i / p0_i)`, never negative.
    pub divergence: f64,
}

/// Kullback divergence `D(p ‖ p0)`.
pub fn kl_divergence(p: &ProbabilityVector, p0: &ProbabilityVector) -> Result<f64> {
    if p.len() != p0.len() {
        return Err(Error::LengthMismatch {
            levels: p.len(),
            priors: p0.len(),
        });
    }
    let mut d = 0.0;
    for (index, (&a, &b)) in p.entries().iter().zip(p0.entries()).enumerate() {
        if a > 0.0 && b == 0.0 {
            return Err(Error::SupportViolation { index });
        }
        d += xlog_ratio(a, b);
    }
    Ok(d)
}

pub fn kl_cross_entropy(
    p: &ProbabilityVector,
    p0: &ProbabilityVector,
    k: f64,
    particles: u64,
) -> Result<CrossEntropy> {
    let divergence = kl_divergence(p, p0)?;
    Ok(CrossEntropy {
        signed: -(particles as f64) * k * divergence,
        divergence,
    })
}

fn check_means(m: &Macrostate, mean: &[f64]) -> Result<()> {
    if mean.len() != m.levels() {
        return Err(Error::LengthMismatch {
            levels: m.levels(),
            priors: mean.len(),
        });
    }
    for (index, (&c, &nb)) in m.occupations().iter().zip(mean).enumerate() {
        if !(nb >= 0.0 && nb.is_finite()) {
            return Err(Error::InvalidMean { index, value: nb });
        }
        if c > 0 && nb == 0.0 {
            return Err(Error::SupportViolation { index });
        }
    }
    let mean_sum: f64 = mean.iter().sum();
    if (mean_sum - m.total() as f64).abs() > MEAN_SUM_TOLERANCE {
        return Err(Error::MeanSumMismatch {
            total: m.total(),
            mean_sum,
        });
    }
    Ok(())
}

/// Boltzmann-Shannon cross-entropy `k Σ N_i ln(N_i / N̄_i)` against mean occupations.
pub fn occupation_cross_entropy(m: &Macrostate, mean: &[f64], k: f64) -> Result<f64> {
    check_means(m, mean)?;
    Ok(k * m
        .occupations()
        .iter()
        .zip(mean)
        .map(|(&c, &nb)| xlog_ratio(c as f64, nb))
        .sum::<f64>())
}

/// Stirling-form entropy of a (possibly fractional) occupation vector with
/// `Σ N̄_i = total`.
pub fn stirling_entropy_of_means(mean: &[f64], total: f64, k: f64) -> EntropyValue {
    let s: f64 = mean.iter().map(|&nb| xlog_ratio(nb, total)).sum();
    EntropyValue::new(-k * s, k)
}

/// Both sides of the information/negentropy relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegentropyRelation {
    /// `k Σ N_i ln(N_i / N̄_i)`.
    pub lhs: f64,
    /// `S_equil - S`, both in Stirling form; `S_equil` is taken at the mean vector.
    pub rhs: f64,
}

/// Evaluates both sides separately. They coincide whenever
/// `Σ (N̄_i - N_i) ln N̄_i = 0`, which holds for uniform means and for any
/// state sharing the linear constraints that fix `ln N̄_i` (particle number
/// and, for Boltzmann means, energy).
pub fn negentropy_relation(m: &Macrostate, mean: &[f64], k: f64) -> Result<NegentropyRelation> {
    let lhs = occupation_cross_entropy(m, mean, k)?;
    let s = stirling_entropy(m, k).value;
    let s_equil = stirling_entropy_of_means(mean, m.total() as f64, k).value;
    Ok(NegentropyRelation {
        lhs,
        rhs: s_equil - s,
    })
}

/// `exp((S - S_ref) / k)`: probability of a state whose entropy falls short of
/// the reference by `S_ref - S`.
pub fn einstein_probability(s: EntropyValue, s_ref: EntropyValue) -> Result<f64> {
    if s.k_used != s_ref.k_used {
        return Err(Error::KMismatch(s.k_used, s_ref.k_used));
    }
    if s.value > s_ref.value + REFERENCE_TOLERANCE {
        return Err(Error::ExceedsReference {
            entropy: s.value,
            reference: s_ref.value,
        });
    }
    Ok(((s.value - s_ref.value) / s.k_used).exp().min(1.0))
}
