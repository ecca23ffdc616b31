//! Boltzmann and prior-weighted Boltzmann distributions, inverse-temperature
//! solving from a mean-energy constraint, and the closed-form equilibrium
//! entropies.
//!
//! The prior-weighted distribution is `p_i = p0_i e^{-βE_i} / Z_w` with
//! `Z_w = Σ_j p0_j e^{-βE_j}`, the only normalizer that makes it a probability
//! vector for a non-uniform prior. [`equilibrium_entropy_uniform`] and
//! [`equilibrium_entropy_prior`] instead keep the plain sum `Z = Σ_j e^{-βE_j}`
//! inside their logarithms, so they reproduce the classical closed forms
//! term for term; [`gibbs_entropy`] gives the entropy of the actual
//! distribution for comparison.

use serde::Serialize;

use crate::entropy::xlogx;
use crate::error::{Error, Result};
use crate::system::{EnergySpectrum, ProbabilityVector};

/// Slack used when testing the entropy inequality.
pub const INEQUALITY_TOLERANCE: f64 = 1e-12;

const MAX_BISECTIONS: usize = 2200;
const MAX_BRACKET: f64 = 1e300;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumSolution {
    pub beta: f64,
    /// `ln Z` of the normalizer actually used (`Z` or `Z_w`).
    pub log_partition: f64,
    #[serde(serialize_with = "serialize_pv")]
    pub distribution: ProbabilityVector,
    /// `Σ p_i E_i`.
    pub mean_energy: f64,
    /// `-Σ p_i ln p_i`, in units of k.
    pub entropy_per_particle: f64,
}

fn serialize_pv<S: serde::Serializer>(
    pv: &ProbabilityVector,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(pv.entries())
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteBeta(beta))
    }
}

/// Max-shifted softmax of log-weights; `None` entries are excluded (zero mass).
fn softmax(
    spectrum: &EnergySpectrum,
    log_weights: &[Option<f64>],
    beta: f64,
) -> Result<EquilibriumSolution> {
    let exponents: Vec<Option<f64>> = log_weights
        .iter()
        .zip(spectrum.levels())
        .map(|(w, &e)| w.map(|lw| lw - beta * e))
        .collect();
    let shift = exponents
        .iter()
        .flatten()
        .copied()
        .filter(|x| x.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return Err(Error::DegeneratePrior);
    }
    let scaled: Vec<f64> = exponents
        .iter()
        .map(|x| x.map_or(0.0, |v| (v - shift).exp()))
        .collect();
    let sum: f64 = scaled.iter().sum();
    let entries: Vec<f64> = scaled.iter().map(|x| x / sum).collect();
    let mean_energy = entries
        .iter()
        .zip(spectrum.levels())
        .map(|(p, e)| p * e)
        .sum();
    let entropy_per_particle = -entries.iter().map(|&p| xlogx(p)).sum::<f64>();
    Ok(EquilibriumSolution {
        beta,
        log_partition: shift + sum.ln(),
        distribution: ProbabilityVector::new(entries)?,
        mean_energy,
        entropy_per_particle,
    })
}

/// `p_i = e^{-βE_i} / Z`, `Z = Σ e^{-βE_i}`.
pub fn boltzmann_distribution(spectrum: &EnergySpectrum, beta: f64) -> Result<EquilibriumSolution> {
    check_beta(beta)?;
    softmax(spectrum, &vec![Some(0.0); spectrum.len()], beta)
}

/// `p_i = p0_i e^{-βE_i} / Z_w`; levels with zero prior get zero probability.
pub fn generalized_distribution(
    spectrum: &EnergySpectrum,
    prior: &ProbabilityVector,
    beta: f64,
) -> Result<EquilibriumSolution> {
    check_beta(beta)?;
    if prior.len() != spectrum.len() {
        return Err(Error::LengthMismatch {
            levels: spectrum.len(),
            priors: prior.len(),
        });
    }
    let log_weights: Vec<Option<f64>> = prior
        .entries()
        .iter()
        .map(|&p| (p > 0.0).then(|| p.ln()))
        .collect();
    softmax(spectrum, &log_weights, beta)
}

/// Smallest and largest energy among levels with positive prior mass.
fn supported_range(spectrum: &EnergySpectrum, prior: &ProbabilityVector) -> (f64, f64) {
    spectrum
        .levels()
        .iter()
        .zip(prior.entries())
        .filter(|(_, &p)| p > 0.0)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (&e, _)| {
            (lo.min(e), hi.max(e))
        })
}

/// Finds the β whose prior-weighted distribution has mean energy `target`.
///
/// `β ↦ ⟨E⟩(β)` is strictly decreasing when the supported levels are not all
/// degenerate, so a bracket grown geometrically from `[-1, 1]` followed by
/// bisection down to floating-point resolution finds the unique root.
/// Negative β (population inversion) is returned for targets above the
/// prior mean.
pub fn solve_beta(
    spectrum: &EnergySpectrum,
    prior: &ProbabilityVector,
    target: f64,
) -> Result<EquilibriumSolution> {
    if prior.len() != spectrum.len() {
        return Err(Error::LengthMismatch {
            levels: spectrum.len(),
            priors: prior.len(),
        });
    }
    let (min, max) = supported_range(spectrum, prior);
    if min == max {
        if (target - min).abs() <= 1e-12 * min.abs().max(1.0) {
            return generalized_distribution(spectrum, prior, 0.0);
        }
        return Err(Error::NoVariation {
            energy: min,
            target,
        });
    }
    if !(target > min && target < max) {
        return Err(Error::TargetOutOfRange { target, min, max });
    }

    let excess = |beta: f64| -> Result<f64> {
        Ok(generalized_distribution(spectrum, prior, beta)?.mean_energy - target)
    };

    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while excess(hi)? > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > MAX_BRACKET {
            return Err(Error::BracketFailure);
        }
    }
    while excess(lo)? < 0.0 {
        hi = lo;
        lo *= 2.0;
        if lo < -MAX_BRACKET {
            return Err(Error::BracketFailure);
        }
    }

    for _ in 0..MAX_BISECTIONS {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = excess(mid)?;
        if f == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let at_lo = generalized_distribution(spectrum, prior, lo)?;
    if lo == hi {
        return Ok(at_lo);
    }
    let at_hi = generalized_distribution(spectrum, prior, hi)?;
    if (at_lo.mean_energy - target).abs() <= (at_hi.mean_energy - target).abs() {
        Ok(at_lo)
    } else {
        Ok(at_hi)
    }
}

/// Equilibrium entropy for equal priors in its classical closed form,
/// `kN [ln n + β⟨E⟩ + ln Z]`, with ⟨E⟩ and `Z = Σ e^{-βE_i}` from the plain
/// Boltzmann distribution. Exceeds [`gibbs_entropy`] of that distribution by
/// exactly `kN ln n`.
pub fn equilibrium_entropy_uniform(
    spectrum: &EnergySpectrum,
    beta: f64,
    particles: u64,
    k: f64,
) -> Result<f64> {
    let sol = boltzmann_distribution(spectrum, beta)?;
    let n = spectrum.len() as f64;
    Ok(k * particles as f64 * (n.ln() + beta * sol.mean_energy + sol.log_partition))
}

/// Equilibrium entropy with unequal priors in its classical closed form,
/// `-Nk Σ p0_i ln p0_i + Nk (β⟨E⟩ + ln Z)`. ⟨E⟩ is the mean energy of the
/// prior-weighted distribution; `Z` is the plain sum `Σ e^{-βE_i}`, so a
/// uniform prior gives back [`equilibrium_entropy_uniform`].
pub fn equilibrium_entropy_prior(
    spectrum: &EnergySpectrum,
    prior: &ProbabilityVector,
    beta: f64,
    particles: u64,
    k: f64,
) -> Result<f64> {
    if let Some(index) = prior.entries().iter().position(|&p| p == 0.0) {
        return Err(Error::ZeroPriorEntry { index });
    }
    let weighted = generalized_distribution(spectrum, prior, beta)?;
    let plain = boltzmann_distribution(spectrum, beta)?;
    let prior_entropy = -prior.entries().iter().map(|&p| xlogx(p)).sum::<f64>();
    Ok(k * particles as f64 * (prior_entropy + beta * weighted.mean_energy + plain.log_partition))
}

/// `-kN Σ p_i ln p_i` of an arbitrary distribution.
pub fn gibbs_entropy(distribution: &ProbabilityVector, particles: u64, k: f64) -> f64 {
    -k * particles as f64
        * distribution
            .entries()
            .iter()
            .map(|&p| xlogx(p))
            .sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyInequality {
    pub s_uniform: f64,
    pub s_prior: f64,
    pub holds: bool,
}

/// Compares the equal-prior and unequal-prior equilibrium entropies at the
/// same β, N and k. Both are evaluated with one shared `β⟨E⟩ + ln Z` term
/// (that of the plain Boltzmann distribution), so the comparison reduces to
/// `ln n ≥ -Σ p0_i ln p0_i`.
pub fn entropy_inequality_check(
    spectrum: &EnergySpectrum,
    prior: &ProbabilityVector,
    beta: f64,
    particles: u64,
    k: f64,
) -> Result<EntropyInequality> {
    if prior.len() != spectrum.len() {
        return Err(Error::LengthMismatch {
            levels: spectrum.len(),
            priors: prior.len(),
        });
    }
    if let Some(index) = prior.entries().iter().position(|&p| p == 0.0) {
        return Err(Error::ZeroPriorEntry { index });
    }
    let plain = boltzmann_distribution(spectrum, beta)?;
    let shared = beta * plain.mean_energy + plain.log_partition;
    let scale = k * particles as f64;
    let n = spectrum.len() as f64;
    let prior_entropy = -prior.entries().iter().map(|&p| xlogx(p)).sum::<f64>();
    let s_uniform = scale * (n.ln() + shared);
    let s_prior = scale * (prior_entropy + shared);
    Ok(EntropyInequality {
        s_uniform,
        s_prior,
        holds: s_uniform >= s_prior - INEQUALITY_TOLERANCE,
    })
}
