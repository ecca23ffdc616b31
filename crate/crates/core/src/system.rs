//! Domain types shared by every other module: energy spectra, probability
//! vectors, occupation macrostates and the validated system description.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum deviation of `Σ p_i` from one accepted by [`ProbabilityVector::new`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Maximum deviation of `Σ p_i` from one that [`validate_spec`] will repair
/// by renormalizing.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-9;

/// Ordered list of level energies. Unsorted and degenerate spectra are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    levels: Vec<f64>,
}

impl EnergySpectrum {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::ZeroLevels);
        }
        if let Some((index, &value)) = levels.iter().enumerate().find(|(_, e)| !e.is_finite()) {
            return Err(Error::NonFiniteEnergy { index, value });
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Returns the spectrum with `shift` added to every level.
    pub fn shifted(&self, shift: f64) -> Result<Self> {
        Self::new(self.levels.iter().map(|e| e + shift).collect())
    }
}

/// Normalized, nonnegative distribution over `n` levels.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    entries: Vec<f64>,
}

impl ProbabilityVector {
    /// Accepts `entries` only if every entry is finite and nonnegative and the
    /// sum is within [`NORMALIZATION_TOLERANCE`] of one.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        check_entries(&entries)?;
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { entries })
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        check_entries(weights)?;
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::NotNormalized { sum });
        }
        Self::new(weights.iter().map(|w| w / sum).collect())
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when every entry equals `1/n` within `tol`.
    pub fn is_uniform(&self, tol: f64) -> bool {
        let u = 1.0 / self.entries.len() as f64;
        self.entries.iter().all(|p| (p - u).abs() <= tol)
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &ProbabilityVector) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_entries(entries: &[f64]) -> Result<()> {
    if entries.is_empty() {
        return Err(Error::ZeroLevels);
    }
    for (index, &value) in entries.iter().enumerate() {
        if value.is_nan() {
            return Err(Error::NanPrior { index });
        }
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::NegativePrior { index, value });
        }
    }
    Ok(())
}

/// `[1/n; n]`, the equal-ignorance prior.
pub fn uniform_prior(n: usize) -> Result<ProbabilityVector> {
    if n == 0 {
        return Err(Error::ZeroLevels);
    }
    Ok(ProbabilityVector {
        entries: vec![1.0 / n as f64; n],
    })
}

/// Occupation numbers `[N_1, ..., N_n]` of a system of `N = Σ N_i` particles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Macrostate {
    occupations: Vec<u64>,
    total: u64,
}

impl Macrostate {
    pub fn new(occupations: Vec<u64>) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::ZeroLevels);
        }
        let total = occupations.iter().sum();
        Ok(Self { occupations, total })
    }

    /// Like [`Macrostate::new`] but also checks the declared particle count.
    pub fn with_total(occupations: Vec<u64>, total: u64) -> Result<Self> {
        let m = Self::new(occupations)?;
        if m.total != total {
            return Err(Error::OccupationSumMismatch {
                expected: total,
                actual: m.total,
            });
        }
        Ok(m)
    }

    pub fn occupations(&self) -> &[u64] {
        &self.occupations
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn levels(&self) -> usize {
        self.occupations.len()
    }

    /// Empirical frequencies `N_i / N`. All zeros for an empty system.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.total as f64;
        self.occupations
            .iter()
            .map(|&c| if self.total == 0 { 0.0 } else { c as f64 / n })
            .collect()
    }

    /// Integer macrostate closest to `total · p`, by largest-remainder
    /// apportionment with ties going to the lowest index.
    pub fn apportion(p: &ProbabilityVector, total: u64) -> Self {
        let targets: Vec<f64> = p.entries().iter().map(|q| q * total as f64).collect();
        let mut occupations: Vec<u64> = targets.iter().map(|t| t.floor() as u64).collect();
        let assigned: u64 = occupations.iter().sum();
        let mut remaining = total.saturating_sub(assigned);
        let mut order: Vec<usize> = (0..targets.len()).collect();
        // Stable sort keeps lower indices first among equal remainders.
        order.sort_by(|&a, &b| {
            let ra = targets[a] - targets[a].floor();
            let rb = targets[b] - targets[b].floor();
            rb.partial_cmp(&ra).unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut idx = 0;
        while remaining > 0 {
            occupations[order[idx % order.len()]] += 1;
            remaining -= 1;
            idx += 1;
        }
        // Floor rounding of very large products can overshoot by an ulp.
        let mut excess = occupations.iter().sum::<u64>().saturating_sub(total);
        for c in occupations.iter_mut().rev() {
            let take = excess.min(*c);
            *c -= take;
            excess -= take;
        }
        Self { occupations, total }
    }
}

/// On-disk system description, exactly as it appears in a spec file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    pub levels: Vec<f64>,
    pub priors: Vec<f64>,
    #[serde(rename = "N")]
    pub particles: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

/// A validated problem statement: spectrum, prior, particle count and `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub spectrum: EnergySpectrum,
    pub prior: ProbabilityVector,
    pub particles: u64,
    pub boltzmann_k: f64,
}

impl SystemSpec {
    /// Parses and validates a JSON spec document.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        validate_spec(&raw)
    }

    /// Same as [`SystemSpec::from_json`] for raw bytes.
    pub fn from_json_bytes(bytes: &[u8]) -> Result<Self> {
        let raw: RawSpec =
            serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
        validate_spec(&raw)
    }

    pub fn to_raw(&self) -> RawSpec {
        RawSpec {
            levels: self.spectrum.levels().to_vec(),
            priors: self.prior.entries().to_vec(),
            particles: self.particles as i64,
            k: Some(self.boltzmann_k),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("spec serialization is infallible")
    }

    pub fn levels(&self) -> usize {
        self.spectrum.len()
    }
}

/// Validates a raw description. Priors within [`RENORMALIZE_TOLERANCE`] of
/// unit mass are renormalized; anything further off is rejected.
pub fn validate_spec(raw: &RawSpec) -> Result<SystemSpec> {
    let spectrum = EnergySpectrum::new(raw.levels.clone())?;
    if raw.priors.len() != spectrum.len() {
        return Err(Error::LengthMismatch {
            levels: spectrum.len(),
            priors: raw.priors.len(),
        });
    }
    check_entries(&raw.priors)?;
    let sum: f64 = raw.priors.iter().sum();
    let prior = if (sum - 1.0).abs() <= NORMALIZATION_TOLERANCE {
        ProbabilityVector::new(raw.priors.clone())?
    } else if (sum - 1.0).abs() <= RENORMALIZE_TOLERANCE {
        ProbabilityVector::from_weights(&raw.priors)?
    } else {
        return Err(Error::NotNormalized { sum });
    };
    if raw.particles < 1 {
        return Err(Error::NonPositiveN(raw.particles));
    }
    let boltzmann_k = raw.k.unwrap_or(1.0);
    if !(boltzmann_k > 0.0 && boltzmann_k.is_finite()) {
        return Err(Error::NonPositiveK(boltzmann_k));
    }
    Ok(SystemSpec {
        spectrum,
        prior,
        particles: raw.particles as u64,
        boltzmann_k,
    })
}
