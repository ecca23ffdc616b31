//! Harmonic-oscillator applications.
//!
//! `Linear1D` has levels `(i - 1/2) hν` with equal priors. `Planar2D` has
//! levels `i hν` whose prior grows linearly with `i` (the degeneracy of the
//! planar oscillator), normalized over the truncation window by
//! `C = L(L+1)/2`. Levels are indexed from `i = 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::system::{EnergySpectrum, ProbabilityVector};

/// Below this value of `βhν`, `1/(e^x - 1)` is replaced by `1/x - 1/2 + x/12`.
pub const SMALL_ARGUMENT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Dimensionality {
    Linear1D,
    Planar2D,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorModel {
    h_nu: f64,
    dimensionality: Dimensionality,
    truncation: usize,
}

impl OscillatorModel {
    pub fn new(h_nu: f64, dimensionality: Dimensionality, truncation: usize) -> Result<Self> {
        if !(h_nu > 0.0 && h_nu.is_finite()) {
            return Err(Error::NonPositiveQuantum(h_nu));
        }
        if truncation == 0 {
            return Err(Error::EmptyTruncation);
        }
        Ok(Self {
            h_nu,
            dimensionality,
            truncation,
        })
    }

    pub fn h_nu(&self) -> f64 {
        self.h_nu
    }

    pub fn dimensionality(&self) -> Dimensionality {
        self.dimensionality
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn with_truncation(&self, truncation: usize) -> Result<Self> {
        Self::new(self.h_nu, self.dimensionality, truncation)
    }

    /// Energy of level `i ≥ 1`.
    pub fn level_energy(&self, i: usize) -> f64 {
        match self.dimensionality {
            Dimensionality::Linear1D => (i as f64 - 0.5) * self.h_nu,
            Dimensionality::Planar2D => i as f64 * self.h_nu,
        }
    }

    /// Unnormalized prior weight of level `i ≥ 1`.
    pub fn level_weight(&self, i: usize) -> f64 {
        match self.dimensionality {
            Dimensionality::Linear1D => 1.0,
            Dimensionality::Planar2D => i as f64,
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveBeta(beta))
    }
}

/// `1 / (e^x - 1)` for `x > 0`.
fn bose_factor(x: f64) -> f64 {
    if x < SMALL_ARGUMENT {
        1.0 / x - 0.5 + x / 12.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// Closed-form mean energy per oscillator of the infinite level set.
pub fn mean_energy_closed(model: &OscillatorModel, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let h = model.h_nu;
    let f = bose_factor(beta * h);
    Ok(match model.dimensionality {
        Dimensionality::Linear1D => h * (0.5 + f),
        Dimensionality::Planar2D => h * (1.0 + 2.0 * f),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesEnergy {
    pub value: f64,
    /// Upper bound on `|value - mean energy of the infinite level set|`.
    pub tail_bound: f64,
    pub levels: usize,
}

/// `Σ_{i>L} i^p x^{i-1}`, bounded by a geometric series whose ratio dominates
/// every term ratio past `L`. Infinite when no such ratio below one exists.
fn geometric_tail(levels: usize, power: i32, x: f64) -> f64 {
    let l = levels as f64;
    let first = (l + 1.0).powi(power) * x.powf(l);
    if first == 0.0 {
        return 0.0;
    }
    let ratio = ((l + 2.0) / (l + 1.0)).powi(power) * x;
    if ratio >= 1.0 {
        f64::INFINITY
    } else {
        first / (1.0 - ratio)
    }
}

/// Mean energy over the first `L` levels, with a rigorous bound on the error
/// against the untruncated sum.
pub fn mean_energy_series(model: &OscillatorModel, beta: f64) -> Result<SeriesEnergy> {
    check_beta(beta)?;
    let x = (-beta * model.h_nu).exp();
    // Boltzmann factors relative to the first level: x^{i-1}.
    let mut factor = 1.0;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 1..=model.truncation {
        let t = model.level_weight(i) * factor;
        num += t * model.level_energy(i);
        den += t;
        factor *= x;
    }
    let value = num / den;
    // Past L, weight·energy ≤ hν i² and weight ≤ i for both models.
    let energy_tail = model.h_nu * geometric_tail(model.truncation, 2, x);
    let mass_tail = geometric_tail(model.truncation, 1, x);
    let tail_bound = (energy_tail + value * mass_tail) / den;
    Ok(SeriesEnergy {
        value,
        tail_bound,
        levels: model.truncation,
    })
}

/// Doubles the truncation, starting from the model's own, until the tail
/// bound drops to `tolerance`; fails once `max_levels` is reached.
pub fn mean_energy_series_to_tolerance(
    model: &OscillatorModel,
    beta: f64,
    tolerance: f64,
    max_levels: usize,
) -> Result<SeriesEnergy> {
    let mut levels = model.truncation.min(max_levels).max(1);
    loop {
        let series = mean_energy_series(&model.with_truncation(levels)?, beta)?;
        if series.tail_bound <= tolerance {
            return Ok(series);
        }
        if levels >= max_levels {
            return Err(Error::TruncationInsufficient {
                levels,
                tail_bound: series.tail_bound,
                tolerance,
            });
        }
        levels = levels.saturating_mul(2).min(max_levels);
    }
}

/// The truncated model as a spectrum and prior for the equilibrium module.
pub fn oscillator_as_system(model: &OscillatorModel) -> (EnergySpectrum, ProbabilityVector) {
    let l = model.truncation;
    let energies: Vec<f64> = (1..=l).map(|i| model.level_energy(i)).collect();
    let prior = match model.dimensionality {
        Dimensionality::Linear1D => vec![1.0 / l as f64; l],
        Dimensionality::Planar2D => {
            let c = (l * (l + 1)) as f64 / 2.0;
            (1..=l).map(|i| i as f64 / c).collect()
        }
    };
    (
        EnergySpectrum::new(energies).expect("finite oscillator levels"),
        ProbabilityVector::from_weights(&prior).expect("positive oscillator priors"),
    )
}
