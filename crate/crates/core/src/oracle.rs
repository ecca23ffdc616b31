//! Brute-force verification of the asymptotic relations at small scale.
//!
//! Every check either enumerates the full composition set or evaluates the
//! exact big-integer / rational quantity, and compares it with the
//! floating-point or asymptotic route. Results come back as
//! [`OracleReport`]s that serialize to JSON with snake_case keys.
//!
//! Convergence checks (`einstein_convergence`, `weight_dominance`) emit one
//! report per schedule point; each report's tolerance is the largest float
//! strictly below the previous point's error, so `passed` means "strictly
//! smaller than before". The first point of a schedule always passes.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    enumerate_compositions, log_weight, macrostate_probability, macrostate_probability_exact,
    multinomial,
};
use crate::entropy::negentropy_relation;
use crate::equilibrium::generalized_distribution;
use crate::error::{Error, Result};
use crate::exact::{
    exact_rational, ln_biguint, ln_rational, rational_to_f64, rationalize_distribution, to_bigint,
    to_decimal_string,
};
use crate::system::{EnergySpectrum, Macrostate, ProbabilityVector, SystemSpec};

/// Fractional digits kept when rendering exact rationals.
pub const DECIMAL_DIGITS: usize = 40;

/// Schedules with `N` at or below this evaluate `W_max` with big integers.
pub const EXACT_WEIGHT_LIMIT: u64 = 1000;

/// Float-path tolerance for summed macrostate probabilities.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceMode {
    Absolute,
    Relative,
    Either,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub check_name: String,
    pub instance: String,
    pub exact_value: String,
    pub approx_value: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub passed: bool,
    pub tolerance: f64,
    pub mode: ToleranceMode,
}

impl OracleReport {
    #[allow(clippy::too_many_arguments)]
    fn new(
        check_name: &str,
        instance: String,
        exact_value: String,
        approx_value: f64,
        abs_error: f64,
        rel_error: f64,
        tolerance: f64,
        mode: ToleranceMode,
    ) -> Self {
        let passed = match mode {
            ToleranceMode::Absolute => abs_error <= tolerance,
            ToleranceMode::Relative => rel_error <= tolerance,
            ToleranceMode::Either => abs_error <= tolerance || rel_error <= tolerance,
        };
        Self {
            check_name: check_name.to_string(),
            instance,
            exact_value,
            approx_value,
            abs_error,
            rel_error,
            passed,
            tolerance,
            mode,
        }
    }

    /// Tab-separated one-line summary.
    pub fn summary_line(&self) -> String {
        format!(
            "{}\t{}\t{}\texact={}\tapprox={:e}\tabs_err={:e}\ttol={:e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.check_name,
            self.instance,
            self.exact_value,
            self.approx_value,
            self.abs_error,
            self.tolerance,
        )
    }
}

fn fmt_vec<T: std::fmt::Display>(v: &[T]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(","))
}

fn rel(abs: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        if abs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        abs / reference.abs()
    }
}

/// Tolerance that admits only values strictly below `previous`.
fn strictly_below(previous: Option<f64>) -> f64 {
    previous.map_or(f64::MAX, f64::next_down)
}

/// Exhaustively verifies `Σ P = 1` and `Σ N_i P = N p0_i` over `R_{N,n}`.
///
/// Priors are converted to small exact rationals and rescaled to unit mass,
/// so the exact reports are required to show zero error.
pub fn check_normalization_and_means(spec: &SystemSpec, cap: u64) -> Result<Vec<OracleReport>> {
    let n = spec.levels();
    let total = spec.particles;
    let set = enumerate_compositions(total, n)?;
    set.check_size(cap)?;
    let prior = rationalize_distribution(spec.prior.entries());
    let float_prior =
        ProbabilityVector::from_weights(&prior.iter().map(rational_to_f64).collect::<Vec<_>>())?;

    let mut mass = BigRational::zero();
    let mut float_mass = 0.0;
    let mut moments = vec![BigRational::zero(); n];
    for occupations in set.iter() {
        let m = Macrostate::new(occupations)?;
        let p = macrostate_probability_exact(&m, &prior)?;
        float_mass += macrostate_probability(&m, &float_prior)?;
        for (moment, &c) in moments.iter_mut().zip(m.occupations()) {
            if c > 0 {
                *moment += &p * BigRational::from_integer(c.into());
            }
        }
        mass += p;
    }

    let instance = format!(
        "N={} n={} prior={}",
        total,
        n,
        fmt_vec(&prior.iter().map(|r| r.to_string()).collect::<Vec<_>>())
    );
    let mut reports = Vec::with_capacity(n + 2);
    let gap = rational_to_f64(&(&mass - BigRational::one()).abs());
    reports.push(OracleReport::new(
        "normalization_exact",
        instance.clone(),
        to_decimal_string(&mass, DECIMAL_DIGITS),
        1.0,
        gap,
        gap,
        0.0,
        ToleranceMode::Absolute,
    ));
    let float_gap = (float_mass - 1.0).abs();
    reports.push(OracleReport::new(
        "normalization_float",
        instance.clone(),
        "1".to_string(),
        float_mass,
        float_gap,
        float_gap,
        FLOAT_SUM_TOLERANCE,
        ToleranceMode::Absolute,
    ));
    for (i, (moment, p0)) in moments.iter().zip(&prior).enumerate() {
        let expected = p0 * BigRational::from_integer(total.into());
        let gap = rational_to_f64(&(moment - &expected).abs());
        let target = rational_to_f64(&expected);
        reports.push(OracleReport::new(
            "mean_occupation_exact",
            format!("{instance} level={}", i + 1),
            to_decimal_string(moment, DECIMAL_DIGITS),
            target,
            gap,
            rel(gap, target),
            0.0,
            ToleranceMode::Absolute,
        ));
    }
    Ok(reports)
}

/// Result of an exhaustive argmax over the composition set.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSearch {
    pub argmax: Vec<u64>,
    /// Number of compositions attaining the maximum (1 when unique).
    pub ties: usize,
    pub probability: BigRational,
}

/// Exhaustive, exact-rational argmax of the multinomial probability under
/// the binary-exact value of `p`. Ties resolve to the first composition in
/// enumeration order.
pub fn most_probable_macrostate(p: &ProbabilityVector, total: u64, cap: u64) -> Result<ModeSearch> {
    let set = enumerate_compositions(total, p.len())?;
    set.check_size(cap)?;
    let exact_p: Vec<BigRational> = p.entries().iter().map(|&x| exact_rational(x)).collect();
    let mut best: Option<ModeSearch> = None;
    for occupations in set.iter() {
        let m = Macrostate::new(occupations)?;
        let prob = macrostate_probability_exact(&m, &exact_p)?;
        match &mut best {
            Some(b) if prob < b.probability => {}
            Some(b) if prob == b.probability => b.ties += 1,
            _ => {
                best = Some(ModeSearch {
                    argmax: m.occupations().to_vec(),
                    ties: 1,
                    probability: prob,
                })
            }
        }
    }
    Ok(best.expect("composition sets are never empty"))
}

/// Checks that the most probable macrostate under the equilibrium
/// distribution at `beta` sits within max-norm `n/N` of `N·p`.
pub fn check_most_probable_state(spec: &SystemSpec, beta: f64, cap: u64) -> Result<OracleReport> {
    let eq = generalized_distribution(&spec.spectrum, &spec.prior, beta)?;
    let total = spec.particles;
    let mode = most_probable_macrostate(&eq.distribution, total, cap)?;
    let n_total = BigRational::from_integer(total.into());
    let distance = mode
        .argmax
        .iter()
        .zip(eq.distribution.entries())
        .map(|(&c, &p)| (BigRational::new(c.into(), 1.into()) / &n_total - exact_rational(p)).abs())
        .max()
        .expect("at least one level");
    let approx = mode
        .argmax
        .iter()
        .zip(eq.distribution.entries())
        .map(|(&c, &p)| (c as f64 / total as f64 - p).abs())
        .fold(0.0, f64::max);
    let exact_f = rational_to_f64(&distance);
    let bound = spec.levels() as f64 / total as f64;
    Ok(OracleReport::new(
        "most_probable_state",
        format!(
            "N={} n={} beta={} p={} argmax={} ties={}",
            total,
            spec.levels(),
            beta,
            fmt_vec(eq.distribution.entries()),
            fmt_vec(&mode.argmax),
            mode.ties
        ),
        to_decimal_string(&distance, DECIMAL_DIGITS),
        approx,
        exact_f,
        rel(exact_f, bound),
        bound,
        ToleranceMode::Absolute,
    ))
}

/// `ln P(m)` from the exact multinomial probability under a rational prior.
pub fn exact_log_probability(m: &Macrostate, prior: &[BigRational]) -> Result<f64> {
    let w = multinomial(m.occupations());
    let mut num = to_bigint(w);
    let mut den = num_bigint::BigInt::one();
    for (&c, p) in m.occupations().iter().zip(prior) {
        if c == 0 {
            continue;
        }
        if p.is_zero() {
            return Ok(f64::NEG_INFINITY);
        }
        num *= Pow::pow(p.numer(), c);
        den *= Pow::pow(p.denom(), c);
    }
    Ok(ln_rational(&BigRational::new_raw(num, den)))
}

/// Per-particle gap between the exact log probability of `round(N·p)` and
/// the entropy-deficit approximation `(S - S_equil)/k`, along `schedule`.
pub fn check_einstein_convergence(
    p: &ProbabilityVector,
    prior: &ProbabilityVector,
    schedule: &[u64],
) -> Result<Vec<OracleReport>> {
    if p.len() != prior.len() {
        return Err(Error::LengthMismatch {
            levels: p.len(),
            priors: prior.len(),
        });
    }
    let exact_prior = rationalize_distribution(prior.entries());
    let mut previous = None;
    let mut reports = Vec::with_capacity(schedule.len());
    for &total in schedule {
        let m = Macrostate::apportion(p, total);
        if let Some(index) = m
            .occupations()
            .iter()
            .zip(prior.entries())
            .position(|(&c, &q)| c > 0 && q == 0.0)
        {
            return Err(Error::SupportViolation { index });
        }
        let mean: Vec<f64> = prior.entries().iter().map(|q| q * total as f64).collect();
        let ln_p = exact_log_probability(&m, &exact_prior)?;
        let relation = negentropy_relation(&m, &mean, 1.0)?;
        let approx = -relation.rhs;
        let gap = (ln_p - approx).abs();
        let d = gap / total as f64;
        reports.push(OracleReport::new(
            "einstein_convergence",
            format!(
                "N={} m={} p={} prior={}",
                total,
                fmt_vec(m.occupations()),
                fmt_vec(p.entries()),
                fmt_vec(prior.entries())
            ),
            format!("{ln_p:.17e}"),
            approx,
            d,
            rel(gap, ln_p),
            strictly_below(previous),
            ToleranceMode::Absolute,
        ));
        previous = Some(d);
    }
    Ok(reports)
}

/// `(ln W_max, exact W_max if computed)` over `R_{N,n}`.
fn max_weight(total: u64, parts: usize, cap: u64) -> Result<(f64, Option<BigUint>)> {
    let set = enumerate_compositions(total, parts)?;
    let within_cap = set.check_size(cap).is_ok();
    if within_cap && total <= EXACT_WEIGHT_LIMIT {
        let best = set.iter().map(|c| multinomial(&c)).max().expect("nonempty");
        return Ok((ln_biguint(&best), Some(best)));
    }
    if within_cap {
        let best = set
            .iter()
            .map(|c| log_weight(&c))
            .fold(f64::NEG_INFINITY, f64::max);
        return Ok((best, None));
    }
    // Beyond the cap: the balanced composition maximizes the multinomial.
    let uniform = crate::system::uniform_prior(parts)?;
    let balanced = Macrostate::apportion(&uniform, total);
    Ok((log_weight(balanced.occupations()), None))
}

/// `r(N) = ln W_max / ln W_total` with `W_total = n^N`, along `schedule`.
pub fn check_weight_dominance(
    parts: usize,
    schedule: &[u64],
    cap: u64,
) -> Result<Vec<OracleReport>> {
    if parts == 0 {
        return Err(Error::ZeroLevels);
    }
    let mut previous = None;
    let mut reports = Vec::with_capacity(schedule.len());
    for &total in schedule {
        let (ln_max, exact) = max_weight(total, parts, cap)?;
        let ln_total = total as f64 * (parts as f64).ln();
        // One level (or no particles): W_max = W_total = 1, reported as r = 1.
        let degenerate = parts == 1 || total == 0;
        let ratio = if degenerate { 1.0 } else { ln_max / ln_total };
        let gap = 1.0 - ratio;
        let (exact_value, mode) = match &exact {
            Some(w) => (w.to_string(), "exact"),
            None => (format!("exp({ln_max:.17e})"), "log-gamma"),
        };
        reports.push(OracleReport::new(
            "weight_dominance",
            format!(
                "n={} N={} mode={} W_total={}^{}",
                parts, total, mode, parts, total
            ),
            exact_value,
            ratio,
            gap,
            gap,
            if degenerate {
                0.0
            } else {
                strictly_below(previous)
            },
            ToleranceMode::Absolute,
        ));
        previous = Some(gap);
    }
    Ok(reports)
}

/// Sizes of the built-in suite run by [`run_default_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// Exhaustive checks with `N ≤ 12`.
    Quick,
    /// Exhaustive checks with `N ≤ 20` plus the long convergence schedules.
    Full,
}

fn canonical_spec(levels: &[f64], prior: &[f64], total: u64) -> Result<SystemSpec> {
    Ok(SystemSpec {
        spectrum: EnergySpectrum::new(levels.to_vec())?,
        prior: ProbabilityVector::new(prior.to_vec())?,
        particles: total,
        boltzmann_k: 1.0,
    })
}

/// Runs the canonical oracle instances. Deterministic for a given scale.
pub fn run_default_suite(scale: Scale) -> Result<Vec<OracleReport>> {
    let cap = crate::combinatorics::DEFAULT_SIZE_CAP;
    let max_n = match scale {
        Scale::Quick => 12,
        Scale::Full => 20,
    };
    let mut reports = Vec::new();

    let normalization = [
        (vec![0.0, 1.0], vec![0.5, 0.5], 3),
        (vec![0.0, 1.0, 2.0], vec![0.2, 0.3, 0.5], 1),
        (vec![0.0, 1.0, 2.0], vec![0.2, 0.3, 0.5], 10),
        (vec![0.0, 1.0, 2.0, 3.0], vec![0.1, 0.2, 0.3, 0.4], max_n),
        (vec![0.0, 1.0], vec![0.25, 0.75], max_n),
    ];
    for (levels, prior, total) in &normalization {
        reports.extend(check_normalization_and_means(
            &canonical_spec(levels, prior, *total)?,
            cap,
        )?);
    }

    let modal = [
        (vec![0.0, 1.0], vec![0.5, 0.5]),
        (vec![0.0, 1.0, 2.0], vec![1.0 / 3.0; 3]),
        (vec![0.0, 1.0, 2.0], vec![0.2, 0.3, 0.5]),
    ];
    for (levels, prior) in &modal {
        for total in [3, 4, 10, max_n] {
            for beta in [0.0, 1.0] {
                let spec = canonical_spec(levels, prior, total)?;
                reports.push(check_most_probable_state(&spec, beta, cap)?);
            }
        }
    }

    let small_schedule: Vec<u64> = vec![2, 4, 8, max_n];
    reports.extend(check_weight_dominance(2, &small_schedule, cap)?);
    reports.extend(check_weight_dominance(3, &[3, 6, 9, max_n], cap)?);
    reports.extend(check_weight_dominance(1, &[1, 5], cap)?);

    if scale == Scale::Full {
        let uniform = ProbabilityVector::new(vec![0.5, 0.5])?;
        for p in [vec![0.6, 0.4], vec![0.9, 0.1], vec![0.5, 0.5]] {
            let p = ProbabilityVector::new(p)?;
            reports.extend(check_einstein_convergence(&p, &uniform, &[10, 100, 1000])?);
        }
        reports.extend(check_weight_dominance(2, &[10, 100, 1000, 10000], cap)?);
    }
    Ok(reports)
}
