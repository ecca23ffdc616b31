//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion, and exits non-zero if any failed.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use priorent::combinatorics::{
    enumerate_compositions, macrostate_probability_exact, statistical_weight,
};
use priorent::entropy::{kl_divergence, negentropy_relation};
use priorent::equilibrium::{
    boltzmann_distribution, entropy_inequality_check, generalized_distribution, solve_beta,
};
use priorent::exact::{ln_rational, rational_to_f64};
use priorent::oracle::{
    check_einstein_convergence, check_most_probable_state, check_weight_dominance,
};
use priorent::oscillators::{
    mean_energy_closed, mean_energy_series, mean_energy_series_to_tolerance, Dimensionality,
    OscillatorModel,
};
use priorent::{uniform_prior, EnergySpectrum, Macrostate, ProbabilityVector, SystemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIZE_CAP: u64 = priorent::combinatorics::DEFAULT_SIZE_CAP;

type Criterion = fn() -> Outcome;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point on the simplex (normalized exponentials), entries > 0.
fn simplex(rng: &mut ChaCha8Rng, n: usize) -> ProbabilityVector {
    let w: Vec<f64> = (0..n)
        .map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-12)
        .collect();
    ProbabilityVector::from_weights(&w).unwrap()
}

fn spectrum(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> EnergySpectrum {
    EnergySpectrum::new((0..n).map(|_| rng.random_range(lo..hi)).collect()).unwrap()
}

fn rational(a: &[i64]) -> Vec<BigRational> {
    let total: i64 = a.iter().sum();
    a.iter()
        .map(|&x| BigRational::new(BigInt::from(x), BigInt::from(total)))
        .collect()
}

fn within(start: Instant, budget: Duration) -> (bool, String) {
    let elapsed = start.elapsed();
    (
        elapsed < budget,
        format!("{:.3}s < {}s", elapsed.as_secs_f64(), budget.as_secs()),
    )
}

/// Exact Σ P = 1 and Σ N_i P = N p0_i over R_{N,n}.
fn c01_multinomial_exactness() -> Outcome {
    let start = Instant::now();
    let mut instances = 0;
    let mut failures = Vec::new();
    for n in 1..=4usize {
        let grid: Vec<Vec<i64>> = vec![
            vec![1; n],
            (1..=n as i64).collect(),
            (1..=n as i64).rev().collect(),
            (0..n).map(|i| if i + 1 == n { 2 } else { 1 }).collect(),
            (0..n as u32).map(|i| 3i64.pow(i)).collect(),
        ];
        for weights in &grid {
            let prior = rational(weights);
            for total in 1..=12u64 {
                instances += 1;
                let mut mass = BigRational::zero();
                let mut moments = vec![BigRational::zero(); n];
                for occ in enumerate_compositions(total, n).unwrap().iter() {
                    let m = Macrostate::new(occ).unwrap();
                    let p = macrostate_probability_exact(&m, &prior).unwrap();
                    for (mo, &c) in moments.iter_mut().zip(m.occupations()) {
                        *mo += &p * BigRational::from_integer(c.into());
                    }
                    mass += p;
                }
                let means_ok = moments
                    .iter()
                    .zip(&prior)
                    .all(|(mo, p)| *mo == p * BigRational::from_integer(total.into()));
                if !mass.is_one() || !means_ok {
                    failures.push(format!("n={n} N={total} prior={weights:?}"));
                }
            }
        }
    }
    let (fast, time) = within(start, Duration::from_secs(10));
    outcome(
        failures.is_empty() && fast,
        format!("{instances} instances, {} inexact, {time}", failures.len()),
    )
}

/// ln(P/W) - Σ N_i ln p0_i = 0, with P and W exact.
fn c02_kkt_identity() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = r.random_range(1..=6);
        let weights: Vec<i64> = (0..n).map(|_| r.random_range(1..=1000)).collect();
        let exact_prior = rational(&weights);
        let prior: Vec<f64> = exact_prior.iter().map(rational_to_f64).collect();
        let occ: Vec<u64> = (0..n).map(|_| r.random_range(0..=12)).collect();
        let m = Macrostate::new(occ).unwrap();
        let p = macrostate_probability_exact(&m, &exact_prior).unwrap();
        let w = BigRational::from_integer(BigInt::from(statistical_weight(&m).exact));
        let lhs = ln_rational(&(p / w));
        let rhs: f64 = m
            .occupations()
            .iter()
            .zip(&prior)
            .map(|(&c, &q)| c as f64 * q.ln())
            .sum();
        worst = worst.max((lhs - rhs).abs());
    }
    let (fast, time) = within(start, Duration::from_secs(1));
    outcome(
        worst <= 1e-10 && fast,
        format!("max |residual| = {worst:.3e} (tol 1e-10), {time}"),
    )
}

/// D(p‖p0) ≥ -1e-15 on random pairs; D(p‖p) ≤ 1e-12.
fn c03_gibbs_inequality() -> Outcome {
    let mut r = rng(3);
    let mut min_d = f64::INFINITY;
    let mut max_self = 0.0f64;
    for _ in 0..10_000 {
        let n = r.random_range(1..=8);
        let p = simplex(&mut r, n);
        let q = simplex(&mut r, n);
        min_d = min_d.min(kl_divergence(&p, &q).unwrap());
        max_self = max_self.max(kl_divergence(&p, &p).unwrap());
    }
    outcome(
        min_d >= -1e-15 && max_self <= 1e-12,
        format!("min D = {min_d:.3e} (≥ -1e-15), max D(p‖p) = {max_self:.3e} (≤ 1e-12)"),
    )
}

/// k Σ N_i ln(N_i/N̄_i) = S_equil - S on random pairs with matching totals and supports.
fn c04_negentropy_identity() -> Outcome {
    let mut r = rng(4);
    let mut worst = 0.0f64;
    let mut violations = 0;
    for _ in 0..1000 {
        let n = r.random_range(2..=6);
        let mut occ: Vec<u64> = (0..n).map(|_| r.random_range(0..=20)).collect();
        if occ.iter().all(|&c| c == 0) {
            occ[0] = 1;
        }
        let m = Macrostate::new(occ).unwrap();
        let w = simplex(&mut r, n);
        let mean: Vec<f64> = w.entries().iter().map(|q| q * m.total() as f64).collect();
        let rel = negentropy_relation(&m, &mean, 1.0).unwrap();
        let gap = (rel.lhs - rel.rhs).abs();
        worst = worst.max(gap);
        if gap > 1e-9 {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{violations}/1000 pairs exceed 1e-9, max |lhs - rhs| = {worst:.3e}"),
    )
}

/// Per-particle Einstein gap decreases along N = 10, 100, 1000.
fn c05_einstein_convergence() -> Outcome {
    let start = Instant::now();
    let p = ProbabilityVector::new(vec![0.6, 0.4]).unwrap();
    let prior = uniform_prior(2).unwrap();
    let reports = check_einstein_convergence(&p, &prior, &[10, 100, 1000]).unwrap();
    let d: Vec<f64> = reports.iter().map(|r| r.abs_error).collect();
    let decreasing = d.windows(2).all(|w| w[1] < w[0]);
    let ratio_ok = d[2] < d[0] / 5.0;
    let (fast, time) = within(start, Duration::from_secs(5));
    outcome(
        decreasing && ratio_ok && fast,
        format!(
            "d = [{:.4e}, {:.4e}, {:.4e}], d(1000) < d(10)/5: {ratio_ok}, {time}",
            d[0], d[1], d[2]
        ),
    )
}

/// r(N) = ln W_max / ln W_total increases along N = 10..10000, r(10000) > 0.99.
fn c06_weight_dominance() -> Outcome {
    let reports = check_weight_dominance(2, &[10, 100, 1000, 10000], SIZE_CAP).unwrap();
    let r: Vec<f64> = reports.iter().map(|x| x.approx_value).collect();
    let increasing = r.windows(2).all(|w| w[1] > w[0]);
    outcome(
        increasing && r[3] > 0.99,
        format!("r = [{:.6}, {:.6}, {:.6}, {:.6}]", r[0], r[1], r[2], r[3]),
    )
}

/// Uniform-prior generalized distribution equals the plain one.
fn c07_uniform_reduction() -> Outcome {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = r.random_range(1..=10);
        let e = spectrum(&mut r, n, -5.0, 5.0);
        let beta = r.random_range(-5.0..5.0);
        let g = generalized_distribution(&e, &uniform_prior(n).unwrap(), beta).unwrap();
        let b = boltzmann_distribution(&e, beta).unwrap();
        worst = worst.max(g.distribution.max_abs_diff(&b.distribution));
    }
    outcome(
        worst <= 1e-14,
        format!("max-norm distance = {worst:.3e} (tol 1e-14)"),
    )
}

/// solve_beta recovers β0 from the mean energy it produces.
fn c08_beta_round_trip() -> Outcome {
    let mut r = rng(8);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for _ in 0..20 {
        let n = r.random_range(2..=6);
        let e = spectrum(&mut r, n, -1.0, 1.0);
        let prior = simplex(&mut r, n);
        for beta0 in [-5.0, -1.0, 0.0, 1.0, 5.0] {
            let target = generalized_distribution(&e, &prior, beta0)
                .unwrap()
                .mean_energy;
            let solved = solve_beta(&e, &prior, target).unwrap();
            worst = worst.max((solved.beta - beta0).abs());
            cases += 1;
        }
    }
    outcome(
        worst <= 1e-8,
        format!("{cases} cases, max |Δβ| = {worst:.3e} (tol 1e-8)"),
    )
}

/// Equal-prior entropy dominates unequal-prior entropy at shared β.
fn c09_entropy_inequality() -> Outcome {
    let mut r = rng(9);
    let mut violations = 0;
    let mut strict_needed = 0;
    let mut strict_missing = 0;
    for _ in 0..1000 {
        let n = r.random_range(2..=8);
        let e = spectrum(&mut r, n, -3.0, 3.0);
        let prior = simplex(&mut r, n);
        let beta = r.random_range(-3.0..3.0);
        let particles = r.random_range(1..=50);
        let check = entropy_inequality_check(&e, &prior, beta, particles, 1.0).unwrap();
        if !check.holds {
            violations += 1;
        }
        let h: f64 = -prior.entries().iter().map(|p| p * p.ln()).sum::<f64>();
        if h < (n as f64).ln() - 1e-6 {
            strict_needed += 1;
            if check.s_uniform <= check.s_prior {
                strict_missing += 1;
            }
        }
    }
    outcome(
        violations == 0 && strict_missing == 0,
        format!("{violations} violations, {strict_missing}/{strict_needed} non-strict where strictness required"),
    )
}

/// Series vs closed-form oscillator energies and zero-point limits.
fn c10_oscillators() -> Outcome {
    let start = Instant::now();
    let mut worst_excess = f64::NEG_INFINITY;
    for dim in [Dimensionality::Linear1D, Dimensionality::Planar2D] {
        let model = OscillatorModel::new(1.0, dim, 16).unwrap();
        for x in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let series = mean_energy_series_to_tolerance(&model, x, 1e-10, 1 << 20).unwrap();
            let closed = mean_energy_closed(&model, x).unwrap();
            worst_excess =
                worst_excess.max((series.value - closed).abs() - (series.tail_bound + 1e-12));
        }
    }
    let h = 1.0;
    let lin = OscillatorModel::new(h, Dimensionality::Linear1D, 200).unwrap();
    let pla = OscillatorModel::new(h, Dimensionality::Planar2D, 200).unwrap();
    let zp1 = (mean_energy_closed(&lin, 50.0).unwrap() - h / 2.0).abs();
    let zp2 = (mean_energy_closed(&pla, 50.0).unwrap() - h).abs();
    let zs1 = (mean_energy_series(&lin, 50.0).unwrap().value - h / 2.0).abs();
    let zs2 = (mean_energy_series(&pla, 50.0).unwrap().value - h).abs();
    let zero_point = zp1.max(zp2).max(zs1).max(zs2);
    let (fast, time) = within(start, Duration::from_secs(1));
    outcome(
        worst_excess <= 0.0 && zero_point <= 1e-12 && fast,
        format!(
            "max(|series-closed| - bound) = {worst_excess:.3e}, zero-point error = {zero_point:.3e}, {time}"
        ),
    )
}

/// Exhaustive argmax lies within n/N of N·p.
fn c11_most_probable_state() -> Outcome {
    let mut checked = 0;
    let mut failed = Vec::new();
    for n in 1..=3usize {
        let levels: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let priors: Vec<Vec<f64>> = match n {
            1 => vec![vec![1.0]],
            2 => vec![vec![0.5, 0.5], vec![0.3, 0.7]],
            _ => vec![vec![1.0 / 3.0; 3], vec![0.2, 0.3, 0.5]],
        };
        for prior in &priors {
            for total in 1..=12u64 {
                let spec = SystemSpec {
                    spectrum: EnergySpectrum::new(levels.clone()).unwrap(),
                    prior: ProbabilityVector::new(prior.clone()).unwrap(),
                    particles: total,
                    boltzmann_k: 1.0,
                };
                for beta in [0.0, 1.0] {
                    let report = check_most_probable_state(&spec, beta, SIZE_CAP).unwrap();
                    checked += 1;
                    if !report.passed {
                        failed.push(report.instance);
                    }
                }
            }
        }
    }
    outcome(
        failed.is_empty(),
        format!(
            "{checked} instances, {} outside n/N: {failed:?}",
            failed.len()
        ),
    )
}

/// Byte-identical sweeps; quick verification exits 0.
fn c12_cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_priorent");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    std::fs::write(
        &path,
        r#"{"levels":[0,1,2.5],"priors":[0.2,0.3,0.5],"N":25,"k":1.0}"#,
    )
    .unwrap();
    let sweep = || {
        Command::new(bin)
            .args(["sweep", "--spec"])
            .arg(&path)
            .args([
                "--from", "-2", "--to", "3", "--points", "41", "--format", "csv",
            ])
            .output()
            .unwrap()
    };
    let (a, b) = (sweep(), sweep());
    let identical =
        a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    let verify = Command::new(bin)
        .args(["verify", "--scale", "quick"])
        .output()
        .unwrap();
    let code = verify.status.code();
    outcome(
        identical && code == Some(0),
        format!(
            "sweep outputs identical: {identical} ({} bytes), verify quick exit: {code:?}",
            a.stdout.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, Criterion); 12] = [
        ("01 multinomial exactness", c01_multinomial_exactness),
        ("02 multinomial KKT identity", c02_kkt_identity),
        ("03 Gibbs inequality", c03_gibbs_inequality),
        ("04 negentropy identity", c04_negentropy_identity),
        ("05 Einstein convergence", c05_einstein_convergence),
        ("06 weight dominance", c06_weight_dominance),
        ("07 uniform-prior reduction", c07_uniform_reduction),
        ("08 beta round trip", c08_beta_round_trip),
        ("09 entropy inequality", c09_entropy_inequality),
        ("10 oscillator formulas", c10_oscillators),
        ("11 most-probable state", c11_most_probable_state),
        ("12 CLI determinism", c12_cli_determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let result = run();
        println!(
            "criterion {name:<30} {}  {}",
            if result.passed { "PASS" } else { "FAIL" },
            result.detail
        );
        if !result.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
