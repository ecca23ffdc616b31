use priorent::combinatorics::{
    enumerate_compositions, log_macrostate_probability, macrostate_probability, statistical_weight,
};
use priorent::entropy::{kl_divergence, negentropy_relation, shannon_entropy};
use priorent::equilibrium::{
    boltzmann_distribution, entropy_inequality_check, generalized_distribution, solve_beta,
};
use priorent::exact::ln_factorial;
use priorent::{
    uniform_prior, validate_spec, EnergySpectrum, Macrostate, ProbabilityVector, RawSpec,
};
use proptest::prelude::*;

fn simplex(n: usize) -> impl Strategy<Value = ProbabilityVector> {
    prop::collection::vec(0.01f64..1.0, n)
        .prop_map(|w| ProbabilityVector::from_weights(&w).unwrap())
}

fn sized_simplex(max: usize) -> impl Strategy<Value = ProbabilityVector> {
    (1..=max).prop_flat_map(simplex)
}

fn spectrum_and_prior(max: usize) -> impl Strategy<Value = (EnergySpectrum, ProbabilityVector)> {
    (1..=max).prop_flat_map(|n| {
        (
            prop::collection::vec(-5.0f64..5.0, n).prop_map(|e| EnergySpectrum::new(e).unwrap()),
            simplex(n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn probabilities_sum_to_one(prior in sized_simplex(4), total in 1u64..=10) {
        let n = prior.len();
        let mut mass = 0.0;
        let mut means = vec![0.0; n];
        for occ in enumerate_compositions(total, n).unwrap().iter() {
            let m = Macrostate::new(occ).unwrap();
            let p = macrostate_probability(&m, &prior).unwrap();
            for (mean, &c) in means.iter_mut().zip(m.occupations()) {
                *mean += p * c as f64;
            }
            mass += p;
        }
        prop_assert!((mass - 1.0).abs() < 1e-12);
        for (mean, p0) in means.iter().zip(prior.entries()) {
            prop_assert!((mean - total as f64 * p0).abs() < 1e-11);
        }
    }

    #[test]
    fn log_probability_is_log_weight_plus_prior_term(
        prior in simplex(4),
        occ in prop::collection::vec(0u64..30, 4),
    ) {
        let m = Macrostate::new(occ).unwrap();
        let lnw: f64 = ln_factorial(m.total()) - m.occupations().iter().map(|&c| ln_factorial(c)).sum::<f64>();
        let prior_term: f64 = m.occupations().iter().zip(prior.entries()).map(|(&c, p)| c as f64 * p.ln()).sum();
        let lnp = log_macrostate_probability(&m, &prior).unwrap();
        prop_assert!((lnp - lnw - prior_term).abs() < 1e-10);
        prop_assert!((statistical_weight(&m).log_value - lnw).abs() < 1e-10);
    }

    #[test]
    fn divergence_is_nonnegative(p in simplex(6), q in simplex(6)) {
        prop_assert!(kl_divergence(&p, &q).unwrap() >= -1e-15);
        prop_assert!(kl_divergence(&p, &p).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn shannon_entropy_bounded_by_log_n(p in sized_simplex(8)) {
        let h = shannon_entropy(&p, 1.0).value;
        prop_assert!(h <= (p.len() as f64).ln() + 1e-12);
        prop_assert!(h >= -1e-15);
    }

    #[test]
    fn negentropy_holds_on_constrained_pairs(
        occ in prop::collection::vec(0u64..40, 3),
    ) {
        // Means from the uniform-prior Boltzmann distribution matching the
        // state's own energy, so both share N and total energy.
        let m = Macrostate::new(occ).unwrap();
        prop_assume!(m.total() > 0);
        let e = EnergySpectrum::new(vec![0.0, 1.0, 2.0]).unwrap();
        let energy: f64 = m.occupations().iter().zip(e.levels()).map(|(&c, &x)| c as f64 * x).sum();
        let target = energy / m.total() as f64;
        prop_assume!(target > 1e-3 && target < 2.0 - 1e-3);
        let sol = solve_beta(&e, &uniform_prior(3).unwrap(), target).unwrap();
        let mean: Vec<f64> = sol.distribution.entries().iter().map(|p| p * m.total() as f64).collect();
        let rel = negentropy_relation(&m, &mean, 1.0).unwrap();
        prop_assert!((rel.lhs - rel.rhs).abs() <= 1e-9 * (1.0 + m.total() as f64), "{rel:?}");
    }

    #[test]
    fn mean_energy_decreases_with_beta((e, prior) in spectrum_and_prior(6), b in -4.0f64..4.0, db in 0.01f64..1.0) {
        let lo = generalized_distribution(&e, &prior, b).unwrap().mean_energy;
        let hi = generalized_distribution(&e, &prior, b + db).unwrap().mean_energy;
        prop_assert!(hi <= lo + 1e-12);
    }

    #[test]
    fn energy_shift_leaves_distribution_unchanged(
        (e, prior) in spectrum_and_prior(6),
        beta in -3.0f64..3.0,
        shift in -100.0f64..100.0,
    ) {
        let a = generalized_distribution(&e, &prior, beta).unwrap();
        let b = generalized_distribution(&e.shifted(shift).unwrap(), &prior, beta).unwrap();
        prop_assert!(a.distribution.max_abs_diff(&b.distribution) < 1e-12);
    }

    #[test]
    fn uniform_prior_reduces_to_plain((e, _) in spectrum_and_prior(8), beta in -5.0f64..5.0) {
        let g = generalized_distribution(&e, &uniform_prior(e.len()).unwrap(), beta).unwrap();
        let b = boltzmann_distribution(&e, beta).unwrap();
        prop_assert!(g.distribution.max_abs_diff(&b.distribution) <= 1e-14);
    }

    #[test]
    fn zero_beta_returns_prior((e, prior) in spectrum_and_prior(8)) {
        let g = generalized_distribution(&e, &prior, 0.0).unwrap();
        prop_assert!(g.distribution.max_abs_diff(&prior) <= 1e-15);
    }

    #[test]
    fn beta_round_trip((e, prior) in spectrum_and_prior(6), beta0 in -5.0f64..5.0) {
        prop_assume!(e.levels().iter().any(|&x| (x - e.levels()[0]).abs() > 0.1));
        let target = generalized_distribution(&e, &prior, beta0).unwrap().mean_energy;
        let solved = solve_beta(&e, &prior, target).unwrap();
        prop_assert!((solved.mean_energy - target).abs() <= 1e-12 * (1.0 + target.abs()));
        // dE/dβ = -Var(E); β is only identifiable where the variance is not negligible.
        let sol = generalized_distribution(&e, &prior, beta0).unwrap();
        let variance: f64 = sol.distribution.entries().iter().zip(e.levels())
            .map(|(p, x)| p * (x - target).powi(2)).sum();
        if variance > 1e-4 {
            prop_assert!((solved.beta - beta0).abs() <= 1e-8, "{} vs {beta0}", solved.beta);
        }
    }

    #[test]
    fn equal_priors_maximize_equilibrium_entropy(
        (e, prior) in spectrum_and_prior(8),
        beta in -3.0f64..3.0,
        particles in 1u64..100,
    ) {
        let check = entropy_inequality_check(&e, &prior, beta, particles, 1.0).unwrap();
        prop_assert!(check.holds);
        prop_assert!(check.s_uniform >= check.s_prior - 1e-12 * check.s_uniform.abs().max(1.0));
    }

    #[test]
    fn validation_is_idempotent(
        levels in prop::collection::vec(-1e3f64..1e3, 1..8),
        seed in prop::collection::vec(0.0f64..1.0, 8),
        particles in 1i64..10_000,
        k in prop::option::of(1e-3f64..10.0),
    ) {
        let n = levels.len();
        let total: f64 = seed[..n].iter().sum::<f64>() + 1e-9;
        let priors: Vec<f64> = seed[..n].iter().map(|&w| (w + 1e-9 / n as f64) / total).collect();
        let raw = RawSpec { levels, priors, particles, k };
        if let Ok(spec) = validate_spec(&raw) {
            let again = validate_spec(&spec.to_raw()).unwrap();
            prop_assert_eq!(again, spec);
        }
    }
}
