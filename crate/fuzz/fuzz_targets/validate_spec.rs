#![no_main]

use arbitrary::Arbitrary;
use libfuzzer_sys::fuzz_target;
use priorent::{validate_spec, RawSpec};

#[derive(Debug, Arbitrary)]
struct Input {
    levels: Vec<f64>,
    priors: Vec<f64>,
    particles: i64,
    k: Option<f64>,
}

fuzz_target!(|input: Input| {
    let raw = RawSpec {
        levels: input.levels,
        priors: input.priors,
        particles: input.particles,
        k: input.k,
    };
    if let Ok(spec) = validate_spec(&raw) {
        let sum: f64 = spec.prior.entries().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
        assert!(spec.prior.entries().iter().all(|&p| p >= 0.0));
        assert_eq!(validate_spec(&spec.to_raw()).expect("idempotent"), spec);
    }
});
