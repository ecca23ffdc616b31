use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("prior has {priors} entries but the spectrum has {levels} levels")]
    LengthMismatch { levels: usize, priors: usize },

    #[error("prior entry {index} is negative or not finite ({value})")]
    NegativePrior { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },

    #[error("particle count must be positive, got {0}")]
    NonPositiveN(i64),

    #[error("energy level {index} is not finite ({value})")]
    NonFiniteEnergy { index: usize, value: f64 },

    #[error("Boltzmann constant must be positive and finite, got {0}")]
    NonPositiveK(f64),

    #[error("at least one energy level is required")]
    ZeroLevels,

    #[error("occupations sum to {actual}, expected {expected}")]
    OccupationSumMismatch { expected: u64, actual: u64 },

    #[error("{count} compositions exceed the size cap of {cap}")]
    SizeGuard { count: String, cap: u64 },

    #[error("prior entry {index} is NaN")]
    NanPrior { index: usize },

    #[error("level {index} has positive mass but zero reference mass")]
    SupportViolation { index: usize },

    #[error("mean occupations sum to {mean_sum}, occupations sum to {total}")]
    MeanSumMismatch { total: u64, mean_sum: f64 },

    #[error("mean occupation {index} is negative or not finite ({value})")]
    InvalidMean { index: usize, value: f64 },

    #[error("entropies use different Boltzmann constants ({0} vs {1})")]
    KMismatch(f64, f64),

    #[error("entropy {entropy} exceeds reference entropy {reference}")]
    ExceedsReference { entropy: f64, reference: f64 },

    #[error("every prior-weighted Boltzmann factor vanished")]
    DegeneratePrior,

    #[error("target mean energy {target} outside the open interval ({min}, {max})")]
    TargetOutOfRange { target: f64, min: f64, max: f64 },

    #[error("all supported levels have energy {energy}; target {target} is unreachable")]
    NoVariation { energy: f64, target: f64 },

    #[error("prior entry {index} is zero")]
    ZeroPriorEntry { index: usize },

    #[error("beta must be positive and finite, got {0}")]
    NonPositiveBeta(f64),

    #[error("beta must be finite, got {0}")]
    NonFiniteBeta(f64),

    #[error(
        "truncation at {levels} levels leaves tail bound {tail_bound} above tolerance {tolerance}"
    )]
    TruncationInsufficient {
        levels: usize,
        tail_bound: f64,
        tolerance: f64,
    },

    #[error("energy quantum must be positive and finite, got {0}")]
    NonPositiveQuantum(f64),

    #[error("oscillator truncation must keep at least one level")]
    EmptyTruncation,

    #[error("bracket for beta could not be established")]
    BracketFailure,

    #[error("invalid spec file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
