//! Exact statistical weights, the composition set of all macrostates with a
//! fixed particle count, and the multinomial macrostate distribution.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{ln_biguint, ln_factorial, rational_to_f64, to_bigint};
use crate::system::{Macrostate, ProbabilityVector};

/// Default cap on eagerly materialized or exhaustively summed compositions.
pub const DEFAULT_SIZE_CAP: u64 = 10_000_000;

/// Number of microstates `W = N! / Π N_i!` of a macrostate, exactly and as a log.
#[derive(Debug, Clone, PartialEq)]
pub struct StatWeight {
    pub exact: BigUint,
    /// `ln W` from log-gamma, computed independently of `exact`.
    pub log_value: f64,
}

/// `C(n, k)` by the multiplicative formula; every intermediate is integral.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// Multinomial coefficient `(Σ c_i)! / Π c_i!` as a product of binomials.
pub fn multinomial(counts: &[u64]) -> BigUint {
    let mut running = 0u64;
    let mut acc = BigUint::one();
    for &c in counts {
        running += c;
        acc *= binomial(running, c);
    }
    acc
}

pub fn statistical_weight(m: &Macrostate) -> StatWeight {
    let exact = multinomial(m.occupations());
    let log_value = ln_factorial(m.total())
        - m.occupations()
            .iter()
            .map(|&c| ln_factorial(c))
            .sum::<f64>();
    StatWeight { exact, log_value }
}

/// `ln W` without building the big integer.
pub fn log_weight(occupations: &[u64]) -> f64 {
    let total: u64 = occupations.iter().sum();
    ln_factorial(total) - occupations.iter().map(|&c| ln_factorial(c)).sum::<f64>()
}

/// The set `R_{N,n}` of nonnegative integer vectors of length `n` summing to `N`.
///
/// Iteration runs in decreasing lexicographic order, starting at
/// `[N, 0, ..., 0]` and ending at `[0, ..., 0, N]`. Whenever a search over the
/// set has ties, the element met first in this order wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompositionSet {
    total: u64,
    parts: usize,
}

impl CompositionSet {
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    /// `C(N + n - 1, n - 1)`.
    pub fn count(&self) -> BigUint {
        binomial(self.total + self.parts as u64 - 1, self.parts as u64 - 1)
    }

    /// Errors with [`Error::SizeGuard`] when the set has more than `cap` members.
    pub fn check_size(&self, cap: u64) -> Result<u64> {
        let count = self.count();
        match count.to_u64() {
            Some(c) if c <= cap => Ok(c),
            _ => Err(Error::SizeGuard {
                count: count.to_string(),
                cap,
            }),
        }
    }

    pub fn iter(&self) -> Compositions {
        let mut first = vec![0; self.parts];
        first[0] = self.total;
        Compositions { next: Some(first) }
    }

    /// All compositions whose first part equals `leading`; disjoint slices for
    /// different `leading` values cover the set, so they can be consumed in parallel.
    pub fn with_leading(&self, leading: u64) -> impl Iterator<Item = Vec<u64>> {
        let rest = if self.parts > 1 && leading <= self.total {
            Some(CompositionSet {
                total: self.total - leading,
                parts: self.parts - 1,
            })
        } else {
            None
        };
        let single = self.parts == 1 && leading == self.total;
        let tail = rest.into_iter().flat_map(move |set| {
            set.iter().map(move |tail| {
                let mut v = Vec::with_capacity(tail.len() + 1);
                v.push(leading);
                v.extend(tail);
                v
            })
        });
        single.then(|| vec![leading]).into_iter().chain(tail)
    }

    /// Collects every composition, refusing when the set exceeds `cap`.
    pub fn materialize(&self, cap: u64) -> Result<Vec<Vec<u64>>> {
        let count = self.check_size(cap)?;
        let mut out = Vec::with_capacity(count as usize);
        out.extend(self.iter());
        Ok(out)
    }
}

impl IntoIterator for &CompositionSet {
    type Item = Vec<u64>;
    type IntoIter = Compositions;

    fn into_iter(self) -> Compositions {
        self.iter()
    }
}

/// Lazy iterator over a [`CompositionSet`].
#[derive(Debug, Clone)]
pub struct Compositions {
    next: Option<Vec<u64>>,
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let current = self.next.take()?;
        let n = current.len();
        // Rightmost position before the last part that can still give one away.
        if let Some(j) = (0..n.saturating_sub(1)).rev().find(|&j| current[j] > 0) {
            let mut succ = current.clone();
            let carried: u64 = succ[j + 1..].iter().sum();
            succ[j] -= 1;
            succ[j + 1] = carried + 1;
            for slot in &mut succ[j + 2..] {
                *slot = 0;
            }
            self.next = Some(succ);
        }
        Some(current)
    }
}

pub fn enumerate_compositions(total: u64, parts: usize) -> Result<CompositionSet> {
    if parts == 0 {
        return Err(Error::ZeroLevels);
    }
    Ok(CompositionSet { total, parts })
}

fn check_arity(m: &Macrostate, len: usize) -> Result<()> {
    if m.levels() != len {
        return Err(Error::LengthMismatch {
            levels: m.levels(),
            priors: len,
        });
    }
    Ok(())
}

/// `ln P(m) = ln W(m) + Σ N_i ln p_i^0`; `-inf` when an occupied level has zero prior.
pub fn log_macrostate_probability(m: &Macrostate, prior: &ProbabilityVector) -> Result<f64> {
    check_arity(m, prior.len())?;
    let mut acc = log_weight(m.occupations());
    for (&c, &p) in m.occupations().iter().zip(prior.entries()) {
        if c == 0 {
            continue;
        }
        if p == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        acc += c as f64 * p.ln();
    }
    Ok(acc)
}

/// Multinomial probability `W(m) Π (p_i^0)^{N_i}` of a macrostate under `prior`.
pub fn macrostate_probability(m: &Macrostate, prior: &ProbabilityVector) -> Result<f64> {
    Ok(log_macrostate_probability(m, prior)?.exp())
}

/// Exact-rational multinomial probability.
pub fn macrostate_probability_exact(m: &Macrostate, prior: &[BigRational]) -> Result<BigRational> {
    check_arity(m, prior.len())?;
    let mut acc = BigRational::from_integer(to_bigint(multinomial(m.occupations())));
    for (&c, p) in m.occupations().iter().zip(prior) {
        if c > 0 {
            acc *= Pow::pow(p, c);
        }
    }
    Ok(acc)
}

/// `Σ_{A ∈ R_{N,n}} W(A)` by exhaustive summation.
pub fn total_weight(total: u64, parts: usize, cap: u64) -> Result<BigUint> {
    let set = enumerate_compositions(total, parts)?;
    set.check_size(cap)?;
    Ok(set.iter().map(|c| multinomial(&c)).sum())
}

/// `W(m) / Σ_A W(A)` over the composition set containing `m`.
pub fn weight_ratio_probability(m: &Macrostate, cap: u64) -> Result<f64> {
    let weight = multinomial(m.occupations());
    let sum = total_weight(m.total(), m.levels(), cap)?;
    let ratio = BigRational::new(to_bigint(weight), to_bigint(sum));
    Ok(rational_to_f64(&ratio))
}

/// `ln W` of the exact weight, for cross-checks against `log_value`.
pub fn ln_exact_weight(w: &StatWeight) -> f64 {
    ln_biguint(&w.exact)
}
