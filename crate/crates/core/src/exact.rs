//! Arbitrary-precision helpers: logarithms of big integers and rationals,
//! decimal rendering, and conversion of floats to small rationals.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;
use std::sync::OnceLock;

/// `ln x` for a positive big integer. Returns `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit mantissa");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln r` for a positive rational. Returns `-inf` for zero and NaN for negatives.
pub fn ln_rational(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    if r.is_negative() {
        return f64::NAN;
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    ln_biguint(num) - ln_biguint(den)
}

/// Largest `n` whose `ln n!` comes from the exact factorial table.
pub const LN_FACTORIAL_TABLE_MAX: u64 = 1024;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut acc = BigUint::one();
        let mut table = Vec::with_capacity(LN_FACTORIAL_TABLE_MAX as usize + 1);
        table.push(0.0);
        for k in 1..=LN_FACTORIAL_TABLE_MAX {
            acc *= k;
            table.push(ln_biguint(&acc));
        }
        table
    })
}

/// `ln n!`, from exact factorials up to [`LN_FACTORIAL_TABLE_MAX`] and
/// log-gamma beyond.
pub fn ln_factorial(n: u64) -> f64 {
    if n <= LN_FACTORIAL_TABLE_MAX {
        ln_factorial_table()[n as usize]
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// Nearest-ish `f64` of an arbitrary rational.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let l = ln_rational(&r.abs());
        let v = l.exp();
        if r.is_negative() {
            -v
        } else {
            v
        }
    })
}

/// Exact rational value of a finite float.
pub fn exact_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Smallest-denominator rational within `tol` of `x` (denominator capped at
/// `max_den`), falling back to the exact binary value.
pub fn rationalize(x: f64, tol: f64, max_den: u64) -> BigRational {
    if !x.is_finite() {
        panic!("cannot rationalize non-finite value {x}");
    }
    // Continued-fraction convergents.
    let (mut h_prev, mut h) = (0i128, 1i128);
    let (mut k_prev, mut k) = (1i128, 0i128);
    let mut rem = x;
    for _ in 0..64 {
        let a = rem.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h_next = ai * h + h_prev;
        let k_next = ai * k + k_prev;
        if k_next > max_den as i128 {
            break;
        }
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        if (h as f64 / k as f64 - x).abs() <= tol {
            return BigRational::new(BigInt::from(h), BigInt::from(k));
        }
        let frac = rem - a;
        if frac == 0.0 {
            break;
        }
        rem = 1.0 / frac;
    }
    exact_rational(x)
}

/// Rationalizes a probability vector and rescales it to sum to exactly one.
pub fn rationalize_distribution(p: &[f64]) -> Vec<BigRational> {
    let raw: Vec<BigRational> = p
        .iter()
        .map(|&x| rationalize(x, 1e-13, 1_000_000_000))
        .collect();
    let sum = raw.iter().fold(BigRational::zero(), |acc, x| acc + x);
    if sum.is_zero() || sum.is_one() {
        return raw;
    }
    raw.into_iter().map(|x| x / &sum).collect()
}

/// Decimal expansion of `r`, exact when it terminates within `frac_digits`
/// fractional digits and truncated (suffix `...`) otherwise.
pub fn to_decimal_string(r: &BigRational, frac_digits: usize) -> String {
    let negative = r.is_negative();
    let num = r.numer().magnitude().clone();
    let den = r.denom().magnitude().clone();
    let (int_part, mut rem) = num.div_rem(&den);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if rem.is_zero() {
        return out;
    }
    out.push('.');
    let ten = BigUint::from(10u32);
    for _ in 0..frac_digits {
        rem *= &ten;
        let (digit, r2) = rem.div_rem(&den);
        out.push_str(&digit.to_string());
        rem = r2;
        if rem.is_zero() {
            return out;
        }
    }
    out.push_str("...");
    out
}

/// Signed big integer from an unsigned one.
pub fn to_bigint(x: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x)
}
