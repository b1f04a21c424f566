//! Correctly rounded arithmetic mean.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

/// `(sign·mantissa, exponent)` with `x = mantissa · 2^exponent`.
fn decompose(x: f64) -> (i64, i32) {
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let fraction = (bits & ((1 << 52) - 1)) as i64;
    let (m, e) = if biased == 0 { (fraction, -1074) } else { (fraction | 1 << 52, biased - 1075) };
    (if x.is_sign_negative() { -m } else { m }, e)
}

/// Exact sum of `parts` scaled by `2^-emin`, in i128 when it fits.
fn scaled_sum(parts: &[(i64, i32)], emin: i32) -> BigInt {
    let narrow = parts.iter().try_fold(0i128, |acc, &(m, e)| {
        let shift = (e - emin) as u32;
        let term = if shift < 74 { Some((m as i128) << shift) } else { None }?;
        acc.checked_add(term)
    });
    match narrow {
        Some(s) => BigInt::from(s),
        None => parts.iter().map(|&(m, e)| BigInt::from(m) << (e - emin) as usize).sum(),
    }
}

/// The exact mean of `values`, rounded once to the nearest `f64`.
///
/// Independent of input order, and equal to `x` when every value is `x`.
pub(crate) fn exact_mean(values: &[f64]) -> f64 {
    let n = values.len();
    if n == 0 {
        return f64::NAN;
    }
    if values.iter().any(|v| !v.is_finite()) {
        return values.iter().sum::<f64>() / n as f64;
    }
    let parts: Vec<(i64, i32)> = values.iter().filter(|v| **v != 0.0).map(|&v| decompose(v)).collect();
    let Some(emin) = parts.iter().map(|p| p.1).min() else {
        return 0.0;
    };
    let sum = scaled_sum(&parts, emin);
    if sum.is_zero() {
        return 0.0;
    }
    let n = BigInt::from(n);
    let ratio =
        if emin >= 0 { Ratio::new_raw(sum << emin as usize, n) } else { Ratio::new_raw(sum, n << (-emin) as usize) };
    ratio.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_means() {
        assert_eq!(exact_mean(&[10.0, 20.0]), 15.0);
        assert_eq!(exact_mean(&[0.0, 0.0]), 0.0);
        assert_eq!(exact_mean(&[-1.0, 1.0]), 0.0);
        assert_eq!(exact_mean(&[3.0]), 3.0);
    }

    #[test]
    fn repeated_value_is_exact() {
        // naive (0.1 + 0.1 + 0.1) / 3 gives 0.10000000000000002
        assert_eq!(exact_mean(&[0.1; 3]), 0.1);
        assert_eq!(exact_mean(&[1e-320; 7]), 1e-320);
        assert_eq!(exact_mean(&[f64::MAX; 5]), f64::MAX);
    }

    #[test]
    fn rounds_once() {
        // exact mean is 1 + 2^-53, a tie that rounds to even
        assert_eq!(exact_mean(&[1.0, 1.0 + f64::EPSILON]), 1.0);
        // huge cancellation is handled exactly
        assert_eq!(exact_mean(&[1e300, 1.0, -1e300, 2.0]), 0.75);
        assert_eq!(exact_mean(&[5e-324, 5e-324, 1e308]), 1e308 / 3.0);
    }

    #[test]
    fn matches_known_values() {
        // exact rational means, rounded to nearest
        assert_eq!(exact_mean(&[0.1, 0.2, 0.3]), 0.2);
        assert_eq!(exact_mean(&[1.0, 2.0, 2.0]), 5.0 / 3.0);
    }

    #[test]
    fn non_finite_propagates() {
        assert!(exact_mean(&[1.0, f64::NAN]).is_nan());
        assert_eq!(exact_mean(&[1.0, f64::INFINITY]), f64::INFINITY);
    }
}
