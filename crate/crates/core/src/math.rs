//! Numeric helpers shared by the information-measure modules.
//!
//! Everything runs in bits (base-2 logs) and the accumulation loops use
//! compensated (Kahan) summation so exponents like 2^{-n(H+D)} stay stable
//! for n up to at least 10^4.

use num_bigint::BigUint;

/// Compensated sum of an iterator of finite f64 terms.
pub(crate) fn kahan_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for t in terms {
        let y = t - c;
        let s = sum + y;
        c = (s - sum) - y;
        sum = s;
    }
    sum
}

/// Compensated sum that propagates +inf / -inf terms.
/// Mixing +inf and -inf yields NaN, which callers must treat as a conflict.
pub(crate) fn kahan_sum_checked<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    let mut pos_inf = false;
    let mut neg_inf = false;
    for t in terms {
        if t == f64::INFINITY {
            pos_inf = true;
            continue;
        }
        if t == f64::NEG_INFINITY {
            neg_inf = true;
            continue;
        }
        let y = t - c;
        let s = sum + y;
        c = (s - sum) - y;
        sum = s;
    }
    match (pos_inf, neg_inf) {
        (true, true) => f64::NAN,
        (true, false) => f64::INFINITY,
        (false, true) => f64::NEG_INFINITY,
        (false, false) => sum,
    }
}

/// x * log2(x) with the convention 0 * log 0 = 0.
#[inline]
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// x * log2(x/y) with the conventions 0*log(0/y) = 0 and x>0, y=0 -> +inf.
#[inline]
pub(crate) fn xlog2_ratio(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if y == 0.0 {
        f64::INFINITY
    } else {
        x * (x / y).log2()
    }
}

/// log2 of a positive big integer, accurate to f64 precision.
///
/// Extracts the top 64 bits as a mantissa so the result is exact to ~1 ulp
/// even when the integer has thousands of bits.
pub(crate) fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    assert!(bits > 0, "log2 of zero");
    if bits <= 64 {
        let lo: u64 = x.iter_u64_digits().next().unwrap_or(0);
        return (lo as f64).log2();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    let mantissa: u64 = top.iter_u64_digits().next().unwrap();
    (mantissa as f64).log2() + shift as f64
}

/// log2 of a sum of 2^{t_i} given the exponents t_i, computed stably
/// (log-sum-exp in base 2). Returns -inf for an empty input.
pub(crate) fn log2_sum_exp2(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if m == f64::INFINITY {
        return f64::INFINITY;
    }
    let s = kahan_sum_checked(terms.iter().map(|&t| (t - m).exp2()));
    m + s.log2()
}
