//! Small numerical helpers shared by the modules.

use crate::error::{Error, Result};

/// Neumaier-compensated sum of `weight * value` pairs, accumulated in order of
/// ascending weight magnitude.
pub(crate) fn weighted_sum(mut terms: Vec<(f64, f64)>) -> f64 {
    terms.sort_by(|l, r| l.0.abs().total_cmp(&r.0.abs()));
    compensated_sum(terms.into_iter().map(|(w, v)| if w == 0.0 { 0.0 } else { w * v }))
}

pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// `ln(e^big - e^small)` for `small <= big`.
pub(crate) fn ln_sub_exp(big: f64, small: f64) -> f64 {
    if small == f64::NEG_INFINITY {
        return big;
    }
    big + (-(small - big).exp()).ln_1p()
}

/// Bisection on `[lo, hi]` until the bracket is narrower than `tol` or the
/// midpoint stops moving. Requires a sign change between the endpoints.
pub(crate) fn bisect<F>(mut lo: f64, mut hi: f64, tol: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
