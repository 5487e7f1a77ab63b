//! Posterior-mean estimators of `p` under untruncated, upper-truncated and
//! two-sided truncated beta priors.

use rayon::prelude::*;

use crate::binomial::{PriorSpec, Restriction};
use crate::error::{Error, Result};
use crate::incbeta::{ln_beta_interval, ln_eval_i};
use crate::numeric::ln_sub_exp;

/// Relative size of the bracket difference below which `A(X)` is exactly zero.
const A_TERM_ZERO: f64 = 1e-14;

fn check_count(x: u32, n: u32) -> Result<()> {
    if n < 1 {
        return Err(Error::domain("n must be at least 1"));
    }
    if x > n {
        return Err(Error::domain(format!("x = {x} outside 0..={n}")));
    }
    Ok(())
}

fn check_exponents(a: f64, b: f64) -> Result<()> {
    if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("prior exponents must be positive, got a = {a}, b = {b}")))
    }
}

/// `(x+a)/(n+a+b)`.
pub fn posterior_mean_unrestricted(x: u32, n: u32, a: f64, b: f64) -> Result<f64> {
    check_count(x, n)?;
    check_exponents(a, b)?;
    Ok((f64::from(x) + a) / (f64::from(n) + a + b))
}

/// Bayes estimator under the prior truncated to `(0, p̄]`.
///
/// Equal to `(x+a)/(n+a+b) − 1/{(n+a+b) I(x+a, n+a+b, p̄)}`. Applying the
/// recurrence `α I(α,γ) = 1 + p̄ γ I(α+1,γ+1)` turns the difference into the
/// cancellation-free ratio `p̄ I(x+a+1, n+a+b+1, p̄) / I(x+a, n+a+b, p̄)`,
/// which is what is evaluated.
pub fn posterior_mean_upper_truncated(x: u32, n: u32, a: f64, b: f64, p_bar: f64) -> Result<f64> {
    check_count(x, n)?;
    check_exponents(a, b)?;
    let alpha = f64::from(x) + a;
    let gamma = f64::from(n) + a + b;
    let ln_ratio = ln_eval_i(alpha + 1.0, gamma + 1.0, p_bar)? - ln_eval_i(alpha, gamma, p_bar)?;
    Ok(p_bar * ln_ratio.exp())
}

/// `A(X) = [p^{X+a}(1−p)^{n−X+b}]_{p̲}^{p̄} / ∫_{p̲}^{p̄} p^{X+a−1}(1−p)^{n−X+b−1} dp`.
pub fn a_term(x: u32, n: u32, a: f64, b: f64, p_lo: f64, p_bar: f64) -> Result<f64> {
    check_count(x, n)?;
    check_exponents(a, b)?;
    Restriction::Interval { p_lo, p_bar }.validate()?;
    let alpha = f64::from(x) + a;
    let beta = f64::from(n - x) + b;
    let ln_top = alpha * p_bar.ln() + beta * (-p_bar).ln_1p();
    let ln_bottom = alpha * p_lo.ln() + beta * (-p_lo).ln_1p();
    // e^{top} − e^{bottom} = −e^{top} · expm1(bottom − top)
    let rel = (ln_bottom - ln_top).exp_m1();
    if rel.abs() < A_TERM_ZERO {
        return Ok(0.0);
    }
    let ln_integral = ln_beta_interval(alpha, beta, p_lo, p_bar)?;
    let magnitude = if ln_top >= ln_bottom {
        ln_sub_exp(ln_top, ln_bottom)
    } else {
        ln_sub_exp(ln_bottom, ln_top)
    };
    Ok(-rel.signum() * (magnitude - ln_integral).exp())
}

/// Bayes estimator under the prior truncated to `[p̲, p̄]`:
/// `(x+a)/(n+a+b) − A(x)/(n+a+b)`.
pub fn posterior_mean_two_sided(x: u32, n: u32, a: f64, b: f64, p_lo: f64, p_bar: f64) -> Result<f64> {
    let unrestricted = posterior_mean_unrestricted(x, n, a, b)?;
    let correction = a_term(x, n, a, b, p_lo, p_bar)?;
    Ok(unrestricted - correction / (f64::from(n) + a + b))
}

/// Posterior mean for any supported prior.
pub fn posterior_mean(x: u32, n: u32, prior: &PriorSpec) -> Result<f64> {
    let PriorSpec { a, b, restriction } = *prior;
    match restriction {
        Restriction::None => posterior_mean_unrestricted(x, n, a, b),
        Restriction::Upper { p_bar } => posterior_mean_upper_truncated(x, n, a, b, p_bar),
        Restriction::Interval { p_lo, p_bar } => posterior_mean_two_sided(x, n, a, b, p_lo, p_bar),
    }
}

/// Values of an estimator of `p` for every outcome `x = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateTable {
    n: u32,
    prior: Option<PriorSpec>,
    values: Vec<f64>,
}

impl EstimateTable {
    /// The posterior-mean estimator of `prior` at sample size `n`.
    pub fn bayes(n: u32, prior: &PriorSpec) -> Result<Self> {
        prior.restriction.validate()?;
        let values = (0..=n)
            .into_par_iter()
            .map(|x| posterior_mean(x, n, prior))
            .collect::<Result<Vec<_>>>()?;
        Ok(EstimateTable { n, prior: Some(*prior), values })
    }

    /// An arbitrary estimator given by its values; each must lie in `(0, 1)`.
    pub fn from_values(n: u32, values: Vec<f64>) -> Result<Self> {
        if values.len() != n as usize + 1 {
            return Err(Error::domain(format!("expected {} values, got {}", n + 1, values.len())));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
            return Err(Error::domain(format!("estimate {v} outside (0, 1)")));
        }
        Ok(EstimateTable { n, prior: None, values })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn prior(&self) -> Option<&PriorSpec> {
        self.prior.as_ref()
    }

    pub fn value(&self, x: u32) -> f64 {
        self.values[x as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}
