//! Incomplete beta integrals and the `I` / `J` integrals built on them.
//!
//! Throughout, `I(α, γ, p̄) = ∫₀¹ t^{α−1} / {1 − p̄(1−t)}^γ dt`. The change of
//! variables `p = p̄t / {1 − p̄(1−t)}` turns it into an incomplete beta integral,
//!
//! ```text
//! I(α, γ, p̄) = B(p̄; α, γ−α) / { p̄^α (1−p̄)^{γ−α} },
//! ```
//!
//! and the two-sided variant over `[ρ, 1]` is the same identity with the
//! integral taken over `[p̲, p̄]`. All products of powers are carried in log
//! space and exponentiated once.

use libm::lgamma as ln_gamma;

use crate::binomial::LnBinomialCoefficients;
use crate::error::{Error, Result};
use crate::numeric::{ln_sub_exp, weighted_sum};

const CF_REL_TOL: f64 = 1e-14;
const CF_MAX_ITER: usize = 500;
const CF_TINY: f64 = 1e-300;

/// Distance from one below which the upper bound is treated as singular.
pub const SINGULAR_MARGIN: f64 = 1e-12;

/// Arguments of the one- or two-sided `I` integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralParams {
    pub alpha: f64,
    pub gamma: f64,
    pub p_bar: f64,
    pub p_lo: Option<f64>,
}

impl IntegralParams {
    pub fn new(alpha: f64, gamma: f64, p_bar: f64, p_lo: Option<f64>) -> Result<Self> {
        check_alpha_gamma(alpha, gamma)?;
        match p_lo {
            Some(lo) => {
                check_interval(lo, p_bar)?;
            }
            None => check_p_bar(p_bar)?,
        }
        Ok(IntegralParams { alpha, gamma, p_bar, p_lo })
    }

    pub fn eval(&self) -> Result<f64> {
        match self.p_lo {
            Some(lo) => eval_i_two_sided(self.alpha, self.gamma, lo, self.p_bar),
            None => eval_i(self.alpha, self.gamma, self.p_bar),
        }
    }
}

/// Odds of the two bounds and their ratio `ρ = r̲ / r̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OddsTriple {
    pub r_lo: f64,
    pub r_bar: f64,
    pub rho: f64,
}

impl OddsTriple {
    pub fn new(p_lo: f64, p_bar: f64) -> Result<Self> {
        check_interval(p_lo, p_bar)?;
        let r_lo = p_lo / (1.0 - p_lo);
        let r_bar = p_bar / (1.0 - p_bar);
        Ok(OddsTriple { r_lo, r_bar, rho: r_lo / r_bar })
    }

    /// `ln ρ`, formed from the probabilities rather than the rounded odds.
    pub fn ln_rho(p_lo: f64, p_bar: f64) -> f64 {
        p_lo.ln() - p_bar.ln() + (-p_bar).ln_1p() - (-p_lo).ln_1p()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

fn check_alpha_gamma(alpha: f64, gamma: f64) -> Result<()> {
    positive("alpha", alpha)?;
    positive("gamma", gamma)?;
    if gamma <= alpha {
        return Err(Error::domain(format!("need gamma > alpha, got alpha = {alpha}, gamma = {gamma}")));
    }
    Ok(())
}

fn check_p_bar(p_bar: f64) -> Result<()> {
    if !(p_bar > 0.0 && p_bar < 1.0) {
        return Err(Error::domain(format!("p_bar must lie in (0, 1), got {p_bar}")));
    }
    if 1.0 - p_bar < SINGULAR_MARGIN {
        return Err(Error::Overflow(format!("p_bar = {p_bar} is within {SINGULAR_MARGIN:e} of 1")));
    }
    Ok(())
}

fn check_interval(p_lo: f64, p_bar: f64) -> Result<()> {
    check_p_bar(p_bar)?;
    if !(p_lo > 0.0 && p_lo < p_bar) {
        return Err(Error::domain(format!("need 0 < p_lo < p_bar, got p_lo = {p_lo}, p_bar = {p_bar}")));
    }
    Ok(())
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `ln { x^a (1-x)^b }`.
fn ln_kernel(a: f64, b: f64, x: f64) -> f64 {
    a * x.ln() + b * (-x).ln_1p()
}

/// Continued fraction `cf` with `B(x; a, b) = x^a (1-x)^b cf / a`, evaluated
/// by the modified Lentz method.
fn beta_cf(a: f64, b: f64, x: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let clamp = |v: f64| if v.abs() < CF_TINY { CF_TINY } else { v };

    let mut c = 1.0;
    let mut d = 1.0 / clamp(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let even = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / clamp(1.0 + even * d);
        c = clamp(1.0 + even / c);
        h *= d * c;
        let odd = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / clamp(1.0 + odd * d);
        c = clamp(1.0 + odd / c);
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < CF_REL_TOL {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence(format!("incomplete beta continued fraction a = {a}, b = {b}, x = {x}")))
}

/// `(ln ∫₀ˣ, ln ∫ₓ¹)` of `t^{a−1}(1−t)^{b−1}` for `0 < x < 1`. The tail on the
/// near side of the mean `a/(a+b)` comes from the continued fraction; the
/// other is its complement in the complete beta value.
fn ln_tails(a: f64, b: f64, x: f64) -> Result<(f64, f64)> {
    let kernel = ln_kernel(a, b, x);
    if x < a / (a + b) {
        let lower = kernel + beta_cf(a, b, x)?.ln() - a.ln();
        Ok((lower, ln_sub_exp(ln_beta(a, b), lower)))
    } else {
        let upper = kernel + beta_cf(b, a, 1.0 - x)?.ln() - b.ln();
        Ok((ln_sub_exp(ln_beta(a, b), upper), upper))
    }
}

fn check_beta_args(a: f64, b: f64) -> Result<()> {
    positive("alpha", a)?;
    positive("beta", b)
}

/// `ln ∫₀ˣ t^{a−1}(1−t)^{b−1} dt`; `-∞` at `x = 0`.
pub fn ln_inc_beta_lower(a: f64, b: f64, x: f64) -> Result<f64> {
    check_beta_args(a, b)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("x must lie in [0, 1], got {x}")));
    }
    if x == 0.0 {
        Ok(f64::NEG_INFINITY)
    } else if x == 1.0 {
        Ok(ln_beta(a, b))
    } else {
        Ok(ln_tails(a, b, x)?.0)
    }
}

/// `ln ∫ₓ¹ t^{a−1}(1−t)^{b−1} dt`; `-∞` at `x = 1`.
pub fn ln_inc_beta_upper(a: f64, b: f64, x: f64) -> Result<f64> {
    check_beta_args(a, b)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("x must lie in [0, 1], got {x}")));
    }
    if x == 1.0 {
        Ok(f64::NEG_INFINITY)
    } else if x == 0.0 {
        Ok(ln_beta(a, b))
    } else {
        Ok(ln_tails(a, b, x)?.1)
    }
}

/// `ln ∫_lo^hi t^{a−1}(1−t)^{b−1} dt` for `0 ≤ lo < hi ≤ 1`.
///
/// Both endpoints are evaluated on the tail that avoids cancellation: two
/// lower tails below the mean, two upper tails above it, and the complete
/// beta value minus both outer tails when the interval straddles the mean.
pub fn ln_beta_interval(a: f64, b: f64, lo: f64, hi: f64) -> Result<f64> {
    check_beta_args(a, b)?;
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(Error::domain(format!("need 0 <= lo < hi <= 1, got [{lo}, {hi}]")));
    }
    let mean = a / (a + b);
    if hi <= mean {
        Ok(ln_sub_exp(ln_inc_beta_lower(a, b, hi)?, ln_inc_beta_lower(a, b, lo)?))
    } else if lo >= mean {
        Ok(ln_sub_exp(ln_inc_beta_upper(a, b, lo)?, ln_inc_beta_upper(a, b, hi)?))
    } else {
        let full = ln_beta(a, b);
        let outer = (ln_inc_beta_lower(a, b, lo)? - full).exp() + (ln_inc_beta_upper(a, b, hi)? - full).exp();
        Ok(full + (-outer).ln_1p())
    }
}

/// `∫₀ˣ t^{α−1}(1−t)^{β−1} dt` (unregularized).
pub fn inc_beta_lower(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    Ok(ln_inc_beta_lower(alpha, beta, x)?.exp())
}

/// `ln I(α, γ, p̄)`.
pub fn ln_eval_i(alpha: f64, gamma: f64, p_bar: f64) -> Result<f64> {
    check_alpha_gamma(alpha, gamma)?;
    check_p_bar(p_bar)?;
    let beta = gamma - alpha;
    if p_bar < alpha / gamma {
        // The power prefactor of the continued fraction cancels exactly.
        Ok(beta_cf(alpha, beta, p_bar)?.ln() - alpha.ln())
    } else {
        Ok(ln_inc_beta_lower(alpha, beta, p_bar)? - ln_kernel(alpha, beta, p_bar))
    }
}

fn finite_exp(ln_value: f64, what: &str) -> Result<f64> {
    let v = ln_value.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("{what} overflows (ln value {ln_value})")))
    }
}

/// `I(α, γ, p̄) = ∫₀¹ t^{α−1} / {1 − p̄(1−t)}^γ dt` for `γ > α > 0`.
pub fn eval_i(alpha: f64, gamma: f64, p_bar: f64) -> Result<f64> {
    finite_exp(ln_eval_i(alpha, gamma, p_bar)?, "I")
}

/// `ln` of the two-sided integral over `[ρ, 1]`.
pub fn ln_eval_i_two_sided(alpha: f64, gamma: f64, p_lo: f64, p_bar: f64) -> Result<f64> {
    check_alpha_gamma(alpha, gamma)?;
    check_interval(p_lo, p_bar)?;
    let beta = gamma - alpha;
    Ok(ln_beta_interval(alpha, beta, p_lo, p_bar)? - ln_kernel(alpha, beta, p_bar))
}

/// `∫_ρ¹ t^{α−1} / {1 − p̄(1−t)}^γ dt` with `ρ = r̲ / r̄`.
pub fn eval_i_two_sided(alpha: f64, gamma: f64, p_lo: f64, p_bar: f64) -> Result<f64> {
    finite_exp(ln_eval_i_two_sided(alpha, gamma, p_lo, p_bar)?, "two-sided I")
}

/// `J(p) = ∫₀¹ t^{a−1}{1−p(1−t)}ⁿ / {1−p̄(1−t)}^{n+a+b+1} dt`.
///
/// Since `{1 − p(1−t)}ⁿ = E_p[t^X]` for `X ~ Bin(n, p)`, this is the finite
/// mixture `Σ_x f(x|n,p) I(x+a, n+a+b+1, p̄)`.
pub fn eval_j(p: f64, n: u32, a: f64, b: f64, p_bar: f64) -> Result<f64> {
    positive("a", a)?;
    positive("b", b)?;
    if n < 1 {
        return Err(Error::domain("n must be at least 1"));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::domain(format!("p must lie in [0, 1), got {p}")));
    }
    check_p_bar(p_bar)?;
    let gamma = f64::from(n) + a + b + 1.0;
    let pmf = LnBinomialCoefficients::new(n).pmf_row(p);
    let terms = (0..=n)
        .map(|x| Ok((pmf[x as usize], eval_i(f64::from(x) + a, gamma, p_bar)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(weighted_sum(terms))
}

/// `[t^α / {1 − p̄(1−t)}^γ]_ρ^1 = 1 − ρ^α {(1−p̲)/(1−p̄)}^γ`.
pub fn bracket_term(alpha: f64, gamma: f64, p_lo: f64, p_bar: f64) -> Result<f64> {
    positive("alpha", alpha)?;
    positive("gamma", gamma)?;
    check_interval(p_lo, p_bar)?;
    // 1 − p̄(1−ρ) simplifies to (1−p̄)/(1−p̲).
    let ln_lower = alpha * OddsTriple::ln_rho(p_lo, p_bar) + gamma * ((-p_lo).ln_1p() - (-p_bar).ln_1p());
    Ok(-ln_lower.exp_m1())
}
