//! Dominance conditions for the truncated-prior Bayes estimators, the upper
//! bound on the standardized risk difference, the exact maximum risk
//! difference in the one-trial symmetric case, and grid certification.

use rayon::prelude::*;

use crate::binomial::{LnBinomialCoefficients, PriorSpec, Restriction};
use crate::error::{Error, Result};
use crate::estimators::EstimateTable;
use crate::incbeta::{eval_i, eval_j, ln_beta_interval, ln_eval_i, OddsTriple};
use crate::numeric::{bisect, weighted_sum};
use crate::risk::risk_difference;

/// Slack for treating a risk difference as nonpositive.
pub const DOMINANCE_SLACK: f64 = 1e-12;

fn check_config(n: u32, a: f64, b: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::domain("n must be at least 1"));
    }
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!("prior exponents must be positive, got a = {a}, b = {b}")));
    }
    Ok(())
}

fn check_p_in_upper(p: f64, p_bar: f64) -> Result<()> {
    Restriction::Upper { p_bar }.validate()?;
    if p > 0.0 && p <= p_bar {
        Ok(())
    } else {
        Err(Error::domain(format!("p must lie in (0, {p_bar}], got {p}")))
    }
}

fn tables(n: u32, prior: &PriorSpec) -> Result<(EstimateTable, EstimateTable)> {
    Ok((EstimateTable::bayes(n, prior)?, EstimateTable::bayes(n, &prior.untruncated())?))
}

/// `(1−p) log{1 − 1/((1−p̄)(n+a+b)J(p))} + p log[1 + {1 + 1/J(p)}/(p̄(n+a+b))]`.
pub fn thm32_bound(p: f64, n: u32, a: f64, b: f64, p_bar: f64) -> Result<f64> {
    check_config(n, a, b)?;
    check_p_in_upper(p, p_bar)?;
    let m = f64::from(n) + a + b;
    let j = eval_j(p, n, a, b, p_bar)?;
    let inner = 1.0 / ((1.0 - p_bar) * m * j);
    if inner >= 1.0 {
        return Err(Error::UndefinedBound { p });
    }
    Ok((1.0 - p) * (-inner).ln_1p() + p * ((1.0 + 1.0 / j) / (p_bar * m)).ln_1p())
}

/// `J(p) · E_p[1/I(X+a, n+a+b+1, p̄)]`, the factor dividing the risk difference.
pub fn standardizing_factor(p: f64, n: u32, a: f64, b: f64, p_bar: f64) -> Result<f64> {
    check_config(n, a, b)?;
    check_p_in_upper(p, p_bar)?;
    let gamma = f64::from(n) + a + b + 1.0;
    let pmf = LnBinomialCoefficients::new(n).pmf_row(p);
    let terms = (0..=n)
        .map(|x| Ok((pmf[x as usize], (-ln_eval_i(f64::from(x) + a, gamma, p_bar)?).exp())))
        .collect::<Result<Vec<_>>>()?;
    let factor = eval_j(p, n, a, b, p_bar)? * weighted_sum(terms);
    assert!(factor > 0.0, "standardizing factor must be positive, got {factor}");
    Ok(factor)
}

/// Risk difference (truncated minus untruncated) divided by [`standardizing_factor`].
pub fn standardized_risk_difference(p: f64, n: u32, a: f64, b: f64, p_bar: f64) -> Result<f64> {
    let prior = PriorSpec::upper(a, b, p_bar)?;
    let (truncated, plain) = tables(n, &prior)?;
    standardized_with(&truncated, &plain, p, a, b, p_bar)
}

fn standardized_with(truncated: &EstimateTable, plain: &EstimateTable, p: f64, a: f64, b: f64, p_bar: f64) -> Result<f64> {
    let delta = risk_difference(truncated, plain, p)?;
    Ok(delta / standardizing_factor(p, truncated.n(), a, b, p_bar)?)
}

/// `J(p̄) = I(a, a+b+1, p̄)`, using the closed forms for `b = 1` and `a = b = ½`.
pub fn j_at_p_bar(a: f64, b: f64, p_bar: f64) -> Result<f64> {
    Restriction::Upper { p_bar }.validate()?;
    let q = 1.0 - p_bar;
    if b == 1.0 {
        Ok((1.0 + q * a) / (q * q * a * (a + 1.0)))
    } else if a == 0.5 && b == 0.5 {
        Ok((1.0 + (p_bar / q).sqrt().atan() / (p_bar * q).sqrt()) / q)
    } else {
        eval_i(a, a + b + 1.0, p_bar)
    }
}

/// The two small-`p̄` sufficient conditions for the upper-truncated estimator
/// to dominate. The second is only available when `p̄ ≤ 1/n` and is `false`
/// otherwise.
pub fn smallpbar_sufficient_conditions(n: u32, a: f64, b: f64, p_bar: f64) -> Result<(bool, bool)> {
    check_config(n, a, b)?;
    Restriction::Upper { p_bar }.validate()?;
    let m = f64::from(n) + a + b;
    let q = 1.0 - p_bar;
    let j0 = eval_i(a, m + 1.0, p_bar)?;
    let jb = j_at_p_bar(a, b, p_bar)?;
    let tail = ((1.0 + 1.0 / jb) / (p_bar * m)).ln_1p();
    let inner = 1.0 / (q * m * j0);
    let general = inner < 1.0 && (-inner).ln_1p() + p_bar / q * tail < 0.0;
    let small = p_bar <= 1.0 / f64::from(n) && -1.0 / (q * m) + p_bar / q * jb * tail < 0.0;
    Ok((general, small))
}

/// Necessary condition `p̄ < (n+a)/(n+a+b)` for domination under upper truncation.
pub fn thm33_necessary(n: u32, a: f64, b: f64, p_bar: f64) -> Result<bool> {
    check_config(n, a, b)?;
    Restriction::Upper { p_bar }.validate()?;
    Ok(p_bar < (f64::from(n) + a) / (f64::from(n) + a + b))
}

/// Necessary condition for domination when `b = 1`:
/// `p̄ log{1 + (1−p̄)(a+1)/(p̄(n+a+1))} < (1−p̄) log{(n+a+1)(1−p̄^{n+1})/((n+1)(1−p̄))}`.
pub fn thm34_necessary(n: u32, a: f64, p_bar: f64) -> Result<bool> {
    check_config(n, a, 1.0)?;
    Restriction::Upper { p_bar }.validate()?;
    let (nf, q) = (f64::from(n), 1.0 - p_bar);
    let lhs = p_bar * (q * (a + 1.0) / (p_bar * (nf + a + 1.0))).ln_1p();
    let geometric = -((nf + 1.0) * p_bar.ln()).exp_m1() / q;
    let rhs = q * ((nf + a + 1.0) * geometric / (nf + 1.0)).ln();
    Ok(lhs < rhs)
}

/// Sufficient conditions `(c1, c2)` for the two-sided truncated estimator to dominate.
pub fn thm41_conditions(n: u32, a: f64, b: f64, p_lo: f64, p_bar: f64) -> Result<(bool, bool)> {
    check_config(n, a, b)?;
    Restriction::Interval { p_lo, p_bar }.validate()?;
    let (nf, m) = (f64::from(n), f64::from(n) + a + b);
    let c1 = p_bar <= (a + 1.0) / (m + 1.0);
    let value = p_bar / (1.0 - p_bar) * ((p_lo * nf + a + 1.0) / (p_bar * m)).ln()
        + (((1.0 - p_lo) * nf + b) / ((1.0 - p_bar) * m)).ln();
    Ok((c1, value <= 0.0))
}

/// Large-`n` conditions for `p̲ = c̲/n`, `p̄ = c̄/n`:
/// `c̄ < a+1` and `c̄ log{(c̲+a+1)/c̄} + c̄ − c̲ < a`.
pub fn cor41_conditions(a: f64, c_lo: f64, c_bar: f64) -> Result<bool> {
    if !(a > 0.0 && c_lo > 0.0 && c_lo < c_bar && c_bar.is_finite()) {
        return Err(Error::domain(format!("need a > 0 and 0 < c_lo < c_bar, got a = {a}, c_lo = {c_lo}, c_bar = {c_bar}")));
    }
    Ok(c_bar < a + 1.0 && c_bar * ((c_lo + a + 1.0) / c_bar).ln() + c_bar - c_lo < a)
}

fn check_symmetric(p_bar: f64) -> Result<()> {
    if p_bar > 0.5 && p_bar < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("p_bar must lie in (1/2, 1), got {p_bar}")))
    }
}

/// Maximum over `[1−p̄, p̄]` of the risk difference between the two-sided
/// truncated and the untruncated estimators, for `n = 1` and `a = b`.
///
/// The generic path evaluates the four interval integrals; `a = 1` and
/// `a = ½` have their own closed forms in [`max_risk_diff_symmetric_n1_closed`].
pub fn max_risk_diff_symmetric_n1(a: f64, p_bar: f64) -> Result<f64> {
    check_symmetric(p_bar)?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("a must be positive, got {a}")));
    }
    let p_lo = 1.0 - p_bar;
    let z = |s: f64, f: f64| ln_beta_interval(s, f, p_lo, p_bar);
    let first = ((1.0 + a) / (1.0 + 2.0 * a)).ln() + z(a + 1.0, a)? - z(a + 2.0, a)?;
    let second = (a / (1.0 + 2.0 * a)).ln() + z(a, a + 1.0)? - z(a + 1.0, a + 1.0)?;
    Ok((p_lo * p_lo + p_bar * p_bar) * first + 2.0 * p_lo * p_bar * second)
}

/// Closed-form maximum risk difference for `a = 1` or `a = ½`; `None` for other `a`.
pub fn max_risk_diff_symmetric_n1_closed(a: f64, p_bar: f64) -> Result<Option<f64>> {
    check_symmetric(p_bar)?;
    let p_lo = 1.0 - p_bar;
    let (sq, cross) = (p_lo * p_lo + p_bar * p_bar, 2.0 * p_lo * p_bar);
    if a == 1.0 {
        let ratio = (p_bar.powi(3) - p_lo.powi(3)) / (p_bar * p_bar - p_lo * p_lo);
        return Ok(Some(-sq * ratio.ln() - cross * (3.0 - 2.0 * ratio).ln()));
    }
    if a == 0.5 {
        let odds = OddsTriple::new(p_lo, p_bar)?;
        let (r_lo, r_bar) = (odds.r_lo, odds.r_bar);
        let bracket = |g: &dyn Fn(f64) -> f64| g(r_bar) - g(r_lo);
        let top = bracket(&|u| u.powf(1.5) / ((1.0 + u) * (1.0 + u)));
        let bottom = r_bar.sqrt().atan() - r_lo.sqrt().atan() - bracket(&|u| u.sqrt() / (1.0 + u));
        let t = top / bottom;
        return Ok(Some(-sq * (-2.0 / 3.0 * t).ln_1p() - cross * (2.0 * t).ln_1p()));
    }
    Ok(None)
}

/// Bracket used for the threshold search.
pub const THRESHOLD_BRACKET: (f64, f64) = (0.5 + 1e-4, 1.0 - 1e-4);

/// Largest `p̄` at which the two-sided truncated estimator still dominates for
/// `n = 1`, `a = b`, `p̲ = 1 − p̄`: the root of [`max_risk_diff_symmetric_n1`].
pub fn dominance_threshold_n1(a: f64) -> Result<f64> {
    let f = |p: f64| max_risk_diff_symmetric_n1(a, p);
    let (mut lo, mut hi) = THRESHOLD_BRACKET;
    if f(lo)?.signum() == f(hi)?.signum() {
        // scan inward for a sign change
        let steps = 256;
        let start = f(lo)?.signum();
        let mut found = None;
        for i in 1..steps {
            let p = lo + (hi - lo) * f64::from(i) / f64::from(steps);
            if f(p)?.signum() != start {
                found = Some(p);
                break;
            }
        }
        match found {
            Some(p) => hi = p,
            None => return Err(Error::NoBracket { lo, hi }),
        }
        lo = hi - (THRESHOLD_BRACKET.1 - THRESHOLD_BRACKET.0) / f64::from(steps);
    }
    bisect(lo, hi, 4.0 * f64::EPSILON, f)
}

/// Outcome of a grid certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Dominates,
    DominatedSomewhere,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Dominates => "dominates",
            Verdict::DominatedSomewhere => "dominated_somewhere",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Named condition flags; `None` where a condition does not apply to the restriction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConditionFlags {
    pub thm33_necessary: Option<bool>,
    pub thm34_necessary: Option<bool>,
    pub thm41_c1: Option<bool>,
    pub thm41_c2: Option<bool>,
    pub smallpbar_sufficient: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub restriction: Restriction,
    pub p_grid: Vec<f64>,
    /// Truncated minus untruncated risk at each grid point.
    pub risk_difference: Vec<f64>,
    /// Upper restriction only; `None` entries where the bound is undefined.
    pub thm32_bound_curve: Option<Vec<Option<f64>>>,
    pub standardized_diff_curve: Option<Vec<f64>>,
    pub flags: ConditionFlags,
    pub verdict: Verdict,
    /// Grid point of the largest risk difference.
    pub witness_p: f64,
    pub max_difference: f64,
}

/// Uniform grid over the closure of the restriction: `p̄ i/G` for the upper
/// restriction, `G` points from `p̲` to `p̄` for an interval.
pub fn restriction_grid(restriction: &Restriction, grid_size: usize) -> Result<Vec<f64>> {
    if grid_size < 2 {
        return Err(Error::domain("grid_size must be at least 2"));
    }
    restriction.validate()?;
    let g = grid_size as f64;
    match *restriction {
        Restriction::None => Err(Error::domain("a restriction (upper or interval) is required")),
        Restriction::Upper { p_bar } => Ok((1..=grid_size).map(|i| p_bar * i as f64 / g).collect()),
        Restriction::Interval { p_lo, p_bar } => Ok((0..grid_size)
            .map(|i| if i + 1 == grid_size { p_bar } else { p_lo + (p_bar - p_lo) * i as f64 / (g - 1.0) })
            .collect()),
    }
}

/// Exact risk difference on a uniform grid over the restriction, with every
/// applicable condition flag.
pub fn exhaustive_dominance_check(n: u32, a: f64, b: f64, restriction: Restriction, grid_size: usize) -> Result<DominanceReport> {
    check_config(n, a, b)?;
    let p_grid = restriction_grid(&restriction, grid_size)?;
    let prior = PriorSpec::new(a, b, restriction)?;
    let (truncated, plain) = tables(n, &prior)?;
    let risk_diff = p_grid
        .par_iter()
        .map(|&p| risk_difference(&truncated, &plain, p))
        .collect::<Result<Vec<_>>>()?;

    let mut flags = ConditionFlags::default();
    let (mut bound_curve, mut std_curve) = (None, None);
    match restriction {
        Restriction::Upper { p_bar } => {
            flags.thm33_necessary = Some(thm33_necessary(n, a, b, p_bar)?);
            if b == 1.0 {
                flags.thm34_necessary = Some(thm34_necessary(n, a, p_bar)?);
            }
            let (general, small) = smallpbar_sufficient_conditions(n, a, b, p_bar)?;
            flags.smallpbar_sufficient = Some(general || small);
            bound_curve = Some(
                p_grid
                    .par_iter()
                    .map(|&p| match thm32_bound(p, n, a, b, p_bar) {
                        Ok(v) => Ok(Some(v)),
                        Err(Error::UndefinedBound { .. }) => Ok(None),
                        Err(e) => Err(e),
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
            std_curve = Some(
                p_grid
                    .par_iter()
                    .map(|&p| standardized_with(&truncated, &plain, p, a, b, p_bar))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Restriction::Interval { p_lo, p_bar } => {
            let (c1, c2) = thm41_conditions(n, a, b, p_lo, p_bar)?;
            flags.thm41_c1 = Some(c1);
            flags.thm41_c2 = Some(c2);
        }
        Restriction::None => unreachable!("rejected by restriction_grid"),
    }

    let (witness, max_difference) = risk_diff
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &d)| if d > best.1 { (i, d) } else { best });
    let min_difference = risk_diff.iter().copied().fold(f64::INFINITY, f64::min);
    let verdict = if max_difference > DOMINANCE_SLACK {
        Verdict::DominatedSomewhere
    } else if min_difference < -DOMINANCE_SLACK {
        Verdict::Dominates
    } else {
        Verdict::Inconclusive
    };
    Ok(DominanceReport {
        n,
        a,
        b,
        restriction,
        witness_p: p_grid[witness],
        p_grid,
        risk_difference: risk_diff,
        thm32_bound_curve: bound_curve,
        standardized_diff_curve: std_curve,
        flags,
        verdict,
        max_difference,
    })
}

/// Checks on a grid of `grid_size` points in `(0, p̄]` that `{p/(1−p)} J(p)`
/// is nondecreasing. Returns the first `p` where it decreases, if any.
pub fn j_monotonicity_violation(n: u32, a: f64, b: f64, p_bar: f64, grid_size: usize) -> Result<Option<f64>> {
    let grid = restriction_grid(&Restriction::Upper { p_bar }, grid_size)?;
    let values = grid
        .par_iter()
        .map(|&p| Ok(p / (1.0 - p) * eval_j(p, n, a, b, p_bar)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(values
        .windows(2)
        .zip(&grid[1..])
        .find(|(w, _)| w[1] < w[0] * (1.0 - 1e-13))
        .map(|(_, &p)| p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::risk::point_risk;

    #[test]
    fn bound_negative_for_small_p_bar() {
        assert!(thm32_bound(0.05, 1, 1.0, 1.0, 0.1).unwrap() < 0.0);
    }

    #[test]
    fn bound_dominates_standardized_difference() {
        for &(n, p_bar) in &[(1u32, 0.1), (5, 0.2), (9, 0.4)] {
            for i in 1..=16 {
                let p = p_bar * f64::from(i) / 16.0;
                let s = standardized_risk_difference(p, n, 1.0, 1.0, p_bar).unwrap();
                match thm32_bound(p, n, 1.0, 1.0, p_bar) {
                    Ok(bound) => assert!(bound >= s - 1e-10, "n = {n}, p = {p}: {bound} < {s}"),
                    Err(Error::UndefinedBound { .. }) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn standardized_matches_exact_risks() {
        let (n, p_bar, p) = (5, 0.2, 0.1);
        let prior = PriorSpec::upper(1.0, 1.0, p_bar).unwrap();
        let t = EstimateTable::bayes(n, &prior).unwrap();
        let u = EstimateTable::bayes(n, &prior.untruncated()).unwrap();
        let delta = point_risk(&t, p).unwrap() - point_risk(&u, p).unwrap();
        let s = standardized_risk_difference(p, n, 1.0, 1.0, p_bar).unwrap();
        assert!((s * standardizing_factor(p, n, 1.0, 1.0, p_bar).unwrap() - delta).abs() < 1e-15);
        assert!(s < 0.0);
    }

    #[test]
    fn j_closed_forms_match_integral() {
        for &p_bar in &[0.05, 0.3, 0.7] {
            let b1 = j_at_p_bar(1.7, 1.0, p_bar).unwrap();
            assert!((b1 / eval_i(1.7, 3.7, p_bar).unwrap() - 1.0).abs() < 1e-13);
            let jeffreys = j_at_p_bar(0.5, 0.5, p_bar).unwrap();
            assert!((jeffreys / eval_i(0.5, 2.0, p_bar).unwrap() - 1.0).abs() < 1e-13);
            assert!((j_at_p_bar(1.0, 1.0, p_bar).unwrap() - eval_j(p_bar, 3, 1.0, 1.0, p_bar).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn smallpbar_limits() {
        assert_eq!(smallpbar_sufficient_conditions(3, 1.0, 1.0, 1e-3).unwrap(), (true, true));
        let (_, small) = smallpbar_sufficient_conditions(5, 1.0, 1.0, 0.3).unwrap();
        assert!(!small);
    }

    #[test]
    fn necessary_conditions() {
        assert!(thm33_necessary(1, 1.0, 1.0, 0.5).unwrap());
        assert!(!thm33_necessary(1, 1.0, 1.0, 0.7).unwrap());
        assert!(thm33_necessary(1000, 1.0, 1.0, 0.99).unwrap());
        assert!(thm34_necessary(3, 1.0, 1e-6).unwrap());
        // n = 1, a = 1, p̄ = ½: ½ log(1 + 2/3) vs ½ log(3·(3/4)/(2·½))
        let lhs = 0.5 * (5.0f64 / 3.0).ln();
        let rhs = 0.5 * (2.25f64).ln();
        assert_eq!(thm34_necessary(1, 1.0, 0.5).unwrap(), lhs < rhs);
    }

    #[test]
    fn thm41_regimes() {
        assert_eq!(thm41_conditions(5, 1.0, 1.0, 1e-4, 1e-3).unwrap(), (true, true));
        assert!(!thm41_conditions(3, 2.0, 2.0, 0.3, 0.6).unwrap().0);
        assert_eq!(thm41_conditions(2, 8.0, 0.2, 0.1, 0.6).unwrap(), (true, true));
    }

    #[test]
    fn cor41_values() {
        assert!(!cor41_conditions(1.0, 0.5, 1.0).unwrap());
        assert!(!cor41_conditions(1.0, 0.5, 2.5).unwrap());
        assert!(cor41_conditions(3.0, 0.5, 1.0).unwrap());
        assert!(cor41_conditions(1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn closed_forms_agree() {
        for &a in &[1.0, 0.5] {
            for i in 1..20 {
                let p_bar = 0.5 + 0.025 * f64::from(i);
                let generic = max_risk_diff_symmetric_n1(a, p_bar).unwrap();
                let closed = max_risk_diff_symmetric_n1_closed(a, p_bar).unwrap().unwrap();
                assert!((generic - closed).abs() < 1e-10, "a = {a}, p̄ = {p_bar}: {generic} vs {closed}");
            }
        }
        assert!(max_risk_diff_symmetric_n1_closed(2.0, 0.7).unwrap().is_none());
        assert!(max_risk_diff_symmetric_n1(1.0, 0.4).is_err());
    }

    #[test]
    fn max_difference_is_endpoint_value() {
        let (a, p_bar) = (1.5, 0.68);
        let prior = PriorSpec::interval(a, a, 1.0 - p_bar, p_bar).unwrap();
        let t = EstimateTable::bayes(1, &prior).unwrap();
        let u = EstimateTable::bayes(1, &prior.untruncated()).unwrap();
        let at_end = risk_difference(&t, &u, p_bar).unwrap();
        assert!((at_end - max_risk_diff_symmetric_n1(a, p_bar).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn thresholds() {
        // roots of the endpoint risk difference from 30-digit quadrature and bisection
        for (a, target) in [(1.0, 0.725_277_105_279_748), (0.5, 0.780_085_848_204_263)] {
            let root = dominance_threshold_n1(a).unwrap();
            assert!((root - target).abs() < 1e-9, "a = {a}: {root}");
            assert!(max_risk_diff_symmetric_n1(a, root).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn verdicts() {
        let r = exhaustive_dominance_check(1, 1.0, 1.0, Restriction::Upper { p_bar: 0.1 }, 512).unwrap();
        assert_eq!(r.verdict, Verdict::Dominates);
        let r = exhaustive_dominance_check(1, 1.0, 1.0, Restriction::Interval { p_lo: 0.2, p_bar: 0.8 }, 256).unwrap();
        assert_eq!(r.verdict, Verdict::DominatedSomewhere);
        let r = exhaustive_dominance_check(2, 1.0, 1.0, Restriction::Upper { p_bar: 0.8 }, 256).unwrap();
        assert_eq!(r.verdict, Verdict::DominatedSomewhere);
        assert_eq!(r.flags.thm33_necessary, Some(false));
        assert!(r.witness_p > 0.7);
        assert!(exhaustive_dominance_check(1, 1.0, 1.0, Restriction::None, 16).is_err());
    }
}
