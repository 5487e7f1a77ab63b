//! Poisson analogues of the binomial procedures under gamma-type priors
//! `λ^{a−1}` (optionally truncated to `(0, λ̄]`), and a numerical check that
//! the scaled binomial quantities approach them as `n → ∞`, `p → 0`.

use rayon::prelude::*;
use statrs::function::factorial::ln_factorial;
use libm::lgamma as ln_gamma;
use statrs::function::gamma::gamma_lr;

use crate::binomial::{BinomialSetup, PriorSpec};
use crate::error::{Error, Result};
use crate::estimators::{posterior_mean, EstimateTable};
use crate::numeric::weighted_sum;
use crate::predictive::PredictiveTable;
use crate::risk::point_risk;

/// Remaining Poisson mass at which infinite sums stop.
const TAIL_MASS: f64 = 1e-15;
const SERIES_REL_TOL: f64 = 1e-17;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonConfig {
    /// Current exposure.
    pub r: f64,
    /// Future exposure.
    pub s: f64,
    pub a: f64,
    pub lambda_bar: Option<f64>,
}

impl PoissonConfig {
    pub fn new(r: f64, s: f64, a: f64, lambda_bar: Option<f64>) -> Result<Self> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !(ok(r) && ok(s) && ok(a)) {
            return Err(Error::domain(format!("need r, s, a > 0, got r = {r}, s = {s}, a = {a}")));
        }
        if let Some(lb) = lambda_bar {
            if !ok(lb) {
                return Err(Error::domain(format!("lambda_bar must be positive, got {lb}")));
            }
        }
        Ok(PoissonConfig { r, s, a, lambda_bar })
    }

    fn validate(&self) -> Result<()> {
        Self::new(self.r, self.s, self.a, self.lambda_bar).map(|_| ())
    }
}

/// `ln γ(s, x) = ln ∫₀ˣ t^{s−1} e^{−t} dt`.
///
/// Below `x = s + 1` the power series is summed with its prefactor kept in log
/// form, so tiny values do not underflow; above it the regularized function
/// is close to one and is taken from `statrs`.
pub fn ln_lower_gamma(s: f64, x: f64) -> f64 {
    if x < s + 1.0 {
        // γ(s,x) = xˢ e^{−x} Σ_k x^k / (s (s+1) ⋯ (s+k))
        let mut term = 1.0 / s;
        let mut sum = term;
        let mut k = 1.0;
        while term > sum * SERIES_REL_TOL {
            term *= x / (s + k);
            sum += term;
            k += 1.0;
        }
        s * x.ln() - x + sum.ln()
    } else {
        ln_gamma(s) + gamma_lr(s, x).ln()
    }
}

fn check_count_lambda(lambda: f64, config: &PoissonConfig) -> Result<()> {
    config.validate()?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
    }
    if let Some(lb) = config.lambda_bar {
        if lambda > lb {
            return Err(Error::domain(format!("lambda = {lambda} exceeds lambda_bar = {lb}")));
        }
    }
    Ok(())
}

/// Posterior mean of `λ` given `X̃ = x_tilde ~ Po(rλ)`.
pub fn poisson_posterior_mean(x_tilde: u32, config: &PoissonConfig) -> Result<f64> {
    config.validate()?;
    let shape = f64::from(x_tilde) + config.a;
    match config.lambda_bar {
        None => Ok(shape / config.r),
        Some(lb) => {
            let z = config.r * lb;
            Ok((ln_lower_gamma(shape + 1.0, z) - ln_lower_gamma(shape, z)).exp() / config.r)
        }
    }
}

/// Log predictive probability of `Ỹ = y_tilde ~ Po(sλ)` given `X̃ = x_tilde`.
pub fn ln_poisson_predictive(y_tilde: u32, x_tilde: u32, config: &PoissonConfig) -> Result<f64> {
    config.validate()?;
    let PoissonConfig { r, s, a, lambda_bar } = *config;
    let shape = f64::from(x_tilde) + a;
    let y = f64::from(y_tilde);
    let base = y * s.ln() - ln_factorial(u64::from(y_tilde)) + shape * r.ln() - (y + shape) * (s + r).ln();
    match lambda_bar {
        None => Ok(base + ln_gamma(y + shape) - ln_gamma(shape)),
        Some(lb) => Ok(base + ln_lower_gamma(y + shape, (s + r) * lb) - ln_lower_gamma(shape, r * lb)),
    }
}

/// Predictive probability of `Ỹ = y_tilde` given `X̃ = x_tilde`. Without
/// truncation this is the negative binomial pmf.
pub fn poisson_predictive(y_tilde: u32, x_tilde: u32, config: &PoissonConfig) -> Result<f64> {
    Ok(ln_poisson_predictive(y_tilde, x_tilde, config)?.exp())
}

fn ln_poisson_pmf(k: u32, mean: f64) -> f64 {
    f64::from(k) * mean.ln() - mean - ln_factorial(u64::from(k))
}

/// Counts `0..=k_max` carrying all but `TAIL_MASS` of `Po(mean)`.
fn poisson_support(mean: f64) -> (Vec<f64>, u32) {
    let mut pmf = Vec::new();
    let mut cumulative = 0.0;
    let mut k = 0u32;
    loop {
        let w = ln_poisson_pmf(k, mean).exp();
        pmf.push(w);
        cumulative += w;
        if (k as f64) > mean && 1.0 - cumulative < TAIL_MASS {
            return (pmf, k);
        }
        k += 1;
    }
}

/// `E[λ̂ − λ − λ log(λ̂/λ)]` over `X̃ ~ Po(rλ)` for the posterior mean `λ̂`.
pub fn poisson_entropy_risk(config: &PoissonConfig, lambda: f64) -> Result<f64> {
    check_count_lambda(lambda, config)?;
    let (pmf, k_max) = poisson_support(config.r * lambda);
    let terms = (0..=k_max)
        .map(|x| {
            let est = poisson_posterior_mean(x, config)?;
            let ratio = est / lambda;
            // λ{ratio − 1 − log ratio} ≥ 0
            Ok((pmf[x as usize], (lambda * ((ratio - 1.0) - ratio.ln())).max(0.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(weighted_sum(terms))
}

/// Per-`K` discrepancies between the scaled binomial procedures and their
/// Poisson counterparts.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonLimitReport {
    pub k_grid: Vec<f64>,
    /// `|n p̂(x̃)/r − λ̂(x̃)|`.
    pub estimator_errors: Vec<f64>,
    /// `sup_y |binomial predictive − Poisson predictive|`.
    pub predictive_errors: Vec<f64>,
    /// `|(n/r) R_n − R̃_r|`.
    pub risk_errors: Vec<f64>,
}

impl PoissonLimitReport {
    /// Whether each error family strictly decreases along the grid.
    pub fn is_monotone(&self) -> bool {
        [&self.estimator_errors, &self.predictive_errors, &self.risk_errors]
            .iter()
            .all(|errs| errs.windows(2).all(|w| w[1] < w[0]))
    }
}

/// The binomial problem induced by scale `K`: `n = round(rK)`, `l = round(sK)`,
/// and the prior `π_{a,1}` truncated at `λ̄/K` when `λ̄` is given.
pub fn induced_binomial(k: f64, config: &PoissonConfig) -> Result<(BinomialSetup, PriorSpec)> {
    config.validate()?;
    let n = (config.r * k).round();
    let l = (config.s * k).round();
    if !(n >= 1.0 && l >= 1.0 && n <= f64::from(u32::MAX) && l <= f64::from(u32::MAX)) {
        return Err(Error::domain(format!("scale K = {k} gives trial counts n = {n}, l = {l}")));
    }
    let setup = BinomialSetup::new(n as u32, l as u32)?;
    let prior = match config.lambda_bar {
        None => PriorSpec::unrestricted(config.a, 1.0)?,
        Some(lb) => {
            let p_bar = lb / k;
            if p_bar >= 1.0 {
                return Err(Error::domain(format!("induced p_bar = {p_bar} is not below 1 at K = {k}")));
            }
            PriorSpec::upper(config.a, 1.0, p_bar)?
        }
    };
    Ok((setup, prior))
}

/// Convergence diagnostics along `k_grid` at true rate `lambda`, for the
/// observation `x_tilde`.
pub fn limit_convergence_report(k_grid: &[f64], lambda: f64, config: &PoissonConfig, x_tilde: u32) -> Result<PoissonLimitReport> {
    check_count_lambda(lambda, config)?;
    if k_grid.is_empty() || k_grid.windows(2).any(|w| w[0] >= w[1]) || k_grid[0] <= 0.0 {
        return Err(Error::domain("K grid must be positive and strictly increasing"));
    }
    let poisson_mean = poisson_posterior_mean(x_tilde, config)?;
    let poisson_risk = poisson_entropy_risk(config, lambda)?;
    let rows = k_grid
        .par_iter()
        .map(|&k| {
            let (setup, prior) = induced_binomial(k, config)?;
            let p = lambda / k;
            if p >= 1.0 {
                return Err(Error::domain(format!("induced p = {p} is not below 1 at K = {k}")));
            }
            if x_tilde > setup.n {
                return Err(Error::domain(format!("x_tilde = {x_tilde} exceeds n = {}", setup.n)));
            }
            let n = f64::from(setup.n);
            let est = (n * posterior_mean(x_tilde, setup.n, &prior)? / config.r - poisson_mean).abs();

            let table = PredictiveTable::bayes(x_tilde, setup, &prior)?;
            let mut pred = 0.0_f64;
            for y in 0..=setup.l {
                let diff = (table.density(y) - poisson_predictive(y, x_tilde, config)?).abs();
                pred = pred.max(diff);
            }

            let estimates = EstimateTable::bayes(setup.n, &prior)?;
            let risk = (n / config.r * point_risk(&estimates, p)? - poisson_risk).abs();
            Ok((est, pred, risk))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PoissonLimitReport {
        k_grid: k_grid.to_vec(),
        estimator_errors: rows.iter().map(|r| r.0).collect(),
        predictive_errors: rows.iter().map(|r| r.1).collect(),
        risk_errors: rows.iter().map(|r| r.2).collect(),
    })
}

/// Sanity check used by tests: the induced binomial prior always has `b = 1`.
pub fn induced_b(k: f64, config: &PoissonConfig) -> Result<f64> {
    Ok(induced_binomial(k, config)?.1.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use binrestrict_oracle::gamma_kernel_integral;

    fn cfg(lambda_bar: Option<f64>) -> PoissonConfig {
        PoissonConfig::new(1.0, 1.0, 1.0, lambda_bar).unwrap()
    }

    #[test]
    fn lower_gamma_values() {
        // γ(1, x) = 1 − e^{−x}
        for &x in &[0.01, 0.5, 1.0, 3.0, 10.0] {
            assert!((ln_lower_gamma(1.0, x).exp() / (-(-x).exp_m1()) - 1.0).abs() < 1e-14);
        }
        // γ(½, x) = √π erf(√x), compared with quadrature
        for &(s, x) in &[(0.5, 0.3), (2.5, 4.0), (7.0, 1.0), (30.0, 1.0)] {
            let q = gamma_kernel_integral(s, 1.0, x);
            assert!((ln_lower_gamma(s, x).exp() / q - 1.0).abs() < 1e-12, "s = {s}, x = {x}");
        }
        assert!(ln_lower_gamma(200.0, 1.0).is_finite());
    }

    #[test]
    fn posterior_means() {
        let c = PoissonConfig::new(2.0, 1.0, 1.0, None).unwrap();
        assert_eq!(poisson_posterior_mean(2, &c).unwrap(), 1.5);
        let e = (-1.0f64).exp();
        let expected = (1.0 - 2.0 * e) / (1.0 - e);
        assert!((poisson_posterior_mean(0, &cfg(Some(1.0))).unwrap() - expected).abs() < 1e-15);
        let far = poisson_posterior_mean(3, &cfg(Some(200.0))).unwrap();
        assert!((far - 4.0).abs() < 1e-12);
        for x in 0..10 {
            assert!(poisson_posterior_mean(x, &cfg(Some(1.0))).unwrap() < 1.0);
        }
    }

    #[test]
    fn predictive_normalized() {
        for c in [cfg(None), cfg(Some(1.0)), PoissonConfig::new(1.5, 0.7, 0.5, Some(2.0)).unwrap()] {
            for x in 0..3 {
                let total: f64 = (0..200).map(|y| poisson_predictive(y, x, &c).unwrap()).sum();
                assert!((total - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn predictive_negative_binomial() {
        // a = 1, r = s = 1, x = 2: C(y+2, y) (½)^{y+3}
        let c = cfg(None);
        for y in 0..10u32 {
            let yf = f64::from(y);
            let expected = (yf + 1.0) * (yf + 2.0) / 2.0 * 0.5f64.powi(y as i32 + 3);
            assert!((poisson_predictive(y, 2, &c).unwrap() / expected - 1.0).abs() < 1e-13);
        }
        let tiny = PoissonConfig::new(1.0, 1e-9, 1.0, Some(1.0)).unwrap();
        assert!(poisson_predictive(0, 1, &tiny).unwrap() > 1.0 - 1e-8);
    }

    #[test]
    fn risk_brute_force() {
        // untruncated, a = 1, r = 1: λ̂ = x + 1
        let lambda: f64 = 0.8;
        let mut brute = 0.0;
        let mut pmf = (-lambda).exp();
        for x in 0..80 {
            let est = f64::from(x) + 1.0;
            brute += pmf * (est - lambda - lambda * (est / lambda).ln());
            pmf *= lambda / (f64::from(x) + 1.0);
        }
        assert!((poisson_entropy_risk(&cfg(None), lambda).unwrap() - brute).abs() < 1e-14);
        assert!(poisson_entropy_risk(&cfg(Some(1.0)), 0.5).unwrap() > 0.0);
        assert!(poisson_entropy_risk(&cfg(Some(1.0)), 1.5).is_err());
    }

    #[test]
    fn mapping_forces_b_one() {
        assert_eq!(induced_b(100.0, &cfg(Some(1.0))).unwrap(), 1.0);
        assert_eq!(induced_b(100.0, &cfg(None)).unwrap(), 1.0);
        assert!(induced_binomial(0.5, &cfg(Some(1.0))).is_err());
    }

    #[test]
    fn untruncated_converges() {
        let r = limit_convergence_report(&[10.0, 100.0, 1000.0, 10000.0], 0.5, &cfg(None), 1).unwrap();
        assert!(r.is_monotone(), "{r:?}");
        assert!(r.estimator_errors[3] < 1e-3 && r.predictive_errors[3] < 1e-3 && r.risk_errors[3] < 1e-3);
    }
}
