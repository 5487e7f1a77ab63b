//! Bayesian predictive densities and plug-in densities for `Y ~ Bin(l, p)`.

use crate::binomial::{BinomialSetup, LnBinomialCoefficients, PriorSpec};
use crate::error::{Error, Result};
use crate::estimators::EstimateTable;

/// Predictive density of the future count given one observed count.
///
/// Stored as `ln f̂(y; x) − ln C(l, y)`, the log of the part that depends on the
/// parameter, so that KL sums cancel the binomial coefficients exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictiveTable {
    setup: BinomialSetup,
    prior: Option<PriorSpec>,
    x: u32,
    ln_kernel: Vec<f64>,
    ln_coef: LnBinomialCoefficients,
}

impl PredictiveTable {
    /// Bayesian predictive density `E[f(y | l, p) | x]` under `prior`.
    pub fn bayes(x: u32, setup: BinomialSetup, prior: &PriorSpec) -> Result<Self> {
        if x > setup.n {
            return Err(Error::domain(format!("x = {x} outside 0..={}", setup.n)));
        }
        let (s, f) = (x, setup.n - x);
        let ln_kernel = (0..=setup.l)
            .map(|y| prior.ln_moment_ratio(s, f, y, setup.l - y))
            .collect::<Result<Vec<_>>>()?;
        Ok(PredictiveTable {
            setup,
            prior: Some(*prior),
            x,
            ln_kernel,
            ln_coef: LnBinomialCoefficients::new(setup.l),
        })
    }

    /// Plug-in density `f(· | l, d)` for an estimate `d` obtained from `x`.
    pub fn plug_in(x: u32, setup: BinomialSetup, d: f64) -> Result<Self> {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::domain(format!("estimate must lie in (0, 1), got {d}")));
        }
        let l = setup.l;
        let ln_kernel = (0..=l)
            .map(|y| f64::from(y) * d.ln() + f64::from(l - y) * (-d).ln_1p())
            .collect();
        Ok(PredictiveTable { setup, prior: None, x, ln_kernel, ln_coef: LnBinomialCoefficients::new(l) })
    }

    /// Bayesian predictive tables for every `x = 0..=n`.
    pub fn bayes_all(setup: BinomialSetup, prior: &PriorSpec) -> Result<Vec<Self>> {
        (0..=setup.n).map(|x| Self::bayes(x, setup, prior)).collect()
    }

    /// Plug-in tables built from an estimator's values at every `x`.
    pub fn plug_in_all(setup: BinomialSetup, estimates: &EstimateTable) -> Result<Vec<Self>> {
        if estimates.n() != setup.n {
            return Err(Error::domain("estimator sample size does not match setup"));
        }
        (0..=setup.n).map(|x| Self::plug_in(x, setup, estimates.value(x))).collect()
    }

    pub fn setup(&self) -> BinomialSetup {
        self.setup
    }

    pub fn prior(&self) -> Option<&PriorSpec> {
        self.prior.as_ref()
    }

    pub fn x(&self) -> u32 {
        self.x
    }

    /// `ln f̂(y; x) − ln C(l, y)`.
    pub fn ln_kernel(&self, y: u32) -> f64 {
        self.ln_kernel[y as usize]
    }

    pub fn ln_density(&self, y: u32) -> f64 {
        self.ln_coef.ln_coefficient(y) + self.ln_kernel[y as usize]
    }

    pub fn density(&self, y: u32) -> f64 {
        self.ln_density(y).exp()
    }

    pub fn densities(&self) -> Vec<f64> {
        (0..=self.setup.l).map(|y| self.density(y)).collect()
    }
}

/// `f̂(y; x)` for the Bayesian predictive density of `prior`.
pub fn bayes_predictive(y: u32, x: u32, setup: BinomialSetup, prior: &PriorSpec) -> Result<f64> {
    if y > setup.l {
        return Err(Error::domain(format!("y = {y} outside 0..={}", setup.l)));
    }
    Ok(PredictiveTable::bayes(x, setup, prior)?.density(y))
}

/// `f(y | l, d)`.
pub fn plug_in_density(y: u32, l: u32, d: f64) -> Result<f64> {
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::domain(format!("estimate must lie in (0, 1), got {d}")));
    }
    if y > l {
        return Err(Error::domain(format!("y = {y} outside 0..={l}")));
    }
    crate::binomial::binom_pmf(y, l, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::posterior_mean;
    use binrestrict_oracle::beta_interval;

    #[test]
    fn uniform_one_step() {
        let setup = BinomialSetup::new(1, 1).unwrap();
        let prior = PriorSpec::unrestricted(1.0, 1.0).unwrap();
        assert!((bayes_predictive(1, 1, setup, &prior).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((bayes_predictive(0, 1, setup, &prior).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn truncated_matches_quadrature() {
        let setup = BinomialSetup::new(2, 2).unwrap();
        let prior = PriorSpec::upper(1.0, 1.0, 0.5).unwrap();
        // posterior ∝ p(1−p) on [0, ½]; the numerator kernel is p^{y+1}(1−p)^{3−y}
        let z = beta_interval(2.0, 2.0, 0.0, 0.5);
        let coef = [1.0, 2.0, 1.0];
        for y in 0..=2u32 {
            let expected = coef[y as usize] * beta_interval(f64::from(y) + 2.0, 4.0 - f64::from(y), 0.0, 0.5) / z;
            let v = bayes_predictive(y, 1, setup, &prior).unwrap();
            assert!((v / expected - 1.0).abs() < 1e-12, "y = {y}: {v} vs {expected}");
        }
    }

    #[test]
    fn normalized_for_every_prior() {
        let setup = BinomialSetup::new(5, 4).unwrap();
        for prior in [
            PriorSpec::unrestricted(0.5, 2.0).unwrap(),
            PriorSpec::upper(2.0, 0.5, 0.3).unwrap(),
            PriorSpec::interval(1.0, 1.0, 0.1, 0.4).unwrap(),
        ] {
            for x in 0..=5 {
                let t = PredictiveTable::bayes(x, setup, &prior).unwrap();
                let total: f64 = t.densities().iter().sum();
                assert!((total - 1.0).abs() < 1e-12);
                assert!(t.densities().iter().all(|d| *d > 0.0));
            }
        }
    }

    #[test]
    fn one_step_is_posterior_mean() {
        let setup = BinomialSetup::new(4, 1).unwrap();
        let prior = PriorSpec::interval(0.5, 0.5, 0.2, 0.7).unwrap();
        for x in 0..=4 {
            let v = bayes_predictive(1, x, setup, &prior).unwrap();
            assert!((v - posterior_mean(x, 4, &prior).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn plug_in_values() {
        assert!((plug_in_density(0, 1, 0.5).unwrap() - 0.5).abs() < 1e-16);
        assert!((plug_in_density(2, 2, 0.3).unwrap() - 0.09).abs() < 1e-15);
        let total: f64 = (0..=7).map(|y| plug_in_density(y, 7, 0.37).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-14);
        assert!(plug_in_density(0, 1, 1.0).is_err());
    }

    #[test]
    fn predictive_is_not_binomial() {
        // For l = 2 the two successive pmf ratios of a binomial pmf pin down d
        // twice; the beta-binomial gives inconsistent answers.
        let setup = BinomialSetup::new(3, 2).unwrap();
        let prior = PriorSpec::unrestricted(1.0, 1.0).unwrap();
        let f = PredictiveTable::bayes(1, setup, &prior).unwrap().densities();
        // f1/f0 = 2 d/(1−d), f2/f1 = d/(2(1−d))
        let odds_a = f[1] / f[0] / 2.0;
        let odds_b = 2.0 * f[2] / f[1];
        assert!((odds_a - odds_b).abs() > 1e-3);
    }
}
