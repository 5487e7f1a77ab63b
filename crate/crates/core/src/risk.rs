//! Exact risks under entropy loss and KL divergence, the connection formula,
//! a seeded Monte Carlo cross-check, and numerical checks of two auxiliary
//! identities (the second-derivative formula for binomial expectations and
//! the log-Jensen bound).
//!
//! The sample space is finite, so every risk here is an exact sum over
//! outcomes. Sums are accumulated in ascending pmf magnitude with
//! compensation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::binomial::{entropy_loss, BinomialSetup, LnBinomialCoefficients, PriorSpec};
use crate::error::{Error, Result};
use crate::estimators::EstimateTable;
use crate::numeric::{compensated_sum, weighted_sum};
use crate::predictive::PredictiveTable;

fn check_open_unit(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("p must lie in (0, 1), got {p}")))
    }
}

/// `R_n(p, δ) = Σ_x f(x|n,p) L(δ(x), p)`.
pub fn point_risk(estimates: &EstimateTable, p: f64) -> Result<f64> {
    check_open_unit(p)?;
    let pmf = LnBinomialCoefficients::new(estimates.n()).pmf_row(p);
    let terms = estimates
        .values()
        .iter()
        .zip(pmf)
        .map(|(&d, w)| Ok((w, entropy_loss(d, p)?.value())))
        .collect::<Result<Vec<_>>>()?;
    Ok(weighted_sum(terms))
}

/// `R_n(p, δ₁) − R_n(p, δ₂)`, summed per outcome as a difference of logs so
/// that the `p log p` parts cancel exactly.
pub fn risk_difference(first: &EstimateTable, second: &EstimateTable, p: f64) -> Result<f64> {
    check_open_unit(p)?;
    if first.n() != second.n() {
        return Err(Error::domain("estimators have different sample sizes"));
    }
    let pmf = LnBinomialCoefficients::new(first.n()).pmf_row(p);
    let terms = first
        .values()
        .iter()
        .zip(second.values())
        .zip(pmf)
        .map(|((&d1, &d2), w)| {
            let diff = p * (d2.ln() - d1.ln()) + (1.0 - p) * ((-d2).ln_1p() - (-d1).ln_1p());
            (w, diff)
        })
        .collect();
    Ok(weighted_sum(terms))
}

/// `R_{l,n}(p, f̂) = Σ_x Σ_y f(x|n,p) f(y|l,p) log{f(y|l,p) / f̂(y;x)}`.
pub fn predictive_kl_risk(tables: &[PredictiveTable], p: f64, setup: BinomialSetup) -> Result<f64> {
    check_open_unit(p)?;
    if tables.len() != setup.n as usize + 1 {
        return Err(Error::domain(format!("need {} predictive tables, got {}", setup.n + 1, tables.len())));
    }
    let pmf_x = LnBinomialCoefficients::new(setup.n).pmf_row(p);
    let pmf_y = LnBinomialCoefficients::new(setup.l).pmf_row(p);
    let (ln_p, ln_q) = (p.ln(), (-p).ln_1p());
    let mut outer = Vec::with_capacity(tables.len());
    for (table, wx) in tables.iter().zip(pmf_x) {
        if table.setup() != setup {
            return Err(Error::domain("predictive table built for a different setup"));
        }
        let inner = (0..=setup.l)
            .map(|y| {
                let k = table.ln_kernel(y);
                if !k.is_finite() {
                    return Err(Error::domain(format!("predictive density vanishes at y = {y}, x = {}", table.x())));
                }
                let ln_truth = f64::from(y) * ln_p + f64::from(setup.l - y) * ln_q;
                Ok((pmf_y[y as usize], ln_truth - k))
            })
            .collect::<Result<Vec<_>>>()?;
        outer.push((wx, weighted_sum(inner)));
    }
    Ok(weighted_sum(outer))
}

/// `Σ_{i=0}^{l−1} R_{n+i}(p, p̂_{n+i})` for the posterior mean of `prior`.
pub fn connection_sum(p: f64, n: u32, l: u32, prior: &PriorSpec) -> Result<f64> {
    if n < 1 || l < 1 {
        return Err(Error::domain("need n >= 1 and l >= 1"));
    }
    let risks = (0..l)
        .map(|i| point_risk(&EstimateTable::bayes(n + i, prior)?, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(compensated_sum(risks))
}

/// Monte Carlo risk estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Seeded Monte Carlo estimate of [`point_risk`]. A single draw reports an
/// infinite standard error.
pub fn mc_risk(estimates: &EstimateTable, p: f64, sample_count: u64, seed: u64) -> Result<McEstimate> {
    check_open_unit(p)?;
    if sample_count < 1 {
        return Err(Error::domain("sample_count must be at least 1"));
    }
    let losses = estimates
        .values()
        .iter()
        .map(|&d| Ok(entropy_loss(d, p)?.value()))
        .collect::<Result<Vec<_>>>()?;
    let dist = Binomial::new(u64::from(estimates.n()), p).map_err(|e| Error::domain(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Welford
    let (mut mean, mut m2) = (0.0_f64, 0.0_f64);
    for k in 1..=sample_count {
        let loss = losses[dist.sample(&mut rng) as usize];
        let delta = loss - mean;
        mean += delta / k as f64;
        m2 += delta * (loss - mean);
    }
    let std_error = if sample_count == 1 {
        f64::INFINITY
    } else {
        (m2 / (sample_count - 1) as f64 / sample_count as f64).sqrt()
    };
    Ok(McEstimate { estimate: mean, std_error })
}

/// Exact risks of several estimators over a grid of parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskCurve {
    pub p_grid: Vec<f64>,
    pub names: Vec<String>,
    /// `values[k][i]` is the risk of estimator `k` at `p_grid[i]`.
    pub values: Vec<Vec<f64>>,
    pub n: u32,
    pub meta: String,
}

impl RiskCurve {
    pub fn evaluate(p_grid: Vec<f64>, estimators: &[(&str, &EstimateTable)], meta: impl Into<String>) -> Result<Self> {
        if p_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("risk grid must be strictly increasing"));
        }
        let n = estimators.first().map(|(_, t)| t.n()).unwrap_or(0);
        let values = estimators
            .iter()
            .map(|(_, table)| p_grid.par_iter().map(|&p| point_risk(table, p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(RiskCurve {
            p_grid,
            names: estimators.iter().map(|(name, _)| name.to_string()).collect(),
            values,
            n,
            meta: meta.into(),
        })
    }
}

/// Both sides of `(∂/∂p)² {p E_p[φ(X)]} = (1/p) E_p[X{(X+1)φ(X) − 2Xφ(X−1) + (X−1)φ(X−2)}]`.
///
/// The left side is a five-point central difference with spacing `step`;
/// `phi[x]` gives `φ(x)` for `x = 0..=n`.
pub fn verify_second_derivative_identity(phi: &[f64], n: u32, p: f64, step: f64) -> Result<(f64, f64)> {
    if phi.len() != n as usize + 1 {
        return Err(Error::domain(format!("phi must have {} entries", n + 1)));
    }
    if !(step > 0.0) || !(p - 2.0 * step > 0.0 && p + 2.0 * step < 1.0) {
        return Err(Error::domain(format!("stencil around p = {p} with step {step} leaves (0, 1)")));
    }
    let coef = LnBinomialCoefficients::new(n);
    let g = |q: f64| {
        let pmf = coef.pmf_row(q);
        q * weighted_sum(pmf.into_iter().zip(phi.iter().copied()).collect())
    };
    let lhs = (-g(p + 2.0 * step) + 16.0 * g(p + step) - 30.0 * g(p) + 16.0 * g(p - step) - g(p - 2.0 * step))
        / (12.0 * step * step);
    let at = |x: i64| if x < 0 { 0.0 } else { phi[x as usize] };
    let pmf = coef.pmf_row(p);
    let terms = (0..=i64::from(n))
        .map(|x| {
            let xf = x as f64;
            let inner = (xf + 1.0) * at(x) - 2.0 * xf * at(x - 1) + (xf - 1.0) * at(x - 2);
            (pmf[x as usize], xf * inner)
        })
        .collect();
    Ok((lhs, weighted_sum(terms) / p))
}

/// Both sides of `E[log(1−T)] ≤ log(1−μ) − σ²/2` for a discrete `T` on `(0, 1)`.
pub fn verify_log_jensen_bound(support: &[f64], weights: &[f64]) -> Result<(f64, f64)> {
    if support.len() != weights.len() || support.is_empty() {
        return Err(Error::domain("support and weights must be nonempty and of equal length"));
    }
    if let Some(t) = support.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        return Err(Error::domain(format!("support point {t} outside (0, 1)")));
    }
    if weights.iter().any(|w| !(*w >= 0.0)) {
        return Err(Error::domain("weights must be nonnegative"));
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::domain("weights must have positive total"));
    }
    let expect = |f: &dyn Fn(f64) -> f64| {
        compensated_sum(support.iter().zip(weights).map(|(&t, &w)| w / total * f(t)))
    };
    let mean = expect(&|t| t);
    let variance = expect(&|t| (t - mean) * (t - mean));
    if !(variance > 0.0) {
        return Err(Error::domain("distribution must have positive variance"));
    }
    let lhs = expect(&|t| (-t).ln_1p());
    Ok((lhs, (-mean).ln_1p() - 0.5 * variance))
}
