//! Binomial model primitives: pmf, entropy loss, KL divergence, and the
//! descriptors for trial counts and beta priors.

use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::incbeta::{ln_beta, ln_beta_interval, SINGULAR_MARGIN};

/// Current and future trial counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinomialSetup {
    pub n: u32,
    pub l: u32,
}

impl BinomialSetup {
    pub fn new(n: u32, l: u32) -> Result<Self> {
        if n < 1 || l < 1 {
            return Err(Error::domain(format!("need n >= 1 and l >= 1, got n = {n}, l = {l}")));
        }
        Ok(BinomialSetup { n, l })
    }

    /// Setup with a single future trial.
    pub fn current(n: u32) -> Result<Self> {
        Self::new(n, 1)
    }
}

/// Support restriction of the prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Restriction {
    None,
    Upper { p_bar: f64 },
    Interval { p_lo: f64, p_bar: f64 },
}

impl Restriction {
    pub fn validate(&self) -> Result<()> {
        let check_bar = |p_bar: f64| {
            if !(p_bar > 0.0 && p_bar < 1.0) {
                Err(Error::domain(format!("p_bar must lie in (0, 1), got {p_bar}")))
            } else if 1.0 - p_bar < SINGULAR_MARGIN {
                Err(Error::Overflow(format!("p_bar = {p_bar} is too close to 1")))
            } else {
                Ok(())
            }
        };
        match *self {
            Restriction::None => Ok(()),
            Restriction::Upper { p_bar } => check_bar(p_bar),
            Restriction::Interval { p_lo, p_bar } => {
                check_bar(p_bar)?;
                if p_lo > 0.0 && p_lo < p_bar {
                    Ok(())
                } else {
                    Err(Error::domain(format!("need 0 < p_lo < p_bar, got p_lo = {p_lo}, p_bar = {p_bar}")))
                }
            }
        }
    }

    /// Closure of the parameter region as `(lower, upper)`.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Restriction::None => (0.0, 1.0),
            Restriction::Upper { p_bar } => (0.0, p_bar),
            Restriction::Interval { p_lo, p_bar } => (p_lo, p_bar),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Restriction::None => "none".to_string(),
            Restriction::Upper { p_bar } => format!("upper({p_bar})"),
            Restriction::Interval { p_lo, p_bar } => format!("interval({p_lo},{p_bar})"),
        }
    }
}

/// Beta prior `p^{a−1}(1−p)^{b−1}`, possibly truncated to a subinterval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorSpec {
    pub a: f64,
    pub b: f64,
    pub restriction: Restriction,
}

impl PriorSpec {
    pub fn new(a: f64, b: f64, restriction: Restriction) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
            return Err(Error::domain(format!("prior exponents must be positive, got a = {a}, b = {b}")));
        }
        restriction.validate()?;
        Ok(PriorSpec { a, b, restriction })
    }

    pub fn unrestricted(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, Restriction::None)
    }

    pub fn upper(a: f64, b: f64, p_bar: f64) -> Result<Self> {
        Self::new(a, b, Restriction::Upper { p_bar })
    }

    pub fn interval(a: f64, b: f64, p_lo: f64, p_bar: f64) -> Result<Self> {
        Self::new(a, b, Restriction::Interval { p_lo, p_bar })
    }

    /// The same exponents without the truncation.
    pub fn untruncated(&self) -> Self {
        PriorSpec { restriction: Restriction::None, ..*self }
    }

    /// `ln ∫ p^{s+a−1} (1−p)^{f+b−1} dp` over the prior's support.
    pub fn ln_kernel_integral(&self, successes: f64, failures: f64) -> Result<f64> {
        let (alpha, beta) = (successes + self.a, failures + self.b);
        match self.restriction {
            Restriction::None => Ok(ln_beta(alpha, beta)),
            Restriction::Upper { p_bar } => ln_beta_interval(alpha, beta, 0.0, p_bar),
            Restriction::Interval { p_lo, p_bar } => ln_beta_interval(alpha, beta, p_lo, p_bar),
        }
    }

    /// Log of the posterior moment `E[p^{ds} (1−p)^{df} | s successes, f failures]`.
    ///
    /// The untruncated case is the exact rising-factorial ratio of beta
    /// functions, accumulated term by term.
    pub fn ln_moment_ratio(&self, successes: u32, failures: u32, ds: u32, df: u32) -> Result<f64> {
        let (s, f) = (f64::from(successes), f64::from(failures));
        match self.restriction {
            Restriction::None => {
                let (alpha, beta) = (s + self.a, f + self.b);
                let up: f64 = (0..ds).map(|j| (alpha + f64::from(j)).ln()).sum::<f64>()
                    + (0..df).map(|k| (beta + f64::from(k)).ln()).sum::<f64>();
                let down: f64 = (0..ds + df).map(|m| (alpha + beta + f64::from(m)).ln()).sum();
                Ok(up - down)
            }
            _ => Ok(self.ln_kernel_integral(s + f64::from(ds), f + f64::from(df))?
                - self.ln_kernel_integral(s, f)?),
        }
    }
}

/// Entropy loss in nats.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LossValue(pub f64);

impl LossValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// `ln C(n, x)` for `x = 0..=n`, built once per `n` from log-gamma differences.
#[derive(Debug, Clone, PartialEq)]
pub struct LnBinomialCoefficients {
    n: u32,
    ln_coef: Vec<f64>,
}

impl LnBinomialCoefficients {
    pub fn new(n: u32) -> Self {
        let ln_n = ln_factorial(u64::from(n));
        let ln_coef = (0..=n)
            .map(|x| ln_n - ln_factorial(u64::from(x)) - ln_factorial(u64::from(n - x)))
            .collect();
        LnBinomialCoefficients { n, ln_coef }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ln_coefficient(&self, x: u32) -> f64 {
        self.ln_coef[x as usize]
    }

    /// `ln f(x | n, p)`, with `0⁰ = 1` at the endpoints.
    pub fn ln_pmf(&self, x: u32, p: f64) -> f64 {
        let (k, m) = (f64::from(x), f64::from(self.n - x));
        let success = if x == 0 { 0.0 } else { k * p.ln() };
        let failure = if x == self.n { 0.0 } else { m * (-p).ln_1p() };
        self.ln_coef[x as usize] + success + failure
    }

    /// The whole pmf row `f(0 | n, p), …, f(n | n, p)`.
    pub fn pmf_row(&self, p: f64) -> Vec<f64> {
        (0..=self.n).map(|x| self.ln_pmf(x, p).exp()).collect()
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie in [0, 1], got {p}")))
    }
}

/// `C(n, x) pˣ (1−p)^{n−x}`.
pub fn binom_pmf(x: u32, n: u32, p: f64) -> Result<f64> {
    check_probability("p", p)?;
    if x > n {
        return Err(Error::domain(format!("x = {x} outside 0..={n}")));
    }
    Ok(LnBinomialCoefficients::new(n).ln_pmf(x, p).exp())
}

/// `L(d, p) = p log(p/d) + (1−p) log((1−p)/(1−d))` with `0 log 0 = 0`.
pub fn entropy_loss(d: f64, p: f64) -> Result<LossValue> {
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::domain(format!("estimate d must lie in (0, 1), got {d}")));
    }
    check_probability("p", p)?;
    let success = if p == 0.0 { 0.0 } else { p * (p.ln() - d.ln()) };
    let failure = if p == 1.0 { 0.0 } else { (1.0 - p) * ((-p).ln_1p() - (-d).ln_1p()) };
    Ok(LossValue((success + failure).max(0.0)))
}

/// KL divergence from `Bin(l, p)` to `Bin(l, q)`, i.e. `l · L(q, p)`.
pub fn kl_binomial(l: u32, p: f64, q: f64) -> Result<f64> {
    if l < 1 {
        return Err(Error::domain("l must be at least 1"));
    }
    Ok(f64::from(l) * entropy_loss(q, p)?.value())
}
