//! Bayes estimators and Bayesian predictive densities for the binomial model
//! when the success probability is known to lie in `(0, p̄]` or `[p̲, p̄]`,
//! with exact risk evaluation under entropy loss and Kullback-Leibler loss.

pub mod binomial;
pub mod cli;
pub mod dominance;
pub mod error;
pub mod estimators;
pub mod incbeta;
mod numeric;
pub mod poisson;
pub mod predictive;
pub mod risk;

pub use binomial::{binom_pmf, entropy_loss, kl_binomial, BinomialSetup, LossValue, PriorSpec, Restriction};
pub use error::{Error, Result};
pub use estimators::{posterior_mean, EstimateTable};
pub use predictive::PredictiveTable;
