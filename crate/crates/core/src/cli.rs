//! Command-line front end. Every subcommand writes CSV (header row, numbers
//! with 17 significant digits) to `--out` or standard output.
//!
//! Exit status: 0 on success, 1 for usage and validation errors, 2 for
//! numerical failures.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::binomial::{BinomialSetup, PriorSpec, Restriction};
use crate::dominance::{dominance_threshold_n1, exhaustive_dominance_check, max_risk_diff_symmetric_n1, thm32_bound};
use crate::error::{Error, Result};
use crate::estimators::EstimateTable;
use crate::predictive::PredictiveTable;
use crate::poisson::{limit_convergence_report, PoissonConfig};
use crate::risk::{mc_risk, point_risk};

#[derive(Debug, Parser)]
#[command(name = "binrestrict", version, about = "Binomial estimation under a restricted probability parameter")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Posterior-mean estimates for every outcome
    Estimate(RunConfig),
    /// Bayesian predictive and plug-in densities for every (x, y)
    Predictive(RunConfig),
    /// Exact risks of the untruncated and truncated estimators over a grid
    RiskCurve(RunConfig),
    /// Condition flags and grid certification of dominance
    Dominance(RunConfig),
    /// Maximum risk difference for n = 1, a = b, symmetric interval, and its root
    Threshold(RunConfig),
    /// Convergence of scaled binomial procedures to their Poisson analogues
    PoissonLimit(PoissonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Current number of trials
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Future number of trials
    #[arg(long, default_value_t = 1)]
    pub l: u32,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Upper end of the parameter restriction
    #[arg(long)]
    pub p_bar: Option<f64>,
    /// Lower end of the parameter restriction (requires --p-bar)
    #[arg(long)]
    pub p_lo: Option<f64>,
    /// Number of grid points
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Add Monte Carlo columns with this many draws per grid point
    #[arg(long)]
    pub mc_samples: Option<u64>,
    /// Output file (standard output when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn restriction(&self) -> Result<Restriction> {
        let r = match (self.p_lo, self.p_bar) {
            (None, None) => Restriction::None,
            (None, Some(p_bar)) => Restriction::Upper { p_bar },
            (Some(p_lo), Some(p_bar)) => Restriction::Interval { p_lo, p_bar },
            (Some(_), None) => return Err(Error::domain("--p-lo requires --p-bar")),
        };
        r.validate()?;
        Ok(r)
    }

    pub fn prior(&self) -> Result<PriorSpec> {
        PriorSpec::new(self.a, self.b, self.restriction()?)
    }

    fn check_n(&self) -> Result<()> {
        BinomialSetup::new(self.n, self.l).map(|_| ())
    }
}

#[derive(Debug, Clone, Args)]
pub struct PoissonArgs {
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Current exposure
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Future exposure
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    /// True rate
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    /// Truncation point of the rate (untruncated prior when absent)
    #[arg(long)]
    pub lambda_bar: Option<f64>,
    /// Observed counts
    #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
    pub x_tilde: Vec<u32>,
    /// Scales K
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000,10000")]
    pub k_grid: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn open<'w>(out: &Option<PathBuf>, stdout: &'w mut dyn Write) -> Result<Box<dyn Write + 'w>> {
    Ok(match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(stdout),
    })
}

fn write_csv(out: &Option<PathBuf>, stdout: &mut dyn Write, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(open(out, stdout)?);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn run_estimate(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    cfg.check_n()?;
    let prior = cfg.prior()?;
    let plain = EstimateTable::bayes(cfg.n, &prior.untruncated())?;
    let restricted = match prior.restriction {
        Restriction::None => None,
        _ => Some(EstimateTable::bayes(cfg.n, &prior)?),
    };
    let mut header = vec!["x", "unrestricted"];
    if restricted.is_some() {
        header.push("truncated");
    }
    let rows = (0..=cfg.n)
        .map(|x| {
            let mut row = vec![x.to_string(), num(plain.value(x))];
            if let Some(t) = &restricted {
                row.push(num(t.value(x)));
            }
            row
        })
        .collect();
    write_csv(&cfg.out, stdout, &header, rows)
}

pub fn run_predictive(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let setup = BinomialSetup::new(cfg.n, cfg.l)?;
    let prior = cfg.prior()?;
    let bayes = PredictiveTable::bayes_all(setup, &prior)?;
    let plug = PredictiveTable::plug_in_all(setup, &EstimateTable::bayes(cfg.n, &prior)?)?;
    let mut rows = Vec::new();
    for (b, p) in bayes.iter().zip(&plug) {
        for y in 0..=cfg.l {
            rows.push(vec![b.x().to_string(), y.to_string(), num(b.density(y)), num(p.density(y))]);
        }
    }
    write_csv(&cfg.out, stdout, &["x", "y", "bayes", "plug_in"], rows)
}

pub fn run_risk_curve(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    cfg.check_n()?;
    let prior = cfg.prior()?;
    let grid = crate::dominance::restriction_grid(&prior.restriction, cfg.grid)?;
    let truncated = EstimateTable::bayes(cfg.n, &prior)?;
    let plain = EstimateTable::bayes(cfg.n, &prior.untruncated())?;
    let mut header = vec!["p", "risk_unrestricted", "risk_truncated", "thm32_bound"];
    if cfg.mc_samples.is_some() {
        header.extend(["mc_unrestricted", "mc_unrestricted_se", "mc_truncated", "mc_truncated_se"]);
    }
    let mut rows = Vec::with_capacity(grid.len());
    for (i, &p) in grid.iter().enumerate() {
        let bound = match prior.restriction {
            Restriction::Upper { p_bar } => match thm32_bound(p, cfg.n, cfg.a, cfg.b, p_bar) {
                Ok(v) => num(v),
                Err(Error::UndefinedBound { .. }) => String::new(),
                Err(e) => return Err(e),
            },
            _ => String::new(),
        };
        let mut row = vec![num(p), num(point_risk(&plain, p)?), num(point_risk(&truncated, p)?), bound];
        if let Some(samples) = cfg.mc_samples {
            let seed = cfg.seed.wrapping_add(2 * i as u64);
            let u = mc_risk(&plain, p, samples, seed)?;
            let t = mc_risk(&truncated, p, samples, seed.wrapping_add(1))?;
            row.extend([num(u.estimate), num(u.std_error), num(t.estimate), num(t.std_error)]);
        }
        rows.push(row);
    }
    write_csv(&cfg.out, stdout, &header, rows)
}

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "n/a",
    }
}

pub fn run_dominance(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    cfg.check_n()?;
    let restriction = cfg.restriction()?;
    let report = exhaustive_dominance_check(cfg.n, cfg.a, cfg.b, restriction, cfg.grid)?;
    let f = &report.flags;
    writeln!(stdout, "config: n={} a={} b={} restriction={} grid={}", cfg.n, cfg.a, cfg.b, restriction.label(), cfg.grid)?;
    writeln!(stdout, "thm33_necessary: {}", flag(f.thm33_necessary))?;
    writeln!(stdout, "thm34_necessary: {}", flag(f.thm34_necessary))?;
    writeln!(stdout, "thm41_c1: {}", flag(f.thm41_c1))?;
    writeln!(stdout, "thm41_c2: {}", flag(f.thm41_c2))?;
    writeln!(stdout, "smallpbar_sufficient: {}", flag(f.smallpbar_sufficient))?;
    writeln!(stdout, "verdict: {}", report.verdict.label())?;
    writeln!(stdout, "witness_p: {}", num(report.witness_p))?;
    writeln!(stdout, "max_risk_difference: {}", num(report.max_difference))?;
    if cfg.out.is_some() {
        let rows = (0..report.p_grid.len())
            .map(|i| {
                let bound = report.thm32_bound_curve.as_ref().and_then(|c| c[i]).map(num).unwrap_or_default();
                let std = report.standardized_diff_curve.as_ref().map(|c| num(c[i])).unwrap_or_default();
                vec![num(report.p_grid[i]), num(report.risk_difference[i]), bound, std]
            })
            .collect();
        write_csv(&cfg.out, stdout, &["p", "risk_difference", "thm32_bound", "standardized_difference"], rows)?;
    }
    Ok(())
}

pub fn run_threshold(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    if cfg.grid < 2 {
        return Err(Error::domain("--grid must be at least 2"));
    }
    let root = dominance_threshold_n1(cfg.a)?;
    writeln!(stdout, "threshold: a={} p_bar={}", cfg.a, num(root))?;
    let g = cfg.grid as f64;
    let rows = (1..=cfg.grid)
        .map(|i| {
            let p_bar = 0.5 + 0.5 * i as f64 / (g + 1.0);
            Ok(vec![num(p_bar), num(max_risk_diff_symmetric_n1(cfg.a, p_bar)?)])
        })
        .collect::<Result<Vec<_>>>()?;
    write_csv(&cfg.out, stdout, &["p_bar", "max_risk_difference"], rows)
}

pub fn run_poisson_limit(args: &PoissonArgs, stdout: &mut dyn Write) -> Result<()> {
    let config = PoissonConfig::new(args.r, args.s, args.a, args.lambda_bar)?;
    let mut rows = Vec::new();
    for &x in &args.x_tilde {
        let report = limit_convergence_report(&args.k_grid, args.lambda, &config, x)?;
        for (i, &k) in report.k_grid.iter().enumerate() {
            rows.push(vec![
                x.to_string(),
                num(k),
                num(report.estimator_errors[i]),
                num(report.predictive_errors[i]),
                num(report.risk_errors[i]),
            ]);
        }
    }
    write_csv(&args.out, stdout, &["x_tilde", "k", "estimator_error", "predictive_error", "risk_error"], rows)
}

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        2
    } else {
        1
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render().ansi());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Estimate(c) => run_estimate(c, stdout),
        Command::Predictive(c) => run_predictive(c, stdout),
        Command::RiskCurve(c) => run_risk_curve(c, stdout),
        Command::Dominance(c) => run_dominance(c, stdout),
        Command::Threshold(c) => run_threshold(c, stdout),
        Command::PoissonLimit(c) => run_poisson_limit(c, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs with the process arguments and standard streams.
pub fn main_exit_code() -> i32 {
    let (stdout, stderr) = (io::stdout(), io::stderr());
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    run(std::env::args_os(), &mut out, &mut err)
}
