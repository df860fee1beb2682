//! `fit` and `test`: estimation on a CSV file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use alasso::dataset::{build_design, read_csv, ColumnMapping, ModelSpec, TimeSeriesDataset};
use alasso::estimators::{adaptive_lasso_fit, fit_path, ols_fit, FitResult, PathOptions, PenaltySpec, SolverOptions};
use alasso::inference::{
    analyze, estimate_moments, lambda0_from_penalty, test_zero, CovarianceKind, InferenceReport, LimitSampler,
    MomentEstimates,
};
use alasso::rng::RNG_IDENTITY;
use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::{snapshot, EstimationArgs, RunArgs};

/// Significance levels behind one, two and three stars.
pub const STAR_LEVELS: [f64; 3] = [0.10, 0.05, 0.01];

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Response column.
    #[arg(long, default_value = "y")]
    pub response: String,
    /// Label column (dates); carried through, never parsed.
    #[arg(long)]
    pub date: Option<String>,
    /// Regressor columns in model order, W block first. Defaults to every
    /// other column in file order.
    #[arg(long, value_delimiter = ',')]
    pub regressors: Option<Vec<String>>,
    /// Autoregressive lags of the response.
    #[arg(long, default_value_t = 1)]
    pub p1: usize,
    /// Contemporaneous regressors; defaults to all regressors not in the X block.
    #[arg(long)]
    pub p2: Option<usize>,
    /// Regressors entering with one lag (the last `p3` regressor columns).
    #[arg(long, default_value_t = 0)]
    pub p3: usize,
    /// Center response and regressors and report the implied intercept.
    #[arg(long)]
    pub intercept: bool,
    /// Fit on regressors scaled to unit root mean square; estimates are
    /// reported on the original scale.
    #[arg(long)]
    pub standardize: bool,
    /// Fixed lambda_n instead of BIC selection.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub estimation: EstimationArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TestArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub estimation: EstimationArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Hypothesised value for every tested coefficient.
    #[arg(long, default_value_t = 0.0)]
    pub theta0: f64,
    /// Coefficient to test (repeatable); all when omitted.
    #[arg(long = "coef")]
    pub coefficients: Vec<String>,
    /// Also simulate the penalty-specific critical value with this many draws.
    #[arg(long)]
    pub limit_draws: Option<usize>,
    /// Seed for the simulated critical values; falls back to $ALASSO_SEED, then 1.
    #[arg(long, env = "ALASSO_SEED", default_value_t = 1)]
    pub seed: u64,
}

/// Resolved configuration of a `fit` or `test` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub tool_version: String,
    pub rng: String,
    pub data: PathBuf,
    pub alpha: f64,
    pub grid_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub bias_correction: bool,
    pub covariance: CovarianceKind,
    pub standardize: bool,
    pub mapping: ColumnMapping,
    pub model: ModelSpec,
    pub solver: SolverOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test: Option<TestSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSection {
    pub theta0: f64,
    pub coefficients: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_draws: Option<usize>,
    pub seed: u64,
}

impl FitConfig {
    /// Resolves flags; `p2` defaults to the regressor count minus `p3`, which
    /// needs the file header.
    pub fn from_args(data: &DataArgs, est: &EstimationArgs) -> Result<Self> {
        est.check()?;
        let path = data
            .data
            .clone()
            .ok_or_else(|| CliError::Usage("--data is required unless --config is given".into()))?;
        let mapping = ColumnMapping {
            date: data.date.clone(),
            response: data.response.clone(),
            regressors: data.regressors.clone(),
        };
        let p2 = match data.p2 {
            Some(p2) => p2,
            None => {
                let available = read_csv(&path, &mapping)?.columns.len();
                available.checked_sub(data.p3).ok_or_else(|| {
                    CliError::Usage(format!("--p3 {} exceeds the {available} regressor columns", data.p3))
                })?
            }
        };
        if let Some(l) = data.lambda {
            if !(l >= 0.0 && l.is_finite()) {
                return Err(CliError::Usage(format!("--lambda {l} must be finite and non-negative")));
            }
        }
        Ok(FitConfig {
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            rng: RNG_IDENTITY.to_owned(),
            data: path,
            alpha: est.alpha,
            grid_size: est.grid_size,
            lambda: data.lambda,
            bias_correction: !est.no_bias_correction,
            covariance: est.covariance(),
            standardize: data.standardize,
            mapping,
            model: ModelSpec::new(data.p1, p2, data.p3).with_intercept(data.intercept),
            solver: SolverOptions::default(),
            test: None,
        })
    }
}

/// How `lambda_n` was chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaChoice {
    Bic { grid_size: usize, upper: f64 },
    Fixed,
}

/// A fitted model with inference on the scale the fit was computed on.
#[derive(Debug, Clone)]
pub struct Estimate {
    pub design: TimeSeriesDataset,
    /// Data the fit ran on (standardized when requested).
    pub work: TimeSeriesDataset,
    /// Column scales; all ones without standardization.
    pub scales: Vec<f64>,
    pub fit: FitResult,
    pub ols: FitResult,
    pub lambda: f64,
    pub choice: LambdaChoice,
    pub full_moments: MomentEstimates,
    pub inference: InferenceReport,
}

impl Estimate {
    pub fn penalty(&self) -> &PenaltySpec {
        self.fit.penalty.as_ref().expect("adaptive-lasso fits carry their penalty")
    }

    /// Coefficients on the original regressor scale.
    pub fn theta(&self) -> Vec<f64> {
        self.fit.theta.iter().zip(&self.scales).map(|(t, s)| t / s).collect()
    }

    pub fn intercept(&self) -> Option<f64> {
        let theta = nalgebra::DVector::from_vec(self.theta());
        self.design.centering.as_ref().map(|c| c.intercept(&theta))
    }
}

pub fn estimate(cfg: &FitConfig) -> Result<Estimate> {
    let raw = read_csv(&cfg.data, &cfg.mapping)?;
    let mut design = build_design(&raw, &cfg.model)?;
    design.origin = cfg.data.display().to_string();
    let (work, scales) = if cfg.standardize {
        design.standardized()
    } else {
        let p = design.p();
        (design.clone(), vec![1.0; p])
    };
    let (fit, ols, lambda, choice) = match cfg.lambda {
        None => {
            let path = fit_path(
                &work,
                &PathOptions {
                    grid_size: cfg.grid_size,
                    solver: cfg.solver,
                },
            )?;
            let upper = *path.grid.last().expect("grid has at least two points");
            log::info!("BIC selected lambda_n = {} of [0, {upper}]", path.selected_lambda());
            (
                path.selected().clone(),
                path.ols.clone(),
                path.selected_lambda(),
                LambdaChoice::Bic {
                    grid_size: cfg.grid_size,
                    upper,
                },
            )
        }
        Some(lambda) => {
            let ols = ols_fit(&work)?;
            let penalty = PenaltySpec::from_pilot(lambda, &ols.theta);
            let fit = adaptive_lasso_fit(&work, &penalty, &ols.theta, cfg.solver)?;
            (fit, ols, lambda, LambdaChoice::Fixed)
        }
    };
    let full_moments = estimate_moments(&work, &ols.residuals, cfg.covariance)?;
    let inference = analyze(&work, &fit, &ols, cfg.alpha, cfg.bias_correction, cfg.covariance)?;
    Ok(Estimate {
        design,
        work,
        scales,
        fit,
        ols,
        lambda,
        choice,
        full_moments,
        inference,
    })
}

fn stars(fit: &FitResult, moments: &MomentEstimates, i: usize) -> Result<String> {
    let mut count = 0;
    for level in STAR_LEVELS {
        if test_zero(fit, moments, 0.0, i, level)?.reject {
            count += 1;
        }
    }
    Ok("*".repeat(count))
}

/// One line of the coefficient report, on the original regressor scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientLine {
    pub name: String,
    pub active: bool,
    pub al_estimate: f64,
    pub al_stars: String,
    pub std_error: f64,
    pub ls_estimate: f64,
    pub ls_stars: String,
    pub test_stat: f64,
    pub critical_value: f64,
    pub reject: bool,
    pub ci_lower: Option<f64>,
    pub ci_center: Option<f64>,
    pub ci_upper: Option<f64>,
}

/// Drops the sign of zero so that `-0.0` never reaches the output.
fn clean(x: f64) -> f64 {
    x + 0.0
}

pub fn coefficient_lines(est: &Estimate) -> Result<Vec<CoefficientLine>> {
    est.inference
        .rows
        .iter()
        .map(|row| {
            let i = row.index;
            let s = est.scales[i];
            Ok(CoefficientLine {
                name: row.name.clone(),
                active: est.fit.is_active(i),
                al_estimate: clean(row.estimate / s),
                al_stars: stars(&est.fit, &est.full_moments, i)?,
                std_error: row.test.std_error / s,
                ls_estimate: clean(row.ols_estimate / s),
                ls_stars: stars(&est.ols, &est.full_moments, i)?,
                test_stat: row.test.test_stat / s,
                critical_value: row.test.critical_value / s,
                reject: row.test.reject,
                ci_lower: row.interval.map(|c| c.lower / s),
                ci_center: row.interval.map(|c| c.center / s),
                ci_upper: row.interval.map(|c| c.upper / s),
            })
        })
        .collect()
}

/// Left-aligns the first column and right-aligns the rest.
pub(crate) fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, s)| {
                if j == 0 {
                    format!("{s:<w$}", w = widths[j])
                } else {
                    format!("{s:>w$}", w = widths[j])
                }
            })
            .collect();
        out.push_str(cells.join("   ").trim_end());
        out.push('\n');
    }
    out
}

fn header(cfg: &FitConfig, est: &Estimate) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "data: {}  response: {}  n = {}  p = {}",
        cfg.data.display(),
        cfg.mapping.response,
        est.work.n(),
        est.work.p()
    );
    match est.choice {
        LambdaChoice::Bic { grid_size, upper } => {
            let _ = writeln!(
                out,
                "lambda_n = {:.6} (BIC over {grid_size} points on [0, {upper:.6}])",
                est.lambda
            );
        }
        LambdaChoice::Fixed => {
            let _ = writeln!(out, "lambda_n = {:.6} (fixed)", est.lambda);
        }
    }
    let covariance = match cfg.covariance {
        CovarianceKind::Robust => "robust",
        CovarianceKind::Classical => "classical",
    };
    let _ = writeln!(
        out,
        "covariance: {covariance}  standardized: {}  alpha = {}",
        if cfg.standardize { "yes" } else { "no" },
        cfg.alpha
    );
    if let Some(b) = est.intercept() {
        let _ = writeln!(out, "intercept: {b:.6}");
    }
    let _ = writeln!(out, "active set: {} of {}", est.fit.active_set.len(), est.work.p());
    if !est.fit.converged {
        let _ = writeln!(out, "warning: the selected fit did not converge");
    }
    out
}

pub fn render_fit_report(cfg: &FitConfig, est: &Estimate, lines: &[CoefficientLine]) -> String {
    let mut out = String::from("Adaptive lasso estimates\n");
    out.push_str(&header(cfg, est));
    out.push('\n');
    let mut rows = vec![vec![
        "Variable".to_owned(),
        "AL estimate".to_owned(),
        "Std. error".to_owned(),
        "LS estimate".to_owned(),
    ]];
    for l in lines {
        rows.push(vec![
            l.name.clone(),
            format!("{:.6}{:<3}", l.al_estimate, l.al_stars),
            format!("{:.6}", l.std_error),
            format!("{:.6}{:<3}", l.ls_estimate, l.ls_stars),
        ]);
    }
    out.push_str(&align(&rows));
    out.push_str("*, ** and *** mark significance at the 10%, 5% and 1% levels.\n");
    let active: Vec<&CoefficientLine> = lines.iter().filter(|l| l.active).collect();
    if !active.is_empty() {
        let _ = writeln!(
            out,
            "\n{}% confidence intervals ({})",
            100.0 * (1.0 - cfg.alpha),
            if cfg.bias_correction { "bias-corrected" } else { "uncorrected" }
        );
        let mut rows = vec![vec![
            "Variable".to_owned(),
            "lower".to_owned(),
            "center".to_owned(),
            "upper".to_owned(),
        ]];
        for l in active {
            let f = |x: Option<f64>| format!("{:.6}", x.unwrap_or(f64::NAN));
            rows.push(vec![l.name.clone(), f(l.ci_lower), f(l.ci_center), f(l.ci_upper)]);
        }
        out.push_str(&align(&rows));
    }
    out
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| alasso::error::Error::Csv(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| alasso::error::Error::Csv(e.to_string()))?;
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn check_csv_rows(path: &Path, expected: usize) -> Result<()> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let got = csv::Reader::from_reader(file).records().filter(|r| r.is_ok()).count();
    if got != expected {
        return Err(CliError::Artifact {
            path: path.to_owned(),
            message: format!("{got} rows read back, expected {expected}"),
        });
    }
    Ok(())
}

fn resolve(run: &RunArgs, make: impl FnOnce() -> Result<FitConfig>) -> Result<FitConfig> {
    match &run.config {
        Some(path) => snapshot::read(path),
        None => make(),
    }
}

fn finish(est: &Estimate) -> Result<()> {
    if est.fit.converged {
        Ok(())
    } else {
        Err(CliError::NotConverged { lambda: est.lambda })
    }
}

pub fn cmd_fit(args: &FitArgs) -> Result<()> {
    let cfg = resolve(&args.run, || FitConfig::from_args(&args.data, &args.estimation))?;
    let out = args.run.out.clone().unwrap_or_else(|| PathBuf::from("runs/fit"));
    let est = estimate(&cfg)?;
    let lines = coefficient_lines(&est)?;
    let report = render_fit_report(&cfg, &est, &lines);
    snapshot::create_dir(&out)?;
    snapshot::write(&out.join("report.txt"), &report)?;
    let csv_path = out.join("coefficients.csv");
    write_csv(&csv_path, &lines)?;
    check_csv_rows(&csv_path, lines.len())?;
    snapshot::write_checked(&out, &cfg)?;
    print!("{report}");
    finish(&est)
}

/// One tested coefficient, on the original regressor scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestLine {
    pub name: String,
    pub estimate: f64,
    pub theta0: f64,
    pub test_stat: f64,
    /// Zero-penalty critical value, valid at any penalty.
    pub critical_value: f64,
    pub reject: bool,
    /// Simulated critical value at this coefficient's own penalty.
    pub critical_value_lambda0: Option<f64>,
    pub reject_lambda0: Option<bool>,
}

pub fn test_lines(cfg: &FitConfig, est: &Estimate) -> Result<Vec<TestLine>> {
    let section = cfg
        .test
        .as_ref()
        .ok_or_else(|| CliError::Usage("configuration has no test section".into()))?;
    let names = &est.work.names;
    let indices: Vec<usize> = if section.coefficients.is_empty() {
        (0..names.len()).collect()
    } else {
        section
            .coefficients
            .iter()
            .map(|c| {
                names.iter().position(|n| n == c).ok_or_else(|| {
                    CliError::Usage(format!("unknown coefficient `{c}`; available: {}", names.join(", ")))
                })
            })
            .collect::<Result<_>>()?
    };
    let limit = match section.limit_draws {
        Some(draws) => {
            let sampler = LimitSampler::new(
                &est.full_moments.c_hat,
                &est.full_moments.omega_hat,
                draws,
                section.seed,
            )?;
            let lambda0 = lambda0_from_penalty(est.penalty(), est.work.n());
            Some(sampler.quantiles(&lambda0, cfg.alpha)?)
        }
        None => None,
    };
    indices
        .into_iter()
        .map(|i| {
            let s = est.scales[i];
            let t = test_zero(&est.fit, &est.full_moments, section.theta0 * s, i, cfg.alpha)?;
            let q = limit.as_ref().map(|q| q[i]);
            Ok(TestLine {
                name: names[i].clone(),
                estimate: clean(t.estimate / s),
                theta0: section.theta0,
                test_stat: t.test_stat / s,
                critical_value: t.critical_value / s,
                reject: t.reject,
                critical_value_lambda0: q.map(|q| q / s),
                reject_lambda0: q.map(|q| t.test_stat > q),
            })
        })
        .collect()
}

pub fn render_test_report(cfg: &FitConfig, est: &Estimate, lines: &[TestLine]) -> String {
    let mut out = String::from("Tests of H0: theta_i = theta0\n");
    out.push_str(&header(cfg, est));
    out.push('\n');
    let with_limit = lines.iter().any(|l| l.critical_value_lambda0.is_some());
    let mut head = vec!["Variable", "estimate", "theta0", "sqrt(n)|est - theta0|", "c0", "reject"];
    if with_limit {
        head.extend(["c_lambda0", "reject_lambda0"]);
    }
    let mut rows = vec![head.into_iter().map(str::to_owned).collect::<Vec<_>>()];
    for l in lines {
        let mut row = vec![
            l.name.clone(),
            format!("{:.6}", l.estimate),
            format!("{}", l.theta0),
            format!("{:.6}", l.test_stat),
            format!("{:.6}", l.critical_value),
            if l.reject { "yes" } else { "no" }.to_owned(),
        ];
        if with_limit {
            row.push(l.critical_value_lambda0.map_or(String::new(), |q| format!("{q:.6}")));
            row.push(match l.reject_lambda0 {
                Some(true) => "yes".to_owned(),
                Some(false) => "no".to_owned(),
                None => String::new(),
            });
        }
        rows.push(row);
    }
    out.push_str(&align(&rows));
    out
}

pub fn cmd_test(args: &TestArgs) -> Result<()> {
    let cfg = resolve(&args.run, || {
        let mut cfg = FitConfig::from_args(&args.data, &args.estimation)?;
        if args.limit_draws == Some(0) {
            return Err(CliError::Usage("--limit-draws must be positive".into()));
        }
        cfg.test = Some(TestSection {
            theta0: args.theta0,
            coefficients: args.coefficients.clone(),
            limit_draws: args.limit_draws,
            seed: args.seed,
        });
        Ok(cfg)
    })?;
    let out = args.run.out.clone().unwrap_or_else(|| PathBuf::from("runs/test"));
    let est = estimate(&cfg)?;
    let lines = test_lines(&cfg, &est)?;
    let report = render_test_report(&cfg, &est, &lines);
    snapshot::create_dir(&out)?;
    snapshot::write(&out.join("report.txt"), &report)?;
    let csv_path = out.join("tests.csv");
    write_csv(&csv_path, &lines)?;
    check_csv_rows(&csv_path, lines.len())?;
    snapshot::write_checked(&out, &cfg)?;
    print!("{report}");
    finish(&est)
}
