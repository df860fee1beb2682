//! Monte Carlo engine: replicate simulate → fit → inference and tabulate
//! empirical coverages and rejection frequencies.
//!
//! Replication `r` draws its data from substream `r` of the design seed, so
//! the same seed pairs replications across sample sizes and the summary does
//! not depend on the number of worker threads. Counts are integers until the
//! final division.
//!
//! The BIC variant and grid are not pinned down by the reference tables; the
//! choices used here (`n ln(RSS/n) + |A| ln n` over a uniform grid on
//! `[0, n^(1/4)]`) are recorded in every run snapshot.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dgp::{simulate_stream, DgpConfig};
use crate::error::{Error, Result};
use crate::estimators::{fit_path, PathOptions};
use crate::inference::{
    bias_correction, confidence_interval_for, estimate_moments, test_zero, CovarianceKind,
};
use crate::rng::RNG_IDENTITY;

/// Which interval variants to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BiasMode {
    #[default]
    Both,
    On,
    Off,
}

impl BiasMode {
    fn with(self) -> bool {
        self != BiasMode::Off
    }

    fn without(self) -> bool {
        self != BiasMode::On
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McExperiment {
    pub dgp: DgpConfig,
    pub replications: usize,
    pub alpha: f64,
    pub grid_size: usize,
    pub bias_correction: BiasMode,
    #[serde(default)]
    pub covariance: CovarianceKind,
}

impl McExperiment {
    /// `alpha = 0.05`, 100 grid points, both interval variants, robust covariance.
    pub fn new(dgp: DgpConfig, replications: usize) -> Self {
        McExperiment {
            dgp,
            replications,
            alpha: 0.05,
            grid_size: PathOptions::default().grid_size,
            bias_correction: BiasMode::Both,
            covariance: CovarianceKind::Robust,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidSpec("at least one replication is required".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidSpec(format!("alpha = {} outside (0, 1)", self.alpha)));
        }
        if self.grid_size < 2 {
            return Err(Error::InvalidSpec(format!("grid_size = {} < 2", self.grid_size)));
        }
        self.dgp.validate()
    }

    /// Truly nonzero coefficients with their values.
    pub fn coverage_targets(&self) -> Vec<(usize, f64)> {
        self.dgp
            .true_active()
            .into_iter()
            .map(|i| (i, self.dgp.theta_true[i]))
            .collect()
    }

    fn path_options(&self) -> PathOptions {
        PathOptions {
            grid_size: self.grid_size,
            ..PathOptions::default()
        }
    }
}

/// A frequency as an exact count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub hits: usize,
    pub total: usize,
}

impl Cell {
    pub fn frequency(&self) -> f64 {
        self.hits as f64 / self.total as f64
    }

    /// `sqrt(f (1 - f) / N)`.
    pub fn std_error(&self) -> f64 {
        let f = self.frequency();
        (f * (1.0 - f) / self.total as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSummary {
    pub index: usize,
    pub name: String,
    /// `rho`, `gamma` or `beta`.
    pub block: String,
    pub true_value: f64,
    /// Present for truly nonzero coefficients when that variant was run.
    pub coverage_without_bias: Option<Cell>,
    pub coverage_with_bias: Option<Cell>,
    pub rejection: Cell,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub n: usize,
    pub alpha: f64,
    pub requested: usize,
    pub completed: usize,
    pub failures: usize,
    pub coefficients: Vec<CoefficientSummary>,
    pub mean_active_size: f64,
    /// Replications with `selected set == true support`.
    pub selection_accuracy: Cell,
    pub mean_lambda: f64,
}

impl McSummary {
    pub fn coefficient(&self, name: &str) -> Option<&CoefficientSummary> {
        self.coefficients.iter().find(|c| c.name == name)
    }

    fn check(&self) {
        assert_eq!(self.completed + self.failures, self.requested);
        for c in &self.coefficients {
            for cell in [c.coverage_without_bias, c.coverage_with_bias, Some(c.rejection)]
                .into_iter()
                .flatten()
            {
                assert_eq!(cell.total, self.completed);
                assert!(cell.hits <= cell.total);
            }
        }
    }
}

struct Outcome {
    covered_without: Vec<bool>,
    covered_with: Vec<bool>,
    rejected: Vec<bool>,
    active_size: usize,
    exact: bool,
    lambda: f64,
}

fn is_recoverable(e: &Error) -> bool {
    matches!(
        e,
        Error::SingularDesign { .. } | Error::NotPositiveDefinite(_)
    )
}

fn replicate(exp: &McExperiment, targets: &[(usize, f64)], truth: &[usize], r: u64) -> Result<Option<Outcome>> {
    let data = simulate_stream(&exp.dgp, r)?;
    let path = fit_path(&data, &exp.path_options())?;
    let fit = path.selected();
    if !fit.converged {
        log::warn!("replication {r}: selected fit did not converge");
        return Ok(None);
    }
    let penalty = fit.penalty.as_ref().expect("adaptive-lasso fit");
    let mode = exp.bias_correction;
    let full = estimate_moments(&data, &path.ols.residuals, exp.covariance)?;
    let active = estimate_moments(&data, &fit.residuals, exp.covariance)?
        .restrict(&fit.active_set, &data.names)?;
    let bias = if mode.with() {
        Some(bias_correction(fit, &data, penalty)?)
    } else {
        None
    };

    let mut covered_without = Vec::with_capacity(targets.len());
    let mut covered_with = Vec::with_capacity(targets.len());
    for &(i, value) in targets {
        // a true coefficient dropped by the selector has no interval
        if !fit.is_active(i) {
            covered_without.push(false);
            covered_with.push(false);
            continue;
        }
        if mode.without() {
            covered_without.push(confidence_interval_for(fit, &active, None, exp.alpha, i)?.contains(value));
        }
        if let Some(b) = &bias {
            covered_with.push(confidence_interval_for(fit, &active, Some(b), exp.alpha, i)?.contains(value));
        }
    }
    let rejected = (0..data.p())
        .map(|i| Ok(test_zero(fit, &full, 0.0, i, exp.alpha)?.reject))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(Outcome {
        covered_without,
        covered_with,
        rejected,
        active_size: fit.active_set.len(),
        exact: fit.active_set == truth,
        lambda: path.selected_lambda(),
    }))
}

fn block_labels(dgp: &DgpConfig) -> Vec<String> {
    let m = &dgp.model;
    std::iter::repeat("rho")
        .take(m.p1)
        .chain(std::iter::repeat("gamma").take(m.p2))
        .chain(std::iter::repeat("beta").take(m.p3))
        .map(str::to_owned)
        .collect()
}

/// Runs all replications on a pool of `workers` threads.
pub fn run_experiment(exp: &McExperiment, workers: usize) -> Result<McSummary> {
    exp.validate()?;
    if workers == 0 {
        return Err(Error::InvalidSpec("workers must be at least 1".into()));
    }
    let targets = exp.coverage_targets();
    let truth = exp.dgp.true_active();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let outcomes: Vec<Result<Option<Outcome>>> = pool.install(|| {
        (0..exp.replications as u64)
            .into_par_iter()
            .map(|r| match replicate(exp, &targets, &truth, r) {
                Err(e) if is_recoverable(&e) => {
                    log::warn!("replication {r} excluded: {e}");
                    Ok(None)
                }
                other => other,
            })
            .collect()
    });

    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    aggregate(exp, &targets, outcomes)
}

fn aggregate(exp: &McExperiment, targets: &[(usize, f64)], outcomes: Vec<Option<Outcome>>) -> Result<McSummary> {
    let p = exp.dgp.model.p();
    let mut failures = 0;
    let mut cov_without = vec![0usize; targets.len()];
    let mut cov_with = vec![0usize; targets.len()];
    let mut rejections = vec![0usize; p];
    let mut active_total = 0usize;
    let mut exact = 0usize;
    let mut lambda_total = 0.0;
    for outcome in outcomes {
        let Some(o) = outcome else {
            failures += 1;
            continue;
        };
        for (k, hit) in o.covered_without.iter().enumerate() {
            cov_without[k] += usize::from(*hit);
        }
        for (k, hit) in o.covered_with.iter().enumerate() {
            cov_with[k] += usize::from(*hit);
        }
        for (k, hit) in o.rejected.iter().enumerate() {
            rejections[k] += usize::from(*hit);
        }
        active_total += o.active_size;
        exact += usize::from(o.exact);
        lambda_total += o.lambda;
    }
    if failures * 100 > exp.replications {
        return Err(Error::McAborted {
            failures,
            replications: exp.replications,
        });
    }
    let completed = exp.replications - failures;
    if completed == 0 {
        return Err(Error::McAborted {
            failures,
            replications: exp.replications,
        });
    }
    let cell = |hits| Cell { hits, total: completed };
    let names = exp.dgp.names();
    let blocks = block_labels(&exp.dgp);
    let coefficients = (0..p)
        .map(|i| {
            let k = targets.iter().position(|&(j, _)| j == i);
            CoefficientSummary {
                index: i,
                name: names[i].clone(),
                block: blocks[i].clone(),
                true_value: exp.dgp.theta_true[i],
                coverage_without_bias: k.filter(|_| exp.bias_correction.without()).map(|k| cell(cov_without[k])),
                coverage_with_bias: k.filter(|_| exp.bias_correction.with()).map(|k| cell(cov_with[k])),
                rejection: cell(rejections[i]),
            }
        })
        .collect();
    let summary = McSummary {
        n: exp.dgp.n,
        alpha: exp.alpha,
        requested: exp.replications,
        completed,
        failures,
        coefficients,
        mean_active_size: active_total as f64 / completed as f64,
        selection_accuracy: cell(exact),
        mean_lambda: lambda_total / completed as f64,
    };
    summary.check();
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    PanelA,
    PanelB,
}

/// One row of `summary.csv`. Floats are written in shortest round-trip form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub index: usize,
    pub name: String,
    pub block: String,
    pub true_value: f64,
    pub replications: usize,
    pub covered_without_bias: Option<usize>,
    pub coverage_without_bias: Option<f64>,
    pub se_without_bias: Option<f64>,
    pub covered_with_bias: Option<usize>,
    pub coverage_with_bias: Option<f64>,
    pub se_with_bias: Option<f64>,
    pub rejections: usize,
    pub rejection_frequency: f64,
    pub rejection_se: f64,
}

impl From<&CoefficientSummary> for SummaryRecord {
    fn from(c: &CoefficientSummary) -> Self {
        SummaryRecord {
            index: c.index,
            name: c.name.clone(),
            block: c.block.clone(),
            true_value: c.true_value,
            replications: c.rejection.total,
            covered_without_bias: c.coverage_without_bias.map(|x| x.hits),
            coverage_without_bias: c.coverage_without_bias.map(|x| x.frequency()),
            se_without_bias: c.coverage_without_bias.map(|x| x.std_error()),
            covered_with_bias: c.coverage_with_bias.map(|x| x.hits),
            coverage_with_bias: c.coverage_with_bias.map(|x| x.frequency()),
            se_with_bias: c.coverage_with_bias.map(|x| x.std_error()),
            rejections: c.rejection.hits,
            rejection_frequency: c.rejection.frequency(),
            rejection_se: c.rejection.std_error(),
        }
    }
}

/// Parses `summary.csv` back into records.
pub fn read_summary_csv<R: std::io::Read>(reader: R) -> Result<Vec<SummaryRecord>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .map(|r| r.map_err(|e| Error::Csv(e.to_string())))
        .collect()
}

fn summary_csv(summary: &McSummary) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for c in &summary.coefficients {
        w.serialize(SummaryRecord::from(c)).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8 csv")
}

fn annotate(cell: Cell) -> String {
    format!("{:.4} ({:.4})", cell.frequency(), cell.std_error())
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, s)| format!("{s:<w$}", w = widths[j]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn panel_a(summary: &McSummary) -> String {
    let active: Vec<&CoefficientSummary> = summary
        .coefficients
        .iter()
        .filter(|c| c.coverage_without_bias.is_some() || c.coverage_with_bias.is_some())
        .collect();
    let mut out = format!(
        "Panel A: empirical coverage of {:.0}% intervals for the active coefficients (n = {}, N = {})\n",
        100.0 * (1.0 - summary.alpha),
        summary.n,
        summary.completed
    );
    let mut rows = vec![std::iter::once(String::new())
        .chain(active.iter().map(|c| c.name.clone()))
        .collect::<Vec<_>>()];
    for (label, pick) in [
        ("without bias correction", 0usize),
        ("with bias correction", 1),
    ] {
        let cells: Vec<Option<Cell>> = active
            .iter()
            .map(|c| if pick == 0 { c.coverage_without_bias } else { c.coverage_with_bias })
            .collect();
        if cells.iter().all(Option::is_none) {
            continue;
        }
        rows.push(
            std::iter::once(label.to_owned())
                .chain(cells.into_iter().map(|c| c.map(annotate).unwrap_or_else(|| "-".into())))
                .collect(),
        );
    }
    out.push_str(&aligned(&rows));
    out
}

fn panel_b(summary: &McSummary) -> String {
    let mut out = format!(
        "Panel B: rejection frequencies of H0: theta_i = 0 at level {} (n = {}, N = {})\n",
        summary.alpha, summary.n, summary.completed
    );
    let mut blocks: Vec<&str> = Vec::new();
    for c in &summary.coefficients {
        if !blocks.contains(&c.block.as_str()) {
            blocks.push(&c.block);
        }
    }
    let mut rows = Vec::new();
    for block in blocks {
        let members: Vec<&CoefficientSummary> =
            summary.coefficients.iter().filter(|c| c.block == block).collect();
        for (k, chunk) in members.chunks(7).enumerate() {
            let label = if k == 0 { block.to_owned() } else { String::new() };
            rows.push(
                std::iter::once(label)
                    .chain(chunk.iter().map(|c| c.name.clone()))
                    .collect::<Vec<_>>(),
            );
            rows.push(
                std::iter::once(String::new())
                    .chain(chunk.iter().map(|c| annotate(c.rejection)))
                    .collect(),
            );
        }
    }
    out.push_str(&aligned(&rows));
    let _ = writeln!(
        out,
        "\nmean |selected set| = {:.4}; P(selected set = true support) = {}; mean selected lambda_n = {:.4}; excluded replications = {}",
        summary.mean_active_size,
        annotate(summary.selection_accuracy),
        summary.mean_lambda,
        summary.failures
    );
    out
}

/// Renders the summary as CSV or an aligned-text panel.
pub fn render_table(summary: &McSummary, format: TableFormat) -> String {
    match format {
        TableFormat::Csv => summary_csv(summary),
        TableFormat::PanelA => panel_a(summary),
        TableFormat::PanelB => panel_b(summary),
    }
}

/// Resolved configuration written next to the results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSnapshot {
    pub tool_version: String,
    pub rng: String,
    pub bic: String,
    pub solver_tol: f64,
    pub solver_max_iter: usize,
    pub experiment: McExperiment,
}

impl RunSnapshot {
    pub fn new(exp: &McExperiment) -> Self {
        let solver = PathOptions::default().solver;
        RunSnapshot {
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            rng: RNG_IDENTITY.to_owned(),
            bic: "n ln(RSS/n) + |A| ln n; uniform grid on [0, n^(1/4)] incl. 0; ties to smaller lambda".to_owned(),
            solver_tol: solver.tol,
            solver_max_iter: solver.max_iter,
            experiment: exp.clone(),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Writes `summary.csv`, `panelA.txt`, `panelB.txt` and `config.snapshot`
/// into `dir`, creating it if needed.
pub fn write_run(summary: &McSummary, exp: &McExperiment, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut a = render_table(summary, TableFormat::PanelA);
    let mut b = render_table(summary, TableFormat::PanelB);
    if let Some(tag) = &exp.dgp.corr_fixture {
        let note = format!("note: covariate correlation from fixture {tag} (one admissible choice)\n");
        a.push_str(&note);
        b.push_str(&note);
    }
    let files = [
        ("summary.csv", render_table(summary, TableFormat::Csv)),
        ("panelA.txt", a),
        ("panelB.txt", b),
        ("config.snapshot", RunSnapshot::new(exp).to_toml()?),
    ];
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
