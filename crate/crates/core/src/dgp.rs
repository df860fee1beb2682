//! Data-generating processes for the simulation designs.
//!
//! Observations follow the regression recursion with initial response lags
//! set to zero; the first `burn_in` observations are discarded. Covariates
//! are drawn fresh for every replication.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dataset::{build_design, ModelSpec, RawSeriesTable, TimeSeriesDataset};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::{substream, StreamRng};

pub const DEFAULT_BURN_IN: usize = 500;

/// Identifier of the correlation fixture used by `setting5`.
pub const SETTING5_CORR_FIXTURE: &str = "setting5-block4-v1";

/// Distribution of the standardised innovation `e_t` inside a GARCH error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "lowercase")]
pub enum Innovation {
    Gaussian,
    #[serde(rename = "student_t")]
    StudentT { nu: f64 },
}

impl Innovation {
    /// `E[e^2]`.
    pub fn second_moment(&self) -> f64 {
        match *self {
            Innovation::Gaussian => 1.0,
            Innovation::StudentT { nu } => nu / (nu - 2.0),
        }
    }

    fn draw(&self, rng: &mut StreamRng) -> f64 {
        match *self {
            Innovation::Gaussian => rng.sample(StandardNormal),
            Innovation::StudentT { nu } => student_t_draw(rng, nu),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Innovation::StudentT { nu } if !(nu > 2.0) => {
                Err(Error::InvalidSpec(format!("Student-t degrees of freedom {nu} must exceed 2")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ErrorKind {
    Gaussian,
    /// Raw (not variance-standardised) Student-t.
    #[serde(rename = "student_t")]
    StudentT { nu: f64 },
    /// `eps_t = sqrt(h_t) e_t`, `h_t = omega + beta h_{t-1} + alpha h_{t-1} e_{t-1}^2`.
    Garch {
        omega: f64,
        beta: f64,
        alpha: f64,
        innovation: Innovation,
    },
}

/// Conditional variance recursion of a GARCH(1,1) error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GarchState {
    /// Conditional variance of the previous step.
    pub h: f64,
    /// Previous standardised innovation.
    pub e_prev: f64,
}

impl GarchState {
    /// Starts at the unconditional variance with `e_0 = 0`.
    pub fn stationary(omega: f64, beta: f64, alpha: f64, e2: f64) -> Self {
        GarchState {
            h: omega / (1.0 - beta - alpha * e2),
            e_prev: 0.0,
        }
    }

    /// Advances one period with innovation `e` and returns `eps_t`.
    pub fn step(&mut self, omega: f64, beta: f64, alpha: f64, e: f64) -> f64 {
        let h = omega + beta * self.h + alpha * self.h * self.e_prev * self.e_prev;
        self.h = h;
        self.e_prev = e;
        h.sqrt() * e
    }
}

/// A complete simulation design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DgpConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub model: ModelSpec,
    pub theta_true: Vec<f64>,
    pub error_kind: ErrorKind,
    /// Correlation of the `W` block; `None` means independent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covariate_corr: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corr_fixture: Option<String>,
    pub n: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl DgpConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        let p = self.model.p();
        if self.theta_true.len() != p {
            return Err(Error::InvalidSpec(format!(
                "theta_true has {} entries for p = {p}",
                self.theta_true.len()
            )));
        }
        if self.theta_true.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec("theta_true must be finite".into()));
        }
        if self.n <= p {
            return Err(Error::TooShort {
                needed: p + 1,
                got: self.n,
            });
        }
        check_ar_stationary(&self.theta_true[..self.model.p1])?;
        match self.error_kind {
            ErrorKind::Gaussian => {}
            ErrorKind::StudentT { nu } => Innovation::StudentT { nu }.validate()?,
            ErrorKind::Garch {
                omega,
                beta,
                alpha,
                innovation,
            } => {
                innovation.validate()?;
                if !(omega > 0.0) || !(beta >= 0.0) || !(alpha >= 0.0) {
                    return Err(Error::InvalidSpec(
                        "GARCH needs omega > 0 and alpha, beta >= 0".into(),
                    ));
                }
                let persistence = beta + alpha * innovation.second_moment();
                if !(persistence < 1.0) {
                    return Err(Error::NonStationary(format!(
                        "GARCH persistence beta + alpha E[e^2] = {persistence} >= 1"
                    )));
                }
            }
        }
        if let Some(corr) = &self.covariate_corr {
            self.corr_matrix(corr)?;
        }
        Ok(())
    }

    fn corr_matrix(&self, corr: &[Vec<f64>]) -> Result<DMatrix<f64>> {
        let k = self.model.p2;
        if corr.len() != k || corr.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidSpec(format!("covariate correlation must be {k}x{k}")));
        }
        let m = DMatrix::from_fn(k, k, |i, j| corr[i][j]);
        for i in 0..k {
            if m[(i, i)] != 1.0 {
                return Err(Error::InvalidSpec("correlation matrix needs a unit diagonal".into()));
            }
            for j in 0..i {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::InvalidSpec("correlation matrix is not symmetric".into()));
                }
            }
        }
        linalg::cholesky_lower(&m).map_err(|_| Error::NotPositiveDefinite("covariate correlation".into()))?;
        Ok(m)
    }

    /// Indices of the truly nonzero coefficients.
    pub fn true_active(&self) -> Vec<usize> {
        self.theta_true
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Coefficient labels (`rho1.., gamma1.., beta1..` unless overridden).
    pub fn names(&self) -> Vec<String> {
        self.model.variable_names.clone().unwrap_or_else(|| {
            let m = &self.model;
            (1..=m.p1)
                .map(|i| format!("rho{i}"))
                .chain((1..=m.p2).map(|i| format!("gamma{i}")))
                .chain((1..=m.p3).map(|i| format!("beta{i}")))
                .collect()
        })
    }
}

/// Every root of `1 - rho_1 z - ... - rho_k z^k` must lie outside the unit
/// circle, i.e. every companion-matrix eigenvalue inside it.
pub fn check_ar_stationary(rho: &[f64]) -> Result<()> {
    let k = rho.len();
    if k == 0 {
        return Ok(());
    }
    let companion = DMatrix::from_fn(k, k, |i, j| {
        if i == 0 {
            rho[j]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let max_modulus = companion
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if max_modulus >= 1.0 - 1e-10 {
        return Err(Error::NonStationary(format!(
            "autoregressive coefficients {rho:?} have a root on or inside the unit circle (max |eigenvalue| {max_modulus:.6})"
        )));
    }
    Ok(())
}

/// Student-t with `nu` degrees of freedom: `z / sqrt(chi2_nu / nu)`.
/// Not rescaled, so the variance is `nu / (nu - 2)`.
pub fn student_t_draw<R: Rng + ?Sized>(rng: &mut R, nu: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    let chi = ChiSquared::new(nu).expect("nu > 0").sample(rng);
    z / (chi / nu).sqrt()
}

/// Sampler for `N(0, R)` with correlation matrix `R`, via its lower Cholesky factor.
#[derive(Debug, Clone)]
pub struct CorrelatedNormals {
    lower: DMatrix<f64>,
}

impl CorrelatedNormals {
    pub fn new(corr: &DMatrix<f64>) -> Result<Self> {
        let lower = linalg::cholesky_lower(corr)
            .map_err(|_| Error::NotPositiveDefinite("correlation matrix".into()))?;
        Ok(CorrelatedNormals { lower })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let k = self.lower.nrows();
        let z = DVector::from_fn(k, |_, _| rng.sample(StandardNormal));
        &self.lower * z
    }
}

/// One draw of `L z` with `corr = L L'`.
pub fn correlated_normals<R: Rng + ?Sized>(rng: &mut R, corr: &DMatrix<f64>) -> Result<DVector<f64>> {
    Ok(CorrelatedNormals::new(corr)?.sample(rng))
}

/// Simulated raw series (after burn-in) for replication `stream`.
pub fn simulate_raw(config: &DgpConfig, stream: u64) -> Result<RawSeriesTable> {
    config.validate()?;
    let m = &config.model;
    let (p1, p2, p3) = (m.p1, m.p2, m.p3);
    let lag = m.max_lag();
    let total = config.burn_in + config.n + lag;
    let theta = &config.theta_true;
    let (rho, rest) = theta.split_at(p1);
    let (gamma, beta) = rest.split_at(p2);

    let w_sampler = config
        .covariate_corr
        .as_ref()
        .map(|c| config.corr_matrix(c).and_then(|m| CorrelatedNormals::new(&m)))
        .transpose()?;
    let mut rng = substream(config.seed, stream);
    let mut garch = match config.error_kind {
        ErrorKind::Garch {
            omega,
            beta,
            alpha,
            innovation,
        } => Some(GarchState::stationary(omega, beta, alpha, innovation.second_moment())),
        _ => None,
    };

    let mut y = vec![0.0; total];
    let mut w = vec![vec![0.0; total]; p2];
    let mut x = vec![vec![0.0; total]; p3];
    for t in 0..total {
        // draw order per period: W block, X block, error
        match &w_sampler {
            Some(s) => {
                let draw = s.sample(&mut rng);
                for (col, v) in w.iter_mut().zip(draw.iter()) {
                    col[t] = *v;
                }
            }
            None => {
                for col in w.iter_mut() {
                    col[t] = rng.sample(StandardNormal);
                }
            }
        }
        for col in x.iter_mut() {
            col[t] = rng.sample(StandardNormal);
        }
        let eps = match config.error_kind {
            ErrorKind::Gaussian => rng.sample(StandardNormal),
            ErrorKind::StudentT { nu } => student_t_draw(&mut rng, nu),
            ErrorKind::Garch {
                omega,
                beta,
                alpha,
                innovation,
            } => {
                let e = innovation.draw(&mut rng);
                garch.as_mut().expect("garch state").step(omega, beta, alpha, e)
            }
        };
        let mut value = eps;
        for (i, r) in rho.iter().enumerate() {
            if t > i {
                value += r * y[t - 1 - i];
            }
        }
        for (g, col) in gamma.iter().zip(&w) {
            value += g * col[t];
        }
        if t > 0 {
            for (b, col) in beta.iter().zip(&x) {
                value += b * col[t - 1];
            }
        }
        y[t] = value;
    }

    let keep = config.burn_in..total;
    let columns = w
        .iter()
        .enumerate()
        .map(|(i, c)| (format!("w{}", i + 1), c[keep.clone()].to_vec()))
        .chain(
            x.iter()
                .enumerate()
                .map(|(i, c)| (format!("x{}", i + 1), c[keep.clone()].to_vec())),
        )
        .collect();
    RawSeriesTable::new("y", y[keep].to_vec(), columns)
}

/// Dataset for replication `stream` of the design.
pub fn simulate_stream(config: &DgpConfig, stream: u64) -> Result<TimeSeriesDataset> {
    let raw = simulate_raw(config, stream)?;
    let spec = config.model.clone().with_names(config.names());
    let mut data = build_design(&raw, &spec)?;
    data.origin = format!(
        "dgp:{}:seed={}:stream={stream}",
        config.preset.as_deref().unwrap_or("custom"),
        config.seed
    );
    Ok(data)
}

/// Dataset fully determined by `config.seed` (stream 0).
pub fn simulate(config: &DgpConfig) -> Result<TimeSeriesDataset> {
    simulate_stream(config, 0)
}

/// Block-diagonal 20x20 correlation used by `setting5`: five blocks of four
/// covariates with within-block correlation 0.9, 0.5, +-0.5 (signs
/// `+,+,-,-`), 0 and 0.
pub fn setting5_correlation() -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; 20]; 20];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let signs = [1.0, 1.0, -1.0, -1.0];
    for block in 0..3 {
        for a in 0..4 {
            for b in 0..4 {
                if a == b {
                    continue;
                }
                let v = match block {
                    0 => 0.9,
                    1 => 0.5,
                    _ => 0.5 * signs[a] * signs[b],
                };
                m[block * 4 + a][block * 4 + b] = v;
            }
        }
    }
    m
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 5] = ["setting1", "setting2", "setting3", "setting4", "setting5"];

fn preset_garch() -> ErrorKind {
    ErrorKind::Garch {
        omega: 0.1,
        beta: 0.7,
        alpha: 0.1,
        innovation: Innovation::StudentT { nu: 5.0 },
    }
}

/// The five reference designs.
///
/// - `setting1`: `p1 = p2 = p3 = 5`, coefficients `(0.3, 0.1, 0, 0, 0)` in each
///   block, `N(0, 1)` errors.
/// - `setting2`: as 1 with `t_5` errors.
/// - `setting3`: as 1 with GARCH(1,1) errors, `h_t = 0.1 + 0.7 h_{t-1} +
///   0.1 h_{t-1} e_{t-1}^2`, `e_t ~ t_5`.
/// - `setting4`: `p1 = 1`, `p2 = 20`, `rho = 0.9`,
///   `gamma = (0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0, ..., 0)`, `N(0, 1)` errors.
/// - `setting5`: as 4 with GARCH errors and correlated covariates.
pub fn preset(name: &str, n: usize, seed: u64) -> Result<DgpConfig> {
    let block = [0.3, 0.1, 0.0, 0.0, 0.0];
    let persistent: Vec<f64> = std::iter::once(0.9)
        .chain([0.6, 0.5, 0.4, 0.3, 0.2, 0.1])
        .chain(std::iter::repeat(0.0).take(14))
        .collect();
    let (model, theta, error_kind, corr) = match name {
        "setting1" | "setting2" | "setting3" => {
            let theta: Vec<f64> = block.iter().chain(&block).chain(&block).copied().collect();
            let err = match name {
                "setting1" => ErrorKind::Gaussian,
                "setting2" => ErrorKind::StudentT { nu: 5.0 },
                _ => preset_garch(),
            };
            (ModelSpec::new(5, 5, 5), theta, err, None)
        }
        "setting4" => (ModelSpec::new(1, 20, 0), persistent, ErrorKind::Gaussian, None),
        "setting5" => (
            ModelSpec::new(1, 20, 0),
            persistent,
            preset_garch(),
            Some(setting5_correlation()),
        ),
        other => {
            return Err(Error::Config(format!(
                "unknown preset `{other}` (expected one of {})",
                PRESETS.join(", ")
            )))
        }
    };
    let corr_fixture = corr.as_ref().map(|_| SETTING5_CORR_FIXTURE.to_owned());
    let config = DgpConfig {
        preset: Some(name.to_owned()),
        model,
        theta_true: theta,
        error_kind,
        covariate_corr: corr,
        corr_fixture,
        n,
        burn_in: DEFAULT_BURN_IN,
        seed,
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in PRESETS {
            let c = preset(name, 800, 1).unwrap();
            assert_eq!(c.theta_true.len(), c.model.p());
        }
        assert_eq!(preset("setting1", 800, 1).unwrap().true_active(), vec![0, 1, 5, 6, 10, 11]);
        assert_eq!(preset("setting4", 800, 1).unwrap().true_active(), (0..7).collect::<Vec<_>>());
        assert!(matches!(preset("setting9", 800, 1), Err(Error::Config(_))));
    }

    #[test]
    fn setting5_fixture_is_a_valid_correlation() {
        let c = setting5_correlation();
        let m = DMatrix::from_fn(20, 20, |i, j| c[i][j]);
        assert!(linalg::cholesky_lower(&m).is_ok());
        let values: std::collections::BTreeSet<String> =
            c.iter().flatten().map(|v| format!("{v}")).collect();
        let allowed = ["-0.5", "0", "0.5", "0.9", "1"];
        assert!(values.iter().all(|v| allowed.contains(&v.as_str())), "{values:?}");
        assert_eq!(c[8][10], -0.5);
        assert_eq!(c[8][9], 0.5);
    }

    #[test]
    fn stationarity_check() {
        assert!(check_ar_stationary(&[0.3, 0.1, 0.0, 0.0, 0.0]).is_ok());
        assert!(check_ar_stationary(&[0.9]).is_ok());
        assert!(check_ar_stationary(&[1.0]).is_err());
        assert!(check_ar_stationary(&[0.5, 0.6]).is_err());
        let mut c = preset("setting4", 800, 1).unwrap();
        c.theta_true[0] = 1.2;
        assert!(matches!(c.validate(), Err(Error::NonStationary(_))));
    }

    #[test]
    fn garch_persistence_is_checked() {
        let mut c = preset("setting3", 800, 1).unwrap();
        c.error_kind = ErrorKind::Garch {
            omega: 0.1,
            beta: 0.7,
            alpha: 0.2,
            innovation: Innovation::StudentT { nu: 5.0 },
        };
        // 0.7 + 0.2 * 5/3 > 1
        assert!(matches!(c.validate(), Err(Error::NonStationary(_))));
    }

    #[test]
    fn garch_variance_stays_positive() {
        let mut s = GarchState::stationary(0.1, 0.7, 0.1, 5.0 / 3.0);
        for e in [0.0, 1e6, -3.0, 0.0, 0.0, 0.0, 1e-300] {
            s.step(0.1, 0.7, 0.1, e);
            assert!(s.h > 0.0);
        }
    }

    #[test]
    fn correlated_normals_needs_pd() {
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 1.5, 1.5, 1.0]);
        let mut rng = substream(1, 1);
        assert!(matches!(correlated_normals(&mut rng, &bad), Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn simulation_is_deterministic_per_stream() {
        let c = preset("setting3", 200, 9).unwrap();
        let a = simulate_stream(&c, 2).unwrap();
        let b = simulate_stream(&c, 2).unwrap();
        let d = simulate_stream(&c, 3).unwrap();
        assert_eq!(a.y, b.y);
        assert_eq!(a.z, b.z);
        assert_ne!(a.y, d.y);
        assert_eq!(a.n(), 200);
        assert_eq!(a.names[0], "rho1");
        assert_eq!(a.names[14], "beta5");
    }

    #[test]
    fn config_roundtrips_through_toml() {
        let c = preset("setting5", 800, 42).unwrap();
        let text = toml::to_string(&c).unwrap();
        let back: DgpConfig = toml::from_str(&text).unwrap();
        assert_eq!(back, c);
    }
}
