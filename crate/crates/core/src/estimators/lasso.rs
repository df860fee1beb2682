use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dataset::TimeSeriesDataset;
use crate::error::{Error, Result};
use crate::linalg;

use super::cd::coordinate_descent;
use super::{FitResult, Method};

/// Weight used when a least-squares coefficient is numerically zero.
pub const DEFAULT_WEIGHT_CAP: f64 = 1e12;
const ZERO_COEF: f64 = 1e-12;

/// `lambda_n` and the per-coefficient weights `1 / |theta_LS,i|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltySpec {
    pub lambda_n: f64,
    pub weights: Vec<f64>,
    pub weight_cap: f64,
}

impl PenaltySpec {
    /// Adaptive weights from a pilot (least-squares) estimate.
    pub fn from_pilot(lambda_n: f64, pilot: &DVector<f64>) -> Self {
        let weights = pilot
            .iter()
            .map(|b| {
                if b.abs() < ZERO_COEF {
                    DEFAULT_WEIGHT_CAP
                } else {
                    (1.0 / b.abs()).min(DEFAULT_WEIGHT_CAP)
                }
            })
            .collect();
        PenaltySpec {
            lambda_n,
            weights,
            weight_cap: DEFAULT_WEIGHT_CAP,
        }
    }

    pub fn with_lambda(&self, lambda_n: f64) -> Self {
        PenaltySpec {
            lambda_n,
            ..self.clone()
        }
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        if !(self.lambda_n >= 0.0) || !self.lambda_n.is_finite() {
            return Err(Error::InvalidSpec(format!("lambda_n = {} must be >= 0", self.lambda_n)));
        }
        if self.weights.len() != p {
            return Err(Error::InvalidSpec(format!(
                "{} penalty weights for p = {p}",
                self.weights.len()
            )));
        }
        if let Some(w) = self.weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidSpec(format!("penalty weight {w} is not positive and finite")));
        }
        Ok(())
    }

    /// `lambda_n * w_i`, the L1 coefficient of each `|theta_i|` in the
    /// n-scaled objective.
    pub fn effective(&self) -> Vec<f64> {
        self.weights.iter().map(|w| self.lambda_n * w).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Stop when the largest coordinate change in a sweep is below this.
    pub tol: f64,
    /// Maximum number of full sweeps.
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-8,
            max_iter: 10_000,
        }
    }
}

/// `Z'Z` and `Z'Y`, computed once per dataset.
#[derive(Debug, Clone)]
pub struct DesignCache {
    pub gram: DMatrix<f64>,
    pub xty: DVector<f64>,
}

impl DesignCache {
    pub fn new(data: &TimeSeriesDataset) -> Result<Self> {
        let gram = linalg::gram(&data.z);
        let zero: Vec<String> = (0..gram.nrows())
            .filter(|&j| !(gram[(j, j)] > 0.0))
            .map(|j| data.names[j].clone())
            .collect();
        if !zero.is_empty() {
            return Err(Error::SingularDesign {
                condition: f64::INFINITY,
                columns: zero,
            });
        }
        let xty = data.z.tr_mul(&data.y);
        Ok(DesignCache { gram, xty })
    }

    pub(crate) fn fit(
        &self,
        data: &TimeSeriesDataset,
        penalty: &PenaltySpec,
        init: &DVector<f64>,
        opts: SolverOptions,
    ) -> FitResult {
        let out = coordinate_descent(&self.gram, &self.xty, &penalty.effective(), init, opts.tol, opts.max_iter);
        if !out.converged {
            log::warn!(
                "adaptive lasso did not converge in {} sweeps (lambda_n = {})",
                opts.max_iter,
                penalty.lambda_n
            );
        }
        FitResult::from_theta(
            data,
            out.theta,
            Method::AdaptiveLasso,
            Some(penalty.clone()),
            out.sweeps,
            out.converged,
        )
    }
}

/// Adaptive-lasso fit for a fixed penalty, starting from `init`.
///
/// Non-convergence is not an error: the result carries `converged = false`
/// and a warning is logged. An all-zero column is a singular design.
pub fn adaptive_lasso_fit(
    data: &TimeSeriesDataset,
    penalty: &PenaltySpec,
    init: &DVector<f64>,
    opts: SolverOptions,
) -> Result<FitResult> {
    penalty.validate(data.p())?;
    if init.len() != data.p() {
        return Err(Error::InvalidSpec(format!("initial vector has length {}", init.len())));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidSpec("solver tolerance must be positive".into()));
    }
    let cache = DesignCache::new(data)?;
    Ok(cache.fit(data, penalty, init, opts))
}
