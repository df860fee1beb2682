//! Least squares and the adaptive lasso.
//!
//! The adaptive lasso minimises
//!
//! ```text
//! (1/n) sum_t (Y_t - theta' Z_t)^2 + (lambda_n / n) sum_i w_i |theta_i|,   w_i = 1 / |theta_LS,i|
//! ```
//!
//! by cyclic coordinate descent with soft thresholding. The tuning parameter
//! `lambda_n` is chosen by BIC over an equally spaced grid on `[0, n^(1/4)]`,
//! warm-starting each grid point from the previous solution.

mod cd;
mod lasso;
mod ols;
mod path;

pub use cd::{coordinate_descent, objective, soft_threshold, CdOutcome};
pub use lasso::{adaptive_lasso_fit, DesignCache, PenaltySpec, SolverOptions, DEFAULT_WEIGHT_CAP};
pub use ols::ols_fit;
pub use path::{bic_score, fit_path, BicPath, PathOptions};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::dataset::TimeSeriesDataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Ols,
    AdaptiveLasso,
}

/// Outcome of one fit.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub theta: DVector<f64>,
    /// Indices with `theta[i] != 0`, ascending.
    pub active_set: Vec<usize>,
    pub residuals: DVector<f64>,
    pub rss: f64,
    pub method: Method,
    pub penalty: Option<PenaltySpec>,
    pub solver_iters: usize,
    pub converged: bool,
}

impl FitResult {
    pub(crate) fn from_theta(
        data: &TimeSeriesDataset,
        theta: DVector<f64>,
        method: Method,
        penalty: Option<PenaltySpec>,
        solver_iters: usize,
        converged: bool,
    ) -> Self {
        let residuals = &data.y - &data.z * &theta;
        let rss = residuals.norm_squared();
        let active_set = theta
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, _)| i)
            .collect();
        FitResult {
            theta,
            active_set,
            residuals,
            rss,
            method,
            penalty,
            solver_iters,
            converged,
        }
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.active_set.binary_search(&i).is_ok()
    }

    /// Maps a fit obtained on [`TimeSeriesDataset::standardized`] data back to
    /// the original column scales. Weights transform as `w_i * s_i`, which
    /// again equals `1 / |theta_LS,i|` on the original scale.
    pub fn unstandardize(&self, scales: &[f64], original: &TimeSeriesDataset) -> FitResult {
        let theta = DVector::from_iterator(
            self.theta.len(),
            self.theta.iter().zip(scales).map(|(t, s)| t / s),
        );
        let penalty = self.penalty.as_ref().map(|p| PenaltySpec {
            lambda_n: p.lambda_n,
            weights: p.weights.iter().zip(scales).map(|(w, s)| w * s).collect(),
            weight_cap: p.weight_cap,
        });
        FitResult::from_theta(
            original,
            theta,
            self.method,
            penalty,
            self.solver_iters,
            self.converged,
        )
    }
}
