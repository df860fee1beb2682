//! Sandwich covariance, bias correction, confidence intervals, the
//! zero-coefficient test, and quantiles of the fixed-penalty limit law.
//!
//! Two covariance estimates are in play:
//!
//! - intervals for active coefficients use `V^A`, computed on the active
//!   columns with adaptive-lasso residuals;
//! - the test of `H0: theta_i = theta0` uses the full-model least-squares
//!   sandwich, since its critical value is the zero-penalty quantile
//!   `c_{0,i,1-alpha} = z_{1-alpha/2} sqrt(V_ii)`, which bounds the quantile
//!   at any penalty.

mod bias;
mod limit;
mod moments;
mod normal;
mod report;

pub use bias::{bias_correction, BiasCorrection};
pub use limit::{
    empirical_quantile, lambda0_from_penalty, limit_quantiles, quantile_curve, CurvePoint, LimitDistSpec,
    LimitSampler, DEFAULT_DRAWS,
};
pub use moments::{estimate_moments, CovarianceKind, MomentEstimates};
pub use normal::{normal_quantile, two_sided_z};
pub use report::{confidence_interval, confidence_interval_for, test_zero, Interval, ZeroTest};

use serde::{Deserialize, Serialize};

use crate::dataset::TimeSeriesDataset;
use crate::error::{Error, Result};
use crate::estimators::FitResult;

/// Everything known about one coefficient after a fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub index: usize,
    pub name: String,
    pub estimate: f64,
    pub ols_estimate: f64,
    /// Present for active coefficients only.
    pub interval: Option<Interval>,
    pub test: ZeroTest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceReport {
    pub alpha: f64,
    pub bias_corrected: bool,
    pub rows: Vec<CoefficientRow>,
}

/// Intervals (optionally bias-corrected) for the active coefficients and
/// `H0: theta_i = 0` tests for all of them.
pub fn analyze(
    data: &TimeSeriesDataset,
    fit: &FitResult,
    ols: &FitResult,
    alpha: f64,
    bias_corrected: bool,
    kind: CovarianceKind,
) -> Result<InferenceReport> {
    let penalty = fit
        .penalty
        .as_ref()
        .ok_or_else(|| Error::Contract("analysis needs an adaptive-lasso fit".into()))?;
    let full = estimate_moments(data, &ols.residuals, kind)?;
    let active = estimate_moments(data, &fit.residuals, kind)?.restrict(&fit.active_set, &data.names)?;
    let bias = if bias_corrected {
        Some(bias_correction(fit, data, penalty)?)
    } else {
        None
    };
    let rows = (0..data.p())
        .map(|i| {
            let interval = if fit.is_active(i) {
                Some(confidence_interval_for(fit, &active, bias.as_ref(), alpha, i)?)
            } else {
                None
            };
            Ok(CoefficientRow {
                index: i,
                name: data.names[i].clone(),
                estimate: fit.theta[i],
                ols_estimate: ols.theta[i],
                interval,
                test: test_zero(fit, &full, 0.0, i, alpha)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(InferenceReport {
        alpha,
        bias_corrected,
        rows,
    })
}
