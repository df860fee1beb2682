use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::FitResult;

use super::bias::BiasCorrection;
use super::moments::MomentEstimates;
use super::normal::two_sided_z;

/// Confidence interval for one active coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub index: usize,
    pub estimate: f64,
    /// `estimate + b_i / sqrt(n)` when bias-corrected, else `estimate`.
    pub center: f64,
    pub std_error: f64,
    pub lower: f64,
    pub upper: f64,
    pub bias_corrected: bool,
}

impl Interval {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// Outcome of the test of `H0: theta_i = theta0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroTest {
    pub index: usize,
    pub estimate: f64,
    pub theta0: f64,
    /// `sqrt(n) |theta_i - theta0|`.
    pub test_stat: f64,
    /// `z_{1-alpha/2} sqrt(V_ii)` from the full least-squares sandwich.
    pub critical_value: f64,
    /// `sqrt(V_ii / n)`.
    pub std_error: f64,
    pub reject: bool,
    pub alpha: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("alpha = {alpha} outside (0, 1)")))
    }
}

/// Interval for active coefficient `i`.
///
/// `moments` must be the active-set restriction computed from the
/// adaptive-lasso residuals (`V^A`). Asking for an inactive index is a
/// contract violation.
pub fn confidence_interval_for(
    fit: &FitResult,
    moments: &MomentEstimates,
    bias: Option<&BiasCorrection>,
    alpha: f64,
    i: usize,
) -> Result<Interval> {
    check_alpha(alpha)?;
    if !fit.is_active(i) {
        return Err(Error::Contract(format!("coefficient {i} is not in the active set")));
    }
    let k = moments
        .local_index(i)
        .ok_or_else(|| Error::Contract(format!("moments do not cover coefficient {i}")))?;
    let n = moments.n as f64;
    let estimate = fit.theta[i];
    let shift = match bias {
        Some(b) => {
            b.get(i)
                .ok_or_else(|| Error::Contract(format!("bias term missing for coefficient {i}")))?
                / n.sqrt()
        }
        None => 0.0,
    };
    let center = estimate + shift;
    let std_error = (moments.v_hat[(k, k)] / n).sqrt();
    let half = two_sided_z(alpha) * std_error;
    Ok(Interval {
        index: i,
        estimate,
        center,
        std_error,
        lower: center - half,
        upper: center + half,
        bias_corrected: bias.is_some(),
    })
}

/// Intervals for every active coefficient, in `active_set` order.
pub fn confidence_interval(
    fit: &FitResult,
    moments: &MomentEstimates,
    bias: Option<&BiasCorrection>,
    alpha: f64,
) -> Result<Vec<Interval>> {
    fit.active_set
        .iter()
        .map(|&i| confidence_interval_for(fit, moments, bias, alpha, i))
        .collect()
}

/// Test of `H0: theta_i = theta0` with the conservative critical value taken
/// at zero penalty. `moments` must be the full-design sandwich from the
/// least-squares residuals.
pub fn test_zero(
    fit: &FitResult,
    moments: &MomentEstimates,
    theta0: f64,
    i: usize,
    alpha: f64,
) -> Result<ZeroTest> {
    check_alpha(alpha)?;
    if i >= fit.theta.len() {
        return Err(Error::Contract(format!("coefficient index {i} out of range")));
    }
    let k = moments
        .local_index(i)
        .ok_or_else(|| Error::Contract(format!("moments do not cover coefficient {i}")))?;
    let n = moments.n as f64;
    let estimate = fit.theta[i];
    let test_stat = n.sqrt() * (estimate - theta0).abs();
    let v = moments.v_hat[(k, k)];
    let critical_value = two_sided_z(alpha) * v.sqrt();
    Ok(ZeroTest {
        index: i,
        estimate,
        theta0,
        test_stat,
        critical_value,
        std_error: (v / n).sqrt(),
        reject: test_stat > critical_value,
        alpha,
    })
}
