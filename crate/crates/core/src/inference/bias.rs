use nalgebra::DVector;

use crate::dataset::TimeSeriesDataset;
use crate::error::{Error, Result};
use crate::estimators::{FitResult, Method, PenaltySpec};
use crate::linalg;

/// Finite-sample bias of the active adaptive-lasso coefficients:
///
/// ```text
/// b = ((1/n) sum_t Z^A_t Z^A_t')^{-1} (lambda_n / (2 sqrt n)) (w_i sign(theta_i))_{i in A}
/// ```
///
/// so that `sqrt(n) (theta_A - theta*_A) + b` is centred.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasCorrection {
    /// One entry per active coefficient, in `active_set` order.
    pub b_hat: DVector<f64>,
    pub active_set: Vec<usize>,
    pub lambda_n: f64,
    pub weights: Vec<f64>,
    pub signs: Vec<f64>,
}

impl BiasCorrection {
    /// `b_i` for full-design index `i`, if active.
    pub fn get(&self, i: usize) -> Option<f64> {
        self.active_set
            .iter()
            .position(|&j| j == i)
            .map(|k| self.b_hat[k])
    }
}

pub fn bias_correction(
    fit: &FitResult,
    data: &TimeSeriesDataset,
    penalty: &PenaltySpec,
) -> Result<BiasCorrection> {
    if fit.method != Method::AdaptiveLasso {
        return Err(Error::Contract("bias correction needs an adaptive-lasso fit".into()));
    }
    penalty.validate(data.p())?;
    let active = fit.active_set.clone();
    let weights: Vec<f64> = active.iter().map(|&i| penalty.weights[i]).collect();
    let signs: Vec<f64> = active.iter().map(|&i| fit.theta[i].signum()).collect();
    if active.is_empty() {
        return Ok(BiasCorrection {
            b_hat: DVector::zeros(0),
            active_set: active,
            lambda_n: penalty.lambda_n,
            weights,
            signs,
        });
    }
    let n = data.n() as f64;
    let z_a = linalg::select_columns(&data.z, &active);
    let c_a = linalg::gram(&z_a) / n;
    let names: Vec<String> = active.iter().map(|&i| data.names[i].clone()).collect();
    linalg::check_conditioning(&c_a, &names)?;
    let scale = penalty.lambda_n / (2.0 * n.sqrt());
    let rhs = DVector::from_iterator(
        active.len(),
        weights.iter().zip(&signs).map(|(w, s)| scale * w * s),
    );
    let b_hat = linalg::spd_solve(&c_a, &rhs)?;
    Ok(BiasCorrection {
        b_hat,
        active_set: active,
        lambda_n: penalty.lambda_n,
        weights,
        signs,
    })
}

#[cfg(test)]
mod tests {
    use nalgebra::DMatrix;

    use super::*;
    use crate::estimators::{adaptive_lasso_fit, ols_fit, SolverOptions};

    fn orthonormal_data() -> TimeSeriesDataset {
        // (1/n) sum z^2 = 1
        let z = DVector::from_vec(vec![1.0, -1.0, 1.0, -1.0]);
        let y = DVector::from_vec(vec![2.1, -1.9, 2.05, -2.0]);
        TimeSeriesDataset::from_parts(y, DMatrix::from_column_slice(4, 1, z.as_slice()), vec!["z".into()], "t")
            .unwrap()
    }

    #[test]
    fn scalar_closed_form() {
        let data = orthonormal_data();
        let ols = ols_fit(&data).unwrap();
        let pen = PenaltySpec::from_pilot(3.0, &ols.theta);
        let fit = adaptive_lasso_fit(&data, &pen, &ols.theta, SolverOptions::default()).unwrap();
        let b = bias_correction(&fit, &data, &pen).unwrap();
        let expected = 3.0 * pen.weights[0] * fit.theta[0].signum() / (2.0 * 2.0);
        assert!((b.b_hat[0] - expected).abs() < 1e-15);
        assert_eq!(b.get(0), Some(b.b_hat[0]));
        assert_eq!(b.get(1), None);
    }

    #[test]
    fn zero_penalty_and_linearity() {
        let data = orthonormal_data();
        let ols = ols_fit(&data).unwrap();
        let pen = PenaltySpec::from_pilot(1.0, &ols.theta);
        let fit = adaptive_lasso_fit(&data, &pen, &ols.theta, SolverOptions::default()).unwrap();
        let b0 = bias_correction(&fit, &data, &pen.with_lambda(0.0)).unwrap();
        assert_eq!(b0.b_hat[0], 0.0);
        let b1 = bias_correction(&fit, &data, &pen).unwrap();
        let b2 = bias_correction(&fit, &data, &pen.with_lambda(2.0)).unwrap();
        assert_eq!(b2.b_hat[0], 2.0 * b1.b_hat[0]);
    }

    #[test]
    fn ols_fit_is_rejected() {
        let data = orthonormal_data();
        let ols = ols_fit(&data).unwrap();
        let pen = PenaltySpec::from_pilot(1.0, &ols.theta);
        assert!(matches!(bias_correction(&ols, &data, &pen), Err(Error::Contract(_))));
    }
}
