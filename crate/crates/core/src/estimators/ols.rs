use crate::dataset::TimeSeriesDataset;
use crate::error::Result;
use crate::linalg;

use super::{FitResult, Method};

/// Least squares via a Cholesky factorisation of `Z'Z`.
///
/// Fails with [`crate::Error::SingularDesign`] when the equilibrated Gram
/// matrix has condition number above [`linalg::MAX_CONDITION`], naming the
/// collinear columns.
pub fn ols_fit(data: &TimeSeriesDataset) -> Result<FitResult> {
    let gram = linalg::gram(&data.z);
    linalg::check_conditioning(&gram, &data.names)?;
    let xty = data.z.tr_mul(&data.y);
    let theta = linalg::spd_solve(&gram, &xty)?;
    Ok(FitResult::from_theta(data, theta, Method::Ols, None, 0, true))
}

#[cfg(test)]
mod tests {
    use nalgebra::{DMatrix, DVector};

    use super::*;
    use crate::Error;

    fn data(y: &[f64], z: &[f64], p: usize) -> TimeSeriesDataset {
        let n = y.len();
        TimeSeriesDataset::from_parts(
            DVector::from_column_slice(y),
            DMatrix::from_row_slice(n, p, z),
            (0..p).map(|j| format!("z{j}")).collect(),
            "test",
        )
        .unwrap()
    }

    #[test]
    fn exact_interpolation() {
        let fit = ols_fit(&data(&[1.0, 2.0], &[1.0, 2.0], 1)).unwrap();
        assert!((fit.theta[0] - 1.0).abs() < 1e-15);
        assert!(fit.rss < 1e-28);
        let fit = ols_fit(&data(&[1.0, 2.0], &[2.0, 4.0], 1)).unwrap();
        assert!((fit.theta[0] - 0.5).abs() < 1e-15);
        assert_eq!(fit.active_set, vec![0]);
    }

    #[test]
    fn collinear_design_is_rejected() {
        let z = [1.0, 2.0, 2.0, 4.0, 3.0, 6.0, 4.0, 8.0];
        match ols_fit(&data(&[1.0, 0.0, 1.0, 3.0], &z, 2)) {
            Err(Error::SingularDesign { columns, .. }) => assert_eq!(columns, vec!["z0", "z1"]),
            other => panic!("unexpected {other:?}"),
        }
    }
}
