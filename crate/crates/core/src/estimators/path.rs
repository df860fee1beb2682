use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::dataset::TimeSeriesDataset;
use crate::error::{Error, Result};

use super::lasso::{DesignCache, PenaltySpec, SolverOptions};
use super::{ols_fit, FitResult};

/// `n ln(RSS / n) + |active set| ln(n)`.
///
/// A perfect fit (`RSS = 0`) scores `-inf`.
pub fn bic_score(fit: &FitResult, n: usize) -> f64 {
    let n = n as f64;
    if fit.rss <= 0.0 {
        log::warn!("perfect fit (RSS = 0); BIC is -inf");
        return f64::NEG_INFINITY;
    }
    n * (fit.rss / n).ln() + fit.active_set.len() as f64 * n.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathOptions {
    /// Number of grid points including `lambda_n = 0`.
    pub grid_size: usize,
    pub solver: SolverOptions,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            grid_size: 100,
            solver: SolverOptions::default(),
        }
    }
}

/// Warm-started adaptive-lasso path with BIC scores.
#[derive(Debug, Clone)]
pub struct BicPath {
    /// Ascending; `grid[0] = 0`, `grid[last] = n^(1/4)`.
    pub grid: Vec<f64>,
    pub fits: Vec<FitResult>,
    pub bic: Vec<f64>,
    pub selected_index: usize,
    /// The least-squares pilot that produced the weights.
    pub ols: FitResult,
}

impl BicPath {
    pub fn selected(&self) -> &FitResult {
        &self.fits[self.selected_index]
    }

    pub fn selected_lambda(&self) -> f64 {
        self.grid[self.selected_index]
    }
}

/// Equally spaced grid of `size` points on `[0, upper]`.
pub(crate) fn lambda_grid(size: usize, upper: f64) -> Vec<f64> {
    let step = upper / (size - 1) as f64;
    (0..size)
        .map(|k| if k == size - 1 { upper } else { k as f64 * step })
        .collect()
}

/// Fits the adaptive lasso on `{0} ∪ (grid_size - 1 equally spaced points on
/// (0, n^(1/4)])` and selects the BIC minimiser, breaking ties toward the
/// smaller `lambda_n`.
pub fn fit_path(data: &TimeSeriesDataset, opts: &PathOptions) -> Result<BicPath> {
    if opts.grid_size < 2 {
        return Err(Error::InvalidSpec(format!("grid_size = {} < 2", opts.grid_size)));
    }
    let ols = ols_fit(data)?;
    let base = PenaltySpec::from_pilot(0.0, &ols.theta);
    let cache = DesignCache::new(data)?;
    let n = data.n();
    let grid = lambda_grid(opts.grid_size, (n as f64).powf(0.25));

    let mut fits = Vec::with_capacity(grid.len());
    let mut warm: DVector<f64> = ols.theta.clone();
    for &lambda in &grid {
        let fit = cache.fit(data, &base.with_lambda(lambda), &warm, opts.solver);
        warm.copy_from(&fit.theta);
        fits.push(fit);
    }
    let bic: Vec<f64> = fits.iter().map(|f| bic_score(f, n)).collect();
    let selected_index = bic
        .iter()
        .enumerate()
        .fold(0, |best, (i, &b)| if b < bic[best] { i } else { best });
    Ok(BicPath {
        grid,
        fits,
        bic,
        selected_index,
        ols,
    })
}

#[cfg(test)]
mod tests {
    use nalgebra::DMatrix;

    use super::*;
    use crate::estimators::Method;

    fn fit_with(rss: f64, active: usize) -> FitResult {
        FitResult {
            theta: DVector::zeros(3),
            active_set: (0..active).collect(),
            residuals: DVector::zeros(1),
            rss,
            method: Method::AdaptiveLasso,
            penalty: None,
            solver_iters: 0,
            converged: true,
        }
    }

    #[test]
    fn bic_values() {
        assert_eq!(bic_score(&fit_with(50.0, 0), 50), 0.0);
        assert!(bic_score(&fit_with(60.0, 2), 50) > bic_score(&fit_with(60.0, 1), 50));
        assert_eq!(bic_score(&fit_with(0.0, 1), 50), f64::NEG_INFINITY);
    }

    #[test]
    fn bic_at_n_equal_e() {
        // n ln(rss/n) + 2 ln n with rss = n e and n = e gives n + 2.
        let e = std::f64::consts::E;
        let fit = fit_with(e * e, 2);
        let n = e;
        let score = n * (fit.rss / n).ln() + 2.0 * n.ln();
        assert!((score - (e + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn grid_endpoints() {
        assert_eq!(lambda_grid(2, 3.0), vec![0.0, 3.0]);
        let g = lambda_grid(100, 800f64.powf(0.25));
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 800f64.powf(0.25));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn path_selects_minimum_and_warm_starts() {
        let n = 120;
        let z = DMatrix::from_fn(n, 3, |t, j| (((t * (j + 3) * 7919) % 101) as f64 - 50.0) / 29.0);
        let y = DVector::from_fn(n, |t, _| {
            1.0 * z[(t, 0)] + (((t * 31) % 17) as f64 - 8.0) / 5.0
        });
        let data = TimeSeriesDataset::from_parts(y, z, vec!["a".into(), "b".into(), "c".into()], "t").unwrap();
        let path = fit_path(&data, &PathOptions { grid_size: 2, ..Default::default() }).unwrap();
        assert_eq!(path.grid, vec![0.0, (n as f64).powf(0.25)]);
        let path = fit_path(&data, &PathOptions::default()).unwrap();
        let min = path.bic.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(path.bic[path.selected_index], min);
        assert!(path.bic[..path.selected_index].iter().all(|b| *b > min));
        assert!(fit_path(&data, &PathOptions { grid_size: 1, ..Default::default() }).is_err());
    }
}
