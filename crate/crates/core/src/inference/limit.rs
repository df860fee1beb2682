//! Quantiles of `|u_i|` where `u = argmin R(u)` and
//!
//! ```text
//! R(u) = -2 u'W + u'Cu + sum_i lambda0_i |u_i|,    W ~ N(0, Omega).
//! ```
//!
//! This is the fixed-penalty limit law of `sqrt(n) (theta_AL - theta*)`. At
//! `lambda0 = 0` the minimiser is `C^{-1} W ~ N(0, C^{-1} Omega C^{-1})`, and
//! its quantiles dominate those at any positive penalty.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{coordinate_descent, PenaltySpec};
use crate::linalg;
use crate::rng::substream;

/// Default number of Monte Carlo draws.
pub const DEFAULT_DRAWS: usize = 100_000;
const MIN_DRAWS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct LimitDistSpec {
    pub c: DMatrix<f64>,
    pub omega: DMatrix<f64>,
    pub lambda0: Vec<f64>,
    pub draws: usize,
    pub seed: u64,
}

impl LimitDistSpec {
    /// Scalar case `C = Omega = 1`.
    pub fn scalar(lambda0: f64, draws: usize, seed: u64) -> Self {
        LimitDistSpec {
            c: DMatrix::from_element(1, 1, 1.0),
            omega: DMatrix::from_element(1, 1, 1.0),
            lambda0: vec![lambda0],
            draws,
            seed,
        }
    }
}

/// `lambda0_i = lambda_n w_i / sqrt(n)`: the finite-sample counterpart of the
/// limiting penalty for a fitted model.
pub fn lambda0_from_penalty(penalty: &PenaltySpec, n: usize) -> Vec<f64> {
    let s = (n as f64).sqrt();
    penalty.weights.iter().map(|w| penalty.lambda_n * w / s).collect()
}

/// Pre-drawn `W ~ N(0, Omega)` samples, reusable across penalties so that
/// curves over `lambda0` use common random numbers.
#[derive(Debug, Clone)]
pub struct LimitSampler {
    c: DMatrix<f64>,
    /// One column per draw.
    w: Vec<DVector<f64>>,
}

impl LimitSampler {
    pub fn new(c: &DMatrix<f64>, omega: &DMatrix<f64>, draws: usize, seed: u64) -> Result<Self> {
        let p = c.nrows();
        if c.ncols() != p || omega.nrows() != p || omega.ncols() != p || p == 0 {
            return Err(Error::InvalidSpec("C and Omega must be square and of equal size".into()));
        }
        if draws < MIN_DRAWS {
            return Err(Error::InvalidSpec(format!("draws = {draws} < {MIN_DRAWS}")));
        }
        linalg::cholesky_lower(c).map_err(|_| Error::NotPositiveDefinite("C".into()))?;
        let l = linalg::cholesky_lower(omega).map_err(|_| Error::NotPositiveDefinite("Omega".into()))?;
        // each draw has its own substream, so the sample is identical for
        // any number of threads
        let w = (0..draws as u64)
            .into_par_iter()
            .map(|d| {
                let mut rng = substream(seed, d);
                let z = DVector::from_fn(p, |_, _| StandardNormal.sample(&mut rng));
                &l * z
            })
            .collect();
        Ok(LimitSampler { c: c.clone(), w })
    }

    pub fn draws(&self) -> usize {
        self.w.len()
    }

    /// `1 - alpha` quantile of `|u_i|` for every coordinate.
    pub fn quantiles(&self, lambda0: &[f64], alpha: f64) -> Result<Vec<f64>> {
        let p = self.c.nrows();
        if lambda0.len() != p {
            return Err(Error::InvalidSpec(format!("{} penalties for p = {p}", lambda0.len())));
        }
        if lambda0.iter().any(|l| !(*l >= 0.0) || !l.is_finite()) {
            return Err(Error::InvalidSpec("lambda0 must be finite and >= 0".into()));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidSpec(format!("alpha = {alpha} outside (0, 1)")));
        }
        let zero = DVector::zeros(p);
        let mins: Vec<DVector<f64>> = self
            .w
            .par_iter()
            .map(|w| coordinate_descent(&self.c, w, lambda0, &zero, 1e-12, 10_000).theta)
            .collect();
        Ok((0..p)
            .map(|i| {
                let mut abs: Vec<f64> = mins.iter().map(|u| u[i].abs()).collect();
                empirical_quantile(&mut abs, 1.0 - alpha)
            })
            .collect())
    }
}

/// Inverse empirical CDF: the `ceil(level m)`-th smallest value.
pub fn empirical_quantile(values: &mut [f64], level: f64) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len();
    let k = ((level * m as f64).ceil() as usize).clamp(1, m);
    values[k - 1]
}

pub fn limit_quantiles(spec: &LimitDistSpec, alpha: f64) -> Result<Vec<f64>> {
    LimitSampler::new(&spec.c, &spec.omega, spec.draws, spec.seed)?.quantiles(&spec.lambda0, alpha)
}

/// One point of a quantile curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub lambda0: f64,
    pub coordinate: usize,
    pub quantile: f64,
}

/// Quantiles along a grid of penalties applied to every coordinate, all
/// evaluated on the same draws.
pub fn quantile_curve(
    c: &DMatrix<f64>,
    omega: &DMatrix<f64>,
    grid: &[f64],
    draws: usize,
    seed: u64,
    alpha: f64,
) -> Result<Vec<CurvePoint>> {
    let sampler = LimitSampler::new(c, omega, draws, seed)?;
    let p = c.nrows();
    let mut out = Vec::with_capacity(grid.len() * p);
    for &l0 in grid {
        let q = sampler.quantiles(&vec![l0; p], alpha)?;
        out.extend(q.into_iter().enumerate().map(|(coordinate, quantile)| CurvePoint {
            lambda0: l0,
            coordinate,
            quantile,
        }));
    }
    Ok(out)
}
