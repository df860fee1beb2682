use nalgebra::{DMatrix, DVector};

/// `sign(a) * max(|a| - b, 0)`; returns an exact `0.0` inside the threshold.
#[inline]
pub fn soft_threshold(a: f64, b: f64) -> f64 {
    debug_assert!(b >= 0.0);
    if a > b {
        a - b
    } else if a < -b {
        a + b
    } else {
        0.0
    }
}

#[derive(Debug, Clone)]
pub struct CdOutcome {
    pub theta: DVector<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

/// `theta' G theta - 2 c' theta + sum_j penalty_j |theta_j|`.
pub fn objective(gram: &DMatrix<f64>, xty: &DVector<f64>, penalty: &[f64], theta: &DVector<f64>) -> f64 {
    let quad = theta.dot(&(gram * theta));
    let l1: f64 = theta.iter().zip(penalty).map(|(t, w)| w * t.abs()).sum();
    quad - 2.0 * xty.dot(theta) + l1
}

/// Cyclic coordinate descent for
///
/// ```text
/// minimise  theta' G theta - 2 c' theta + sum_j penalty_j |theta_j|
/// ```
///
/// With `G = Z'Z`, `c = Z'Y` and `penalty_j = lambda_n w_j` this is the
/// adaptive-lasso objective multiplied by `n` (up to the constant `Y'Y`);
/// with `G = C`, `c = W`, `penalty = lambda_0` it is the limit process `R(u)`.
/// Each coordinate update is
/// `theta_j <- S(c_j - sum_{k != j} G_jk theta_k, penalty_j / 2) / G_jj`.
///
/// Stops once the largest coordinate change in a sweep is below `tol`.
/// Every `G_jj` must be positive.
pub fn coordinate_descent(
    gram: &DMatrix<f64>,
    xty: &DVector<f64>,
    penalty: &[f64],
    init: &DVector<f64>,
    tol: f64,
    max_iter: usize,
) -> CdOutcome {
    let p = gram.nrows();
    debug_assert!(penalty.len() == p && init.len() == p);
    let mut theta = init.clone();
    // running G * theta
    let mut g_theta = gram * &theta;
    let mut last_obj = if cfg!(debug_assertions) {
        objective(gram, xty, penalty, &theta)
    } else {
        0.0
    };
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < max_iter {
        sweeps += 1;
        let mut max_change = 0.0f64;
        for j in 0..p {
            let gjj = gram[(j, j)];
            let old = theta[j];
            let partial = xty[j] - (g_theta[j] - gjj * old);
            let new = soft_threshold(partial, penalty[j] / 2.0) / gjj;
            let delta = new - old;
            if delta != 0.0 {
                theta[j] = new;
                g_theta.axpy(delta, &gram.column(j), 1.0);
                max_change = max_change.max(delta.abs());
            }
        }
        if cfg!(debug_assertions) {
            let obj = objective(gram, xty, penalty, &theta);
            debug_assert!(
                obj <= last_obj + 1e-9 * (1.0 + last_obj.abs()),
                "objective increased across a sweep: {last_obj} -> {obj}"
            );
            last_obj = obj;
        }
        if max_change < tol {
            converged = true;
            break;
        }
    }
    CdOutcome {
        theta,
        sweeps,
        converged,
    }
}
