#![allow(dead_code)]

use alasso::dataset::TimeSeriesDataset;
use alasso::rng::substream;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Random regression `y = Z theta + noise` with standard-normal columns.
pub fn random_dataset(n: usize, theta: &[f64], noise: f64, seed: u64) -> TimeSeriesDataset {
    let p = theta.len();
    let mut rng = substream(seed, 0);
    let z = DMatrix::from_fn(n, p, |_, _| rng.sample::<f64, _>(StandardNormal));
    let e = DVector::from_fn(n, |_, _| noise * rng.sample::<f64, _>(StandardNormal));
    let y = &z * DVector::from_column_slice(theta) + e;
    let names = (0..p).map(|j| format!("z{j}")).collect();
    TimeSeriesDataset::from_parts(y, z, names, format!("random:{seed}")).unwrap()
}

/// Solves `a x = b` by Gauss-Jordan elimination with partial pivoting.
pub fn gauss_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| row.iter().copied().chain(std::iter::once(rhs)).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        let d = m[col][col];
        for v in m[col].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                for k in col..=n {
                    m[r][k] -= f * m[col][k];
                }
            }
        }
    }
    m.iter().map(|row| row[n]).collect()
}

/// Inverse by solving against each unit vector.
pub fn gauss_inverse(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let e: Vec<f64> = (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
            gauss_solve(a, &e)
        })
        .collect();
    (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
}

/// `(1/n) Z'Z` and `(1/n) Z'y` by explicit loops.
pub fn cross_products(data: &TimeSeriesDataset, cols: &[usize]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = data.n() as f64;
    let g = cols
        .iter()
        .map(|&a| {
            cols.iter()
                .map(|&b| (0..data.n()).map(|t| data.z[(t, a)] * data.z[(t, b)]).sum::<f64>() / n)
                .collect()
        })
        .collect();
    let c = cols
        .iter()
        .map(|&a| (0..data.n()).map(|t| data.z[(t, a)] * data.y[t]).sum::<f64>() / n)
        .collect();
    (g, c)
}

/// `(1/n) sum (y - Z theta)^2 + (lambda/n) sum w |theta|`.
pub fn scaled_objective(data: &TimeSeriesDataset, lambda: f64, w: &[f64], theta: &[f64]) -> f64 {
    let n = data.n() as f64;
    let r = &data.y - &data.z * DVector::from_column_slice(theta);
    r.norm_squared() / n + lambda / n * w.iter().zip(theta).map(|(w, t)| w * t.abs()).sum::<f64>()
}
