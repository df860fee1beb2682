use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dataset::TimeSeriesDataset;
use crate::error::{Error, Result};
use crate::linalg;

/// How `Omega` is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CovarianceKind {
    /// White form `(1/n) sum_t e_t^2 Z_t Z_t'`.
    #[default]
    Robust,
    /// `sigma^2 C` with `sigma^2 = RSS / n`, so that `V = sigma^2 C^{-1}`.
    Classical,
}

/// `C = (1/n) sum Z_t Z_t'`, `Omega` and the sandwich `V = C^{-1} Omega C^{-1}`
/// on the columns listed in `indices`.
#[derive(Debug, Clone)]
pub struct MomentEstimates {
    pub c_hat: DMatrix<f64>,
    pub omega_hat: DMatrix<f64>,
    pub v_hat: DMatrix<f64>,
    /// Column indices (into the full design) these matrices refer to.
    pub indices: Vec<usize>,
    pub n: usize,
    pub kind: CovarianceKind,
}

impl MomentEstimates {
    /// Restriction to `idx` (indices into the full design): submatrices of
    /// `C` and `Omega`, with `V` recomputed from them.
    pub fn restrict(&self, idx: &[usize], names: &[String]) -> Result<MomentEstimates> {
        let local: Vec<usize> = idx
            .iter()
            .map(|i| {
                self.indices.iter().position(|j| j == i).ok_or_else(|| {
                    Error::Contract(format!("index {i} not among the estimated columns"))
                })
            })
            .collect::<Result<_>>()?;
        let c_hat = linalg::submatrix(&self.c_hat, &local);
        let omega_hat = linalg::submatrix(&self.omega_hat, &local);
        let sub_names: Vec<String> = idx
            .iter()
            .map(|&i| names.get(i).cloned().unwrap_or_else(|| format!("#{i}")))
            .collect();
        let v_hat = sandwich(&c_hat, &omega_hat, &sub_names)?;
        Ok(MomentEstimates {
            c_hat,
            omega_hat,
            v_hat,
            indices: idx.to_vec(),
            n: self.n,
            kind: self.kind,
        })
    }

    /// Position of full-design index `i` inside these matrices.
    pub fn local_index(&self, i: usize) -> Option<usize> {
        self.indices.iter().position(|&j| j == i)
    }

    /// `sqrt(V_ii / n)` for full-design index `i`.
    pub fn std_error(&self, i: usize) -> Option<f64> {
        self.local_index(i)
            .map(|k| (self.v_hat[(k, k)] / self.n as f64).sqrt())
    }
}

fn sandwich(c: &DMatrix<f64>, omega: &DMatrix<f64>, names: &[String]) -> Result<DMatrix<f64>> {
    if c.nrows() == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    linalg::check_conditioning(c, names)?;
    let c_inv = linalg::spd_inverse(c)?;
    let v = &c_inv * omega * &c_inv;
    Ok((&v + v.transpose()) * 0.5)
}

/// Moment matrices of the full design given residuals from some fit.
pub fn estimate_moments(
    data: &TimeSeriesDataset,
    residuals: &DVector<f64>,
    kind: CovarianceKind,
) -> Result<MomentEstimates> {
    let n = data.n();
    if residuals.len() != n {
        return Err(Error::Contract(format!(
            "{} residuals for n = {n}",
            residuals.len()
        )));
    }
    let nf = n as f64;
    let c_hat = linalg::gram(&data.z) / nf;
    let omega_hat = match kind {
        CovarianceKind::Robust => {
            let mut weighted = data.z.clone();
            for (mut row, e) in weighted.row_iter_mut().zip(residuals.iter()) {
                row *= e.abs();
            }
            let m = weighted.tr_mul(&weighted) / nf;
            (&m + m.transpose()) * 0.5
        }
        CovarianceKind::Classical => &c_hat * (residuals.norm_squared() / nf),
    };
    let v_hat = sandwich(&c_hat, &omega_hat, &data.names)?;
    Ok(MomentEstimates {
        c_hat,
        omega_hat,
        v_hat,
        indices: (0..data.p()).collect(),
        n,
        kind,
    })
}
