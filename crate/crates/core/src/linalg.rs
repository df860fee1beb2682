//! Dense helpers for the small (p <= a few dozen) symmetric systems that show
//! up everywhere in this crate.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Condition numbers above this are treated as numerically singular.
pub const MAX_CONDITION: f64 = 1e12;

/// `Z'Z`.
pub fn gram(z: &DMatrix<f64>) -> DMatrix<f64> {
    z.tr_mul(z)
}

/// Condition number of a symmetric matrix after scaling it to unit diagonal.
///
/// The equilibration makes the number independent of the units each column
/// is measured in, so only genuine collinearity is flagged. Returns
/// `f64::INFINITY` when the matrix has a zero diagonal entry or a
/// non-positive eigenvalue.
pub fn equilibrated_condition(sym: &DMatrix<f64>) -> f64 {
    let p = sym.nrows();
    if p == 0 {
        return 1.0;
    }
    let d: Vec<f64> = (0..p).map(|i| sym[(i, i)]).collect();
    if d.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return f64::INFINITY;
    }
    let scaled = DMatrix::from_fn(p, p, |i, j| sym[(i, j)] / (d[i] * d[j]).sqrt());
    let eig = scaled.symmetric_eigenvalues();
    let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Indices of columns involved in a (near) linear dependence: zero columns
/// first, otherwise the support of the eigenvector of the smallest
/// eigenvalue of the equilibrated matrix.
pub fn offending_columns(sym: &DMatrix<f64>) -> Vec<usize> {
    let p = sym.nrows();
    let zero: Vec<usize> = (0..p).filter(|&i| !(sym[(i, i)] > 0.0)).collect();
    if !zero.is_empty() {
        return zero;
    }
    let scaled = DMatrix::from_fn(p, p, |i, j| {
        sym[(i, j)] / (sym[(i, i)] * sym[(j, j)]).sqrt()
    });
    let eig = scaled.symmetric_eigen();
    let (k, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    let v = eig.eigenvectors.column(k);
    (0..p).filter(|&i| v[i].abs() > 0.1).collect()
}

/// Fails with [`Error::SingularDesign`] when `sym` is numerically singular.
pub fn check_conditioning(sym: &DMatrix<f64>, names: &[String]) -> Result<()> {
    let condition = equilibrated_condition(sym);
    if condition > MAX_CONDITION {
        let columns = offending_columns(sym)
            .into_iter()
            .map(|i| names.get(i).cloned().unwrap_or_else(|| format!("#{i}")))
            .collect();
        return Err(Error::SingularDesign { condition, columns });
    }
    Ok(())
}

/// Solves `a x = b` for symmetric positive definite `a`.
pub fn spd_solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let chol = a
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite(format!("{}x{} system", a.nrows(), a.ncols())))?;
    Ok(chol.solve(b))
}

/// Inverse of a symmetric positive definite matrix, symmetrised.
pub fn spd_inverse(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = a
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite(format!("{}x{} matrix", a.nrows(), a.ncols())))?;
    let inv = chol.inverse();
    Ok((&inv + inv.transpose()) * 0.5)
}

/// Lower Cholesky factor.
pub fn cholesky_lower(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    a.clone()
        .cholesky()
        .map(|c| c.unpack())
        .ok_or_else(|| Error::NotPositiveDefinite(format!("{}x{} matrix", a.nrows(), a.ncols())))
}

/// Principal submatrix on `idx` (rows and columns in the given order).
pub fn submatrix(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Columns `idx` of `m`.
pub fn select_columns(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    m.select_columns(idx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_ignores_column_units() {
        let g = DMatrix::from_row_slice(2, 2, &[1e10, 0.0, 0.0, 1e-6]);
        assert!((equilibrated_condition(&g) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collinear_columns_are_named() {
        // columns 0 and 2 identical, column 1 independent
        let z = DMatrix::from_row_slice(4, 3, &[1., 0., 1., 2., 1., 2., 3., 0., 3., 4., 1., 4.]);
        let err = check_conditioning(&gram(&z), &["a".into(), "b".into(), "c".into()]).unwrap_err();
        match err {
            Error::SingularDesign { columns, .. } => assert_eq!(columns, vec!["a", "c"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_column_reported_first() {
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        assert_eq!(offending_columns(&g), vec![1]);
        assert!(equilibrated_condition(&g).is_infinite());
    }

    #[test]
    fn spd_inverse_roundtrip() {
        let a = DMatrix::from_row_slice(3, 3, &[4., 1., 0.5, 1., 3., 0.2, 0.5, 0.2, 2.]);
        let inv = spd_inverse(&a).unwrap();
        let eye = &a * &inv;
        assert!((eye - DMatrix::identity(3, 3)).amax() < 1e-14);
    }
}
