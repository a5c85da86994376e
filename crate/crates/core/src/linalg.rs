//! Dense symmetric eigendecompositions.

use faer::{Mat, Side};
use nalgebra::DMatrix;

use crate::error::{Error, Result};

fn to_faer(m: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn failed<E: std::fmt::Debug>(e: E) -> Error {
    Error::Numerical(format!("eigendecomposition failed: {e:?}"))
}

/// Eigenvalues of the symmetric matrix `m` in ascending order. Only the lower
/// triangle is read.
pub(crate) fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let vals = to_faer(m).self_adjoint_eigenvalues(Side::Lower).map_err(failed)?;
    if vals.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    Ok(vals)
}

pub(crate) fn min_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    Ok(eigenvalues(m)?.first().copied().unwrap_or(0.0))
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues clipped to zero.
pub(crate) fn clip_negative(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(m.clone());
    }
    let evd = to_faer(m).self_adjoint_eigen(Side::Lower).map_err(failed)?;
    let (s, u) = (evd.S(), evd.U());
    if (0..n).any(|i| !s[i].is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    let keep: Vec<usize> = (0..n).filter(|&i| s[i] > 0.0).collect();
    let q = Mat::from_fn(n, keep.len(), |i, c| u[(i, keep[c])] * s[keep[c]].sqrt());
    let p = &q * q.transpose();
    Ok(DMatrix::from_fn(n, n, |i, j| 0.5 * (p[(i, j)] + p[(j, i)])))
}
