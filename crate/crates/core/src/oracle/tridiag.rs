use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Thomas algorithm for `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
/// `lower[0]` and `upper[n-1]` are ignored. Overwrites `rhs` with the
/// solution; `scratch` must have the same length.
pub fn solve_tridiagonal<T: Real>(
    lower: &[Complex<T>],
    diag: &[Complex<T>],
    upper: &[Complex<T>],
    rhs: &mut [Complex<T>],
    scratch: &mut [Complex<T>],
) -> Result<()> {
    let n = diag.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n || scratch.len() != n {
        return Err(Error::InvalidGrid("tridiagonal system length mismatch".into()));
    }
    if n == 0 {
        return Ok(());
    }
    let pivot_err = |i: usize| Error::Consistency(format!("zero pivot at row {i} in tridiagonal solve"));
    let mut beta = diag[0];
    if beta.is_zero() {
        return Err(pivot_err(0));
    }
    rhs[0] = rhs[0] / beta;
    for i in 1..n {
        scratch[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * scratch[i];
        if beta.is_zero() {
            return Err(pivot_err(i));
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] = rhs[i] - scratch[i + 1] * next;
    }
    Ok(())
}
