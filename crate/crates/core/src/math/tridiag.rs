use crate::error::{Error, Result};

/// Solves a tridiagonal system with the Thomas algorithm.
///
/// `lower[0]` and `upper[n - 1]` are ignored. `scratch` must have length
/// `n`; the solution is written to `out`.
pub fn solve(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
    scratch: &mut [f64],
    out: &mut [f64],
) -> Result<()> {
    let n = diag.len();
    debug_assert!(lower.len() == n && upper.len() == n && rhs.len() == n);
    debug_assert!(scratch.len() == n && out.len() == n);
    if n == 0 {
        return Ok(());
    }

    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::SingularSystem { row: 0 });
    }
    scratch[0] = upper[0] / pivot;
    out[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * scratch[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SingularSystem { row: i });
        }
        scratch[i] = upper[i] / pivot;
        out[i] = (rhs[i] - lower[i] * out[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        out[i] -= scratch[i] * out[i + 1];
    }
    Ok(())
}
