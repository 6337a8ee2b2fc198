//! Normal-mode frequencies of a real quadratic bosonic form
//!
//! ```text
//!   H = ½ Σ_kh A_kh (b_k† b_h + b_h b_k†) + ½ Σ_kh B_kh (b_k† b_h† + b_h b_k)
//! ```
//!
//! With `X = A + B` and `Y = A - B` both positive definite, the frequencies
//! satisfy `ω² ∈ spec(Y X)`. Writing `X = L Lᵀ`, the same numbers are the
//! eigenvalues of the symmetric matrix `Lᵀ Y L`.

use faer::prelude::*;
use faer::Side;

use super::eigen::{sym_eigvals, symmetrized};
use crate::error::{Error, Result};

fn require_positive_definite(m: &Mat<f64>, which: &'static str) -> Result<()> {
    if m.nrows() == 0 || m.llt(Side::Lower).is_ok() {
        return Ok(());
    }
    let min_eigenvalue = sym_eigvals(m.as_ref())?.first().copied().unwrap_or(0.0);
    Err(Error::Unstable { which, min_eigenvalue })
}

/// Positive frequencies, ascending.
pub fn bdg_eig(a: MatRef<'_, f64>, b: MatRef<'_, f64>) -> Result<Vec<f64>> {
    let a = symmetrized(a)?;
    let b = symmetrized(b)?;
    if a.nrows() != b.nrows() {
        return Err(Error::Shape(format!("A is {0}x{0} but B is {1}x{1}", a.nrows(), b.nrows())));
    }
    let x = &a + &b;
    let y = &a - &b;
    require_positive_definite(&y, "A - B")?;
    require_positive_definite(&x, "A + B")?;
    if x.nrows() == 0 {
        return Ok(Vec::new());
    }
    let llt = x
        .llt(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let l = llt.L();
    let core = l.transpose() * &y * l;
    let squares = sym_eigvals(symmetrized_loose(&core).as_ref())?;
    Ok(squares.into_iter().map(|s| s.max(0.0).sqrt()).collect())
}

fn symmetrized_loose(m: &Mat<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}
