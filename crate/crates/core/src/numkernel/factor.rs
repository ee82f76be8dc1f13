use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::vector::{inner, norm, normalized};
use super::{hermitian_eig, ComplexMatrix, EigenSystem, NumError};
use crate::tol;

/// Number of eigenvalues above `tol::RANK` relative to the largest.
pub fn numerical_rank(eig: &EigenSystem) -> usize {
    let top = eig.max();
    if top <= 0.0 {
        return 0;
    }
    eig.values.iter().filter(|&&v| v > tol::RANK * top).count()
}

/// Factors a PSD matrix as `A = V* V` with `V` of height `l`.
///
/// Row `r` of `V` is `√λ_r · u_r*` for the eigenpairs in descending order;
/// rows past the numerical rank are zero.
pub fn factor_psd(a: &ComplexMatrix, l: usize) -> Result<ComplexMatrix, NumError> {
    let eig = hermitian_eig(a)?;
    if let Some(&lo) = eig.values.last() {
        if lo < -tol::STRUCTURE {
            return Err(NumError::NotPsd { eigenvalue: lo });
        }
    }
    let rank = numerical_rank(&eig);
    if rank > l {
        return Err(NumError::RankOverflow { rank, max: l });
    }
    let d = a.cols();
    let mut v = ComplexMatrix::zeros(l, d);
    for r in 0..rank {
        let s = eig.values[r].sqrt();
        for c in 0..d {
            v[(r, c)] = eig.vectors[(c, r)].conj() * s;
        }
    }
    Ok(v)
}

/// Orthonormalizes the columns of `g` with two passes of modified
/// Gram–Schmidt. `None` if a column is (numerically) dependent on the
/// previous ones.
pub fn orthonormalize_columns(g: &ComplexMatrix) -> Option<ComplexMatrix> {
    let (rows, cols) = g.shape();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = g.column(j);
        let scale = norm(&v);
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        if norm(&v) <= 1e-8 * scale.max(f64::MIN_POSITIVE) {
            return None;
        }
        basis.push(normalized(&v)?);
    }
    Some(ComplexMatrix::from_fn(rows, cols, |i, j| basis[j][i]))
}
