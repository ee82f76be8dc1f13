use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::{hs_norm, ComplexMatrix, NumError};
use crate::tol;

const MAX_SWEEPS: usize = 64;

/// Spectral decomposition `H = U diag(λ) U*` of a Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    /// Eigenvalues, sorted descending.
    pub values: Vec<f64>,
    /// Unitary matrix whose `k`-th column belongs to `values[k]`.
    pub vectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// Eigenvector of the largest eigenvalue; ties resolve to the lowest
    /// column after the descending sort.
    pub fn top_vector(&self) -> Vec<Complex64> {
        self.vector(0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `U diag(λ) U*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let u = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| u[(i, k)] * self.values[k] * u[(j, k)].conj())
                .sum()
        })
    }

    /// Indices whose eigenvalue is below `tol::RANK` relative to the spectral
    /// radius.
    pub fn kernel_indices(&self) -> Vec<usize> {
        let scale = self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let cut = tol::RANK * scale.max(f64::MIN_POSITIVE);
        (0..self.dim())
            .filter(|&k| self.values[k].abs() <= cut)
            .collect()
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Rejects non-square input and input with `‖H − H*‖ > 1e-10 ‖H‖`.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenSystem, NumError> {
    if !h.is_square() {
        return Err(NumError::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let asymmetry = h.hermitian_residual();
    if asymmetry > tol::STRUCTURE * hs_norm(h) {
        return Err(NumError::NotHermitian { asymmetry });
    }
    Ok(jacobi(h.hermitian_part()))
}

fn off_diagonal_sq(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn jacobi(mut a: ComplexMatrix) -> EigenSystem {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let total = hs_norm(&a).powi(2);
    let target = (f64::EPSILON * f64::EPSILON) * total;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_sq(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Skip rotations that cannot change the diagonal in floating point.
                if r < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = diag(1, conj(phase)) · [[c, s], [-s, c]] on the (p, q) plane.
                let g_pp = Complex64::new(c, 0.0);
                let g_pq = Complex64::new(s, 0.0);
                let g_qp = phase.conj() * (-s);
                let g_qq = phase.conj() * c;

                // A ← A G
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                // A ← G* A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                // V ← V G
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps the lowest index first among equal eigenvalues.
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    EigenSystem { values, vectors }
}
