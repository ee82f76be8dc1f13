use alloc::vec::Vec;

use num_traits::Float;

use super::AnalysisError;
use crate::encoding::EncodingError;
use crate::numkernel::{hermitian_eig, numerical_rank, operator_norm, ComplexMatrix};
use crate::tol;

/// `‖P_i + P_j‖` for a 1-based pair `i < j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairNorm {
    pub i: usize,
    pub j: usize,
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairNormTable {
    pub m: usize,
    pub entries: Vec<PairNorm>,
    pub max: f64,
    pub min: f64,
    /// All entries agree within `1e-9`.
    pub all_equal: bool,
}

impl PairNormTable {
    /// Norm for the 1-based pair `{i, j}`; `None` on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.entries
            .iter()
            .find(|e| e.i == a && e.j == b)
            .map(|e| e.norm)
    }

    /// The first pair (lexicographically) within `1e-9` of the maximum.
    pub fn worst_pair(&self) -> Option<[usize; 2]> {
        self.entries
            .iter()
            .find(|e| e.norm >= self.max - tol::PAIR_NORM_EQUAL)
            .map(|e| [e.i, e.j])
    }
}

/// Operator norms of all pairwise sums of `projections`.
pub fn pair_norms(projections: &[ComplexMatrix]) -> Result<PairNormTable, AnalysisError> {
    let m = projections.len();
    if m < 2 {
        return Err(AnalysisError::Parameters("pair norms need at least two projections"));
    }
    let mut entries = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = (&projections[i], &projections[j]);
            if a.shape() != b.shape() {
                return Err(crate::numkernel::NumError::ShapeMismatch {
                    left: a.shape(),
                    right: b.shape(),
                }
                .into());
            }
            entries.push(PairNorm {
                i: i + 1,
                j: j + 1,
                norm: operator_norm(&(a + b)),
            });
        }
    }
    let max = entries.iter().map(|e| e.norm).fold(f64::NEG_INFINITY, f64::max);
    let min = entries.iter().map(|e| e.norm).fold(f64::INFINITY, f64::min);
    Ok(PairNormTable {
        m,
        entries,
        max,
        min,
        all_equal: max - min <= tol::PAIR_NORM_EQUAL,
    })
}

fn projection_rank(p: &ComplexMatrix, index: usize) -> Result<(usize, crate::EigenSystem), AnalysisError> {
    let residual = p.projection_residual();
    if residual > tol::STRUCTURE {
        return Err(EncodingError::NotProjection { index, residual }.into());
    }
    let eig = hermitian_eig(p)?;
    Ok((numerical_rank(&eig), eig))
}

/// `‖P_1 + P_j‖ = 1 + √λ_max(B)`, where `B` is the leading `l × l` block of
/// `P_j` in a basis that diagonalizes `P_1` as `diag(I_l, 0)`.
pub fn pair_norm_via_compression(p1: &ComplexMatrix, pj: &ComplexMatrix) -> Result<f64, AnalysisError> {
    if p1.shape() != pj.shape() {
        return Err(crate::numkernel::NumError::ShapeMismatch {
            left: p1.shape(),
            right: pj.shape(),
        }
        .into());
    }
    let (l, eig) = projection_rank(p1, 0)?;
    let (lj, _) = projection_rank(pj, 1)?;
    if l != lj {
        return Err(AnalysisError::RankMismatch { left: l, right: lj });
    }
    let d = p1.rows();
    if d < 2 * l {
        return Err(AnalysisError::SaturatedPairRegime { d, l });
    }
    // columns 0..l of the eigenvector matrix span ran(P_1)
    let u = eig.vectors.block(0, 0, d, l);
    let b = u.adjoint_mul(&pj.matmul(&u)).hermitian_part();
    let lambda = hermitian_eig(&b)?.max().clamp(0.0, 1.0);
    Ok(1.0 + lambda.sqrt())
}
