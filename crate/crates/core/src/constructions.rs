//! Explicit weighted projective resolutions of the identity.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;
use thiserror::Error;

use crate::encoding::{EncodingError, FamilyKind, WeightedProjectionFamily};
use crate::numkernel::vector::inner;
use crate::numkernel::{kron, ComplexMatrix};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Family(#[from] EncodingError),
    #[error("invalid parameters: {0}")]
    Parameters(&'static str),
    #[error("projection {index} has rank {rank}, expected rank one")]
    NotRankOne { index: usize, rank: usize },
    #[error("frame is not equiangular: |⟨f_i, f_j⟩| = {found}, expected {expected}")]
    NotEquiangular { found: f64, expected: f64 },
    #[error("weights sum to {sum}; a complementary family needs Σ k_n > 1")]
    NoComplement { sum: f64 },
}

/// `ω^{r j}` with the exponent reduced modulo `m` before evaluation.
fn root_power(m: usize, e: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (e % m) as f64 / m as f64)
}

/// Harmonic frame vectors `f_j = (ω^{0·j}, …, ω^{(d−1)j}) / √m`,
/// `j = 0..m`, `ω = e^{2πi/m}`.
pub fn harmonic_frame(d: usize, m: usize) -> Vec<Vec<Complex64>> {
    let s = 1.0 / (m as f64).sqrt();
    (0..m)
        .map(|j| (0..d).map(|r| root_power(m, r * j) * s).collect())
        .collect()
}

/// Rank-one family from the harmonic frame: `P_j` projects onto `f_j` and
/// `k_j = ‖f_j‖² = d/m`.
pub fn harmonic_rank_one(d: usize, m: usize) -> Result<WeightedProjectionFamily, ConstructionError> {
    if d == 0 || m < d {
        return Err(ConstructionError::Parameters("harmonic family needs m >= d >= 1"));
    }
    let frame = harmonic_frame(d, m);
    let k = d as f64 / m as f64;
    let projections = frame
        .iter()
        .map(|f| ComplexMatrix::outer(f, f).scale(1.0 / k))
        .collect();
    Ok(WeightedProjectionFamily::new(d, alloc::vec![k; m], projections)?.with_kind(FamilyKind::Harmonic))
}

/// `P_j = I_l ⊗ Π_j` on `ℂˡ ⊗ ℂ^q`, weights unchanged.
pub fn tensor_lift(
    fam: &WeightedProjectionFamily,
    l: usize,
) -> Result<WeightedProjectionFamily, ConstructionError> {
    if l == 0 {
        return Err(ConstructionError::Parameters("lift factor must be positive"));
    }
    if let Some((index, &rank)) = fam.ranks().iter().enumerate().find(|(_, &r)| r != 1) {
        return Err(ConstructionError::NotRankOne { index, rank });
    }
    let id = ComplexMatrix::identity(l);
    let projections = fam.projections().iter().map(|p| kron(&id, p)).collect();
    Ok(
        WeightedProjectionFamily::new(fam.d() * l, fam.weights().to_vec(), projections)?
            .with_kind(FamilyKind::TensorLift),
    )
}

/// Rank-`l` family on `ℂ^{2l} = ℂˡ ⊕ ℂˡ` with `P_j = U_j* P U_j`,
/// `P = I ⊕ 0` and `U_j` the block rotation by the diagonal angles
/// `θ_{i,j} = π(i − j)/m`. All weights equal `2/m`.
pub fn rotation_family(l: usize, m: usize) -> Result<WeightedProjectionFamily, ConstructionError> {
    if l == 0 || m < 2 {
        return Err(ConstructionError::Parameters("rotation family needs l >= 1 and m >= 2"));
    }
    let d = 2 * l;
    let projections = (1..=m)
        .map(|j| {
            let mut p = ComplexMatrix::zeros(d, d);
            for i in 1..=l {
                let theta = PI * (i as f64 - j as f64) / m as f64;
                let (s, c) = theta.sin_cos();
                let (a, b) = (i - 1, l + i - 1);
                p[(a, a)] = Complex64::new(c * c, 0.0);
                p[(a, b)] = Complex64::new(-c * s, 0.0);
                p[(b, a)] = Complex64::new(-c * s, 0.0);
                p[(b, b)] = Complex64::new(s * s, 0.0);
            }
            p
        })
        .collect();
    let k = 2.0 / m as f64;
    Ok(WeightedProjectionFamily::new(d, alloc::vec![k; m], projections)?.with_kind(FamilyKind::Rotation))
}

/// `|⟨f_i, f_j⟩|` that a two-uniform (equiangular) Parseval frame of `m`
/// vectors in `ℂ^q` must have.
pub fn equiangular_magnitude(q: usize, m: usize) -> f64 {
    let (q, m) = (q as f64, m as f64);
    (q * (m - q) / (m * m * (m - 1.0))).sqrt()
}

/// Largest deviation of `|⟨f_i, f_j⟩|`, `i ≠ j`, from `target`.
pub fn equiangular_deviation(frame: &[Vec<Complex64>], target: f64) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..frame.len() {
        for j in (i + 1)..frame.len() {
            worst = worst.max((inner(&frame[i], &frame[j]).norm() - target).abs());
        }
    }
    worst
}

/// Simplex equiangular frame: the harmonic family with `d = q`, `m = q + 1`.
pub fn simplex_two_uniform(q: usize) -> Result<WeightedProjectionFamily, ConstructionError> {
    if q < 2 {
        return Err(ConstructionError::Parameters("simplex frame needs q >= 2"));
    }
    let m = q + 1;
    let frame = harmonic_frame(q, m);
    let expected = equiangular_magnitude(q, m);
    let dev = equiangular_deviation(&frame, expected);
    if dev > tol::STRUCTURE {
        return Err(ConstructionError::NotEquiangular {
            found: expected + dev,
            expected,
        });
    }
    Ok(harmonic_rank_one(q, m)?.with_kind(FamilyKind::Simplex))
}

/// `P_j' = I − P_j` with `k_j' = k_j / (Σ k_n − 1)`.
pub fn complementary_family(
    fam: &WeightedProjectionFamily,
) -> Result<WeightedProjectionFamily, ConstructionError> {
    let sum = fam.weight_sum();
    if sum <= 1.0 + tol::PROBABILITY {
        return Err(ConstructionError::NoComplement { sum });
    }
    let id = ComplexMatrix::identity(fam.d());
    let weights = fam.weights().iter().map(|k| k / (sum - 1.0)).collect();
    let projections = fam.projections().iter().map(|p| &id - p).collect();
    Ok(WeightedProjectionFamily::new(fam.d(), weights, projections)?.with_kind(FamilyKind::Complementary))
}

/// `P_j' = U P_j U*` for a unitary `U`; weights and kind are kept.
pub fn rotate_family(
    fam: &WeightedProjectionFamily,
    u: &ComplexMatrix,
) -> Result<WeightedProjectionFamily, ConstructionError> {
    if u.shape() != (fam.d(), fam.d()) {
        return Err(ConstructionError::Parameters("rotation must be a d x d unitary"));
    }
    let projections = fam
        .projections()
        .iter()
        .map(|p| u.conjugate_by(p).hermitian_part())
        .collect();
    let rotated = WeightedProjectionFamily::new(fam.d(), fam.weights().to_vec(), projections)?;
    Ok(match fam.kind() {
        Some(k) => rotated.with_kind(k),
        None => rotated,
    })
}
