//! Seeded random states, unitaries and projections.
//!
//! Every generator has a `*_with` form that draws from a caller-owned RNG and
//! a seeded form that builds a fresh ChaCha8 stream, so equal seeds give
//! bit-identical output.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::vector::normalized;
use super::{hs_norm, orthonormalize_columns, ComplexMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre_with<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unit vector in `ℂᵈ`.
pub fn random_state_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        if let Some(u) = normalized(&v) {
            return u;
        }
    }
}

pub fn random_state(seed: u64, d: usize) -> Vec<Complex64> {
    random_state_with(&mut seeded_rng(seed), d)
}

/// Full-rank density matrix `G G* / tr(G G*)` from a square Ginibre matrix.
pub fn random_density_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ginibre_with(rng, d, d);
    let w = g.matmul(&g.adjoint()).hermitian_part();
    let t = w.trace().re;
    w.scale(1.0 / t)
}

pub fn random_density_matrix(seed: u64, d: usize) -> ComplexMatrix {
    random_density_with(&mut seeded_rng(seed), d)
}

/// Gaussian Hermitian matrix `(G + G*) / 2`.
pub fn random_hermitian_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    ginibre_with(rng, d, d).hermitian_part()
}

/// Orthonormalizes the columns of a Gaussian matrix (two passes of modified
/// Gram–Schmidt).
pub fn random_unitary_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    random_isometry_with(rng, d, d)
}

pub fn random_unitary(seed: u64, d: usize) -> ComplexMatrix {
    random_unitary_with(&mut seeded_rng(seed), d)
}

/// `rows × cols` matrix with orthonormal columns, `cols ≤ rows`.
pub fn random_isometry_with<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(cols <= rows, "isometry needs cols <= rows");
    loop {
        if let Some(v) = orthonormalize_columns(&ginibre_with(rng, rows, cols)) {
            return v;
        }
    }
}

/// Haar-random rank-`rank` orthogonal projection on `ℂᵈ`.
pub fn random_projection_with<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> ComplexMatrix {
    let v = random_isometry_with(rng, d, rank);
    v.matmul(&v.adjoint()).hermitian_part()
}

/// Residual `‖U* U − I‖_HS`.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    hs_norm(&(&u.adjoint_mul(u) - &ComplexMatrix::identity(u.cols())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::hermitian_eig;
    use crate::numkernel::vector::norm;

    #[test]
    fn same_seed_same_bits() {
        assert_eq!(random_state(42, 5), random_state(42, 5));
        assert_eq!(random_unitary(42, 4), random_unitary(42, 4));
        assert_eq!(random_density_matrix(9, 3), random_density_matrix(9, 3));
        assert_ne!(random_state(42, 5), random_state(43, 5));
    }

    #[test]
    fn state_is_unit() {
        for seed in 0..20 {
            assert!((norm(&random_state(seed, 1 + (seed as usize % 7))) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn density_is_state() {
        for seed in 0..20 {
            let w = random_density_matrix(seed, 4);
            assert!((w.trace().re - 1.0).abs() < 1e-12);
            assert!(w.trace().im.abs() < 1e-12);
            let e = hermitian_eig(&w).unwrap();
            assert!(e.min() >= -1e-12);
        }
    }

    #[test]
    fn unitary_is_unitary() {
        for seed in 0..20 {
            let u = random_unitary(seed, 6);
            assert!(unitarity_residual(&u) <= 1e-10);
            assert!(unitarity_residual(&u.adjoint()) <= 1e-10);
        }
    }

    #[test]
    fn projection_has_requested_rank() {
        let mut rng = seeded_rng(1);
        let p = random_projection_with(&mut rng, 6, 2);
        assert!(p.is_projection(1e-12));
        assert!((p.trace().re - 2.0).abs() < 1e-12);
    }
}
