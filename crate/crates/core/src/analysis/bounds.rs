use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::AnalysisError;
use crate::numkernel::vector::combine;
use crate::numkernel::{hermitian_eig, ComplexMatrix};
use crate::tol;

fn clamp_kappa(kappa: f64) -> Result<f64, AnalysisError> {
    if !(0.0..=1.0 + tol::KAPPA_CLAMP).contains(&kappa) {
        return Err(AnalysisError::KappaOutOfRange { kappa });
    }
    Ok(kappa.min(1.0))
}

/// Worst-case error norm as a function of `κ = ‖A‖`:
/// `2κ(1 − κ)` for `κ ≤ 1/2`, `κ / √(−2 + 8κ − 4κ²)` above.
pub fn error_closed_form(kappa: f64) -> Result<f64, AnalysisError> {
    let k = clamp_kappa(kappa)?;
    Ok(if k <= 0.5 {
        2.0 * k * (1.0 - k)
    } else {
        k / (-2.0 + 8.0 * k - 4.0 * k * k).sqrt()
    })
}

/// A state attaining [`error_closed_form`] for `A`.
///
/// For `κ ≤ 1/2` this is the top eigenvector. Above, it mixes the top
/// eigenvector and a kernel vector with weight `p = 1/(2 − 4(1 − κ)²)`.
pub fn worst_case_state(a: &ComplexMatrix) -> Result<Vec<Complex64>, AnalysisError> {
    let eig = hermitian_eig(a)?;
    let kappa = clamp_kappa(eig.max().max(0.0)).map_err(|_| AnalysisError::KappaOutOfRange {
        kappa: eig.max(),
    })?;
    if eig.max() > 1.0 + tol::STRUCTURE {
        return Err(AnalysisError::KappaOutOfRange { kappa: eig.max() });
    }
    let top = eig.top_vector();
    if kappa <= 0.5 {
        return Ok(top);
    }
    let kernel = eig.kernel_indices();
    let Some(&z) = kernel.first() else {
        return Err(AnalysisError::NoKernel { kappa });
    };
    let p = 1.0 / (2.0 - 4.0 * (1.0 - kappa).powi(2));
    Ok(combine(
        Complex64::new(p.sqrt(), 0.0),
        &top,
        Complex64::new((1.0 - p).max(0.0).sqrt(), 0.0),
        &eig.vector(z),
    ))
}

fn check_regime(d: usize, m: usize, l: usize) -> Result<(), AnalysisError> {
    if l == 0 || m == 0 || d == 0 {
        return Err(AnalysisError::Parameters("d, m and l must be positive"));
    }
    if l >= d {
        return Err(AnalysisError::Parameters("bound requires l < d"));
    }
    if d > m * l {
        return Err(AnalysisError::Parameters("bound requires d <= ml"));
    }
    Ok(())
}

/// Smallest achievable `max_n e(Φ, ℰ_n)`: the closed form at `κ = d/(ml)`.
pub fn optimal_bound_minimal(d: usize, m: usize, l: usize) -> Result<f64, AnalysisError> {
    check_regime(d, m, l)?;
    error_closed_form(d as f64 / (m * l) as f64)
}

/// `d / √(8mld − 2m²l² − 4d²)`, the same bound written in `(d, m, l)`.
/// Only meaningful when `d/(ml) > 1/2`.
pub fn minimal_bound_printed(d: usize, m: usize, l: usize) -> Result<f64, AnalysisError> {
    check_regime(d, m, l)?;
    let (d, ml) = (d as f64, (m * l) as f64);
    if d / ml <= 0.5 {
        return Err(AnalysisError::Parameters("second branch needs d/(ml) > 1/2"));
    }
    Ok(d / (8.0 * ml * d - 2.0 * ml * ml - 4.0 * d * d).sqrt())
}

/// Largest pair norm `‖P_i + P_j‖` forced on a uniform rank-`l` family,
/// `1 + √((lm − d)/(d(m − 1)))`. Below `d = 2l` every pair norm is 2 and the
/// call fails with [`AnalysisError::SaturatedPairRegime`].
pub fn welch_pair_bound(d: usize, l: usize, m: usize) -> Result<f64, AnalysisError> {
    if m < 2 || l == 0 {
        return Err(AnalysisError::Parameters("Welch bound needs m >= 2 and l >= 1"));
    }
    if l * m < d {
        return Err(AnalysisError::Parameters("Welch bound needs lm >= d"));
    }
    if d < 2 * l {
        return Err(AnalysisError::SaturatedPairRegime { d, l });
    }
    let (d, l, m) = (d as f64, l as f64, m as f64);
    Ok(1.0 + ((l * m - d) / (d * (m - 1.0))).sqrt())
}

/// `κ` forced on the worst pair of an optimal uniform encoding:
/// `2d/(ml)` when `d < 2l`, else `d/(ml) + √(d(lm − d)/(m²l²(m − 1)))`.
pub fn secondary_kappa(d: usize, l: usize, m: usize) -> Result<f64, AnalysisError> {
    check_regime(d, m, l)?;
    let (df, lf, mf) = (d as f64, l as f64, m as f64);
    let kappa = if d < 2 * l {
        2.0 * df / (mf * lf)
    } else {
        df / (mf * lf) + (df * (lf * mf - df) / (mf * mf * lf * lf * (mf - 1.0))).sqrt()
    };
    clamp_kappa(kappa)
}

pub fn secondary_bound(d: usize, l: usize, m: usize) -> Result<f64, AnalysisError> {
    error_closed_form(secondary_kappa(d, l, m)?)
}
