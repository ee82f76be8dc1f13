//! Helpers for complex vectors stored as slices.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

/// `⟨u, v⟩ = Σ conj(u_i) v_i`.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    assert_eq!(u.len(), v.len(), "inner product length mismatch");
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Unit vector along `v`, or `None` for the zero vector.
pub fn normalized(v: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = norm(v);
    (n > 0.0).then(|| v.iter().map(|z| z / n).collect())
}

/// `a·u + b·v`.
pub fn combine(a: Complex64, u: &[Complex64], b: Complex64, v: &[Complex64]) -> Vec<Complex64> {
    u.iter().zip(v).map(|(x, y)| a * x + b * y).collect()
}
