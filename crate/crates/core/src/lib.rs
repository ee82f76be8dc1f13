//! Optimal C*-encodings of quantum states against generalized phase-damping
//! channels.
//!
//! The crate is `no_std` and only needs `alloc`. It is organized bottom-up:
//!
//! - [`numkernel`]: dense complex matrices, Hermitian eigensolver, PSD
//!   factorization and seeded random generators.
//! - [`quantum`]: density matrices, generalized phase-damping channels, Choi
//!   matrices and the noiseless-subsystem check.
//! - [`encoding`]: POVMs, weighted projective resolutions of the identity and
//!   the encoding/decoding pair built from coordinate operators.
//! - [`constructions`]: explicit uniform families (harmonic, tensor lifts,
//!   rotation families, simplex frames, complements).
//! - [`analysis`]: closed-form worst-case errors, optimality bounds, pair-norm
//!   geometry and a brute-force worst-case oracle.
#![no_std]
#![forbid(unsafe_code)]
// `num_traits::Float` supplies libm-backed math without std. Once any crate in
// the graph links std, the inherent f64 methods win and the import goes unused.
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod constructions;
pub mod encoding;
pub mod numkernel;
pub mod quantum;
pub mod tol;

pub use num_complex::Complex64;
pub use numkernel::{ComplexMatrix, EigenSystem, NumError};
