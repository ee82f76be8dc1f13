//! Numerical tolerances shared by every module.

/// Relative cutoff below which an eigenvalue counts as zero.
pub const RANK: f64 = 1e-10;

/// Hermiticity, idempotence, commutation and PSD residuals.
pub const STRUCTURE: f64 = 1e-10;

/// Trace of a state and sums of probability vectors.
pub const PROBABILITY: f64 = 1e-12;

/// Two nonzero eigenvalues closer than this are the same level of a flat
/// spectrum.
pub const FLAT_SPECTRUM: f64 = 1e-9;

/// Weights of a constructed family agree with `d / Σ tr P_j`.
pub const UNIFORM_EXACT: f64 = 1e-12;

/// Weights of a classified POVM agree with `d / Σ tr P_j`.
pub const UNIFORM_CLASSIFY: f64 = 1e-9;

/// `Σ V_j* V_j = I` for an encoding.
pub const ISOMETRY: f64 = 1e-9;

/// Operator norms above `1 + KAPPA_CLAMP` are rejected; values in
/// `(1, 1 + KAPPA_CLAMP]` are clamped to one.
pub const KAPPA_CLAMP: f64 = 1e-12;

/// Agreement between the closed-form error and the brute-force oracle.
pub const ORACLE: f64 = 1e-6;

/// Pair norms compared for equality.
pub const PAIR_NORM_EQUAL: f64 = 1e-9;

/// A convex sweep maximum counts as attained at a vertex within this margin.
pub const VERTEX: f64 = 1e-8;
