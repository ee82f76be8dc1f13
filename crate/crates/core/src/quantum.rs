//! States and generalized phase-damping channels on `ℂᵐ ⊗ ℂˡ`.
//!
//! A channel is stored as a list of `(Q_j, p_j)` pairs and acts as
//! `ℰ(M) = Σ p_j (Q_j M Q_j + Q_j⊥ M Q_j⊥)`. Kraus operators
//! `{√p_j Q_j, √p_j Q_j⊥}` are derived on demand.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;
use rand::Rng;
use thiserror::Error;

use crate::numkernel::random::{random_density_with, seeded_rng};
use crate::numkernel::{hermitian_eig, hs_norm, kron, ComplexMatrix, NumError};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("term {index} is not an orthogonal projection (residual {residual:e})")]
    NotProjection { index: usize, residual: f64 },
    #[error("projections {i} and {j} do not commute (‖[Q_i, Q_j]‖ = {residual:e})")]
    NotCommuting { i: usize, j: usize, residual: f64 },
    #[error("weights must be nonnegative and sum to one (sum {sum}, min {min})")]
    InvalidWeights { sum: f64, min: f64 },
    #[error("block index {n} out of range 1..={m}")]
    IndexOutOfRange { n: usize, m: usize },
    #[error("pair channel needs two distinct indices, got {0:?}")]
    InvalidPair([usize; 2]),
    #[error("mix needs at least one channel and one weight per channel")]
    EmptyMix,
    #[error("not a density matrix: {0}")]
    InvalidState(&'static str),
}

/// Hermitian PSD matrix of unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, QuantumError> {
        if !matrix.is_square() {
            return Err(NumError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            }
            .into());
        }
        if matrix.hermitian_residual() > tol::STRUCTURE {
            return Err(QuantumError::InvalidState("not Hermitian"));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol::STRUCTURE || tr.im.abs() > tol::STRUCTURE {
            return Err(QuantumError::InvalidState("trace differs from one"));
        }
        let eig = hermitian_eig(&matrix)?;
        if eig.min() < -tol::STRUCTURE {
            return Err(QuantumError::InvalidState("negative eigenvalue"));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a vector normalized internally.
    pub fn pure(psi: &[Complex64]) -> Result<Self, QuantumError> {
        if psi.iter().all(|z| z.norm() == 0.0) {
            return Err(QuantumError::InvalidState("zero vector"));
        }
        Self::new(ComplexMatrix::projector_onto(psi))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64),
        }
    }

    pub fn random(seed: u64, d: usize) -> Self {
        Self::random_with(&mut seeded_rng(seed), d)
    }

    pub fn random_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Self {
        Self {
            matrix: random_density_with(rng, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `tr(W²)`.
    pub fn purity(&self) -> f64 {
        hs_norm(&self.matrix).powi(2)
    }

    /// `W₁ ⊗ W₂`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: kron(&self.matrix, &other.matrix),
        }
    }
}

/// One dephasing measurement `M ↦ QMQ + Q⊥MQ⊥` with its probability.
#[derive(Clone, Debug, PartialEq)]
pub struct DephasingTerm {
    pub projection: ComplexMatrix,
    pub weight: f64,
}

/// Convex combination of dephasing measurements with commuting projections.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseDampingChannel {
    dim: usize,
    terms: Vec<DephasingTerm>,
}

impl PhaseDampingChannel {
    /// Validates idempotence, pairwise commutation and the probability vector.
    pub fn new(dim: usize, terms: Vec<DephasingTerm>) -> Result<Self, QuantumError> {
        if terms.is_empty() {
            return Err(QuantumError::EmptyMix);
        }
        for (index, t) in terms.iter().enumerate() {
            if t.projection.shape() != (dim, dim) {
                return Err(QuantumError::DimensionMismatch {
                    expected: dim,
                    found: t.projection.rows(),
                });
            }
            let residual = t.projection.projection_residual();
            if residual > tol::STRUCTURE {
                return Err(QuantumError::NotProjection { index, residual });
            }
        }
        check_commuting(&terms)?;
        check_probability(terms.iter().map(|t| t.weight))?;
        Ok(Self { dim, terms })
    }

    /// `M ↦ M`, realized with `Q = I`.
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            terms: vec![DephasingTerm {
                projection: ComplexMatrix::identity(dim),
                weight: 1.0,
            }],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[DephasingTerm] {
        &self.terms
    }

    pub fn apply(&self, m: &ComplexMatrix) -> Result<ComplexMatrix, QuantumError> {
        apply_channel(self, m)
    }

    /// `{√p_j Q_j, √p_j Q_j⊥}`.
    pub fn kraus_operators(&self) -> Vec<ComplexMatrix> {
        let id = ComplexMatrix::identity(self.dim);
        self.terms
            .iter()
            .flat_map(|t| {
                let s = t.weight.sqrt();
                [t.projection.scale(s), (&id - &t.projection).scale(s)]
            })
            .collect()
    }
}

fn check_commuting(terms: &[DephasingTerm]) -> Result<(), QuantumError> {
    for i in 0..terms.len() {
        for j in (i + 1)..terms.len() {
            let residual = terms[i].projection.commutator_norm(&terms[j].projection);
            if residual > tol::STRUCTURE {
                return Err(QuantumError::NotCommuting { i, j, residual });
            }
        }
    }
    Ok(())
}

fn check_probability(weights: impl Iterator<Item = f64>) -> Result<(), QuantumError> {
    let (sum, min) = weights.fold((0.0, f64::INFINITY), |(s, m), w| (s + w, m.min(w)));
    if min < 0.0 || (sum - 1.0).abs() > tol::PROBABILITY || !sum.is_finite() {
        return Err(QuantumError::InvalidWeights { sum, min });
    }
    Ok(())
}

/// `Σ p_j (Q_j M Q_j + Q_j⊥ M Q_j⊥)`.
pub fn apply_channel(
    ch: &PhaseDampingChannel,
    m: &ComplexMatrix,
) -> Result<ComplexMatrix, QuantumError> {
    if m.shape() != (ch.dim, ch.dim) {
        return Err(QuantumError::DimensionMismatch {
            expected: ch.dim,
            found: m.rows(),
        });
    }
    let id = ComplexMatrix::identity(ch.dim);
    let mut out = ComplexMatrix::zeros(ch.dim, ch.dim);
    for t in &ch.terms {
        let q = &t.projection;
        let qp = &id - q;
        let kept = &q.matmul(m).matmul(q) + &qp.matmul(m).matmul(&qp);
        out = &out + &kept.scale(t.weight);
    }
    Ok(out)
}

/// `E_nn ⊗ I_l` for a 1-based block index.
pub fn block_projection(m: usize, l: usize, blocks: &[usize]) -> Result<ComplexMatrix, QuantumError> {
    let mut diag = vec![0.0; m];
    for &n in blocks {
        if n == 0 || n > m {
            return Err(QuantumError::IndexOutOfRange { n, m });
        }
        diag[n - 1] = 1.0;
    }
    Ok(kron(
        &ComplexMatrix::from_real_diagonal(&diag),
        &ComplexMatrix::identity(l),
    ))
}

/// The minimal measurement `ℰ_n` with `Q_n = E_nn ⊗ I_l`, `n` 1-based.
pub fn minimal_channel(m: usize, l: usize, n: usize) -> Result<PhaseDampingChannel, QuantumError> {
    let q = block_projection(m, l, &[n])?;
    Ok(PhaseDampingChannel {
        dim: m * l,
        terms: vec![DephasingTerm {
            projection: q,
            weight: 1.0,
        }],
    })
}

/// The pairwise measurement `ℰ_K` with `Q_K = Σ_{j∈K} E_jj ⊗ I_l`.
pub fn pair_channel(m: usize, l: usize, k: [usize; 2]) -> Result<PhaseDampingChannel, QuantumError> {
    if k[0] == k[1] {
        return Err(QuantumError::InvalidPair(k));
    }
    let q = block_projection(m, l, &k)?;
    Ok(PhaseDampingChannel {
        dim: m * l,
        terms: vec![DephasingTerm {
            projection: q,
            weight: 1.0,
        }],
    })
}

/// Convex combination `Σ_c p_c ℰ_c` with the weight lists flattened.
pub fn mix(channels: &[PhaseDampingChannel], p: &[f64]) -> Result<PhaseDampingChannel, QuantumError> {
    if channels.is_empty() || channels.len() != p.len() {
        return Err(QuantumError::EmptyMix);
    }
    check_probability(p.iter().copied())?;
    let dim = channels[0].dim;
    let mut terms = Vec::new();
    for (ch, &w) in channels.iter().zip(p) {
        if ch.dim != dim {
            return Err(QuantumError::DimensionMismatch {
                expected: dim,
                found: ch.dim,
            });
        }
        terms.extend(ch.terms.iter().map(|t| DephasingTerm {
            projection: t.projection.clone(),
            weight: t.weight * w,
        }));
    }
    check_commuting(&terms)?;
    Ok(PhaseDampingChannel { dim, terms })
}

/// `Σ_{a,b} E_ab ⊗ ℰ(E_ab)`, the Choi matrix for the unnormalized maximally
/// entangled vector.
pub fn choi_matrix(ch: &PhaseDampingChannel) -> ComplexMatrix {
    let n = ch.dim;
    let mut out = ComplexMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            let mut e = ComplexMatrix::zeros(n, n);
            e[(a, b)] = Complex64::new(1.0, 0.0);
            let img = apply_channel(ch, &e).expect("dimension matches by construction");
            out.set_block(a * n, b * n, &img);
        }
    }
    out
}

/// Partial trace over the first factor of `ℂᵐ ⊗ ℂˡ`, leaving an `l × l` matrix.
pub fn partial_trace_first(x: &ComplexMatrix, m: usize, l: usize) -> ComplexMatrix {
    assert_eq!(x.shape(), (m * l, m * l));
    ComplexMatrix::from_fn(l, l, |i, j| (0..m).map(|a| x[(a * l + i, a * l + j)]).sum())
}

/// Partial trace over the second factor, leaving an `m × m` matrix.
pub fn partial_trace_second(x: &ComplexMatrix, m: usize, l: usize) -> ComplexMatrix {
    assert_eq!(x.shape(), (m * l, m * l));
    ComplexMatrix::from_fn(m, m, |a, b| (0..l).map(|i| x[(a * l + i, b * l + i)]).sum())
}

/// Outcome of sending `W₁ ⊗ W₂` through a channel on `ℂᵐ ⊗ ℂˡ`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiselessReport {
    /// `S⁽¹⁾ = tr₂ ℰ(W₁ ⊗ W₂)`.
    pub first_factor: ComplexMatrix,
    /// `tr₁ ℰ(W₁ ⊗ W₂)`.
    pub second_factor: ComplexMatrix,
    /// `‖tr₁ ℰ(W₁ ⊗ W₂) − W₂‖_HS`.
    pub second_factor_residual: f64,
    /// `‖ℰ(W₁ ⊗ W₂) − S⁽¹⁾ ⊗ W₂‖_HS`.
    pub product_residual: f64,
}

impl NoiselessReport {
    pub fn second_factor_preserved(&self) -> bool {
        self.second_factor_residual <= tol::STRUCTURE
    }

    pub fn is_product_form(&self) -> bool {
        self.product_residual <= tol::STRUCTURE
    }

    pub fn passed(&self) -> bool {
        self.second_factor_preserved() && self.is_product_form()
    }
}

/// Checks that the second tensor factor is a noiseless subsystem for `ch` on
/// the given product input.
pub fn verify_noiseless(
    ch: &PhaseDampingChannel,
    w1: &DensityMatrix,
    w2: &DensityMatrix,
) -> Result<NoiselessReport, QuantumError> {
    let (m, l) = (w1.dim(), w2.dim());
    if ch.dim != m * l {
        return Err(QuantumError::DimensionMismatch {
            expected: ch.dim,
            found: m * l,
        });
    }
    let out = apply_channel(ch, w1.tensor(w2).matrix())?;
    let first_factor = partial_trace_second(&out, m, l);
    let second_factor = partial_trace_first(&out, m, l);
    let second_factor_residual = hs_norm(&(&second_factor - w2.matrix()));
    let product_residual = hs_norm(&(&out - &kron(&first_factor, w2.matrix())));
    Ok(NoiselessReport {
        first_factor,
        second_factor,
        second_factor_residual,
        product_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::random::{random_projection_with, random_unitary_with};

    fn all_minimal(m: usize, l: usize) -> Vec<PhaseDampingChannel> {
        (1..=m).map(|n| minimal_channel(m, l, n).unwrap()).collect()
    }

    #[test]
    fn full_dephasing_of_a_qubit() {
        let ch = PhaseDampingChannel::new(
            2,
            vec![DephasingTerm {
                projection: ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
                weight: 1.0,
            }],
        )
        .unwrap();
        let plus = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let out = ch.apply(&plus).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn commuting_input_is_fixed() {
        let ch = mix(&all_minimal(3, 2), &[0.2, 0.5, 0.3]).unwrap();
        let diag = ComplexMatrix::from_real_diagonal(&[0.1, 0.1, 0.3, 0.3, 0.15, 0.05]);
        // block-diagonal with arbitrary blocks also commutes with every E_nn ⊗ I
        let mut m = diag.clone();
        m[(0, 1)] = Complex64::new(0.02, 0.01);
        m[(1, 0)] = Complex64::new(0.02, -0.01);
        assert!(ch.apply(&m).unwrap().max_abs_diff(&m) < 1e-15);
        assert!(ch.apply(&diag).unwrap().max_abs_diff(&diag) < 1e-15);
    }

    #[test]
    fn minimal_channel_layout() {
        let c = minimal_channel(2, 1, 1).unwrap();
        assert_eq!(c.terms()[0].projection, ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));
        let c = minimal_channel(3, 2, 2).unwrap();
        assert_eq!(
            c.terms()[0].projection,
            ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 1.0, 1.0, 0.0, 0.0])
        );
        for n in 1..=4 {
            let ch = minimal_channel(4, 3, n).unwrap();
            assert_eq!(ch.terms()[0].projection.trace().re, 3.0);
        }
        assert_eq!(
            minimal_channel(3, 1, 4),
            Err(QuantumError::IndexOutOfRange { n: 4, m: 3 })
        );
        assert!(minimal_channel(3, 1, 0).is_err());
    }

    #[test]
    fn pair_channel_layout() {
        let c = pair_channel(3, 1, [1, 2]).unwrap();
        assert_eq!(c.terms()[0].projection, ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 0.0]));
        let c = pair_channel(4, 3, [2, 4]).unwrap();
        assert_eq!(c.terms()[0].projection.trace().re, 6.0);
        assert_eq!(pair_channel(3, 1, [2, 2]), Err(QuantumError::InvalidPair([2, 2])));
        assert!(pair_channel(3, 1, [1, 5]).is_err());

        // K = {1, 2} with m = 2 gives Q_K = I, the identity channel
        let c = pair_channel(2, 2, [1, 2]).unwrap();
        let w = DensityMatrix::random(4, 4);
        assert!(c.apply(w.matrix()).unwrap().max_abs_diff(w.matrix()) < 1e-15);
    }

    #[test]
    fn mix_is_linear() {
        let chans = all_minimal(2, 2);
        assert_eq!(mix(&chans[..1], &[1.0]).unwrap(), chans[0]);
        let m = DensityMatrix::random(3, 4);
        let both = mix(&chans, &[0.5, 0.5]).unwrap();
        let avg = (&chans[0].apply(m.matrix()).unwrap() + &chans[1].apply(m.matrix()).unwrap())
            .scale(0.5);
        assert!(both.apply(m.matrix()).unwrap().max_abs_diff(&avg) < 1e-15);
        let s: f64 = both.terms().iter().map(|t| t.weight).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mix_rejects_bad_input() {
        let chans = all_minimal(2, 1);
        assert!(matches!(mix(&chans, &[0.7, 0.7]), Err(QuantumError::InvalidWeights { .. })));
        assert!(matches!(mix(&chans, &[1.2, -0.2]), Err(QuantumError::InvalidWeights { .. })));
        assert_eq!(mix(&[], &[]), Err(QuantumError::EmptyMix));

        let mut rng = crate::numkernel::random::seeded_rng(0);
        let p = random_projection_with(&mut rng, 2, 1);
        let odd = PhaseDampingChannel::new(2, vec![DephasingTerm { projection: p, weight: 1.0 }]).unwrap();
        assert!(matches!(
            mix(&[chans[0].clone(), odd], &[0.5, 0.5]),
            Err(QuantumError::NotCommuting { .. })
        ));
    }

    #[test]
    fn constructor_rejects_non_projection() {
        let bad = ComplexMatrix::from_real_diagonal(&[0.5, 1.0]);
        assert!(matches!(
            PhaseDampingChannel::new(2, vec![DephasingTerm { projection: bad, weight: 1.0 }]),
            Err(QuantumError::NotProjection { index: 0, .. })
        ));
    }

    #[test]
    fn apply_rejects_dim_mismatch() {
        let ch = minimal_channel(2, 2, 1).unwrap();
        assert!(matches!(
            ch.apply(&ComplexMatrix::identity(3)),
            Err(QuantumError::DimensionMismatch { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn kraus_form_agrees() {
        let ch = mix(&all_minimal(3, 2), &[0.1, 0.6, 0.3]).unwrap();
        let w = DensityMatrix::random(8, 6);
        let ks = ch.kraus_operators();
        let mut sum = ComplexMatrix::zeros(6, 6);
        let mut out = ComplexMatrix::zeros(6, 6);
        for k in &ks {
            sum = &sum + &k.adjoint_mul(k);
            out = &out + &k.conjugate_by(w.matrix());
        }
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-14);
        assert!(out.max_abs_diff(&ch.apply(w.matrix()).unwrap()) < 1e-14);
    }

    #[test]
    fn choi_of_identity_channel() {
        let c = choi_matrix(&PhaseDampingChannel::identity(3));
        let e = hermitian_eig(&c).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-12);
        assert!(e.values[1..].iter().all(|v| v.abs() < 1e-12));
        assert!((c.trace().re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn choi_is_psd_and_trace_preserving() {
        let ch = mix(&all_minimal(3, 2), &[0.3, 0.3, 0.4]).unwrap();
        let c = choi_matrix(&ch);
        assert!(hermitian_eig(&c).unwrap().min() >= -1e-10);
        let n = ch.dim();
        // trace over the output (second) factor must give the identity
        let reduced = partial_trace_second(&c, n, n);
        assert!(reduced.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
    }

    #[test]
    fn noiseless_minimal_channel() {
        for n in 1..=3 {
            let ch = minimal_channel(3, 2, n).unwrap();
            let r = verify_noiseless(&ch, &DensityMatrix::random(1, 3), &DensityMatrix::random(2, 2)).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn noiseless_diagonal_first_factor_is_fixed() {
        let ch = mix(&all_minimal(3, 2), &[0.2, 0.2, 0.6]).unwrap();
        let w1 = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.5, 0.3, 0.2])).unwrap();
        let w2 = DensityMatrix::random(5, 2);
        let prod = w1.tensor(&w2);
        let out = ch.apply(prod.matrix()).unwrap();
        assert!(out.max_abs_diff(prod.matrix()) < 1e-15);
        let r = verify_noiseless(&ch, &w1, &w2).unwrap();
        assert!(r.product_residual < 1e-15);
    }

    #[test]
    fn noiseless_detects_a_noisy_factor() {
        // dephasing inside the second factor breaks the noiseless property
        let q = kron(&ComplexMatrix::identity(2), &ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));
        let ch = PhaseDampingChannel::new(4, vec![DephasingTerm { projection: q, weight: 1.0 }]).unwrap();
        let plus = DensityMatrix::pure(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        let r = verify_noiseless(&ch, &DensityMatrix::maximally_mixed(2), &plus).unwrap();
        assert!(!r.second_factor_preserved());
    }

    #[test]
    fn noiseless_rejects_dim_mismatch() {
        let ch = minimal_channel(3, 2, 1).unwrap();
        assert!(verify_noiseless(&ch, &DensityMatrix::random(1, 2), &DensityMatrix::random(2, 2)).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.5, -0.5])).is_err());
        let mut rng = crate::numkernel::random::seeded_rng(2);
        let u = random_unitary_with(&mut rng, 3);
        let w = u.conjugate_by(&ComplexMatrix::from_real_diagonal(&[0.6, 0.4, 0.0]));
        assert!(DensityMatrix::new(w).is_ok());
    }
}
