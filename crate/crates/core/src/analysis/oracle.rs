//! Brute-force maximization of `‖W − Φ*(ℰ(Φ(W)))‖_HS` over states.
//!
//! The objective is convex in `W`, so the search runs over pure states. Three
//! strategies are stacked and the best value wins:
//!
//! 1. two-support candidates `√p u_r + √(1−p) u_s` built from eigenpairs of
//!    each decoded measurement `A_t = Ṽ* Q_t Ṽ`, with `p` chosen from the
//!    stationary point of the restricted quadratic and a uniform grid;
//! 2. Haar-random pure states;
//! 3. conditional-gradient ascent from the best candidates: the next iterate
//!    is the top eigenvector of the objective's gradient `L(L(W))`.
//!
//! Every reported value is the objective at an explicit state, so the result
//! is a lower bound on the true supremum. Strategies 2 and 3 do not rely on
//! the two-support structure used by strategy 1.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::AnalysisError;
use crate::encoding::{CstarEncoding, EncodingError};
use crate::numkernel::random::{random_state_with, seeded_rng};
use crate::numkernel::{hermitian_eig, hs_norm, ComplexMatrix};
use crate::quantum::{PhaseDampingChannel, QuantumError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForceBudget {
    /// Random pure states drawn in strategy 2.
    pub samples: usize,
    pub seed: u64,
    /// Number of best candidates refined by ascent.
    pub refine: usize,
    pub ascent_steps: usize,
    /// Grid resolution for the mixing weight in strategy 1.
    pub grid: usize,
}

impl Default for BruteForceBudget {
    fn default() -> Self {
        Self {
            samples: 64,
            seed: 0,
            refine: 4,
            ascent_steps: 60,
            grid: 200,
        }
    }
}

impl BruteForceBudget {
    pub fn with_samples(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    TwoSupport,
    RandomSample,
    Ascent,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::TwoSupport => "two_support",
            Strategy::RandomSample => "random_sample",
            Strategy::Ascent => "ascent",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteForceResult {
    pub error: f64,
    pub witness: Vec<Complex64>,
    pub strategy: Strategy,
}

/// `Φ* ∘ ℰ ∘ Φ` as Kraus pairs `(p_t, Ṽ* Q_t Ṽ, Ṽ* Q_t⊥ Ṽ)` on `ℂᵈ`.
pub(crate) struct DecodedChannel {
    d: usize,
    terms: Vec<(f64, ComplexMatrix, ComplexMatrix)>,
}

impl DecodedChannel {
    pub(crate) fn new(enc: &CstarEncoding, ch: &PhaseDampingChannel) -> Result<Self, AnalysisError> {
        let n = enc.m() * enc.l();
        if ch.dim() != n {
            return Err(QuantumError::DimensionMismatch {
                expected: n,
                found: ch.dim(),
            }
            .into());
        }
        let v = enc.isometry();
        let id = ComplexMatrix::identity(n);
        let terms = ch
            .terms()
            .iter()
            .map(|t| {
                let a = v.adjoint_mul(&t.projection.matmul(&v)).hermitian_part();
                let qp = &id - &t.projection;
                let b = v.adjoint_mul(&qp.matmul(&v)).hermitian_part();
                (t.weight, a, b)
            })
            .collect();
        Ok(Self { d: enc.d(), terms })
    }

    /// `‖Y‖²_HS` for `W = φφ*`.
    pub(crate) fn objective(&self, phi: &[Complex64]) -> f64 {
        let mut y = ComplexMatrix::outer(phi, phi);
        for (p, a, b) in &self.terms {
            let av = a.mul_vec(phi);
            let bv = b.mul_vec(phi);
            for i in 0..self.d {
                for j in 0..self.d {
                    y[(i, j)] -= (av[i] * av[j].conj() + bv[i] * bv[j].conj()) * *p;
                }
            }
        }
        hs_norm(&y).powi(2)
    }

    /// `L(X) = X − Σ p_t (A_t X A_t + B_t X B_t)`; self-adjoint for the HS
    /// inner product.
    fn error_map(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut y = x.clone();
        for (p, a, b) in &self.terms {
            let kept = &a.matmul(x).matmul(a) + &b.matmul(x).matmul(b);
            y = &y - &kept.scale(*p);
        }
        y
    }

    fn ascend(&self, start: &[Complex64], steps: usize) -> (f64, Vec<Complex64>) {
        let mut phi = start.to_vec();
        let mut val = self.objective(&phi);
        for _ in 0..steps {
            let w = ComplexMatrix::outer(&phi, &phi);
            let grad = self.error_map(&self.error_map(&w)).hermitian_part();
            let Ok(eig) = hermitian_eig(&grad) else { break };
            let next = eig.top_vector();
            let next_val = self.objective(&next);
            if next_val <= val * (1.0 + 1e-15) {
                break;
            }
            phi = next;
            val = next_val;
        }
        (val, phi)
    }
}

/// `((1−x)y + (1−y)x)²`, the squared error weight of the eigen-pair `(x, y)`.
fn pair_weight(x: f64, y: f64) -> f64 {
    ((1.0 - x) * y + (1.0 - y) * x).powi(2)
}

/// Best mixing weight for `a p² + 2b p(1−p) + c (1−p)²` on `[0, 1]`.
fn best_mixing_weight(x: f64, y: f64, grid: usize) -> f64 {
    let (a, b, c) = (pair_weight(x, x), pair_weight(x, y), pair_weight(y, y));
    let value = |p: f64| a * p * p + 2.0 * b * p * (1.0 - p) + c * (1.0 - p) * (1.0 - p);
    let mut best = (value(1.0), 1.0);
    let mut consider = |p: f64| {
        if (0.0..=1.0).contains(&p) {
            let v = value(p);
            if v > best.0 {
                best = (v, p);
            }
        }
    };
    consider(0.0);
    let denom = a - 2.0 * b + c;
    if denom.abs() > f64::EPSILON {
        consider((c - b) / denom);
    }
    for i in 0..=grid {
        consider(i as f64 / grid.max(1) as f64);
    }
    best.1
}

/// Worst-case reconstruction error of `enc` under `ch`, searched over states.
pub fn error_brute_force(
    enc: &CstarEncoding,
    ch: &PhaseDampingChannel,
    budget: &BruteForceBudget,
) -> Result<f64, AnalysisError> {
    Ok(search(enc, ch, budget)?.error)
}

/// Like [`error_brute_force`], also returning the maximizing state.
pub fn search(
    enc: &CstarEncoding,
    ch: &PhaseDampingChannel,
    budget: &BruteForceBudget,
) -> Result<BruteForceResult, AnalysisError> {
    let dec = DecodedChannel::new(enc, ch)?;
    let d = enc.d();
    let mut candidates: Vec<(f64, Vec<Complex64>, Strategy)> = Vec::new();

    for (_, a, _) in &dec.terms {
        let eig = hermitian_eig(a)?;
        for r in 0..d {
            for s in r..d {
                let phi = if r == s {
                    eig.vector(r)
                } else {
                    let p = best_mixing_weight(eig.values[r], eig.values[s], budget.grid);
                    let (ur, us) = (eig.vector(r), eig.vector(s));
                    ur.iter()
                        .zip(&us)
                        .map(|(x, y)| x * p.sqrt() + y * (1.0 - p).sqrt())
                        .collect()
                };
                candidates.push((dec.objective(&phi), phi, Strategy::TwoSupport));
            }
        }
    }

    let mut rng = seeded_rng(budget.seed);
    for _ in 0..budget.samples {
        let phi = random_state_with(&mut rng, d);
        candidates.push((dec.objective(&phi), phi, Strategy::RandomSample));
    }

    candidates.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut best = candidates
        .first()
        .cloned()
        .ok_or(AnalysisError::Encoding(EncodingError::TooSmall { d, m: enc.m(), l: enc.l() }))?;

    // refine the leading candidates of each strategy so a lucky two-support
    // start cannot crowd out the independent random starts
    let leaders = candidates
        .iter()
        .filter(|c| c.2 == Strategy::TwoSupport)
        .take(budget.refine)
        .chain(candidates.iter().filter(|c| c.2 == Strategy::RandomSample).take(budget.refine));
    for (val, phi, _) in leaders {
        let (v, psi) = dec.ascend(phi, budget.ascent_steps);
        if v > best.0 && v > *val {
            best = (v, psi, Strategy::Ascent);
        }
    }

    Ok(BruteForceResult {
        error: best.0.max(0.0).sqrt(),
        witness: best.1,
        strategy: best.2,
    })
}

/// Best value found by random sampling and ascent alone, without the
/// two-support candidates.
pub fn error_without_two_support(
    enc: &CstarEncoding,
    ch: &PhaseDampingChannel,
    budget: &BruteForceBudget,
) -> Result<f64, AnalysisError> {
    let dec = DecodedChannel::new(enc, ch)?;
    let mut rng = seeded_rng(budget.seed);
    let mut samples: Vec<(f64, Vec<Complex64>)> = (0..budget.samples)
        .map(|_| {
            let phi = random_state_with(&mut rng, enc.d());
            (dec.objective(&phi), phi)
        })
        .collect();
    samples.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut best = samples.first().map_or(0.0, |s| s.0);
    for (_, phi) in samples.iter().take(budget.refine) {
        best = best.max(dec.ascend(phi, budget.ascent_steps).0);
    }
    Ok(best.max(0.0).sqrt())
}

/// `Y = W − Φ*(ℰ(Φ(W)))` through the full encode, transmit, decode path.
pub fn reconstruction_error(
    enc: &CstarEncoding,
    ch: &PhaseDampingChannel,
    w: &ComplexMatrix,
) -> Result<ComplexMatrix, AnalysisError> {
    let g = enc.encode(w)?;
    let out = ch.apply(&g)?;
    Ok(w - &enc.decode(&out)?)
}
