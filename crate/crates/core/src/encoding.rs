//! POVMs, weighted projective resolutions of the identity and the
//! encoding/decoding pair they induce.
//!
//! An encoding `Φ(W) = Ṽ W Ṽ*` is stored by its coordinate operators
//! `V_j : ℂᵈ → ℂˡ`, the `l × d` blocks of the isometry `Ṽ`. The associated
//! POVM is `A_j = V_j* V_j`.

use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;
use thiserror::Error;

use crate::numkernel::random::ginibre_with;
use crate::numkernel::{
    factor_psd, hermitian_eig, hs_norm, numerical_rank, orthonormalize_columns, ComplexMatrix, NumError,
};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EncodingError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("expected a {expected_rows}x{expected_cols} matrix at index {index}, found {rows}x{cols}")]
    Shape {
        index: usize,
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("POVM is invalid (identity residual {identity_residual:e}, PSD violation {psd_violation:e})")]
    InvalidPovm {
        identity_residual: f64,
        psd_violation: f64,
    },
    #[error("element {index} is not a weighted projection (spread of nonzero spectrum {spread:e})")]
    NotProjective { index: usize, spread: f64 },
    #[error("element {index} is zero")]
    ZeroElement { index: usize },
    #[error("projection {index} is not idempotent Hermitian (residual {residual:e})")]
    NotProjection { index: usize, residual: f64 },
    #[error("weight {index} must be positive and finite, got {weight}")]
    BadWeight { index: usize, weight: f64 },
    #[error("weighted projections do not resolve the identity (residual {residual:e})")]
    Resolution { residual: f64 },
    #[error("weights and projections differ in length ({weights} vs {projections})")]
    LengthMismatch { weights: usize, projections: usize },
    #[error("element {index} has rank {rank} > l = {l}")]
    RankOverflow { index: usize, rank: usize, l: usize },
    #[error("coordinate operators are not an isometry (‖Σ V_j*V_j − I‖ = {residual:e})")]
    NotIsometry { residual: f64 },
    #[error("no isometry ℂ^{d} → ℂ^{m}⊗ℂ^{l} exists (l·m < d)")]
    TooSmall { d: usize, m: usize, l: usize },
    #[error("family is not uniform")]
    NotUniform,
}

/// Finite family of `d × d` operators, expected PSD and summing to `I`.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    d: usize,
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    /// Checks shapes only; use [`validate_povm`] for the operator conditions.
    pub fn new(d: usize, elements: Vec<ComplexMatrix>) -> Result<Self, EncodingError> {
        for (index, e) in elements.iter().enumerate() {
            if e.shape() != (d, d) {
                return Err(EncodingError::Shape {
                    index,
                    expected_rows: d,
                    expected_cols: d,
                    rows: e.rows(),
                    cols: e.cols(),
                });
            }
        }
        Ok(Self { d, elements })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn validate(&self) -> Result<PovmReport, EncodingError> {
        validate_povm(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PovmReport {
    /// `max(0, −λ_min(A_j))` per element.
    pub psd_violations: Vec<f64>,
    /// `‖Σ A_j − I‖_HS`.
    pub identity_residual: f64,
    pub ranks: Vec<usize>,
    /// `k_j = ‖A_j‖`.
    pub norms: Vec<f64>,
    pub passed: bool,
}

pub fn validate_povm(p: &Povm) -> Result<PovmReport, EncodingError> {
    let mut psd_violations = Vec::with_capacity(p.elements.len());
    let mut ranks = Vec::with_capacity(p.elements.len());
    let mut norms = Vec::with_capacity(p.elements.len());
    let mut sum = ComplexMatrix::zeros(p.d, p.d);
    for a in &p.elements {
        let eig = hermitian_eig(a)?;
        psd_violations.push((-eig.min()).max(0.0));
        ranks.push(numerical_rank(&eig));
        norms.push(eig.max().max(0.0));
        sum = &sum + a;
    }
    let identity_residual = hs_norm(&(&sum - &ComplexMatrix::identity(p.d)));
    let passed = identity_residual <= tol::STRUCTURE
        && psd_violations.iter().all(|&v| v <= tol::STRUCTURE);
    Ok(PovmReport {
        psd_violations,
        identity_residual,
        ranks,
        norms,
        passed,
    })
}

/// Which constructor produced a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Harmonic,
    TensorLift,
    Rotation,
    Simplex,
    Complementary,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::Harmonic => "harmonic",
            FamilyKind::TensorLift => "tensor_lift",
            FamilyKind::Rotation => "rotation",
            FamilyKind::Simplex => "simplex",
            FamilyKind::Complementary => "complementary",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "harmonic" => FamilyKind::Harmonic,
            "tensor_lift" => FamilyKind::TensorLift,
            "rotation" => FamilyKind::Rotation,
            "simplex" => FamilyKind::Simplex,
            "complementary" => FamilyKind::Complementary,
            _ => return None,
        })
    }
}

/// Weighted projections `{k_j P_j}` with `Σ k_j P_j = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedProjectionFamily {
    d: usize,
    weights: Vec<f64>,
    projections: Vec<ComplexMatrix>,
    ranks: Vec<usize>,
    uniform: bool,
    kind: Option<FamilyKind>,
}

impl WeightedProjectionFamily {
    /// Validates idempotence, positivity of weights and the resolution of the
    /// identity at `1e-10`.
    pub fn new(
        d: usize,
        weights: Vec<f64>,
        projections: Vec<ComplexMatrix>,
    ) -> Result<Self, EncodingError> {
        Self::build(d, weights, projections, tol::STRUCTURE, tol::UNIFORM_EXACT)
    }

    fn build(
        d: usize,
        weights: Vec<f64>,
        projections: Vec<ComplexMatrix>,
        resolution_tol: f64,
        uniform_tol: f64,
    ) -> Result<Self, EncodingError> {
        if weights.len() != projections.len() {
            return Err(EncodingError::LengthMismatch {
                weights: weights.len(),
                projections: projections.len(),
            });
        }
        let mut sum = ComplexMatrix::zeros(d, d);
        let mut ranks = Vec::with_capacity(weights.len());
        for (index, (&k, p)) in weights.iter().zip(&projections).enumerate() {
            if !(k > 0.0 && k.is_finite()) {
                return Err(EncodingError::BadWeight { index, weight: k });
            }
            if p.shape() != (d, d) {
                return Err(EncodingError::Shape {
                    index,
                    expected_rows: d,
                    expected_cols: d,
                    rows: p.rows(),
                    cols: p.cols(),
                });
            }
            let residual = p.projection_residual();
            if residual > tol::STRUCTURE {
                return Err(EncodingError::NotProjection { index, residual });
            }
            ranks.push(p.trace().re.round() as usize);
            sum = &sum + &p.scale(k);
        }
        let residual = hs_norm(&(&sum - &ComplexMatrix::identity(d)));
        if residual > resolution_tol {
            return Err(EncodingError::Resolution { residual });
        }
        let trace_sum: f64 = projections.iter().map(|p| p.trace().re).sum();
        let k = d as f64 / trace_sum;
        let uniform = weights.iter().all(|w| (w - k).abs() <= uniform_tol);
        Ok(Self {
            d,
            weights,
            projections,
            ranks,
            uniform,
            kind: None,
        })
    }

    pub fn with_kind(mut self, kind: FamilyKind) -> Self {
        self.kind = Some(kind);
        self
    }

    pub fn kind(&self) -> Option<FamilyKind> {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of elements.
    pub fn m(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn projections(&self) -> &[ComplexMatrix] {
        &self.projections
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn max_rank(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// `d / Σ tr P_j`, the common weight of a uniform family.
    pub fn uniform_weight(&self) -> f64 {
        self.d as f64 / self.trace_sum()
    }

    pub fn trace_sum(&self) -> f64 {
        self.projections.iter().map(|p| p.trace().re).sum()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `A_j = k_j P_j`.
    pub fn elements(&self) -> Vec<ComplexMatrix> {
        self.weights
            .iter()
            .zip(&self.projections)
            .map(|(&k, p)| p.scale(k))
            .collect()
    }

    pub fn to_povm(&self) -> Povm {
        Povm {
            d: self.d,
            elements: self.elements(),
        }
    }

    /// `‖Σ k_j P_j − I‖_HS`.
    pub fn resolution_residual(&self) -> f64 {
        let sum = self
            .elements()
            .iter()
            .fold(ComplexMatrix::zeros(self.d, self.d), |acc, a| &acc + a);
        hs_norm(&(&sum - &ComplexMatrix::identity(self.d)))
    }

    /// `l Σ k_j ≥ d`, with equality exactly when every rank equals `l`.
    pub fn trace_inequality(&self, l: usize) -> TraceInequality {
        let lhs = l as f64 * self.weight_sum();
        TraceInequality {
            lhs,
            d: self.d,
            tight: (lhs - self.d as f64).abs() <= tol::FLAT_SPECTRUM,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceInequality {
    /// `l Σ k_j`.
    pub lhs: f64,
    pub d: usize,
    pub tight: bool,
}

impl TraceInequality {
    pub fn holds(&self) -> bool {
        self.lhs >= self.d as f64 - tol::FLAT_SPECTRUM
    }
}

/// Splits every POVM element into `k_j P_j`; fails on the first element whose
/// nonzero spectrum is not flat.
pub fn classify_family(p: &Povm) -> Result<WeightedProjectionFamily, EncodingError> {
    let mut weights = Vec::with_capacity(p.elements.len());
    let mut projections = Vec::with_capacity(p.elements.len());
    for (index, a) in p.elements.iter().enumerate() {
        let eig = hermitian_eig(a)?;
        let rank = numerical_rank(&eig);
        if rank == 0 {
            return Err(EncodingError::ZeroElement { index });
        }
        let top = eig.values[0];
        let low = eig.values[rank - 1];
        let spread = top - low;
        if spread > tol::FLAT_SPECTRUM {
            return Err(EncodingError::NotProjective { index, spread });
        }
        let mut proj = ComplexMatrix::zeros(p.d, p.d);
        for r in 0..rank {
            proj = &proj + &ComplexMatrix::outer(&eig.vector(r), &eig.vector(r));
        }
        weights.push(eig.values[..rank].iter().sum::<f64>() / rank as f64);
        projections.push(proj.hermitian_part());
    }
    let report = validate_povm(p)?;
    if !report.passed {
        return Err(EncodingError::InvalidPovm {
            identity_residual: report.identity_residual,
            psd_violation: report.psd_violations.iter().copied().fold(0.0, f64::max),
        });
    }
    let m = weights.len().max(1) as f64;
    WeightedProjectionFamily::build(
        p.d,
        weights,
        projections,
        tol::STRUCTURE + m * tol::FLAT_SPECTRUM,
        tol::UNIFORM_CLASSIFY,
    )
}

/// Encoding `Φ : B(ℂᵈ) → B(ℂᵐ ⊗ ℂˡ)` given by coordinate operators.
#[derive(Clone, Debug, PartialEq)]
pub struct CstarEncoding {
    d: usize,
    m: usize,
    l: usize,
    coordinate_ops: Vec<ComplexMatrix>,
}

impl CstarEncoding {
    /// Requires `m` operators of shape `l × d` with `Σ V_j* V_j = I` within
    /// `1e-9`.
    pub fn new(
        d: usize,
        m: usize,
        l: usize,
        coordinate_ops: Vec<ComplexMatrix>,
    ) -> Result<Self, EncodingError> {
        if l * m < d {
            return Err(EncodingError::TooSmall { d, m, l });
        }
        if coordinate_ops.len() != m {
            return Err(EncodingError::LengthMismatch {
                weights: m,
                projections: coordinate_ops.len(),
            });
        }
        for (index, v) in coordinate_ops.iter().enumerate() {
            if v.shape() != (l, d) {
                return Err(EncodingError::Shape {
                    index,
                    expected_rows: l,
                    expected_cols: d,
                    rows: v.rows(),
                    cols: v.cols(),
                });
            }
        }
        let enc = Self {
            d,
            m,
            l,
            coordinate_ops,
        };
        let residual = enc.isometry_residual();
        if residual > tol::ISOMETRY {
            return Err(EncodingError::NotIsometry { residual });
        }
        Ok(enc)
    }

    /// Splits an `(ml) × d` isometry into `m` blocks of `l` rows.
    pub fn from_isometry(m: usize, l: usize, v: &ComplexMatrix) -> Result<Self, EncodingError> {
        if v.rows() != m * l {
            return Err(EncodingError::Shape {
                index: 0,
                expected_rows: m * l,
                expected_cols: v.cols(),
                rows: v.rows(),
                cols: v.cols(),
            });
        }
        let d = v.cols();
        let ops = (0..m).map(|j| v.block(j * l, 0, l, d)).collect();
        Self::new(d, m, l, ops)
    }

    /// Factors every element as `A_j = V_j* V_j` with `V_j` of height `l`.
    pub fn from_povm(p: &Povm, l: usize) -> Result<Self, EncodingError> {
        let mut ops = Vec::with_capacity(p.elements.len());
        for (index, a) in p.elements.iter().enumerate() {
            let v = factor_psd(a, l).map_err(|e| match e {
                NumError::RankOverflow { rank, .. } => EncodingError::RankOverflow { index, rank, l },
                other => other.into(),
            })?;
            ops.push(v);
        }
        Self::new(p.d, ops.len(), l, ops)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn coordinate_ops(&self) -> &[ComplexMatrix] {
        &self.coordinate_ops
    }

    /// The stacked `(ml) × d` isometry `Ṽ`.
    pub fn isometry(&self) -> ComplexMatrix {
        let mut v = ComplexMatrix::zeros(self.m * self.l, self.d);
        for (j, op) in self.coordinate_ops.iter().enumerate() {
            v.set_block(j * self.l, 0, op);
        }
        v
    }

    /// `A_j = V_j* V_j`.
    pub fn povm_element(&self, j: usize) -> ComplexMatrix {
        let v = &self.coordinate_ops[j];
        v.adjoint_mul(v).hermitian_part()
    }

    pub fn povm(&self) -> Povm {
        Povm {
            d: self.d,
            elements: (0..self.m).map(|j| self.povm_element(j)).collect(),
        }
    }

    pub fn isometry_residual(&self) -> f64 {
        let sum = self
            .coordinate_ops
            .iter()
            .fold(ComplexMatrix::zeros(self.d, self.d), |acc, v| &acc + &v.adjoint_mul(v));
        hs_norm(&(&sum - &ComplexMatrix::identity(self.d)))
    }

    /// `Φ(W)`, assembled block by block as `G_ij = V_i W V_j*`.
    pub fn encode(&self, w: &ComplexMatrix) -> Result<ComplexMatrix, EncodingError> {
        self.check_input(w, self.d, 0)?;
        let n = self.m * self.l;
        let mut g = ComplexMatrix::zeros(n, n);
        let vw: Vec<ComplexMatrix> = self.coordinate_ops.iter().map(|v| v.matmul(w)).collect();
        for (i, vi_w) in vw.iter().enumerate() {
            for (j, vj) in self.coordinate_ops.iter().enumerate() {
                g.set_block(i * self.l, j * self.l, &vi_w.matmul(&vj.adjoint()));
            }
        }
        Ok(g)
    }

    /// `Φ*(G) = Ṽ* G Ṽ`.
    pub fn decode(&self, g: &ComplexMatrix) -> Result<ComplexMatrix, EncodingError> {
        self.check_input(g, self.m * self.l, 0)?;
        let v = self.isometry();
        Ok(v.adjoint_mul(&g.matmul(&v)))
    }

    fn check_input(&self, x: &ComplexMatrix, n: usize, index: usize) -> Result<(), EncodingError> {
        if x.shape() != (n, n) {
            return Err(EncodingError::Shape {
                index,
                expected_rows: n,
                expected_cols: n,
                rows: x.rows(),
                cols: x.cols(),
            });
        }
        Ok(())
    }
}

/// `V_j = factor_psd(k_j P_j, l)`.
pub fn encoding_from_family(
    fam: &WeightedProjectionFamily,
    l: usize,
) -> Result<CstarEncoding, EncodingError> {
    CstarEncoding::from_povm(&fam.to_povm(), l)
}

/// Moves `Ṽ` by `eps` times a Gaussian direction and re-orthonormalizes the
/// columns, giving a nearby encoding with the same `(d, m, l)`.
pub fn perturb_encoding<R: Rng + ?Sized>(
    enc: &CstarEncoding,
    eps: f64,
    rng: &mut R,
) -> Result<CstarEncoding, EncodingError> {
    let v = enc.isometry();
    let g = ginibre_with(rng, v.rows(), v.cols());
    let moved = &v + &g.scale(eps);
    let q = orthonormalize_columns(&moved).ok_or(EncodingError::NotIsometry { residual: f64::NAN })?;
    CstarEncoding::from_isometry(enc.m(), enc.l(), &q)
}
