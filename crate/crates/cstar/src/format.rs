//! JSON file formats.
//!
//! Matrices are `{"rows": r, "cols": c, "data": [[re, im], ...]}` in row-major
//! order. Every float written by this crate is rounded to 12 significant
//! digits first, so reports are stable across platforms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use cstar_core::analysis::{ChannelId, ErrorReport};
use cstar_core::encoding::{CstarEncoding, EncodingError, FamilyKind, WeightedProjectionFamily};
use cstar_core::quantum::{DephasingTerm, PhaseDampingChannel, QuantumError};
use cstar_core::{ComplexMatrix, NumError};

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().iter().map(|z| [sig12(z.re), sig12(z.im)]).collect(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix, NumError> {
        if self.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(NumError::NonFinite);
        }
        let data = self.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::from_vec(self.rows, self.cols, data)
    }
}

pub fn state_json(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [sig12(z.re), sig12(z.im)]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub projection: MatrixJson,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelJson {
    pub dim: usize,
    pub terms: Vec<TermJson>,
}

impl From<&PhaseDampingChannel> for ChannelJson {
    fn from(ch: &PhaseDampingChannel) -> Self {
        Self {
            dim: ch.dim(),
            terms: ch
                .terms()
                .iter()
                .map(|t| TermJson {
                    projection: (&t.projection).into(),
                    weight: sig12(t.weight),
                })
                .collect(),
        }
    }
}

impl ChannelJson {
    pub fn to_channel(&self) -> Result<PhaseDampingChannel, QuantumError> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(DephasingTerm {
                    projection: t.projection.to_matrix()?,
                    weight: t.weight,
                })
            })
            .collect::<Result<Vec<_>, NumError>>()?;
        PhaseDampingChannel::new(self.dim, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub d: usize,
    pub weights: Vec<f64>,
    pub projections: Vec<MatrixJson>,
    pub uniform: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

impl From<&WeightedProjectionFamily> for FamilyJson {
    fn from(f: &WeightedProjectionFamily) -> Self {
        Self {
            d: f.d(),
            weights: f.weights().iter().map(|&k| sig12(k)).collect(),
            projections: f.projections().iter().map(Into::into).collect(),
            uniform: f.is_uniform(),
            kind: f.kind().map(|k| k.as_str().to_owned()),
        }
    }
}

impl FamilyJson {
    /// Matrices only; no family invariants are checked.
    pub fn matrices(&self) -> Result<Vec<ComplexMatrix>, NumError> {
        self.projections.iter().map(MatrixJson::to_matrix).collect()
    }

    pub fn to_family(&self) -> Result<WeightedProjectionFamily, EncodingError> {
        let fam = WeightedProjectionFamily::new(self.d, self.weights.clone(), self.matrices()?)?;
        Ok(match self.kind.as_deref().and_then(FamilyKind::parse) {
            Some(k) => fam.with_kind(k),
            None => fam,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodingJson {
    pub d: usize,
    pub m: usize,
    pub l: usize,
    pub coordinate_ops: Vec<MatrixJson>,
}

impl From<&CstarEncoding> for EncodingJson {
    fn from(e: &CstarEncoding) -> Self {
        Self {
            d: e.d(),
            m: e.m(),
            l: e.l(),
            coordinate_ops: e.coordinate_ops().iter().map(Into::into).collect(),
        }
    }
}

impl EncodingJson {
    pub fn to_encoding(&self) -> Result<CstarEncoding, EncodingError> {
        let ops = self
            .coordinate_ops
            .iter()
            .map(MatrixJson::to_matrix)
            .collect::<Result<Vec<_>, _>>()?;
        CstarEncoding::new(self.d, self.m, self.l, ops)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChannelIdJson {
    Identity,
    Minimal {
        n: usize,
    },
    Pair {
        #[serde(rename = "K")]
        k: [usize; 2],
    },
    Mix,
}

impl From<ChannelId> for ChannelIdJson {
    fn from(c: ChannelId) -> Self {
        match c {
            ChannelId::Identity => ChannelIdJson::Identity,
            ChannelId::Minimal { n } => ChannelIdJson::Minimal { n },
            ChannelId::Pair { k } => ChannelIdJson::Pair { k },
            ChannelId::Mixed => ChannelIdJson::Mix,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancesJson {
    pub closed_form_vs_brute_force: f64,
    pub kappa_clamp: f64,
    pub rank: f64,
}

impl Default for TolerancesJson {
    fn default() -> Self {
        Self {
            closed_form_vs_brute_force: cstar_core::tol::ORACLE,
            kappa_clamp: cstar_core::tol::KAPPA_CLAMP,
            rank: cstar_core::tol::RANK,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReportJson {
    pub kappa: f64,
    pub closed_form: f64,
    pub brute_force: Option<f64>,
    pub formula_applies: bool,
    pub worst_state: Vec<[f64; 2]>,
    pub channel: ChannelIdJson,
    pub tolerances: TolerancesJson,
}

impl From<&ErrorReport> for ErrorReportJson {
    fn from(r: &ErrorReport) -> Self {
        Self {
            kappa: sig12(r.kappa),
            closed_form: sig12(r.closed_form),
            brute_force: r.brute_force.map(sig12),
            formula_applies: r.formula_applies,
            worst_state: state_json(&r.worst_state),
            channel: r.channel.into(),
            tolerances: TolerancesJson::default(),
        }
    }
}
