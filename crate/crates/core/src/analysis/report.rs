use alloc::vec::Vec;

use num_complex::Complex64;

use super::oracle::{search, BruteForceBudget};
use super::{error_closed_form, worst_case_state, AnalysisError};
use crate::encoding::{classify_family, CstarEncoding};
use crate::numkernel::{hermitian_eig, ComplexMatrix};
use crate::quantum::{minimal_channel, pair_channel, PhaseDampingChannel, QuantumError};

/// Which channel a report describes. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelId {
    Identity,
    Minimal { n: usize },
    Pair { k: [usize; 2] },
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    /// `‖A‖` for the decoded measurement `A = Ṽ* Q Ṽ`.
    pub kappa: f64,
    pub closed_form: f64,
    pub brute_force: Option<f64>,
    pub worst_state: Vec<Complex64>,
    pub channel: ChannelId,
    /// `κ ≤ 1/2` or `A` has a zero eigenvalue. Outside this regime the
    /// closed form overstates the error and only the brute-force value is
    /// exact.
    pub formula_applies: bool,
}

impl ErrorReport {
    /// `|closed_form − brute_force|` when both are present.
    pub fn discrepancy(&self) -> Option<f64> {
        self.brute_force.map(|b| (self.closed_form - b).abs())
    }
}

fn build_report(
    enc: &CstarEncoding,
    a: &ComplexMatrix,
    channel: ChannelId,
    ch: &PhaseDampingChannel,
    budget: Option<&BruteForceBudget>,
) -> Result<ErrorReport, AnalysisError> {
    let eig = hermitian_eig(a)?;
    let kappa = eig.max().max(0.0);
    let closed_form = error_closed_form(kappa)?;
    let formula_applies = kappa <= 0.5 || !eig.kernel_indices().is_empty();
    let found = budget.map(|b| search(enc, ch, b)).transpose()?;
    let worst_state = if formula_applies {
        worst_case_state(a)?
    } else if let Some(r) = &found {
        r.witness.clone()
    } else {
        eig.top_vector()
    };
    Ok(ErrorReport {
        kappa,
        closed_form,
        brute_force: found.map(|r| r.error),
        worst_state,
        channel,
        formula_applies,
    })
}

/// Error under the minimal channel `ℰ_n` (1-based `n`), driven by
/// `κ_n = ‖V_n* V_n‖`. Pass a budget to also run the brute-force search.
pub fn minimal_error(
    enc: &CstarEncoding,
    n: usize,
    budget: Option<&BruteForceBudget>,
) -> Result<ErrorReport, AnalysisError> {
    if n == 0 || n > enc.m() {
        return Err(QuantumError::IndexOutOfRange { n, m: enc.m() }.into());
    }
    let ch = minimal_channel(enc.m(), enc.l(), n)?;
    build_report(enc, &enc.povm_element(n - 1), ChannelId::Minimal { n }, &ch, budget)
}

/// Error under the pair channel `ℰ_K`, `K = {i, j}`, with
/// `κ_K = ‖A_i + A_j‖ = k ‖P_i + P_j‖`. Requires a uniform encoding.
pub fn pairwise_error(
    enc: &CstarEncoding,
    k: [usize; 2],
    budget: Option<&BruteForceBudget>,
) -> Result<ErrorReport, AnalysisError> {
    let uniform = classify_family(&enc.povm()).map(|f| f.is_uniform()).unwrap_or(false);
    if !uniform {
        return Err(AnalysisError::NotUniform);
    }
    let ch = pair_channel(enc.m(), enc.l(), k)?;
    let a = &enc.povm_element(k[0] - 1) + &enc.povm_element(k[1] - 1);
    build_report(enc, &a, ChannelId::Pair { k }, &ch, budget)
}

/// Report for an arbitrary channel.
///
/// Each term dephases identically with `Q` or `Q⊥`, so `κ_t` is read from
/// whichever of `A_t`, `I − A_t` the closed form covers. A single term gives
/// the exact closed form; several terms give the convexity bound
/// `Σ p_t e(κ_t)` with `formula_applies = false`.
pub fn channel_error(
    enc: &CstarEncoding,
    ch: &PhaseDampingChannel,
    channel: ChannelId,
    budget: Option<&BruteForceBudget>,
) -> Result<ErrorReport, AnalysisError> {
    let n = enc.m() * enc.l();
    if ch.dim() != n {
        return Err(QuantumError::DimensionMismatch {
            expected: n,
            found: ch.dim(),
        }
        .into());
    }
    let v = enc.isometry();
    let id = ComplexMatrix::identity(enc.d());
    let mut parts = Vec::with_capacity(ch.terms().len());
    for t in ch.terms() {
        let a = v.adjoint_mul(&t.projection.matmul(&v)).hermitian_part();
        let b = &id - &a;
        let covered = |m: &ComplexMatrix| -> Result<(f64, bool), AnalysisError> {
            let eig = hermitian_eig(m)?;
            let kappa = eig.max().max(0.0);
            Ok((kappa, kappa <= 0.5 || !eig.kernel_indices().is_empty()))
        };
        let (ka, fa) = covered(&a)?;
        let (kb, fb) = covered(&b)?;
        let pick = if fa || !fb { (a, ka, fa) } else { (b, kb, fb) };
        parts.push((t.weight, pick));
    }
    let single = parts.len() == 1;
    let kappa = parts.iter().map(|p| p.1 .1).fold(0.0, f64::max);
    let mut closed_form = 0.0;
    for (w, (_, k, _)) in &parts {
        closed_form += w * error_closed_form(*k)?;
    }
    let formula_applies = single && parts[0].1 .2;
    let found = budget.map(|b| search(enc, ch, b)).transpose()?;
    let worst_state = if formula_applies {
        worst_case_state(&parts[0].1 .0)?
    } else if let Some(r) = &found {
        r.witness.clone()
    } else {
        hermitian_eig(&parts[0].1 .0)?.top_vector()
    };
    Ok(ErrorReport {
        kappa,
        closed_form,
        brute_force: found.map(|r| r.error),
        worst_state,
        channel,
        formula_applies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{harmonic_rank_one, rotation_family, simplex_two_uniform};
    use crate::encoding::encoding_from_family;
    use crate::numkernel::random::{random_isometry_with, random_unitary_with, seeded_rng};
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn orthonormal_basis_encoding() {
        let enc = encoding_from_family(&harmonic_rank_one(3, 3).unwrap(), 1).unwrap();
        let r = minimal_error(&enc, 2, Some(&BruteForceBudget::default())).unwrap();
        assert!((r.kappa - 1.0).abs() < 1e-12);
        assert!((r.closed_form - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(r.formula_applies);
        assert!(r.discrepancy().unwrap() < 1e-6);
        assert_eq!(r.channel, ChannelId::Minimal { n: 2 });
    }

    #[test]
    fn uniform_family_kappa() {
        let enc = encoding_from_family(&harmonic_rank_one(2, 5).unwrap(), 1).unwrap();
        for n in 1..=5 {
            let r = minimal_error(&enc, n, None).unwrap();
            assert!((r.kappa - 0.4).abs() < 1e-12);
            assert!(r.brute_force.is_none());
        }
        assert!(minimal_error(&enc, 0, None).is_err());
        assert!(minimal_error(&enc, 6, None).is_err());
    }

    #[test]
    fn closed_form_is_unitarily_invariant() {
        let mut rng = seeded_rng(11);
        let v = random_isometry_with(&mut rng, 6, 3);
        let enc = CstarEncoding::from_isometry(3, 2, &v).unwrap();
        let u = random_unitary_with(&mut rng, 3);
        let rotated = CstarEncoding::from_isometry(3, 2, &v.matmul(&u)).unwrap();
        for n in 1..=3 {
            let a = minimal_error(&enc, n, None).unwrap();
            let b = minimal_error(&rotated, n, None).unwrap();
            assert!((a.closed_form - b.closed_form).abs() < 1e-12);
        }
    }

    #[test]
    fn simplex_pair_has_full_rank_measurement() {
        // A_i + A_j = I − A_k for m = 3: κ = 1 with no kernel, so the closed
        // form is only an upper estimate
        let enc = encoding_from_family(&simplex_two_uniform(2).unwrap(), 1).unwrap();
        let r = pairwise_error(&enc, [1, 2], Some(&BruteForceBudget::default())).unwrap();
        assert!((r.kappa - 1.0).abs() < 1e-12);
        assert!((r.closed_form - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(!r.formula_applies);
        assert!((r.brute_force.unwrap() - 2.0 / 14f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn generic_channel_reports() {
        let enc = encoding_from_family(&simplex_two_uniform(2).unwrap(), 1).unwrap();
        let budget = BruteForceBudget::default();
        let id = channel_error(&enc, &PhaseDampingChannel::identity(3), ChannelId::Identity, Some(&budget)).unwrap();
        assert!(id.closed_form < 1e-12);
        assert!(id.formula_applies && id.brute_force.unwrap() < 1e-12);
        // the pair channel read through its complement is exact
        let pair = channel_error(&enc, &pair_channel(3, 1, [1, 2]).unwrap(), ChannelId::Pair { k: [1, 2] }, Some(&budget))
            .unwrap();
        assert!(pair.formula_applies);
        assert!((pair.closed_form - 2.0 / 14f64.sqrt()).abs() < 1e-12);
        assert!(pair.discrepancy().unwrap() < 1e-6);
        let mixed = crate::quantum::mix(
            &[minimal_channel(3, 1, 1).unwrap(), minimal_channel(3, 1, 2).unwrap()],
            &[0.5, 0.5],
        )
        .unwrap();
        let r = channel_error(&enc, &mixed, ChannelId::Mixed, Some(&budget)).unwrap();
        assert!(!r.formula_applies);
        assert!(r.brute_force.unwrap() <= r.closed_form + 1e-9);
    }

    #[test]
    fn rotation_worst_pair() {
        let enc = encoding_from_family(&rotation_family(2, 4).unwrap(), 2).unwrap();
        let r = pairwise_error(&enc, [1, 2], None).unwrap();
        let expected = 0.5 * (1.0 + (core::f64::consts::PI / 4.0).cos());
        assert!((r.kappa - expected).abs() < 1e-10);
        assert!(r.closed_form > 0.5);
    }

    #[test]
    fn pairwise_requires_uniform() {
        let mut rng = seeded_rng(5);
        let v = random_isometry_with(&mut rng, 6, 3);
        let enc = CstarEncoding::from_isometry(3, 2, &v).unwrap();
        assert_eq!(pairwise_error(&enc, [1, 2], None), Err(AnalysisError::NotUniform));
    }
}
