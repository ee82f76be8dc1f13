//! The `analyze` report: errors per channel, optimality bounds and pair-norm
//! geometry for one family.

use serde::Serialize;

use cstar_core::analysis::{
    channel_error, minimal_bound_printed, minimal_error, optimal_bound_minimal, pair_norms,
    pairwise_error, secondary_bound, secondary_kappa, welch_pair_bound, AnalysisError,
    BruteForceBudget, ChannelId, ErrorReport,
};
use cstar_core::encoding::{encoding_from_family, WeightedProjectionFamily};
use cstar_core::tol;

use crate::channel::ChannelSpec;
use crate::error::CliError;
use crate::format::{sig12, ErrorReportJson};

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub channel: ChannelSpec,
    /// Random samples for the brute-force search; `None` skips it.
    pub brute: Option<usize>,
    pub seed: u64,
    /// Height of the coordinate operators; defaults to the largest rank.
    pub l: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilySummary {
    pub d: usize,
    pub m: usize,
    pub l: usize,
    pub kind: Option<String>,
    pub uniform: bool,
    pub k: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bounds {
    pub optimal_bound_minimal: Option<f64>,
    pub printed_bound_minimal: Option<f64>,
    pub secondary_kappa: Option<f64>,
    pub secondary_bound: Option<f64>,
    pub welch_pair_bound: Option<f64>,
    /// `"saturated"` when `d < 2l` (every pair norm is 2), else `"welch"`.
    pub pair_regime: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairTable {
    pub entries: Vec<PairEntry>,
    pub max: f64,
    pub min: f64,
    pub all_equal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub family: FamilySummary,
    pub channel_spec: ChannelSpec,
    pub seed: u64,
    pub brute_samples: Option<usize>,
    pub reports: Vec<ErrorReportJson>,
    pub worst_kappa: f64,
    pub worst_closed_form: f64,
    pub worst_brute_force: Option<f64>,
    pub bounds: Bounds,
    pub pair_norms: Option<PairTable>,
    pub welch_attained: Option<bool>,
    /// Only set for the `Q1` and `Q2` specs.
    pub optimal: Option<bool>,
}

fn opt(r: Result<f64, AnalysisError>) -> Option<f64> {
    r.ok().map(sig12)
}

pub fn analyze(fam: &WeightedProjectionFamily, opts: &AnalyzeOptions) -> Result<AnalysisReport, CliError> {
    let (d, m) = (fam.d(), fam.m());
    let l = opts.l.unwrap_or_else(|| fam.max_rank());
    let enc = encoding_from_family(fam, l)?;
    let budget = opts.brute.map(|samples| BruteForceBudget::with_samples(samples, opts.seed));
    let uniform = fam.is_uniform();

    let mut reports: Vec<ErrorReport> = Vec::new();
    for (id, ch) in opts.channel.expand(m, l)? {
        let r = match id {
            ChannelId::Minimal { n } => minimal_error(&enc, n, budget.as_ref())?,
            ChannelId::Pair { k } if uniform => pairwise_error(&enc, k, budget.as_ref())?,
            _ => channel_error(&enc, &ch, id, budget.as_ref())?,
        };
        reports.push(r);
    }

    let table = if m >= 2 { Some(pair_norms(fam.projections())?) } else { None };
    let saturated = d < 2 * l;
    let welch = if saturated { None } else { opt(welch_pair_bound(d, l, m)) };
    let welch_attained = match (&table, welch) {
        (Some(t), Some(w)) if uniform => Some((t.max - w).abs() <= tol::PAIR_NORM_EQUAL),
        _ => None,
    };

    let worst_kappa = reports.iter().map(|r| r.kappa).fold(0.0, f64::max);
    let minimal_optimal = uniform && fam.ranks().iter().all(|&r| r == l);
    let optimal = match opts.channel {
        ChannelSpec::AllMinimal => Some(minimal_optimal),
        ChannelSpec::AllPairs => Some(minimal_optimal && table.as_ref().is_some_and(|t| t.all_equal)),
        _ => None,
    };

    Ok(AnalysisReport {
        family: FamilySummary {
            d,
            m,
            l,
            kind: fam.kind().map(|k| k.as_str().to_owned()),
            uniform,
            k: uniform.then(|| sig12(fam.uniform_weight())),
        },
        channel_spec: opts.channel.clone(),
        seed: opts.seed,
        brute_samples: opts.brute,
        worst_kappa: sig12(worst_kappa),
        worst_closed_form: sig12(reports.iter().map(|r| r.closed_form).fold(0.0, f64::max)),
        worst_brute_force: budget.map(|_| {
            sig12(reports.iter().filter_map(|r| r.brute_force).fold(0.0, f64::max))
        }),
        reports: reports.iter().map(Into::into).collect(),
        bounds: Bounds {
            optimal_bound_minimal: opt(optimal_bound_minimal(d, m, l)),
            printed_bound_minimal: opt(minimal_bound_printed(d, m, l)),
            secondary_kappa: opt(secondary_kappa(d, l, m)),
            secondary_bound: opt(secondary_bound(d, l, m)),
            welch_pair_bound: welch,
            pair_regime: if saturated { "saturated" } else { "welch" },
        },
        pair_norms: table.map(|t| PairTable {
            entries: t
                .entries
                .iter()
                .map(|e| PairEntry {
                    i: e.i,
                    j: e.j,
                    norm: sig12(e.norm),
                })
                .collect(),
            max: sig12(t.max),
            min: sig12(t.min),
            all_equal: t.all_equal,
        }),
        welch_attained,
        optimal,
    })
}
