//! Invariant checks on a family file.
//!
//! The file is parsed without validation so that a defective family is
//! reported by the first check it violates instead of being rejected at load
//! time. Checks that need a valid family are skipped after a structural
//! failure.

use cstar_core::analysis::{
    minimal_error, pair_norm_via_compression, pair_norms, welch_pair_bound, BruteForceBudget,
};
use cstar_core::encoding::{encoding_from_family, WeightedProjectionFamily};
use cstar_core::numkernel::random::{random_density_with, seeded_rng};
use cstar_core::numkernel::{hs_norm, operator_norm};
use cstar_core::quantum::{minimal_channel, verify_noiseless, DensityMatrix};
use cstar_core::{tol, ComplexMatrix};

use crate::check::Check;
use crate::format::FamilyJson;

/// Runs every applicable check on `raw` in a fixed order.
pub fn verify_family(raw: &FamilyJson, seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let d = raw.d;

    let matrices = match raw.matrices() {
        Ok(ms) => ms,
        Err(e) => {
            checks.push(Check::new("matrix_shapes", false, e.to_string()));
            return checks;
        }
    };
    let shapes_ok = d > 0
        && raw.weights.len() == matrices.len()
        && !matrices.is_empty()
        && matrices.iter().all(|p| p.shape() == (d, d));
    checks.push(Check::new(
        "matrix_shapes",
        shapes_ok,
        format!("{} weights, {} projections of size {d}", raw.weights.len(), matrices.len()),
    ));
    if !shapes_ok {
        return checks;
    }

    let min_weight = raw.weights.iter().copied().fold(f64::INFINITY, f64::min);
    let weights_ok = raw.weights.iter().all(|k| k.is_finite() && *k > 0.0);
    checks.push(Check::new("weights_positive", weights_ok, format!("min weight {min_weight:.6e}")));

    let idem = matrices.iter().map(|p| p.projection_residual()).fold(0.0, f64::max);
    checks.push(Check::at_most("projections", idem, tol::STRUCTURE));

    let sum = raw
        .weights
        .iter()
        .zip(&matrices)
        .fold(ComplexMatrix::zeros(d, d), |acc, (k, p)| &acc + &p.scale(*k));
    let resolution = hs_norm(&(&sum - &ComplexMatrix::identity(d)));
    checks.push(Check::at_most("resolution_identity", resolution, tol::STRUCTURE));

    let fam = match raw.to_family() {
        Ok(f) if checks.iter().all(|c| c.passed) => f,
        _ => return checks,
    };
    checks.extend(family_checks(&fam, raw.uniform, seed));
    checks
}

fn family_checks(fam: &WeightedProjectionFamily, declared_uniform: bool, seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let (d, m, l) = (fam.d(), fam.m(), fam.max_rank());
    checks.push(Check::new(
        "uniform_flag",
        declared_uniform == fam.is_uniform(),
        format!("declared {declared_uniform}, computed {}", fam.is_uniform()),
    ));

    let ti = fam.trace_inequality(l);
    checks.push(Check::new(
        "trace_inequality",
        ti.holds(),
        format!("l*sum(k) = {:.12} >= d = {d} (tight: {})", ti.lhs, ti.tight),
    ));

    let enc = match encoding_from_family(fam, l) {
        Ok(e) => e,
        Err(e) => {
            checks.push(Check::new("encoding_isometry", false, e.to_string()));
            return checks;
        }
    };
    checks.push(Check::at_most("encoding_isometry", enc.isometry_residual(), tol::ISOMETRY));

    let mut rng = seeded_rng(seed);
    let mut round_trip: f64 = 0.0;
    for _ in 0..10 {
        let w = random_density_with(&mut rng, d);
        let back = enc.encode(&w).and_then(|g| enc.decode(&g));
        round_trip = round_trip.max(back.map_or(f64::INFINITY, |b| hs_norm(&(&b - &w))));
    }
    checks.push(Check::at_most("round_trip", round_trip, 1e-10));

    let uniform_rank_l = fam.is_uniform() && fam.ranks().iter().all(|&r| r == l);
    if m >= 2 && uniform_rank_l {
        checks.push(pair_norm_check(fam, d, l, m));
        if d >= 2 * l {
            let p = fam.projections();
            let mut worst: f64 = 0.0;
            for j in 1..m {
                let direct = operator_norm(&(&p[0] + &p[j]));
                let via = pair_norm_via_compression(&p[0], &p[j]).map_or(f64::INFINITY, |v| (v - direct).abs());
                worst = worst.max(via);
            }
            checks.push(Check::at_most("compression_identity", worst, 1e-9));
        }
    }

    let budget = BruteForceBudget::with_samples(32, seed);
    let mut gap: f64 = 0.0;
    for n in 1..=m {
        match minimal_error(&enc, n, Some(&budget)) {
            Ok(r) if r.formula_applies => gap = gap.max(r.discrepancy().unwrap_or(f64::INFINITY)),
            Ok(_) => {}
            Err(_) => gap = f64::INFINITY,
        }
    }
    checks.push(Check::at_most("minimal_errors", gap, tol::ORACLE));

    let mut noiseless: f64 = 0.0;
    for n in 1..=m {
        let Ok(ch) = minimal_channel(m, l, n) else {
            noiseless = f64::INFINITY;
            continue;
        };
        let w1 = DensityMatrix::random_with(&mut rng, m);
        let w2 = DensityMatrix::random_with(&mut rng, l);
        noiseless = noiseless.max(verify_noiseless(&ch, &w1, &w2).map_or(f64::INFINITY, |r| r.second_factor_residual));
    }
    checks.push(Check::at_most("noiseless_subsystem", noiseless, 1e-10));
    checks
}

fn pair_norm_check(fam: &WeightedProjectionFamily, d: usize, l: usize, m: usize) -> Check {
    let table = match pair_norms(fam.projections()) {
        Ok(t) => t,
        Err(e) => return Check::new("pair_norms", false, e.to_string()),
    };
    if d < 2 * l {
        let dev = table.entries.iter().map(|e| (e.norm - 2.0).abs()).fold(0.0, f64::max);
        return Check::new("pair_norms", dev <= 1e-9, format!("d < 2l: max |norm - 2| = {dev:.3e}"));
    }
    match welch_pair_bound(d, l, m) {
        Ok(w) => {
            let above = table.max >= w - 1e-9;
            // equality in the bound forces every pair to sit on it
            let equality_consistent = !table.all_equal || (table.max - w).abs() <= 1e-9;
            Check::new(
                "pair_norms",
                above && equality_consistent,
                format!("max {:.12} vs Welch {:.12} (all equal: {})", table.max, w, table.all_equal),
            )
        }
        Err(e) => Check::new("pair_norms", false, e.to_string()),
    }
}
