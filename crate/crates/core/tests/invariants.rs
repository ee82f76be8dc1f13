use rand::Rng;

use cstar_core::analysis::{
    convex_sweep, error_brute_force, error_closed_form, minimal_error, optimal_bound_minimal,
    pair_norm_via_compression, pair_norms, welch_pair_bound, BruteForceBudget, ChannelFamily,
};
use cstar_core::constructions::{
    harmonic_rank_one, rotate_family, rotation_family, simplex_two_uniform, tensor_lift,
};
use cstar_core::encoding::{classify_family, encoding_from_family, perturb_encoding, CstarEncoding};
use cstar_core::numkernel::random::{
    random_density_with, random_hermitian_with, random_isometry_with, random_projection_with,
    random_unitary_with, seeded_rng,
};
use cstar_core::numkernel::{hermitian_eig, hs_inner, hs_norm, operator_norm, ComplexMatrix};
use cstar_core::quantum::{block_projection, minimal_channel, mix, pair_channel, PhaseDampingChannel};

fn random_encoding<R: Rng>(rng: &mut R, d: usize, m: usize, l: usize) -> CstarEncoding {
    CstarEncoding::from_isometry(m, l, &random_isometry_with(rng, m * l, d)).unwrap()
}

fn random_q1_mix<R: Rng>(rng: &mut R, m: usize, l: usize) -> PhaseDampingChannel {
    let chans: Vec<_> = (1..=m).map(|n| minimal_channel(m, l, n).unwrap()).collect();
    let raw: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    mix(&chans, &raw.iter().map(|x| x / total).collect::<Vec<_>>()).unwrap()
}

#[test]
fn eigen_reconstruction_up_to_eight() {
    let mut rng = seeded_rng(100);
    for i in 0..100 {
        let d = 1 + i % 8;
        let h = random_hermitian_with(&mut rng, d);
        let eig = hermitian_eig(&h).unwrap();
        assert!(hs_norm(&(&eig.reconstruct() - &h)) <= 1e-9);
    }
}

#[test]
fn purity_never_increases() {
    let mut rng = seeded_rng(101);
    for i in 0..1000 {
        let (m, l) = (2 + i % 3, 1 + i % 2);
        let ch = if i % 2 == 0 {
            random_q1_mix(&mut rng, m, l)
        } else {
            let j = 1 + rng.random_range(0..m - 1);
            pair_channel(m, l, [j, m]).unwrap()
        };
        let x = random_density_with(&mut rng, m * l);
        let y = ch.apply(&x).unwrap();
        let before = hs_inner(&x, &x).unwrap().re;
        let after = hs_inner(&y, &y).unwrap().re;
        assert!(after <= before + 1e-12);
    }
}

#[test]
fn block_diagonal_states_are_fixed() {
    let mut rng = seeded_rng(102);
    let (m, l) = (3, 2);
    let mut x = ComplexMatrix::zeros(m * l, m * l);
    for b in 0..m {
        x.set_block(b * l, b * l, &random_density_with(&mut rng, l).scale(1.0 / m as f64));
    }
    for n in 1..=m {
        let q = block_projection(m, l, &[n]).unwrap();
        assert!(x.commutator_norm(&q) < 1e-14);
    }
    let ch = random_q1_mix(&mut rng, m, l);
    assert!(ch.apply(&x).unwrap().max_abs_diff(&x) < 1e-12);
    let pair = pair_channel(m, l, [1, 3]).unwrap();
    assert!(pair.apply(&x).unwrap().max_abs_diff(&x) < 1e-12);
}

#[test]
fn encodings_are_star_homomorphisms() {
    let mut rng = seeded_rng(103);
    let fams = [
        harmonic_rank_one(3, 5).unwrap(),
        rotation_family(2, 3).unwrap(),
        simplex_two_uniform(4).unwrap(),
    ];
    let mut encs: Vec<CstarEncoding> = fams
        .iter()
        .map(|f| encoding_from_family(f, f.max_rank()).unwrap())
        .collect();
    encs.push(random_encoding(&mut rng, 4, 3, 2));
    for enc in &encs {
        assert!(enc.isometry_residual() <= 1e-9);
        let d = enc.d();
        for _ in 0..5 {
            let a = random_hermitian_with(&mut rng, d);
            let b = random_density_with(&mut rng, d);
            let (pa, pb) = (enc.encode(&a).unwrap(), enc.encode(&b).unwrap());
            let lhs = hs_inner(&pa, &pb).unwrap();
            assert!((lhs - hs_inner(&a, &b).unwrap()).norm() <= 1e-9);
            let prod = enc.encode(&a.matmul(&b)).unwrap();
            assert!(prod.max_abs_diff(&pa.matmul(&pb)) <= 1e-9);
        }
    }
}

#[test]
fn trace_inequality_and_tightness() {
    let mut rng = seeded_rng(104);
    let uniform = [harmonic_rank_one(2, 4).unwrap(), rotation_family(2, 5).unwrap()];
    for f in &uniform {
        let t = f.trace_inequality(f.max_rank());
        assert!(t.holds() && t.tight);
    }
    for _ in 0..20 {
        let enc = random_encoding(&mut rng, 3, 4, 1);
        let fam = classify_family(&enc.povm()).unwrap();
        let t = fam.trace_inequality(1);
        // rank one everywhere: tight although the weights differ
        assert!(t.holds() && t.tight);
        assert!(!fam.is_uniform());
    }
    // uniform but rank below l: strict
    let t = harmonic_rank_one(2, 4).unwrap().trace_inequality(2);
    assert!(t.holds() && !t.tight);
}

#[test]
fn closed_form_weights() {
    for (d, m) in [(2, 3), (3, 7), (4, 6)] {
        let f = harmonic_rank_one(d, m).unwrap();
        assert!(f.weights().iter().all(|&k| k == d as f64 / m as f64));
        assert!(f.is_uniform());
    }
    for q in 2..=6 {
        let f = simplex_two_uniform(q).unwrap();
        assert!(f.weights().iter().all(|&k| k == q as f64 / (q + 1) as f64));
    }
}

#[test]
fn tensor_lift_stays_uniform() {
    for (d, m, l) in [(2, 3, 2), (3, 4, 3), (2, 5, 4)] {
        let lifted = tensor_lift(&harmonic_rank_one(d, m).unwrap(), l).unwrap();
        let again = classify_family(&lifted.to_povm()).unwrap();
        assert!(again.is_uniform());
        assert!(again.ranks().iter().all(|&r| r == l));
        assert_eq!(again.d(), d * l);
    }
}

#[test]
fn oracle_agrees_with_closed_form() {
    let mut rng = seeded_rng(105);
    let budget = BruteForceBudget::default();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let d: usize = rng.random_range(2..=5);
        let l = rng.random_range(1..d);
        let m = rng.random_range(d.div_ceil(l).max(2)..=5);
        let enc = random_encoding(&mut rng, d, m, l);
        for n in 1..=m {
            let r = minimal_error(&enc, n, Some(&budget)).unwrap();
            assert!(r.formula_applies);
            worst = worst.max(r.discrepancy().unwrap());
        }
    }
    assert!(worst <= 1e-6, "largest discrepancy {worst:e}");
}

#[test]
fn non_uniform_encodings_do_worse() {
    let mut rng = seeded_rng(106);
    for (d, m, l) in [(2, 3, 1), (2, 4, 1), (4, 3, 2), (3, 2, 2)] {
        let bound = optimal_bound_minimal(d, m, l).unwrap();
        let kappa_opt = d as f64 / (m * l) as f64;
        for _ in 0..10 {
            let enc = random_encoding(&mut rng, d, m, l);
            let kappa = (0..m).map(|j| operator_norm(&enc.povm_element(j))).fold(0.0, f64::max);
            assert!(kappa >= kappa_opt - 1e-12);
            assert!(error_closed_form(kappa).unwrap() >= bound - 1e-9);
        }
    }
    let uniform = encoding_from_family(&harmonic_rank_one(2, 3).unwrap(), 1).unwrap();
    let bound = optimal_bound_minimal(2, 3, 1).unwrap();
    for _ in 0..20 {
        let enc = perturb_encoding(&uniform, 0.05, &mut rng).unwrap();
        let kappas: Vec<f64> = (0..3).map(|j| operator_norm(&enc.povm_element(j))).collect();
        let kmax = kappas.iter().copied().fold(0.0, f64::max);
        if kmax - 2.0 / 3.0 >= 1e-3 {
            assert!(error_closed_form(kmax).unwrap() > bound);
        }
    }
}

#[test]
fn welch_equality_and_perturbation() {
    for q in 2..=6 {
        let t = pair_norms(simplex_two_uniform(q).unwrap().projections()).unwrap();
        let w = welch_pair_bound(q, 1, q + 1).unwrap();
        assert!(t.entries.iter().all(|e| (e.norm - w).abs() <= 1e-10));
    }
    // rotate one frame vector: either the pair norms spread or the family
    // stops resolving the identity
    let mut rng = seeded_rng(107);
    let fam = simplex_two_uniform(3).unwrap();
    for _ in 0..10 {
        let u = random_unitary_with(&mut rng, 3);
        let nudge = ComplexMatrix::identity(3).scale(0.99);
        let near = &nudge + &u.scale(0.01);
        let mut projections = fam.projections().to_vec();
        let v = cstar_core::numkernel::orthonormalize_columns(&near).unwrap();
        projections[0] = v.conjugate_by(&projections[0]).hermitian_part();
        let t = pair_norms(&projections).unwrap();
        let resolution = projections
            .iter()
            .zip(fam.weights())
            .fold(ComplexMatrix::zeros(3, 3), |acc, (p, k)| &acc + &p.scale(*k));
        let residual = hs_norm(&(&resolution - &ComplexMatrix::identity(3)));
        assert!(!t.all_equal || residual > 1e-9);
    }
}

#[test]
fn compression_identity() {
    let mut rng = seeded_rng(108);
    for i in 0..100 {
        let l = 1 + i % 3;
        let d = 2 * l + rng.random_range(0..3);
        let p1 = random_projection_with(&mut rng, d, l);
        let pj = random_projection_with(&mut rng, d, l);
        let via = pair_norm_via_compression(&p1, &pj).unwrap();
        assert!((via - operator_norm(&(&p1 + &pj))).abs() <= 1e-9);
    }
}

#[test]
fn sweeps_peak_at_vertices() {
    let budget = BruteForceBudget::default();
    let mut rng = seeded_rng(109);
    let uniform = encoding_from_family(&harmonic_rank_one(2, 4).unwrap(), 1).unwrap();
    let random = random_encoding(&mut rng, 3, 3, 2);
    for enc in [&uniform, &random] {
        for fam in [ChannelFamily::Minimal, ChannelFamily::Pairwise] {
            let r = convex_sweep(enc, fam, 5, &budget).unwrap();
            assert!(r.attained_at_vertex, "{fam:?}: {} > {}", r.grid_max, r.vertex_max);
        }
    }
    // two-vertex mix on a uniform encoding
    let e1 = minimal_channel(4, 1, 1).unwrap();
    let e2 = minimal_channel(4, 1, 2).unwrap();
    let vertex = error_brute_force(&uniform, &e1, &budget).unwrap();
    for p in [0.25, 0.5, 0.75] {
        let ch = mix(&[e1.clone(), e2.clone()], &[p, 1.0 - p]).unwrap();
        assert!(error_brute_force(&uniform, &ch, &budget).unwrap() <= vertex + 1e-8);
    }
}

#[test]
fn rotated_uniform_families_keep_kappa() {
    let mut rng = seeded_rng(110);
    let fam = rotation_family(2, 3).unwrap();
    let u = random_unitary_with(&mut rng, 4);
    let enc = encoding_from_family(&rotate_family(&fam, &u).unwrap(), 2).unwrap();
    for n in 1..=3 {
        assert!((minimal_error(&enc, n, None).unwrap().kappa - 2.0 / 3.0).abs() < 1e-10);
    }
}
