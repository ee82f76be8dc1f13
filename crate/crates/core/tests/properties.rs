use cstar_core::analysis::error_closed_form;
use cstar_core::encoding::CstarEncoding;
use cstar_core::numkernel::random::{
    random_density_with, random_hermitian_with, random_isometry_with, random_projection_with, seeded_rng,
};
use cstar_core::numkernel::{factor_psd, hermitian_eig, hs_inner, hs_norm, numerical_rank, operator_norm};
use cstar_core::quantum::{choi_matrix, minimal_channel, mix, pair_channel, PhaseDampingChannel};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

/// `(d, m, l)` with `1 ≤ l < d ≤ lm`, `d ≤ 6`, `m ≤ 5`.
fn shape() -> impl Strategy<Value = (usize, usize, usize)> {
    (2usize..=6)
        .prop_flat_map(|d| (Just(d), d.div_ceil(5)..d))
        .prop_flat_map(|(d, l)| (Just(d), d.div_ceil(l).max(2)..=5usize, Just(l)))
}

fn random_channel(seed: u64, m: usize, l: usize) -> PhaseDampingChannel {
    use rand::Rng;
    let mut rng = seeded_rng(seed);
    let n = rng.random_range(1..=m);
    let i = rng.random_range(1..m);
    let j = rng.random_range(i + 1..=m);
    let p: f64 = rng.random();
    mix(
        &[minimal_channel(m, l, n).unwrap(), pair_channel(m, l, [i, j]).unwrap()],
        &[p, 1.0 - p],
    )
    .unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn eigen_reconstructs(seed in any::<u64>(), d in 1usize..7) {
        let h = random_hermitian_with(&mut seeded_rng(seed), d);
        let eig = hermitian_eig(&h).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h) < 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn norm_sandwich(seed in any::<u64>(), d in 1usize..7) {
        let a = random_density_with(&mut seeded_rng(seed), d);
        let rank = numerical_rank(&hermitian_eig(&a).unwrap()) as f64;
        let (op, hs) = (operator_norm(&a), hs_norm(&a));
        prop_assert!(op <= hs + 1e-12);
        prop_assert!(hs <= rank.sqrt() * op + 1e-12);
    }

    #[test]
    fn psd_factor_round_trip(seed in any::<u64>(), d in 2usize..7, rank in 1usize..4) {
        let rank = rank.min(d);
        let mut rng = seeded_rng(seed);
        let a = random_projection_with(&mut rng, d, rank).scale(0.7);
        let v = factor_psd(&a, rank).unwrap();
        prop_assert_eq!(v.shape(), (rank, d));
        prop_assert!(v.adjoint_mul(&v).max_abs_diff(&a) < 1e-10);
    }

    #[test]
    fn encode_decode_round_trip(seed in any::<u64>(), (d, m, l) in shape()) {
        let mut rng = seeded_rng(seed);
        let enc = CstarEncoding::from_isometry(m, l, &random_isometry_with(&mut rng, m * l, d)).unwrap();
        let w = random_density_with(&mut rng, d);
        let back = enc.decode(&enc.encode(&w).unwrap()).unwrap();
        prop_assert!(hs_norm(&(&back - &w)) <= 1e-10);
    }

    #[test]
    fn decode_is_adjoint_of_encode(seed in any::<u64>(), (d, m, l) in shape()) {
        let mut rng = seeded_rng(seed);
        let enc = CstarEncoding::from_isometry(m, l, &random_isometry_with(&mut rng, m * l, d)).unwrap();
        let w = random_hermitian_with(&mut rng, d);
        let g = random_hermitian_with(&mut rng, m * l);
        let lhs = hs_inner(&enc.encode(&w).unwrap(), &g).unwrap();
        let rhs = hs_inner(&w, &enc.decode(&g).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn channel_contracts(seed in any::<u64>(), m in 2usize..5, l in 1usize..4) {
        let ch = random_channel(seed, m, l);
        let x = random_density_with(&mut seeded_rng(seed ^ 0x5eed), m * l);
        let y = ch.apply(&x).unwrap();
        prop_assert!((y.trace() - x.trace()).norm() < 1e-12);
        prop_assert!(hs_norm(&y) <= hs_norm(&x) + 1e-12);
        prop_assert!(y.hermitian_residual() < 1e-12);
    }

    #[test]
    fn choi_is_psd(seed in any::<u64>(), m in 2usize..4, l in 1usize..3) {
        let ch = random_channel(seed, m, l);
        prop_assert!(hermitian_eig(&choi_matrix(&ch)).unwrap().min() >= -1e-10);
    }

    #[test]
    fn closed_form_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (elo, ehi) = (error_closed_form(lo).unwrap(), error_closed_form(hi).unwrap());
        prop_assert!(elo <= ehi + 1e-15);
        prop_assert!((0.0..=2.0).contains(&ehi));
    }
}
