use aqft::geometry::{minkowski, WarpParameter};
use aqft::linalg::{c, random_complex_matrix, spectral_norm};
use aqft::warp::*;
use aqft::{CMatrix, RMatrix, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn diagonal_rep(momenta: &[Vec<f64>]) -> SpectralRep {
    let n = momenta.len();
    SpectralRep::from_eigenbasis(&CMatrix::identity(n, n), momenta).unwrap()
}

fn qv(q: &WarpParameter, p: &[f64]) -> Vec<f64> {
    (0..p.len())
        .map(|i| (0..p.len()).map(|j| q.q[(i, j)] * p[j]).sum())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectral_and_blockwise_forms_agree(seed in 0u64..10_000, n in 2usize..6, d in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _, q, rep) = random_instance(&mut rng, n, d);
        prop_assert!(rep.validate() < 1e-10);
        let lhs = warp(&a, &q, &rep).unwrap();
        let rhs = warp_blockwise(&a, &q, &rep);
        prop_assert!(spectral_norm(&(lhs - rhs)) < 1e-10 * (1.0 + spectral_norm(&a)));
    }

    #[test]
    fn warps_cascade(seed in 0u64..10_000, n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _, q1, rep) = random_instance(&mut rng, n, 2);
        let q2 = WarpParameter::random_skew(&mut rng, 2, 2.0);
        prop_assert!(cascade_check(&a, &q1, &q2, &rep).unwrap() < 1e-10 * (1.0 + spectral_norm(&a)));
    }

    #[test]
    fn warping_commutes_with_translations(seed in 0u64..10_000, x in prop::array::uniform2(-2.0..2.0f64)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _, q, rep) = random_instance(&mut rng, 4, 2);
        let lhs = warp(&rep.alpha(&x, &a), &q, &rep).unwrap();
        let rhs = rep.alpha(&x, &warp(&a, &q, &rep).unwrap());
        prop_assert!(spectral_norm(&(lhs - rhs)) < 1e-10 * (1.0 + spectral_norm(&a)));
    }

    #[test]
    fn vacuum_vector_is_untouched(seed in 0u64..10_000, n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = SpectralRep::random(&mut rng, n, 2.min(n), 2, true, true);
        let a = random_complex_matrix(&mut rng, n, n);
        let q = WarpParameter::standard(2, 1.3, 0.0);
        prop_assert!(vacuum_check(&a, &q, &rep).unwrap() < 1e-10 * (1.0 + spectral_norm(&a)));
    }

    #[test]
    fn deformed_phase_is_antisymmetric(t in -3.0..3.0f64, tp in -3.0..3.0f64, kappa in 0.0..2.0f64, m in 0.1..2.0f64) {
        let a = deformed_phase(t, tp, kappa, m);
        let b = deformed_phase(tp, t, kappa, m);
        prop_assert!(a.difference < 1e-12 * (1.0 + a.closed_form.abs()));
        prop_assert!((a.bilinear + b.bilinear).abs() < 1e-12 * (1.0 + a.bilinear.abs()));
        prop_assert!((a.phase * b.phase - c(1.0, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn zero_parameter_is_the_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (a, _, _, rep) = random_instance(&mut rng, 5, 3);
    let q = WarpParameter::new(RMatrix::zeros(3, 3));
    assert!(spectral_norm(&(warp(&a, &q, &rep).unwrap() - &a)) < 1e-12);
}

#[test]
fn matrix_unit_picks_up_the_two_point_phase() {
    let p1 = vec![1.0, 0.2];
    let p2 = vec![1.5, -0.7];
    let rep = diagonal_rep(&[p1.clone(), p2.clone()]);
    let q = WarpParameter::standard(2, 0.9, 0.0);
    let mut e12 = CMatrix::zeros(2, 2);
    e12[(0, 1)] = c(1.0, 0.0);
    let aq = warp(&e12, &q, &rep).unwrap();
    let want = C64::from_polar(1.0, minkowski(&p1, &qv(&q, &p2)));
    assert!((aq[(0, 1)] - want).norm() < 1e-14);
    assert!(aq[(1, 0)].norm() + aq[(0, 0)].norm() + aq[(1, 1)].norm() < 1e-15);
}

#[test]
fn deformed_phase_example() {
    // θ − θ' = 1 with κ = m = 1 gives e^{i sinh 1}
    let d = deformed_phase(1.0, 0.0, 1.0, 1.0);
    assert!((d.phase - C64::from_polar(1.0, 1f64.sinh())).norm() < 1e-14);
}

#[test]
fn non_skew_parameter_is_refused() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (a, _, _, rep) = random_instance(&mut rng, 4, 2);
    let q = WarpParameter::new(RMatrix::identity(2, 2));
    assert!(warp(&a, &q, &rep).is_err());
}

#[test]
fn tensor_representation_is_a_valid_spectral_resolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = SpectralRep::random(&mut rng, 2, 2, 2, true, false);
    let b = SpectralRep::random(&mut rng, 3, 2, 2, true, false);
    let t = SpectralRep::tensor(&a, &b).unwrap();
    assert_eq!(t.n, 6);
    assert!(t.validate() < 1e-10);
    assert!(t.forward_cone);
}

#[test]
fn warp_is_lipschitz_in_the_parameter() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (a, _, q, rep) = random_instance(&mut rng, 5, 2);
    let dir = WarpParameter::standard(2, 1.0, 0.0);
    let p = continuity_profile(&a, &q, &dir, &rep, &[1e-1, 1e-2, 1e-3]).unwrap();
    assert!(p.excess <= 1e-12 * spectral_norm(&a), "{p:?}");
    assert!(p.distances.windows(2).all(|w| w[1] < w[0]));
    // first-order behaviour: ten times smaller step, roughly ten times smaller distance
    let ratio = p.distances[1] / p.distances[2];
    assert!((ratio - 10.0).abs() < 0.5, "{ratio}");
}
