use aqft::linalg::c;
use aqft::quadrature::Quadrature;
use aqft::singleparticle::*;
use aqft::smatrix::ParticleSpectrum;
use aqft::C64;
use proptest::prelude::*;

fn quad() -> Quadrature {
    Quadrature::composite_gauss_legendre(32, 8, 8.0)
}

fn coef() -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b)), 2)
}

fn grid64() -> Vec<f64> {
    (0..64).map(|k| -6.0 + 12.0 * k as f64 / 63.0).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn j_is_an_antiunitary_involution(a in coef(), b in coef(), t0 in -1.0..1.0f64, t1 in -1.0..1.0f64) {
        let spec = ParticleSpectrum::charged_pair(1.0);
        let q = quad();
        let xi = RapidityFunction::gaussian(a, 0.7, t0);
        let psi = RapidityFunction::gaussian(b, 1.1, t1);
        let jj = xi.apply_j(&spec).apply_j(&spec);
        for alpha in 0..2 {
            for &t in &grid64() {
                prop_assert!((jj.at(alpha, t) - xi.at(alpha, t)).norm() < 1e-14);
            }
        }
        let lhs = inner(&xi.apply_j(&spec), &psi.apply_j(&spec), &q);
        let rhs = inner(&xi, &psi, &q).conj();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn poincare_action_is_a_unitary_representation(
        a in coef(),
        x in prop::array::uniform2(-1.0..1.0f64),
        y in prop::array::uniform2(-1.0..1.0f64),
        lambda in -0.5..0.5f64,
    ) {
        let spec = ParticleSpectrum::charged_pair(1.0);
        let q = quad();
        let xi = RapidityFunction::gaussian(a, 0.8, 0.0);
        // translations compose additively
        let two = xi.act_poincare(&spec, x, 0.0).act_poincare(&spec, y, 0.0);
        let one = xi.act_poincare(&spec, [x[0] + y[0], x[1] + y[1]], 0.0);
        prop_assert!(distance(&two, &one, &q) < 1e-12);
        // unitarity
        let moved = xi.act_poincare(&spec, x, lambda);
        prop_assert!((norm(&moved, &q) - norm(&xi, &q)).abs() < 1e-10);
    }

    #[test]
    fn time_translation_multiplies_by_the_energy_phase(t in -2.0..2.0f64, theta in -3.0..3.0f64) {
        let spec = ParticleSpectrum::scalar(1.4);
        let xi = RapidityFunction::gaussian(vec![c(1.0, 0.0)], 0.5, 0.2);
        let moved = xi.act_poincare(&spec, [t, 0.0], 0.0);
        let want = C64::from_polar(1.0, 1.4 * theta.cosh() * t) * xi.at(0, theta);
        prop_assert!((moved.at(0, theta) - want).norm() < 1e-12);
    }
}

#[test]
fn symplectic_form_of_i_xi_with_xi() {
    let q = quad();
    let xi = normalized(&RapidityFunction::gaussian(vec![c(1.0, 0.0)], 0.6, 0.3), &q);
    let s = symplectic_form(&xi.scale(c(0.0, 1.0)), &xi, &q, 1e-10);
    assert!(s.converged);
    assert!((s.value + 1.0).abs() < 1e-12);
    assert!(symplectic_form(&xi, &xi, &q, 1e-10).value.abs() < 1e-14);
}

#[test]
fn k1_members_and_a_plain_gaussian() {
    let spec = ParticleSpectrum::scalar(1.0);
    let q = quad();
    let member = RapidityFunction::k1_gaussian(&spec, vec![c(0.4, 0.3)], 0.5, 0.1);
    assert!(k1_membership(&member, &spec, &default_lambdas(), &q, 1e-8).member());
    let plain = RapidityFunction::gaussian(vec![c(0.0, 1.0)], 0.5, 0.1);
    assert!(!k1_membership(&plain, &spec, &default_lambdas(), &q, 1e-8).member());
}

#[test]
fn standard_inner_functions_are_symmetric() {
    let grid: Vec<f64> = (0..101).map(|k| -10.0 + 0.2 * k as f64).collect();
    for phi in [
        InnerFunction::one(),
        InnerFunction::blaschke(0.7),
        InnerFunction::translation(0.3),
    ] {
        let rep = is_symmetric_inner(&phi, &grid, 1e-12);
        assert!(rep.symmetric_inner, "{}: {rep:?}", phi.label);
    }
    // e^{−iβp} grows in the upper half plane
    let bad = InnerFunction::new("exp(-ip)", |p| (p * c(0.0, -1.0)).exp());
    assert!(!is_symmetric_inner(&bad, &grid, 1e-12).symmetric_inner);
}

#[test]
fn borchers_relations_hold_with_the_negative_boost() {
    let spec = ParticleSpectrum::scalar(1.0);
    let q = quad();
    let family = vec![
        RapidityFunction::gaussian(vec![c(1.0, 0.0)], 0.5, 0.0),
        RapidityFunction::gaussian(vec![c(0.3, -0.8)], 0.9, 0.4),
    ];
    let r = borchers_relation_check(&spec, &[0.05], &[[0.3, 0.2]], &family, &q);
    assert!(r.modular < 1e-8 && r.reflection < 1e-8, "{r:?}");
    let wrong = borchers_with_sign(&spec, &[0.05], &[[0.3, 0.2]], &family, &q, 1.0);
    assert!(wrong.modular > 1e-3);
}

#[test]
fn inner_functions_preserve_k1() {
    let spec = ParticleSpectrum::scalar(1.0);
    let q = quad();
    let family = vec![RapidityFunction::k1_gaussian(
        &spec,
        vec![c(1.0, 0.0)],
        0.5,
        0.0,
    )];
    let (worst, all) = endomorphism_check(&InnerFunction::blaschke(0.5), &spec, &family, &q, 1e-8);
    assert!(all && worst < 1e-8);
}
