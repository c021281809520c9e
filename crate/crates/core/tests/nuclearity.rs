use aqft::fock::{FockSpace, GridSpec};
use aqft::linalg::c;
use aqft::nuclearity::*;
use aqft::quadrature::Quadrature;
use aqft::singleparticle::RapidityFunction;
use aqft::smatrix::SMatrixModel;
use proptest::prelude::*;
use std::f64::consts::PI;

fn space(model: SMatrixModel, m: usize, n_max: usize) -> FockSpace {
    let q = Quadrature::uniform(m, 3.0);
    FockSpace::new(model, GridSpec::from_quadrature(&q, 1).unwrap(), n_max).unwrap()
}

fn family() -> Vec<CreationMonomial> {
    let g = RapidityFunction::gaussian(vec![c(1.0, 0.0)], 0.25, 0.0);
    monomial_family(&[g], 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fock_and_symbolic_routes_agree(
        a in 0.2..1.0f64, b in 0.2..1.0f64,
        t0 in -0.8..0.8f64, t1 in -0.8..0.8f64,
        s in 0.2..3.0f64, which in 0usize..3,
    ) {
        let model = [SMatrixModel::free(1.0), SMatrixModel::ising(1.0), SMatrixModel::sinh_gordon(1.5, 1.0).unwrap()][which].clone();
        let sp = space(model, 5, 2);
        let m = CreationMonomial::new(vec![
            RapidityFunction::gaussian(vec![c(1.0, 0.3)], a, t0),
            RapidityFunction::gaussian(vec![c(-0.4, 0.9)], b, t1),
        ]);
        let r1 = xi_apply(&sp, s, &m).unwrap();
        let r2 = xi_apply_symbolic(&sp, s, &m).unwrap();
        prop_assert!(r1.sub(&r2).norm() <= 1e-12 * r1.norm().max(1.0));
    }
}

#[test]
fn one_particle_damping_uses_the_mass() {
    let m = 1.7;
    let sp = space(SMatrixModel::free(m), 6, 1);
    let xi = RapidityFunction::gaussian(vec![c(0.8, -0.1)], 0.5, 0.2);
    let s = 0.6;
    let v = xi_apply(&sp, s, &CreationMonomial::new(vec![xi.clone()])).unwrap();
    for (i, &t) in sp.grid.nodes.iter().enumerate() {
        // ξ(θ − iπ/2) e^{−ms cosh θ} in orthonormal grid coordinates
        let want = xi.eval(0, c(t, -PI / 2.0)).unwrap()
            * (-m * s * t.cosh()).exp()
            * sp.grid.weights[i].sqrt();
        assert!((v.sectors[1][i] - want).norm() < 1e-14);
    }
}

#[test]
fn free_scan_is_monotone() {
    let sp = space(SMatrixModel::free(1.0), 6, 2);
    let grid: Vec<f64> = (1..=10).map(|k| 0.5 * k as f64).collect();
    let scan = nuclear_norm_scan(&sp, &grid, &family()).unwrap();
    assert!(scan.monotone);
    assert!(scan
        .rows
        .windows(2)
        .all(|w| w[1].total <= w[0].total + 1e-12));
}

#[test]
fn ising_singular_values_strictly_decrease() {
    let sp = space(SMatrixModel::ising(1.0), 8, 2);
    let grid = [0.25, 0.5, 1.0, 2.0, 4.0];
    let scan = nuclear_norm_scan(&sp, &grid, &family()).unwrap();
    assert!(
        scan.rows.windows(2).all(|w| w[1].total < w[0].total),
        "{:?}",
        scan.rows
    );
    // z†(ξ)² = 0 for S = −1, so nothing reaches sector 2
    assert!(scan.rows.iter().all(|r| r.per_sector[2] < 1e-12));
}

#[test]
fn large_splitting_leaves_only_the_vacuum() {
    let sp = space(SMatrixModel::sinh_gordon(1.0, 1.0).unwrap(), 6, 2);
    let sv = singular_values(&sp, 60.0, &family()).unwrap();
    let total: f64 = sv.iter().sum();
    assert!((total - 1.0).abs() < 1e-12, "{sv:?}");
    assert!((sv[0] - 1.0).abs() < 1e-12);
}

#[test]
fn invalid_inputs_are_rejected() {
    let sp = space(SMatrixModel::free(1.0), 4, 1);
    assert!(xi_apply(&sp, -1.0, &CreationMonomial::identity()).is_err());
    let g = RapidityFunction::gaussian(vec![c(1.0, 0.0)], 0.5, 0.0);
    assert!(xi_apply(&sp, 1.0, &CreationMonomial::new(vec![g.clone(), g])).is_err());
}
