use aqft::fock::*;
use aqft::linalg::c;
use aqft::quadrature::Quadrature;
use aqft::smatrix::SMatrixModel;
use aqft::C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn space(model: SMatrixModel, m: usize, n_max: usize) -> FockSpace {
    let grid = GridSpec::from_quadrature(&Quadrature::uniform(m, 2.5), model.dim()).unwrap();
    FockSpace::new(model, grid, n_max).unwrap()
}

fn models() -> Vec<SMatrixModel> {
    vec![
        SMatrixModel::free(1.0),
        SMatrixModel::ising(1.0),
        SMatrixModel::sinh_gordon(1.0, 1.0).unwrap(),
        SMatrixModel::flip(1.0, 1.0).unwrap(),
        SMatrixModel::flip(-1.0, 1.0).unwrap(),
    ]
}

fn random_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect()
}

fn random_fock<R: Rng>(rng: &mut R, s: &FockSpace) -> FockVector {
    let mut v = s.zero();
    for sec in v.sectors.iter_mut() {
        *sec = random_vec(rng, sec.len());
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projection_is_idempotent_and_self_adjoint(seed in 0u64..1000, which in 0usize..5) {
        let s = space(models()[which].clone(), 3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_fock(&mut rng, &s);
        let v = random_fock(&mut rng, &s);
        let pu = s.project(&u);
        prop_assert!(s.project(&pu).sub(&pu).norm() < 1e-12);
        prop_assert!((pu.inner(&v) - u.inner(&s.project(&v))).norm() < 1e-12);
        prop_assert!(s.s_symmetry_residual(&pu) < 1e-12);
    }

    #[test]
    fn creation_is_adjoint_to_annihilation(seed in 0u64..1000, which in 0usize..5) {
        let s = space(models()[which].clone(), 3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_vec(&mut rng, s.md());
        let u = random_fock(&mut rng, &s);
        let v = random_fock(&mut rng, &s);
        let lhs = s.create(&phi, &u).inner(&v);
        let rhs = u.inner(&s.annihilate(&phi, &v));
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn j_is_an_antiunitary_involution_on_symmetric_vectors(seed in 0u64..1000, which in 0usize..5) {
        let s = space(models()[which].clone(), 3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = s.random_symmetric(&mut rng);
        let v = s.random_symmetric(&mut rng);
        prop_assert!(s.apply_j(&s.apply_j(&u)).sub(&u).norm() < 1e-12);
        let lhs = s.apply_j(&u).inner(&s.apply_j(&v));
        prop_assert!((lhs - u.inner(&v).conj()).norm() < 1e-12);
    }

    #[test]
    fn translations_commute_with_the_projection(seed in 0u64..1000, x in prop::array::uniform2(-1.0..1.0f64)) {
        let s = space(SMatrixModel::sinh_gordon(1.0, 1.0).unwrap(), 3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_fock(&mut rng, &s);
        let a = s.project(&s.translate(x, 0.0, &u).unwrap());
        let b = s.translate(x, 0.0, &s.project(&u)).unwrap();
        prop_assert!(a.sub(&b).norm() < 1e-12);
        prop_assert!((s.translate(x, 0.0, &u).unwrap().norm() - u.norm()).abs() < 1e-12);
    }
}

/// Dimension of the symmetric or antisymmetric power of C^k.
fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn constant_s_ranks_match_bose_and_fermi_counting() {
    for m in 2..=5 {
        let free = space(SMatrixModel::free(1.0), m, 3);
        let ising = space(SMatrixModel::ising(1.0), m, 3);
        for n in 0..=3 {
            assert_eq!(
                free.projector_trace(n).round() as usize,
                binom(m + n - 1, n),
                "free m={m} n={n}"
            );
            let fermi = if n <= m { binom(m, n) } else { 0 };
            assert_eq!(
                ising.projector_trace(n).round() as usize,
                fermi,
                "ising m={m} n={n}"
            );
        }
    }
    let s = space(SMatrixModel::free(1.0), 2, 2);
    assert_eq!(s.sector_onb(2).unwrap().len(), 3);
    let s = space(SMatrixModel::ising(1.0), 2, 2);
    assert_eq!(s.sector_onb(2).unwrap().len(), 1);
}

#[test]
fn free_two_particle_projection_is_the_symmetrizer() {
    let s = space(SMatrixModel::free(1.0), 3, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut v = s.zero();
    v.sectors[2] = random_vec(&mut rng, 9);
    let p = s.project(&v);
    for i in 0..3 {
        for j in 0..3 {
            let want = (v.sectors[2][i * 3 + j] + v.sectors[2][j * 3 + i]) * 0.5;
            assert!((p.sectors[2][i * 3 + j] - want).norm() < 1e-14);
        }
    }
}

#[test]
fn zf_relations_for_interacting_models() {
    for model in [
        SMatrixModel::ising(1.0),
        SMatrixModel::sinh_gordon(1.0, 1.0).unwrap(),
    ] {
        let s = space(model, 4, 3);
        let r = zf_residuals(&s).unwrap();
        assert!(r.max() < 1e-9, "{}: {r:?}", s.model.name);
    }
}

#[test]
fn constant_s_matches_occupation_number_oracle() {
    for model in [SMatrixModel::free(1.0), SMatrixModel::ising(1.0)] {
        let s = space(model, 3, 3);
        assert!(ccr_car_oracle_residual(&s).unwrap() < 1e-12);
    }
    let sg = space(SMatrixModel::sinh_gordon(1.0, 1.0).unwrap(), 3, 2);
    assert!(ccr_car_oracle_residual(&sg).is_err());
}

#[test]
fn broken_s_is_refused() {
    let model = SMatrixModel::broken_yang_baxter(1.0);
    let grid = GridSpec::from_quadrature(&Quadrature::uniform(4, 2.5), model.dim()).unwrap();
    assert!(FockSpace::new(model.clone(), grid.clone(), 3).is_err());
    assert!(
        !FockSpace::new_unchecked(model, grid, 3)
            .unwrap()
            .representation_ok
    );
}

#[test]
fn free_expansion_of_annihilator_times_creator() {
    // z(φ)z†(ψ) = ⟨φ, ψ⟩ + z†(ψ)z(φ) for S = 1
    let s = space(SMatrixModel::free(1.0), 3, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let phi = random_vec(&mut rng, 3);
    let psi = random_vec(&mut rng, 3);
    let op = FockOperator::annihilate(&phi).times(&FockOperator::create(&psi));
    let exp = normal_ordered_expansion(&s, &op, 2).unwrap();
    let ip: C64 = phi.iter().zip(&psi).map(|(a, b)| a.conj() * b).sum();
    assert!((exp.get(0, 0).unwrap()[(0, 0)] - ip).norm() < 1e-12);
    // the (1,1) kernel is ψ φ̄
    let f11 = exp.get(1, 1).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!((f11[(i, j)] - psi[i] * phi[j].conj()).norm() < 1e-12);
        }
    }
    assert!(exp.get(2, 0).unwrap().norm() < 1e-12);
    assert!(exp.roundtrip_residual < 1e-12);
}

#[test]
fn expansion_cutoff_cannot_exceed_truncation() {
    let s = space(SMatrixModel::free(1.0), 2, 2);
    assert!(normal_ordered_expansion(&s, &FockOperator::identity(), 3).is_err());
}

#[test]
fn dense_operator_export_round_trips() {
    let s = space(SMatrixModel::ising(1.0), 2, 2);
    let phi = vec![c(0.3, 0.1), c(-0.5, 0.2)];
    let m = FockOperator::create(&phi).dense(&s);
    assert_eq!(m.nrows(), s.total_len());
    let mut buf = Vec::new();
    write_dense_binary(&m, &mut buf).unwrap();
    assert_eq!(read_dense_binary(buf.as_slice()).unwrap(), m);
    let mut text = Vec::new();
    write_dense_csv(&m, &mut text).unwrap();
    assert_eq!(
        String::from_utf8(text).unwrap().lines().count(),
        1 + m.nrows() * m.ncols()
    );
}
