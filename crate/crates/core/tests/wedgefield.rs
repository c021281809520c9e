use aqft::fock::{FockSpace, FockVector, GridSpec};
use aqft::linalg::c;
use aqft::quadrature::Quadrature;
use aqft::singleparticle::RapidityFunction;
use aqft::smatrix::SMatrixModel;
use aqft::warp::deformed_phase;
use aqft::wedgefield::*;
use aqft::C64;

fn space(model: SMatrixModel, m: usize, n_max: usize) -> FockSpace {
    let d = model.dim();
    let q = Quadrature::uniform(m, 2.5);
    FockSpace::new(model, GridSpec::from_quadrature(&q, d).unwrap(), n_max).unwrap()
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[test]
fn field_creates_the_one_particle_state_from_the_vacuum() {
    for model in [
        SMatrixModel::free(1.0),
        SMatrixModel::ising(1.0),
        SMatrixModel::flip(1.0, 1.0).unwrap(),
    ] {
        let s = space(model, 4, 2);
        let coef: Vec<C64> = (0..s.dim()).map(|k| c(0.9, 0.1 * k as f64)).collect();
        let xi = RapidityFunction::gaussian(coef, 0.6, -0.1);
        let v = phi(&s, &xi).unwrap().apply(&s, &s.vacuum());
        let want = s.grid.sample(&xi);
        let diff: f64 = v.sectors[1]
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-14, "{}", s.model.name);
        assert!(v.sector_norm(0) < 1e-15 && v.sector_norm(2) < 1e-15);
    }
}

#[test]
fn free_field_commutator_is_the_symplectic_scalar() {
    // for S = 1, [Φ(f), Φ(g)] = ⟨f⁺, g⟩ − ⟨g⁺, f⟩ with f⁺ = JΔ^{1/2}f, away from the top sector
    let model = SMatrixModel::free(1.0);
    let s = space(model.clone(), 4, 3);
    let spec = &model.spectrum;
    let f = RapidityFunction::gaussian(vec![c(1.0, 0.4)], 0.7, 0.3);
    let g = RapidityFunction::gaussian(vec![c(-0.2, 0.8)], 0.5, -0.4);
    let (fs, gs) = (s.grid.sample(&f), s.grid.sample(&g));
    let (fp, gp) = (
        s.grid.sample(&f.apply_s1(spec)),
        s.grid.sample(&g.apply_s1(spec)),
    );
    let scalar = dot(&fp, &gs) - dot(&gp, &fs);
    assert!(scalar.norm() > 1e-3, "oracle should be non-trivial");
    let pf = phi(&s, &f).unwrap();
    let pg = phi(&s, &g).unwrap();
    let comm = pf.op.commutator(&pg.op);
    let mut worst: f64 = 0.0;
    for v in s.symmetric_basis(s.n_max - 1).unwrap() {
        let lhs = comm.apply(&s, &v);
        let rhs: FockVector = v.scale(scalar);
        worst = worst.max(lhs.sub(&rhs).norm());
    }
    // continued samples are large (e^{aπ²}) and z(f⁺)z(g⁺) cancels between
    // the two orderings, so rounding scales with |f⁺||g⁺|
    let top = |v: &[C64]| v.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let scale = top(&fp) * top(&gp);
    assert!(worst < 1e-15 * scale, "{worst} at scale {scale}");
}

/// `φ(ζ)/(ζ + iπ/2)`, which has a pole inside the strip.
fn with_strip_pole(f: &RapidityFunction) -> RapidityFunction {
    let g = f.clone();
    RapidityFunction::new(1, "pole", move |a, z| {
        g.eval(a, z)
            .map(|v| v / (z + c(0.0, std::f64::consts::FRAC_PI_2)))
    })
}

#[test]
fn ising_locality_with_negative_control() {
    // the contour shift behind locality needs a fine grid
    let model = SMatrixModel::ising(1.0);
    let q = Quadrature::uniform(48, 12.0);
    let s = FockSpace::new(model.clone(), GridSpec::from_quadrature(&q, 1).unwrap(), 2).unwrap();
    let (f, g) = k1_pair(&model, 0.2, 0.3, 0.3);
    let good = locality_check(&s, &f, &g).unwrap();
    assert!(good.grid < 1e-6, "{good:?}");
    assert!(good.kernel.unwrap() < 1e-6);
    let bad = locality_check(&s, &with_strip_pole(&f), &g).unwrap();
    assert!(bad.grid > 1e-5, "{bad:?}");
}

#[test]
fn sinh_gordon_continuum_locality() {
    let model = SMatrixModel::sinh_gordon(1.0, 1.0).unwrap();
    let (f, g) = k1_pair(&model, 0.3, 0.4, 0.2);
    let quad = Quadrature::composite_gauss_legendre(640, 8, 12.0);
    let cfgs = vec![vec![], vec![0.5], vec![-1.0, 0.7]];
    let (sum, shift) = continuum_locality_residual(&model, &f, &g, &cfgs, &quad).unwrap();
    assert!(sum < 1e-6 && shift < 1e-6, "{sum} {shift}");
    let (bad, _) =
        continuum_locality_residual(&model, &with_strip_pole(&f), &g, &cfgs, &quad).unwrap();
    assert!(bad > 1e-5, "{bad}");
}

#[test]
fn k1_fields_are_self_adjoint() {
    for model in [
        SMatrixModel::ising(1.0),
        SMatrixModel::sinh_gordon(2.0, 1.0).unwrap(),
    ] {
        let s = space(model.clone(), 4, 3);
        let xi = RapidityFunction::k1_gaussian(&model.spectrum, vec![c(0.5, -0.3)], 0.6, 0.2);
        let r = adjoint_check(&s, &xi).unwrap();
        assert!(
            r.adjoint < 1e-12 && r.symmetry < 1e-12,
            "{}: {r:?}",
            model.name
        );
    }
}

#[test]
fn nc_exp_scattering_factor_is_the_deformed_phase() {
    let (kappa, m) = (0.8, 1.0);
    let s = space(SMatrixModel::nc_exp(kappa, m).unwrap(), 4, 2);
    for (i, j) in [(0, 1), (0, 3), (2, 1), (3, 0)] {
        let r = scattering_reorder(&s, i, j).unwrap();
        let want = deformed_phase(r.theta_i, r.theta_j, kappa, m).phase;
        assert!(
            (r.factor.unwrap() - want).norm() < 1e-12,
            "({i},{j}): {:?} vs {want}",
            r.factor
        );
        assert!(r.residual < 1e-12);
        assert_eq!(r.ordering == Asymptotic::Out, r.theta_i < r.theta_j);
    }
}

#[test]
fn cyclicity_reaches_the_symmetric_dimension() {
    let model = SMatrixModel::sinh_gordon(1.0, 1.0).unwrap();
    let s = space(model.clone(), 3, 2);
    let family: Vec<RapidityFunction> = [-1.5, 0.0, 1.5]
        .iter()
        .map(|&t| RapidityFunction::k1_gaussian(&model.spectrum, vec![c(1.0, 0.0)], 0.5, t))
        .collect();
    let (achieved, target) = cyclicity_rank(&s, &family, 2).unwrap();
    assert_eq!(achieved, target);
    assert!(cyclicity_rank(&s, &family, 3).is_err());
}
