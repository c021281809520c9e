//! Verification suites. Each suite turns library checks into report records.

use crate::config::{DeclaredRep, RunConfig, Tolerances};
use crate::report::{Record, Table};
use anyhow::Result;
use aqft::fock::{
    ccr_car_oracle_residual, coxeter_equivalent_word, normal_ordered_expansion, number_bound_check,
    zf_residuals, FockOperator, FockSpace, GridSpec,
};
use aqft::geometry::{
    causal_complement, is_admissible, lorentz_defect, random_poincare, rotation, wedge_boost_right,
    wedge_contains, wedge_includes, SpacetimePoint, WarpParameter, Wedge, DEFAULT_TOL,
};
use aqft::linalg::{
    binomial, c, identity, inv_sqrt_psd, kron, random_complex_matrix, random_complex_vec,
    random_unitary, spectral_norm,
};
use aqft::nuclearity::{
    assemble, monomial_family, nuclear_norm_scan, xi_apply, xi_apply_symbolic, CreationMonomial,
};
use aqft::quadrature::Quadrature;
use aqft::singleparticle::{
    borchers_relation_check, default_lambdas, distance, k1_membership, mass_shell, RapidityFunction,
};
use aqft::smatrix::{
    axiom_residuals, conjugation_symmetry_strip, linspace, regularity_probe, Axiom, ModelKind,
    SMatrixModel,
};
use aqft::warp::{
    cascade_check, commutation_theorem_check, continuity_profile, covariance_check, deformed_phase,
    random_instance, rieffel_oracle, rieffel_product, vacuum_check, warp, warp_blockwise,
    warp_orderings, SpectralRep, Symmetry,
};
use aqft::wedgefield::{
    adjoint_check, continuum_locality_residual, cyclicity_rank, locality_check,
    modular_boost_check, phi, reflection_check, scattering_reorder, symmetric_onb,
};
use aqft::{CMatrix, RMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Geometry,
    Smatrix,
    Regularity,
    Singleparticle,
    Fock,
    Wedgefield,
    Warp,
    Nuclearity,
}

impl Suite {
    /// Dependency order.
    pub const ALL: [Suite; 8] = [
        Suite::Geometry,
        Suite::Smatrix,
        Suite::Regularity,
        Suite::Singleparticle,
        Suite::Fock,
        Suite::Wedgefield,
        Suite::Warp,
        Suite::Nuclearity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Smatrix => "smatrix",
            Suite::Regularity => "regularity",
            Suite::Singleparticle => "singleparticle",
            Suite::Fock => "fock",
            Suite::Wedgefield => "wedgefield",
            Suite::Warp => "warp",
            Suite::Nuclearity => "nuclearity",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::Geometry => {
                "wedge predicates, complements, inclusions, admissible warp matrices"
            }
            Suite::Smatrix => "S-matrix axioms on the 41-point sample grid",
            Suite::Regularity => "boundedness on a widened strip against the model's claim",
            Suite::Singleparticle => "mass shell, standard-subspace membership, modular relations",
            Suite::Fock => {
                "S-twisted permutations, P_S, Zamolodchikov-Faddeev relations, number bounds"
            }
            Suite::Wedgefield => {
                "wedge fields: vacuum action, adjoints, locality, cyclicity, scattering"
            }
            Suite::Warp => "warped convolution and Rieffel product on random matrix instances",
            Suite::Nuclearity => {
                "two routes for the nuclearity map, singular values, nuclear-norm scans"
            }
        }
    }

    /// Suites whose failure makes this one meaningless.
    pub fn prerequisites(self) -> &'static [Suite] {
        match self {
            Suite::Fock => &[Suite::Smatrix],
            Suite::Wedgefield => &[Suite::Fock],
            Suite::Nuclearity => &[Suite::Fock],
            _ => &[],
        }
    }

    /// Per-suite seed derived from the run seed.
    pub fn seed(self, base: u64) -> u64 {
        let idx = Suite::ALL.iter().position(|&s| s == self).unwrap() as u64;
        base ^ (idx + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
    }
}

#[derive(Debug, Default)]
pub struct SuiteOutput {
    pub records: Vec<Record>,
    pub tables: Vec<Table>,
}

struct Recorder {
    suite: &'static str,
    out: SuiteOutput,
}

impl Recorder {
    fn new(suite: Suite) -> Self {
        Recorder {
            suite: suite.name(),
            out: SuiteOutput::default(),
        }
    }

    fn push(
        &mut self,
        check: &str,
        anchor: &str,
        residual: Option<f64>,
        tolerance: Option<f64>,
        pass: bool,
        mandatory: bool,
        note: Option<String>,
    ) {
        let (residual, note) = match residual {
            Some(r) if !r.is_finite() => (
                None,
                Some(note.map_or("non-finite residual".into(), |n| {
                    format!("{n}; non-finite residual")
                })),
            ),
            other => (other, note),
        };
        self.out.records.push(Record {
            suite: self.suite.into(),
            check: check.into(),
            anchor: anchor.into(),
            residual,
            tolerance,
            pass,
            mandatory,
            note,
        });
    }

    /// `residual ≤ tol`.
    fn le(&mut self, check: &str, anchor: &str, residual: f64, tol: f64) {
        self.push(
            check,
            anchor,
            Some(residual),
            Some(tol),
            residual <= tol,
            true,
            None,
        );
    }

    fn le_info(&mut self, check: &str, anchor: &str, residual: f64, tol: f64, note: &str) {
        self.push(
            check,
            anchor,
            Some(residual),
            Some(tol),
            residual <= tol,
            false,
            Some(note.into()),
        );
    }

    /// Negative control: the residual must exceed `threshold`.
    fn above(&mut self, check: &str, anchor: &str, residual: f64, threshold: f64) {
        let pass = residual > threshold || residual.is_infinite();
        self.push(
            check,
            anchor,
            Some(residual),
            Some(threshold),
            pass,
            true,
            Some("negative control: must exceed tolerance".into()),
        );
    }

    fn flag(&mut self, check: &str, anchor: &str, ok: bool, note: Option<String>) {
        self.push(check, anchor, None, None, ok, true, note);
    }

    fn info(&mut self, check: &str, anchor: &str, ok: bool, note: String) {
        self.push(check, anchor, None, None, ok, false, Some(note));
    }

    /// Exact count of failing cases.
    fn count(&mut self, check: &str, anchor: &str, failures: usize, total: usize) {
        self.push(
            check,
            anchor,
            Some(failures as f64),
            Some(0.0),
            failures == 0,
            true,
            Some(format!("{failures} of {total} cases disagree")),
        );
    }

    fn error(&mut self, check: &str, anchor: &str, err: impl std::fmt::Display) {
        self.push(
            check,
            anchor,
            None,
            None,
            false,
            true,
            Some(err.to_string()),
        );
    }
}

/// Shared inputs of a run.
pub struct Context {
    pub cfg: RunConfig,
    pub model: SMatrixModel,
    pub tol: Tolerances,
}

impl Context {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        Ok(Context {
            model: cfg.build_model()?,
            tol: cfg.tolerances.clone(),
            cfg: cfg.clone(),
        })
    }

    fn rng(&self, suite: Suite) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(suite.seed(self.cfg.seed))
    }

    fn space(&self) -> aqft::Result<FockSpace> {
        let grid = GridSpec::from_quadrature(&self.cfg.quadrature(), self.model.dim())?;
        FockSpace::new(self.model.clone(), grid, self.cfg.truncation.n_max)
    }

    fn mass(&self) -> f64 {
        self.model.mass(0)
    }

    /// `±1` for models with `S = ±F` (flip on D = 1 is the identity).
    fn permutation_sign(&self) -> Option<f64> {
        match self.model.kind {
            ModelKind::Free => Some(1.0),
            ModelKind::Ising => Some(-1.0),
            ModelKind::Flip { sign } => Some(sign),
            _ => None,
        }
    }
}

pub fn run_suite(suite: Suite, ctx: &Context) -> SuiteOutput {
    let mut r = Recorder::new(suite);
    match suite {
        Suite::Geometry => geometry(ctx, &mut r),
        Suite::Smatrix => smatrix(ctx, &mut r),
        Suite::Regularity => regularity(ctx, &mut r),
        Suite::Singleparticle => singleparticle(ctx, &mut r),
        Suite::Fock => fock(ctx, &mut r),
        Suite::Wedgefield => wedgefield(ctx, &mut r),
        Suite::Warp => warp_suite(ctx, &mut r),
        Suite::Nuclearity => nuclearity(ctx, &mut r),
    }
    r.out
}

fn unit_coefs(d: usize, k: usize) -> Vec<C64> {
    (0..d)
        .map(|a| if a == k % d { c(1.0, 0.0) } else { c(0.0, 0.0) })
        .collect()
}

fn coefs(d: usize, base: C64) -> Vec<C64> {
    (0..d)
        .map(|k| base + c(0.1 * k as f64, -0.05 * k as f64))
        .collect()
}

// ---------------------------------------------------------------- geometry

fn random_point<R: Rng>(rng: &mut R, d: usize, scale: f64) -> SpacetimePoint {
    SpacetimePoint::new(
        (0..d)
            .map(|_| (rng.gen::<f64>() * 2.0 - 1.0) * scale)
            .collect(),
    )
}

fn mat_vec(m: &RMatrix, v: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

fn random_warp_matrix<R: Rng>(rng: &mut R, k: usize, d: usize) -> WarpParameter {
    let kappa = rng.gen::<f64>() * 2.0 - 1.0;
    let kp = rng.gen::<f64>() * 2.0 - 1.0;
    match k % 5 {
        0 | 1 => WarpParameter::standard(d, kappa, kp),
        2 => WarpParameter::random_skew(rng, d, 1.0),
        3 => {
            let base = WarpParameter::standard(d, kappa.abs(), kp);
            let pert = WarpParameter::random_skew(rng, d, 1e-3);
            WarpParameter::new(base.q + pert.q)
        }
        _ => WarpParameter::new(RMatrix::zeros(d, d)),
    }
}

fn geometry(ctx: &Context, r: &mut Recorder) {
    let mut rng = ctx.rng(Suite::Geometry);
    let tol = DEFAULT_TOL;

    let mut bad = 0;
    for _ in 0..1000 {
        let d = rng.gen_range(2..=4);
        let w = Wedge::right(d).transformed(&random_poincare(&mut rng, d, 1.0, 2.0));
        let g = random_poincare(&mut rng, d, 1.5, 3.0);
        let p = random_point(&mut rng, d, 3.0);
        let before = wedge_contains(&w, &p, tol);
        let after = g
            .apply(&p)
            .and_then(|gp| wedge_contains(&w.transformed(&g), &gp, tol));
        if before.is_err() || after.is_err() || before.unwrap() != after.unwrap() {
            bad += 1;
        }
    }
    r.count(
        "membership_covariance",
        "geometry.wedge_contains",
        bad,
        1000,
    );

    let mut bad = 0;
    for _ in 0..1000 {
        let d = rng.gen_range(2..=4);
        let w = Wedge::right(d).transformed(&random_poincare(&mut rng, d, 1.0, 2.0));
        if !causal_complement(&causal_complement(&w)).approx_eq(&w, 1e-9) {
            bad += 1;
        }
    }
    r.count(
        "complement_involution",
        "geometry.causal_complement",
        bad,
        1000,
    );
    let wl = Wedge::left(2);
    r.flag(
        "complement_of_right_is_left",
        "geometry.causal_complement",
        causal_complement(&Wedge::right(2)).approx_eq(&wl, tol),
        None,
    );

    let mut bad = 0;
    for _ in 0..1000 {
        let w = Wedge::right(2).transformed(&random_poincare(&mut rng, 2, 2.0, 3.0));
        if w.side_2d().is_none() {
            bad += 1;
        }
    }
    r.count(
        "two_dimensional_normal_form",
        "geometry.wedge_includes",
        bad,
        1000,
    );

    let mut bad = 0;
    for k in 0..1000 {
        let d = rng.gen_range(2..=4);
        let w1 = Wedge::right(d).transformed(&random_poincare(&mut rng, d, 1.0, 2.0));
        let x: Vec<f64> = if k % 5 == 0 {
            vec![0.0; d]
        } else {
            random_point(&mut rng, d, 1.0).coords
        };
        let w2 = w1.translated(&x);
        if wedge_includes(&w1, &w2, tol)
            && wedge_includes(&w2, &w1, tol)
            && !w1.approx_eq(&w2, 1e-9)
        {
            bad += 1;
        }
    }
    r.count(
        "inclusion_antisymmetry",
        "geometry.wedge_includes",
        bad,
        1000,
    );
    let wr = Wedge::right(2);
    let examples = wedge_includes(&wr, &wr.translated(&[0.0, 1.0]), tol)
        && !wedge_includes(&wr, &wr.translated(&[0.0, -1.0]), tol)
        && !wedge_includes(&wr, &wl, tol);
    r.flag(
        "inclusion_examples",
        "geometry.wedge_includes",
        examples,
        None,
    );

    let mut bad = 0;
    let mut rejected = 0;
    for k in 0..200 {
        let d = 2 + k % 3;
        let q = random_warp_matrix(&mut rng, k, d);
        match is_admissible(&q, d, tol) {
            Ok(rep) => {
                if rep.pattern != rep.direct {
                    bad += 1;
                }
            }
            Err(_) => rejected += 1,
        }
    }
    r.count(
        "admissibility_pattern_vs_direct",
        "geometry.is_admissible",
        bad + rejected,
        200,
    );
    let ok = |k: f64| {
        is_admissible(&WarpParameter::standard(2, k, 0.0), 2, tol)
            .map(|a| a.admissible)
            .unwrap_or(false)
    };
    r.flag(
        "admissibility_examples",
        "geometry.is_admissible",
        ok(0.3) && !ok(-0.3) && ok(0.0),
        None,
    );

    let mut bad = 0;
    for d in 2..=4 {
        let q = WarpParameter::standard(d, 0.8, 0.5);
        for _ in 0..100 {
            let mut p: Vec<f64> = (1..d).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let s: f64 = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            p.insert(0, s + rng.gen::<f64>());
            let y = mat_vec(&q.q, &p);
            if y[1] - y[0].abs() < -tol * (1.0 + p[0]) {
                bad += 1;
            }
        }
    }
    r.count(
        "forward_cone_into_wedge",
        "geometry.is_admissible",
        bad,
        300,
    );

    let worst = linspace(-2.0, 2.0, 41)
        .iter()
        .map(|&t| lorentz_defect(&wedge_boost_right(4, t)))
        .fold(0.0, f64::max);
    r.le(
        "wedge_boost_preserves_form",
        "geometry.wedge_reflection_and_boost",
        worst,
        1e-13,
    );
}

// ----------------------------------------------------------------- smatrix

fn smatrix(ctx: &Context, r: &mut Recorder) {
    let grid = linspace(-5.0, 5.0, 41);
    let rep = match axiom_residuals(&ctx.model, &grid, ctx.tol.axiom) {
        Ok(rep) => rep,
        Err(e) => return r.error("axiom_residuals", "smatrix.axiom_residuals", e),
    };
    for e in &rep.entries {
        let tol = if e.axiom == Axiom::Crossing && matches!(ctx.model.kind, ModelKind::NcExp { .. })
        {
            ctx.tol.exact
        } else {
            e.tolerance
        };
        match e.residual {
            Some(res) => r.le(e.axiom.name(), "smatrix.axiom_residuals", res, tol),
            None => r.push(
                e.axiom.name(),
                "smatrix.axiom_residuals",
                None,
                Some(tol),
                e.pass,
                true,
                e.note.clone(),
            ),
        }
    }
    match conjugation_symmetry_strip(&ctx.model, &grid, &[0.25 * PI, 0.5 * PI, 0.75 * PI]) {
        Ok(res) => r.le_info(
            "conjugation_symmetry_strip",
            "smatrix.axiom_residuals",
            res,
            ctx.tol.axiom,
            "interior strip values: informational",
        ),
        Err(e) => r.info(
            "conjugation_symmetry_strip",
            "smatrix.axiom_residuals",
            false,
            e.to_string(),
        ),
    }
    let mut table = Table::new(
        "axioms",
        &[
            "theta",
            "unitarity",
            "hermitian_analyticity",
            "mass_selection",
            "conjugation_symmetry",
            "crossing",
        ],
    );
    for &t in &grid {
        if let Ok(p) = axiom_residuals(&ctx.model, &[t], ctx.tol.axiom) {
            let g = |a| p.residual(a).unwrap_or(f64::NAN);
            table.rows.push(vec![
                t,
                g(Axiom::Unitarity),
                g(Axiom::HermitianAnalyticity),
                g(Axiom::MassSelection),
                g(Axiom::ConjugationSymmetry),
                g(Axiom::Crossing),
            ]);
        }
    }
    r.out.tables.push(table);
}

// -------------------------------------------------------------- regularity

/// Probe margin: half the claimed margin, capped at 0.1.
pub fn regularity_epsilon(model: &SMatrixModel) -> f64 {
    let m = model.regularity_margin;
    if m > 0.0 {
        (0.5 * m).min(0.1)
    } else {
        0.1
    }
}

fn regularity(ctx: &Context, r: &mut Recorder) {
    let eps = regularity_epsilon(&ctx.model);
    let rep = regularity_probe(&ctx.model, eps, 8.0, 161, 21);
    let note = format!(
        "ε = {eps}, claimed regular: {}, sup ≈ {:.6e}",
        rep.claimed, rep.sup_estimate
    );
    r.flag(
        "claim_consistency",
        "smatrix.regularity_probe",
        !rep.claimed || rep.bounded,
        Some(note.clone()),
    );
    r.info(
        "bounded_on_widened_strip",
        "smatrix.regularity_probe",
        rep.bounded,
        note,
    );
    if matches!(ctx.model.kind, ModelKind::Free | ModelKind::Ising) {
        r.le(
            "unit_sup",
            "smatrix.regularity_probe",
            (rep.sup_estimate - 1.0).abs(),
            ctx.tol.exact,
        );
    }
}

// ---------------------------------------------------------- singleparticle

fn singleparticle(ctx: &Context, r: &mut Recorder) {
    let spec = &ctx.model.spectrum;
    let d = ctx.model.dim();
    let quad = Quadrature::composite_gauss_legendre(32, 8, 8.0);
    let mut worst: f64 = 0.0;
    for &m in &spec.masses {
        for t in linspace(-6.0, 6.0, 121) {
            let p = mass_shell(m, c(t, 0.0));
            let sq = p[0].re * p[0].re - p[1].re * p[1].re;
            worst = worst.max((sq - m * m).abs() / (p[0].re * p[0].re));
        }
    }
    r.le("mass_shell", "singleparticle.act_poincare", worst, 1e-13);

    let xi = RapidityFunction::k1_gaussian(spec, coefs(d, c(1.0, 0.3)), 0.5, 0.2);
    let chi = RapidityFunction::k1_gaussian(spec, coefs(d, c(0.4, -0.6)), 0.8, -0.4);
    let mem = k1_membership(&xi, spec, &default_lambdas(), &quad, ctx.tol.analytic);
    r.flag(
        "k1_member",
        "singleparticle.k1_membership",
        mem.member(),
        Some(format!("boundary residual {:.3e}", mem.boundary_residual)),
    );
    let combo = xi.combine(c(0.7, 0.0), &chi, c(-1.3, 0.0));
    r.flag(
        "k1_real_linear",
        "singleparticle.k1_membership",
        k1_membership(&combo, spec, &default_lambdas(), &quad, ctx.tol.analytic).member(),
        None,
    );
    let not_member = RapidityFunction::gaussian(coefs(d, c(0.0, 1.0)), 0.5, 0.2);
    r.flag(
        "k1_rejects_non_member",
        "singleparticle.k1_membership",
        !k1_membership(
            &not_member,
            spec,
            &default_lambdas(),
            &quad,
            ctx.tol.analytic,
        )
        .member(),
        None,
    );
    r.le(
        "tomita_involution",
        "singleparticle.k1_membership",
        distance(&xi.apply_s1(spec), &xi, &quad),
        ctx.tol.analytic,
    );

    let (x, lam, y, mu) = ([0.3, -0.8], 0.4, [1.1, 0.5], -0.7);
    let lhs = chi.act_poincare(spec, y, mu).act_poincare(spec, x, lam);
    let ly = [
        lam.cosh() * y[0] + lam.sinh() * y[1],
        lam.sinh() * y[0] + lam.cosh() * y[1],
    ];
    let rhs = chi.act_poincare(spec, [x[0] + ly[0], x[1] + ly[1]], lam + mu);
    r.le(
        "representation",
        "singleparticle.act_poincare",
        distance(&lhs, &rhs, &quad),
        ctx.tol.axiom,
    );

    let b = borchers_relation_check(
        spec,
        &[-0.07, 0.05, 0.11],
        &[[0.3, 0.7], [-0.5, 0.2]],
        &[xi.clone(), chi.clone()],
        &quad,
    );
    r.le(
        "modular_boost_relation",
        "singleparticle.borchers_relation_check",
        b.modular,
        ctx.tol.analytic,
    );
    r.le(
        "reflection_relation",
        "singleparticle.borchers_relation_check",
        b.reflection,
        ctx.tol.analytic,
    );
}

// -------------------------------------------------------------------- fock

fn fock(ctx: &Context, r: &mut Recorder) {
    let space = match ctx.space() {
        Ok(s) => s,
        Err(e) => return r.error("representation", "fock.projector_PS", e),
    };
    let tol = &ctx.tol;
    let mut rng = ctx.rng(Suite::Fock);
    r.le(
        "yang_baxter_on_grid",
        "fock.projector_PS",
        space.yang_baxter_residual,
        tol.algebraic,
    );
    r.le(
        "unitarity_on_grid",
        "fock.projector_PS",
        space.unitarity_residual,
        tol.algebraic,
    );

    let mut braid: f64 = 0.0;
    for n in 2..=space.n_max.min(4) {
        let tree = space.perm_tree(n);
        for _ in 0..12 {
            let node = rng.gen_range(0..tree.len());
            let w = tree.word(node);
            let w2 = coxeter_equivalent_word(n, &w, 24, &mut rng);
            let v = random_complex_vec(&mut rng, space.sector_len(n));
            let a = space.apply_word(n, &w, &v);
            let b = space.apply_word(n, &w2, &v);
            let nv: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let diff: f64 = a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            braid = braid.max(diff / nv);
        }
    }
    r.le(
        "braid_word_independence",
        "fock.projector_PS",
        braid,
        tol.algebraic,
    );

    let (mut idem, mut herm, mut fixed): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in 1..=space.n_max {
        let len = space.sector_len(n);
        if len <= 512 {
            match space.projector_ps(n) {
                Ok(p) => {
                    idem = idem.max(spectral_norm(&(&p * &p - &p)));
                    herm = herm.max(spectral_norm(&(&p - p.adjoint())));
                }
                Err(e) => return r.error("projector", "fock.projector_PS", e),
            }
        } else {
            for _ in 0..8 {
                let u = random_complex_vec(&mut rng, len);
                let v = random_complex_vec(&mut rng, len);
                let pv = space.project_sector(n, &v);
                let pu = space.project_sector(n, &u);
                let ppv = space.project_sector(n, &pv);
                let nrm = |x: &[C64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let dot =
                    |x: &[C64], y: &[C64]| x.iter().zip(y).map(|(a, b)| a.conj() * b).sum::<C64>();
                idem = idem.max(
                    nrm(&ppv.iter().zip(&pv).map(|(a, b)| a - b).collect::<Vec<_>>()) / nrm(&v),
                );
                herm = herm.max((dot(&u, &pv) - dot(&pu, &v)).norm() / (nrm(&u) * nrm(&v)));
            }
        }
        let v = random_complex_vec(&mut rng, len);
        let pv = space.project_sector(n, &v);
        for k in 0..n.saturating_sub(1) {
            let t = space.apply_transposition(n, k, &pv);
            let diff: f64 = t
                .iter()
                .zip(&pv)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            fixed = fixed.max(diff);
        }
    }
    r.le("projector_idempotent", "fock.projector_PS", idem, tol.axiom);
    r.le(
        "projector_self_adjoint",
        "fock.projector_PS",
        herm,
        tol.axiom,
    );
    r.le(
        "projector_range_fixed",
        "fock.projector_PS",
        fixed,
        tol.algebraic,
    );

    if let Some(sign) = ctx.permutation_sign() {
        let md = space.md();
        let mut bad = 0;
        let levels = space.n_max.min(4);
        for n in 0..=levels {
            let want = if sign > 0.0 {
                binomial(md + n - 1, n)
            } else {
                binomial(md, n)
            };
            if (space.projector_trace(n) - want as f64).abs() > 1e-9 {
                bad += 1;
            }
        }
        r.count("projector_rank", "fock.projector_PS", bad, levels + 1);
    }

    match zf_residuals(&space) {
        Ok(z) => {
            r.le(
                "zf_annihilation",
                "fock.zf_residuals",
                z.annihilation,
                tol.algebraic,
            );
            r.le(
                "zf_creation",
                "fock.zf_residuals",
                z.creation,
                tol.algebraic,
            );
            r.le("zf_mixed", "fock.zf_residuals", z.mixed, tol.algebraic);
        }
        Err(e) => r.error("zf_relations", "fock.zf_residuals", e),
    }
    if ctx.permutation_sign().is_some() {
        match ccr_car_oracle_residual(&space) {
            Ok(res) => r.le("ccr_car_oracle", "fock.zf_residuals", res, tol.exact),
            Err(e) => r.error("ccr_car_oracle", "fock.zf_residuals", e),
        }
    }
    let nb = number_bound_check(&space, 100, Suite::Fock.seed(ctx.cfg.seed));
    r.flag(
        "number_bounds",
        "fock.create",
        nb.pass,
        Some(format!(
            "{} samples, max ratios {:.6} / {:.6}",
            nb.samples, nb.annihilation_ratio, nb.creation_ratio
        )),
    );

    let phi_s = random_complex_vec(&mut rng, space.md());
    match symmetric_onb(&space, space.n_max - 1) {
        Ok(onb) => {
            let cre = FockOperator::create(&phi_s).dense(&space);
            let ann = FockOperator::annihilate(&phi_s).dense(&space);
            let adj = onb.adjoint() * (&cre - ann.adjoint()) * &onb;
            r.le(
                "creation_adjoint",
                "fock.create",
                spectral_norm(&adj),
                tol.algebraic,
            );
        }
        Err(e) => r.error("creation_adjoint", "fock.create", e),
    }

    let x = [0.4, -0.9];
    let mut cov: f64 = 0.0;
    for _ in 0..4 {
        let v = space.random_symmetric(&mut rng).restricted(space.n_max - 1);
        let tphi = space.translate_one(x, &phi_s);
        let res = (|| -> aqft::Result<f64> {
            let lhs = space.translate(x, 0.0, &space.create(&phi_s, &v))?;
            let rhs = space.create(&tphi, &space.translate(x, 0.0, &v)?);
            let lhs2 = space.translate(x, 0.0, &space.annihilate(&phi_s, &v))?;
            let rhs2 = space.annihilate(&tphi, &space.translate(x, 0.0, &v)?);
            Ok((lhs.sub(&rhs).norm() + lhs2.sub(&rhs2).norm()) / v.norm())
        })();
        match res {
            Ok(v) => cov = cov.max(v),
            Err(e) => {
                return r.error(
                    "translation_covariance",
                    "fock.second_quantize_symmetries",
                    e,
                )
            }
        }
    }
    r.le(
        "translation_covariance",
        "fock.second_quantize_symmetries",
        cov,
        tol.axiom,
    );

    match normal_ordered_expansion(
        &space,
        &FockOperator::annihilate(&phi_s).times(&FockOperator::create(&phi_s)),
        space.n_max.min(2),
    ) {
        Ok(e) => r.le(
            "normal_ordered_roundtrip",
            "fock.normal_ordered_expansion",
            e.roundtrip_residual,
            tol.algebraic,
        ),
        Err(e) => r.error(
            "normal_ordered_roundtrip",
            "fock.normal_ordered_expansion",
            e,
        ),
    }
}

// -------------------------------------------------------------- wedgefield

/// Hardy pair used for locality: `φ ∈ K₁` and `ψ' = Jχ` with `χ ∈ K₁`.
pub fn locality_pair(
    model: &SMatrixModel,
    a1: f64,
    a2: f64,
) -> (RapidityFunction, RapidityFunction) {
    let spec = &model.spectrum;
    let d = model.dim();
    let phi = RapidityFunction::k1_gaussian(spec, coefs(d, c(1.0, 0.3)), a1, 0.4);
    let chi = RapidityFunction::k1_gaussian(spec, coefs(d, c(0.7, -0.2)), a2, -0.3);
    (phi, chi.apply_j(spec))
}

/// `φ(ζ)/(ζ + iπ/2)`: a pole inside the strip breaks the contour shift.
pub fn strip_pole(phi: &RapidityFunction) -> RapidityFunction {
    let f = phi.clone();
    RapidityFunction::new(phi.dim, format!("pole·{}", phi.label), move |a, z| {
        f.eval(a, z).map(|v| v / (z + c(0.0, PI / 2.0)))
    })
}

/// Node configurations of up to two rapidities drawn from `nodes`.
fn configurations(nodes: &[f64]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for &a in nodes {
        out.push(vec![a]);
        for &b in nodes {
            out.push(vec![a, b]);
        }
    }
    out
}

fn locality(ctx: &Context, r: &mut Recorder) {
    let model = &ctx.model;
    let tol = ctx.tol.analytic;
    let anchor = "wedgefield.locality_check";
    if !model.is_scalar() {
        r.info(
            "locality",
            anchor,
            true,
            "not evaluated: closed-form locality kernels are implemented for scalar S".into(),
        );
        return;
    }
    let regular = model.regularity_margin > 0.0;
    if ctx.permutation_sign().is_some() {
        // Constant S: the grid commutator on a fine grid.
        let (phi_f, psi_f) = locality_pair(model, 0.2, 0.3);
        let q = Quadrature::uniform(48, 12.0);
        let res = GridSpec::from_quadrature(&q, 1)
            .and_then(|g| FockSpace::new(model.clone(), g, 2))
            .and_then(|s| {
                Ok((
                    locality_check(&s, &phi_f, &psi_f)?,
                    locality_check(&s, &strip_pole(&phi_f), &psi_f)?,
                ))
            });
        match res {
            Ok((good, bad)) => {
                r.le("locality_grid", anchor, good.grid, tol);
                if let Some(k) = good.kernel {
                    r.le("locality_kernel", anchor, k, tol);
                }
                r.above("locality_negative_control", anchor, bad.grid, 10.0 * tol);
            }
            Err(e) => r.error("locality_grid", anchor, e),
        }
        return;
    }
    let (phi_f, psi_f) = locality_pair(model, 0.3, 0.4);
    let quad = Quadrature::composite_gauss_legendre(640, 8, 12.0);
    let cfgs = configurations(&ctx.cfg.quadrature().nodes);
    let anchor = "wedgefield.locality_check";
    match continuum_locality_residual(model, &phi_f, &psi_f, &cfgs, &quad) {
        Ok((sum, shift)) if regular => {
            r.le("locality_continuum", anchor, sum, tol);
            r.le("contour_shift", anchor, shift, tol);
        }
        Ok((sum, _)) => r.le_info(
            "locality_continuum",
            anchor,
            sum,
            tol,
            "model not regular: informational",
        ),
        Err(e) if regular => r.error("locality_continuum", anchor, e),
        Err(e) => r.info(
            "locality_continuum",
            anchor,
            false,
            format!("model not regular: {e}"),
        ),
    }
    match continuum_locality_residual(model, &strip_pole(&phi_f), &psi_f, &cfgs, &quad) {
        Ok((sum, _)) => r.above("locality_negative_control", anchor, sum, 10.0 * tol),
        Err(e) => r.error("locality_negative_control", anchor, e),
    }
}

fn wedgefield(ctx: &Context, r: &mut Recorder) {
    let space = match ctx.space() {
        Ok(s) => s,
        Err(e) => return r.error("fock_space", "wedgefield.phi", e),
    };
    let tol = &ctx.tol;
    let spec = &ctx.model.spectrum;
    let d = ctx.model.dim();
    let mut rng = ctx.rng(Suite::Wedgefield);
    let xi = RapidityFunction::k1_gaussian(spec, coefs(d, c(1.0, 0.3)), 0.5, 0.2);
    let chi = RapidityFunction::gaussian(coefs(d, c(-0.2, 0.8)), 0.7, -0.5);

    let res = (|| -> aqft::Result<()> {
        let f = phi(&space, &xi)?;
        let got = f.apply(&space, &space.vacuum());
        let want = space.one_particle(&space.grid.sample(&xi));
        r.le(
            "field_on_vacuum",
            "wedgefield.phi",
            got.sub(&want).norm(),
            tol.exact,
        );

        let (al, be) = (c(0.3, -1.2), c(0.8, 0.5));
        let comb = xi.scale(al).add(&chi.scale(be));
        let v = space.random_symmetric(&mut rng);
        let lhs = phi(&space, &comb)?.apply(&space, &v);
        let rhs = phi(&space, &xi)?
            .apply(&space, &v)
            .scale(al)
            .add(&phi(&space, &chi)?.apply(&space, &v).scale(be));
        r.le(
            "complex_linearity",
            "wedgefield.phi",
            lhs.sub(&rhs).norm() / v.norm(),
            tol.exact,
        );

        let a = adjoint_check(&space, &xi)?;
        r.le(
            "field_adjoint",
            "wedgefield.adjoint_check",
            a.adjoint,
            tol.field,
        );
        r.le(
            "field_symmetric_on_k1",
            "wedgefield.adjoint_check",
            a.symmetry,
            tol.field,
        );
        r.le(
            "reflection",
            "wedgefield.covariance_check",
            reflection_check(&space, &xi)?,
            tol.algebraic,
        );
        let cov = aqft::wedgefield::covariance_check(&space, &xi, [0.6, -0.3], None)?;
        r.le(
            "translation_covariance",
            "wedgefield.covariance_check",
            cov,
            tol.algebraic,
        );
        if let Some(g) = spec.gauge.first() {
            let cov = aqft::wedgefield::covariance_check(&space, &xi, [0.0, 0.0], Some(g))?;
            r.le(
                "gauge_covariance",
                "wedgefield.covariance_check",
                cov,
                tol.algebraic,
            );
        }
        Ok(())
    })();
    if let Err(e) = res {
        r.error("field_identities", "wedgefield.phi", e);
    }

    let quad = Quadrature::composite_gauss_legendre(32, 8, 8.0);
    let mb = modular_boost_check(&ctx.model, &xi, &[-0.1, 0.03, 0.2], &quad);
    r.le(
        "modular_group_is_boost",
        "wedgefield.covariance_check",
        mb,
        tol.analytic,
    );

    locality(ctx, r);

    let small = GridSpec::from_quadrature(&Quadrature::uniform(3, 1.5), d)
        .and_then(|g| FockSpace::new(ctx.model.clone(), g, 2));
    match small {
        Ok(s) => {
            let family: Vec<RapidityFunction> = (0..3 * d)
                .map(|k| {
                    RapidityFunction::gaussian(unit_coefs(d, k), 0.8, -0.9 + 0.9 * (k / d) as f64)
                })
                .collect();
            match cyclicity_rank(&s, &family, 2) {
                Ok((got, want)) => r.flag(
                    "cyclicity_rank",
                    "wedgefield.cyclicity_rank",
                    got == want,
                    Some(format!("rank {got} of {want}")),
                ),
                Err(e) => r.error("cyclicity_rank", "wedgefield.cyclicity_rank", e),
            }
        }
        Err(e) => r.error("cyclicity_rank", "wedgefield.cyclicity_rank", e),
    }

    scattering(ctx, &space, r);
}

fn scattering(ctx: &Context, space: &FockSpace, r: &mut Recorder) {
    let m = space.grid.m();
    let mut table = Table::new("scattering", &["theta_i", "theta_j", "re", "im"]);
    let (mut resid, mut factor, mut phase): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let rep = match scattering_reorder(space, i, j) {
                Ok(rep) => rep,
                Err(e) => return r.error("scattering_reorder", "wedgefield.scattering_reorder", e),
            };
            resid = resid.max(rep.residual);
            if let (Some(f), Some(s)) = (rep.factor, rep.expected) {
                factor = factor.max((f - s).norm());
                table.rows.push(vec![rep.theta_i, rep.theta_j, f.re, f.im]);
                if let ModelKind::NcExp { kappa, mass } = ctx.model.kind {
                    phase = phase.max(
                        (deformed_phase(rep.theta_i, rep.theta_j, kappa, mass).phase - s).norm(),
                    );
                }
            }
        }
    }
    r.le(
        "scattering_reorder",
        "wedgefield.scattering_reorder",
        resid,
        ctx.tol.exact,
    );
    if ctx.model.is_scalar() {
        r.le(
            "scattering_factor",
            "wedgefield.scattering_reorder",
            factor,
            ctx.tol.exact,
        );
        r.out.tables.push(table);
    }
    if matches!(ctx.model.kind, ModelKind::NcExp { .. }) {
        r.le(
            "deformed_phase_equals_factor",
            "warp.deformed_phase",
            phase,
            ctx.tol.phase,
        );
    }
}

// -------------------------------------------------------------------- warp

fn rel(x: f64, scale: f64) -> f64 {
    x / scale.max(1.0)
}

fn warp_suite(ctx: &Context, r: &mut Recorder) {
    let tol = ctx.tol.exact;
    let mut rng = ctx.rng(Suite::Warp);
    let mut worst = [0.0f64; 8];
    let names = [
        "zero_q_identity",
        "star_preserving",
        "inverse_is_minus_q",
        "cascade",
        "orderings_agree",
        "rieffel_associative",
        "rieffel_oracle",
        "rieffel_zero_q",
    ];
    let anchors = [
        "warp.warp",
        "warp.warp",
        "warp.warp",
        "warp.cascade_check",
        "warp.warp",
        "warp.rieffel_product",
        "warp.rieffel_product",
        "warp.rieffel_product",
    ];
    let n = 6;
    let zero = WarpParameter::new(RMatrix::zeros(2, 2));
    for _ in 0..100 {
        let (a, b, q, rep) = random_instance(&mut rng, n, 2);
        let cm = random_complex_matrix(&mut rng, n, n);
        let q2 = WarpParameter::random_skew(&mut rng, 2, 2.0);
        let minus = WarpParameter::new(-&q.q);
        let res = (|| -> aqft::Result<[f64; 8]> {
            let aq = warp(&a, &q, &rep)?;
            let na = spectral_norm(&a);
            let (l, rr) = warp_orderings(&a, &q, &rep)?;
            let ab = rieffel_product(&a, &b, &q, &rep)?;
            let lhs = rieffel_product(&ab, &cm, &q, &rep)?;
            let rhs = rieffel_product(&a, &rieffel_product(&b, &cm, &q, &rep)?, &q, &rep)?;
            let scale3 = na * spectral_norm(&b) * spectral_norm(&cm);
            Ok([
                rel(spectral_norm(&(warp(&a, &zero, &rep)? - &a)), na),
                rel(
                    spectral_norm(&(warp(&a.adjoint(), &q, &rep)? - aq.adjoint())),
                    na,
                ),
                rel(spectral_norm(&(warp(&aq, &minus, &rep)? - &a)), na),
                rel(cascade_check(&a, &q, &q2, &rep)?, na),
                rel(spectral_norm(&(l - rr)), na),
                rel(spectral_norm(&(lhs - rhs)), scale3),
                rel(
                    spectral_norm(&(&ab - rieffel_oracle(&a, &b, &q, &rep))),
                    na * spectral_norm(&b),
                ),
                rel(
                    spectral_norm(&(rieffel_product(&a, &b, &zero, &rep)? - &a * &b)),
                    na * spectral_norm(&b),
                ),
            ])
        })();
        match res {
            Ok(v) => {
                for k in 0..8 {
                    worst[k] = worst[k].max(v[k]);
                }
            }
            Err(e) => return r.error("random_instances", "warp.warp", e),
        }
    }
    for k in 0..8 {
        r.le(names[k], anchors[k], worst[k], tol);
    }

    // Symmetric Q: the two spectral orderings disagree and warp refuses it.
    let (a, _, _, rep) = random_instance(&mut rng, n, 2);
    let sym = WarpParameter::new(RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.5]));
    match warp_orderings(&a, &sym, &rep) {
        Ok((l, rr)) => r.above(
            "orderings_negative_control",
            "warp.warp",
            spectral_norm(&(l - rr)),
            10.0 * tol,
        ),
        Err(e) => r.error("orderings_negative_control", "warp.warp", e),
    }
    r.flag(
        "non_skew_rejected",
        "warp.warp",
        warp(&a, &sym, &rep).is_err(),
        None,
    );

    commutation(ctx, &mut rng, r);
    covariance(ctx, &mut rng, r);

    let mut vac: f64 = 0.0;
    for _ in 0..10 {
        let rep = SpectralRep::random(&mut rng, 6, 4, 2, true, true);
        let a = random_complex_matrix(&mut rng, 6, 6);
        match vacuum_check(&a, &WarpParameter::standard(2, 0.9, 0.0), &rep) {
            Ok(v) => vac = vac.max(rel(v, spectral_norm(&a))),
            Err(e) => return r.error("vacuum_invariance", "warp.vacuum_check", e),
        }
    }
    r.le("vacuum_invariance", "warp.vacuum_check", vac, tol);

    let mut cont: f64 = 0.0;
    for _ in 0..10 {
        let (a, _, q, rep) = random_instance(&mut rng, n, 2);
        let dir = WarpParameter::random_skew(&mut rng, 2, 1.0);
        match continuity_profile(&a, &q, &dir, &rep, &[1e-1, 1e-2, 1e-3, 1e-4]) {
            Ok(p) => cont = cont.max(rel(p.excess, spectral_norm(&a))),
            Err(e) => return r.error("norm_continuity", "warp.warp", e),
        }
    }
    r.le("norm_continuity", "warp.warp", cont, tol);

    if let Some(declared) = &ctx.cfg.warp.rep {
        declared_rep(ctx, declared, &mut rng, r);
    }

    let mut dp: f64 = 0.0;
    for &(t, tp) in &[(0.3, -0.4), (1.2, 0.7), (-2.0, 1.5)] {
        dp = dp.max(deformed_phase(t, tp, 0.8, 1.3).difference);
    }
    r.le(
        "deformed_phase_closed_form",
        "warp.deformed_phase",
        dp,
        ctx.tol.phase,
    );
}

/// Exact identities on the representation declared in the config.
fn declared_rep<R: Rng>(ctx: &Context, declared: &DeclaredRep, rng: &mut R, r: &mut Recorder) {
    let anchor = "warp.warp";
    let rep = match declared.build() {
        Ok(rep) => rep,
        Err(e) => return r.error("declared_rep", anchor, format!("{e:#}")),
    };
    let d = declared.dim();
    let q = WarpParameter::standard(d, declared.kappa, 0.0);
    let zero = WarpParameter::new(RMatrix::zeros(d, d));
    let q2 = WarpParameter::random_skew(rng, d, 2.0);
    let a = random_complex_matrix(rng, rep.n, rep.n);
    let na = spectral_norm(&a);
    let res = (|| -> aqft::Result<[f64; 4]> {
        let (l, rr) = warp_orderings(&a, &q, &rep)?;
        Ok([
            rel(spectral_norm(&(warp(&a, &zero, &rep)? - &a)), na),
            rel(spectral_norm(&(l - rr)), na),
            rel(
                spectral_norm(&(warp(&a, &q, &rep)? - warp_blockwise(&a, &q, &rep))),
                na,
            ),
            rel(cascade_check(&a, &q, &q2, &rep)?, na),
        ])
    })();
    let tol = ctx.tol.exact;
    match res {
        Ok(v) => {
            r.le("declared_rep_zero_q_identity", anchor, v[0], tol);
            r.le("declared_rep_orderings_agree", anchor, v[1], tol);
            r.le("declared_rep_blockwise", "warp.warp", v[2], tol);
            r.le("declared_rep_cascade", "warp.cascade_check", v[3], tol);
        }
        Err(e) => return r.error("declared_rep", anchor, e),
    }
    if rep.omega.is_some() {
        match vacuum_check(&a, &q, &rep) {
            Ok(v) => r.le("declared_rep_vacuum", "warp.vacuum_check", rel(v, na), tol),
            Err(e) => r.error("declared_rep_vacuum", "warp.vacuum_check", e),
        }
    }
}

fn commutation<R: Rng>(ctx: &Context, rng: &mut R, r: &mut Recorder) {
    let tol = ctx.tol.exact;
    let anchor = "warp.commutation_theorem_check";
    let q = WarpParameter::standard(2, 0.7, 0.0);
    let (mut hyp, mut concl): (f64, f64) = (0.0, 0.0);
    let (mut neg_h, mut neg_c): (f64, f64) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..10 {
        let r1 = SpectralRep::random(rng, 3, 3, 2, true, true);
        let r2 = SpectralRep::random(rng, 3, 3, 2, true, true);
        let rep = match SpectralRep::tensor(&r1, &r2) {
            Ok(rep) => rep,
            Err(e) => return r.error("tensor_factor_commutation", anchor, e),
        };
        let a1 = random_complex_matrix(rng, 3, 3);
        let b1 = random_complex_matrix(rng, 3, 3);
        let a = kron(&a1, &identity(3));
        let b = kron(&identity(3), &b1);
        let bad = kron(&b1, &identity(3));
        let scale = spectral_norm(&a) * spectral_norm(&b);
        match (
            commutation_theorem_check(&a, &b, &q, &rep),
            commutation_theorem_check(&a, &bad, &q, &rep),
        ) {
            (Ok((h, cc)), Ok((nh, nc))) => {
                hyp = hyp.max(rel(h, scale));
                concl = concl.max(rel(cc, scale));
                neg_h = neg_h.min(rel(nh, scale));
                neg_c = neg_c.min(rel(nc, scale));
            }
            (Err(e), _) | (_, Err(e)) => return r.error("tensor_factor_commutation", anchor, e),
        }
    }
    r.le("commutation_hypothesis", anchor, hyp, tol);
    r.le("commutation_conclusion", anchor, concl, tol);
    r.above("commutation_negative_hypothesis", anchor, neg_h, 10.0 * tol);
    r.above("commutation_negative_conclusion", anchor, neg_c, 10.0 * tol);
}

/// A rotation-orbit spectrum in d = 3 with the permutation that implements the
/// rotation; a finite-order Lorentz map keeps the spectrum finite.
fn covariance<R: Rng>(ctx: &Context, rng: &mut R, r: &mut Recorder) {
    let anchor = "warp.covariance_check";
    let k = 4;
    let rot = rotation(3, 1, 2, 2.0 * PI / k as f64);
    let orbits = [vec![1.5, 0.4, 0.9], vec![2.2, -1.1, 0.3]];
    let mut momenta = Vec::new();
    for p0 in &orbits {
        let mut p = p0.clone();
        for _ in 0..k {
            momenta.push(p.clone());
            p = mat_vec(&rot, &p);
        }
    }
    let n = momenta.len();
    let rep = match SpectralRep::from_eigenbasis(&identity(n), &momenta) {
        Ok(rep) => rep,
        Err(e) => return r.error("rotation_covariance", anchor, e),
    };
    let mut w = CMatrix::zeros(n, n);
    for o in 0..orbits.len() {
        for j in 0..k {
            w[(o * k + (j + 1) % k, o * k + j)] = c(1.0, 0.0);
        }
    }
    let q = WarpParameter::standard(3, 0.6, 0.0);
    let a = random_complex_matrix(rng, n, n);
    let scale = spectral_norm(&a);
    let unitary = covariance_check(
        &a,
        &q,
        &Symmetry {
            w: w.clone(),
            antiunitary: false,
        },
        &rot,
        &rep,
    );
    let anti = covariance_check(
        &a,
        &q,
        &Symmetry {
            w: w.clone(),
            antiunitary: true,
        },
        &(-&rot),
        &rep,
    );
    match (unitary, anti) {
        (Ok(u), Ok(v)) => {
            r.le("unitary_covariance", anchor, rel(u, scale), ctx.tol.exact);
            r.le(
                "antiunitary_covariance",
                anchor,
                rel(v, scale),
                ctx.tol.exact,
            );
        }
        (Err(e), _) | (_, Err(e)) => return r.error("rotation_covariance", anchor, e),
    }
    let mixed = random_unitary(rng, n);
    r.flag(
        "non_intertwiner_rejected",
        anchor,
        covariance_check(
            &a,
            &q,
            &Symmetry {
                w: mixed,
                antiunitary: false,
            },
            &rot,
            &rep,
        )
        .is_err(),
        None,
    );
}

// -------------------------------------------------------------- nuclearity

/// Default scan: ten points in `[0.5/m, 5/m]`.
pub fn default_s_grid(m: f64) -> Vec<f64> {
    linspace(0.5 / m, 5.0 / m, 10)
}

/// Monomials of degree ≤ `degree` in `generators` Gaussians with centres
/// spread over `[-0.4, 0.4]` (a single generator sits at 0).
pub fn nuclearity_family(
    model: &SMatrixModel,
    degree: usize,
    generators: usize,
) -> Vec<CreationMonomial> {
    let d = model.dim();
    let centre = |k: usize| {
        if generators <= 1 {
            0.0
        } else {
            -0.4 + 0.8 * k as f64 / (generators - 1) as f64
        }
    };
    let xis: Vec<RapidityFunction> = (0..generators)
        .map(|k| {
            RapidityFunction::gaussian(
                coefs(d, c(1.0 - 0.4 * k as f64, 0.2 + 0.3 * k as f64)),
                0.25,
                centre(k),
            )
        })
        .collect();
    monomial_family(&xis, degree)
}

fn nuclearity(ctx: &Context, r: &mut Recorder) {
    let space = match ctx.space() {
        Ok(s) => s,
        Err(e) => return r.error("fock_space", "nuclearity.xi_apply", e),
    };
    let tol = &ctx.tol;
    let m = ctx.mass();
    let family = nuclearity_family(
        &ctx.model,
        ctx.cfg.nuclearity.degree.min(space.n_max),
        ctx.cfg.nuclearity.generators,
    );

    match xi_apply(&space, 1.0, &CreationMonomial::identity()) {
        Ok(v) => r.le(
            "identity_to_vacuum",
            "nuclearity.xi_apply",
            v.sub(&space.vacuum()).norm(),
            tol.exact,
        ),
        Err(e) => r.error("identity_to_vacuum", "nuclearity.xi_apply", e),
    }
    if ctx.model.is_scalar() {
        let mut worst: f64 = 0.0;
        for s in [0.5 / m, 1.0 / m, 2.0 / m] {
            for a in &family {
                match (xi_apply(&space, s, a), xi_apply_symbolic(&space, s, a)) {
                    (Ok(x), Ok(y)) => worst = worst.max(rel(x.sub(&y).norm(), x.norm())),
                    (Err(e), _) | (_, Err(e)) => {
                        return r.error("two_routes", "nuclearity.xi_apply", e)
                    }
                }
            }
        }
        r.le("two_routes", "nuclearity.xi_apply", worst, tol.field);
    } else {
        r.info(
            "two_routes",
            "nuclearity.xi_apply",
            true,
            "not evaluated: the symmetrization route is implemented for scalar S".into(),
        );
    }

    let mut rng = ctx.rng(Suite::Nuclearity);
    match assemble(&space, 1.0 / m, &family) {
        Ok(map) => {
            let sv = map.singular_values();
            let w = random_unitary(&mut rng, family.len());
            let x2 = &map.columns * &w;
            let g2 = w.adjoint() * &map.gram * &w;
            let (gi, _) = inv_sqrt_psd(&g2, 1e-12);
            let mut sv2: Vec<f64> = (x2 * gi).singular_values().iter().cloned().collect();
            sv2.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let diff = sv
                .iter()
                .zip(&sv2)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            r.le(
                "reparametrization_invariance",
                "nuclearity.singular_values",
                diff,
                tol.axiom,
            );
            let decreasing = sv.windows(2).all(|p| p[1] <= p[0]);
            r.flag(
                "descending",
                "nuclearity.singular_values",
                decreasing,
                Some(format!("gram condition {:.3e}", map.gram_condition)),
            );
        }
        Err(e) => r.error("singular_values", "nuclearity.singular_values", e),
    }

    let mut doubling = true;
    for s in [0.5 / m, 1.0 / m, 2.0 / m] {
        match (
            assemble(&space, s, &family),
            assemble(&space, 2.0 * s, &family),
        ) {
            (Ok(a), Ok(b)) => {
                doubling &= a
                    .singular_values()
                    .iter()
                    .zip(b.singular_values())
                    .all(|(x, y)| y <= x * (1.0 + 1e-12));
            }
            (Err(e), _) | (_, Err(e)) => {
                return r.error("damping_monotone", "nuclearity.singular_values", e)
            }
        }
    }
    r.flag(
        "damping_monotone",
        "nuclearity.singular_values",
        doubling,
        None,
    );

    let s_grid = if ctx.cfg.nuclearity.s_grid.is_empty() {
        default_s_grid(m)
    } else {
        ctx.cfg.nuclearity.s_grid.clone()
    };
    match nuclear_norm_scan(&space, &s_grid, &family) {
        Ok(scan) => {
            r.flag(
                "scan_monotone",
                "nuclearity.nuclear_norm_scan",
                scan.monotone,
                None,
            );
            let mut bad = Vec::new();
            for row in scan.rows.iter().filter(|row| row.s >= 1.0 / m) {
                if row.per_sector.windows(2).any(|p| p[1] > p[0]) {
                    bad.push(row.s);
                }
            }
            let checked = scan.rows.iter().filter(|row| row.s >= 1.0 / m).count();
            r.count(
                "sector_decay",
                "nuclearity.nuclear_norm_scan",
                bad.len(),
                checked,
            );
            let mut header: Vec<String> = vec!["s".into(), "total".into()];
            header.extend((0..=space.n_max).map(|n| format!("n{n}")));
            let mut table = Table {
                name: "nuclearity".into(),
                header,
                rows: Vec::new(),
            };
            for row in &scan.rows {
                let mut v = vec![row.s, row.total];
                v.extend(&row.per_sector);
                table.rows.push(v);
            }
            r.out.tables.push(table);
        }
        Err(e) => r.error("scan", "nuclearity.nuclear_norm_scan", e),
    }
    match nuclear_norm_scan(&space, &[50.0 / m], &family) {
        Ok(scan) => r.le(
            "large_s_vacuum_only",
            "nuclearity.nuclear_norm_scan",
            (scan.rows[0].total - 1.0).abs(),
            tol.analytic,
        ),
        Err(e) => r.error("large_s_vacuum_only", "nuclearity.nuclear_norm_scan", e),
    }
}
