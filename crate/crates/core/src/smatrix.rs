//! Two-particle S-matrices as analytic tensor-valued functions on the strip.
//!
//! A tensor `S^{αβ}_{γδ}(ζ)` is stored as a dense `D²×D²` matrix with row
//! `α·D+β` and column `γ·D+δ`; it acts on `v⊗w` by
//! `(S(v⊗w))^{αβ} = Σ S^{αβ}_{γδ} v^γ w^δ`.

use crate::error::{Error, Result};
use crate::linalg::{c, identity, kron, spectral_norm};
use crate::{CMatrix, C64};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Internal degrees of freedom: masses, charge conjugation and sampled gauge matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSpectrum {
    pub masses: Vec<f64>,
    pub conjugation: Vec<usize>,
    pub gauge: Vec<CMatrix>,
}

impl ParticleSpectrum {
    pub fn new(masses: Vec<f64>, conjugation: Vec<usize>, gauge: Vec<CMatrix>) -> Result<Self> {
        let s = ParticleSpectrum {
            masses,
            conjugation,
            gauge,
        };
        s.validate()?;
        Ok(s)
    }

    /// A single neutral particle of mass `m`.
    pub fn scalar(m: f64) -> Self {
        ParticleSpectrum {
            masses: vec![m],
            conjugation: vec![0],
            gauge: Vec::new(),
        }
    }

    /// A particle/antiparticle pair of mass `m` with U(1) charges ±1 and a few
    /// sampled gauge phases.
    pub fn charged_pair(m: f64) -> Self {
        let gauge = [0.3, 1.7, -2.4]
            .iter()
            .map(|&phi: &f64| {
                let mut g = CMatrix::zeros(2, 2);
                g[(0, 0)] = C64::from_polar(1.0, phi);
                g[(1, 1)] = C64::from_polar(1.0, -phi);
                g
            })
            .collect();
        ParticleSpectrum {
            masses: vec![m, m],
            conjugation: vec![1, 0],
            gauge,
        }
    }

    /// `D` self-conjugate particles of equal mass (real representations).
    pub fn neutral_multiplet(d: usize, m: f64) -> Self {
        ParticleSpectrum {
            masses: vec![m; d],
            conjugation: (0..d).collect(),
            gauge: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.masses.len()
    }

    pub fn bar(&self, a: usize) -> usize {
        self.conjugation[a]
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 {
            return Err(Error::InvalidParameter("empty particle spectrum".into()));
        }
        if self.conjugation.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: self.conjugation.len(),
            });
        }
        for (a, &b) in self.conjugation.iter().enumerate() {
            if b >= d || self.conjugation[b] != a {
                return Err(Error::InvalidParameter(
                    "conjugation is not an involution".into(),
                ));
            }
            if (self.masses[a] - self.masses[b]).abs() > 1e-14 {
                return Err(Error::InvalidParameter(
                    "conjugate particles must have equal masses".into(),
                ));
            }
            if self.masses[a] <= 0.0 {
                return Err(Error::InvalidParameter("masses must be positive".into()));
            }
        }
        for g in &self.gauge {
            if g.nrows() != d || g.ncols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: g.nrows(),
                });
            }
            if spectral_norm(&(g.adjoint() * g - identity(d))) > 1e-12 {
                return Err(Error::InvalidParameter(
                    "gauge matrix is not unitary".into(),
                ));
            }
        }
        Ok(())
    }
}

pub type ScalarFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;
pub type TensorFn = Arc<dyn Fn(C64) -> CMatrix + Send + Sync>;

#[derive(Clone)]
pub enum ModelKind {
    Free,
    Ising,
    Flip {
        sign: f64,
    },
    SinhGordon {
        g: f64,
        b: f64,
    },
    NcExp {
        kappa: f64,
        mass: f64,
    },
    /// Sinh-Gordon scalar factor times the flip on a charged pair.
    SinhGordonFlip {
        g: f64,
        b: f64,
    },
    /// `σ1 δ^{αβ}δ^{γδ} + σ2 δ^{αδ}δ^{βγ} + σ3 δ^{αγ}δ^{βδ}` with caller-supplied σ_i.
    OnSigma {
        s1: ScalarFn,
        s2: ScalarFn,
        s3: ScalarFn,
    },
    /// Constant matrix (test fixtures).
    Constant(CMatrix),
    Custom(TensorFn),
}

impl fmt::Debug for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Free => write!(f, "Free"),
            ModelKind::Ising => write!(f, "Ising"),
            ModelKind::Flip { sign } => write!(f, "Flip({sign})"),
            ModelKind::SinhGordon { g, .. } => write!(f, "SinhGordon(g={g})"),
            ModelKind::NcExp { kappa, mass } => write!(f, "NcExp(κ={kappa}, m={mass})"),
            ModelKind::SinhGordonFlip { g, .. } => write!(f, "SinhGordonFlip(g={g})"),
            ModelKind::OnSigma { .. } => write!(f, "OnSigma"),
            ModelKind::Constant(_) => write!(f, "Constant"),
            ModelKind::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// An S-matrix with spectrum and regularity metadata.
#[derive(Debug, Clone)]
pub struct SMatrixModel {
    pub name: String,
    pub spectrum: ParticleSpectrum,
    pub kind: ModelKind,
    /// Claimed regularity margin ε; 0 means not claimed regular, `f64::INFINITY` for entire bounded models.
    pub regularity_margin: f64,
    /// Declared bound of |S| on the widened strip, when claimed regular.
    pub sup_bound: Option<f64>,
    pub params: BTreeMap<String, f64>,
}

/// Sinh-Gordon parameter `b(g) = πg²/(4π + g²)`.
pub fn sinh_gordon_b(g: f64) -> f64 {
    PI * g * g / (4.0 * PI + g * g)
}

fn sinh_gordon_scalar(b: f64, z: C64) -> C64 {
    if b == 0.0 {
        return c(1.0, 0.0);
    }
    let s = z.sinh();
    let isb = c(0.0, b.sin());
    (s - isb) / (s + isb)
}

/// Flip `F(v⊗w) = w⊗v` on `C^D ⊗ C^D`.
pub fn flip(d: usize) -> CMatrix {
    let mut f = CMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            f[(a * d + b, b * d + a)] = c(1.0, 0.0);
        }
    }
    f
}

pub const BUILTIN_NAMES: &[&str] = &[
    "free",
    "ising",
    "flip",
    "sinh_gordon",
    "nc_exp",
    "sinh_gordon_flip",
    "broken_unitarity",
    "broken_yang_baxter",
];

impl SMatrixModel {
    pub fn free(m: f64) -> Self {
        Self::constant_scalar("free", m, 1.0)
    }

    pub fn ising(m: f64) -> Self {
        Self::constant_scalar("ising", m, -1.0)
    }

    fn constant_scalar(name: &str, m: f64, value: f64) -> Self {
        let kind = if value > 0.0 {
            ModelKind::Free
        } else {
            ModelKind::Ising
        };
        let mut params = BTreeMap::new();
        params.insert("m".into(), m);
        SMatrixModel {
            name: name.into(),
            spectrum: ParticleSpectrum::scalar(m),
            kind,
            regularity_margin: f64::INFINITY,
            sup_bound: Some(1.0),
            params,
        }
    }

    /// `±F` on a charged pair of mass `m`.
    pub fn flip(sign: f64, m: f64) -> Result<Self> {
        if sign != 1.0 && sign != -1.0 {
            return Err(Error::InvalidParameter(format!(
                "flip sign must be ±1, got {sign}"
            )));
        }
        let mut params = BTreeMap::new();
        params.insert("sign".into(), sign);
        params.insert("m".into(), m);
        Ok(SMatrixModel {
            name: "flip".into(),
            spectrum: ParticleSpectrum::charged_pair(m),
            kind: ModelKind::Flip { sign },
            regularity_margin: f64::INFINITY,
            sup_bound: Some(1.0),
            params,
        })
    }

    /// Flip with an arbitrary spectrum (masses must agree within conjugate pairs).
    pub fn flip_with_spectrum(sign: f64, spectrum: ParticleSpectrum) -> Result<Self> {
        spectrum.validate()?;
        let mut m = Self::flip(sign, spectrum.masses[0])?;
        m.spectrum = spectrum;
        Ok(m)
    }

    pub fn sinh_gordon(g: f64, m: f64) -> Result<Self> {
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sinh-Gordon coupling must be ≥ 0, got {g}"
            )));
        }
        let b = sinh_gordon_b(g);
        let mut params = BTreeMap::new();
        params.insert("g".into(), g);
        params.insert("b".into(), b);
        params.insert("m".into(), m);
        let (eps, sup) = Self::sinh_gordon_margin(b);
        Ok(SMatrixModel {
            name: "sinh_gordon".into(),
            spectrum: ParticleSpectrum::scalar(m),
            kind: ModelKind::SinhGordon { g, b },
            regularity_margin: eps,
            sup_bound: Some(sup),
            params,
        })
    }

    /// Margin ε = b/2 (poles sit at Im ζ = −b and π + b) and the bound of |S|
    /// on the widened strip, attained at ζ = −iε.
    fn sinh_gordon_margin(b: f64) -> (f64, f64) {
        if b == 0.0 {
            return (f64::INFINITY, 1.0);
        }
        let eps = 0.5 * b;
        let sup = (eps.sin() + b.sin()) / (b.sin() - eps.sin());
        (eps, sup)
    }

    /// `θ ↦ e^{iκm² sinh θ}`; bounded on the closed strip, not regular.
    pub fn nc_exp(kappa: f64, m: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "nc_exp requires κ > 0, got {kappa}"
            )));
        }
        let mut params = BTreeMap::new();
        params.insert("kappa".into(), kappa);
        params.insert("m".into(), m);
        Ok(SMatrixModel {
            name: "nc_exp".into(),
            spectrum: ParticleSpectrum::scalar(m),
            kind: ModelKind::NcExp { kappa, mass: m },
            regularity_margin: 0.0,
            sup_bound: None,
            params,
        })
    }

    pub fn sinh_gordon_flip(g: f64, m: f64) -> Result<Self> {
        let base = Self::sinh_gordon(g, m)?;
        let b = sinh_gordon_b(g);
        Ok(SMatrixModel {
            name: "sinh_gordon_flip".into(),
            spectrum: ParticleSpectrum::charged_pair(m),
            kind: ModelKind::SinhGordonFlip { g, b },
            regularity_margin: base.regularity_margin,
            sup_bound: base.sup_bound,
            params: base.params,
        })
    }

    /// Structural O(N)-type template with user-supplied σ_i on an `n`-plet of mass `m`.
    pub fn on_sigma_template(n: usize, m: f64, s1: ScalarFn, s2: ScalarFn, s3: ScalarFn) -> Self {
        let mut params = BTreeMap::new();
        params.insert("N".into(), n as f64);
        params.insert("m".into(), m);
        SMatrixModel {
            name: "on_sigma_template".into(),
            spectrum: ParticleSpectrum::neutral_multiplet(n, m),
            kind: ModelKind::OnSigma { s1, s2, s3 },
            regularity_margin: 0.0,
            sup_bound: None,
            params,
        }
    }

    /// Constant scalar 1.5: violates unitarity.
    pub fn broken_unitarity(m: f64) -> Self {
        let mut params = BTreeMap::new();
        params.insert("m".into(), m);
        SMatrixModel {
            name: "broken_unitarity".into(),
            spectrum: ParticleSpectrum::scalar(m),
            kind: ModelKind::Constant(CMatrix::from_element(1, 1, c(1.5, 0.0))),
            regularity_margin: 0.0,
            sup_bound: None,
            params,
        }
    }

    /// Constant Householder reflection `1 − 2vv*` on C²⊗C²: unitary and an
    /// involution, but violating Yang–Baxter.
    pub fn broken_yang_baxter(m: f64) -> Self {
        let v = [c(0.6, 0.0), c(0.0, 0.48), c(0.36, 0.0), c(0.0, 0.0)];
        let nrm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut r = identity(4);
        for i in 0..4 {
            for j in 0..4 {
                r[(i, j)] -= v[i] * v[j].conj() * (2.0 / (nrm * nrm));
            }
        }
        let mut params = BTreeMap::new();
        params.insert("m".into(), m);
        SMatrixModel {
            name: "broken_yang_baxter".into(),
            spectrum: ParticleSpectrum::neutral_multiplet(2, m),
            kind: ModelKind::Constant(r),
            regularity_margin: 0.0,
            sup_bound: None,
            params,
        }
    }

    pub fn custom(name: &str, spectrum: ParticleSpectrum, f: TensorFn) -> Self {
        SMatrixModel {
            name: name.into(),
            spectrum,
            kind: ModelKind::Custom(f),
            regularity_margin: 0.0,
            sup_bound: None,
            params: BTreeMap::new(),
        }
    }

    /// Look up a built-in by name. Missing parameters take defaults
    /// (m=1, g=1, κ=1, sign=+1).
    pub fn builtin(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let get = |k: &str, default: f64| params.get(k).copied().unwrap_or(default);
        let m = get("m", 1.0);
        if !(m > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive, got {m}"
            )));
        }
        match name {
            "free" => Ok(Self::free(m)),
            "ising" => Ok(Self::ising(m)),
            "flip" => Self::flip(get("sign", 1.0), m),
            "sinh_gordon" => Self::sinh_gordon(get("g", 1.0), m),
            "nc_exp" => Self::nc_exp(get("kappa", 1.0), m),
            "sinh_gordon_flip" => Self::sinh_gordon_flip(get("g", 1.0), m),
            "broken_unitarity" => Ok(Self::broken_unitarity(m)),
            "broken_yang_baxter" => Ok(Self::broken_yang_baxter(m)),
            other => Err(Error::InvalidParameter(format!("unknown model '{other}'"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn is_scalar(&self) -> bool {
        self.dim() == 1
    }

    pub fn mass(&self, alpha: usize) -> f64 {
        self.spectrum.masses[alpha]
    }

    /// Claimed analyticity domain `−ε ≤ Im ζ ≤ π + ε` (closed strip when ε = 0).
    pub fn in_domain(&self, z: C64) -> bool {
        let eps = self.regularity_margin;
        z.im >= -eps - 1e-14 && z.im <= PI + eps + 1e-14
    }

    /// `S(ζ)` for ζ in the declared domain.
    pub fn evaluate(&self, z: C64) -> Result<CMatrix> {
        if !self.in_domain(z) {
            return Err(Error::OutsideDomain {
                model: self.name.clone(),
                re: z.re,
                im: z.im,
            });
        }
        Ok(self.eval_formula(z))
    }

    /// Closed-form value without the domain check (the formula may still be
    /// finite outside the claimed domain, or produce non-finite entries at poles).
    pub fn eval_formula(&self, z: C64) -> CMatrix {
        let d = self.dim();
        match &self.kind {
            ModelKind::Free => CMatrix::from_element(1, 1, c(1.0, 0.0)),
            ModelKind::Ising => CMatrix::from_element(1, 1, c(-1.0, 0.0)),
            ModelKind::Flip { sign } => flip(d) * c(*sign, 0.0),
            ModelKind::SinhGordon { b, .. } => {
                CMatrix::from_element(1, 1, sinh_gordon_scalar(*b, z))
            }
            ModelKind::NcExp { kappa, mass } => {
                CMatrix::from_element(1, 1, (c(0.0, kappa * mass * mass) * z.sinh()).exp())
            }
            ModelKind::SinhGordonFlip { b, .. } => flip(d) * sinh_gordon_scalar(*b, z),
            ModelKind::OnSigma { s1, s2, s3 } => {
                let (a1, a2, a3) = (s1(z), s2(z), s3(z));
                let mut s = CMatrix::zeros(d * d, d * d);
                for al in 0..d {
                    for be in 0..d {
                        for ga in 0..d {
                            for de in 0..d {
                                let mut v = c(0.0, 0.0);
                                if al == be && ga == de {
                                    v += a1;
                                }
                                if al == de && be == ga {
                                    v += a2;
                                }
                                if al == ga && be == de {
                                    v += a3;
                                }
                                s[(al * d + be, ga * d + de)] = v;
                            }
                        }
                    }
                }
                s
            }
            ModelKind::Constant(m) => m.clone(),
            ModelKind::Custom(f) => f(z),
        }
    }

    /// Real-argument value (always inside the domain).
    pub fn at(&self, theta: f64) -> CMatrix {
        self.eval_formula(c(theta, 0.0))
    }

    /// Scalar value for D = 1 models.
    pub fn scalar_at(&self, z: C64) -> Option<C64> {
        if self.is_scalar() {
            Some(self.eval_formula(z)[(0, 0)])
        } else {
            None
        }
    }
}

/// Rearranged tensor `C^{αβ}_{γδ} = S^{γ̄α}_{δβ̄}`, the right-hand side of crossing.
pub fn crossing_rearrangement(s: &CMatrix, spec: &ParticleSpectrum) -> CMatrix {
    let d = spec.dim();
    let mut out = CMatrix::zeros(d * d, d * d);
    for al in 0..d {
        for be in 0..d {
            for ga in 0..d {
                for de in 0..d {
                    out[(al * d + be, ga * d + de)] =
                        s[(spec.bar(ga) * d + al, de * d + spec.bar(be))];
                }
            }
        }
    }
    out
}

/// `C^{αβ}_{γδ} = S^{δ̄γ̄}_{β̄ᾱ}`, the right-hand side of the conjugation symmetry.
pub fn conjugation_rearrangement(s: &CMatrix, spec: &ParticleSpectrum) -> CMatrix {
    let d = spec.dim();
    let mut out = CMatrix::zeros(d * d, d * d);
    for al in 0..d {
        for be in 0..d {
            for ga in 0..d {
                for de in 0..d {
                    let b = spec.bar(de) * d + spec.bar(ga);
                    let k = spec.bar(be) * d + spec.bar(al);
                    out[(al * d + be, ga * d + de)] = s[(b, k)];
                }
            }
        }
    }
    out
}

/// Yang–Baxter defect `‖(S(θ)⊗1)(1⊗S(θ+θ'))(S(θ')⊗1) − (1⊗S(θ'))(S(θ+θ')⊗1)(1⊗S(θ))‖`.
pub fn yang_baxter_defect(model: &SMatrixModel, t1: f64, t2: f64) -> f64 {
    let d = model.dim();
    let one = identity(d);
    let a = model.at(t1);
    let b = model.at(t1 + t2);
    let cc = model.at(t2);
    let lhs = kron(&a, &one) * kron(&one, &b) * kron(&cc, &one);
    let rhs = kron(&one, &cc) * kron(&b, &one) * kron(&one, &a);
    spectral_norm(&(lhs - rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Unitarity,
    HermitianAnalyticity,
    YangBaxter,
    MassSelection,
    ConjugationSymmetry,
    GaugeInvariance,
    Crossing,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::Unitarity,
        Axiom::HermitianAnalyticity,
        Axiom::YangBaxter,
        Axiom::MassSelection,
        Axiom::ConjugationSymmetry,
        Axiom::GaugeInvariance,
        Axiom::Crossing,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Axiom::Unitarity => "unitarity",
            Axiom::HermitianAnalyticity => "hermitian_analyticity",
            Axiom::YangBaxter => "yang_baxter",
            Axiom::MassSelection => "mass_selection",
            Axiom::ConjugationSymmetry => "conjugation_symmetry",
            Axiom::GaugeInvariance => "gauge_invariance",
            Axiom::Crossing => "crossing",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomResidual {
    pub axiom: Axiom,
    /// `None` when the check was skipped.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub model: String,
    pub grid: Vec<f64>,
    pub entries: Vec<AxiomResidual>,
}

impl AxiomReport {
    pub fn get(&self, a: Axiom) -> &AxiomResidual {
        self.entries
            .iter()
            .find(|e| e.axiom == a)
            .expect("all axioms are reported")
    }

    pub fn residual(&self, a: Axiom) -> Option<f64> {
        self.get(a).residual
    }

    /// All non-skipped axioms pass.
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.entries
            .iter()
            .filter_map(|e| e.residual)
            .fold(0.0, f64::max)
    }
}

/// `n` equally spaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Maximal residuals of every S-matrix axiom over `grid` (and `grid²` for Yang–Baxter).
pub fn axiom_residuals(model: &SMatrixModel, grid: &[f64], tol: f64) -> Result<AxiomReport> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty sample grid".into()));
    }
    let d = model.dim();
    let spec = &model.spectrum;
    let one = identity(d * d);
    let mut unit: f64 = 0.0;
    let mut herm: f64 = 0.0;
    let mut mass: f64 = 0.0;
    let mut conj: f64 = 0.0;
    let mut gauge: f64 = 0.0;
    let mut cross: f64 = 0.0;
    for &t in grid {
        let s = model.at(t);
        unit = unit.max(spectral_norm(&(s.adjoint() * &s - &one)));
        herm = herm.max(spectral_norm(&(&s * model.at(-t) - &one)));
        for al in 0..d {
            for be in 0..d {
                for ga in 0..d {
                    for de in 0..d {
                        let forbidden = (spec.masses[al] - spec.masses[de]).abs() > 1e-14
                            || (spec.masses[be] - spec.masses[ga]).abs() > 1e-14;
                        if forbidden {
                            mass = mass.max(s[(al * d + be, ga * d + de)].norm());
                        }
                    }
                }
            }
        }
        conj = conj.max(spectral_norm(&(&s - conjugation_rearrangement(&s, spec))));
        for g in &spec.gauge {
            let gg = kron(g, g);
            gauge = gauge.max(spectral_norm(&(&s * &gg - &gg * &s)));
        }
        let z = c(-t, PI);
        let lhs = model.evaluate(z)?;
        cross = cross.max(spectral_norm(&(lhs - crossing_rearrangement(&s, spec))));
    }
    let mut yb: f64 = 0.0;
    if d > 1 {
        for &t1 in grid {
            for &t2 in grid {
                yb = yb.max(yang_baxter_defect(model, t1, t2));
            }
        }
    } else {
        for &t1 in grid {
            for &t2 in grid {
                let a = model.at(t1)[(0, 0)];
                let b = model.at(t1 + t2)[(0, 0)];
                let cc = model.at(t2)[(0, 0)];
                yb = yb.max((a * b * cc - cc * b * a).norm());
            }
        }
    }
    let entry = |axiom: Axiom, r: f64| AxiomResidual {
        axiom,
        residual: Some(r),
        tolerance: tol,
        pass: r <= tol,
        note: None,
    };
    let mut entries = vec![
        entry(Axiom::Unitarity, unit),
        entry(Axiom::HermitianAnalyticity, herm),
        entry(Axiom::YangBaxter, yb),
        entry(Axiom::MassSelection, mass),
        entry(Axiom::ConjugationSymmetry, conj),
    ];
    if spec.gauge.is_empty() {
        entries.push(AxiomResidual {
            axiom: Axiom::GaugeInvariance,
            residual: None,
            tolerance: tol,
            pass: true,
            note: Some("skipped: no gauge generators supplied".into()),
        });
    } else {
        entries.push(entry(Axiom::GaugeInvariance, gauge));
    }
    entries.push(entry(Axiom::Crossing, cross));
    Ok(AxiomReport {
        model: model.name.clone(),
        grid: grid.to_vec(),
        entries,
    })
}

/// Conjugation symmetry `S = C(S)` sampled at interior strip points `t + iy`,
/// `0 < y < π`. The identity is only asserted on the real boundary; this
/// reports how it behaves inside the strip.
pub fn conjugation_symmetry_strip(model: &SMatrixModel, grid: &[f64], ims: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &y in ims {
        if !(y > 0.0 && y < PI) {
            return Err(Error::InvalidParameter(format!(
                "interior strip point needs 0 < Im ζ < π, got {y}"
            )));
        }
        for &t in grid {
            let s = model.evaluate(c(t, y))?;
            worst = worst.max(spectral_norm(
                &(&s - conjugation_rearrangement(&s, &model.spectrum)),
            ));
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub epsilon: f64,
    pub theta_max: f64,
    /// Model claims regularity with margin at least ε.
    pub claimed: bool,
    /// Finite values everywhere sampled.
    pub evaluable: bool,
    /// Sup of ‖S‖ over the sampled widened strip.
    pub sup_estimate: f64,
    /// Sup of ‖S‖ on the boundary lines Im ζ ∈ {0, π}.
    pub boundary_sup: f64,
    pub slice_sup_half: f64,
    pub slice_sup_full: f64,
    pub growth: bool,
    pub bounded: bool,
}

/// Sample ‖S‖ on horizontal lines of `S(−ε, π+ε)` out to |Re ζ| = Θ_max and flag growth
/// between the |Re ζ| = Θ_max/2 and Θ_max slices.
pub fn regularity_probe(
    model: &SMatrixModel,
    eps: f64,
    theta_max: f64,
    n_re: usize,
    n_im: usize,
) -> RegularityReport {
    let ims = linspace(-eps, PI + eps, n_im.max(3));
    let res = linspace(-theta_max, theta_max, n_re.max(3));
    let norm_at = |z: C64| -> f64 {
        let s = model.eval_formula(z);
        if s.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            f64::INFINITY
        } else if model.is_scalar() {
            s[(0, 0)].norm()
        } else {
            spectral_norm(&s)
        }
    };
    let mut sup: f64 = 0.0;
    for &y in &ims {
        for &x in &res {
            sup = sup.max(norm_at(c(x, y)));
        }
    }
    let mut boundary_sup: f64 = 0.0;
    for &y in &[0.0, PI] {
        for &x in &res {
            boundary_sup = boundary_sup.max(norm_at(c(x, y)));
        }
    }
    let slice = |x: f64| {
        ims.iter()
            .map(|&y| norm_at(c(x, y)).max(norm_at(c(-x, y))))
            .fold(0.0, f64::max)
    };
    let half = slice(0.5 * theta_max);
    let full = slice(theta_max);
    let evaluable = sup.is_finite();
    let growth = !evaluable || full > half * (1.0 + 1e-9) && full > 1.0 + 1e-9;
    RegularityReport {
        epsilon: eps,
        theta_max,
        claimed: model.regularity_margin >= eps && eps > 0.0
            || model.regularity_margin.is_infinite(),
        evaluable,
        sup_estimate: sup,
        boundary_sup,
        slice_sup_half: half,
        slice_sup_full: full,
        growth,
        bounded: evaluable && !growth,
    }
}
