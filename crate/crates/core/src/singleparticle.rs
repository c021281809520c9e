//! One-particle space `L²(ℝ, dθ) ⊗ C^D`: Poincaré action, TCP operator, geometric
//! modular data of the right wedge, the standard subspace `K₁`, and
//! Longo–Witten inner-function endomorphisms.
//!
//! Conventions: `(Δ₁^{it}ξ)(θ) = ξ(θ + 2πt)`, so `Δ₁^{1/2}` shifts the argument by
//! `−iπ` and `Δ₁^{1/4}` by `−iπ/2`. Members of `K₁` are analytic in the strip
//! `−π < Im ζ < 0` and satisfy `ξ^α(θ − iπ) = conj ξ^ᾱ(θ)`.

use crate::geometry::wedge_boost_right;
use crate::linalg::c;
use crate::quadrature::Quadrature;
use crate::smatrix::ParticleSpectrum;
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

type CompFn = Arc<dyn Fn(usize, C64) -> Option<C64> + Send + Sync>;

/// `p_m(ζ) = m(cosh ζ, sinh ζ)`.
pub fn mass_shell(m: f64, z: C64) -> [C64; 2] {
    [z.cosh() * m, z.sinh() * m]
}

/// `p_m(ζ)·x` with the Minkowski product.
pub fn shell_dot(m: f64, z: C64, x: [f64; 2]) -> C64 {
    let p = mass_shell(m, z);
    p[0] * x[0] - p[1] * x[1]
}

/// A D-component wave function given in closed form, so that values off the
/// real line (analytic continuation) are available. Components return `None`
/// where no continuation is known.
#[derive(Clone)]
pub struct RapidityFunction {
    pub dim: usize,
    pub label: String,
    f: CompFn,
}

impl fmt::Debug for RapidityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RapidityFunction({}, D={})", self.label, self.dim)
    }
}

impl RapidityFunction {
    pub fn new<F>(dim: usize, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(usize, C64) -> Option<C64> + Send + Sync + 'static,
    {
        RapidityFunction {
            dim,
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(dim, "0", |_, _| Some(c(0.0, 0.0)))
    }

    /// `coef[α]·e^{−a(ζ−θ₀)²}` in each component (entire).
    pub fn gaussian(coef: Vec<C64>, a: f64, theta0: f64) -> Self {
        let dim = coef.len();
        let label = format!("gauss(a={a}, θ0={theta0})");
        Self::new(dim, label, move |alpha, z| {
            let u = z - theta0;
            Some(coef[alpha] * (-(u * u) * a).exp())
        })
    }

    /// Member of `K₁` obtained as `(1 + J₁Δ₁^{1/2})g` for the Gaussian `g`:
    /// `ξ^α(ζ) = g^α(ζ) + conj g^ᾱ(conj ζ − iπ)`.
    pub fn k1_gaussian(spec: &ParticleSpectrum, coef: Vec<C64>, a: f64, theta0: f64) -> Self {
        let g = Self::gaussian(coef, a, theta0);
        let mut xi = g.add(&g.apply_s1(spec));
        xi.label = format!("k1_gauss(a={a}, θ0={theta0})");
        xi
    }

    /// `f̂(p_m(ζ))` for the real spacetime Gaussian `f(x) = e^{−|x−x_c|²/(2σ²)}`
    /// (Euclidean norm), up to normalization: `e^{ip·x_c} e^{−σ²(p₀²+p₁²)/2}`.
    pub fn spacetime_gaussian(m: f64, sigma: f64, center: [f64; 2]) -> Self {
        Self::new(1, format!("spacetime_gauss(σ={sigma})"), move |_, z| {
            let p = mass_shell(m, z);
            let phase = (p[0] * center[0] - p[1] * center[1]) * c(0.0, 1.0);
            Some((phase - (p[0] * p[0] + p[1] * p[1]) * (0.5 * sigma * sigma)).exp())
        })
    }

    /// Grid data without any continuation: only the nodes themselves are known.
    pub fn from_samples(nodes: Vec<f64>, values: Vec<Vec<C64>>) -> Self {
        let dim = values.first().map(|v| v.len()).unwrap_or(1);
        Self::new(dim, "samples", move |alpha, z| {
            if z.im != 0.0 {
                return None;
            }
            nodes
                .iter()
                .position(|&t| t == z.re)
                .map(|i| values[i][alpha])
        })
    }

    pub fn eval(&self, alpha: usize, z: C64) -> Option<C64> {
        (self.f)(alpha, z)
    }

    /// Boundary value on the real line.
    pub fn at(&self, alpha: usize, theta: f64) -> C64 {
        self.eval(alpha, c(theta, 0.0))
            .unwrap_or(c(f64::NAN, f64::NAN))
    }

    pub fn scale(&self, k: C64) -> Self {
        let f = self.f.clone();
        Self::new(self.dim, format!("({k})·{}", self.label), move |a, z| {
            f(a, z).map(|v| v * k)
        })
    }

    pub fn add(&self, other: &RapidityFunction) -> Self {
        assert_eq!(self.dim, other.dim);
        let (f, g) = (self.f.clone(), other.f.clone());
        Self::new(
            self.dim,
            format!("{}+{}", self.label, other.label),
            move |a, z| Some(f(a, z)? + g(a, z)?),
        )
    }

    /// Real-linear combination helper `αξ + βψ`.
    pub fn combine(&self, alpha: C64, other: &RapidityFunction, beta: C64) -> Self {
        self.scale(alpha).add(&other.scale(beta))
    }

    /// `(U₁(x,λ)ξ)^α(ζ) = e^{ip_{m_α}(ζ)·x} ξ^α(ζ − λ)`.
    pub fn act_poincare(&self, spec: &ParticleSpectrum, x: [f64; 2], lambda: f64) -> Self {
        let f = self.f.clone();
        let masses = spec.masses.clone();
        Self::new(
            self.dim,
            format!("U({x:?},{lambda})·{}", self.label),
            move |a, z| {
                let phase = (shell_dot(masses[a], z, x) * c(0.0, 1.0)).exp();
                Some(phase * f(a, z - lambda)?)
            },
        )
    }

    /// `(J₁ξ)^α(ζ) = conj ξ^ᾱ(conj ζ)`.
    pub fn apply_j(&self, spec: &ParticleSpectrum) -> Self {
        let f = self.f.clone();
        let conj = spec.conjugation.clone();
        Self::new(self.dim, format!("J·{}", self.label), move |a, z| {
            f(conj[a], z.conj()).map(|v| v.conj())
        })
    }

    /// `Δ₁^{it}`: `ζ ↦ ξ(ζ + 2πt)`.
    pub fn delta_it(&self, t: f64) -> Self {
        self.shift(c(2.0 * PI * t, 0.0))
    }

    /// `Δ₁^{s}` for real `s`: `ζ ↦ ξ(ζ − 2πis)` (continuation).
    pub fn delta_power(&self, s: f64) -> Self {
        self.shift(c(0.0, -2.0 * PI * s))
    }

    fn shift(&self, w: C64) -> Self {
        let f = self.f.clone();
        Self::new(
            self.dim,
            format!("shift({w})·{}", self.label),
            move |a, z| f(a, z + w),
        )
    }

    /// Tomita operator `S₁ = J₁Δ₁^{1/2}`: `(S₁ξ)^α(ζ) = conj ξ^ᾱ(conj ζ − iπ)`.
    pub fn apply_s1(&self, spec: &ParticleSpectrum) -> Self {
        self.delta_power(0.5).apply_j(spec)
    }

    /// `J₁Δ₁^{−1/2}`.
    pub fn apply_s1_prime(&self, spec: &ParticleSpectrum) -> Self {
        self.delta_power(-0.5).apply_j(spec)
    }

    /// Multiply by `φ(P)` in the light-ray realization where the translation
    /// generator is `P = m e^{−θ}` (continued as `m e^{−ζ}`).
    pub fn multiply_inner(&self, phi: &InnerFunction, m: f64) -> Self {
        let f = self.f.clone();
        let p = phi.f.clone();
        Self::new(
            self.dim,
            format!("{}·{}", phi.label, self.label),
            move |a, z| Some(p((-z).exp() * m) * f(a, z)?),
        )
    }

    /// Orthonormal grid coordinates `√w_j ξ^α(θ_j)`, index `j·D + α`.
    pub fn sample(&self, quad: &Quadrature) -> Vec<C64> {
        let mut out = Vec::with_capacity(quad.len() * self.dim);
        for (t, w) in quad.nodes.iter().zip(&quad.weights) {
            for a in 0..self.dim {
                out.push(self.at(a, *t) * w.sqrt());
            }
        }
        out
    }

    /// Samples of the function continued to the line `Im ζ = im`.
    pub fn sample_line(&self, quad: &Quadrature, im: f64) -> Option<Vec<C64>> {
        let mut out = Vec::with_capacity(quad.len() * self.dim);
        for (t, w) in quad.nodes.iter().zip(&quad.weights) {
            for a in 0..self.dim {
                out.push(self.eval(a, c(*t, im))? * w.sqrt());
            }
        }
        Some(out)
    }
}

/// `⟨ψ, ξ⟩ = Σ_α ∫ conj ψ^α ξ^α dθ` by quadrature.
pub fn inner(psi: &RapidityFunction, xi: &RapidityFunction, quad: &Quadrature) -> C64 {
    let mut s = c(0.0, 0.0);
    for (t, w) in quad.nodes.iter().zip(&quad.weights) {
        for a in 0..psi.dim {
            s += psi.at(a, *t).conj() * xi.at(a, *t) * *w;
        }
    }
    s
}

pub fn norm(xi: &RapidityFunction, quad: &Quadrature) -> f64 {
    inner(xi, xi, quad).re.max(0.0).sqrt()
}

/// `ξ/‖ξ‖`.
pub fn normalized(xi: &RapidityFunction, quad: &Quadrature) -> RapidityFunction {
    xi.scale(c(1.0 / norm(xi, quad), 0.0))
}

/// Largest modulus of the integrand at the two ends of the quadrature window,
/// relative to the largest modulus inside.
pub fn tail_fraction(xi: &RapidityFunction, quad: &Quadrature, im: f64) -> f64 {
    let mut inside: f64 = 0.0;
    for &t in &quad.nodes {
        for a in 0..xi.dim {
            inside = inside.max(
                xi.eval(a, c(t, im))
                    .map(|v| v.norm())
                    .unwrap_or(f64::INFINITY),
            );
        }
    }
    let lo = quad.nodes[0];
    let hi = *quad.nodes.last().unwrap();
    let mut edge: f64 = 0.0;
    for &t in &[lo, hi] {
        for a in 0..xi.dim {
            edge = edge.max(
                xi.eval(a, c(t, im))
                    .map(|v| v.norm())
                    .unwrap_or(f64::INFINITY),
            );
        }
    }
    if inside == 0.0 {
        0.0
    } else {
        edge / inside
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymplecticValue {
    pub value: f64,
    pub converged: bool,
    pub tail: f64,
}

/// `Im⟨ψ, ξ⟩`, flagged as not converged when either integrand has
/// non-negligible mass at the window edges.
pub fn symplectic_form(
    psi: &RapidityFunction,
    xi: &RapidityFunction,
    quad: &Quadrature,
    tail_tol: f64,
) -> SymplecticValue {
    let tail = tail_fraction(psi, quad, 0.0).max(tail_fraction(xi, quad, 0.0));
    SymplecticValue {
        value: inner(psi, xi, quad).im,
        converged: tail <= tail_tol,
        tail,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Member,
    NotMember,
    NotTestable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub verdict: Verdict,
    /// `max |ξ^α(θ − iπ) − conj ξ^ᾱ(θ)|` over the nodes.
    pub boundary_residual: f64,
    /// Squared L² norms on the sampled lines `Im ζ = λ`.
    pub line_norms: Vec<(f64, f64)>,
    pub hardy_ok: bool,
    pub tail: f64,
}

impl Membership {
    pub fn member(&self) -> bool {
        self.verdict == Verdict::Member
    }
}

/// Test `ξ ∈ K₁`: the boundary relation between the lines `Im ζ = −π` and
/// `Im ζ = 0`, and a Hardy probe requiring the squared L² norms on interior
/// lines to stay below those on the two edges (log-convexity of Hardy norms)
/// with negligible mass at the window ends.
pub fn k1_membership(
    xi: &RapidityFunction,
    spec: &ParticleSpectrum,
    lambdas: &[f64],
    quad: &Quadrature,
    tol: f64,
) -> Membership {
    let not_testable = |line_norms| Membership {
        verdict: Verdict::NotTestable,
        boundary_residual: f64::NAN,
        line_norms,
        hardy_ok: false,
        tail: f64::NAN,
    };
    let mut boundary: f64 = 0.0;
    for &t in &quad.nodes {
        for a in 0..xi.dim {
            let Some(far) = xi.eval(a, c(t, -PI)) else {
                return not_testable(Vec::new());
            };
            let Some(near) = xi.eval(spec.bar(a), c(t, 0.0)) else {
                return not_testable(Vec::new());
            };
            let r = (far - near.conj()).norm();
            boundary = if r.is_nan() {
                f64::INFINITY
            } else {
                boundary.max(r)
            };
        }
    }
    let line_norm = |im: f64| -> Option<f64> {
        let mut s = 0.0;
        for (t, w) in quad.nodes.iter().zip(&quad.weights) {
            for a in 0..xi.dim {
                s += xi.eval(a, c(*t, im))?.norm_sqr() * w;
            }
        }
        Some(if s.is_nan() { f64::INFINITY } else { s })
    };
    let mut line_norms = Vec::new();
    let edges = match (line_norm(0.0), line_norm(-PI)) {
        (Some(a), Some(b)) => a.max(b),
        _ => return not_testable(line_norms),
    };
    let mut hardy_ok = edges.is_finite();
    let mut tail: f64 = 0.0;
    for &lam in lambdas {
        let Some(n) = line_norm(lam) else {
            return not_testable(line_norms);
        };
        line_norms.push((lam, n));
        hardy_ok &= n.is_finite() && n <= edges * (1.0 + 1e-6) + 1e-300;
        tail = tail.max(tail_fraction(xi, quad, lam));
    }
    hardy_ok &= tail <= 1e-6;
    let member = boundary <= tol && hardy_ok;
    Membership {
        verdict: if member {
            Verdict::Member
        } else {
            Verdict::NotMember
        },
        boundary_residual: boundary,
        line_norms,
        hardy_ok,
        tail,
    }
}

/// Interior lines used by the Hardy probe.
pub fn default_lambdas() -> Vec<f64> {
    (1..8).map(|k| -PI * k as f64 / 8.0).collect()
}

/// L² distance of two functions on the real line by quadrature.
pub fn distance(a: &RapidityFunction, b: &RapidityFunction, quad: &Quadrature) -> f64 {
    let mut s = 0.0;
    for (t, w) in quad.nodes.iter().zip(&quad.weights) {
        for k in 0..a.dim {
            s += (a.at(k, *t) - b.at(k, *t)).norm_sqr() * w;
        }
    }
    s.sqrt()
}

/// Apply the 2×2 Lorentz part of a boost to a point.
fn lorentz2(l: &crate::RMatrix, x: [f64; 2]) -> [f64; 2] {
    [
        l[(0, 0)] * x[0] + l[(0, 1)] * x[1],
        l[(1, 0)] * x[0] + l[(1, 1)] * x[1],
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorchersResidual {
    pub modular: f64,
    pub reflection: f64,
}

/// Residuals of `Δ₁^{it}U₁(x)Δ₁^{−it} = U₁(Λ_{W_R}(−t)x)` and `J₁U₁(x)J₁ = U₁(jx)`
/// on a test family.
///
/// With `Δ₁^{it}` shifting rapidities by `+2πt`, conjugation by the modular
/// group boosts translations by rapidity `−2πt`, i.e. by `Λ_{W_R}(−t)` with
/// `Λ_{W_R}(t)` the boost of rapidity `2πt`.
pub fn borchers_relation_check(
    spec: &ParticleSpectrum,
    ts: &[f64],
    xs: &[[f64; 2]],
    family: &[RapidityFunction],
    quad: &Quadrature,
) -> BorchersResidual {
    borchers_with_sign(spec, ts, xs, family, quad, -1.0)
}

/// Same as [`borchers_relation_check`] with `Λ_{W_R}(sign·t)` on the right-hand side.
pub fn borchers_with_sign(
    spec: &ParticleSpectrum,
    ts: &[f64],
    xs: &[[f64; 2]],
    family: &[RapidityFunction],
    quad: &Quadrature,
    sign: f64,
) -> BorchersResidual {
    let mut modular: f64 = 0.0;
    let mut reflection: f64 = 0.0;
    for xi in family {
        for &x in xs {
            for &t in ts {
                let lhs = xi.delta_it(-t).act_poincare(spec, x, 0.0).delta_it(t);
                let lx = lorentz2(&wedge_boost_right(2, sign * t), x);
                let rhs = xi.act_poincare(spec, lx, 0.0);
                modular = modular.max(distance(&lhs, &rhs, quad));
            }
            let lhs = xi.apply_j(spec).act_poincare(spec, x, 0.0).apply_j(spec);
            let rhs = xi.act_poincare(spec, [-x[0], -x[1]], 0.0);
            reflection = reflection.max(distance(&lhs, &rhs, quad));
        }
    }
    BorchersResidual {
        modular,
        reflection,
    }
}

/// A function on the upper half plane, applied as `φ(P)`.
#[derive(Clone)]
pub struct InnerFunction {
    pub label: String,
    f: Arc<dyn Fn(C64) -> C64 + Send + Sync>,
}

impl fmt::Debug for InnerFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InnerFunction({})", self.label)
    }
}

impl InnerFunction {
    pub fn new<F: Fn(C64) -> C64 + Send + Sync + 'static>(label: impl Into<String>, f: F) -> Self {
        InnerFunction {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn one() -> Self {
        Self::new("1", |_| c(1.0, 0.0))
    }

    /// `(p − ia)/(p + ia)`, a > 0.
    pub fn blaschke(a: f64) -> Self {
        Self::new(format!("blaschke({a})"), move |p| {
            (p - c(0.0, a)) / (p + c(0.0, a))
        })
    }

    /// `e^{iβp}`, β ≥ 0.
    pub fn translation(beta: f64) -> Self {
        Self::new(format!("exp(i{beta}p)"), move |p| (p * c(0.0, beta)).exp())
    }

    pub fn eval(&self, p: C64) -> C64 {
        (self.f)(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerReport {
    pub unimodular: f64,
    pub reflection_conjugate: f64,
    pub reflection_inverse: f64,
    pub upper_half_plane_sup: f64,
    pub symmetric_inner: bool,
}

/// Boundary identities `|φ(p)| = 1`, `φ(−p) = conj φ(p) = φ(p)^{−1}` on the
/// real grid and boundedness by 1 on sampled upper-half-plane points.
pub fn is_symmetric_inner(phi: &InnerFunction, grid: &[f64], tol: f64) -> InnerReport {
    let mut unimodular: f64 = 0.0;
    let mut conj: f64 = 0.0;
    let mut inv: f64 = 0.0;
    for &p in grid {
        let v = phi.eval(c(p, 0.0));
        let w = phi.eval(c(-p, 0.0));
        unimodular = unimodular.max((v.norm() - 1.0).abs());
        conj = conj.max((w - v.conj()).norm());
        inv = inv.max((w * v - c(1.0, 0.0)).norm());
    }
    let mut sup: f64 = 0.0;
    for &p in grid {
        for &y in &[1e-3, 0.1, 1.0, 10.0] {
            sup = sup.max(phi.eval(c(p, y)).norm());
        }
    }
    InnerReport {
        unimodular,
        reflection_conjugate: conj,
        reflection_inverse: inv,
        upper_half_plane_sup: sup,
        symmetric_inner: unimodular <= tol && conj <= tol && inv <= tol && sup <= 1.0 + tol,
    }
}

/// Apply `φ(P)` to each member of the family and return the worst membership
/// boundary residual, together with whether every image passed the full test.
pub fn endomorphism_check(
    phi: &InnerFunction,
    spec: &ParticleSpectrum,
    family: &[RapidityFunction],
    quad: &Quadrature,
    tol: f64,
) -> (f64, bool) {
    let m = spec.masses[0];
    let mut worst: f64 = 0.0;
    let mut all = true;
    for xi in family {
        let r = k1_membership(
            &xi.multiply_inner(phi, m),
            spec,
            &default_lambdas(),
            quad,
            tol,
        );
        worst = worst.max(r.boundary_residual);
        all &= r.member();
    }
    (worst, all)
}
