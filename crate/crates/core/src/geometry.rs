//! Minkowski space, wedges, Poincaré transformations and admissible warp matrices.
//!
//! Coordinates are `x = (x0, x1, ..., x_{d-1})` with `x0` the time coordinate and
//! metric signature `(+, -, ..., -)`. The right wedge is `W_R = {x : x1 > |x0|}`.

use crate::error::{Error, Result};
use crate::RMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub coords: Vec<f64>,
}

impl SpacetimePoint {
    pub fn new(coords: Vec<f64>) -> Self {
        assert!(coords.len() >= 2, "spacetime dimension must be at least 2");
        SpacetimePoint { coords }
    }

    pub fn origin(d: usize) -> Self {
        Self::new(vec![0.0; d])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn minkowski(&self, other: &SpacetimePoint) -> f64 {
        minkowski(&self.coords, &other.coords)
    }

    pub fn sub(&self, other: &SpacetimePoint) -> SpacetimePoint {
        SpacetimePoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add(&self, other: &SpacetimePoint) -> SpacetimePoint {
        SpacetimePoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl From<Vec<f64>> for SpacetimePoint {
    fn from(v: Vec<f64>) -> Self {
        SpacetimePoint::new(v)
    }
}

/// Minkowski product `x0 y0 - x1 y1 - ... - x_{d-1} y_{d-1}`.
pub fn minkowski(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x[0] * y[0] - x[1..].iter().zip(&y[1..]).map(|(a, b)| a * b).sum::<f64>()
}

/// The metric `diag(1, -1, ..., -1)`.
pub fn eta(d: usize) -> RMatrix {
    let mut m = RMatrix::identity(d, d) * -1.0;
    m[(0, 0)] = 1.0;
    m
}

fn mat_vec(m: &RMatrix, x: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * x[j]).sum())
        .collect()
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Boost in the (x0, x1) plane with rapidity `r`.
pub fn boost01(d: usize, r: f64) -> RMatrix {
    let mut m = RMatrix::identity(d, d);
    m[(0, 0)] = r.cosh();
    m[(0, 1)] = r.sinh();
    m[(1, 0)] = r.sinh();
    m[(1, 1)] = r.cosh();
    m
}

/// Boost with rapidity `r` along the spatial unit direction `n` (length d-1).
pub fn boost_along(d: usize, n: &[f64], r: f64) -> RMatrix {
    let mut m = RMatrix::identity(d, d);
    let (ch, sh) = (r.cosh(), r.sinh());
    m[(0, 0)] = ch;
    for i in 1..d {
        m[(0, i)] = sh * n[i - 1];
        m[(i, 0)] = sh * n[i - 1];
        for j in 1..d {
            m[(i, j)] += (ch - 1.0) * n[i - 1] * n[j - 1];
        }
    }
    m
}

/// Rotation by `angle` in the spatial (i, j) plane, `1 <= i, j < d`.
pub fn rotation(d: usize, i: usize, j: usize, angle: f64) -> RMatrix {
    let mut m = RMatrix::identity(d, d);
    let (c, s) = (angle.cos(), angle.sin());
    m[(i, i)] = c;
    m[(j, j)] = c;
    m[(i, j)] = -s;
    m[(j, i)] = s;
    m
}

/// Edge reflection of the right wedge, `j(x) = (-x0, -x1, x2, ...)`.
pub fn reflection_j(d: usize) -> RMatrix {
    let mut m = RMatrix::identity(d, d);
    m[(0, 0)] = -1.0;
    m[(1, 1)] = -1.0;
    m
}

/// `Λ_{W_R}(t)`: boost in the (x0, x1) plane with rapidity 2πt.
pub fn wedge_boost_right(d: usize, t: f64) -> RMatrix {
    boost01(d, 2.0 * PI * t)
}

/// A Lorentz matrix mapping `W_R` onto `W_L`: `-1` in d=2 and the spatial
/// rotation by π in the (x1, x2) plane for d ≥ 3.
pub fn right_to_left(d: usize) -> RMatrix {
    if d == 2 {
        -RMatrix::identity(2, 2)
    } else {
        rotation(d, 1, 2, PI)
    }
}

/// Largest deviation of `Λ^t η Λ` from `η`, relative to `max(1, ‖Λ‖²)`.
pub fn lorentz_defect(l: &RMatrix) -> f64 {
    let d = l.nrows();
    let e = eta(d);
    let r = l.transpose() * &e * l - &e;
    let scale = l.iter().map(|x| x * x).fold(1.0, f64::max);
    r.amax() / scale
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chronous {
    Orthochronous,
    Antichronous,
}

/// The map `x ↦ Λx + a`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoincareTransform {
    pub translation: Vec<f64>,
    pub lorentz: RMatrix,
}

impl PoincareTransform {
    pub fn new(translation: Vec<f64>, lorentz: RMatrix) -> Self {
        assert_eq!(translation.len(), lorentz.nrows());
        PoincareTransform {
            translation,
            lorentz,
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::new(vec![0.0; d], RMatrix::identity(d, d))
    }

    pub fn translation(a: Vec<f64>) -> Self {
        let d = a.len();
        Self::new(a, RMatrix::identity(d, d))
    }

    pub fn lorentz(l: RMatrix) -> Self {
        let d = l.nrows();
        Self::new(vec![0.0; d], l)
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply(&self, x: &SpacetimePoint) -> Result<SpacetimePoint> {
        check_dim(self.dim(), x.dim())?;
        let mut y = mat_vec(&self.lorentz, &x.coords);
        for (yi, ai) in y.iter_mut().zip(&self.translation) {
            *yi += ai;
        }
        Ok(SpacetimePoint::new(y))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PoincareTransform) -> PoincareTransform {
        let mut a = mat_vec(&self.lorentz, &other.translation);
        for (ai, bi) in a.iter_mut().zip(&self.translation) {
            *ai += bi;
        }
        PoincareTransform::new(a, &self.lorentz * &other.lorentz)
    }

    pub fn inverse(&self) -> PoincareTransform {
        let d = self.dim();
        let e = eta(d);
        // Λ^{-1} = η Λ^t η for Lorentz matrices.
        let inv = &e * self.lorentz.transpose() * &e;
        let a: Vec<f64> = mat_vec(&inv, &self.translation)
            .iter()
            .map(|v| -v)
            .collect();
        PoincareTransform::new(a, inv)
    }

    pub fn determinant(&self) -> f64 {
        self.lorentz.determinant()
    }

    pub fn chronous(&self) -> Chronous {
        if self.lorentz[(0, 0)] > 0.0 {
            Chronous::Orthochronous
        } else {
            Chronous::Antichronous
        }
    }

    pub fn is_proper(&self, tol: f64) -> bool {
        (self.determinant() - 1.0).abs() <= tol.max(1e-9)
            && lorentz_defect(&self.lorentz) <= tol.max(1e-9)
    }
}

/// Draw a proper orthochronous Poincaré transform: a boost of rapidity up to
/// `max_rapidity` along a random direction, a random spatial rotation, and a
/// translation with coordinates in [-scale, scale].
pub fn random_poincare<R: Rng>(
    rng: &mut R,
    d: usize,
    max_rapidity: f64,
    scale: f64,
) -> PoincareTransform {
    let mut n: Vec<f64> = (1..d).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
    let norm = n.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
    n.iter_mut().for_each(|v| *v /= norm);
    let r = (rng.gen::<f64>() * 2.0 - 1.0) * max_rapidity;
    let mut l = boost_along(d, &n, r);
    for i in 1..d {
        for j in (i + 1)..d {
            l = rotation(d, i, j, rng.gen::<f64>() * 2.0 * PI) * l;
        }
    }
    let a = (0..d)
        .map(|_| (rng.gen::<f64>() * 2.0 - 1.0) * scale)
        .collect();
    PoincareTransform::new(a, l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Right,
    Left,
}

/// The wedge `ΛW_R + a`.
#[derive(Debug, Clone)]
pub struct Wedge {
    pub lorentz: RMatrix,
    pub apex: Vec<f64>,
}

/// Normalized description of a wedge: the two null vectors bounding it (scaled
/// to unit time component in absolute value) and the apex projected onto
/// their span. `W = {x : (x-a)·n_plus < 0, (x-a)·n_minus > 0}`.
///
/// Lorentz transformations in the stabilizer of the wedge (boosts along its
/// edge-orthogonal plane and rotations of the edge) do not change this form.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalWedge {
    pub n_plus: Vec<f64>,
    pub n_minus: Vec<f64>,
    pub apex: Vec<f64>,
}

impl CanonicalWedge {
    pub fn approx_eq(&self, other: &CanonicalWedge, tol: f64) -> bool {
        let close = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
        };
        close(&self.n_plus, &other.n_plus)
            && close(&self.n_minus, &other.n_minus)
            && close(&self.apex, &other.apex)
    }
}

impl Wedge {
    pub fn new(lorentz: RMatrix, apex: Vec<f64>) -> Self {
        assert_eq!(lorentz.nrows(), apex.len());
        Wedge { lorentz, apex }
    }

    pub fn right(d: usize) -> Self {
        Self::new(RMatrix::identity(d, d), vec![0.0; d])
    }

    pub fn left(d: usize) -> Self {
        Self::new(right_to_left(d), vec![0.0; d])
    }

    pub fn dim(&self) -> usize {
        self.apex.len()
    }

    pub fn translated(&self, a: &[f64]) -> Wedge {
        let apex = self.apex.iter().zip(a).map(|(x, y)| x + y).collect();
        Wedge::new(self.lorentz.clone(), apex)
    }

    /// Image `gW`.
    pub fn transformed(&self, g: &PoincareTransform) -> Wedge {
        let h = g.compose(&PoincareTransform::new(
            self.apex.clone(),
            self.lorentz.clone(),
        ));
        Wedge::new(h.lorentz, h.translation)
    }

    /// `(a, Λ)` as a Poincaré transform mapping `W_R` onto this wedge.
    pub fn as_transform(&self) -> PoincareTransform {
        PoincareTransform::new(self.apex.clone(), self.lorentz.clone())
    }

    pub fn canonical(&self) -> CanonicalWedge {
        let d = self.dim();
        let mut lp = vec![0.0; d];
        lp[0] = 1.0;
        lp[1] = 1.0;
        let mut lm = vec![0.0; d];
        lm[0] = 1.0;
        lm[1] = -1.0;
        let scale = |v: Vec<f64>| {
            let s = v[0].abs();
            v.into_iter().map(|x| x / s).collect::<Vec<f64>>()
        };
        let n_plus = scale(mat_vec(&self.lorentz, &lp));
        let n_minus = scale(mat_vec(&self.lorentz, &lm));
        let pm = minkowski(&n_plus, &n_minus);
        let ap = minkowski(&self.apex, &n_plus);
        let am = minkowski(&self.apex, &n_minus);
        let apex = (0..d)
            .map(|i| (am * n_plus[i] + ap * n_minus[i]) / pm)
            .collect();
        CanonicalWedge {
            n_plus,
            n_minus,
            apex,
        }
    }

    /// In d=2, the side flag and apex of the normalized form.
    pub fn side_2d(&self) -> Option<(Side, [f64; 2])> {
        if self.dim() != 2 {
            return None;
        }
        let c = self.canonical();
        let side = if c.n_plus[0] > 0.0 {
            Side::Right
        } else {
            Side::Left
        };
        Some((side, [c.apex[0], c.apex[1]]))
    }

    pub fn approx_eq(&self, other: &Wedge, tol: f64) -> bool {
        self.dim() == other.dim() && self.canonical().approx_eq(&other.canonical(), tol)
    }

    /// Coordinates of `Λ^{-1}(x - a)`.
    fn pullback(&self, x: &SpacetimePoint) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.dim())?;
        let g = self.as_transform().inverse();
        Ok(g.apply(x)?.coords)
    }
}

/// `x ∈ W`, open wedge with a margin `tol`.
pub fn wedge_contains(w: &Wedge, x: &SpacetimePoint, tol: f64) -> Result<bool> {
    let y = w.pullback(x)?;
    Ok(y[1] - y[0].abs() > tol)
}

/// `x ∈ closure(W)` with slack `tol`.
pub fn wedge_closure_contains(w: &Wedge, x: &SpacetimePoint, tol: f64) -> Result<bool> {
    let y = w.pullback(x)?;
    Ok(y[1] - y[0].abs() >= -tol)
}

/// `W' = Λ W_L + a`.
pub fn causal_complement(w: &Wedge) -> Wedge {
    Wedge::new(&w.lorentz * right_to_left(w.dim()), w.apex.clone())
}

/// Does `W2 ⊂ W1` hold: same null directions and apex displacement in the closure of `W1`.
pub fn wedge_includes(w1: &Wedge, w2: &Wedge, tol: f64) -> bool {
    if w1.dim() != w2.dim() {
        return false;
    }
    let c1 = w1.canonical();
    let c2 = w2.canonical();
    let close = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= tol.max(1e-12) * (1.0 + x.abs()))
    };
    if !close(&c1.n_plus, &c2.n_plus) || !close(&c1.n_minus, &c2.n_minus) {
        return false;
    }
    let disp: Vec<f64> = w2.apex.iter().zip(&w1.apex).map(|(a, b)| a - b).collect();
    // Shift the displacement to an apex of W1 via the unchanged bilinear tests.
    let p = minkowski(&disp, &c1.n_plus);
    let m = minkowski(&disp, &c1.n_minus);
    p <= tol && m >= -tol
}

/// `(j_W, Λ_W(t))` obtained by conjugating the right-wedge data with `(a, Λ)`.
pub fn wedge_reflection_and_boost(w: &Wedge, t: f64) -> (PoincareTransform, PoincareTransform) {
    let d = w.dim();
    let g = w.as_transform();
    let gi = g.inverse();
    let j = g
        .compose(&PoincareTransform::lorentz(reflection_j(d)))
        .compose(&gi);
    let b = g
        .compose(&PoincareTransform::lorentz(wedge_boost_right(d, t)))
        .compose(&gi);
    (j, b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleCone {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub nonempty: bool,
    pub diameter: Option<f64>,
}

/// `O_{x,y} = (W_R + x) ∩ (W_L + y)` in d=2.
pub fn double_cone(x: &SpacetimePoint, y: &SpacetimePoint) -> Result<DoubleCone> {
    check_dim(2, x.dim())?;
    check_dim(2, y.dim())?;
    let diff = y.sub(x);
    let nonempty = wedge_contains(&Wedge::right(2), &diff, 0.0)?;
    let diameter = if nonempty {
        Some((-diff.minkowski(&diff)).sqrt())
    } else {
        None
    };
    Ok(DoubleCone {
        x: [x.coords[0], x.coords[1]],
        y: [y.coords[0], y.coords[1]],
        nonempty,
        diameter,
    })
}

/// A deformation matrix `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpParameter {
    pub q: RMatrix,
}

impl WarpParameter {
    pub fn new(q: RMatrix) -> Self {
        assert_eq!(q.nrows(), q.ncols());
        WarpParameter { q }
    }

    /// The standard admissible form: `[[0, κ], [κ, 0]]` in the (x0, x1) block,
    /// and for d=4 an additional `[[0, κ'], [-κ', 0]]` block in (x2, x3).
    pub fn standard(d: usize, kappa: f64, kappa_prime: f64) -> Self {
        let mut q = RMatrix::zeros(d, d);
        q[(0, 1)] = kappa;
        q[(1, 0)] = kappa;
        if d == 4 {
            q[(2, 3)] = kappa_prime;
            q[(3, 2)] = -kappa_prime;
        }
        WarpParameter { q }
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    /// Deviation of `ηQ` from antisymmetry; zero iff `Q` is skew for the Minkowski product.
    pub fn skew_defect(&self) -> f64 {
        let e = eta(self.dim());
        let m = &e * &self.q;
        (&m + m.transpose()).amax()
    }

    /// Random skew matrix `Q = ηK` with `K` antisymmetric, entries in [-scale, scale].
    pub fn random_skew<R: Rng>(rng: &mut R, d: usize, scale: f64) -> Self {
        let mut k = RMatrix::zeros(d, d);
        for i in 0..d {
            for j in (i + 1)..d {
                let v = (rng.gen::<f64>() * 2.0 - 1.0) * scale;
                k[(i, j)] = v;
                k[(j, i)] = -v;
            }
        }
        WarpParameter { q: eta(d) * k }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub pattern: bool,
    pub boost_invariance: bool,
    pub reversal_anti_invariance: bool,
    pub cone_into_wedge: bool,
    pub direct: bool,
    pub admissible: bool,
    pub kappa: Option<f64>,
    pub kappa_prime: Option<f64>,
}

/// Pattern test: `Q` equals the standard form with `κ ≥ 0` (any `κ'` when d=4).
pub fn matches_standard_form(q: &WarpParameter, tol: f64) -> (bool, Option<f64>, Option<f64>) {
    let d = q.dim();
    let kappa = q.q[(0, 1)];
    let kappa_prime = if d == 4 { q.q[(2, 3)] } else { 0.0 };
    let reference = WarpParameter::standard(d, kappa, kappa_prime);
    let ok = (&q.q - &reference.q).amax() <= tol && kappa >= -tol;
    if ok {
        (
            true,
            Some(kappa),
            if d == 4 { Some(kappa_prime) } else { None },
        )
    } else {
        (false, None, None)
    }
}

/// Lorentz matrices preserving `W_R` used by the direct tests: boosts of the
/// (x0, x1) plane and rotations of the edge coordinates.
fn wedge_stabilizer_samples(d: usize) -> Vec<RMatrix> {
    let mut out = Vec::new();
    for &t in &[-0.31, -0.07, 0.05, 0.13, 0.4] {
        out.push(wedge_boost_right(d, t));
    }
    for i in 2..d {
        for j in (i + 1)..d {
            for &a in &[0.3, 1.9, 4.1] {
                out.push(rotation(d, i, j, a));
                out.push(rotation(d, i, j, a) * wedge_boost_right(d, 0.11));
            }
        }
    }
    out
}

/// Forward light-cone sample vectors, including null rays.
fn forward_cone_samples(d: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let mut out = Vec::new();
    for k in 0..64 {
        let mut n: Vec<f64> = (1..d).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let norm = n.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
        n.iter_mut().for_each(|v| *v /= norm);
        let r = rng.gen::<f64>() * 3.0;
        let excess = if k % 4 == 0 {
            0.0
        } else {
            rng.gen::<f64>() * 2.0
        };
        let mut p = vec![r + excess];
        p.extend(n.iter().map(|v| v * r));
        out.push(p);
    }
    let mut e0 = vec![0.0; d];
    e0[0] = 1.0;
    out.push(e0);
    out
}

/// Conditions (i)–(iii) tested directly on sampled group elements and cone vectors.
pub fn admissibility_direct(q: &WarpParameter, tol: f64) -> (bool, bool, bool) {
    let d = q.dim();
    let qn = q.q.amax().max(1.0);
    let e = eta(d);
    let inv = |l: &RMatrix| &e * l.transpose() * &e;
    let stab = wedge_stabilizer_samples(d);
    let inv_ok = stab
        .iter()
        .all(|l| (l * &q.q * inv(l) - &q.q).amax() <= tol * qn);
    let j = reflection_j(d);
    let mut rev_ok = (&j * &q.q * &j - &q.q).amax() <= tol * qn;
    if d >= 3 {
        let r = right_to_left(d);
        rev_ok &= stab.iter().all(|l| {
            let m = &r * l;
            (&m * &q.q * inv(&m) + &q.q).amax() <= tol * qn
        });
    }
    let cone_ok = forward_cone_samples(d).iter().all(|p| {
        let y = mat_vec(&q.q, p);
        y[1] - y[0].abs() >= -tol * qn * (1.0 + p[0])
    });
    (inv_ok, rev_ok, cone_ok)
}

/// Classify `Q` by the standard-form pattern and by the direct conditions.
pub fn is_admissible(q: &WarpParameter, d: usize, tol: f64) -> Result<AdmissibilityReport> {
    check_dim(d, q.dim())?;
    let defect = q.skew_defect();
    if defect > tol * q.q.amax().max(1.0) {
        return Err(Error::NotSkew { residual: defect });
    }
    let (pattern, kappa, kappa_prime) = matches_standard_form(q, tol);
    let (a, b, c) = admissibility_direct(q, tol);
    let direct = a && b && c;
    Ok(AdmissibilityReport {
        pattern,
        boost_invariance: a,
        reversal_anti_invariance: b,
        cone_into_wedge: c,
        direct,
        admissible: pattern && direct,
        kappa,
        kappa_prime,
    })
}
