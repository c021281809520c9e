//! Warped convolutions `A_Q = ∫ dE(x) α_{Qx}(A)` and the Rieffel product on
//! translation representations with finite discrete spectrum.
//!
//! With spectral projections `E_j` at momenta `p_j`, the warped operator is
//! `A_Q = Σ_k α_{Qp_k}(A)E_k` where `α_y(A) = U(y)AU(y)⁻¹`. Blockwise this is
//! `E_j A_Q E_k = e^{i p_j·Qp_k} E_j A E_k`.

use crate::error::{Error, Result};
use crate::geometry::{minkowski, WarpParameter};
use crate::linalg::{identity, random_unitary, spectral_norm};
use crate::{CMatrix, RMatrix, C64};
use rand::Rng;

/// Default tolerance for merging spectral points.
pub const MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SpectralRep {
    pub n: usize,
    pub points: Vec<Vec<f64>>,
    pub projections: Vec<CMatrix>,
    /// All spectral points lie in the closed forward light cone.
    pub forward_cone: bool,
    /// Invariant unit vector in the `p = 0` eigenspace.
    pub omega: Option<Vec<C64>>,
}

fn mat_vec(m: &RMatrix, x: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * x[j]).sum())
        .collect()
}

fn in_forward_cone(p: &[f64]) -> bool {
    p[0] >= -1e-12 && minkowski(p, p) >= -1e-9
}

impl SpectralRep {
    /// Representation with eigenvectors the columns of the unitary `basis`,
    /// column `k` carrying momentum `momenta[k]`; equal momenta (within
    /// `MERGE_TOL`) share a projection. If a zero momentum occurs, the first
    /// such eigenvector is taken as the invariant vector.
    pub fn from_eigenbasis(basis: &CMatrix, momenta: &[Vec<f64>]) -> Result<Self> {
        let n = basis.nrows();
        if basis.ncols() != n || momenta.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: momenta.len(),
            });
        }
        let unit = spectral_norm(&(basis.adjoint() * basis - identity(n)));
        if unit > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "eigenbasis is not unitary (defect {unit:.2e})"
            )));
        }
        let mut points: Vec<Vec<f64>> = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (k, p) in momenta.iter().enumerate() {
            let found = points.iter().position(|q| {
                q.len() == p.len()
                    && q.iter()
                        .zip(p)
                        .map(|(a, b)| (a - b).powi(2))
                        .sum::<f64>()
                        .sqrt()
                        <= MERGE_TOL
            });
            match found {
                Some(j) => members[j].push(k),
                None => {
                    points.push(p.clone());
                    members.push(vec![k]);
                }
            }
        }
        let projections = members
            .iter()
            .map(|ks| {
                let mut e = CMatrix::zeros(n, n);
                for &k in ks {
                    let v = basis.column(k);
                    e += &v * v.adjoint();
                }
                e
            })
            .collect();
        let omega = momenta
            .iter()
            .position(|p| p.iter().all(|x| x.abs() <= MERGE_TOL))
            .map(|k| basis.column(k).iter().cloned().collect());
        let forward_cone = points.iter().all(|p| in_forward_cone(p));
        Ok(SpectralRep {
            n,
            points,
            projections,
            forward_cone,
            omega,
        })
    }

    /// Seeded random instance: Haar-like eigenbasis, `r` distinct momenta in
    /// dimension `d` (forward cone when `forward` is set), `points[0] = 0`
    /// when `with_vacuum` is set.
    pub fn random<R: Rng>(
        rng: &mut R,
        n: usize,
        r: usize,
        d: usize,
        forward: bool,
        with_vacuum: bool,
    ) -> Self {
        let basis = random_unitary(rng, n);
        let distinct: Vec<Vec<f64>> = (0..r)
            .map(|j| {
                if with_vacuum && j == 0 {
                    return vec![0.0; d];
                }
                let mut p: Vec<f64> = (0..d).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
                if forward {
                    let s: f64 = p[1..].iter().map(|x| x * x).sum::<f64>().sqrt();
                    p[0] = s + rng.gen::<f64>();
                }
                p
            })
            .collect();
        let momenta: Vec<Vec<f64>> = (0..n).map(|k| distinct[k % r].clone()).collect();
        Self::from_eigenbasis(&basis, &momenta).expect("random eigenbasis is unitary")
    }

    /// Orthonormal basis of the range of an orthogonal projection.
    fn range_basis(e: &CMatrix) -> Vec<nalgebra::DVector<C64>> {
        let eig = e.clone().symmetric_eigen();
        (0..e.nrows())
            .filter(|&k| eig.eigenvalues[k] > 0.5)
            .map(|k| eig.eigenvectors.column(k).into_owned())
            .collect()
    }

    /// Product representation `U₁(x) ⊗ U₂(x)`.
    pub fn tensor(a: &SpectralRep, b: &SpectralRep) -> Result<SpectralRep> {
        let n = a.n * b.n;
        let mut basis = CMatrix::zeros(n, n);
        let mut momenta = Vec::with_capacity(n);
        let mut col = 0;
        for (pa, ea) in a.points.iter().zip(&a.projections) {
            for (pb, eb) in b.points.iter().zip(&b.projections) {
                if pa.len() != pb.len() {
                    return Err(Error::DimensionMismatch {
                        expected: pa.len(),
                        got: pb.len(),
                    });
                }
                for u in Self::range_basis(ea) {
                    for v in Self::range_basis(eb) {
                        let w = nalgebra::DVector::from_iterator(
                            a.n * b.n,
                            u.iter().flat_map(|x| v.iter().map(move |y| x * y)),
                        );
                        basis.set_column(col, &w);
                        momenta.push(pa.iter().zip(pb).map(|(x, y)| x + y).collect());
                        col += 1;
                    }
                }
            }
        }
        let mut rep = Self::from_eigenbasis(&basis, &momenta)?;
        if let (Some(oa), Some(ob)) = (&a.omega, &b.omega) {
            rep.omega = Some(
                oa.iter()
                    .flat_map(|x| ob.iter().map(move |y| x * y))
                    .collect(),
            );
        }
        Ok(rep)
    }

    pub fn dim(&self) -> usize {
        self.points.first().map(|p| p.len()).unwrap_or(0)
    }

    /// `max(‖E_jE_k − δ_{jk}E_j‖, ‖ΣE_j − 1‖, ‖E_j* − E_j‖)`.
    pub fn validate(&self) -> f64 {
        let mut worst = spectral_norm(
            &(self
                .projections
                .iter()
                .fold(CMatrix::zeros(self.n, self.n), |a, e| a + e)
                - identity(self.n)),
        );
        for (j, ej) in self.projections.iter().enumerate() {
            worst = worst.max(spectral_norm(&(ej.adjoint() - ej)));
            for (k, ek) in self.projections.iter().enumerate() {
                let want = if j == k {
                    ej.clone()
                } else {
                    CMatrix::zeros(self.n, self.n)
                };
                worst = worst.max(spectral_norm(&(ej * ek - want)));
            }
        }
        worst
    }

    /// `U(x) = Σ_j e^{i p_j·x} E_j`.
    pub fn u(&self, x: &[f64]) -> CMatrix {
        self.projections
            .iter()
            .zip(&self.points)
            .fold(CMatrix::zeros(self.n, self.n), |acc, (e, p)| {
                acc + e * C64::from_polar(1.0, minkowski(p, x))
            })
    }

    /// `α_y(A) = U(y) A U(y)⁻¹`.
    pub fn alpha(&self, y: &[f64], a: &CMatrix) -> CMatrix {
        self.u(y) * a * self.u(&y.iter().map(|v| -v).collect::<Vec<_>>())
    }

    /// Phase exponent `p_j·Qp_k`.
    pub fn phase(&self, q: &WarpParameter, j: usize, k: usize) -> f64 {
        minkowski(&self.points[j], &mat_vec(&q.q, &self.points[k]))
    }
}

fn check_dims(a: &CMatrix, q: &WarpParameter, rep: &SpectralRep) -> Result<()> {
    if a.nrows() != rep.n || a.ncols() != rep.n {
        return Err(Error::DimensionMismatch {
            expected: rep.n,
            got: a.nrows(),
        });
    }
    if q.dim() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            got: q.dim(),
        });
    }
    Ok(())
}

/// Both spectral orderings `(Σ_k α_{Qp_k}(A)E_k, Σ_j E_j α_{Qp_j}(A))`.
pub fn warp_orderings(
    a: &CMatrix,
    q: &WarpParameter,
    rep: &SpectralRep,
) -> Result<(CMatrix, CMatrix)> {
    check_dims(a, q, rep)?;
    let mut left = CMatrix::zeros(rep.n, rep.n);
    let mut right = CMatrix::zeros(rep.n, rep.n);
    for (p, e) in rep.points.iter().zip(&rep.projections) {
        let al = rep.alpha(&mat_vec(&q.q, p), a);
        left += &al * e;
        right += e * &al;
    }
    Ok((left, right))
}

/// `A_Q`. For a non-skew `Q` the two spectral orderings disagree and their
/// difference is returned in the error.
pub fn warp(a: &CMatrix, q: &WarpParameter, rep: &SpectralRep) -> Result<CMatrix> {
    let (left, right) = warp_orderings(a, q, rep)?;
    if q.skew_defect() > 1e-12 {
        return Err(Error::NotSkew {
            residual: spectral_norm(&(left - right)),
        });
    }
    Ok(left)
}

/// Blockwise formula `Σ_{j,k} e^{ip_j·Qp_k} E_j A E_k`.
pub fn warp_blockwise(a: &CMatrix, q: &WarpParameter, rep: &SpectralRep) -> CMatrix {
    let mut out = CMatrix::zeros(rep.n, rep.n);
    for (j, ej) in rep.projections.iter().enumerate() {
        for (k, ek) in rep.projections.iter().enumerate() {
            out += ej * a * ek * C64::from_polar(1.0, rep.phase(q, j, k));
        }
    }
    out
}

fn negated(q: &WarpParameter) -> WarpParameter {
    WarpParameter::new(-q.q.clone())
}

/// `A ×_Q B = (A_Q B_Q)_{−Q}`.
pub fn rieffel_product(
    a: &CMatrix,
    b: &CMatrix,
    q: &WarpParameter,
    rep: &SpectralRep,
) -> Result<CMatrix> {
    let ab = warp(a, q, rep)? * warp(b, q, rep)?;
    warp(&ab, &negated(q), rep)
}

/// Double-sum oracle `Σ_{j,k,l} e^{i(p_j·Qp_k + p_k·Qp_l − p_j·Qp_l)} E_jAE_kBE_l`.
pub fn rieffel_oracle(a: &CMatrix, b: &CMatrix, q: &WarpParameter, rep: &SpectralRep) -> CMatrix {
    let r = rep.points.len();
    let mut out = CMatrix::zeros(rep.n, rep.n);
    for j in 0..r {
        for k in 0..r {
            let ajk = &rep.projections[j] * a * &rep.projections[k];
            for l in 0..r {
                let ph = rep.phase(q, j, k) + rep.phase(q, k, l) - rep.phase(q, j, l);
                out += &ajk * b * &rep.projections[l] * C64::from_polar(1.0, ph);
            }
        }
    }
    out
}

/// `‖(A_{Q1})_{Q2} − A_{Q1+Q2}‖`.
pub fn cascade_check(
    a: &CMatrix,
    q1: &WarpParameter,
    q2: &WarpParameter,
    rep: &SpectralRep,
) -> Result<f64> {
    let lhs = warp(&warp(a, q1, rep)?, q2, rep)?;
    let rhs = warp(a, &WarpParameter::new(&q1.q + &q2.q), rep)?;
    Ok(spectral_norm(&(lhs - rhs)))
}

/// A unitary `V = W` or an antiunitary `V = W∘K` (K complex conjugation).
#[derive(Debug, Clone)]
pub struct Symmetry {
    pub w: CMatrix,
    pub antiunitary: bool,
}

impl Symmetry {
    /// `V A V⁻¹`.
    pub fn conjugate(&self, a: &CMatrix) -> CMatrix {
        if self.antiunitary {
            &self.w * a.map(|z| z.conj()) * self.w.adjoint()
        } else {
            &self.w * a * self.w.adjoint()
        }
    }
}

/// `‖V A_Q V⁻¹ − (VAV⁻¹)_{±MQMᵀ}‖` with `+` for unitary and `−` for antiunitary
/// `V`, after verifying `V U(x) V⁻¹ = U(Mx)` on a set of probe translations.
pub fn covariance_check(
    a: &CMatrix,
    q: &WarpParameter,
    v: &Symmetry,
    m: &RMatrix,
    rep: &SpectralRep,
) -> Result<f64> {
    let d = rep.dim();
    let probes: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|k| if k == i { 1.0 } else { 0.0 }).collect())
        .chain([(0..d).map(|k| 0.37 + 0.61 * k as f64).collect()])
        .chain([(0..d).map(|k| -1.3 + 0.2 * (k * k) as f64).collect()])
        .collect();
    let mut inter: f64 = 0.0;
    for x in &probes {
        let lhs = v.conjugate(&rep.u(x));
        let rhs = rep.u(&mat_vec(m, x));
        inter = inter.max(spectral_norm(&(lhs - rhs)));
    }
    if inter > 1e-10 {
        return Err(Error::NotIntertwiner(inter));
    }
    let sign = if v.antiunitary { -1.0 } else { 1.0 };
    let q2 = WarpParameter::new(m * &q.q * m.transpose() * sign);
    let lhs = v.conjugate(&warp(a, q, rep)?);
    let rhs = warp(&v.conjugate(a), &q2, rep)?;
    Ok(spectral_norm(&(lhs - rhs)))
}

/// `‖A_QΩ − AΩ‖`.
pub fn vacuum_check(a: &CMatrix, q: &WarpParameter, rep: &SpectralRep) -> Result<f64> {
    let omega = rep.omega.as_ref().ok_or(Error::NoInvariantVector)?;
    let w = nalgebra::DVector::from_column_slice(omega);
    let aq = warp(a, q, rep)?;
    Ok((aq * &w - a * &w).norm())
}

/// `(hypothesis, conclusion)`: `max_{p,q} ‖[α_{Qp}(A), α_{−Qq}(B)]‖` and `‖[A_Q, B_{−Q}]‖`.
pub fn commutation_theorem_check(
    a: &CMatrix,
    b: &CMatrix,
    q: &WarpParameter,
    rep: &SpectralRep,
) -> Result<(f64, f64)> {
    if !rep.forward_cone {
        return Err(Error::InvalidParameter(
            "commutation theorem needs spectrum in the forward cone".into(),
        ));
    }
    let mq = negated(q);
    let mut hyp: f64 = 0.0;
    for p in &rep.points {
        let ap = rep.alpha(&mat_vec(&q.q, p), a);
        for pp in &rep.points {
            let bq = rep.alpha(&mat_vec(&mq.q, pp), b);
            hyp = hyp.max(spectral_norm(&(&ap * &bq - &bq * &ap)));
        }
    }
    let aq = warp(a, q, rep)?;
    let bq = warp(b, &mq, rep)?;
    Ok((hyp, spectral_norm(&(&aq * &bq - &bq * &aq))))
}

/// Norm continuity of `Q ↦ A_Q` along a skew direction `E`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityProfile {
    /// `‖A_{Q+εE} − A_Q‖` for each step `ε`.
    pub distances: Vec<f64>,
    /// `L = Σ_{j,k} |p_j·Ep_k| ‖E_j A E_k‖`, so that each distance is at most `|ε| L`.
    pub lipschitz: f64,
    /// `max(0, max_ε ‖A_{Q+εE} − A_Q‖ − |ε| L)`.
    pub excess: f64,
}

pub fn continuity_profile(
    a: &CMatrix,
    q: &WarpParameter,
    direction: &WarpParameter,
    rep: &SpectralRep,
    steps: &[f64],
) -> Result<ContinuityProfile> {
    let aq = warp(a, q, rep)?;
    let mut lipschitz = 0.0;
    for (j, ej) in rep.projections.iter().enumerate() {
        for (k, ek) in rep.projections.iter().enumerate() {
            lipschitz += rep.phase(direction, j, k).abs() * spectral_norm(&(ej * a * ek));
        }
    }
    let mut distances = Vec::with_capacity(steps.len());
    let mut excess: f64 = 0.0;
    for &eps in steps {
        let moved = WarpParameter::new(&q.q + &direction.q * eps);
        let dist = spectral_norm(&(warp(a, &moved, rep)? - &aq));
        excess = excess.max(dist - eps.abs() * lipschitz);
        distances.push(dist);
    }
    Ok(ContinuityProfile {
        distances,
        lipschitz,
        excess,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedPhase {
    /// `p_m(θ')·(Q p_m(θ))` with the Minkowski product.
    pub bilinear: f64,
    /// `κm² sinh(θ − θ')`.
    pub closed_form: f64,
    pub difference: f64,
    /// `e^{i·bilinear}`.
    pub phase: C64,
}

/// Two-particle phase of the warped free field with `Q = [[0,κ],[κ,0]]`.
pub fn deformed_phase(theta: f64, theta_p: f64, kappa: f64, m: f64) -> DeformedPhase {
    let q = WarpParameter::standard(2, kappa, 0.0);
    let p = [m * theta.cosh(), m * theta.sinh()];
    let pp = [m * theta_p.cosh(), m * theta_p.sinh()];
    let bilinear = minkowski(&pp, &mat_vec(&q.q, &p));
    let closed_form = kappa * m * m * (theta - theta_p).sinh();
    DeformedPhase {
        bilinear,
        closed_form,
        difference: (bilinear - closed_form).abs(),
        phase: C64::from_polar(1.0, bilinear),
    }
}

/// Seeded random skew `Q` together with a random matrix pair and representation
/// of size `n`, used by the randomized suites.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    n: usize,
    d: usize,
) -> (CMatrix, CMatrix, WarpParameter, SpectralRep) {
    let r = rng.gen_range(2..=n);
    let rep = SpectralRep::random(rng, n, r, d, false, false);
    let a = crate::linalg::random_complex_matrix(rng, n, n);
    let b = crate::linalg::random_complex_matrix(rng, n, n);
    let q = WarpParameter::random_skew(rng, d, 2.0);
    (a, b, q, rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_q_is_identity_and_translations_are_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (a, _, q, rep) = random_instance(&mut rng, 6, 2);
        let zero = WarpParameter::new(RMatrix::zeros(2, 2));
        assert!(spectral_norm(&(warp(&a, &zero, &rep).unwrap() - &a)) < 1e-13);
        let ux = rep.u(&[0.4, -1.1]);
        assert!(spectral_norm(&(warp(&ux, &q, &rep).unwrap() - &ux)) < 1e-12);
    }

    #[test]
    fn two_point_mass_shell_block() {
        let (m, theta, kappa): (f64, f64, f64) = (1.0, 0.8, 0.6);
        let basis = identity(2);
        let rep = SpectralRep::from_eigenbasis(
            &basis,
            &[vec![m, 0.0], vec![m * theta.cosh(), m * theta.sinh()]],
        )
        .unwrap();
        let mut e12 = CMatrix::zeros(2, 2);
        e12[(0, 1)] = c(1.0, 0.0);
        let aq = warp(&e12, &WarpParameter::standard(2, kappa, 0.0), &rep).unwrap();
        let want = C64::from_polar(1.0, kappa * m * m * theta.sinh());
        assert!((aq[(0, 1)] - want).norm() < 1e-14);
    }

    #[test]
    fn non_skew_reports_ordering_mismatch() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (a, _, _, rep) = random_instance(&mut rng, 6, 2);
        let sym = WarpParameter::new(RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.5]));
        match warp(&a, &sym, &rep) {
            Err(Error::NotSkew { residual }) => assert!(residual > 1e-3),
            other => panic!("expected NotSkew, got {other:?}"),
        }
    }

    #[test]
    fn deformed_phase_examples() {
        let d = deformed_phase(1.0, 0.0, 1.0, 1.0);
        assert!((d.phase - C64::from_polar(1.0, 1f64.sinh())).norm() < 1e-15);
        assert!(deformed_phase(0.3, 0.3, 1.0, 2.0).bilinear.abs() < 1e-15);
    }

    #[test]
    fn vacuum_needs_zero_momentum() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rep = SpectralRep::random(&mut rng, 4, 3, 2, true, false);
        let a = crate::linalg::random_complex_matrix(&mut rng, 4, 4);
        assert!(matches!(
            vacuum_check(&a, &WarpParameter::standard(2, 1.0, 0.0), &rep),
            Err(Error::NoInvariantVector)
        ));
    }
}
