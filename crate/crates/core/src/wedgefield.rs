//! Wedge-local fields `Φ_S(ξ) = z'†(ξ) + z'(JΔ^{1/2}ξ)` and
//! `Φ'_S(ξ) = z†(ξ) + z(JΔ^{−1/2}ξ)` on the truncated Fock space, with residual
//! checks for their adjoint, covariance, reflection, locality and cyclicity
//! properties, and two-particle scattering states.
//!
//! Checks restrict to the safe sectors `n ≤ N_max − 1`, where truncation of the
//! top sector does not enter.

use crate::error::{Error, Result};
use crate::fock::{scalar_kernel_k, scalar_kernel_l, FockOperator, FockSpace, FockVector, Op};
use crate::linalg::{c, rank, spectral_norm};
use crate::quadrature::Quadrature;
use crate::singleparticle::RapidityFunction;
use crate::smatrix::SMatrixModel;
use crate::{CMatrix, C64};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSide {
    /// `Φ_S`, localized in the right wedge.
    Right,
    /// `Φ'_S`, localized in the left wedge.
    Left,
}

#[derive(Debug, Clone)]
pub struct WedgeFieldOperator {
    pub op: FockOperator,
    pub xi: RapidityFunction,
    pub side: FieldSide,
}

impl WedgeFieldOperator {
    pub fn apply(&self, space: &FockSpace, v: &FockVector) -> FockVector {
        self.op.apply(space, v)
    }
}

fn sample_or_fail(space: &FockSpace, f: &RapidityFunction, what: &str) -> Result<Vec<C64>> {
    if f.dim != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: f.dim,
        });
    }
    let v = f
        .sample_line(&space.grid.quadrature(), 0.0)
        .ok_or_else(|| Error::ContinuationUnavailable(format!("{what} of {}", f.label)))?;
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::ContinuationUnavailable(format!(
            "{what} of {} is not finite",
            f.label
        )));
    }
    Ok(v)
}

/// `Φ_S(ξ)`; needs the continuation of ξ to `Im ζ = −π`.
pub fn phi(space: &FockSpace, xi: &RapidityFunction) -> Result<WedgeFieldOperator> {
    let spec = &space.model.spectrum;
    let a = sample_or_fail(space, xi, "ξ")?;
    let b = sample_or_fail(space, &xi.apply_s1(spec), "JΔ^{1/2}ξ")?;
    Ok(WedgeFieldOperator {
        op: FockOperator::create_reflected(&a).plus(&FockOperator::annihilate_reflected(&b)),
        xi: xi.clone(),
        side: FieldSide::Right,
    })
}

/// `Φ'_S(ξ)`; needs the continuation of ξ to `Im ζ = +π`.
pub fn phi_prime(space: &FockSpace, xi: &RapidityFunction) -> Result<WedgeFieldOperator> {
    let spec = &space.model.spectrum;
    let a = sample_or_fail(space, xi, "ξ")?;
    let b = sample_or_fail(space, &xi.apply_s1_prime(spec), "JΔ^{−1/2}ξ")?;
    Ok(WedgeFieldOperator {
        op: FockOperator::create(&a).plus(&FockOperator::annihilate(&b)),
        xi: xi.clone(),
        side: FieldSide::Left,
    })
}

/// Orthonormal basis (columns) of the range of `P_S` on sectors `≤ level`, in
/// flattened Fock coordinates.
pub fn symmetric_onb(space: &FockSpace, level: usize) -> Result<CMatrix> {
    let cols: Vec<Vec<C64>> = space
        .symmetric_basis(level)?
        .iter()
        .map(|v| v.flatten())
        .collect();
    Ok(CMatrix::from_fn(space.total_len(), cols.len(), |r, k| {
        cols[k][r]
    }))
}

/// Operator norm of `f` restricted to the S-symmetric vectors of sectors `≤ level`.
pub fn restricted_norm<F>(space: &FockSpace, level: usize, f: F) -> Result<f64>
where
    F: Fn(&FockVector) -> FockVector,
{
    let onb = symmetric_onb(space, level)?;
    let len = space.total_len();
    let mut img = CMatrix::zeros(len, onb.ncols());
    for k in 0..onb.ncols() {
        let col: Vec<C64> = onb.column(k).iter().cloned().collect();
        let v = FockVector::from_flat(space.md(), space.n_max, &col);
        for (r, z) in f(&v).flatten().into_iter().enumerate() {
            img[(r, k)] = z;
        }
    }
    Ok(spectral_norm(&img))
}

fn safe_level(space: &FockSpace) -> usize {
    space.n_max.saturating_sub(1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointReport {
    /// `‖Φ(ξ)* − Φ(JΔ^{1/2}ξ)‖` on safe sectors.
    pub adjoint: f64,
    /// `‖Φ(ξ)* − Φ(ξ)‖` on safe sectors (vanishes for ξ ∈ K₁).
    pub symmetry: f64,
}

/// Adjoint relation `Φ(ξ)* ⊃ Φ(JΔ^{1/2}ξ)` on the safe sectors.
pub fn adjoint_check(space: &FockSpace, xi: &RapidityFunction) -> Result<AdjointReport> {
    let f = phi(space, xi)?;
    let g = phi(space, &xi.apply_s1(&space.model.spectrum))?;
    let fa = f.op.adjoint();
    let level = safe_level(space);
    let adjoint = restricted_norm(space, level, |v| fa.apply(space, v).sub(&g.apply(space, v)))?;
    let symmetry = restricted_norm(space, level, |v| fa.apply(space, v).sub(&f.apply(space, v)))?;
    Ok(AdjointReport { adjoint, symmetry })
}

/// Translation covariance `U(x)Φ(ξ)U(x)⁻¹ = Φ(U₁(x)ξ)` and, if `gauge` is given,
/// `V(g)Φ(ξ)V(g)⁻¹ = Φ(V₁(g)ξ)`; returns the larger residual.
pub fn covariance_check(
    space: &FockSpace,
    xi: &RapidityFunction,
    x: [f64; 2],
    gauge: Option<&CMatrix>,
) -> Result<f64> {
    let spec = &space.model.spectrum;
    let level = safe_level(space);
    let f = phi(space, xi)?;
    let moved = phi(space, &xi.act_poincare(spec, x, 0.0))?;
    let u = Op::Translate(x);
    let u_inv = Op::Translate([-x[0], -x[1]]);
    let conj_op = FockOperator::single(u)
        .times(&f.op)
        .times(&FockOperator::single(u_inv));
    let mut worst = restricted_norm(space, level, |v| {
        conj_op.apply(space, v).sub(&moved.apply(space, v))
    })?;
    if let Some(g) = gauge {
        let gx = gauge_function(g, xi);
        let rotated = phi(space, &gx)?;
        let conj_op = FockOperator::single(Op::Gauge(g.clone()))
            .times(&f.op)
            .times(&FockOperator::single(Op::Gauge(g.adjoint())));
        worst = worst.max(restricted_norm(space, level, |v| {
            conj_op.apply(space, v).sub(&rotated.apply(space, v))
        })?);
    }
    Ok(worst)
}

/// `(V₁(g)ξ)^α = Σ_β g_{αβ} ξ^β`.
pub fn gauge_function(g: &CMatrix, xi: &RapidityFunction) -> RapidityFunction {
    let g = g.clone();
    let inner = xi.clone();
    RapidityFunction::new(xi.dim, format!("V(g)·{}", xi.label), move |a, z| {
        let mut acc = c(0.0, 0.0);
        for b in 0..inner.dim {
            acc += g[(a, b)] * inner.eval(b, z)?;
        }
        Some(acc)
    })
}

/// `‖J Φ(ξ) J − Φ'(Jξ)‖` on the safe sectors.
pub fn reflection_check(space: &FockSpace, xi: &RapidityFunction) -> Result<f64> {
    let f = phi(space, xi)?;
    let g = phi_prime(space, &xi.apply_j(&space.model.spectrum))?;
    restricted_norm(space, safe_level(space), |v| {
        space
            .apply_j(&f.apply(space, &space.apply_j(v)))
            .sub(&g.apply(space, v))
    })
}

/// One-particle Bisognano–Wichmann consistency: `Δ₁^{it}ξ` against the boost
/// `U₁(0, −2πt)ξ` on the grid, for each `t`.
pub fn modular_boost_check(
    model: &SMatrixModel,
    xi: &RapidityFunction,
    ts: &[f64],
    quad: &Quadrature,
) -> f64 {
    let mut worst: f64 = 0.0;
    for &t in ts {
        let a = xi.delta_it(t).sample(quad);
        let b = xi
            .act_poincare(&model.spectrum, [0.0, 0.0], -2.0 * PI * t)
            .sample(quad);
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalityReport {
    /// `‖[Φ(φ), Φ'(ψ')]‖` on the safe sectors (dense computation).
    pub grid: f64,
    /// `max |K_n + L_n|` over safe configurations (scalar S only): the same
    /// quantity through the closed-form kernels.
    pub kernel: Option<f64>,
}

/// `[Φ_S(φ), Φ'_S(ψ')]` on the safe sectors.
pub fn locality_check(
    space: &FockSpace,
    phi_fn: &RapidityFunction,
    psi_fn: &RapidityFunction,
) -> Result<LocalityReport> {
    let f = phi(space, phi_fn)?;
    let g = phi_prime(space, psi_fn)?;
    let comm = f.op.commutator(&g.op);
    let level = safe_level(space);
    let grid = restricted_norm(space, level, |v| comm.apply(space, v))?;
    let kernel = if space.model.is_scalar() {
        let spec = &space.model.spectrum;
        let a = sample_or_fail(space, &phi_fn.apply_s1(spec), "JΔ^{1/2}φ")?;
        let b = sample_or_fail(space, psi_fn, "ψ'")?;
        let p = sample_or_fail(space, phi_fn, "φ")?;
        let q = sample_or_fail(space, &psi_fn.apply_s1_prime(spec), "JΔ^{−1/2}ψ'")?;
        let mut worst: f64 = 0.0;
        for n in 0..=level {
            for idx in 0..space.sector_len(n) {
                let nodes = space.decompose(n, idx);
                let k = scalar_kernel_k(space, &a, &b, &nodes)?
                    + scalar_kernel_l(space, &p, &q, &nodes)?;
                worst = worst.max(k.norm());
            }
        }
        Some(worst)
    } else {
        None
    };
    Ok(LocalityReport { grid, kernel })
}

/// Continuum version of the locality kernel for scalar S: for each node
/// configuration, `K + L` with
/// `K = ∫ φ(θ−iπ)ψ'(θ)Π S(θ−θ_l)` and `L = −∫ φ(θ)ψ'(θ+iπ)Π S(θ_l−θ)`
/// evaluated by the quadrature `quad`. Returns `(max |K+L|, max |K − ∫_{ℝ−iπ}H|)`
/// where `H(ζ) = φ(ζ)ψ'(ζ+iπ)Π S(θ_l − ζ)`; the second number checks the
/// contour-shift identity pointwise through crossing.
pub fn continuum_locality_residual(
    model: &SMatrixModel,
    phi_fn: &RapidityFunction,
    psi_fn: &RapidityFunction,
    configs: &[Vec<f64>],
    quad: &Quadrature,
) -> Result<(f64, f64)> {
    if !model.is_scalar() {
        return Err(Error::InvalidParameter(
            "continuum locality kernel needs scalar S".into(),
        ));
    }
    let s = |z: C64| model.eval_formula(z)[(0, 0)];
    let ipi = c(0.0, PI);
    let ev = |f: &RapidityFunction, z: C64| {
        f.eval(0, z)
            .ok_or_else(|| Error::ContinuationUnavailable(format!("{} at {z}", f.label)))
    };
    let (mut sum_res, mut shift_res): (f64, f64) = (0.0, 0.0);
    for cfg in configs {
        let mut k = c(0.0, 0.0);
        let mut l = c(0.0, 0.0);
        let mut h_shift = c(0.0, 0.0);
        for (&t, &w) in quad.nodes.iter().zip(&quad.weights) {
            let zt = c(t, 0.0);
            let prod_k: C64 = cfg.iter().map(|&tl| s(c(t - tl, 0.0))).product();
            let prod_l: C64 = cfg.iter().map(|&tl| s(c(tl - t, 0.0))).product();
            k += ev(phi_fn, zt - ipi)? * ev(psi_fn, zt)? * prod_k * w;
            l -= ev(phi_fn, zt)? * ev(psi_fn, zt + ipi)? * prod_l * w;
            let zs = zt - ipi;
            let prod_h: C64 = cfg.iter().map(|&tl| s(c(tl, 0.0) - zs)).product();
            h_shift += ev(phi_fn, zs)? * ev(psi_fn, zs + ipi)? * prod_h * w;
        }
        sum_res = sum_res.max((k + l).norm());
        shift_res = shift_res.max((k - h_shift).norm());
    }
    Ok((sum_res, shift_res))
}

/// `(achieved, target)`: rank of `{Φ(ξ_{i₁})⋯Φ(ξ_{i_k})Ω : k ≤ level}` and the
/// dimension of the S-symmetric space up to sector `level`.
pub fn cyclicity_rank(
    space: &FockSpace,
    family: &[RapidityFunction],
    level: usize,
) -> Result<(usize, usize)> {
    if level > space.n_max {
        return Err(Error::SectorTooLarge {
            n: level,
            cap: space.n_max,
        });
    }
    let fields: Vec<WedgeFieldOperator> = family
        .iter()
        .map(|x| phi(space, x))
        .collect::<Result<_>>()?;
    let mut layer = vec![space.vacuum()];
    let mut all = layer.clone();
    for _ in 0..level {
        let mut next = Vec::new();
        for v in &layer {
            for f in &fields {
                next.push(f.apply(space, v));
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    let len = space.total_len();
    let m = CMatrix::from_fn(len, all.len(), |r, k| all[k].flatten()[r]);
    let achieved = rank(&m, 1e-10);
    let target: f64 = (0..=level).map(|n| space.projector_trace(n)).sum();
    Ok((achieved, target.round() as usize))
}

/// Which asymptotic configuration a creation ordering describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Asymptotic {
    /// Rapidities ascending in creation order.
    Out,
    /// Rapidities descending in creation order.
    In,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringReport {
    pub theta_i: f64,
    pub theta_j: f64,
    /// Label of `z†(δ_i)z†(δ_j)Ω`.
    pub ordering: Asymptotic,
    /// `‖z†(δ_i)z†(δ_j)Ω − Σ S(θ_i−θ_j) z†(δ_j)z†(δ_i)Ω‖` relative to the norm.
    pub residual: f64,
    /// Measured scalar factor `⟨v_ji, v_ij⟩/‖v_ji‖²` (scalar S only).
    pub factor: Option<C64>,
    /// `S(θ_i − θ_j)` from the model (scalar S only).
    pub expected: Option<C64>,
}

/// Two-particle reordering `z†(δ_i)z†(δ_j)Ω` vs `z†(δ_j)z†(δ_i)Ω` at the grid nodes `i ≠ j`.
pub fn scattering_reorder(space: &FockSpace, i: usize, j: usize) -> Result<ScatteringReport> {
    if i == j {
        return Err(Error::CoincidingNodes(i, j));
    }
    if space.n_max < 2 {
        return Err(Error::SectorTooLarge {
            n: 2,
            cap: space.n_max,
        });
    }
    let d = space.dim();
    let omega = space.vacuum();
    let s = space.s_between(j, i);
    let mut residual: f64 = 0.0;
    for al in 0..d {
        for be in 0..d {
            let lhs = space.create(
                &space.grid.delta(i, al),
                &space.create(&space.grid.delta(j, be), &omega),
            );
            let mut rhs = space.zero();
            for ga in 0..d {
                for de in 0..d {
                    let v = space.create(
                        &space.grid.delta(j, ga),
                        &space.create(&space.grid.delta(i, de), &omega),
                    );
                    rhs.add_assign_scaled(&v, s[(ga * d + de, al * d + be)]);
                }
            }
            residual = residual.max(lhs.sub(&rhs).norm() / lhs.norm().max(1e-300));
        }
    }
    let (factor, expected) = if d == 1 {
        let vij = space.create(
            &space.grid.delta(i, 0),
            &space.create(&space.grid.delta(j, 0), &omega),
        );
        let vji = space.create(
            &space.grid.delta(j, 0),
            &space.create(&space.grid.delta(i, 0), &omega),
        );
        (Some(vji.inner(&vij) / vji.inner(&vji)), Some(s[(0, 0)]))
    } else {
        (None, None)
    };
    let (ti, tj) = (space.grid.nodes[i], space.grid.nodes[j]);
    Ok(ScatteringReport {
        theta_i: ti,
        theta_j: tj,
        ordering: if ti < tj {
            Asymptotic::Out
        } else {
            Asymptotic::In
        },
        residual,
        factor,
        expected,
    })
}

/// Symmetric Gaussian pair for locality tests: `φ ∈ K₁` centred at 0 and
/// `ψ' = Jχ ∈ K₁'` for a second `χ ∈ K₁`.
pub fn k1_pair(
    model: &SMatrixModel,
    a1: f64,
    a2: f64,
    theta0: f64,
) -> (RapidityFunction, RapidityFunction) {
    let spec = &model.spectrum;
    let d = model.dim();
    let coef1: Vec<C64> = (0..d).map(|k| c(1.0, 0.3 * k as f64)).collect();
    let coef2: Vec<C64> = (0..d).map(|k| c(0.7, -0.2 + 0.1 * k as f64)).collect();
    let phi = RapidityFunction::k1_gaussian(spec, coef1, a1, theta0);
    let chi = RapidityFunction::k1_gaussian(spec, coef2, a2, -theta0);
    (phi, chi.apply_j(spec))
}
