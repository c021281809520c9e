//! Commutators between the ZF operators and their reflected copies. For scalar
//! S the nonvanishing ones act diagonally in the tensor basis:
//!
//! * `[z'(a), z†(b)]` multiplies `Ψ_n(i₁..i_n)` by `K_n = Σ_j conj a_j b_j Π_l S(θ_j − θ_{i_l})`;
//! * `[z'†(a), z(b)]` multiplies it by `L_n = −Σ_j a_j conj b_j Π_l S(θ_{i_l} − θ_j)`.

use super::{FockOperator, FockSpace, FockVector};
use crate::error::{Error, Result};
use crate::C64;

fn scalar_only(space: &FockSpace) -> Result<()> {
    if space.model.is_scalar() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("scalar kernels need D = 1".into()))
    }
}

/// `K_n(i⃗)` for the node tuple `nodes`.
pub fn scalar_kernel_k(space: &FockSpace, a: &[C64], b: &[C64], nodes: &[usize]) -> Result<C64> {
    scalar_only(space)?;
    Ok((0..space.grid.m())
        .map(|j| {
            let prod: C64 = nodes
                .iter()
                .map(|&i| space.s_between(i, j)[(0, 0)])
                .product();
            a[j].conj() * b[j] * prod
        })
        .sum())
}

/// `L_n(i⃗)` for the node tuple `nodes`.
pub fn scalar_kernel_l(space: &FockSpace, a: &[C64], b: &[C64], nodes: &[usize]) -> Result<C64> {
    scalar_only(space)?;
    Ok(-(0..space.grid.m())
        .map(|j| {
            let prod: C64 = nodes
                .iter()
                .map(|&i| space.s_between(j, i)[(0, 0)])
                .product();
            a[j] * b[j].conj() * prod
        })
        .sum::<C64>())
}

/// Apply a diagonal kernel sector-wise.
pub fn apply_kernel<F>(space: &FockSpace, v: &FockVector, kernel: F) -> FockVector
where
    F: Fn(&[usize]) -> C64,
{
    let mut out = v.clone();
    for n in 0..=space.n_max {
        for (idx, z) in out.sectors[n].iter_mut().enumerate() {
            *z *= kernel(&space.decompose(n, idx));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCommutatorReport {
    /// `‖[z(a), z'(b)]‖` and `‖[z†(a), z'†(b)]‖` (both vanish).
    pub vanishing: f64,
    /// Deviation of `[z'(a), z†(b)]` from the `K` kernel (scalar S only).
    pub k_residual: Option<f64>,
    /// Deviation of `[z'†(a), z(b)]` from the `L` kernel (scalar S only).
    pub l_residual: Option<f64>,
}

/// Compare the four mixed commutators with their closed forms on the
/// sectors `n ≤ N_max − 1`, where truncation plays no role.
pub fn cross_commutators(space: &FockSpace, a: &[C64], b: &[C64]) -> Result<CrossCommutatorReport> {
    let level = space.n_max.saturating_sub(1);
    let basis = space.symmetric_basis(level)?;
    let pairs = [
        FockOperator::annihilate(a).commutator(&FockOperator::annihilate_reflected(b)),
        FockOperator::create(a).commutator(&FockOperator::create_reflected(b)),
    ];
    let mut vanishing: f64 = 0.0;
    for op in &pairs {
        let fro: f64 = basis
            .iter()
            .map(|v| op.apply(space, v).restricted(level).norm().powi(2))
            .sum();
        vanishing = vanishing.max(fro.sqrt());
    }
    let d = space.dim();
    let (mut k_res, mut l_res) = (None, None);
    if space.model.is_scalar() {
        let kop = FockOperator::annihilate_reflected(a).commutator(&FockOperator::create(b));
        let lop = FockOperator::create_reflected(a).commutator(&FockOperator::annihilate(b));
        let (mut kr, mut lr) = (0.0, 0.0);
        for v in &basis {
            let node_kernel = |slots: &[usize], f: &dyn Fn(&[usize]) -> C64| {
                let nodes: Vec<usize> = slots.iter().map(|s| s / d).collect();
                f(&nodes)
            };
            let kv = apply_kernel(space, v, |s| {
                node_kernel(s, &|n| scalar_kernel_k(space, a, b, n).unwrap())
            });
            let lv = apply_kernel(space, v, |s| {
                node_kernel(s, &|n| scalar_kernel_l(space, a, b, n).unwrap())
            });
            kr += kop
                .apply(space, v)
                .sub(&kv)
                .restricted(level)
                .norm()
                .powi(2);
            lr += lop
                .apply(space, v)
                .sub(&lv)
                .restricted(level)
                .norm()
                .powi(2);
        }
        k_res = Some(f64::sqrt(kr));
        l_res = Some(f64::sqrt(lr));
    }
    Ok(CrossCommutatorReport {
        vanishing,
        k_residual: k_res,
        l_residual: l_res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::GridSpec;
    use crate::linalg::c;
    use crate::quadrature::Quadrature;
    use crate::smatrix::SMatrixModel;

    #[test]
    fn kernels_match_commutators() {
        for model in [
            SMatrixModel::sinh_gordon(1.3, 1.0).unwrap(),
            SMatrixModel::ising(1.0),
            SMatrixModel::nc_exp(0.7, 1.0).unwrap(),
        ] {
            let q = Quadrature::uniform(4, 2.0);
            let s = FockSpace::new(model, GridSpec::from_quadrature(&q, 1).unwrap(), 3).unwrap();
            let a: Vec<C64> = (0..4)
                .map(|k| c(0.3 + k as f64 * 0.2, 0.5 - k as f64 * 0.3))
                .collect();
            let b: Vec<C64> = (0..4)
                .map(|k| c(-0.7 + k as f64 * 0.1, 0.2 * k as f64))
                .collect();
            let r = cross_commutators(&s, &a, &b).unwrap();
            assert!(r.vanishing < 1e-12, "{r:?}");
            assert!(r.k_residual.unwrap() < 1e-12, "{r:?}");
            assert!(r.l_residual.unwrap() < 1e-12, "{r:?}");
        }
    }
}
