//! Normal-ordered expansion `A = Σ_{m,n} ∫ F_{m,n} z†⋯z† z⋯z` of an operator on
//! the truncated S-symmetric space, computed block by block.
//!
//! The coefficient `F_{m,n}` is stored as a `(MD)^m × (MD)^n` matrix: the row
//! carries the creation indices `a₁..a_m`, the column the annihilation indices
//! in the order of the slots they contract (`z(c₁)⋯z(c_n)` contracts slot 1
//! with `c_n`).

use super::{FockOperator, FockSpace, FockVector};
use crate::error::{Error, Result};
use crate::linalg::{c, factorial, spectral_norm};
use crate::{CMatrix, C64};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct NormalOrderedExpansion {
    pub cutoff: usize,
    pub coefficients: BTreeMap<(usize, usize), CMatrix>,
    /// Max spectral-norm difference between `P_S A P_S` and the resummed
    /// expansion, over blocks `m, n ≤ min(cutoff, N_max − 1)`.
    pub roundtrip_residual: f64,
}

impl NormalOrderedExpansion {
    pub fn get(&self, m: usize, n: usize) -> Option<&CMatrix> {
        self.coefficients.get(&(m, n))
    }

    /// Apply `Σ_{m,n} T_{m,n}` to a vector (top-sector overflow dropped).
    pub fn apply(&self, space: &FockSpace, v: &FockVector) -> FockVector {
        let mut out = space.zero();
        for (&(m, n), f) in &self.coefficients {
            for q in n..=space.n_max {
                let r = q - n;
                if r + m > space.n_max {
                    continue;
                }
                let y = t_apply(space, f, m, n, q, &v.sectors[q]);
                for (o, z) in out.sectors[r + m].iter_mut().zip(y) {
                    *o += z;
                }
            }
        }
        out
    }
}

/// `T_{m,n}Ψ_q = √(q!/r!) √((r+m)!/r!) P_S[(F̃ ⊗ 1)Ψ_q]` with `r = q − n`.
pub fn t_apply(
    space: &FockSpace,
    f: &CMatrix,
    m: usize,
    n: usize,
    q: usize,
    psi: &[C64],
) -> Vec<C64> {
    let b = space.md();
    let r = q - n;
    let inner = b.pow(r as u32);
    let rows = b.pow(m as u32);
    let cols = b.pow(n as u32);
    let mut out = vec![c(0.0, 0.0); rows * inner];
    for a in 0..rows {
        for k in 0..cols {
            let coef = f[(a, k)];
            if coef == c(0.0, 0.0) {
                continue;
            }
            for s in 0..inner {
                out[a * inner + s] += coef * psi[k * inner + s];
            }
        }
    }
    let fac = (factorial(q) as f64 / factorial(r) as f64).sqrt()
        * (factorial(r + m) as f64 / factorial(r) as f64).sqrt();
    out.iter_mut().for_each(|z| *z *= fac);
    space.project_sector(r + m, &out)
}

/// `P_S A P_S` from sector `n` to sector `m` as a dense block.
fn block(space: &FockSpace, op: &FockOperator, m: usize, n: usize) -> CMatrix {
    let cols = space.sector_len(n);
    let mut out = CMatrix::zeros(space.sector_len(m), cols);
    for k in 0..cols {
        let mut e = space.zero();
        e.sectors[n][k] = c(1.0, 0.0);
        let y = space.project(&op.apply(space, &space.project(&e)));
        for (r, z) in y.sectors[m].iter().enumerate() {
            out[(r, k)] = *z;
        }
    }
    out
}

/// `Σ_{k ≥ 1} T_{m−k,n−k}` restricted to sector `n → m`.
fn lower_contributions(
    space: &FockSpace,
    coeffs: &BTreeMap<(usize, usize), CMatrix>,
    m: usize,
    n: usize,
) -> CMatrix {
    let cols = space.sector_len(n);
    let mut out = CMatrix::zeros(space.sector_len(m), cols);
    for k in 1..=m.min(n) {
        let Some(f) = coeffs.get(&(m - k, n - k)) else {
            continue;
        };
        for col in 0..cols {
            let mut e = vec![c(0.0, 0.0); cols];
            e[col] = c(1.0, 0.0);
            let e = space.project_sector(n, &e);
            let y = t_apply(space, f, m - k, n - k, n, &e);
            for (r, z) in y.into_iter().enumerate() {
                out[(r, col)] += z;
            }
        }
    }
    out
}

/// Expansion coefficients `F_{m,n}` for all `m, n ≤ cutoff`, obtained by
/// peeling off lower-order contributions in increasing `m + n`.
pub fn normal_ordered_expansion(
    space: &FockSpace,
    op: &FockOperator,
    cutoff: usize,
) -> Result<NormalOrderedExpansion> {
    if cutoff > space.n_max {
        return Err(Error::CutoffTooLarge {
            cutoff,
            n_max: space.n_max,
        });
    }
    let mut coeffs = BTreeMap::new();
    let mut order: Vec<(usize, usize)> = (0..=cutoff)
        .flat_map(|m| (0..=cutoff).map(move |n| (m, n)))
        .collect();
    order.sort_by_key(|&(m, n)| (m + n, m));
    let mut blocks = BTreeMap::new();
    for &(m, n) in &order {
        let a = block(space, op, m, n);
        let r = &a - lower_contributions(space, &coeffs, m, n);
        let f = r / c(((factorial(m) * factorial(n)) as f64).sqrt(), 0.0);
        coeffs.insert((m, n), f);
        blocks.insert((m, n), a);
    }
    let level = cutoff.min(space.n_max.saturating_sub(1));
    let mut resid: f64 = 0.0;
    for (&(m, n), a) in &blocks {
        if m > level || n > level {
            continue;
        }
        let mut rebuilt = lower_contributions(space, &coeffs, m, n);
        let f = &coeffs[&(m, n)];
        for col in 0..space.sector_len(n) {
            let mut e = vec![c(0.0, 0.0); space.sector_len(n)];
            e[col] = c(1.0, 0.0);
            let e = space.project_sector(n, &e);
            let y = t_apply(space, f, m, n, n, &e);
            for (r, z) in y.into_iter().enumerate() {
                rebuilt[(r, col)] += z;
            }
        }
        resid = resid.max(spectral_norm(&(a - rebuilt)));
    }
    Ok(NormalOrderedExpansion {
        cutoff,
        coefficients: coeffs,
        roundtrip_residual: resid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::GridSpec;
    use crate::quadrature::Quadrature;
    use crate::smatrix::SMatrixModel;

    fn space() -> FockSpace {
        let q = Quadrature::uniform(3, 1.5);
        FockSpace::new(
            SMatrixModel::sinh_gordon(1.0, 1.0).unwrap(),
            GridSpec::from_quadrature(&q, 1).unwrap(),
            3,
        )
        .unwrap()
    }

    #[test]
    fn single_creation_has_one_coefficient() {
        let s = space();
        let phi: Vec<C64> = vec![c(0.5, 0.1), c(-0.3, 0.7), c(1.0, 0.0)];
        let e = normal_ordered_expansion(&s, &FockOperator::create(&phi), 2).unwrap();
        let f10 = e.get(1, 0).unwrap();
        for k in 0..3 {
            assert!((f10[(k, 0)] - phi[k]).norm() < 1e-13);
        }
        for (&(m, n), f) in &e.coefficients {
            if (m, n) != (1, 0) {
                assert!(spectral_norm(f) < 1e-12, "F_{m},{n} = {}", spectral_norm(f));
            }
        }
        assert!(e.roundtrip_residual < 1e-12);
    }

    #[test]
    fn product_is_reordered() {
        // z(a) z†(b) = ⟨a,b⟩ + Σ S z† z: the (0,0) coefficient is ⟨a,b⟩.
        let s = space();
        let a: Vec<C64> = vec![c(0.5, 0.1), c(-0.3, 0.7), c(1.0, 0.0)];
        let b: Vec<C64> = vec![c(0.2, -0.4), c(0.9, 0.1), c(0.0, 0.3)];
        let op = FockOperator::annihilate(&a).times(&FockOperator::create(&b));
        let e = normal_ordered_expansion(&s, &op, 2).unwrap();
        let want: C64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
        assert!((e.get(0, 0).unwrap()[(0, 0)] - want).norm() < 1e-13);
        assert!(spectral_norm(e.get(1, 1).unwrap()) > 1e-3);
        assert!(normal_ordered_expansion(&s, &op, 4).is_err());
    }
}
