//! The S-symmetric Fock space on a rapidity grid with particle-number cutoff.
//!
//! One-particle vectors live in `C^{M·D}` in orthonormal coordinates
//! `c_{(j,α)} = √w_j ψ^α(θ_j)`, index `j·D + α`. The n-particle sector is the
//! n-fold tensor power, stored row-major with slot 1 most significant.

mod expansion;
mod export;
mod kernels;
mod ops;
mod perm;
mod zf;

pub use expansion::{normal_ordered_expansion, NormalOrderedExpansion};
pub use export::{read_dense_binary, write_dense_binary, write_dense_csv};
pub use kernels::{
    apply_kernel, cross_commutators, scalar_kernel_k, scalar_kernel_l, CrossCommutatorReport,
};
pub use ops::{FockOperator, Op};
pub use perm::{coxeter_equivalent_word, word_permutation, PermTree};
pub use zf::{
    ccr_car_oracle_residual, number_bound_check, zf_residuals, NumberBoundReport, OccupationOracle,
    ZfReport,
};

use crate::error::{Error, Result};
use crate::linalg::{c, identity, kron, spectral_norm};
use crate::quadrature::Quadrature;
use crate::singleparticle::RapidityFunction;
use crate::smatrix::SMatrixModel;
use crate::{CMatrix, C64};
use std::collections::BTreeMap;

/// Hard cap on the particle number for which `P_S` is assembled.
pub const MAX_SECTOR: usize = 6;

/// Rapidity nodes, positive weights and internal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub dim: usize,
}

impl GridSpec {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, dim: usize) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: nodes.len(),
                got: weights.len(),
            });
        }
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "internal dimension must be positive".into(),
            ));
        }
        for w in nodes.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParameter(
                    "grid nodes must be strictly increasing".into(),
                ));
            }
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidParameter(
                "quadrature weights must be positive".into(),
            ));
        }
        Ok(GridSpec {
            nodes,
            weights,
            dim,
        })
    }

    pub fn from_quadrature(q: &Quadrature, dim: usize) -> Result<Self> {
        Self::new(q.nodes.clone(), q.weights.clone(), dim)
    }

    pub fn m(&self) -> usize {
        self.nodes.len()
    }

    /// One-particle dimension `M·D`.
    pub fn md(&self) -> usize {
        self.m() * self.dim
    }

    pub fn quadrature(&self) -> Quadrature {
        Quadrature {
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
        }
    }

    /// Orthonormal grid coordinates of a closed-form function.
    pub fn sample(&self, f: &RapidityFunction) -> Vec<C64> {
        assert_eq!(
            f.dim, self.dim,
            "component count must match the internal dimension"
        );
        f.sample(&self.quadrature())
    }

    /// Unit vector `e_{(i,α)}`.
    pub fn unit(&self, i: usize, alpha: usize) -> Vec<C64> {
        let mut v = vec![c(0.0, 0.0); self.md()];
        v[i * self.dim + alpha] = c(1.0, 0.0);
        v
    }

    /// Discrete delta `δ_{(i,α)}`: the function `1/w_i` at node `i`, i.e. `e_{(i,α)}/√w_i`.
    pub fn delta(&self, i: usize, alpha: usize) -> Vec<C64> {
        let mut v = self.unit(i, alpha);
        v[i * self.dim + alpha] = c(1.0 / self.weights[i].sqrt(), 0.0);
        v
    }
}

/// A vector of the truncated (unsymmetrized) Fock space `⊕_{n ≤ N_max} (C^{MD})^{⊗n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub sectors: Vec<Vec<C64>>,
}

impl FockVector {
    pub fn zeros(md: usize, n_max: usize) -> Self {
        FockVector {
            sectors: (0..=n_max)
                .map(|n| vec![c(0.0, 0.0); md.pow(n as u32)])
                .collect(),
        }
    }

    pub fn n_max(&self) -> usize {
        self.sectors.len() - 1
    }

    pub fn md(&self) -> usize {
        if self.sectors.len() > 1 {
            self.sectors[1].len()
        } else {
            0
        }
    }

    pub fn norm(&self) -> f64 {
        self.sectors
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn inner(&self, other: &FockVector) -> C64 {
        self.sectors
            .iter()
            .zip(&other.sectors)
            .flat_map(|(a, b)| a.iter().zip(b))
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    pub fn scale(&self, k: C64) -> FockVector {
        FockVector {
            sectors: self
                .sectors
                .iter()
                .map(|s| s.iter().map(|z| z * k).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        FockVector {
            sectors: self
                .sectors
                .iter()
                .zip(&other.sectors)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        self.add(&other.scale(c(-1.0, 0.0)))
    }

    pub fn add_assign_scaled(&mut self, other: &FockVector, k: C64) {
        for (a, b) in self.sectors.iter_mut().zip(&other.sectors) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y * k;
            }
        }
    }

    /// Keep only sectors `n ≤ level` (others set to zero).
    pub fn restricted(&self, level: usize) -> FockVector {
        let mut v = self.clone();
        for (n, s) in v.sectors.iter_mut().enumerate() {
            if n > level {
                s.iter_mut().for_each(|z| *z = c(0.0, 0.0));
            }
        }
        v
    }

    pub fn flatten(&self) -> Vec<C64> {
        self.sectors.iter().flatten().cloned().collect()
    }

    pub fn from_flat(md: usize, n_max: usize, data: &[C64]) -> Self {
        let mut v = Self::zeros(md, n_max);
        let mut off = 0;
        for s in v.sectors.iter_mut() {
            let len = s.len();
            s.copy_from_slice(&data[off..off + len]);
            off += len;
        }
        v
    }

    pub fn sector_norm(&self, n: usize) -> f64 {
        self.sectors[n]
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Truncated S-symmetric Fock space: model, grid, cutoff and cached S-matrices
/// at all node differences.
#[derive(Debug, Clone)]
pub struct FockSpace {
    pub model: SMatrixModel,
    pub grid: GridSpec,
    pub n_max: usize,
    /// `smat[i·M + j] = S(θ_j − θ_i)`.
    smat: Vec<CMatrix>,
    trees: Vec<PermTree>,
    pub yang_baxter_residual: f64,
    pub unitarity_residual: f64,
    pub representation_ok: bool,
}

/// Tolerance on the grid Yang–Baxter and unitarity residuals for `D_n` to be accepted as a representation.
pub const REPRESENTATION_TOL: f64 = 1e-9;

impl FockSpace {
    /// Build the space, refusing S-matrices whose grid residuals break the
    /// representation property of `D_n`.
    pub fn new(model: SMatrixModel, grid: GridSpec, n_max: usize) -> Result<Self> {
        let space = Self::new_unchecked(model, grid, n_max)?;
        if !space.representation_ok {
            return Err(Error::NotRepresentation {
                residual: space.yang_baxter_residual.max(space.unitarity_residual),
                tolerance: REPRESENTATION_TOL,
            });
        }
        Ok(space)
    }

    /// Build the space without refusing a broken S (for negative controls on `D_n`).
    pub fn new_unchecked(model: SMatrixModel, grid: GridSpec, n_max: usize) -> Result<Self> {
        if grid.dim != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                got: grid.dim,
            });
        }
        if n_max > MAX_SECTOR {
            return Err(Error::SectorTooLarge {
                n: n_max,
                cap: MAX_SECTOR,
            });
        }
        let m = grid.m();
        let mut smat = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                smat.push(model.at(grid.nodes[j] - grid.nodes[i]));
            }
        }
        let d = model.dim();
        let one = identity(d * d);
        let mut unit: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                let s = &smat[i * m + j];
                unit = unit.max(spectral_norm(&(s.adjoint() * s - &one)));
                unit = unit.max(spectral_norm(&(s * &smat[j * m + i] - &one)));
            }
        }
        let mut yb: f64 = 0.0;
        if d > 1 {
            // Node triples (a, b, c): the braid relation on three slots uses
            // S(θ_b−θ_a), S(θ_c−θ_a), S(θ_c−θ_b).
            let step = (m / 6).max(1);
            let one_d = identity(d);
            for a in (0..m).step_by(step) {
                for b in (0..m).step_by(step) {
                    for cc in (0..m).step_by(step) {
                        let s1 = &smat[a * m + b];
                        let s2 = &smat[a * m + cc];
                        let s3 = &smat[b * m + cc];
                        let lhs = kron(s1, &one_d) * kron(&one_d, s2) * kron(s3, &one_d);
                        let rhs = kron(&one_d, s3) * kron(s2, &one_d) * kron(&one_d, s1);
                        yb = yb.max(spectral_norm(&(lhs - rhs)));
                    }
                }
            }
        }
        let trees = (0..=n_max).map(PermTree::new).collect();
        Ok(FockSpace {
            representation_ok: yb <= REPRESENTATION_TOL && unit <= REPRESENTATION_TOL,
            model,
            grid,
            n_max,
            smat,
            trees,
            yang_baxter_residual: yb,
            unitarity_residual: unit,
        })
    }

    pub fn md(&self) -> usize {
        self.grid.md()
    }

    pub fn dim(&self) -> usize {
        self.grid.dim
    }

    pub fn sector_len(&self, n: usize) -> usize {
        self.md().pow(n as u32)
    }

    /// Dimension of the full truncated tensor space.
    pub fn total_len(&self) -> usize {
        (0..=self.n_max).map(|n| self.sector_len(n)).sum()
    }

    pub fn sector_offset(&self, n: usize) -> usize {
        (0..n).map(|k| self.sector_len(k)).sum()
    }

    /// `S(θ_j − θ_i)`.
    pub fn s_between(&self, i: usize, j: usize) -> &CMatrix {
        &self.smat[i * self.grid.m() + j]
    }

    pub fn zero(&self) -> FockVector {
        FockVector::zeros(self.md(), self.n_max)
    }

    pub fn vacuum(&self) -> FockVector {
        let mut v = self.zero();
        v.sectors[0][0] = c(1.0, 0.0);
        v
    }

    pub fn one_particle(&self, phi: &[C64]) -> FockVector {
        let mut v = self.zero();
        if self.n_max >= 1 {
            v.sectors[1].copy_from_slice(phi);
        }
        v
    }

    /// Basis vector `k` of the flattened truncated space.
    pub fn basis_vector(&self, k: usize) -> FockVector {
        let mut flat = vec![c(0.0, 0.0); self.total_len()];
        flat[k] = c(1.0, 0.0);
        FockVector::from_flat(self.md(), self.n_max, &flat)
    }

    /// Slot values (node·D + α) of a sector index, slot 1 first.
    pub fn decompose(&self, n: usize, mut idx: usize) -> Vec<usize> {
        let b = self.md();
        let mut out = vec![0; n];
        for l in (0..n).rev() {
            out[l] = idx % b;
            idx /= b;
        }
        out
    }

    pub fn compose_index(&self, slots: &[usize]) -> usize {
        let b = self.md();
        slots.iter().fold(0, |acc, &s| acc * b + s)
    }

    /// `D_n(τ_k)` on a sector-n tensor, `k` 0-based (exchanges slots k and k+1):
    /// `(D_n(τ_k)Ψ)(.., θ_i, θ_j, ..) = S(θ_j − θ_i)_{k,k+1} Ψ(.., θ_j, θ_i, ..)`.
    pub fn apply_transposition(&self, n: usize, k: usize, v: &[C64]) -> Vec<C64> {
        assert!(k + 1 < n, "transposition index out of range");
        let b = self.md();
        let d = self.dim();
        let m = self.grid.m();
        let outer = b.pow(k as u32);
        let inner = b.pow((n - k - 2) as u32);
        let mut out = vec![c(0.0, 0.0); v.len()];
        for o in 0..outer {
            for i in 0..m {
                for j in 0..m {
                    let s = &self.smat[i * m + j];
                    for al in 0..d {
                        for be in 0..d {
                            let row = al * d + be;
                            let dst = ((o * b + i * d + al) * b + j * d + be) * inner;
                            for ga in 0..d {
                                for de in 0..d {
                                    let coef = s[(row, ga * d + de)];
                                    if coef == c(0.0, 0.0) {
                                        continue;
                                    }
                                    let src = ((o * b + j * d + ga) * b + i * d + de) * inner;
                                    for r in 0..inner {
                                        out[dst + r] += coef * v[src + r];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Apply `D(τ_{w_r})⋯D(τ_{w_1})`, i.e. `word[0]` acts first.
    pub fn apply_word(&self, n: usize, word: &[usize], v: &[C64]) -> Vec<C64> {
        let mut x = v.to_vec();
        for &k in word {
            x = self.apply_transposition(n, k, &x);
        }
        x
    }

    /// `P_S = (1/n!) Σ_π D_n(π)` on a sector-n tensor, evaluated along the
    /// reduced-word tree of `S_n`.
    pub fn project_sector(&self, n: usize, v: &[C64]) -> Vec<C64> {
        if n < 2 {
            return v.to_vec();
        }
        let tree = &self.trees[n];
        let mut acc = vec![c(0.0, 0.0); v.len()];
        let mut stack: Vec<(usize, Vec<C64>)> = vec![(0, v.to_vec())];
        while let Some((node, x)) = stack.pop() {
            for (a, b) in acc.iter_mut().zip(&x) {
                *a += b;
            }
            for &child in &tree.children[node] {
                let y = self.apply_transposition(n, tree.generator[child], &x);
                stack.push((child, y));
            }
        }
        let f = 1.0 / tree.len() as f64;
        acc.iter_mut().for_each(|z| *z *= f);
        acc
    }

    /// `P_S` on every sector.
    pub fn project(&self, v: &FockVector) -> FockVector {
        let sectors = v
            .sectors
            .iter()
            .enumerate()
            .map(|(n, s)| {
                if s.iter().all(|z| *z == C64::new(0.0, 0.0)) {
                    s.clone()
                } else {
                    self.project_sector(n, s)
                }
            })
            .collect();
        FockVector { sectors }
    }

    /// `P_S` on sector `n` as a dense matrix; refuses when `D_n` is not a representation.
    pub fn projector_ps(&self, n: usize) -> Result<CMatrix> {
        if !self.representation_ok {
            return Err(Error::NotRepresentation {
                residual: self.yang_baxter_residual.max(self.unitarity_residual),
                tolerance: REPRESENTATION_TOL,
            });
        }
        if n > self.n_max {
            return Err(Error::SectorTooLarge { n, cap: self.n_max });
        }
        let len = self.sector_len(n);
        let mut p = CMatrix::zeros(len, len);
        for k in 0..len {
            let mut e = vec![c(0.0, 0.0); len];
            e[k] = c(1.0, 0.0);
            let col = self.project_sector(n, &e);
            for (r, z) in col.into_iter().enumerate() {
                p[(r, k)] = z;
            }
        }
        Ok(p)
    }

    /// Sparse `D_n(τ_k)` on a sparse tensor.
    fn transposition_sparse(
        &self,
        n: usize,
        k: usize,
        v: &BTreeMap<usize, C64>,
    ) -> BTreeMap<usize, C64> {
        let d = self.dim();
        let m = self.grid.m();
        let mut out = BTreeMap::new();
        for (&idx, &val) in v {
            let mut slots = self.decompose(n, idx);
            let (sj, si) = (slots[k], slots[k + 1]);
            let (j, ga) = (sj / d, sj % d);
            let (i, de) = (si / d, si % d);
            let s = &self.smat[i * m + j];
            for al in 0..d {
                for be in 0..d {
                    let coef = s[(al * d + be, ga * d + de)];
                    if coef == c(0.0, 0.0) {
                        continue;
                    }
                    slots[k] = i * d + al;
                    slots[k + 1] = j * d + be;
                    *out.entry(self.compose_index(&slots)).or_insert(c(0.0, 0.0)) += coef * val;
                }
            }
        }
        out.retain(|_, z| z.norm() > 0.0);
        out
    }

    /// `tr P_S` on sector n (equals the rank for a projector), via sparse
    /// application of every `D_n(π)` to every basis vector.
    pub fn projector_trace(&self, n: usize) -> f64 {
        if n < 2 {
            return self.sector_len(n) as f64;
        }
        let tree = &self.trees[n];
        let len = self.sector_len(n);
        let mut total = c(0.0, 0.0);
        for k in 0..len {
            let mut start = BTreeMap::new();
            start.insert(k, c(1.0, 0.0));
            let mut stack = vec![(0usize, start)];
            while let Some((node, x)) = stack.pop() {
                if let Some(z) = x.get(&k) {
                    total += z;
                }
                for &child in &tree.children[node] {
                    stack.push((
                        child,
                        self.transposition_sparse(n, tree.generator[child], &x),
                    ));
                }
            }
        }
        total.re / tree.len() as f64
    }

    /// `max_k ‖D_n(τ_k)Ψ_n − Ψ_n‖` over all sectors.
    pub fn s_symmetry_residual(&self, v: &FockVector) -> f64 {
        let mut r: f64 = 0.0;
        for (n, s) in v.sectors.iter().enumerate() {
            for k in 0..n.saturating_sub(1) {
                let t = self.apply_transposition(n, k, s);
                let diff: f64 = t
                    .iter()
                    .zip(s)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                r = r.max(diff);
            }
        }
        r
    }

    pub fn perm_tree(&self, n: usize) -> &PermTree {
        &self.trees[n]
    }

    /// `J` on one-particle grid vectors: `(Jφ)_{(i,α)} = conj φ_{(i,ᾱ)}`.
    pub fn j_one(&self, phi: &[C64]) -> Vec<C64> {
        let d = self.dim();
        let conj = &self.model.spectrum.conjugation;
        (0..phi.len())
            .map(|k| phi[(k / d) * d + conj[k % d]].conj())
            .collect()
    }

    /// `(JΨ)_n^{α₁..α_n}(θ₁..θ_n) = conj Ψ_n^{ᾱ_n..ᾱ₁}(θ_n..θ₁)`.
    pub fn apply_j(&self, v: &FockVector) -> FockVector {
        let d = self.dim();
        let conj = &self.model.spectrum.conjugation;
        let mut out = self.zero();
        for n in 0..=self.n_max {
            for idx in 0..self.sector_len(n) {
                let slots = self.decompose(n, idx);
                let src: Vec<usize> = slots
                    .iter()
                    .rev()
                    .map(|&s| (s / d) * d + conj[s % d])
                    .collect();
                out.sectors[n][idx] = v.sectors[n][self.compose_index(&src)].conj();
            }
        }
        out
    }

    /// Sector-wise `√n` factor helper.
    fn sqrt_usize(n: usize) -> f64 {
        (n as f64).sqrt()
    }

    /// Unsymmetrized `a†(φ)`: `√(n+1) φ⊗Ψ_n`; the top sector is dropped.
    pub fn raw_create(&self, phi: &[C64], v: &FockVector) -> FockVector {
        let mut out = self.zero();
        for n in 0..self.n_max {
            let f = Self::sqrt_usize(n + 1);
            let src = &v.sectors[n];
            let len = src.len();
            let dst = &mut out.sectors[n + 1];
            for (a, pa) in phi.iter().enumerate() {
                if *pa == c(0.0, 0.0) {
                    continue;
                }
                let k = pa * f;
                for r in 0..len {
                    dst[a * len + r] = k * src[r];
                }
            }
        }
        out
    }

    /// Unsymmetrized `a(φ)`: `√n Σ_a conj φ_a Ψ_n(a, ·)`.
    pub fn raw_annihilate(&self, phi: &[C64], v: &FockVector) -> FockVector {
        let mut out = self.zero();
        for n in 1..=self.n_max {
            let f = Self::sqrt_usize(n);
            let len = self.sector_len(n - 1);
            let src = &v.sectors[n];
            let dst = &mut out.sectors[n - 1];
            for (a, pa) in phi.iter().enumerate() {
                if *pa == c(0.0, 0.0) {
                    continue;
                }
                let k = pa.conj() * f;
                for r in 0..len {
                    dst[r] += k * src[a * len + r];
                }
            }
        }
        out
    }

    /// `z†(φ) = P_S a†(φ) P_S`.
    pub fn create(&self, phi: &[C64], v: &FockVector) -> FockVector {
        self.project(&self.raw_create(phi, &self.project(v)))
    }

    /// `z(φ) = P_S a(φ) P_S`.
    pub fn annihilate(&self, phi: &[C64], v: &FockVector) -> FockVector {
        self.project(&self.raw_annihilate(phi, &self.project(v)))
    }

    /// `z†(φ)' = J z†(Jφ) J`.
    pub fn create_reflected(&self, phi: &[C64], v: &FockVector) -> FockVector {
        self.apply_j(&self.create(&self.j_one(phi), &self.apply_j(v)))
    }

    /// `z(φ)' = J z(Jφ) J`.
    pub fn annihilate_reflected(&self, phi: &[C64], v: &FockVector) -> FockVector {
        self.apply_j(&self.annihilate(&self.j_one(phi), &self.apply_j(v)))
    }

    pub fn number(&self, v: &FockVector) -> FockVector {
        FockVector {
            sectors: v
                .sectors
                .iter()
                .enumerate()
                .map(|(n, s)| s.iter().map(|z| z * n as f64).collect())
                .collect(),
        }
    }

    /// Energy-momentum phase `Σ_l p_{α_l}(θ_{i_l})·x` of a sector index.
    fn momentum_phase(&self, n: usize, idx: usize, x: [f64; 2]) -> f64 {
        let d = self.dim();
        self.decompose(n, idx)
            .iter()
            .map(|&s| {
                let (i, a) = (s / d, s % d);
                let m = self.model.mass(a);
                let t = self.grid.nodes[i];
                m * (t.cosh() * x[0] - t.sinh() * x[1])
            })
            .sum()
    }

    /// `U_S(x, λ)`. On the grid only `λ = 0` is available.
    pub fn translate(&self, x: [f64; 2], lambda: f64, v: &FockVector) -> Result<FockVector> {
        if lambda != 0.0 {
            return Err(Error::GridIncompatibleBoost(lambda));
        }
        let mut out = v.clone();
        for n in 1..=self.n_max {
            for (idx, z) in out.sectors[n].iter_mut().enumerate() {
                *z *= C64::from_polar(1.0, self.momentum_phase(n, idx, x));
            }
        }
        Ok(out)
    }

    /// `U₁(x)` on a one-particle grid vector.
    pub fn translate_one(&self, x: [f64; 2], phi: &[C64]) -> Vec<C64> {
        phi.iter()
            .enumerate()
            .map(|(k, z)| z * C64::from_polar(1.0, self.momentum_phase(1, k, x)))
            .collect()
    }

    /// `V_S(g) = g^{⊗n}` on each sector.
    pub fn gauge(&self, g: &CMatrix, v: &FockVector) -> FockVector {
        let d = self.dim();
        let b = self.md();
        let mut out = v.clone();
        for n in 1..=self.n_max {
            for slot in 0..n {
                let outer = b.pow(slot as u32);
                let inner = b.pow((n - slot - 1) as u32);
                let cur = out.sectors[n].clone();
                let dst = &mut out.sectors[n];
                dst.iter_mut().for_each(|z| *z = c(0.0, 0.0));
                for o in 0..outer {
                    for i in 0..self.grid.m() {
                        for a in 0..d {
                            for bb in 0..d {
                                let coef = g[(a, bb)];
                                if coef == c(0.0, 0.0) {
                                    continue;
                                }
                                let di = (o * b + i * d + a) * inner;
                                let si = (o * b + i * d + bb) * inner;
                                for r in 0..inner {
                                    dst[di + r] += coef * cur[si + r];
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// `V₁(g)` on a one-particle grid vector.
    pub fn gauge_one(&self, g: &CMatrix, phi: &[C64]) -> Vec<C64> {
        let d = self.dim();
        let mut out = vec![c(0.0, 0.0); phi.len()];
        for i in 0..self.grid.m() {
            for a in 0..d {
                for b in 0..d {
                    out[i * d + a] += g[(a, b)] * phi[i * d + b];
                }
            }
        }
        out
    }

    /// Random vector in the range of `P_S`.
    pub fn random_symmetric<R: rand::Rng>(&self, rng: &mut R) -> FockVector {
        let mut v = self.zero();
        for s in v.sectors.iter_mut() {
            for z in s.iter_mut() {
                *z = c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            }
        }
        self.project(&v)
    }

    /// Orthonormal basis of the range of `P_S` on sector `n`.
    pub fn sector_onb(&self, n: usize) -> Result<Vec<Vec<C64>>> {
        let p = self.projector_ps(n)?;
        let eig = ((&p + p.adjoint()) * c(0.5, 0.0)).symmetric_eigen();
        Ok((0..p.nrows())
            .filter(|&k| eig.eigenvalues[k] > 0.5)
            .map(|k| eig.eigenvectors.column(k).iter().cloned().collect())
            .collect())
    }

    /// Orthonormal basis of the range of `P_S` on sectors `≤ level`.
    /// Frobenius norms of `A P_S` can be summed over it instead of over `P_S e_k`.
    pub fn symmetric_basis(&self, level: usize) -> Result<Vec<FockVector>> {
        let mut out = Vec::new();
        for n in 0..=level.min(self.n_max) {
            for u in self.sector_onb(n)? {
                let mut v = self.zero();
                v.sectors[n] = u;
                out.push(v);
            }
        }
        Ok(out)
    }
}
