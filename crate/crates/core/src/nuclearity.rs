//! The map `Ξ_S(s)A = Δ^{1/4}U_S(s)AΩ` on finite families of creation
//! monomials: sector-wise damping `Π e^{−m s cosh θ_k}` times the wave function
//! continued to `Im ζ = −π/2`, singular values and nuclear-norm scans.
//!
//! Here `U_S(s)` is the translation by the spacelike vector `(0, s)`.

use crate::error::{Error, Result};
use crate::fock::{FockOperator, FockSpace, FockVector};
use crate::linalg::{c, factorial, inv_sqrt_psd};
use crate::singleparticle::RapidityFunction;
use crate::{CMatrix, C64};
use std::f64::consts::PI;

/// `coef · z†(ξ₁)⋯z†(ξ_k)`; the empty product is the identity.
#[derive(Debug, Clone)]
pub struct CreationMonomial {
    pub coef: C64,
    pub args: Vec<RapidityFunction>,
}

impl CreationMonomial {
    pub fn identity() -> Self {
        CreationMonomial {
            coef: c(1.0, 0.0),
            args: Vec::new(),
        }
    }

    pub fn new(args: Vec<RapidityFunction>) -> Self {
        CreationMonomial {
            coef: c(1.0, 0.0),
            args,
        }
    }

    pub fn degree(&self) -> usize {
        self.args.len()
    }

    pub fn operator(&self, space: &FockSpace) -> Result<FockOperator> {
        let mut op = FockOperator::identity().scale(self.coef);
        for xi in &self.args {
            op = op.times(&FockOperator::create(&line_samples(space, xi, 0.0)?));
        }
        Ok(op)
    }

    /// `AΩ` on the grid.
    pub fn vacuum_image(&self, space: &FockSpace) -> Result<FockVector> {
        Ok(self.operator(space)?.apply(space, &space.vacuum()))
    }
}

/// `{1} ∪ {z†(ξ_i)} ∪ {z†(ξ_i)z†(ξ_j) : i ≤ j}` truncated at `degree`.
pub fn monomial_family(xis: &[RapidityFunction], degree: usize) -> Vec<CreationMonomial> {
    let mut out = vec![CreationMonomial::identity()];
    if degree >= 1 {
        out.extend(xis.iter().map(|x| CreationMonomial::new(vec![x.clone()])));
    }
    if degree >= 2 {
        for i in 0..xis.len() {
            for j in i..xis.len() {
                out.push(CreationMonomial::new(vec![xis[i].clone(), xis[j].clone()]));
            }
        }
    }
    out
}

fn line_samples(space: &FockSpace, xi: &RapidityFunction, im: f64) -> Result<Vec<C64>> {
    if xi.dim != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: xi.dim,
        });
    }
    xi.sample_line(&space.grid.quadrature(), im)
        .filter(|v| v.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
        .ok_or_else(|| Error::ContinuationUnavailable(format!("{} on Im ζ = {im}", xi.label)))
}

/// Multiply sector entries by `Π_l e^{−m_{α_l} s cosh θ_{i_l}}`.
fn damp(space: &FockSpace, s: f64, v: &mut FockVector) {
    let d = space.dim();
    for n in 1..=space.n_max {
        for (idx, z) in v.sectors[n].iter_mut().enumerate() {
            let f: f64 = space
                .decompose(n, idx)
                .iter()
                .map(|&sl| (-space.model.mass(sl % d) * s * space.grid.nodes[sl / d].cosh()).exp())
                .product();
            *z *= f;
        }
    }
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "splitting distance must be positive, got {s}"
        )))
    }
}

/// `Ξ_S(s)A` by building `AΩ` in the Fock space from the continued arguments
/// `ξ_k(· − iπ/2)` (all rapidities shift together, so the S-factors of the
/// symmetrization are unchanged) and damping each sector.
pub fn xi_apply(space: &FockSpace, s: f64, a: &CreationMonomial) -> Result<FockVector> {
    check_s(s)?;
    if a.degree() > space.n_max {
        return Err(Error::SectorTooLarge {
            n: a.degree(),
            cap: space.n_max,
        });
    }
    let mut v = space.vacuum().scale(a.coef);
    for xi in a.args.iter().rev() {
        v = space.create(&line_samples(space, xi, -PI / 2.0)?, &v);
    }
    damp(space, s, &mut v);
    Ok(v)
}

/// `Ξ_S(s)A` from the symmetrization formula
/// `(AΩ)_n(θ) = (√n!/n!) Σ_π S^π(θ) ξ₁(θ_{..})⋯ξ_n(θ_{..})`, each permutation's
/// factor assembled pointwise along its reduced word (scalar S only).
pub fn xi_apply_symbolic(space: &FockSpace, s: f64, a: &CreationMonomial) -> Result<FockVector> {
    check_s(s)?;
    if !space.model.is_scalar() {
        return Err(Error::InvalidParameter(
            "symbolic assembly implemented for scalar S".into(),
        ));
    }
    let n = a.degree();
    if n > space.n_max {
        return Err(Error::SectorTooLarge {
            n,
            cap: space.n_max,
        });
    }
    let shifted: Vec<Vec<C64>> = a
        .args
        .iter()
        .map(|x| line_samples(space, x, -PI / 2.0))
        .collect::<Result<_>>()?;
    let tree = space.perm_tree(n);
    let words: Vec<Vec<usize>> = (0..tree.len()).map(|k| tree.word(k)).collect();
    let nodes = &space.grid.nodes;
    let sval = |x: f64| space.model.eval_formula(c(x, 0.0))[(0, 0)];
    let mut out = space.zero();
    let norm = (factorial(n) as f64).sqrt() / factorial(n) as f64;
    for idx in 0..space.sector_len(n) {
        let slots = space.decompose(n, idx);
        let mut acc = c(0.0, 0.0);
        for w in &words {
            // (D(τ_{w_r})⋯D(τ_{w_1}) f)(i⃗): peel the outermost letter first.
            let mut cfg = slots.clone();
            let mut factor = c(1.0, 0.0);
            for &k in w.iter().rev() {
                factor *= sval(nodes[cfg[k + 1]] - nodes[cfg[k]]);
                cfg.swap(k, k + 1);
            }
            let prod: C64 = cfg
                .iter()
                .enumerate()
                .map(|(l, &node)| shifted[l][node])
                .product();
            acc += factor * prod;
        }
        out.sectors[n][idx] = acc * norm * a.coef;
    }
    damp(space, s, &mut out);
    Ok(out)
}

/// The assembled map on a family: columns `Ξ(s)A_k` and the Gram matrix
/// `⟨A_kΩ, A_lΩ⟩` of the family.
#[derive(Debug, Clone)]
pub struct XiMap {
    pub s: f64,
    pub columns: CMatrix,
    pub gram: CMatrix,
    /// Largest over smallest nonzero Gram eigenvalue.
    pub gram_condition: f64,
    /// Family directions dropped by the pseudo-inverse.
    pub dropped: usize,
    sector_offsets: Vec<usize>,
}

pub fn assemble(space: &FockSpace, s: f64, family: &[CreationMonomial]) -> Result<XiMap> {
    let len = space.total_len();
    let mut columns = CMatrix::zeros(len, family.len());
    let mut images = Vec::with_capacity(family.len());
    for (k, a) in family.iter().enumerate() {
        for (r, z) in xi_apply(space, s, a)?.flatten().into_iter().enumerate() {
            columns[(r, k)] = z;
        }
        images.push(a.vacuum_image(space)?);
    }
    let gram = CMatrix::from_fn(family.len(), family.len(), |i, j| {
        images[i].inner(&images[j])
    });
    let eig = gram.clone().symmetric_eigenvalues();
    let max = eig.iter().cloned().fold(0.0, f64::max);
    let min_nz = eig
        .iter()
        .cloned()
        .filter(|&e| e > 1e-12 * max)
        .fold(f64::INFINITY, f64::min);
    let (_, dropped) = inv_sqrt_psd(&gram, 1e-12);
    let sector_offsets = (0..=space.n_max + 1)
        .map(|n| space.sector_offset(n))
        .collect();
    Ok(XiMap {
        s,
        columns,
        gram,
        gram_condition: max / min_nz,
        dropped,
        sector_offsets,
    })
}

impl XiMap {
    /// `X G^{−1/2}`: the map from Gram-orthonormal family coordinates to Fock coordinates.
    pub fn normalized(&self) -> CMatrix {
        let (g, _) = inv_sqrt_psd(&self.gram, 1e-12);
        &self.columns * g
    }

    pub fn singular_values(&self) -> Vec<f64> {
        descending_singular_values(&self.normalized())
    }

    /// Rows of sector `n` of the normalized map.
    pub fn sector_block(&self, n: usize) -> CMatrix {
        let m = self.normalized();
        let (a, b) = (self.sector_offsets[n], self.sector_offsets[n + 1]);
        m.rows(a, b - a).into_owned()
    }
}

/// Singular values sorted descending. Strong damping produces entries whose
/// squares underflow inside the SVD (which then returns NaN), so the block is
/// scaled by its largest entry and entries below 1e-150 of it are dropped; the
/// singular values move by less than that relative amount.
fn descending_singular_values(m: &CMatrix) -> Vec<f64> {
    let k = m.nrows().min(m.ncols());
    let top = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return vec![0.0; k];
    }
    let m = m.map(|z| {
        if z.norm() < 1e-150 * top {
            c(0.0, 0.0)
        } else {
            z / top
        }
    });
    let mut sv: Vec<f64> = m.singular_values().iter().map(|v| v * top).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Singular values of `Ξ_S(s)` on the family, descending.
pub fn singular_values(space: &FockSpace, s: f64, family: &[CreationMonomial]) -> Result<Vec<f64>> {
    Ok(assemble(space, s, family)?.singular_values())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub s: f64,
    /// `Σ σ_i` of the whole map.
    pub total: f64,
    /// `Σ σ_i` of each sector block (`n = 0..=N_max`).
    pub per_sector: Vec<f64>,
    /// Operator norm of each sector block (measured stand-in for `C_n(s)`).
    pub sector_norms: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuclearScan {
    pub rows: Vec<ScanRow>,
    /// Totals non-increasing along increasing `s`.
    pub monotone: bool,
}

/// Truncated nuclear-norm estimates over an `s`-grid.
pub fn nuclear_norm_scan(
    space: &FockSpace,
    s_grid: &[f64],
    family: &[CreationMonomial],
) -> Result<NuclearScan> {
    let mut rows = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let map = assemble(space, s, family)?;
        let total = map.singular_values().iter().sum();
        let mut per_sector = Vec::new();
        let mut sector_norms = Vec::new();
        for n in 0..=space.n_max {
            let sv = descending_singular_values(&map.sector_block(n));
            per_sector.push(sv.iter().sum());
            sector_norms.push(sv.iter().cloned().fold(0.0, f64::max));
        }
        rows.push(ScanRow {
            s,
            total,
            per_sector,
            sector_norms,
        });
    }
    let mut order: Vec<&ScanRow> = rows.iter().collect();
    order.sort_by(|a, b| a.s.partial_cmp(&b.s).unwrap());
    let monotone = order
        .windows(2)
        .all(|w| w[1].total <= w[0].total * (1.0 + 1e-12));
    Ok(NuclearScan { rows, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::GridSpec;
    use crate::quadrature::Quadrature;
    use crate::smatrix::SMatrixModel;

    fn space(model: SMatrixModel) -> FockSpace {
        let q = Quadrature::uniform(5, 3.0);
        FockSpace::new(model, GridSpec::from_quadrature(&q, 1).unwrap(), 2).unwrap()
    }

    #[test]
    fn identity_maps_to_vacuum() {
        let s = space(SMatrixModel::ising(1.0));
        let v = xi_apply(&s, 1.0, &CreationMonomial::identity()).unwrap();
        assert_eq!(v, s.vacuum());
        let sv = singular_values(&s, 1.0, &[CreationMonomial::identity()]).unwrap();
        assert!((sv[0] - 1.0).abs() < 1e-14);
        assert!(xi_apply(&s, 0.0, &CreationMonomial::identity()).is_err());
    }

    #[test]
    fn one_particle_damping() {
        let s = space(SMatrixModel::free(1.0));
        let xi = RapidityFunction::gaussian(vec![c(1.0, 0.2)], 0.7, 0.1);
        let v = xi_apply(&s, 0.8, &CreationMonomial::new(vec![xi.clone()])).unwrap();
        for (i, &t) in s.grid.nodes.iter().enumerate() {
            let want = (-0.8 * t.cosh()).exp()
                * xi.eval(0, c(t, -PI / 2.0)).unwrap()
                * s.grid.weights[i].sqrt();
            assert!((v.sectors[1][i] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn two_routes_agree() {
        let s = space(SMatrixModel::sinh_gordon(1.0, 1.0).unwrap());
        let a = RapidityFunction::gaussian(vec![c(1.0, 0.2)], 0.7, 0.1);
        let b = RapidityFunction::gaussian(vec![c(0.3, -0.5)], 0.4, -0.6);
        let m = CreationMonomial::new(vec![a, b]);
        let r1 = xi_apply(&s, 0.5, &m).unwrap();
        let r2 = xi_apply_symbolic(&s, 0.5, &m).unwrap();
        assert!(r1.sub(&r2).norm() < 1e-12 * r1.norm());
    }
}
