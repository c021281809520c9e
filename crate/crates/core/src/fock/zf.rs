//! Zamolodchikov–Faddeev exchange relations on the grid, an independent
//! occupation-number oracle for S = ±1, and number-operator bounds.

use super::{FockSpace, FockVector};
use crate::error::{Error, Result};
use crate::linalg::{c, factorial};
use crate::smatrix::flip;
use crate::{CMatrix, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZfReport {
    /// `z z − S z z`
    pub annihilation: f64,
    /// `z† z† − S z† z†`
    pub creation: f64,
    /// `z z† − S z† z − 1`
    pub mixed: f64,
}

impl ZfReport {
    pub fn max(&self) -> f64 {
        self.annihilation.max(self.creation).max(self.mixed)
    }
}

fn refuse_unless_representation(space: &FockSpace) -> Result<()> {
    if space.representation_ok {
        Ok(())
    } else {
        Err(Error::NotRepresentation {
            residual: space.yang_baxter_residual.max(space.unitarity_residual),
            tolerance: super::REPRESENTATION_TOL,
        })
    }
}

/// Frobenius norms of the three relation defects applied to `P_S` on the
/// sectors where truncation does not interfere, maximized over all index
/// pairs `(i,α), (j,β)` with `b_{iα} = z(e_{(i,α)})`.
pub fn zf_residuals(space: &FockSpace) -> Result<ZfReport> {
    refuse_unless_representation(space)?;
    let md = space.md();
    let d = space.dim();
    let units: Vec<Vec<C64>> = (0..md).map(|k| space.grid.unit(k / d, k % d)).collect();
    let mut rep = ZfReport {
        annihilation: 0.0,
        creation: 0.0,
        mixed: 0.0,
    };
    let mut acc = vec![[0.0f64; 3]; md * md];

    // inputs from the top sector would see truncated intermediate states
    for n in 0..space.n_max {
        for u in space.sector_onb(n)? {
            let mut v = space.zero();
            v.sectors[n] = u;
            let ann: Vec<FockVector> = units.iter().map(|u| space.annihilate(u, &v)).collect();
            let cre: Vec<FockVector> = units.iter().map(|u| space.create(u, &v)).collect();
            let aa: Vec<Vec<FockVector>> = if n >= 2 {
                units
                    .iter()
                    .map(|u| ann.iter().map(|w| space.annihilate(u, w)).collect())
                    .collect()
            } else {
                Vec::new()
            };
            let cc: Vec<Vec<FockVector>> = if n + 2 <= space.n_max {
                units
                    .iter()
                    .map(|u| cre.iter().map(|w| space.create(u, w)).collect())
                    .collect()
            } else {
                Vec::new()
            };
            let ac: Vec<Vec<FockVector>> = if n < space.n_max {
                units
                    .iter()
                    .map(|u| cre.iter().map(|w| space.annihilate(u, w)).collect())
                    .collect()
            } else {
                Vec::new()
            };
            let ca: Vec<Vec<FockVector>> = if n >= 1 && n < space.n_max {
                units
                    .iter()
                    .map(|u| ann.iter().map(|w| space.create(u, w)).collect())
                    .collect()
            } else {
                Vec::new()
            };
            for p in 0..md {
                let (i, al) = (p / d, p % d);
                for q in 0..md {
                    let (j, be) = (q / d, q % d);
                    // S(θ_i − θ_j) and S(θ_j − θ_i)
                    let s_ij = space.s_between(j, i);
                    let s_ji = space.s_between(i, j);
                    if !aa.is_empty() {
                        let mut r = aa[p][q].clone();
                        for ga in 0..d {
                            for de in 0..d {
                                let coef = s_ij[(be * d + al, de * d + ga)];
                                r.add_assign_scaled(&aa[j * d + ga][i * d + de], -coef);
                            }
                        }
                        acc[p * md + q][0] += r.norm().powi(2);
                    }
                    if !cc.is_empty() {
                        let mut r = cc[p][q].clone();
                        for ga in 0..d {
                            for de in 0..d {
                                let coef = s_ij[(ga * d + de, al * d + be)];
                                r.add_assign_scaled(&cc[j * d + ga][i * d + de], -coef);
                            }
                        }
                        acc[p * md + q][1] += r.norm().powi(2);
                    }
                    if !ac.is_empty() {
                        let mut r = ac[p][q].clone();
                        if !ca.is_empty() {
                            for ga in 0..d {
                                for de in 0..d {
                                    let coef = s_ji[(al * d + ga, be * d + de)];
                                    r.add_assign_scaled(&ca[j * d + ga][i * d + de], -coef);
                                }
                            }
                        }
                        if p == q {
                            r.add_assign_scaled(&v, c(-1.0, 0.0));
                        }
                        acc[p * md + q][2] += r.norm().powi(2);
                    }
                }
            }
        }
    }
    for a in &acc {
        rep.annihilation = rep.annihilation.max(a[0].sqrt());
        rep.creation = rep.creation.max(a[1].sqrt());
        rep.mixed = rep.mixed.max(a[2].sqrt());
    }
    Ok(rep)
}

/// Statistics of a constant scalar S-matrix: `+1` bosons, `−1` fermions.
fn constant_sign(space: &FockSpace) -> Result<f64> {
    let d = space.dim();
    // S = ±1 (scalar) or S = ±F (internal flip); both symmetrize the combined mode labels
    let unit = if d == 1 {
        CMatrix::identity(1, 1)
    } else {
        flip(d)
    };
    let m = space.grid.m();
    let s0 = space.s_between(0, 0);
    for i in 0..m {
        for j in 0..m {
            if (space.s_between(i, j) - s0).norm() > 1e-15 {
                return Err(Error::InvalidParameter(
                    "occupation oracle needs a constant S-matrix".into(),
                ));
            }
        }
    }
    if (s0 - &unit).norm() < 1e-15 {
        Ok(1.0)
    } else if (s0 + &unit).norm() < 1e-15 {
        Ok(-1.0)
    } else {
        Err(Error::InvalidParameter(
            "occupation oracle needs S = ±1 or S = ±F".into(),
        ))
    }
}

/// Occupation-number Fock space: states are nondecreasing mode tuples.
struct Occupation {
    states: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    fermi: bool,
}

impl Occupation {
    fn new(modes: usize, n_max: usize, fermi: bool) -> Self {
        let mut states = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..n_max {
            let mut next = Vec::new();
            for s in &layer {
                let lo = s
                    .last()
                    .map(|&l: &usize| if fermi { l + 1 } else { l })
                    .unwrap_or(0);
                for k in lo..modes {
                    let mut t: Vec<usize> = s.clone();
                    t.push(k);
                    next.push(t);
                }
            }
            states.extend(next.iter().cloned());
            layer = next;
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Occupation {
            states,
            index,
            fermi,
        }
    }

    fn count(s: &[usize], k: usize) -> usize {
        s.iter().filter(|&&x| x == k).count()
    }

    /// `a†_k |s⟩` as (coefficient, target state).
    fn create(&self, k: usize, s: &[usize], n_max: usize) -> Option<(f64, usize)> {
        if s.len() >= n_max {
            return None;
        }
        let nk = Self::count(s, k);
        let coef = if self.fermi {
            if nk > 0 {
                return None;
            }
            let below = s.iter().filter(|&&x| x < k).count();
            if below % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        } else {
            ((nk + 1) as f64).sqrt()
        };
        let mut t = s.to_vec();
        t.push(k);
        t.sort_unstable();
        Some((coef, self.index[&t]))
    }

    /// `a_k |s⟩`.
    fn annihilate(&self, k: usize, s: &[usize]) -> Option<(f64, usize)> {
        let nk = Self::count(s, k);
        if nk == 0 {
            return None;
        }
        let coef = if self.fermi {
            let below = s.iter().filter(|&&x| x < k).count();
            if below % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        } else {
            (nk as f64).sqrt()
        };
        let mut t = s.to_vec();
        let pos = t.iter().position(|&x| x == k).unwrap();
        t.remove(pos);
        Some((coef, self.index[&t]))
    }
}

/// `(n! Π n_k!)^{−1/2} Σ_π ε(π) e_{s_π(1)} ⊗ ⋯ ⊗ e_{s_π(n)}` written out directly.
fn embed(space: &FockSpace, s: &[usize], fermi: bool) -> FockVector {
    let n = s.len();
    let mut v = space.zero();
    let mut mult = 1usize;
    let mut k = 0;
    while k < n {
        let r = s[k..].iter().take_while(|&&x| x == s[k]).count();
        mult *= factorial(r);
        k += r;
    }
    let norm = 1.0 / ((factorial(n) * mult) as f64).sqrt();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let inv = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let sign = if fermi && inv % 2 == 1 { -1.0 } else { 1.0 };
        let slots: Vec<usize> = perm.iter().map(|&p| s[p]).collect();
        v.sectors[n][space.compose_index(&slots)] += c(sign * norm, 0.0);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    v
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Largest deviation between `z^#(e_k)` on the S-symmetric tensors and the
/// canonical bosonic (S = 1) or fermionic (S = −1) operators on occupation
/// numbers, transported by the explicit isometry.
pub fn ccr_car_oracle_residual(space: &FockSpace) -> Result<f64> {
    let fermi = constant_sign(space)? < 0.0;
    let md = space.md();
    let occ = Occupation::new(md, space.n_max, fermi);
    let emb: Vec<FockVector> = occ.states.iter().map(|s| embed(space, s, fermi)).collect();
    let mut worst: f64 = 0.0;
    for (si, s) in occ.states.iter().enumerate() {
        // embedding must be an isometry into the range of P_S
        worst = worst.max((emb[si].norm() - 1.0).abs());
        worst = worst.max(space.project(&emb[si]).sub(&emb[si]).norm());
        for k in 0..md {
            let e = space.grid.unit(k / space.dim(), k % space.dim());
            let lhs = space.create(&e, &emb[si]);
            let rhs = match occ.create(k, s, space.n_max) {
                Some((coef, t)) => emb[t].scale(c(coef, 0.0)),
                None => space.zero(),
            };
            worst = worst.max(lhs.sub(&rhs).norm());
            let lhs = space.annihilate(&e, &emb[si]);
            let rhs = match occ.annihilate(k, s) {
                Some((coef, t)) => emb[t].scale(c(coef, 0.0)),
                None => space.zero(),
            };
            worst = worst.max(lhs.sub(&rhs).norm());
        }
    }
    Ok(worst)
}

/// Canonical bosonic/fermionic operators on occupation numbers together with
/// the explicit isometry into the S-symmetric tensors (S = ±1 or ±F).
pub struct OccupationOracle {
    occ: Occupation,
    n_max: usize,
    modes: usize,
    /// Columns: embedded occupation states in flattened Fock coordinates.
    pub isometry: CMatrix,
}

impl OccupationOracle {
    pub fn new(space: &FockSpace) -> Result<Self> {
        let fermi = constant_sign(space)? < 0.0;
        let occ = Occupation::new(space.md(), space.n_max, fermi);
        let mut isometry = CMatrix::zeros(space.total_len(), occ.states.len());
        for (k, s) in occ.states.iter().enumerate() {
            for (r, z) in embed(space, s, fermi).flatten().into_iter().enumerate() {
                isometry[(r, k)] = z;
            }
        }
        Ok(OccupationOracle {
            occ,
            n_max: space.n_max,
            modes: space.md(),
            isometry,
        })
    }

    pub fn dim(&self) -> usize {
        self.occ.states.len()
    }

    /// `a†(φ) = Σ_k φ_k a†_k`.
    pub fn create(&self, phi: &[C64]) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for (col, s) in self.occ.states.iter().enumerate() {
            for k in 0..self.modes {
                if let Some((coef, row)) = self.occ.create(k, s, self.n_max) {
                    m[(row, col)] += phi[k] * coef;
                }
            }
        }
        m
    }

    /// `a(φ) = Σ_k conj φ_k a_k`.
    pub fn annihilate(&self, phi: &[C64]) -> CMatrix {
        self.create(phi).adjoint()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumberBoundReport {
    pub samples: usize,
    /// `max ‖z(φ)Ψ‖ / (‖φ‖ ‖N^{1/2}Ψ‖)`
    pub annihilation_ratio: f64,
    /// `max ‖z†(φ)Ψ‖ / (‖φ‖ ‖(N+1)^{1/2}Ψ‖)`
    pub creation_ratio: f64,
    pub pass: bool,
}

/// Check `‖z(φ)Ψ‖ ≤ ‖φ‖‖N^{1/2}Ψ‖` and `‖z†(φ)Ψ‖ ≤ ‖φ‖‖(N+1)^{1/2}Ψ‖` on seeded
/// random S-symmetric vectors.
pub fn number_bound_check(space: &FockSpace, samples: usize, seed: u64) -> NumberBoundReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ann: f64 = 0.0;
    let mut cre: f64 = 0.0;
    for _ in 0..samples {
        let psi = space.random_symmetric(&mut rng);
        let phi = crate::linalg::random_complex_vec(&mut rng, space.md());
        let nphi = crate::linalg::vec_norm(&phi);
        let n_half: f64 = psi
            .sectors
            .iter()
            .enumerate()
            .map(|(n, s)| n as f64 * s.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt();
        let n1_half = (n_half * n_half + psi.norm().powi(2)).sqrt();
        let za = space.annihilate(&phi, &psi).norm();
        let zc = space.create(&phi, &psi).norm();
        if n_half > 0.0 {
            ann = ann.max(za / (nphi * n_half));
        }
        cre = cre.max(zc / (nphi * n1_half));
    }
    let slack = 1.0 + 1e-12;
    NumberBoundReport {
        samples,
        annihilation_ratio: ann,
        creation_ratio: cre,
        pass: ann <= slack && cre <= slack,
    }
}
