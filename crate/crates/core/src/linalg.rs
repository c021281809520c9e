//! Small dense linear-algebra helpers over complex matrices.

use crate::{CMatrix, C64};
use nalgebra::DMatrix;
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    if m.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Euclidean norm of a complex vector slice.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// ⟨u, v⟩, antilinear in the first slot.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn random_complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
    })
}

pub fn random_complex_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
        .collect()
}

/// Haar-ish random unitary from the QR decomposition of a random matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let a = random_complex_matrix(rng, n, n);
    let qr = a.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Numerical rank from singular values with a relative threshold.
pub fn rank(m: &CMatrix, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Inverse square root of a Hermitian positive semidefinite matrix, with
/// eigenvalues below `rel_tol * max` discarded (pseudo-inverse). Returns the
/// matrix and the number of discarded directions.
pub fn inv_sqrt_psd(g: &CMatrix, rel_tol: f64) -> (CMatrix, usize) {
    let n = g.nrows();
    let h = (g + g.adjoint()) * c(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let mut dropped = 0;
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        let lam = eig.eigenvalues[k];
        if lam <= rel_tol * max || lam <= 0.0 {
            dropped += 1;
            continue;
        }
        let v = eig.eigenvectors.column(k);
        out += (&v * v.adjoint()) * c(1.0 / lam.sqrt(), 0.0);
    }
    (out, dropped)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_unitary(&mut rng, 5);
        let r = spectral_norm(&(u.adjoint() * &u - identity(5)));
        assert!(r < 1e-13, "{r}");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(11, 4), 330);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(5), 120);
    }

    #[test]
    fn inv_sqrt_of_diagonal() {
        let g = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(4.0, 0.0),
            c(0.25, 0.0),
        ]));
        let (s, dropped) = inv_sqrt_psd(&g, 1e-12);
        assert_eq!(dropped, 0);
        assert!((s[(0, 0)].re - 0.5).abs() < 1e-14);
        assert!((s[(1, 1)].re - 2.0).abs() < 1e-14);
    }
}
