//! Quadrature rules on the real rapidity line.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Equally spaced nodes with equal weights h (spectrally accurate for
    /// smooth rapidly decaying integrands).
    Uniform,
    /// Composite Gauss–Legendre panels.
    GaussLegendre,
}

/// Nodes and positive weights on [−Θ, Θ].
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    /// Uniform rule with `m` nodes spanning [−Θ, Θ] inclusive and weight h each.
    pub fn uniform(m: usize, theta_max: f64) -> Self {
        assert!(m >= 2, "uniform rule needs at least two nodes");
        let h = 2.0 * theta_max / (m - 1) as f64;
        let nodes = (0..m).map(|i| -theta_max + i as f64 * h).collect();
        Quadrature {
            nodes,
            weights: vec![h; m],
        }
    }

    /// `panels` Gauss–Legendre panels of `order` nodes each on [−Θ, Θ].
    pub fn composite_gauss_legendre(panels: usize, order: usize, theta_max: f64) -> Self {
        let (x, w) = gauss_legendre(order);
        let width = 2.0 * theta_max / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let a = -theta_max + p as f64 * width;
            let mid = a + 0.5 * width;
            for k in 0..order {
                nodes.push(mid + 0.5 * width * x[k]);
                weights.push(0.5 * width * w[k]);
            }
        }
        Quadrature { nodes, weights }
    }

    /// Build a rule with `m` nodes. Gauss–Legendre uses panels of at most 8 nodes.
    pub fn with_rule(rule: Rule, m: usize, theta_max: f64) -> Self {
        match rule {
            Rule::Uniform => Self::uniform(m, theta_max),
            Rule::GaussLegendre => {
                let order = (1..=8).rev().find(|o| m % o == 0).unwrap_or(1);
                Self::composite_gauss_legendre(m / order, order, theta_max)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_complex<F: Fn(f64) -> crate::C64>(&self, f: F) -> crate::C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg} q={q}");
            }
        }
    }

    #[test]
    fn gaussian_integral() {
        let q = Quadrature::composite_gauss_legendre(32, 8, 8.0);
        let v = q.integrate(|t| (-t * t).exp());
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        let u = Quadrature::uniform(81, 8.0);
        let v = u.integrate(|t| (-t * t).exp());
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn with_rule_node_counts() {
        assert_eq!(Quadrature::with_rule(Rule::GaussLegendre, 6, 3.0).len(), 6);
        assert_eq!(
            Quadrature::with_rule(Rule::GaussLegendre, 48, 3.0).len(),
            48
        );
        assert_eq!(Quadrature::with_rule(Rule::Uniform, 7, 3.0).len(), 7);
    }
}
