//! Polynomials in the Zamolodchikov–Faddeev operators and their reflected copies.

use super::{FockSpace, FockVector};
use crate::linalg::c;
use crate::{CMatrix, C64};

/// A single factor of an operator product.
#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    Identity,
    /// `z†(φ)`
    Create(Vec<C64>),
    /// `z(φ)`
    Annihilate(Vec<C64>),
    /// `z'†(φ) = J z†(Jφ) J`
    CreateReflected(Vec<C64>),
    /// `z'(φ) = J z(Jφ) J`
    AnnihilateReflected(Vec<C64>),
    Number,
    Translate([f64; 2]),
    Gauge(CMatrix),
    /// `P_S`
    Project,
}

impl Op {
    pub fn apply(&self, space: &FockSpace, v: &FockVector) -> FockVector {
        match self {
            Op::Identity => v.clone(),
            Op::Create(p) => space.create(p, v),
            Op::Annihilate(p) => space.annihilate(p, v),
            Op::CreateReflected(p) => space.create_reflected(p, v),
            Op::AnnihilateReflected(p) => space.annihilate_reflected(p, v),
            Op::Number => space.number(v),
            Op::Translate(x) => space
                .translate(*x, 0.0, v)
                .expect("pure translations are grid compatible"),
            Op::Gauge(g) => space.gauge(g, v),
            Op::Project => space.project(v),
        }
    }

    pub fn adjoint(&self) -> Op {
        match self {
            Op::Create(p) => Op::Annihilate(p.clone()),
            Op::Annihilate(p) => Op::Create(p.clone()),
            Op::CreateReflected(p) => Op::AnnihilateReflected(p.clone()),
            Op::AnnihilateReflected(p) => Op::CreateReflected(p.clone()),
            Op::Translate(x) => Op::Translate([-x[0], -x[1]]),
            Op::Gauge(g) => Op::Gauge(g.adjoint()),
            other => other.clone(),
        }
    }
}

/// `Σ_t c_t · A_{t,1}A_{t,2}⋯`, where the last factor of each product acts first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FockOperator {
    pub terms: Vec<(C64, Vec<Op>)>,
}

impl FockOperator {
    pub fn zero() -> Self {
        FockOperator { terms: Vec::new() }
    }

    pub fn single(op: Op) -> Self {
        FockOperator {
            terms: vec![(c(1.0, 0.0), vec![op])],
        }
    }

    pub fn product(ops: Vec<Op>) -> Self {
        FockOperator {
            terms: vec![(c(1.0, 0.0), ops)],
        }
    }

    pub fn identity() -> Self {
        Self::single(Op::Identity)
    }

    pub fn create(phi: &[C64]) -> Self {
        Self::single(Op::Create(phi.to_vec()))
    }

    pub fn annihilate(phi: &[C64]) -> Self {
        Self::single(Op::Annihilate(phi.to_vec()))
    }

    pub fn create_reflected(phi: &[C64]) -> Self {
        Self::single(Op::CreateReflected(phi.to_vec()))
    }

    pub fn annihilate_reflected(phi: &[C64]) -> Self {
        Self::single(Op::AnnihilateReflected(phi.to_vec()))
    }

    pub fn scale(&self, k: C64) -> Self {
        FockOperator {
            terms: self.terms.iter().map(|(a, o)| (a * k, o.clone())).collect(),
        }
    }

    pub fn plus(&self, other: &FockOperator) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        FockOperator { terms }
    }

    pub fn minus(&self, other: &FockOperator) -> Self {
        self.plus(&other.scale(c(-1.0, 0.0)))
    }

    /// `self · other`.
    pub fn times(&self, other: &FockOperator) -> Self {
        let mut terms = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut ops = x.clone();
                ops.extend(y.iter().cloned());
                terms.push((a * b, ops));
            }
        }
        FockOperator { terms }
    }

    pub fn commutator(&self, other: &FockOperator) -> Self {
        self.times(other).minus(&other.times(self))
    }

    pub fn adjoint(&self) -> Self {
        FockOperator {
            terms: self
                .terms
                .iter()
                .map(|(a, ops)| (a.conj(), ops.iter().rev().map(Op::adjoint).collect()))
                .collect(),
        }
    }

    pub fn apply(&self, space: &FockSpace, v: &FockVector) -> FockVector {
        let mut out = space.zero();
        for (a, ops) in &self.terms {
            let mut x = v.clone();
            for op in ops.iter().rev() {
                x = op.apply(space, &x);
            }
            out.add_assign_scaled(&x, *a);
        }
        out
    }

    /// Dense matrix on the truncated tensor space (all sectors, flattened).
    pub fn dense(&self, space: &FockSpace) -> CMatrix {
        let len = space.total_len();
        let mut m = CMatrix::zeros(len, len);
        for k in 0..len {
            let col = self.apply(space, &space.basis_vector(k)).flatten();
            for (r, z) in col.into_iter().enumerate() {
                m[(r, k)] = z;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::GridSpec;
    use crate::linalg::spectral_norm;
    use crate::quadrature::Quadrature;
    use crate::smatrix::SMatrixModel;

    #[test]
    fn creation_and_annihilation_are_adjoint() {
        let model = SMatrixModel::sinh_gordon(1.2, 1.0).unwrap();
        let q = Quadrature::uniform(3, 1.5);
        let s = FockSpace::new(model, GridSpec::from_quadrature(&q, 1).unwrap(), 3).unwrap();
        let phi = vec![c(0.4, -0.1), c(1.0, 0.3), c(-0.2, 0.8)];
        let a = FockOperator::create(&phi).dense(&s);
        let b = FockOperator::annihilate(&phi).dense(&s);
        assert!(spectral_norm(&(a.adjoint() - &b)) < 1e-13);
        let ar = FockOperator::create_reflected(&phi).dense(&s);
        let br = FockOperator::annihilate_reflected(&phi).dense(&s);
        assert!(spectral_norm(&(ar.adjoint() - br)) < 1e-13);
    }
}
