//! One step of the Jones basic construction, realized on `L²(B₁)`.

use nalgebra::DMatrix;

use crate::algebra::{check_memory, normalized_trace, trace_inner, CMat, ConcreteAlgebra, CONSTRUCTION_TOL};
use crate::error::{NumericsError, Result};

/// `B₀ ⊂ B₁` together with the Jones projection `e` on `L²(B₁) ≅ ℂ^{dim B₁}`.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    b0: ConcreteAlgebra,
    b1: ConcreteAlgebra,
    /// Isometry onto `L²(B₀) ⊂ L²(B₁)`; `e = W·W*`.
    w: CMat,
    e: CMat,
    tau: f64,
}

impl TowerLevel {
    pub fn new(b0: &ConcreteAlgebra, b1: &ConcreteAlgebra) -> Result<Self> {
        if !b0.is_subalgebra_of(b1) {
            return Err(NumericsError::Relation("B₀ is not contained in B₁".into()));
        }
        let m = b1.dim();
        let mut w = CMat::zeros(m, b0.dim());
        for (k, b) in b0.basis().iter().enumerate() {
            w.set_column(k, &b1.coordinates(b));
        }
        let e = &w * w.adjoint();
        let tau = normalized_trace(&e).re;
        let level = TowerLevel {
            b0: b0.clone(),
            b1: b1.clone(),
            w,
            e,
            tau,
        };
        level.verify()?;
        Ok(level)
    }

    pub fn space(&self) -> usize {
        self.b1.dim()
    }

    pub fn jones_projection(&self) -> &CMat {
        &self.e
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Left multiplication by `x ∈ B₁` on `L²(B₁)`.
    pub fn rep(&self, x: &CMat) -> CMat {
        let basis = self.b1.basis();
        let products: Vec<CMat> = basis.iter().map(|b| x * b).collect();
        DMatrix::from_fn(basis.len(), basis.len(), |i, j| trace_inner(&basis[i], &products[j]))
    }

    pub fn rep_algebra(&self, a: &ConcreteAlgebra) -> ConcreteAlgebra {
        ConcreteAlgebra::span(self.space(), a.basis().iter().map(|b| self.rep(b)))
    }

    /// `span{x·e·y : x, y ∈ A}` for a subalgebra `A ⊆ B₁`; with `A = B₁`
    /// this is `B₂ = ⟨B₁, e⟩`.
    pub fn extend(&self, a: &ConcreteAlgebra) -> Result<ConcreteAlgebra> {
        check_memory(a.dim() * a.dim(), self.space())?;
        let left: Vec<CMat> = a.basis().iter().map(|x| self.rep(x) * &self.w).collect();
        let right: Vec<CMat> = left.iter().map(|l| l.adjoint()).collect();
        // x·W·W*·y with y running over the adjoint-closed basis
        let spanning = left
            .iter()
            .flat_map(|l| right.iter().map(move |r| l * r))
            .collect::<Vec<_>>();
        let alg = ConcreteAlgebra::span(self.space(), spanning);
        alg.verify()?;
        Ok(alg)
    }

    pub fn b2(&self) -> Result<ConcreteAlgebra> {
        self.extend(&self.b1)
    }

    /// Jones relations and the Markov property, sampled over the basis of
    /// `B₁`.
    fn verify(&self) -> Result<()> {
        let e = &self.e;
        if (e.adjoint() - e).norm() > CONSTRUCTION_TOL || (e * e - e).norm() > CONSTRUCTION_TOL * (1.0 + e.norm()) {
            return Err(NumericsError::Relation("Jones projection is not a projection".into()));
        }
        let m = self.b1.dim();
        let step = (m / 9).max(1);
        for x in self.b1.basis().iter().step_by(step) {
            let px = self.rep(x);
            let lhs = e * &px * e;
            let rhs = self.rep(&self.b0.expectation(x)) * e;
            if (lhs - rhs).norm() > CONSTRUCTION_TOL * (1.0 + px.norm()) {
                return Err(NumericsError::Relation("e·x·e differs from E(x)·e".into()));
            }
            let found = normalized_trace(&(&px * e));
            let expected = normalized_trace(&px) * self.tau;
            if (found - expected).norm() > CONSTRUCTION_TOL {
                return Err(NumericsError::NonMarkov {
                    expected: expected.norm(),
                    found: found.norm(),
                });
            }
        }
        let one = CMat::identity(m, m);
        if (self.rep(&CMat::identity(self.b1.space(), self.b1.space())) - one).norm() > CONSTRUCTION_TOL {
            return Err(NumericsError::Relation("GNS representation is not unital".into()));
        }
        Ok(())
    }
}
