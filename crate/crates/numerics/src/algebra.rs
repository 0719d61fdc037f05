//! Finite-dimensional *-algebras given by an explicit basis of matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{NumericsError, Result};

pub type CMat = DMatrix<Complex64>;

/// Checks on algebra structure and Jones relations.
pub const CONSTRUCTION_TOL: f64 = 1e-9;
/// Largest tolerated Gram condition number.
pub const GRAM_CONDITION_LIMIT: f64 = 1e12;
/// Largest number of complex entries held by one spanning set.
pub const MEMORY_BOUND: usize = 50_000_000;

/// `tr(x) = Tr(x)/d`.
pub fn normalized_trace(x: &CMat) -> Complex64 {
    x.trace() / x.nrows() as f64
}

/// `tr(x* y)`.
pub fn trace_inner(x: &CMat, y: &CMat) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>() / x.nrows() as f64
}

pub fn trace_norm2(x: &CMat) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum::<f64>() / x.nrows() as f64
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn check_memory(count: usize, space: usize) -> Result<()> {
    let entries = count.saturating_mul(space * space);
    if entries > MEMORY_BOUND {
        return Err(NumericsError::TooLarge {
            entries,
            bound: MEMORY_BOUND,
        });
    }
    Ok(())
}

/// A *-subalgebra of `M_d`, stored as a basis orthonormal for `tr(x* y)`.
#[derive(Clone, Debug)]
pub struct ConcreteAlgebra {
    space: usize,
    basis: Vec<CMat>,
}

impl ConcreteAlgebra {
    /// Orthonormalizes a spanning set, discarding dependent members.
    pub fn span(space: usize, spanning: impl IntoIterator<Item = CMat>) -> Self {
        let spanning: Vec<CMat> = spanning.into_iter().collect();
        let norms: Vec<f64> = spanning.iter().map(|x| trace_norm2(x).sqrt()).collect();
        let largest = norms.iter().cloned().fold(0.0, f64::max);
        let mut basis: Vec<CMat> = Vec::new();
        for (x, scale) in spanning.into_iter().zip(norms) {
            if scale <= 1e-10 * largest || scale == 0.0 {
                continue;
            }
            let mut r = x / Complex64::new(scale, 0.0);
            for _ in 0..2 {
                for b in &basis {
                    let c = trace_inner(b, &r);
                    r -= b * c;
                }
            }
            let norm = trace_norm2(&r).sqrt();
            if norm > 1e-8 {
                basis.push(r / Complex64::new(norm, 0.0));
            }
        }
        ConcreteAlgebra { space, basis }
    }

    /// Algebra with the given linearly independent basis. The trace Gram
    /// matrix must be well conditioned.
    pub fn from_basis(space: usize, basis: Vec<CMat>) -> Result<Self> {
        let m = basis.len();
        let gram = DMatrix::from_fn(m, m, |i, j| trace_inner(&basis[i], &basis[j]));
        let eig = gram.symmetric_eigenvalues();
        let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        if m > 0 && (lo <= 0.0 || hi / lo > GRAM_CONDITION_LIMIT) {
            return Err(NumericsError::IllConditioned(if lo <= 0.0 { f64::INFINITY } else { hi / lo }));
        }
        let alg = Self::span(space, basis);
        alg.verify()?;
        Ok(alg)
    }

    /// The *-algebra generated by `generators` and the identity.
    pub fn generated(space: usize, generators: &[CMat]) -> Result<Self> {
        let mut spanning = vec![CMat::identity(space, space)];
        for g in generators {
            spanning.push(g.clone());
            spanning.push(g.adjoint());
        }
        let mut alg = Self::span(space, spanning);
        loop {
            let before = alg.dim();
            let mut next = alg.basis.clone();
            for a in &alg.basis {
                for b in &alg.basis {
                    next.push(a * b);
                }
            }
            check_memory(next.len(), space)?;
            alg = Self::span(space, next);
            if alg.dim() == before {
                break;
            }
        }
        Ok(alg)
    }

    pub fn scalars(space: usize) -> Self {
        Self::span(space, [CMat::identity(space, space)])
    }

    pub fn diagonal(space: usize) -> Self {
        Self::span(
            space,
            (0..space).map(|i| {
                let mut m = CMat::zeros(space, space);
                m[(i, i)] = Complex64::new(1.0, 0.0);
                m
            }),
        )
    }

    pub fn full(space: usize) -> Self {
        Self::span(
            space,
            (0..space * space).map(|k| {
                let mut m = CMat::zeros(space, space);
                m[(k / space, k % space)] = Complex64::new(1.0, 0.0);
                m
            }),
        )
    }

    /// `U·A·U*` for a unitary `U`.
    pub fn conjugated(&self, u: &CMat) -> Self {
        let ua = u.adjoint();
        ConcreteAlgebra {
            space: self.space,
            basis: self.basis.iter().map(|b| u * b * &ua).collect(),
        }
    }

    pub fn space(&self) -> usize {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    /// Coordinates of `x`'s projection in the orthonormal basis.
    pub fn coordinates(&self, x: &CMat) -> DVector<Complex64> {
        DVector::from_iterator(self.dim(), self.basis.iter().map(|b| trace_inner(b, x)))
    }

    pub fn combine(&self, coords: &[Complex64]) -> CMat {
        let mut out = CMat::zeros(self.space, self.space);
        for (b, c) in self.basis.iter().zip(coords) {
            out += b * *c;
        }
        out
    }

    /// Trace-preserving conditional expectation onto this algebra.
    pub fn expectation(&self, x: &CMat) -> CMat {
        let coords = self.coordinates(x);
        self.combine(coords.as_slice())
    }

    pub fn contains(&self, x: &CMat, tol: f64) -> bool {
        let r = x - self.expectation(x);
        trace_norm2(&r).sqrt() <= tol * trace_norm2(x).sqrt().max(1.0)
    }

    /// Sampled closure under adjoint and multiplication, plus the identity.
    pub fn verify(&self) -> Result<()> {
        let one = CMat::identity(self.space, self.space);
        if !self.contains(&one, CONSTRUCTION_TOL) {
            return Err(NumericsError::Relation("algebra does not contain the identity".into()));
        }
        let m = self.dim();
        let step = (m / 7).max(1);
        for i in (0..m).step_by(step) {
            if !self.contains(&self.basis[i].adjoint(), CONSTRUCTION_TOL) {
                return Err(NumericsError::Relation("algebra is not closed under adjoint".into()));
            }
            for j in (0..m).step_by(step) {
                let p = &self.basis[i] * &self.basis[j];
                if !self.contains(&p, CONSTRUCTION_TOL) {
                    return Err(NumericsError::Relation("algebra is not closed under products".into()));
                }
            }
        }
        Ok(())
    }

    pub fn is_subalgebra_of(&self, other: &ConcreteAlgebra) -> bool {
        self.basis.iter().all(|b| other.contains(b, CONSTRUCTION_TOL))
    }
}

/// `E_B(x)` for `x` in `A`, after checking `B ⊆ A`.
pub fn conditional_expectation(a: &ConcreteAlgebra, b: &ConcreteAlgebra, x: &CMat) -> Result<CMat> {
    if !b.is_subalgebra_of(a) {
        return Err(NumericsError::Relation("conditioning algebra is not a subalgebra".into()));
    }
    Ok(b.expectation(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_expectation_zeroes_off_diagonal() {
        let full = ConcreteAlgebra::full(2);
        let diag = ConcreteAlgebra::diagonal(2);
        let x = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 1.0), c(3.0, 0.0), c(4.0, -1.0)]);
        let e = conditional_expectation(&full, &diag, &x).unwrap();
        let expected = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(4.0, -1.0)]);
        assert!((e - expected).norm() < 1e-12);
    }

    #[test]
    fn scalar_expectation_is_trace() {
        let full = ConcreteAlgebra::full(3);
        let x = CMat::from_fn(3, 3, |i, j| c((i * 3 + j) as f64, i as f64));
        let e = conditional_expectation(&full, &ConcreteAlgebra::scalars(3), &x).unwrap();
        let expected = CMat::identity(3, 3) * normalized_trace(&x);
        assert!((e - expected).norm() < 1e-12);
    }

    #[test]
    fn bimodule_property() {
        let full = ConcreteAlgebra::full(3);
        let diag = ConcreteAlgebra::diagonal(3);
        let x = CMat::from_fn(3, 3, |i, j| c((i + 2 * j) as f64, (i * j) as f64));
        let b1 = CMat::from_diagonal(&DVector::from_vec(vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)]));
        let b2 = CMat::from_diagonal(&DVector::from_vec(vec![c(0.5, 0.0), c(1.0, 2.0), c(3.0, 0.0)]));
        let lhs = diag.expectation(&(&b1 * &x * &b2));
        let rhs = &b1 * diag.expectation(&x) * &b2;
        assert!((lhs - rhs).norm() < 1e-10);
        assert!(full.verify().is_ok());
    }

    #[test]
    fn generated_algebra_dimension() {
        let x = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(ConcreteAlgebra::generated(2, &[x]).unwrap().dim(), 4);
        let d = CMat::from_diagonal(&DVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)]));
        assert_eq!(ConcreteAlgebra::generated(3, &[d]).unwrap().dim(), 2);
    }

    #[test]
    fn ill_conditioned_basis_rejected() {
        let one = CMat::identity(2, 2);
        let near = &one + CMat::from_element(2, 2, c(1e-9, 0.0));
        assert!(matches!(
            ConcreteAlgebra::from_basis(2, vec![one, near]),
            Err(NumericsError::IllConditioned(_))
        ));
    }
}
