use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{Degree, Polynomial};
use crate::ring::{RingSpec, Scalar};

/// A polynomial map `F^n -> F^n`: `n` component polynomials in `n`
/// variables over a common ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMap {
    ring: RingSpec,
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let n = components.len();
        let first = components.first().ok_or(Error::ArityMismatch { expected: 1, found: 0 })?;
        let ring = first.ring().clone();
        for c in &components {
            if c.nvars() != n {
                return Err(Error::ArityMismatch { expected: n, found: c.nvars() });
            }
            if c.ring() != &ring {
                return Err(Error::RingMismatch);
            }
        }
        Ok(Self { ring, components })
    }

    pub fn identity(n: usize, ring: &RingSpec) -> Self {
        let components = (0..n).map(|i| Polynomial::var(n, ring, i).expect("index in range")).collect();
        Self { ring: ring.clone(), components }
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.components
    }

    /// `self ∘ inner`: substitute the components of `inner` into `self`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        self.compose_truncated(inner, None)
    }

    pub fn compose_truncated(&self, inner: &PolyMap, max_degree: Option<u32>) -> Result<PolyMap> {
        if inner.nvars() != self.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), found: inner.nvars() });
        }
        let components = self
            .components
            .iter()
            .map(|c| c.compose_truncated(&inner.components, max_degree))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap { ring: self.ring.clone(), components })
    }

    /// Maximum total degree over the components.
    pub fn degree(&self) -> Degree {
        self.components.iter().map(Polynomial::total_degree).max().unwrap_or(Degree::MinusInfinity)
    }

    pub fn is_identity(&self) -> bool {
        *self == PolyMap::identity(self.nvars(), &self.ring)
    }

    /// Jacobian matrix: entry `(i, j)` is the derivative of component `i`
    /// with respect to variable `j`.
    pub fn jacobian_matrix(&self) -> PolyMatrix {
        let n = self.nvars();
        let mut entries = Vec::with_capacity(n * n);
        for c in &self.components {
            for j in 0..n {
                entries.push(c.partial(j).expect("index in range"));
            }
        }
        PolyMatrix::new(n, n, entries).expect("entries share nvars and ring")
    }

    /// Coefficient matrix of the degree-1 part, row `i` for component `i`.
    pub fn linear_part(&self) -> Vec<Vec<Scalar>> {
        let n = self.nvars();
        self.components.iter().map(|c| (0..n).map(|j| c.linear_coeff(j)).collect()).collect()
    }

    pub fn constant_part(&self) -> Vec<Scalar> {
        self.components.iter().map(Polynomial::constant_term).collect()
    }

    /// Components restricted to terms of degree at least 2.
    pub fn nonlinear_part(&self) -> PolyMap {
        let components = self.components.iter().map(|c| c.filter_degree(|d| d >= 2)).collect();
        PolyMap { ring: self.ring.clone(), components }
    }

    pub fn truncated(&self, max_degree: u32) -> PolyMap {
        let components = self.components.iter().map(|c| c.truncated(max_degree)).collect();
        PolyMap { ring: self.ring.clone(), components }
    }

    /// Componentwise difference.
    pub fn sub(&self, other: &PolyMap) -> Result<PolyMap> {
        if other.nvars() != self.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), found: other.nvars() });
        }
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| a.sub(b)).collect::<Result<Vec<_>>>()?;
        Ok(PolyMap { ring: self.ring.clone(), components })
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Vec<Scalar>> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }
}
