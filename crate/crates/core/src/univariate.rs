//! Single-variable generator polynomials (`sigma`, `phi`, `psi`, `zeta`, ...).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{Degree, Polynomial};
use crate::ring::{RingSpec, Scalar};

/// Dense univariate polynomial, coefficients by ascending power. The
/// highest stored coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    ring: RingSpec,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(ring: &RingSpec, coeffs: Vec<Scalar>) -> Result<Self> {
        for c in &coeffs {
            ring.check(c)?;
        }
        let mut p = Self { ring: ring.clone(), coeffs };
        p.trim();
        Ok(p)
    }

    pub fn zero(ring: &RingSpec) -> Self {
        Self { ring: ring.clone(), coeffs: Vec::new() }
    }

    /// `c * t^k`.
    pub fn monomial(ring: &RingSpec, k: usize, c: Scalar) -> Self {
        let mut coeffs = vec![Scalar::zero(); k + 1];
        coeffs[k] = c;
        let mut p = Self { ring: ring.clone(), coeffs };
        p.trim();
        p
    }

    /// From small integer coefficients, ascending.
    pub fn from_i64s(ring: &RingSpec, coeffs: &[i64]) -> Self {
        let mut p = Self { ring: ring.clone(), coeffs: coeffs.iter().map(|&c| ring.from_i64(c)).collect() };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            n => Degree::Finite((n - 1) as u32),
        }
    }

    /// Smallest power with a nonzero coefficient.
    pub fn lowest_degree(&self) -> Degree {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            None => Degree::MinusInfinity,
            Some(k) => Degree::Finite(k as u32),
        }
    }

    /// Whether every nonzero term has power at least 2.
    pub fn has_no_affine_part(&self) -> bool {
        self.coeff(0).is_zero() && self.coeff(1).is_zero()
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| self.ring.mul(c, &self.ring.from_u64(k as u64)))
            .collect();
        let mut p = Self { ring: self.ring.clone(), coeffs };
        p.trim();
        p
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Result<Self> {
        let mut coeffs = vec![Scalar::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            let d = self.ring.from_u64(k as u64 + 1);
            let q = self
                .ring
                .div(c, &d)
                .ok_or_else(|| Error::ZeroDenominator(alloc::format!("{} while integrating", k + 1)))?;
            coeffs.push(q);
        }
        let mut p = Self { ring: self.ring.clone(), coeffs };
        p.trim();
        Ok(p)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut p = Self { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect() };
        p.trim();
        p
    }

    pub fn evaluate(&self, t: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = self.ring.add(&self.ring.mul(&acc, t), c);
        }
        acc
    }

    /// `self(arg)` expanded, by Horner's rule.
    pub fn substitute(&self, arg: &Polynomial) -> Result<Polynomial> {
        if arg.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let n = arg.nvars();
        let mut acc = Polynomial::zero(n, &self.ring);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(arg)?.add(&Polynomial::constant(n, &self.ring, c.clone()))?;
        }
        Ok(acc)
    }

    /// As a polynomial in one variable `x1`.
    pub fn to_polynomial(&self) -> Polynomial {
        let terms = self.coeffs.iter().enumerate().map(|(k, c)| (vec![k as u32], c.clone()));
        Polynomial::from_terms(1, &self.ring, terms).expect("coefficients are canonical")
    }

    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        if p.nvars() != 1 {
            return Err(Error::ArityMismatch { expected: 1, found: p.nvars() });
        }
        let deg = p.total_degree().or_zero() as usize;
        let mut coeffs = vec![Scalar::zero(); if p.is_zero() { 0 } else { deg + 1 }];
        for (e, c) in p.terms() {
            coeffs[e.get(0) as usize] = c.clone();
        }
        Ok(Self { ring: p.ring().clone(), coeffs })
    }
}
