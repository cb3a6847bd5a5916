use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Exponents of one monomial, one entry per variable.
///
/// Ordering is graded lexicographic: total degree first, then the exponent
/// of `x1`, then `x2`, and so on. The total degree is cached and always fits
/// in a `u32`; any construction that would overflow is rejected.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponents {
    degree: u32,
    exps: Vec<u32>,
}

impl Exponents {
    pub fn new(exps: Vec<u32>) -> Result<Self> {
        let mut degree = 0u32;
        for &e in &exps {
            degree = degree.checked_add(e).ok_or(Error::ExponentOverflow)?;
        }
        Ok(Self { degree, exps })
    }

    pub fn zero(nvars: usize) -> Self {
        Self { degree: 0, exps: vec![0; nvars] }
    }

    /// `x_i^power` in `nvars` variables.
    pub fn unit(nvars: usize, i: usize, power: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = power;
        Self { degree: power, exps }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.degree
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.exps
    }

    pub fn get(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn is_constant(&self) -> bool {
        self.degree == 0
    }

    /// Componentwise sum (the exponents of a product of monomials).
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let degree = self.degree.checked_add(other.degree).ok_or(Error::ExponentOverflow)?;
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { degree, exps })
    }

    pub(crate) fn with_entry(&self, i: usize, value: u32) -> Result<Self> {
        let mut exps = self.exps.clone();
        exps[i] = value;
        Self::new(exps)
    }

    /// The same monomial in more variables; new variables get exponent 0.
    pub fn extended(&self, nvars: usize) -> Self {
        let mut exps = self.exps.clone();
        exps.resize(nvars, 0);
        Self { degree: self.degree, exps }
    }
}
