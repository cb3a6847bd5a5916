//! Sparse multivariate polynomials with exact coefficients.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::fastmul;
use crate::monomial::Exponents;
use crate::ring::{RingSpec, Scalar};

/// Total degree of a polynomial. The zero polynomial has degree
/// [`Degree::MinusInfinity`], which orders below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn or_zero(self) -> u32 {
        self.finite().unwrap_or(0)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => f.write_str("-inf"),
            Degree::Finite(d) => d.fmt(f),
        }
    }
}

/// A polynomial in `nvars` variables over `ring`, stored as a map from
/// exponent vectors to nonzero coefficients. Iteration is in ascending
/// graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    ring: RingSpec,
    terms: BTreeMap<Exponents, Scalar>,
}

#[allow(clippy::should_implement_trait)]
impl Polynomial {
    pub fn zero(nvars: usize, ring: &RingSpec) -> Self {
        Self { nvars, ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, ring: &RingSpec, c: Scalar) -> Self {
        let mut p = Self::zero(nvars, ring);
        p.add_term(Exponents::zero(nvars), c);
        p
    }

    pub fn one(nvars: usize, ring: &RingSpec) -> Self {
        Self::constant(nvars, ring, Scalar::one())
    }

    /// The variable `x_{i+1}` (indices are 0-based).
    pub fn var(nvars: usize, ring: &RingSpec, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::IndexOutOfRange { index: i, nvars });
        }
        let mut p = Self::zero(nvars, ring);
        p.add_term(Exponents::unit(nvars, i, 1), Scalar::one());
        Ok(p)
    }

    pub fn monomial(ring: &RingSpec, exps: Exponents, c: Scalar) -> Self {
        let mut p = Self::zero(exps.len(), ring);
        p.add_term(exps, c);
        p
    }

    /// Build from `(exponents, coefficient)` pairs; like terms are combined.
    pub fn from_terms<I>(nvars: usize, ring: &RingSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let mut p = Self::zero(nvars, ring);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, found: exps.len() });
            }
            ring.check(&c)?;
            p.add_term(Exponents::new(exps)?, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub(crate) fn term_map(&self) -> &BTreeMap<Exponents, Scalar> {
        &self.terms
    }

    /// From terms already in ascending order with nonzero coefficients.
    pub(crate) fn from_sorted(nvars: usize, ring: &RingSpec, terms: Vec<(Exponents, Scalar)>) -> Self {
        Self { nvars, ring: ring.clone(), terms: terms.into_iter().collect() }
    }

    pub fn coeff(&self, exps: &Exponents) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Exponents::zero(self.nvars))
    }

    /// Coefficient of `x_{i+1}` (the linear term in that variable).
    pub fn linear_coeff(&self, i: usize) -> Scalar {
        self.coeff(&Exponents::unit(self.nvars, i, 1))
    }

    pub fn total_degree(&self) -> Degree {
        // Graded order: the last key has the largest total degree.
        match self.terms.keys().next_back() {
            None => Degree::MinusInfinity,
            Some(e) => Degree::Finite(e.total_degree()),
        }
    }

    /// Smallest total degree among stored terms.
    pub fn lowest_degree(&self) -> Degree {
        match self.terms.keys().next() {
            None => Degree::MinusInfinity,
            Some(e) => Degree::Finite(e.total_degree()),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.total_degree() <= Degree::Finite(0)
    }

    /// Whether any term has a positive exponent in variable `i`.
    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e.get(i) > 0)
    }

    fn add_term(&mut self, exps: Exponents, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = self.ring.add(o.get(), &c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let (mut acc, rest) =
            if self.terms.len() >= other.terms.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (e, c) in &rest.terms {
            acc.add_term(e.clone(), c.clone());
        }
        Ok(acc)
    }

    /// `self += sign * other` in place; `other` must be compatible.
    pub(crate) fn accumulate(&mut self, other: Self, negate: bool) {
        debug_assert!(self.nvars == other.nvars && self.ring == other.ring);
        for (e, c) in other.terms {
            let c = if negate { self.ring.neg(&c) } else { c };
            self.add_term(e, c);
        }
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), self.ring.neg(c))).collect();
        Self { nvars: self.nvars, ring: self.ring.clone(), terms }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut acc = self.clone();
        for (e, c) in &other.terms {
            acc.add_term(e.clone(), self.ring.neg(c));
        }
        Ok(acc)
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.nvars, &self.ring);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.add_term(e.clone(), self.ring.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_truncated(other, None)
    }

    /// Product with every term of total degree above `max_degree` dropped.
    pub fn mul_truncated(&self, other: &Self, max_degree: Option<u32>) -> Result<Self> {
        self.check_compatible(other)?;
        let (da, db) = (self.total_degree().or_zero(), other.total_degree().or_zero());
        if let Some(terms) =
            fastmul::product(&self.ring, self.nvars, self.terms.iter(), other.terms.iter(), da, db, max_degree)
        {
            return Ok(Self::from_sorted(self.nvars, &self.ring, terms));
        }
        let mut out = Self::zero(self.nvars, &self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                if let Some(d) = max_degree {
                    if u64::from(ea.total_degree()) + u64::from(eb.total_degree()) > u64::from(d) {
                        // `other` is sorted by degree, the rest are larger.
                        break;
                    }
                }
                out.add_term(ea.checked_mul(eb)?, self.ring.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        self.pow_truncated(k, None)
    }

    pub fn pow_truncated(&self, mut k: u32, max_degree: Option<u32>) -> Result<Self> {
        let mut result = Self::one(self.nvars, &self.ring).truncated_opt(max_degree);
        let mut base = self.truncated_opt(max_degree);
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_truncated(&base, max_degree)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_truncated(&base, max_degree)?;
            }
        }
        Ok(result)
    }

    /// Drop every term of total degree above `max_degree`.
    pub fn truncated(&self, max_degree: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.total_degree() <= max_degree)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Self { nvars: self.nvars, ring: self.ring.clone(), terms }
    }

    fn truncated_opt(&self, max_degree: Option<u32>) -> Self {
        match max_degree {
            Some(d) => self.truncated(d),
            None => self.clone(),
        }
    }

    /// Terms of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        self.filter_degree(|d| d == k)
    }

    /// Terms whose total degree satisfies `keep`.
    pub fn filter_degree(&self, keep: impl Fn(u32) -> bool) -> Self {
        let terms =
            self.terms.iter().filter(|(e, _)| keep(e.total_degree())).map(|(e, c)| (e.clone(), c.clone())).collect();
        Self { nvars: self.nvars, ring: self.ring.clone(), terms }
    }

    /// Formal partial derivative with respect to variable `i` (0-based).
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange { index: i, nvars: self.nvars });
        }
        let mut out = Self::zero(self.nvars, &self.ring);
        for (e, c) in &self.terms {
            let k = e.get(i);
            if k == 0 {
                continue;
            }
            let coeff = self.ring.mul(c, &self.ring.from_u64(u64::from(k)));
            out.add_term(e.with_entry(i, k - 1)?, coeff);
        }
        Ok(out)
    }

    /// Antiderivative in variable `i` with zero integration constant.
    /// Needs `k + 1` to be a unit for every exponent `k` that appears.
    pub fn integrate(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange { index: i, nvars: self.nvars });
        }
        let mut out = Self::zero(self.nvars, &self.ring);
        for (e, c) in &self.terms {
            let k = e.get(i).checked_add(1).ok_or(Error::ExponentOverflow)?;
            let factor = self.ring.from_u64(u64::from(k));
            let coeff = self
                .ring
                .div(c, &factor)
                .ok_or_else(|| Error::ZeroDenominator(alloc::format!("{k} while integrating")))?;
            out.add_term(e.with_entry(i, k)?, coeff);
        }
        Ok(out)
    }

    /// Substitute `args[j]` for variable `j`. The result lives in the
    /// variables of the arguments.
    pub fn compose(&self, args: &[Polynomial]) -> Result<Self> {
        self.compose_truncated(args, None)
    }

    /// [`compose`](Self::compose) with terms above `max_degree` discarded
    /// after every multiplication.
    pub fn compose_truncated(&self, args: &[Polynomial], max_degree: Option<u32>) -> Result<Self> {
        if args.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: args.len() });
        }
        let (target_nvars, ring) = match args.first() {
            Some(a) => (a.nvars, a.ring.clone()),
            None => (0, self.ring.clone()),
        };
        for a in args {
            if a.ring != self.ring {
                return Err(Error::RingMismatch);
            }
            if a.nvars != target_nvars {
                return Err(Error::ArityMismatch { expected: target_nvars, found: a.nvars });
            }
        }
        let terms: Vec<(&[u32], &Scalar)> = self.terms.iter().map(|(e, c)| (e.as_slice(), c)).collect();
        let arg_degree = args.iter().map(|a| a.total_degree().or_zero()).max().unwrap_or(0);
        let bound = self.total_degree().or_zero().saturating_mul(arg_degree.max(1));
        let iters: Vec<_> = args.iter().map(|a| a.terms.iter()).collect();
        if !args.is_empty() {
            if let Some(out) = fastmul::compose(&ring, target_nvars, &terms, &iters, bound, max_degree) {
                return Ok(Self::from_sorted(target_nvars, &ring, out));
            }
        }
        let mut cache = PowerCache::new(args, max_degree);
        horner(&terms, 0, &mut cache, target_nvars, &ring)
    }

    /// Exact value at `point`.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: point.len() });
        }
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.as_slice()) {
                if k > 0 {
                    t = self.ring.mul(&t, &self.ring.pow(x, k));
                }
            }
            acc = self.ring.add(&acc, &t);
        }
        Ok(acc)
    }

    /// The same polynomial viewed in `nvars >= self.nvars()` variables.
    pub fn extend_vars(&self, nvars: usize) -> Result<Self> {
        if nvars < self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: nvars });
        }
        let terms = self.terms.iter().map(|(e, c)| (e.extended(nvars), c.clone())).collect();
        Ok(Self { nvars, ring: self.ring.clone(), terms })
    }

    /// `sum_j coeffs[j] * x_{j+1}`.
    pub fn linear_form(ring: &RingSpec, coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n, ring);
        for (j, c) in coeffs.iter().enumerate() {
            p.add_term(Exponents::unit(n, j, 1), c.clone());
        }
        p
    }
}

struct PowerCache<'a> {
    args: &'a [Polynomial],
    max_degree: Option<u32>,
    powers: Vec<Vec<Polynomial>>,
}

impl<'a> PowerCache<'a> {
    fn new(args: &'a [Polynomial], max_degree: Option<u32>) -> Self {
        Self { args, max_degree, powers: vec![Vec::new(); args.len()] }
    }

    /// `args[var]^k`, memoized.
    fn get(&mut self, var: usize, k: u32) -> Result<&Polynomial> {
        let k = k as usize;
        let list = &mut self.powers[var];
        if list.is_empty() {
            let a = &self.args[var];
            list.push(Polynomial::one(a.nvars, &a.ring).truncated_opt(self.max_degree));
        }
        while list.len() <= k {
            let next = list[list.len() - 1].mul_truncated(&self.args[var], self.max_degree)?;
            list.push(next);
        }
        Ok(&list[k])
    }
}

/// Horner evaluation in variable `var` of the terms (all sharing the
/// exponents of earlier variables, already factored out).
fn horner(
    terms: &[(&[u32], &Scalar)],
    var: usize,
    cache: &mut PowerCache<'_>,
    nvars: usize,
    ring: &RingSpec,
) -> Result<Polynomial> {
    let mut out = Polynomial::zero(nvars, ring);
    if terms.is_empty() {
        return Ok(out);
    }
    if var == cache.args.len() {
        // Every exponent consumed: the terms are constants.
        let mut c = Scalar::zero();
        for (_, t) in terms {
            c = ring.add(&c, t);
        }
        return Ok(Polynomial::constant(nvars, ring, c));
    }
    // Group by the exponent of `var`, highest first.
    let mut groups: BTreeMap<u32, Vec<(&[u32], &Scalar)>> = BTreeMap::new();
    for &(e, c) in terms {
        groups.entry(e[var]).or_default().push((e, c));
    }
    let mut prev: Option<u32> = None;
    for (&k, group) in groups.iter().rev() {
        if let Some(p) = prev {
            let step = cache.get(var, p - k)?.clone();
            out = out.mul_truncated(&step, cache.max_degree)?;
        }
        let inner = horner(group, var + 1, cache, nvars, ring)?;
        out = out.add(&inner)?;
        prev = Some(k);
    }
    if let Some(p) = prev {
        if p > 0 {
            let step = cache.get(var, p)?.clone();
            out = out.mul_truncated(&step, cache.max_degree)?;
        }
    }
    Ok(out)
}
