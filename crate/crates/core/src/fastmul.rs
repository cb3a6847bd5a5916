//! Packed-monomial kernel for products, determinants and compositions.
//!
//! Monomials in at most 8 variables with total degree below 4096 pack into
//! a `u128` whose integer order is the graded-lex order: the total degree in
//! the top 32 bits, then 12 bits per exponent starting with `x1`. Adding
//! packed keys multiplies monomials. A polynomial is held as sorted
//! `(key, numerator)` pairs over one common denominator, so coefficient
//! arithmetic is integer arithmetic with a gcd clean-up after each step.
//!
//! Numerators are tried first as checked `i128` (residues modulo `m` always
//! fit) and, over the rationals, again as `BigInt` after an overflow. When
//! nothing fits (too many variables, degree too high, huge modulus) the
//! functions return `None` and the caller takes the exact path.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::monomial::Exponents;
use crate::ring::{RingSpec, Scalar};

const FIELD: u32 = 12;
const MAX_VARS: usize = 8;
const DEGREE_LIMIT: u32 = 1 << FIELD;

fn pack(e: &Exponents) -> u128 {
    let mut key = u128::from(e.total_degree()) << 96;
    for (i, &k) in e.as_slice().iter().enumerate() {
        key |= u128::from(k) << (96 - FIELD * (i as u32 + 1));
    }
    key
}

fn unpack(key: u128, nvars: usize) -> Exponents {
    let exps = (0..nvars).map(|i| ((key >> (96 - FIELD * (i as u32 + 1))) & 0xFFF) as u32).collect();
    Exponents::new(exps).expect("unpacked degree fits")
}

fn degree_limit(d: u32) -> u128 {
    u128::from(d) << 96 | ((1u128 << 96) - 1)
}

fn fits(nvars: usize, degree: u32) -> bool {
    nvars > 0 && nvars <= MAX_VARS && degree < DEGREE_LIMIT
}

/// Packed monomials with integer coefficients.
type Terms<C> = Vec<(u128, C)>;

/// Integer coefficient arithmetic. `None` from any operation means
/// overflow.
trait Num: Copy {
    type C: Clone + PartialEq + core::fmt::Debug;

    fn lift(self, v: &BigInt) -> Option<Self::C>;
    fn lower(self, c: &Self::C) -> BigInt;
    fn is_zero(self, c: &Self::C) -> bool;
    fn one(self) -> Self::C;
    fn add(self, a: &Self::C, b: &Self::C) -> Option<Self::C>;
    fn mul(self, a: &Self::C, b: &Self::C) -> Option<Self::C>;
    fn neg(self, a: &Self::C) -> Self::C;
    /// Whether denominators exist at all (false modulo `m`).
    fn rational(self) -> bool;
    fn gcd(self, a: &Self::C, b: &Self::C) -> Self::C;
    fn div_exact(self, a: &Self::C, g: &Self::C) -> Self::C;
    fn lcm(self, a: &Self::C, b: &Self::C) -> Option<Self::C>;
}

#[derive(Clone, Copy)]
struct Small {
    modulus: Option<i128>,
}

impl Num for Small {
    type C = i128;

    fn lift(self, v: &BigInt) -> Option<i128> {
        v.to_i128().filter(|x| x.unsigned_abs() < 1 << 120)
    }
    fn lower(self, c: &i128) -> BigInt {
        BigInt::from(*c)
    }
    fn is_zero(self, c: &i128) -> bool {
        *c == 0
    }
    fn one(self) -> i128 {
        1
    }
    fn add(self, a: &i128, b: &i128) -> Option<i128> {
        match self.modulus {
            None => a.checked_add(*b),
            Some(m) => Some((a + b) % m),
        }
    }
    fn mul(self, a: &i128, b: &i128) -> Option<i128> {
        match self.modulus {
            None => a.checked_mul(*b),
            Some(m) => Some((a * b) % m),
        }
    }
    fn neg(self, a: &i128) -> i128 {
        match self.modulus {
            None => -a,
            Some(m) => (m - a) % m,
        }
    }
    fn rational(self) -> bool {
        self.modulus.is_none()
    }
    fn gcd(self, a: &i128, b: &i128) -> i128 {
        a.gcd(b)
    }
    fn div_exact(self, a: &i128, g: &i128) -> i128 {
        a / g
    }
    fn lcm(self, a: &i128, b: &i128) -> Option<i128> {
        (a / a.gcd(b)).checked_mul(*b)
    }
}

/// Unbounded integers, rationals only.
#[derive(Clone, Copy)]
struct Big;

impl Num for Big {
    type C = BigInt;

    fn lift(self, v: &BigInt) -> Option<BigInt> {
        Some(v.clone())
    }
    fn lower(self, c: &BigInt) -> BigInt {
        c.clone()
    }
    fn is_zero(self, c: &BigInt) -> bool {
        c.is_zero()
    }
    fn one(self) -> BigInt {
        BigInt::one()
    }
    fn add(self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a + b)
    }
    fn mul(self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a * b)
    }
    fn neg(self, a: &BigInt) -> BigInt {
        -a
    }
    fn rational(self) -> bool {
        true
    }
    fn gcd(self, a: &BigInt, b: &BigInt) -> BigInt {
        a.gcd(b)
    }
    fn div_exact(self, a: &BigInt, g: &BigInt) -> BigInt {
        a / g
    }
    fn lcm(self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a.lcm(b))
    }
}

/// `terms / denom`: keys ascending, numerators nonzero, `denom > 0` (and 1
/// modulo `m`).
#[derive(Clone, Debug, PartialEq)]
struct Packed<C> {
    terms: Terms<C>,
    denom: C,
}

fn constant<N: Num>(num: N, c: N::C, denom: N::C) -> Packed<N::C> {
    let terms = if num.is_zero(&c) { Vec::new() } else { vec![(0, c)] };
    Packed { terms, denom }
}

/// Sort by key and combine like terms, dropping zeros.
fn collect<N: Num>(num: N, mut prods: Terms<N::C>) -> Option<Terms<N::C>> {
    prods.sort_unstable_by_key(|t| t.0);
    let mut out: Terms<N::C> = Vec::with_capacity(prods.len());
    for (key, c) in prods {
        match out.last_mut() {
            Some((k, acc)) if *k == key => *acc = num.add(acc, &c)?,
            _ => {
                if out.last().is_some_and(|t| num.is_zero(&t.1)) {
                    out.pop();
                }
                out.push((key, c));
            }
        }
    }
    if out.last().is_some_and(|t| num.is_zero(&t.1)) {
        out.pop();
    }
    Some(out)
}

/// Append `(-1)^negate * a * b` to `prods`, skipping keys above `limit`.
fn product_into<N: Num>(
    num: N,
    prods: &mut Terms<N::C>,
    a: &[(u128, N::C)],
    b: &[(u128, N::C)],
    negate: bool,
    limit: Option<u128>,
) -> Option<()> {
    for (ka, ca) in a {
        let ca = if negate { num.neg(ca) } else { ca.clone() };
        for (kb, cb) in b {
            let key = ka + kb;
            if limit.is_some_and(|l| key > l) {
                // `b` ascends in degree; the rest exceed the bound too.
                break;
            }
            prods.push((key, num.mul(&ca, cb)?));
        }
    }
    Some(())
}

/// Divide numerators and denominator by their common factor.
fn normalize<N: Num>(num: N, mut p: Packed<N::C>) -> Packed<N::C> {
    let one = num.one();
    if !num.rational() || p.denom == one {
        return p;
    }
    let mut g = p.denom.clone();
    for (_, c) in &p.terms {
        g = num.gcd(&g, c);
        if g == one {
            return p;
        }
    }
    for t in &mut p.terms {
        t.1 = num.div_exact(&t.1, &g);
    }
    p.denom = num.div_exact(&p.denom, &g);
    p
}

fn rescale<N: Num>(num: N, p: &Packed<N::C>, factor: &N::C) -> Option<Terms<N::C>> {
    if *factor == num.one() {
        return Some(p.terms.clone());
    }
    p.terms.iter().map(|(k, c)| Some((*k, num.mul(c, factor)?))).collect()
}

fn add_packed<N: Num>(num: N, a: &Packed<N::C>, b: &Packed<N::C>) -> Option<Packed<N::C>> {
    if a.terms.is_empty() {
        return Some(b.clone());
    }
    if b.terms.is_empty() {
        return Some(a.clone());
    }
    let denom = num.lcm(&a.denom, &b.denom)?;
    let ta = rescale(num, a, &num.div_exact(&denom, &a.denom))?;
    let tb = rescale(num, b, &num.div_exact(&denom, &b.denom))?;
    let mut out = Vec::with_capacity(ta.len() + tb.len());
    let (mut i, mut j) = (0, 0);
    while i < ta.len() || j < tb.len() {
        if j == tb.len() || (i < ta.len() && ta[i].0 < tb[j].0) {
            out.push(ta[i].clone());
            i += 1;
        } else if i == ta.len() || tb[j].0 < ta[i].0 {
            out.push(tb[j].clone());
            j += 1;
        } else {
            let c = num.add(&ta[i].1, &tb[j].1)?;
            if !num.is_zero(&c) {
                out.push((ta[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    Some(normalize(num, Packed { terms: out, denom }))
}

fn mul_packed<N: Num>(num: N, a: &Packed<N::C>, b: &Packed<N::C>, limit: Option<u128>) -> Option<Packed<N::C>> {
    let mut prods = Vec::with_capacity(a.terms.len().saturating_mul(b.terms.len()).min(1 << 22));
    product_into(num, &mut prods, &a.terms, &b.terms, false, limit)?;
    let terms = collect(num, prods)?;
    Some(normalize(num, Packed { terms, denom: num.mul(&a.denom, &b.denom)? }))
}

/// A polynomial's terms over their least common denominator.
fn pack_poly<'a, N, I>(num: N, terms: I) -> Option<Packed<N::C>>
where
    N: Num,
    I: Iterator<Item = (&'a Exponents, &'a Scalar)> + Clone,
{
    let mut lcm = BigInt::one();
    if num.rational() {
        for (_, c) in terms.clone() {
            lcm = lcm.lcm(c.denom());
        }
    }
    let out = terms
        .map(|(e, c)| {
            let n = if num.rational() { c.numer() * (&lcm / c.denom()) } else { c.numer().clone() };
            Some((pack(e), num.lift(&n)?))
        })
        .collect::<Option<_>>()?;
    Some(Packed { terms: out, denom: num.lift(&lcm)? })
}

fn pack_scalar<N: Num>(num: N, c: &Scalar) -> Option<Packed<N::C>> {
    Some(constant(num, num.lift(c.numer())?, num.lift(c.denom())?))
}

fn unpack_poly<N: Num>(num: N, ring: &RingSpec, nvars: usize, p: Packed<N::C>) -> Vec<(Exponents, Scalar)> {
    let denom = num.lower(&p.denom);
    p.terms
        .into_iter()
        .filter_map(|(key, c)| {
            let c = match ring {
                RingSpec::Rationals => ring.from_ratio(num.lower(&c), denom.clone()).expect("nonzero denominator"),
                RingSpec::IntegersMod(_) => ring.from_bigint(num.lower(&c)),
            };
            (!c.is_zero()).then(|| (unpack(key, nvars), c))
        })
        .collect()
}

/// Evaluate `body` with machine integers, then with big integers over the
/// rationals.
macro_rules! tiered {
    ($ring:expr, |$num:ident| $body:expr) => {{
        let small = match $ring {
            RingSpec::Rationals => Some(Small { modulus: None }),
            RingSpec::IntegersMod(m) => m.value().to_i64().map(|m| Small { modulus: Some(i128::from(m)) }),
        };
        let first = small.and_then(|$num| $body);
        match first {
            Some(v) => Some(v),
            None if *$ring == RingSpec::Rationals => {
                let $num = Big;
                $body
            }
            None => None,
        }
    }};
}

/// The product as `(exponents, coefficient)` pairs in ascending order, or
/// `None` when the operands do not fit the kernel.
pub(crate) fn product<'a, I>(
    ring: &RingSpec,
    nvars: usize,
    a: I,
    b: I,
    deg_a: u32,
    deg_b: u32,
    max_degree: Option<u32>,
) -> Option<Vec<(Exponents, Scalar)>>
where
    I: Iterator<Item = (&'a Exponents, &'a Scalar)> + Clone,
{
    if !fits(nvars, deg_a.checked_add(deg_b)?) {
        return None;
    }
    let limit = max_degree.map(degree_limit);
    tiered!(ring, |num| {
        let pa = pack_poly(num, a.clone())?;
        let pb = pack_poly(num, b.clone())?;
        let p = mul_packed(num, &pa, &pb, limit)?;
        Some(unpack_poly(num, ring, nvars, p))
    })
}

fn determinant_in<'a, N, I>(num: N, rows: &[Vec<I>]) -> Option<Packed<N::C>>
where
    N: Num,
    I: Iterator<Item = (&'a Exponents, &'a Scalar)> + Clone,
{
    let k = rows.len();
    // Scale each row to integer numerators; the product of the row
    // denominators divides the result.
    let mut packed: Vec<Vec<Terms<N::C>>> = Vec::with_capacity(k);
    let mut denom = num.one();
    for row in rows {
        let whole = pack_poly(num, row.iter().flat_map(|entry| entry.clone()))?;
        let mut entries = Vec::with_capacity(row.len());
        for entry in row {
            let p = pack_poly(num, entry.clone())?;
            entries.push(rescale(num, &p, &num.div_exact(&whole.denom, &p.denom))?);
        }
        denom = num.mul(&denom, &whole.denom)?;
        packed.push(entries);
    }

    let full = (1usize << k) - 1;
    let mut minors: Vec<Option<Terms<N::C>>> = vec![None; full + 1];
    minors[0] = Some(vec![(0, num.one())]);
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); k + 1];
    for mask in 1..=full {
        by_size[mask.count_ones() as usize].push(mask);
    }
    for size in 1..=k {
        let row = &packed[k - size];
        for &mask in &by_size[size] {
            let mut prods = Vec::new();
            let mut position = 0;
            for (bit, entry) in row.iter().enumerate() {
                if mask & (1 << bit) == 0 {
                    continue;
                }
                let rest = minors[mask & !(1 << bit)].as_ref().expect("smaller minors first");
                product_into(num, &mut prods, entry, rest, position % 2 == 1, None)?;
                position += 1;
            }
            minors[mask] = Some(collect(num, prods)?);
        }
        if size >= 2 {
            for &mask in &by_size[size - 2] {
                minors[mask] = None;
            }
        }
    }
    let det = minors[full].take().expect("full minor");
    Some(normalize(num, Packed { terms: det, denom }))
}

/// Determinant of a square matrix given row by row, by memoized Laplace
/// expansion: `minors[mask]` is the determinant of the last `popcount(mask)`
/// rows on the columns in `mask`.
pub(crate) fn determinant<'a, I>(
    ring: &RingSpec,
    nvars: usize,
    rows: &[Vec<I>],
    row_degrees: &[u32],
) -> Option<Vec<(Exponents, Scalar)>>
where
    I: Iterator<Item = (&'a Exponents, &'a Scalar)> + Clone,
{
    let total: u32 = row_degrees.iter().try_fold(0u32, |acc, &d| acc.checked_add(d))?;
    if rows.is_empty() || rows.len() > 16 || !fits(nvars, total) {
        return None;
    }
    tiered!(ring, |num| determinant_in(num, rows).map(|p| unpack_poly(num, ring, nvars, p)))
}

struct Powers<'a, N: Num> {
    num: N,
    args: &'a [Packed<N::C>],
    limit: Option<u128>,
    powers: Vec<Vec<Packed<N::C>>>,
}

impl<N: Num> Powers<'_, N> {
    fn get(&mut self, var: usize, k: u32) -> Option<Packed<N::C>> {
        let num = self.num;
        let list = &mut self.powers[var];
        if list.is_empty() {
            list.push(constant(num, num.one(), num.one()));
        }
        while list.len() <= k as usize {
            let next = mul_packed(num, &list[list.len() - 1], &self.args[var], self.limit)?;
            list.push(next);
        }
        Some(list[k as usize].clone())
    }
}

/// Horner evaluation in `var` of terms that agree on earlier exponents.
fn horner<N: Num>(terms: &[(&[u32], &Scalar)], var: usize, powers: &mut Powers<'_, N>) -> Option<Packed<N::C>> {
    let num = powers.num;
    let zero = || constant(num, num.lift(&BigInt::zero()).expect("zero fits"), num.one());
    if var == powers.args.len() {
        let mut acc = zero();
        for (_, c) in terms {
            acc = add_packed(num, &acc, &pack_scalar(num, c)?)?;
        }
        return Some(acc);
    }
    // Group by the exponent of `var`, highest first.
    let mut sorted: Vec<(&[u32], &Scalar)> = terms.to_vec();
    sorted.sort_by(|a, b| b.0[var].cmp(&a.0[var]));
    let mut out = zero();
    let mut prev: Option<u32> = None;
    let mut start = 0;
    while start < sorted.len() {
        let k = sorted[start].0[var];
        let end = start + sorted[start..].iter().take_while(|t| t.0[var] == k).count();
        if let Some(p) = prev {
            out = mul_packed(num, &out, &powers.get(var, p - k)?, powers.limit)?;
        }
        let inner = horner(&sorted[start..end], var + 1, powers)?;
        out = add_packed(num, &out, &inner)?;
        prev = Some(k);
        start = end;
    }
    if let Some(p) = prev.filter(|&p| p > 0) {
        out = mul_packed(num, &out, &powers.get(var, p)?, powers.limit)?;
    }
    Some(out)
}

fn compose_in<'a, N, I>(num: N, terms: &[(&[u32], &Scalar)], args: &[I], limit: Option<u128>) -> Option<Packed<N::C>>
where
    N: Num,
    I: Iterator<Item = (&'a Exponents, &'a Scalar)> + Clone,
{
    let packed = args.iter().map(|a| Some(normalize(num, pack_poly(num, a.clone())?))).collect::<Option<Vec<_>>>()?;
    let mut powers = Powers { num, args: &packed, limit, powers: vec![Vec::new(); args.len()] };
    let mut out = horner(terms, 0, &mut powers)?;
    if let Some(l) = limit {
        out.terms.retain(|t| t.0 <= l);
    }
    Some(out)
}

/// `p(args)` with terms above `max_degree` dropped after every product.
/// `terms` are the terms of `p`; `bound` is an upper bound on the degree of
/// every intermediate result.
pub(crate) fn compose<'a, I>(
    ring: &RingSpec,
    nvars: usize,
    terms: &[(&[u32], &Scalar)],
    args: &[I],
    bound: u32,
    max_degree: Option<u32>,
) -> Option<Vec<(Exponents, Scalar)>>
where
    I: Iterator<Item = (&'a Exponents, &'a Scalar)> + Clone,
{
    let bound = max_degree.map_or(bound, |d| d.min(bound));
    // Products are formed before truncation, so allow twice the bound.
    if !fits(nvars, bound.checked_mul(2)?) {
        return None;
    }
    let limit = max_degree.map(degree_limit);
    tiered!(ring, |num| compose_in(num, terms, args, limit).map(|p| unpack_poly(num, ring, nvars, p)))
}
