//! Block cipher keyed by polynomial automorphisms of `(Z/mZ)^n`.
//!
//! Full-invariance keys encrypt with
//! `u_i = x_i + phi_i(xi)` for `i < n`, `u_n = x_n - sum a_i phi_i(xi)` where
//! `xi = sum a_i x_i + x_n`; `xi` takes the same value on `u`, which gives the
//! decryption map. Triangular keys encrypt with
//! `u_i = lambda_i x_i + f_i(x_1, ..., x_{i-1})` and decrypt by back
//! substitution.
//!
//! Byte messages are framed as an 8-byte big-endian length, the message, and
//! zero padding up to a multiple of `n`. Every byte becomes one ring element
//! (so `m >= 257`) and every ciphertext element is written big-endian in
//! `ceil(log256 m)` bytes.
//!
//! Keys are drawn with SplitMix64: the state advances by
//! `0x9E3779B97F4A7C15` and the output is the state mixed by
//! `z = (z ^ z >> 30) * 0xBF58476D1CE4E5B9`,
//! `z = (z ^ z >> 27) * 0x94D049BB133111EB`, `z ^ z >> 31`.
//! The scheme is a demonstration and makes no security claim.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::monomial::Exponents;
use crate::poly::Polynomial;
use crate::ring::{Modulus, RingSpec, Scalar};
use crate::univariate::UniPoly;

/// Bytes of the big-endian length header.
pub const HEADER_LEN: usize = 8;
/// Smallest modulus into which every byte embeds.
pub const MIN_BYTE_MODULUS: u64 = 257;
/// Re-draws allowed for each triangular `lambda_i`.
pub const LAMBDA_ATTEMPTS: usize = 64;
pub const DEFAULT_MAX_DEGREE: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CipherVariant {
    FullInvariance,
    Triangular,
}

impl CipherVariant {
    pub const ALL: [CipherVariant; 2] = [CipherVariant::FullInvariance, CipherVariant::Triangular];

    pub fn name(self) -> &'static str {
        match self {
            CipherVariant::FullInvariance => "full_invariance",
            CipherVariant::Triangular => "triangular",
        }
    }
}

impl fmt::Display for CipherVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CipherVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::BadDimension(format!("unknown cipher variant `{s}`")))
    }
}

/// Coefficients and generators of a key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KeyMaterial {
    /// `a_1..a_{n-1}` (with `a_n = 1`) and `phi_1..phi_{n-1}`.
    FullInvariance { a: Vec<Scalar>, phis: Vec<UniPoly> },
    /// `lambda_1..lambda_n` and `f_2..f_n`, each `f_i` a polynomial in
    /// `x_1..x_{i-1}` written over all `n` variables.
    Triangular { lambdas: Vec<Scalar>, fs: Vec<Polynomial> },
}

/// Machine-word copy of a key whose modulus fits in `u64`.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Words {
    FullInvariance { a: Vec<u64>, phis: Vec<Vec<u64>> },
    Triangular { lambdas: Vec<u64>, inv_lambdas: Vec<u64>, fs: Vec<Vec<(Vec<u32>, u64)>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherKey {
    n: usize,
    ring: RingSpec,
    material: KeyMaterial,
    inv_lambdas: Vec<Scalar>,
    words: Option<(u64, Words)>,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) + u128::from(b)) % u128::from(m)) as u64
}

fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    add_mod(a, m - b, m)
}

fn pow_mod(mut b: u64, mut e: u32, m: u64) -> u64 {
    let mut r = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn word(s: &Scalar) -> u64 {
    s.to_u64().expect("canonical residue below a u64 modulus")
}

impl CipherKey {
    /// Validate and assemble a key over `Z/mZ`.
    pub fn new(ring: &RingSpec, material: KeyMaterial) -> Result<Self> {
        if ring.modulus().is_none() {
            return Err(Error::BadModulus("cipher keys live over Z/mZ".into()));
        }
        let (n, inv_lambdas) = match &material {
            KeyMaterial::FullInvariance { a, phis } => {
                if a.len() != phis.len() {
                    return Err(Error::ArityMismatch { expected: a.len(), found: phis.len() });
                }
                for c in a {
                    ring.check(c)?;
                }
                for (i, phi) in phis.iter().enumerate() {
                    if phi.ring() != ring {
                        return Err(Error::RingMismatch);
                    }
                    if !phi.has_no_affine_part() {
                        return Err(Error::DegenerateGenerator(format!("phi_{} has a constant or linear term", i + 1)));
                    }
                }
                (a.len() + 1, Vec::new())
            }
            KeyMaterial::Triangular { lambdas, fs } => {
                let n = lambdas.len();
                if fs.len() + 1 != n {
                    return Err(Error::ArityMismatch { expected: n.saturating_sub(1), found: fs.len() });
                }
                let mut inv = Vec::with_capacity(n);
                for (i, l) in lambdas.iter().enumerate() {
                    ring.check(l)?;
                    inv.push(ring.inv(l).ok_or(Error::NonInvertibleLambda { index: i + 1 })?);
                }
                for (k, f) in fs.iter().enumerate() {
                    let component = k + 2;
                    if f.ring() != ring {
                        return Err(Error::RingMismatch);
                    }
                    if f.nvars() != n {
                        return Err(Error::ArityMismatch { expected: n, found: f.nvars() });
                    }
                    if let Some(j) = (component - 1..n).find(|&j| f.depends_on(j)) {
                        return Err(Error::TriangularityViolated { component, variable: j + 1 });
                    }
                    if f.lowest_degree().finite().is_some_and(|d| d < 2) {
                        return Err(Error::DegenerateGenerator(format!("f_{component} has a constant or linear term")));
                    }
                }
                (n, inv)
            }
        };
        if n < 2 {
            return Err(Error::BadDimension(format!("block dimension {n} (must be at least 2)")));
        }
        let words = ring.modulus().and_then(|m| m.value().to_u64()).map(|m| {
            let w = match &material {
                KeyMaterial::FullInvariance { a, phis } => Words::FullInvariance {
                    a: a.iter().map(word).collect(),
                    phis: phis.iter().map(|p| p.coeffs().iter().map(word).collect()).collect(),
                },
                KeyMaterial::Triangular { lambdas, fs } => Words::Triangular {
                    lambdas: lambdas.iter().map(word).collect(),
                    inv_lambdas: inv_lambdas.iter().map(word).collect(),
                    fs: fs.iter().map(|f| f.terms().map(|(e, c)| (e.as_slice().to_vec(), word(c))).collect()).collect(),
                },
            };
            (m, w)
        });
        Ok(Self { n, ring: ring.clone(), material, inv_lambdas, words })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn modulus(&self) -> &Modulus {
        self.ring.modulus().expect("validated on construction")
    }

    pub fn variant(&self) -> CipherVariant {
        match self.material {
            KeyMaterial::FullInvariance { .. } => CipherVariant::FullInvariance,
            KeyMaterial::Triangular { .. } => CipherVariant::Triangular,
        }
    }

    pub fn material(&self) -> &KeyMaterial {
        &self.material
    }

    fn check_block(&self, x: &[Scalar]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::BlockLengthMismatch { expected: self.n, found: x.len() });
        }
        x.iter().try_for_each(|v| self.ring.check(v))
    }

    /// `xi = sum a_i x_i + x_n` and the values `phi_i(xi)`.
    fn invariant_and_shifts(&self, a: &[Scalar], phis: &[UniPoly], x: &[Scalar]) -> Vec<Scalar> {
        let r = &self.ring;
        let xi = a.iter().zip(x).fold(x[self.n - 1].clone(), |acc, (ai, xi)| r.add(&acc, &r.mul(ai, xi)));
        phis.iter().map(|p| p.evaluate(&xi)).collect()
    }

    pub fn encrypt_block(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_block(x)?;
        let r = &self.ring;
        let n = self.n;
        match &self.material {
            KeyMaterial::FullInvariance { a, phis } => {
                let shifts = self.invariant_and_shifts(a, phis, x);
                let mut u: Vec<Scalar> = x[..n - 1].iter().zip(&shifts).map(|(xi, s)| r.add(xi, s)).collect();
                let last = a.iter().zip(&shifts).fold(x[n - 1].clone(), |acc, (ai, s)| r.sub(&acc, &r.mul(ai, s)));
                u.push(last);
                Ok(u)
            }
            KeyMaterial::Triangular { lambdas, fs } => {
                let mut u = Vec::with_capacity(n);
                u.push(r.mul(&lambdas[0], &x[0]));
                for i in 1..n {
                    let f = fs[i - 1].evaluate(x)?;
                    u.push(r.add(&r.mul(&lambdas[i], &x[i]), &f));
                }
                Ok(u)
            }
        }
    }

    pub fn decrypt_block(&self, u: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_block(u)?;
        let r = &self.ring;
        let n = self.n;
        match &self.material {
            KeyMaterial::FullInvariance { a, phis } => {
                let shifts = self.invariant_and_shifts(a, phis, u);
                let mut x: Vec<Scalar> = u[..n - 1].iter().zip(&shifts).map(|(ui, s)| r.sub(ui, s)).collect();
                let last = a.iter().zip(&shifts).fold(u[n - 1].clone(), |acc, (ai, s)| r.add(&acc, &r.mul(ai, s)));
                x.push(last);
                Ok(x)
            }
            KeyMaterial::Triangular { fs, .. } => {
                // Later entries are still zero when f_i is evaluated and f_i
                // ignores them.
                let mut x = vec![Scalar::zero(); n];
                x[0] = r.mul(&self.inv_lambdas[0], &u[0]);
                for i in 1..n {
                    let f = fs[i - 1].evaluate(&x)?;
                    x[i] = r.mul(&self.inv_lambdas[i], &r.sub(&u[i], &f));
                }
                Ok(x)
            }
        }
    }

    fn words(&self) -> Result<&(u64, Words)> {
        self.words.as_ref().ok_or_else(|| Error::BadModulus(format!("{} does not fit in 64 bits", self.modulus())))
    }

    fn word_shifts(a: &[u64], phis: &[Vec<u64>], x: &[u64], m: u64) -> Vec<u64> {
        let n = x.len();
        let xi = a.iter().zip(x).fold(x[n - 1], |acc, (&ai, &xv)| add_mod(acc, mul_mod(ai, xv, m), m));
        phis.iter().map(|p| p.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, xi, m), c, m))).collect()
    }

    fn eval_terms(terms: &[(Vec<u32>, u64)], x: &[u64], m: u64) -> u64 {
        terms.iter().fold(0, |acc, (e, c)| {
            let t = e.iter().zip(x).fold(*c, |t, (&k, &v)| if k == 0 { t } else { mul_mod(t, pow_mod(v, k, m), m) });
            add_mod(acc, t, m)
        })
    }

    /// Word-level twin of [`Self::encrypt_block`], in place.
    fn encrypt_words(&self, x: &mut [u64]) -> Result<()> {
        let (m, w) = self.words()?;
        let m = *m;
        let n = self.n;
        match w {
            Words::FullInvariance { a, phis } => {
                let shifts = Self::word_shifts(a, phis, x, m);
                let mut last = x[n - 1];
                for i in 0..n - 1 {
                    x[i] = add_mod(x[i], shifts[i], m);
                    last = sub_mod(last, mul_mod(a[i], shifts[i], m), m);
                }
                x[n - 1] = last;
            }
            Words::Triangular { lambdas, fs, .. } => {
                // Descending order keeps x_1..x_{i-1} unencrypted while f_i
                // reads them.
                for i in (1..n).rev() {
                    let f = Self::eval_terms(&fs[i - 1], x, m);
                    x[i] = add_mod(mul_mod(lambdas[i], x[i], m), f, m);
                }
                x[0] = mul_mod(lambdas[0], x[0], m);
            }
        }
        Ok(())
    }

    /// Word-level twin of [`Self::decrypt_block`], in place.
    fn decrypt_words(&self, u: &mut [u64]) -> Result<()> {
        let (m, w) = self.words()?;
        let m = *m;
        let n = self.n;
        match w {
            Words::FullInvariance { a, phis } => {
                let shifts = Self::word_shifts(a, phis, u, m);
                let mut last = u[n - 1];
                for i in 0..n - 1 {
                    u[i] = sub_mod(u[i], shifts[i], m);
                    last = add_mod(last, mul_mod(a[i], shifts[i], m), m);
                }
                u[n - 1] = last;
            }
            Words::Triangular { inv_lambdas, fs, .. } => {
                u[0] = mul_mod(inv_lambdas[0], u[0], m);
                for i in 1..n {
                    let f = Self::eval_terms(&fs[i - 1], u, m);
                    u[i] = mul_mod(inv_lambdas[i], sub_mod(u[i], f, m), m);
                }
            }
        }
        Ok(())
    }

    fn check_byte_modulus(&self) -> Result<(u64, usize)> {
        let (m, _) = self.words()?;
        if *m < MIN_BYTE_MODULUS {
            return Err(Error::BadModulus(format!("{m} (byte messages need at least {MIN_BYTE_MODULUS})")));
        }
        Ok((*m, self.modulus().byte_width()))
    }

    /// Frame, pad and encrypt a byte message.
    pub fn encrypt_bytes(&self, msg: &[u8]) -> Result<Vec<u8>> {
        let (_, width) = self.check_byte_modulus()?;
        let len = u64::try_from(msg.len()).map_err(|_| Error::MalformedCiphertext("message too long".into()))?;
        let mut words: Vec<u64> = len.to_be_bytes().iter().chain(msg).map(|&b| u64::from(b)).collect();
        words.resize(words.len().div_ceil(self.n) * self.n, 0);
        let mut out = Vec::with_capacity(words.len() * width);
        for block in words.chunks_mut(self.n) {
            self.encrypt_words(block)?;
            for &v in block.iter() {
                out.extend_from_slice(&v.to_be_bytes()[8 - width..]);
            }
        }
        Ok(out)
    }

    /// Inverse of [`Self::encrypt_bytes`]. Rejects ciphertexts whose length,
    /// element values, length header or padding do not match the framing.
    pub fn decrypt_bytes(&self, ct: &[u8]) -> Result<Vec<u8>> {
        let (m, width) = self.check_byte_modulus()?;
        let malformed = |msg: &str| Error::MalformedCiphertext(msg.to_string());
        let block_bytes = self.n * width;
        if !ct.len().is_multiple_of(block_bytes) {
            return Err(Error::MalformedCiphertext(format!(
                "length {} is not a multiple of the block size {block_bytes}",
                ct.len()
            )));
        }
        let mut words = Vec::with_capacity(ct.len() / width);
        for chunk in ct.chunks(width) {
            let v = chunk.iter().fold(0u64, |acc, &b| (acc << 8) | u64::from(b));
            if v >= m {
                return Err(malformed("element outside the ring"));
            }
            words.push(v);
        }
        for block in words.chunks_mut(self.n) {
            self.decrypt_words(block)?;
        }
        let mut bytes = Vec::with_capacity(words.len());
        for v in words {
            bytes.push(u8::try_from(v).map_err(|_| malformed("decrypted element is not a byte"))?);
        }
        if bytes.len() < HEADER_LEN {
            return Err(malformed("missing length header"));
        }
        let mut header = [0u8; HEADER_LEN];
        header.copy_from_slice(&bytes[..HEADER_LEN]);
        let len = u64::from_be_bytes(header);
        let body = bytes.len() - HEADER_LEN;
        let len = usize::try_from(len).ok().filter(|&l| l <= body).ok_or_else(|| {
            Error::MalformedCiphertext(format!("length header {len} exceeds the {body} payload bytes"))
        })?;
        let framed = (HEADER_LEN + len).div_ceil(self.n) * self.n;
        if framed != bytes.len() {
            return Err(malformed("padding longer than one block"));
        }
        if bytes[HEADER_LEN + len..].iter().any(|&b| b != 0) {
            return Err(malformed("nonzero padding"));
        }
        bytes.truncate(HEADER_LEN + len);
        bytes.drain(..HEADER_LEN);
        Ok(bytes)
    }
}

/// SplitMix64 generator (64-bit state).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, bound)` by rejection; `bound > 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }
}

/// Draw `lambda_index` from `candidates` until one is a unit modulo `m`.
fn draw_lambda(ring: &RingSpec, index: usize, mut candidates: impl FnMut() -> u64) -> Result<Scalar> {
    for _ in 0..LAMBDA_ATTEMPTS {
        let l = ring.from_u64(candidates());
        if ring.is_unit(&l) {
            return Ok(l);
        }
    }
    Err(Error::NonInvertibleLambda { index })
}

/// Key for the given variant over `Z/mZ`, `m >= 2`, with generator degrees
/// at most `max_degree`, drawn from `rng`. Each `phi_i` has a random degree in
/// `2..=max_degree` and a nonzero leading coefficient; each `f_i` has one to
/// three random terms of degree `2..=max_degree` in `x_1..x_{i-1}`.
pub fn keygen_with(
    variant: CipherVariant,
    n: usize,
    m: u64,
    max_degree: u32,
    rng: &mut SplitMix64,
) -> Result<CipherKey> {
    let ring = RingSpec::integers_mod(m)?;
    if n < 2 {
        return Err(Error::BadDimension(format!("block dimension {n} (must be at least 2)")));
    }
    if max_degree < 2 {
        return Err(Error::BadDimension(format!("generator degree bound {max_degree} (must be at least 2)")));
    }
    let span = u64::from(max_degree - 1);
    let material = match variant {
        CipherVariant::FullInvariance => {
            let a = (0..n - 1).map(|_| ring.from_u64(rng.below(m))).collect();
            let phis = (0..n - 1)
                .map(|_| {
                    let d = 2 + rng.below(span) as usize;
                    let mut coeffs = vec![Scalar::zero(); d + 1];
                    for c in coeffs.iter_mut().take(d).skip(2) {
                        *c = ring.from_u64(rng.below(m));
                    }
                    coeffs[d] = ring.from_u64(1 + rng.below(m - 1));
                    UniPoly::new(&ring, coeffs)
                })
                .collect::<Result<Vec<_>>>()?;
            KeyMaterial::FullInvariance { a, phis }
        }
        CipherVariant::Triangular => {
            let lambdas = (0..n).map(|i| draw_lambda(&ring, i + 1, || rng.below(m))).collect::<Result<Vec<_>>>()?;
            let fs = (2..=n)
                .map(|i| {
                    let terms = 1 + rng.below(3);
                    let mut f = Polynomial::zero(n, &ring);
                    for _ in 0..terms {
                        let d = 2 + rng.below(span);
                        let mut exps = vec![0u32; n];
                        for _ in 0..d {
                            exps[rng.below(i as u64 - 1) as usize] += 1;
                        }
                        let c = ring.from_u64(1 + rng.below(m - 1));
                        f = f.add(&Polynomial::monomial(&ring, Exponents::new(exps)?, c))?;
                    }
                    Ok(f)
                })
                .collect::<Result<Vec<_>>>()?;
            KeyMaterial::Triangular { lambdas, fs }
        }
    };
    CipherKey::new(&ring, material)
}

/// Reproducible key from `seed`; requires `m >= 257` so byte messages embed.
pub fn keygen(variant: CipherVariant, n: usize, m: u64, seed: u64, max_degree: u32) -> Result<CipherKey> {
    if m < MIN_BYTE_MODULUS {
        return Err(Error::BadModulus(format!("{m} (must be at least {MIN_BYTE_MODULUS})")));
    }
    keygen_with(variant, n, m, max_degree, &mut SplitMix64::new(seed))
}
