//! Text form of polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := int | int '/' uint | var | var '^' uint | '(' expr ')'
//! var    := 'x' uint            (1-based: x1, x2, ...)
//! ```
//!
//! Whitespace is ignored. Multiplication must be explicit (`2*x1`, never
//! `2x1`); `int '/' uint` is accepted only over the rationals. The
//! [`Display`](core::fmt::Display) impl of [`Polynomial`] is the canonical
//! printer: terms in descending graded-lex order, and its output parses back
//! to the identical polynomial.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::monomial::Exponents;
use crate::poly::Polynomial;
use crate::ring::{RingSpec, Scalar};

pub fn parse_polynomial(text: &str, nvars: usize, ring: &RingSpec) -> Result<Polynomial> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, nvars, ring };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.unexpected());
    }
    Ok(out)
}

/// A single ring element: `int`, `-int` or, over the rationals, `int/uint`.
pub fn parse_scalar(text: &str, ring: &RingSpec) -> Result<Scalar> {
    let p = parse_polynomial(text, 0, ring)?;
    Ok(p.constant_term())
}

/// `Q` or `Zmod m`.
pub fn parse_ring(text: &str) -> Result<RingSpec> {
    let t = text.trim();
    if t == "Q" {
        return Ok(RingSpec::Rationals);
    }
    let m = t
        .strip_prefix("Zmod")
        .map(str::trim)
        .filter(|m| !m.is_empty() && m.chars().all(|c| c.is_ascii_digit()))
        .ok_or_else(|| Error::Syntax { column: 1, message: format!("expected `Q` or `Zmod m`, found `{t}`") })?;
    let m: num_bigint::BigUint = m.parse().expect("digits");
    Ok(RingSpec::IntegersMod(crate::ring::Modulus::new(m)?))
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    nvars: usize,
    ring: &'a RingSpec,
}

impl Parser<'_> {
    fn column(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn syntax(&self, message: impl Into<String>) -> Error {
        Error::Syntax { column: self.column(), message: message.into() }
    }

    fn unexpected(&self) -> Error {
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_alphanumeric() || *c == '(' => {
                self.syntax(format!("expected an operator before `{c}` (multiplication must be explicit)"))
            }
            Some(c) => self.syntax(format!("unexpected `{c}`")),
            None => self.syntax("unexpected end of input"),
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        match self.peek() {
            Some('-') => {
                negate = true;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            match self.peek() {
                Some(op @ ('+' | '-')) => {
                    self.pos += 1;
                    acc.accumulate(self.term()?, op == '-');
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn digits(&mut self) -> Option<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some((start + 1, self.chars[start..self.pos].iter().collect()))
        }
    }

    fn uint(&mut self, what: &str) -> Result<(usize, String)> {
        self.digits().ok_or_else(|| self.syntax(format!("expected {what}")))
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('x') => {
                let column = self.column();
                self.pos += 1;
                // The index must follow `x` immediately.
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let name = format!("x{digits}");
                let index: usize = match digits.parse() {
                    Ok(i) if i >= 1 && i <= self.nvars => i,
                    _ => return Err(Error::UnknownVariable { column, name }),
                };
                let mut power = 1u32;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let (col, d) = self.uint("an exponent")?;
                    power = d.parse().map_err(|_| Error::Syntax {
                        column: col,
                        message: "exponent does not fit in 32 bits".to_string(),
                    })?;
                }
                Ok(Polynomial::monomial(self.ring, Exponents::unit(self.nvars, index - 1, power), Scalar::one()))
            }
            Some(c) if c.is_ascii_digit() => {
                let (_, num) = self.uint("a number")?;
                let num: BigInt = num.parse().expect("digits");
                let value = if self.peek() == Some('/') {
                    self.pos += 1;
                    let (col, den) = self.uint("a denominator")?;
                    let den: BigInt = den.parse().expect("digits");
                    if *self.ring != RingSpec::Rationals {
                        return Err(Error::RingMismatch);
                    }
                    if den.is_zero() {
                        return Err(Error::Syntax { column: col, message: "zero denominator".to_string() });
                    }
                    self.ring.from_ratio(num, den)?
                } else {
                    self.ring.from_bigint(num)
                };
                Ok(Polynomial::constant(self.nvars, self.ring, value))
            }
            _ => Err(match self.chars.get(self.pos) {
                Some(c) => self.syntax(format!("expected a number, variable or `(`, found `{c}`")),
                None => self.syntax("unexpected end of input"),
            }),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (exps, c)) in self.terms().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if exps.is_constant() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            let mut first = true;
            for (j, &k) in exps.as_slice().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                if k == 1 {
                    write!(f, "x{}", j + 1)?;
                } else {
                    write!(f, "x{}^{}", j + 1, k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn q(text: &str, n: usize) -> Result<Polynomial> {
        parse_polynomial(text, n, &RingSpec::Rationals)
    }

    #[test]
    fn scalars_and_rings() {
        let q = RingSpec::Rationals;
        assert_eq!(parse_scalar("-3/6", &q).unwrap(), q.from_ratio((-1).into(), 2.into()).unwrap());
        assert_eq!(parse_scalar(" 7 ", &q).unwrap(), q.from_i64(7));
        assert!(matches!(parse_scalar("x1", &q), Err(Error::UnknownVariable { .. })));
        let z = parse_ring("Zmod 101").unwrap();
        assert_eq!(z, RingSpec::integers_mod(101).unwrap());
        assert_eq!(parse_scalar("-1", &z).unwrap(), z.from_i64(100));
        assert_eq!(parse_scalar("1/2", &z), Err(Error::RingMismatch));
        assert_eq!(parse_ring(" Q ").unwrap(), q);
        assert_eq!(parse_ring(&z.to_string()).unwrap(), z);
        assert!(matches!(parse_ring("Zmod 1"), Err(Error::BadModulus(_))));
        assert!(matches!(parse_ring("R"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn canonical_printing() {
        let p = q("x2 + x1^2 - 1/2 + 3*x1*x2 - x1", 2).unwrap();
        assert_eq!(p.to_string(), "x1^2 + 3*x1*x2 - x1 + x2 - 1/2");
        assert_eq!(q("-x1", 1).unwrap().to_string(), "-x1");
        assert_eq!(q("0*x1", 1).unwrap().to_string(), "0");
        assert_eq!(q("-7", 3).unwrap().to_string(), "-7");
    }

    #[test]
    fn print_parse_round_trip() {
        for text in ["x1^2 + 3*x1*x2 - x1 + x2 - 1/2", "-2/3*x1^5*x3 + x2", "0", "1"] {
            let p = q(text, 3).unwrap();
            assert_eq!(q(&p.to_string(), 3).unwrap(), p);
            assert_eq!(p.to_string(), text);
        }
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        match q("2x1", 1) {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(q("x1 x2", 2), Err(Error::Syntax { column: 4, .. })));
        assert!(matches!(q("(x1)(x2)", 2), Err(Error::Syntax { .. })));
    }

    #[test]
    fn unknown_variables_carry_location() {
        assert_eq!(q("x1 + x3", 2), Err(Error::UnknownVariable { column: 6, name: "x3".into() }));
        assert!(matches!(q("x0", 2), Err(Error::UnknownVariable { .. })));
        assert!(matches!(q("x", 2), Err(Error::UnknownVariable { .. })));
        assert!(matches!(q("y", 2), Err(Error::Syntax { column: 1, .. })));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(q("", 1), Err(Error::Syntax { .. })));
        assert!(matches!(q("x1 +", 1), Err(Error::Syntax { .. })));
        assert!(matches!(q("(x1 + 1", 1), Err(Error::Syntax { .. })));
        assert!(matches!(q("1/0", 1), Err(Error::Syntax { .. })));
        assert!(matches!(q("x1^", 1), Err(Error::Syntax { .. })));
        assert!(matches!(q("x1^99999999999", 1), Err(Error::Syntax { .. })));
    }

    #[test]
    fn fractions_only_over_rationals() {
        let z5 = RingSpec::integers_mod(5).unwrap();
        assert_eq!(parse_polynomial("1/2*x1", 1, &z5), Err(Error::RingMismatch));
        let p = parse_polynomial("-x1 + 7", 1, &z5).unwrap();
        assert_eq!(p.to_string(), "4*x1 + 2");
    }
}
