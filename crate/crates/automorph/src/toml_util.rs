//! Shared pieces of the TOML file formats.

use automorph_core::parse::{parse_polynomial, parse_scalar};
use automorph_core::{Polynomial, RingSpec, Scalar};
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{locate, ParseError, ParseErrorKind};

/// A number written either as a TOML integer or as a string such as
/// `"-3/4"` or `"340282366920938463463374607431768211507"`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub(crate) enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    /// Integer form when it fits, string form otherwise.
    pub(crate) fn from_scalar(s: &Scalar) -> Self {
        match (s.is_integer(), s.to_string().parse::<i64>()) {
            (true, Ok(v)) => Number::Int(v),
            _ => Number::Text(s.to_string()),
        }
    }
}

/// Error at byte `span.start` of `text`.
pub(crate) fn at<T>(text: &str, value: &Spanned<T>, kind: ParseErrorKind) -> ParseError {
    let (line, column) = locate(text, value.span().start);
    ParseError::new(line, column, kind)
}

pub(crate) fn invalid<T>(text: &str, value: &Spanned<T>, msg: impl Into<String>) -> ParseError {
    at(text, value, ParseErrorKind::Invalid(msg.into()))
}

pub(crate) fn from_toml(text: &str, err: toml::de::Error) -> ParseError {
    let (line, column) = err.span().map_or((1, 1), |s| locate(text, s.start));
    ParseError::new(line, column, ParseErrorKind::Syntax(err.message().to_string()))
}

/// Where the characters of a basic string value start: one past the quote.
fn string_start(text: &str, value: &Spanned<String>) -> (usize, usize) {
    let (line, column) = locate(text, value.span().start);
    let quoted = text[value.span()].starts_with(['"', '\'']);
    (line, column + usize::from(quoted))
}

pub(crate) fn scalar(text: &str, value: &Spanned<Number>, ring: &RingSpec) -> Result<Scalar, ParseError> {
    match value.get_ref() {
        Number::Int(v) => Ok(ring.from_i64(*v)),
        Number::Text(s) => {
            let (line, column) = locate(text, value.span().start);
            parse_scalar(s, ring).map_err(|e| ParseError::from_core(e, line, column + 1))
        }
    }
}

pub(crate) fn polynomial(
    text: &str,
    value: &Spanned<String>,
    nvars: usize,
    ring: &RingSpec,
) -> Result<Polynomial, ParseError> {
    let (line, column) = string_start(text, value);
    parse_polynomial(value.get_ref(), nvars, ring).map_err(|e| ParseError::from_core(e, line, column))
}
