//! Text form of a polynomial map.
//!
//! ```text
//! # comment
//! vars: 2
//! ring: Q
//! family: dim2_homogeneous
//! x1 + x2^2
//! x2
//! ```
//!
//! The `vars` and `ring` header lines come first, then any `key: value`
//! metadata lines, then one component per line. Blank lines and lines
//! starting with `#` are skipped. Printing is canonical, so a printed
//! document parses back to an equal document and prints identically.

use std::fmt;

use automorph_core::parse::{parse_polynomial, parse_ring};
use automorph_core::{PolyMap, Polynomial, RingSpec};

use crate::error::{ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDocument {
    pub nvars: usize,
    pub ring: RingSpec,
    /// `key: value` pairs in file order; keys are unique.
    pub metadata: Vec<(String, String)>,
    pub components: Vec<Polynomial>,
}

fn valid_key(key: &str) -> bool {
    !key.is_empty() && key.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl MapDocument {
    pub fn from_map(map: &PolyMap) -> Self {
        Self {
            nvars: map.nvars(),
            ring: map.ring().clone(),
            metadata: Vec::new(),
            components: map.components().to_vec(),
        }
    }

    /// Append a metadata entry, replacing an earlier one with the same key.
    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        assert!(valid_key(key), "metadata key `{key}`");
        let value = value.to_string().replace('\n', " ");
        self.metadata.retain(|(k, _)| k != key);
        self.metadata.push((key.to_string(), value.trim().to_string()));
        self
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_map(&self) -> automorph_core::Result<PolyMap> {
        PolyMap::new(self.components.clone())
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let syntax = |line, column, msg: String| ParseError::new(line, column, ParseErrorKind::Syntax(msg));
        let mut nvars = None;
        let mut ring = None;
        let mut metadata: Vec<(String, String)> = Vec::new();
        let mut components = Vec::new();
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let indent = raw.len() - raw.trim_start().len();
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let column = raw[..indent].chars().count() + 1;

            let Some((key, value)) = body.split_once(':') else {
                let (Some(n), Some(r)) = (nvars, ring.as_ref()) else {
                    return Err(syntax(line, column, "expected the `vars:` and `ring:` header lines first".into()));
                };
                let p = parse_polynomial(body, n, r).map_err(|e| ParseError::from_core(e, line, column))?;
                components.push(p);
                continue;
            };
            let key = key.trim_end();
            let value_col = column + body[..=body.find(':').expect("split")].chars().count();
            let value_col = value_col + value.chars().take_while(|c| c.is_whitespace()).count();
            let value = value.trim();
            match (key, nvars.is_some(), ring.is_some()) {
                ("vars", false, _) => {
                    let n: usize = value.parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
                        syntax(line, value_col, format!("expected a positive integer, found `{value}`"))
                    })?;
                    nvars = Some(n);
                }
                (_, false, _) => return Err(syntax(line, column, format!("expected `vars:`, found `{key}:`"))),
                ("ring", true, false) => {
                    ring = Some(parse_ring(value).map_err(|e| match e {
                        automorph_core::Error::Syntax { message, .. } => syntax(line, value_col, message),
                        other => ParseError::new(line, value_col, ParseErrorKind::Invalid(other.to_string())),
                    })?);
                }
                (_, true, false) => return Err(syntax(line, column, format!("expected `ring:`, found `{key}:`"))),
                ("vars" | "ring", _, _) => {
                    return Err(syntax(line, column, format!("duplicate `{key}:` header")));
                }
                _ => {
                    if !components.is_empty() {
                        return Err(syntax(line, column, "metadata must precede the components".into()));
                    }
                    if !valid_key(key) {
                        return Err(syntax(line, column, format!("invalid metadata key `{key}`")));
                    }
                    if metadata.iter().any(|(k, _)| k == key) {
                        return Err(syntax(line, column, format!("duplicate metadata key `{key}`")));
                    }
                    metadata.push((key.to_string(), value.to_string()));
                }
            }
        }

        let end = last_line + 1;
        let (Some(nvars), Some(ring)) = (nvars, ring) else {
            return Err(syntax(end, 1, "missing `vars:` or `ring:` header".into()));
        };
        if components.len() != nvars {
            let msg = format!("expected {nvars} components, found {}", components.len());
            return Err(ParseError::new(end, 1, ParseErrorKind::Invalid(msg)));
        }
        Ok(Self { nvars, ring, metadata, components })
    }
}

impl fmt::Display for MapDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.nvars)?;
        writeln!(f, "ring: {}", self.ring)?;
        for (k, v) in &self.metadata {
            if v.is_empty() {
                writeln!(f, "{k}:")?;
            } else {
                writeln!(f, "{k}: {v}")?;
            }
        }
        for c in &self.components {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shear_round_trip() {
        let doc = MapDocument::parse("vars: 2\nring: Q\n\n# shear\nx1 + x2^2\nx2\n").unwrap();
        assert_eq!(doc.to_string(), "vars: 2\nring: Q\nx2^2 + x1\nx2\n");
        assert_eq!(MapDocument::parse(&doc.to_string()).unwrap(), doc);
    }

    #[test]
    fn metadata_is_kept_in_order() {
        let doc = MapDocument::parse("vars: 1\nring: Zmod 7\nrole: forward\nfamily:\nx1\n").unwrap();
        assert_eq!(doc.meta("role"), Some("forward"));
        assert_eq!(doc.meta("family"), Some(""));
        assert_eq!(doc.to_string(), "vars: 1\nring: Zmod 7\nrole: forward\nfamily:\nx1\n");
    }

    #[test]
    fn errors_are_located() {
        let err = MapDocument::parse("vars: 2\nring: Q\n  2x1\nx2\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 4));
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));

        let err = MapDocument::parse("vars: 2\nring: Q\nx1\nx1 + x3\n").unwrap_err();
        assert_eq!((err.line, err.column), (4, 6));
        assert_eq!(err.kind, ParseErrorKind::UnknownVariable("x3".into()));

        let err = MapDocument::parse("vars: 1\nring: Zmod 6\n1/5*x1\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::RingMismatch(_)));

        let err = MapDocument::parse("ring: Q\nvars: 1\nx1\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));

        let err = MapDocument::parse("vars: 2\nring: Q\nx1\n").unwrap_err();
        assert_eq!(err.line, 4);

        let err = MapDocument::parse("vars: 1\nring: Q\nx1\nkey: v\n").unwrap_err();
        assert_eq!(err.line, 4);

        let err = MapDocument::parse("vars: 1\nring: Zmod x\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 7));
    }
}
