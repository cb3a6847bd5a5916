use automorph_core::Error as CoreError;

/// A problem in an input text at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("{0}")]
    Invalid(String),
}

impl ParseError {
    pub fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        Self { line, column, kind }
    }

    /// Place an error from the polynomial parser, whose columns count from
    /// the start of the parsed text, at `column` of `line`.
    pub(crate) fn from_core(err: CoreError, line: usize, column: usize) -> Self {
        let (offset, kind) = match err {
            CoreError::Syntax { column, message } => (column, ParseErrorKind::Syntax(message)),
            CoreError::UnknownVariable { column, name } => (column, ParseErrorKind::UnknownVariable(name)),
            CoreError::RingMismatch => (1, ParseErrorKind::RingMismatch("fraction outside the rationals".into())),
            CoreError::ZeroDenominator(detail) => (1, ParseErrorKind::RingMismatch(detail)),
            other => (1, ParseErrorKind::Invalid(other.to_string())),
        };
        Self::new(line, column + offset - 1, kind)
    }
}

/// 1-based line and column of byte `offset` in `text`.
pub(crate) fn locate(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[start..].chars().count() + 1)
}
