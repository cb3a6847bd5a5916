//! Text formats and command-line front end for automorph-core.
//!
//! - [`document`]: the map document read and written by every subcommand.
//! - [`spec_file`], [`key_file`]: TOML family specs and cipher keys.
//! - [`report`]: the verification report.
//! - [`cli`]: argument parsing and subcommand dispatch.

pub mod cli;
pub mod document;
pub mod error;
pub mod key_file;
pub mod report;
pub mod spec_file;
mod toml_util;

pub use document::MapDocument;
pub use error::{ParseError, ParseErrorKind};
