//! Exact construction and verification of polynomial automorphisms.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function over immutable values:
//!
//! - [`poly`], [`univariate`], [`ring`]: sparse multivariate polynomials over
//!   exact rationals or `Z/mZ`, plus single-variable generator polynomials.
//! - [`parse`]: the text grammar and canonical printer for polynomials.
//! - [`map`], [`matrix`], [`verify`]: polynomial maps, symbolic Jacobians,
//!   determinants, principal-minor sums and the Keller / parametrized-minor
//!   checks.
//! - [`families`]: closed-form automorphism families with their inverses.
//! - [`inverse`]: the degree-truncated formal inverse used as an independent
//!   oracle for every closed-form inverse.
//! - [`crypto`]: the block cipher built from invariance and triangular keys.
#![no_std]

extern crate alloc;

pub mod crypto;
pub mod error;
pub mod families;
mod fastmul;
pub mod inverse;
pub mod map;
pub mod matrix;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod univariate;
pub mod verify;

pub use error::{Error, Result};
pub use map::PolyMap;
pub use matrix::PolyMatrix;
pub use monomial::Exponents;
pub use poly::{Degree, Polynomial};
pub use ring::{RingSpec, Scalar};
pub use univariate::UniPoly;
