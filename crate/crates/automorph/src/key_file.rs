//! TOML form of a [`CipherKey`].
//!
//! ```toml
//! version = 1
//! variant = "full_invariance"
//! n = 3
//! modulus = 257
//! coefficients = [5, 17]
//! generators = ["3*x1^2", "x1^3 + 2*x1^2"]
//! ```
//!
//! For `full_invariance` the coefficients are `a_1 .. a_{n-1}` and the
//! generators `phi_1 .. phi_{n-1}` in `x1`. For `triangular` they are
//! `lambda_1 .. lambda_n` and `f_2 .. f_n` in `x1 .. xn`.

use automorph_core::crypto::{CipherKey, CipherVariant, KeyMaterial};
use automorph_core::parse::parse_ring;
use automorph_core::{RingSpec, UniPoly};
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::ParseError;
use crate::toml_util::{from_toml, invalid, polynomial, scalar, Number};

pub const KEY_FORMAT_VERSION: i64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum KeyFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid key: {0}")]
    Invalid(#[from] automorph_core::Error),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKey {
    version: Spanned<i64>,
    variant: Spanned<String>,
    n: Spanned<i64>,
    modulus: Spanned<Number>,
    coefficients: Vec<Spanned<Number>>,
    generators: Vec<Spanned<String>>,
}

#[derive(Serialize)]
struct PrintKey {
    version: i64,
    variant: String,
    n: usize,
    modulus: Number,
    coefficients: Vec<Number>,
    generators: Vec<String>,
}

pub fn parse_key(text: &str) -> Result<CipherKey, KeyFileError> {
    let raw: RawKey = toml::from_str(text).map_err(|e| from_toml(text, e))?;
    if *raw.version.get_ref() != KEY_FORMAT_VERSION {
        return Err(
            invalid(text, &raw.version, format!("unsupported key format version {}", raw.version.get_ref())).into()
        );
    }
    let variant: CipherVariant = raw
        .variant
        .get_ref()
        .parse()
        .map_err(|_| invalid(text, &raw.variant, format!("unknown variant `{}`", raw.variant.get_ref())))?;
    let n = usize::try_from(*raw.n.get_ref())
        .ok()
        .filter(|&n| n >= 2)
        .ok_or_else(|| invalid(text, &raw.n, "n must be at least 2"))?;
    let modulus = match raw.modulus.get_ref() {
        Number::Int(v) => v.to_string(),
        Number::Text(s) => s.clone(),
    };
    let ring = parse_ring(&format!("Zmod {modulus}")).map_err(|e| invalid(text, &raw.modulus, e.to_string()))?;
    let coefficients = raw.coefficients.iter().map(|c| scalar(text, c, &ring)).collect::<Result<Vec<_>, _>>()?;
    let material = match variant {
        CipherVariant::FullInvariance => {
            let phis = raw
                .generators
                .iter()
                .map(|g| {
                    let p = polynomial(text, g, 1, &ring)?;
                    Ok(UniPoly::from_polynomial(&p).expect("one-variable polynomial"))
                })
                .collect::<Result<Vec<_>, ParseError>>()?;
            KeyMaterial::FullInvariance { a: coefficients, phis }
        }
        CipherVariant::Triangular => {
            let fs = raw.generators.iter().map(|g| polynomial(text, g, n, &ring)).collect::<Result<Vec<_>, _>>()?;
            KeyMaterial::Triangular { lambdas: coefficients, fs }
        }
    };
    let key = CipherKey::new(&ring, material)?;
    if key.n() != n {
        return Err(invalid(text, &raw.n, format!("key material has dimension {}, header says {n}", key.n())).into());
    }
    Ok(key)
}

pub fn print_key(key: &CipherKey) -> String {
    let (coefficients, generators) = match key.material() {
        KeyMaterial::FullInvariance { a, phis } => (a, phis.iter().map(|p| p.to_polynomial().to_string()).collect()),
        KeyMaterial::Triangular { lambdas, fs } => (lambdas, fs.iter().map(ToString::to_string).collect()),
    };
    let modulus = match key.ring() {
        RingSpec::IntegersMod(m) => match m.value().to_string().parse::<i64>() {
            Ok(v) => Number::Int(v),
            Err(_) => Number::Text(m.to_string()),
        },
        RingSpec::Rationals => unreachable!("cipher keys live over Z/mZ"),
    };
    let out = PrintKey {
        version: KEY_FORMAT_VERSION,
        variant: key.variant().name().to_string(),
        n: key.n(),
        modulus,
        coefficients: coefficients.iter().map(Number::from_scalar).collect(),
        generators,
    };
    toml::to_string(&out).expect("key serializes")
}
