//! TOML form of a [`FamilySpec`].
//!
//! ```toml
//! family = "dim3_partial"
//! ring = "Q"
//! coefficients = [1, 2, 3, 3, 6, 9]
//! generators = ["x1^2", "2*x1^3 - x1^2"]
//! ```
//!
//! Coefficients are TOML integers or strings in the polynomial grammar
//! (`"3/4"`). `case` names the `dim4_partial` case. Univariate generators
//! are written in `x1`; triangular generators use `x1 .. xn`.

use automorph_core::families::{Dim4Case, FamilyKind, FamilySpec};
use automorph_core::parse::parse_ring;
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::ParseError;
use crate::toml_util::{from_toml, invalid, polynomial, scalar, Number};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    family: Spanned<String>,
    ring: Spanned<String>,
    #[serde(default)]
    case: Option<Spanned<String>>,
    coefficients: Vec<Spanned<Number>>,
    generators: Vec<Spanned<String>>,
}

#[derive(Serialize)]
struct PrintSpec {
    family: String,
    ring: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<String>,
    coefficients: Vec<Number>,
    generators: Vec<String>,
}

pub fn parse_family_spec(text: &str) -> Result<FamilySpec, ParseError> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| from_toml(text, e))?;
    let kind: FamilyKind = raw
        .family
        .get_ref()
        .parse()
        .map_err(|_| invalid(text, &raw.family, format!("unknown family `{}`", raw.family.get_ref())))?;
    let ring = parse_ring(raw.ring.get_ref()).map_err(|e| invalid(text, &raw.ring, e.to_string()))?;
    let case = match &raw.case {
        None => None,
        Some(c) => Some(
            c.get_ref().parse::<Dim4Case>().map_err(|_| invalid(text, c, format!("unknown case `{}`", c.get_ref())))?,
        ),
    };
    let coefficients = raw.coefficients.iter().map(|c| scalar(text, c, &ring)).collect::<Result<Vec<_>, _>>()?;
    let nvars = match kind {
        FamilyKind::TriangularParam => coefficients.len(),
        _ => 1,
    };
    let generators = raw.generators.iter().map(|g| polynomial(text, g, nvars, &ring)).collect::<Result<Vec<_>, _>>()?;
    Ok(FamilySpec { kind, ring, coefficients, generators, case })
}

pub fn print_family_spec(spec: &FamilySpec) -> String {
    let out = PrintSpec {
        family: spec.kind.name().to_string(),
        ring: spec.ring.to_string(),
        case: spec.case.map(|c| c.name().to_string()),
        coefficients: spec.coefficients.iter().map(Number::from_scalar).collect(),
        generators: spec.generators.iter().map(ToString::to_string).collect(),
    };
    toml::to_string(&out).expect("spec serializes")
}
