//! Jacobian checks for polynomial maps.
//!
//! For `P = (λ_1 x_1 + f_1, ..., λ_n x_n + f_n)` with every `f_i` made of
//! terms of degree at least 2, write `F = (∂f_i/∂x_j)`. Then
//!
//! ```text
//! det(DP) = Σ_T (Π_{j ∉ T} λ_j) · det(F_T)
//! ```
//!
//! over all index sets `T` (principal submatrices of `F`). With all `λ = 1`
//! this is `1 + E_1(F) + ... + E_n(F)`; with free parameters `λ` the single
//! condition `det(DP) = Π λ_j` splits into one equation per retained index
//! set, `2^n - 1` in total.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::map::PolyMap;
use crate::poly::{Degree, Polynomial};
use crate::ring::Scalar;

/// One equation `det(J_R) = Π_{j ∈ R} λ_j` of the parametrized system, where
/// `J_R` is the principal submatrix of the Jacobian on the retained indices
/// `R` (equivalently, with the complement deleted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorEquation {
    /// Retained row/column indices, 0-based, ascending.
    pub retained: Vec<usize>,
    /// `Π_{j ∈ R} λ_j`.
    pub expected: Scalar,
    /// `det(J_R) - Π_{j ∈ R} λ_j`; the equation holds iff this is zero.
    pub residual: Polynomial,
}

impl MinorEquation {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub jacobian: Polynomial,
    pub jacobian_is_constant: bool,
    pub constant_value: Option<Scalar>,
    /// `E_1 .. E_n` of the nonlinear part's Jacobian, when the map is in
    /// `λ_i x_i + f_i` form; empty otherwise.
    pub minor_sums: Vec<Polynomial>,
    /// The parametrized minor system, in order of increasing minor size.
    /// Empty unless produced by [`check_parametrized_minors`].
    pub minor_equations: Vec<MinorEquation>,
}

impl VerifyReport {
    /// Jacobian determinant is a nonzero constant.
    pub fn is_keller(&self) -> bool {
        self.constant_value.as_ref().is_some_and(|c| !c.is_zero())
    }

    pub fn failed_minor_equations(&self) -> impl Iterator<Item = &MinorEquation> {
        self.minor_equations.iter().filter(|e| !e.holds())
    }

    pub fn all_minor_equations_hold(&self) -> bool {
        self.minor_equations.iter().all(MinorEquation::holds)
    }
}

/// The diagonal coefficients `λ_i` when every component is `λ_i x_i` plus
/// terms of degree at least 2; otherwise the first offending component.
pub fn diagonal_normalization(p: &PolyMap) -> core::result::Result<Vec<Scalar>, Error> {
    let n = p.nvars();
    let mut lambdas = Vec::with_capacity(n);
    for (i, c) in p.components().iter().enumerate() {
        if !c.constant_term().is_zero() {
            return Err(Error::MalformedNormalization { component: i + 1, detail: "nonzero constant term".into() });
        }
        for j in (0..n).filter(|&j| j != i) {
            if !c.linear_coeff(j).is_zero() {
                return Err(Error::MalformedNormalization {
                    component: i + 1,
                    detail: format!("linear term in x{}", j + 1),
                });
            }
        }
        lambdas.push(c.linear_coeff(i));
    }
    Ok(lambdas)
}

fn jacobian_summary(p: &PolyMap) -> Result<(Polynomial, bool, Option<Scalar>)> {
    let det = p.jacobian_matrix().determinant()?;
    let is_constant = det.total_degree() <= Degree::Finite(0);
    let value = is_constant.then(|| det.constant_term());
    Ok((det, is_constant, value))
}

/// Jacobian determinant of `p` and, when `p` is in `λ_i x_i + f_i` form, the
/// principal-minor sums `E_k` of the nonlinear part.
pub fn check_keller(p: &PolyMap) -> VerifyReport {
    let (jacobian, jacobian_is_constant, constant_value) = jacobian_summary(p).expect("Jacobian of a map is square");
    let minor_sums = match diagonal_normalization(p) {
        Ok(_) => p.nonlinear_part().jacobian_matrix().principal_minor_sums().expect("Jacobian of a map is square"),
        Err(_) => Vec::new(),
    };
    VerifyReport { jacobian, jacobian_is_constant, constant_value, minor_sums, minor_equations: Vec::new() }
}

/// Check every equation `det(J_R) = Π_{j ∈ R} λ_j` for nonempty `R`.
///
/// `p` must be exactly `λ_i x_i + f_i` with the given `λ` and `f_i` free of
/// constant and linear terms; anything else is rejected rather than
/// re-normalized. Equations are listed by minor size, then
/// lexicographically, and all of them are evaluated.
pub fn check_parametrized_minors(p: &PolyMap, lambdas: &[Scalar]) -> Result<VerifyReport> {
    let n = p.nvars();
    if lambdas.len() != n {
        return Err(Error::ArityMismatch { expected: n, found: lambdas.len() });
    }
    let ring = p.ring();
    let found = diagonal_normalization(p)?;
    for (i, (got, want)) in found.iter().zip(lambdas).enumerate() {
        ring.check(want)?;
        if got != want {
            return Err(Error::MalformedNormalization {
                component: i + 1,
                detail: format!("coefficient of x{} is {got}, expected lambda = {want}", i + 1),
            });
        }
    }

    let jm = p.jacobian_matrix();
    let mut subsets: Vec<Vec<usize>> =
        (1u32..(1u32 << n)).map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect()).collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let mut minor_equations = Vec::with_capacity(subsets.len());
    for retained in subsets {
        let expected = retained.iter().fold(Scalar::one(), |acc, &j| ring.mul(&acc, &lambdas[j]));
        let det = jm.principal_minor(&retained)?;
        let residual = det.sub(&Polynomial::constant(n, ring, expected.clone()))?;
        minor_equations.push(MinorEquation { retained, expected, residual });
    }

    let mut report = check_keller(p);
    report.minor_equations = minor_equations;
    Ok(report)
}

fn require_two_vars(h: &Polynomial) -> Result<()> {
    if h.nvars() != 2 {
        return Err(Error::ArityMismatch { expected: 2, found: h.nvars() });
    }
    Ok(())
}

/// `h_xx h_yy - h_xy^2`; zero iff `h` solves the homogeneous Monge–Ampère
/// equation.
pub fn check_monge_ampere(h: &Polynomial) -> Result<Polynomial> {
    require_two_vars(h)?;
    let hx = h.partial(0)?;
    let hy = h.partial(1)?;
    let hxx = hx.partial(0)?;
    let hyy = hy.partial(1)?;
    let hxy = hx.partial(1)?;
    hxx.mul(&hyy)?.sub(&hxy.mul(&hxy)?)
}

/// The map `(x + h_y, y - h_x)` generated by a scalar potential `h`.
pub fn potential_to_map(h: &Polynomial) -> Result<PolyMap> {
    require_two_vars(h)?;
    let ring = h.ring();
    let x = Polynomial::var(2, ring, 0)?;
    let y = Polynomial::var(2, ring, 1)?;
    PolyMap::new(alloc::vec![x.add(&h.partial(1)?)?, y.sub(&h.partial(0)?)?])
}

/// A potential `h` with `h_y = f` and `-h_x = g` for a divergence-free pair
/// (`f_x + g_y = 0`), normalized by `h(0, 0) = 0`.
pub fn stream_potential(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    require_two_vars(f)?;
    require_two_vars(g)?;
    let div = f.partial(0)?.add(&g.partial(1)?)?;
    if !div.is_zero() {
        return Err(Error::ConditionViolated(format!("f_x + g_y = {div} is not zero")));
    }
    // h = ∫_0^y f(x, t) dt - ∫_0^x g(s, 0) ds
    let ring = f.ring();
    let g_on_axis = g.compose(&[Polynomial::var(2, ring, 0)?, Polynomial::zero(2, ring)])?;
    f.integrate(1)?.sub(&g_on_axis.integrate(0)?)
}

/// `f_x + g_y + (f_x g_y - f_y g_x)`, the residual of `det D(x + f, y + g) = 1`.
pub fn jacobian_residual_2d(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    require_two_vars(f)?;
    require_two_vars(g)?;
    let (fx, fy) = (f.partial(0)?, f.partial(1)?);
    let (gx, gy) = (g.partial(0)?, g.partial(1)?);
    fx.add(&gy)?.add(&fx.mul(&gy)?.sub(&fy.mul(&gx)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::ring::RingSpec;
    use alloc::string::ToString;
    use alloc::vec;

    fn q(text: &str, n: usize) -> Polynomial {
        parse_polynomial(text, n, &RingSpec::Rationals).unwrap()
    }

    fn map(texts: &[&str]) -> PolyMap {
        PolyMap::new(texts.iter().map(|t| q(t, texts.len())).collect()).unwrap()
    }

    fn int(v: i64) -> Scalar {
        RingSpec::Rationals.from_i64(v)
    }

    #[test]
    fn jacobian_matrix_examples() {
        let jm = map(&["x1 + x2^2", "x2"]).jacobian_matrix();
        assert_eq!((jm.get(0, 0), jm.get(0, 1)), (&q("1", 2), &q("2*x2", 2)));
        assert_eq!((jm.get(1, 0), jm.get(1, 1)), (&q("0", 2), &q("1", 2)));
        let id = PolyMap::identity(3, &RingSpec::Rationals).jacobian_matrix();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(id.get(i, j).constant_term(), int((i == j) as i64));
                assert!(id.get(i, j).is_constant());
            }
        }
    }

    #[test]
    fn potential_map_of_quadratic_sigma_has_expected_jacobian() {
        // sigma(xi) = xi^2 with xi = x + y.
        let p = potential_to_map(&q("(x1 + x2)*(x1 + x2)", 2)).unwrap();
        let jm = p.jacobian_matrix();
        let got: Vec<_> = (0..4).map(|k| jm.get(k / 2, k % 2).constant_term()).collect();
        assert_eq!(got, vec![int(3), int(2), int(-2), int(-1)]);
        assert_eq!(check_keller(&p).constant_value, Some(int(1)));
    }

    #[test]
    fn keller_examples() {
        let r = check_keller(&PolyMap::identity(3, &RingSpec::Rationals));
        assert!(r.jacobian_is_constant && r.is_keller());
        assert_eq!(r.constant_value, Some(Scalar::one()));
        assert_eq!(r.minor_sums.len(), 3);

        let bad = check_keller(&map(&["x1 + x1^2", "x2"]));
        assert!(!bad.jacobian_is_constant);
        assert_eq!(bad.jacobian, q("1 + 2*x1", 2));
        assert_eq!(bad.constant_value, None);
    }

    #[test]
    fn cubic_worked_family_is_keller() {
        // a=1, b=3, c=1: xi = x + y, f = xi^2 - xi^3, g = -f.
        let xi = q("x1 + x2", 2);
        let f = xi.pow(2).unwrap().sub(&xi.pow(3).unwrap()).unwrap();
        let p = PolyMap::new(vec![q("x1", 2).add(&f).unwrap(), q("x2", 2).sub(&f).unwrap()]).unwrap();
        assert_eq!(check_keller(&p).constant_value, Some(Scalar::one()));
    }

    #[test]
    fn non_normalized_maps_have_no_minor_sums() {
        let r = check_keller(&map(&["x1 + x2", "x2"]));
        assert!(r.minor_sums.is_empty());
        assert!(r.is_keller());
    }

    #[test]
    fn parametrized_triangular_map_passes_all_equations() {
        let p = map(&["2*x1", "3*x2 + x1^2", "-x3 + x1*x2 + x2^3"]);
        let r = check_parametrized_minors(&p, &[int(2), int(3), int(-1)]).unwrap();
        assert_eq!(r.minor_equations.len(), 7);
        assert!(r.all_minor_equations_hold());
        assert_eq!(r.constant_value, Some(int(-6)));
        // Ordered by minor size.
        let sizes: Vec<usize> = r.minor_equations.iter().map(|e| e.retained.len()).collect();
        assert_eq!(sizes, vec![1, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn parametrized_two_dim_general_solution() {
        let p = map(&["x1 + x2^3 + x2^2", "x2"]);
        let r = check_parametrized_minors(&p, &[int(1), int(1)]).unwrap();
        assert!(r.all_minor_equations_hold());
    }

    #[test]
    fn parametrized_failure_reports_residual() {
        let p = map(&["x1 + x2^2", "x2 + x1^2"]);
        let r = check_parametrized_minors(&p, &[int(1), int(1)]).unwrap();
        let failed: Vec<_> = r.failed_minor_equations().collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].retained, vec![0, 1]);
        assert_eq!(failed[0].residual, q("-4*x1*x2", 2));
    }

    #[test]
    fn parametrized_rejects_linear_terms() {
        let p = map(&["x1 + x2", "x2"]);
        assert!(matches!(
            check_parametrized_minors(&p, &[int(1), int(1)]),
            Err(Error::MalformedNormalization { component: 1, .. })
        ));
        let p = map(&["2*x1", "x2"]);
        assert!(matches!(
            check_parametrized_minors(&p, &[int(1), int(1)]),
            Err(Error::MalformedNormalization { component: 1, .. })
        ));
        let p = map(&["x1 + 1", "x2"]);
        assert!(check_parametrized_minors(&p, &[int(1), int(1)]).is_err());
    }

    #[test]
    fn monge_ampere_examples() {
        // sigma = xi^3 with xi = x + 2y.
        let h = q("x1 + 2*x2", 2).pow(3).unwrap();
        assert!(check_monge_ampere(&h).unwrap().is_zero());
        assert_eq!(check_monge_ampere(&q("x1^2 + x2^2", 2)).unwrap(), q("4", 2));
        assert_eq!(check_monge_ampere(&q("x1*x2", 2)).unwrap(), q("-1", 2));
        assert!(matches!(check_monge_ampere(&q("x1", 3)), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn potential_map_examples() {
        assert!(potential_to_map(&Polynomial::zero(2, &RingSpec::Rationals)).unwrap().is_identity());
        let p = potential_to_map(&q("x1^3", 2)).unwrap();
        assert_eq!(p.component(0).to_string(), "x1");
        assert_eq!(p.component(1).to_string(), "-3*x1^2 + x2");
    }

    #[test]
    fn stream_potential_recovers_field() {
        let f = q("(x1 - x2)*(x1 - x2)", 2);
        let g = f.clone();
        let h = stream_potential(&f, &g).unwrap();
        assert_eq!(h.partial(1).unwrap(), f);
        assert_eq!(h.partial(0).unwrap().neg(), g);
        assert!(check_monge_ampere(&h).unwrap().is_zero());
        assert!(stream_potential(&q("x1^2", 2), &q("0", 2)).is_err());
    }
}
