//! Degree-truncated formal inverse of a polynomial map.
//!
//! For `P(x) = L x + H(x)` with `P(0) = 0`, `L` invertible and `H` made of
//! terms of degree at least 2, the inverse `Q` solves `Q = L⁻¹(u - H(Q))`.
//! Iterating from `Q = L⁻¹ u` fixes one more degree of `Q` per step. This is
//! independent of every closed-form inverse and serves as their oracle.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::map::PolyMap;
use crate::matrix::PolyMatrix;
use crate::poly::{Degree, Polynomial};
use crate::ring::{RingSpec, Scalar};

/// A map known only up to total degree `truncation_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedMap {
    pub map: PolyMap,
    pub truncation_degree: u32,
}

/// Outcome of [`is_exact_inverse`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseCheck {
    pub exact: bool,
    /// `Q ∘ P - id`.
    pub residual: PolyMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InverseDegree {
    /// The inverse is polynomial of this degree.
    Exact { degree: u32, inverse: PolyMap },
    /// No polynomial inverse of degree below the bound was found.
    NotPolynomialUpTo(u32),
}

/// Inverse of a square scalar matrix through its adjugate, so that modulo
/// `m` only the determinant has to be a unit.
pub fn invert_linear_part(ring: &RingSpec, l: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let n = l.len();
    let konst = |c: &Scalar| Polynomial::constant(1, ring, c.clone());
    let entries = l.iter().flat_map(|row| row.iter().map(konst)).collect();
    let m = PolyMatrix::new(n, n, entries)?;
    let det = m.determinant()?.constant_term();
    let det_inv = ring.inv(&det).ok_or(Error::NonInvertibleLinearPart)?;
    if n == 1 {
        return Ok(alloc::vec![alloc::vec![det_inv]]);
    }
    let mut inv = alloc::vec![alloc::vec![Scalar::zero(); n]; n];
    for (i, inv_row) in inv.iter_mut().enumerate() {
        for (j, slot) in inv_row.iter_mut().enumerate() {
            // (adj L)_ij = (-1)^(i+j) det(L without row j and column i)
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let minor = m.submatrix(&rows, &cols)?.determinant()?.constant_term();
            let cof = if (i + j) % 2 == 0 { minor } else { ring.neg(&minor) };
            *slot = ring.mul(&cof, &det_inv);
        }
    }
    Ok(inv)
}

/// Linear part inverse and nonlinear part of `p`, after checking `P(0) = 0`.
fn split(p: &PolyMap) -> Result<(Vec<Vec<Scalar>>, PolyMap)> {
    if let Some(i) = p.constant_part().iter().position(|c| !c.is_zero()) {
        return Err(Error::NonzeroConstantPart { component: i + 1 });
    }
    let l_inv = invert_linear_part(p.ring(), &p.linear_part())?;
    Ok((l_inv, p.nonlinear_part()))
}

/// `L⁻¹ v` for a vector of polynomials.
fn apply_matrix(ring: &RingSpec, m: &[Vec<Scalar>], v: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let n = v.len();
    m.iter()
        .map(|row| {
            let mut acc = Polynomial::zero(n, ring);
            for (c, p) in row.iter().zip(v) {
                if !c.is_zero() {
                    acc = acc.add(&p.scale(c))?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// One step `Q ← L⁻¹(u - H(Q))` with everything above degree `d` dropped.
fn step(ring: &RingSpec, l_inv: &[Vec<Scalar>], h: &PolyMap, q: &[Polynomial], d: u32) -> Result<Vec<Polynomial>> {
    let n = q.len();
    let hq = h.components().iter().map(|c| c.compose_truncated(q, Some(d))).collect::<Result<Vec<_>>>()?;
    let rhs = (0..n).map(|i| Polynomial::var(n, ring, i)?.sub(&hq[i])).collect::<Result<Vec<_>>>()?;
    apply_matrix(ring, l_inv, &rhs)
}

/// The formal inverse of `p` truncated at degree `d`: `d` fixed-point
/// iterations starting from `L⁻¹ u`. Iteration `k` is exact through degree
/// `k + 1`, so it truncates there; the final iterations run at `d`.
pub fn formal_inverse(p: &PolyMap, d: u32) -> Result<TruncatedMap> {
    let ring = p.ring();
    let n = p.nvars();
    let (l_inv, h) = split(p)?;
    let vars = PolyMap::identity(n, ring).into_components();
    let mut q: Vec<Polynomial> = apply_matrix(ring, &l_inv, &vars)?.into_iter().map(|c| c.truncated(d)).collect();
    for k in 1..=d {
        q = step(ring, &l_inv, &h, &q, (k + 1).min(d))?;
    }
    Ok(TruncatedMap { map: PolyMap::new(q)?, truncation_degree: d })
}

/// Compose both ways without truncation; `exact` iff both are the identity.
pub fn is_exact_inverse(p: &PolyMap, q: &PolyMap) -> Result<InverseCheck> {
    if p.nvars() != q.nvars() {
        return Err(Error::ArityMismatch { expected: p.nvars(), found: q.nvars() });
    }
    if p.ring() != q.ring() {
        return Err(Error::RingMismatch);
    }
    let id = PolyMap::identity(p.nvars(), p.ring());
    let residual = q.compose(p)?.sub(&id)?;
    let exact = residual.components().iter().all(Polynomial::is_zero) && p.compose(q)?.is_identity();
    Ok(InverseCheck { exact, residual })
}

/// `deg(P)^(n-1) + 1`: one past the largest degree a polynomial inverse
/// can have.
pub fn default_dmax(p: &PolyMap) -> u32 {
    let d = p.degree().or_zero().max(1);
    let n = u32::try_from(p.nvars()).unwrap_or(u32::MAX);
    d.checked_pow(n.saturating_sub(1)).and_then(|v| v.checked_add(1)).unwrap_or(u32::MAX)
}

/// Grow the formal inverse one degree at a time. Whenever a new degree layer
/// comes out empty the truncation so far is tested with
/// [`is_exact_inverse`]; the first exact one gives the inverse degree.
pub fn measure_inverse_degree(p: &PolyMap, dmax: u32) -> Result<InverseDegree> {
    let ring = p.ring();
    let n = p.nvars();
    let (l_inv, h) = split(p)?;
    let vars = PolyMap::identity(n, ring).into_components();
    let mut q = apply_matrix(ring, &l_inv, &vars)?;
    if h.components().iter().all(Polynomial::is_zero) {
        let degree = q.iter().map(Polynomial::total_degree).max().unwrap_or(Degree::MinusInfinity).or_zero();
        return Ok(InverseDegree::Exact { degree, inverse: PolyMap::new(q)? });
    }
    // `q` is correct through degree `k`.
    for k in 1..dmax {
        let next = step(ring, &l_inv, &h, &q, k + 1)?;
        let layer_empty = next.iter().all(|c| c.homogeneous_part(k + 1).is_zero());
        if layer_empty {
            let candidate = PolyMap::new(q.clone())?;
            if is_exact_inverse(p, &candidate)?.exact {
                return Ok(InverseDegree::Exact { degree: candidate.degree().or_zero(), inverse: candidate });
            }
        }
        q = next;
    }
    let candidate = PolyMap::new(q)?;
    if is_exact_inverse(p, &candidate)?.exact {
        return Ok(InverseDegree::Exact { degree: candidate.degree().or_zero(), inverse: candidate });
    }
    Ok(InverseDegree::NotPolynomialUpTo(dmax))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{dim2_homogeneous, dim3_partial, dimn_full};
    use crate::parse::parse_polynomial;
    use crate::univariate::UniPoly;
    use alloc::vec;

    fn map(texts: &[&str], ring: &RingSpec) -> PolyMap {
        let n = texts.len();
        PolyMap::new(texts.iter().map(|t| parse_polynomial(t, n, ring).unwrap()).collect()).unwrap()
    }

    fn q() -> RingSpec {
        RingSpec::Rationals
    }

    #[test]
    fn triangular_shear() {
        let p = map(&["x1 + x2^2", "x2"], &q());
        let t = formal_inverse(&p, 2).unwrap();
        assert_eq!(t.map, map(&["x1 - x2^2", "x2"], &q()));
        assert_eq!(
            measure_inverse_degree(&p, default_dmax(&p)).unwrap(),
            InverseDegree::Exact { degree: 2, inverse: map(&["x1 - x2^2", "x2"], &q()) }
        );
    }

    #[test]
    fn identity_is_its_own_inverse() {
        let id = PolyMap::identity(3, &q());
        assert_eq!(formal_inverse(&id, 4).unwrap().map, id);
        assert!(is_exact_inverse(&id, &id).unwrap().exact);
    }

    #[test]
    fn agrees_with_closed_form_prefix() {
        let pair =
            dim2_homogeneous(&q().from_i64(1), &q().from_i64(1), &UniPoly::from_i64s(&q(), &[0, 0, 0, 1])).unwrap();
        let t = formal_inverse(&pair.forward, 2).unwrap();
        assert_eq!(t.map, pair.inverse.truncated(2));
    }

    #[test]
    fn non_keller_map_has_no_polynomial_inverse() {
        let p = map(&["x1 + x1^2", "x2"], &q());
        let dmax = default_dmax(&p);
        assert_eq!(dmax, 3);
        assert_eq!(measure_inverse_degree(&p, dmax).unwrap(), InverseDegree::NotPolynomialUpTo(3));
        assert_eq!(measure_inverse_degree(&p, 12).unwrap(), InverseDegree::NotPolynomialUpTo(12));
    }

    #[test]
    fn wrong_inverse_has_residual() {
        let p = map(&["x1 + x2^2", "x2"], &q());
        let check = is_exact_inverse(&p, &PolyMap::identity(2, &q())).unwrap();
        assert!(!check.exact);
        assert_eq!(check.residual, map(&["x2^2", "0"], &q()));
    }

    #[test]
    fn preconditions() {
        assert_eq!(formal_inverse(&map(&["x1 + 1", "x2"], &q()), 2), Err(Error::NonzeroConstantPart { component: 1 }));
        assert_eq!(formal_inverse(&map(&["x1 + x2", "x1 + x2"], &q()), 2), Err(Error::NonInvertibleLinearPart));
        let z6 = RingSpec::integers_mod(6).unwrap();
        assert_eq!(formal_inverse(&map(&["2*x1", "x2"], &z6), 2), Err(Error::NonInvertibleLinearPart));
        let z7 = RingSpec::integers_mod(7).unwrap();
        let t = formal_inverse(&map(&["2*x1 + x2^2", "x2"], &z7), 2).unwrap();
        assert_eq!(t.map, map(&["4*x1 + 3*x2^2", "x2"], &z7));
    }

    #[test]
    fn dim3_partial_degree_is_product() {
        let s = |v| q().from_i64(v);
        let sq = UniPoly::from_i64s(&q(), &[0, 0, 1]);
        let pair = dim3_partial(&s(1), &s(0), &s(1), &s(1), &s(1), &s(1), &sq, &sq).unwrap();
        match measure_inverse_degree(&pair.forward, default_dmax(&pair.forward)).unwrap() {
            InverseDegree::Exact { degree, inverse } => {
                assert_eq!(degree, 4);
                assert_eq!(inverse, pair.inverse);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimn_degree_is_preserved() {
        let r = q();
        let phis = vec![UniPoly::monomial(&r, 7, Scalar::one()), UniPoly::monomial(&r, 3, Scalar::one())];
        let pair = dimn_full(&[r.from_i64(1), r.from_i64(2), r.from_i64(1)], &phis).unwrap();
        match measure_inverse_degree(&pair.forward, 8).unwrap() {
            InverseDegree::Exact { degree, .. } => assert_eq!(degree, 7),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn oracle_is_idempotent() {
        let p = map(&["x1 + x2^2", "x2 + x3^3", "x3"], &q());
        let d = 6;
        let inv = formal_inverse(&p, d).unwrap();
        let back = formal_inverse(&inv.map, d).unwrap();
        assert_eq!(back.map, p.truncated(d));
    }
}
