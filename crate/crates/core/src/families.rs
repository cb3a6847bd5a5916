//! Closed-form automorphism families.
//!
//! Every constructor returns the forward map, its inverse (written in the
//! same variable names `x1..xn`, standing for the image coordinates), the
//! linear forms that are carried over unchanged, and the predicted degrees
//! of both maps.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::map::PolyMap;
use crate::poly::{Degree, Polynomial};
use crate::ring::{RingSpec, Scalar};
use crate::univariate::UniPoly;
use crate::verify::check_keller;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Dim2Homogeneous,
    Dim2Extruded3D,
    Dim3Partial,
    Dim3Full,
    Dim4Partial,
    DimNFull,
    TriangularParam,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 7] = [
        FamilyKind::Dim2Homogeneous,
        FamilyKind::Dim2Extruded3D,
        FamilyKind::Dim3Partial,
        FamilyKind::Dim3Full,
        FamilyKind::Dim4Partial,
        FamilyKind::DimNFull,
        FamilyKind::TriangularParam,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Dim2Homogeneous => "dim2_homogeneous",
            FamilyKind::Dim2Extruded3D => "dim2_extruded",
            FamilyKind::Dim3Partial => "dim3_partial",
            FamilyKind::Dim3Full => "dim3_full",
            FamilyKind::Dim4Partial => "dim4_partial",
            FamilyKind::DimNFull => "dimn_full",
            FamilyKind::TriangularParam => "triangular",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::ConditionViolated(format!("unknown family `{s}`")))
    }
}

/// Which of the three correction coefficients of the 4D family vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim4Case {
    /// `k21, k31, k32` all nonzero.
    OneInvariant,
    /// `k21 = 0`.
    TwoInvariantA,
    /// `k21 = k31 = 0`.
    TwoInvariantB,
    /// `k21 = k31 = k32 = 0`.
    ThreeInvariant,
}

impl Dim4Case {
    pub const ALL: [Dim4Case; 4] =
        [Dim4Case::OneInvariant, Dim4Case::TwoInvariantA, Dim4Case::TwoInvariantB, Dim4Case::ThreeInvariant];

    pub fn name(self) -> &'static str {
        match self {
            Dim4Case::OneInvariant => "one_invariant",
            Dim4Case::TwoInvariantA => "two_invariant_a",
            Dim4Case::TwoInvariantB => "two_invariant_b",
            Dim4Case::ThreeInvariant => "three_invariant",
        }
    }

    /// Whether `a11*a24 = a14*a21`, `a11*a34 = a14*a31`, `a22*a34 = a24*a32`
    /// are required to hold (true) or to fail (false).
    pub fn pattern(self) -> [bool; 3] {
        match self {
            Dim4Case::OneInvariant => [false, false, false],
            Dim4Case::TwoInvariantA => [true, false, false],
            Dim4Case::TwoInvariantB => [true, true, false],
            Dim4Case::ThreeInvariant => [true, true, true],
        }
    }
}

impl fmt::Display for Dim4Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dim4Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Dim4Case::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::ConditionViolated(format!("unknown dim4 case `{s}`")))
    }
}

/// A degree prediction. Over the rationals the family formulas are exact;
/// modulo `m` leading coefficients may vanish, so they are only bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DegreeLaw {
    Exact(u32),
    AtMost(u32),
}

impl DegreeLaw {
    pub fn value(self) -> u32 {
        match self {
            DegreeLaw::Exact(d) | DegreeLaw::AtMost(d) => d,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, DegreeLaw::Exact(_))
    }

    pub fn admits(self, d: Degree) -> bool {
        match self {
            DegreeLaw::Exact(k) => d == Degree::Finite(k),
            DegreeLaw::AtMost(k) => d <= Degree::Finite(k),
        }
    }
}

impl fmt::Display for DegreeLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeLaw::Exact(d) => write!(f, "{d}"),
            DegreeLaw::AtMost(d) => write!(f, "<= {d}"),
        }
    }
}

/// A linear form that is not carried over unchanged:
/// `form(P(x)) - form(x) = correction(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormCorrection {
    pub form: Vec<Scalar>,
    pub correction: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismPair {
    pub family: FamilyKind,
    pub forward: PolyMap,
    pub inverse: PolyMap,
    /// Coefficient vectors `a` with `a . P(x) = a . x` identically.
    pub invariant_forms: Vec<Vec<Scalar>>,
    pub corrections: Vec<FormCorrection>,
    pub predicted_deg_forward: DegreeLaw,
    pub predicted_deg_inverse: DegreeLaw,
    /// The constant Jacobian determinant of `forward`.
    pub jacobian: Scalar,
    formula: Formula,
}

impl AutomorphismPair {
    /// `forward ∘ args`, evaluated along the closed form rather than by
    /// expanding `forward` monomial by monomial. The arguments must share
    /// one variable count and the ring of the pair.
    pub fn forward_at(&self, args: &[Polynomial]) -> Result<Vec<Polynomial>> {
        self.check_args(args)?;
        self.formula.forward(args)
    }

    /// `inverse ∘ args`, evaluated along the closed form.
    pub fn inverse_at(&self, args: &[Polynomial]) -> Result<Vec<Polynomial>> {
        self.check_args(args)?;
        self.formula.inverse(args)
    }

    /// Whether `inverse ∘ forward` and `forward ∘ inverse` are both the
    /// identity. Exact; the compositions are formed with
    /// [`forward_at`](Self::forward_at) and [`inverse_at`](Self::inverse_at),
    /// which keeps intermediate expressions small.
    pub fn round_trip_holds(&self) -> Result<bool> {
        let id = PolyMap::identity(self.forward.nvars(), self.forward.ring());
        let left = self.inverse_at(self.forward.components())?;
        let right = self.forward_at(self.inverse.components())?;
        Ok(left == id.components() && right == id.components())
    }

    fn check_args(&self, args: &[Polynomial]) -> Result<()> {
        let n = self.forward.nvars();
        if args.len() != n {
            return Err(Error::ArityMismatch { expected: n, found: args.len() });
        }
        let m = args[0].nvars();
        for a in args {
            if a.ring() != self.forward.ring() {
                return Err(Error::RingMismatch);
            }
            if a.nvars() != m {
                return Err(Error::ArityMismatch { expected: m, found: a.nvars() });
            }
        }
        Ok(())
    }
}

/// The validated parameters of a family, enough to evaluate either map on
/// arbitrary polynomial arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Formula {
    Dim2 {
        a: Scalar,
        b: Scalar,
        sp: UniPoly,
    },
    Extruded {
        a: Scalar,
        b: Scalar,
        sp: UniPoly,
        zeta: UniPoly,
    },
    Dim3Partial {
        xi: Vec<Scalar>,
        eta: Vec<Scalar>,
        a_c: Scalar,
        q_r: Scalar,
        k: Scalar,
        eta_invariant: bool,
        phi: UniPoly,
        psi: UniPoly,
    },
    Dim3Full {
        xi: Vec<Scalar>,
        a_c: Scalar,
        b_c: Scalar,
        phi: UniPoly,
        psi: UniPoly,
    },
    Dim4 {
        rows: Vec<Vec<Scalar>>,
        ratios: Vec<Scalar>,
        k21: Scalar,
        k31: Scalar,
        k32: Scalar,
        f: Vec<UniPoly>,
    },
    DimN {
        a: Vec<Scalar>,
        ratios: Vec<Scalar>,
        phis: Vec<UniPoly>,
    },
    Triangular {
        lambdas: Vec<Scalar>,
        inv_lambdas: Vec<Scalar>,
        fs: Vec<Polynomial>,
    },
}

/// `Σ coeffs[j] * args[j]`.
fn lin(args: &[Polynomial], coeffs: &[Scalar]) -> Result<Polynomial> {
    let mut acc = Polynomial::zero(args[0].nvars(), args[0].ring());
    for (p, c) in args.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.add(&p.scale(c))?;
        }
    }
    Ok(acc)
}

fn weighted(coeffs: &[Scalar], ps: &[Polynomial]) -> Result<Polynomial> {
    lin(ps, coeffs)
}

impl Formula {
    fn forward(&self, x: &[Polynomial]) -> Result<Vec<Polynomial>> {
        match self {
            Formula::Dim3Partial { xi, eta, a_c, q_r, phi, psi, .. } => {
                let f = phi.substitute(&lin(x, xi)?)?;
                let g = psi.substitute(&lin(x, eta)?)?;
                Ok(vec![x[0].add(&f)?, x[1].add(&g)?, x[2].sub(&f.scale(a_c))?.sub(&g.scale(q_r))?])
            }
            Formula::Dim4 { rows, ratios, f, .. } => {
                let fx = (0..3).map(|i| f[i].substitute(&lin(x, &rows[i])?)).collect::<Result<Vec<_>>>()?;
                let mut out = (0..3).map(|i| x[i].add(&fx[i])).collect::<Result<Vec<_>>>()?;
                out.push(x[3].sub(&weighted(ratios, &fx)?)?);
                Ok(out)
            }
            Formula::Triangular { lambdas, fs, .. } => {
                (0..x.len()).map(|i| x[i].scale(&lambdas[i]).add(&fs[i].compose(x)?)).collect()
            }
            _ => self.shear(x, false),
        }
    }

    fn inverse(&self, u: &[Polynomial]) -> Result<Vec<Polynomial>> {
        match self {
            Formula::Dim3Partial { xi, eta, a_c, q_r, k, eta_invariant, phi, psi } => {
                let (f, g) = if *eta_invariant {
                    let g = psi.substitute(&lin(u, eta)?)?;
                    (phi.substitute(&lin(u, xi)?.sub(&g.scale(k))?)?, g)
                } else {
                    let f = phi.substitute(&lin(u, xi)?)?;
                    let g = psi.substitute(&lin(u, eta)?.sub(&f.scale(k))?)?;
                    (f, g)
                };
                Ok(vec![u[0].sub(&f)?, u[1].sub(&g)?, u[2].add(&f.scale(a_c))?.add(&g.scale(q_r))?])
            }
            Formula::Dim4 { rows, ratios, k21, k31, k32, f } => {
                let f1 = f[0].substitute(&lin(u, &rows[0])?)?;
                let f2 = f[1].substitute(&lin(u, &rows[1])?.sub(&f1.scale(k21))?)?;
                let xi3 = lin(u, &rows[2])?.sub(&f1.scale(k31))?.sub(&f2.scale(k32))?;
                let fi = [f1, f2, f[2].substitute(&xi3)?];
                let mut out = (0..3).map(|i| u[i].sub(&fi[i])).collect::<Result<Vec<_>>>()?;
                out.push(u[3].add(&weighted(ratios, &fi)?)?);
                Ok(out)
            }
            Formula::Triangular { inv_lambdas, fs, .. } => {
                let zero = Polynomial::zero(u[0].nvars(), u[0].ring());
                let mut xs: Vec<Polynomial> = Vec::with_capacity(u.len());
                for i in 0..u.len() {
                    let mut args = xs.clone();
                    args.resize(u.len(), zero.clone());
                    xs.push(u[i].sub(&fs[i].compose(&args)?)?.scale(&inv_lambdas[i]));
                }
                Ok(xs)
            }
            _ => self.shear(u, true),
        }
    }

    /// The fully invariant families: the inverse is the forward map with
    /// the nonlinear part negated, because the form it depends on is
    /// unchanged.
    fn shear(&self, x: &[Polynomial], negate: bool) -> Result<Vec<Polynomial>> {
        let sign = |p: Polynomial| if negate { p.neg() } else { p };
        match self {
            Formula::Dim2 { a, b, sp } => {
                let s = sign(sp.substitute(&lin(x, &[a.clone(), b.clone()])?)?);
                Ok(vec![x[0].add(&s.scale(b))?, x[1].sub(&s.scale(a))?])
            }
            Formula::Extruded { a, b, sp, zeta } => {
                let xi = lin(x, &[a.clone(), b.clone()])?;
                let s = sign(zeta.substitute(&x[2])?.mul(&sp.substitute(&xi)?)?);
                Ok(vec![x[0].add(&s.scale(b))?, x[1].sub(&s.scale(a))?, x[2].clone()])
            }
            Formula::Dim3Full { xi, a_c, b_c, phi, psi } => {
                let t = lin(x, xi)?;
                let f = sign(phi.substitute(&t)?);
                let g = sign(psi.substitute(&t)?);
                Ok(vec![x[0].add(&f)?, x[1].add(&g)?, x[2].sub(&f.scale(a_c))?.sub(&g.scale(b_c))?])
            }
            Formula::DimN { a, ratios, phis } => {
                let t = lin(x, a)?;
                let fs = phis.iter().map(|g| Ok(sign(g.substitute(&t)?))).collect::<Result<Vec<_>>>()?;
                let n = a.len();
                let mut out = (0..n - 1).map(|i| x[i].add(&fs[i])).collect::<Result<Vec<_>>>()?;
                out.push(x[n - 1].sub(&weighted(ratios, &fs)?)?);
                Ok(out)
            }
            _ => unreachable!("not a fully invariant family"),
        }
    }
}

fn check_scalars(ring: &RingSpec, values: &[&Scalar]) -> Result<()> {
    values.iter().try_for_each(|v| ring.check(v))
}

fn check_generator(ring: &RingSpec, name: &str, g: &UniPoly) -> Result<()> {
    if g.ring() != ring {
        return Err(Error::RingMismatch);
    }
    if !g.has_no_affine_part() {
        return Err(Error::DegenerateGenerator(format!("{name} has a constant or linear term")));
    }
    Ok(())
}

fn divide(ring: &RingSpec, a: &Scalar, b: &Scalar, what: &str) -> Result<Scalar> {
    ring.div(a, b).ok_or_else(|| Error::ZeroDenominator(format!("{what} = {b} is not invertible in {ring}")))
}

fn uni_degree(g: &UniPoly) -> Option<u32> {
    g.degree().finite()
}

fn max_degree(ds: &[Option<u32>]) -> u32 {
    ds.iter().flatten().copied().max().unwrap_or(1).max(1)
}

fn product_degree(ds: &[Option<u32>]) -> u32 {
    ds.iter().flatten().copied().reduce(|x, y| x * y).unwrap_or(1).max(1)
}

fn law(ring: &RingSpec, d: u32) -> DegreeLaw {
    match ring {
        RingSpec::Rationals => DegreeLaw::Exact(d),
        RingSpec::IntegersMod(_) => DegreeLaw::AtMost(d),
    }
}

struct Draft {
    family: FamilyKind,
    invariant_forms: Vec<Vec<Scalar>>,
    corrections: Vec<FormCorrection>,
    predicted_deg_forward: DegreeLaw,
    predicted_deg_inverse: DegreeLaw,
    jacobian: Scalar,
}

fn finish(ring: &RingSpec, n: usize, formula: Formula, d: Draft) -> Result<AutomorphismPair> {
    let vars = PolyMap::identity(n, ring).into_components();
    Ok(AutomorphismPair {
        family: d.family,
        forward: PolyMap::new(formula.forward(&vars)?)?,
        inverse: PolyMap::new(formula.inverse(&vars)?)?,
        invariant_forms: d.invariant_forms,
        corrections: d.corrections,
        predicted_deg_forward: d.predicted_deg_forward,
        predicted_deg_inverse: d.predicted_deg_inverse,
        jacobian: d.jacobian,
        formula,
    })
}

/// `u = x + b*σ'(ξ)`, `v = y - a*σ'(ξ)` with `ξ = a*x + b*y`.
pub fn dim2_homogeneous(a: &Scalar, b: &Scalar, sigma: &UniPoly) -> Result<AutomorphismPair> {
    let ring = sigma.ring();
    check_scalars(ring, &[a, b])?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ConditionViolated("(a, b) = (0, 0)".into()));
    }
    let sp = sigma.derivative();
    if !sp.has_no_affine_part() {
        return Err(Error::DegenerateGenerator("sigma' has a constant or linear term".into()));
    }
    let d = law(ring, max_degree(&[uni_degree(&sp)]));
    let draft = Draft {
        family: FamilyKind::Dim2Homogeneous,
        invariant_forms: vec![vec![a.clone(), b.clone()]],
        corrections: Vec::new(),
        predicted_deg_forward: d,
        predicted_deg_inverse: d,
        jacobian: Scalar::one(),
    };
    finish(ring, 2, Formula::Dim2 { a: a.clone(), b: b.clone(), sp }, draft)
}

/// The 2D family carried into 3D by a factor `ζ(z)`:
/// `u = x + b*ζ(z)*σ'(ξ)`, `v = y - a*ζ(z)*σ'(ξ)`, `w = z`.
pub fn dim2_extruded(a: &Scalar, b: &Scalar, sigma: &UniPoly, zeta: &UniPoly) -> Result<AutomorphismPair> {
    let ring = sigma.ring();
    if zeta.ring() != ring {
        return Err(Error::RingMismatch);
    }
    check_scalars(ring, &[a, b])?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ConditionViolated("(a, b) = (0, 0)".into()));
    }
    let sp = sigma.derivative();
    let vars = PolyMap::identity(3, ring).into_components();
    let s = zeta.substitute(&vars[2])?.mul(&sp.substitute(&lin(&vars, &[a.clone(), b.clone()])?)?)?;
    if !s.is_zero() && s.lowest_degree() < Degree::Finite(2) {
        return Err(Error::DegenerateGenerator("zeta(z)*sigma'(xi) has a constant or linear term".into()));
    }
    let deg = match (uni_degree(zeta), uni_degree(&sp)) {
        (Some(dz), Some(ds)) => (dz + ds).max(1),
        _ => 1,
    };
    let d = law(ring, deg);
    let draft = Draft {
        family: FamilyKind::Dim2Extruded3D,
        invariant_forms: vec![
            vec![a.clone(), b.clone(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::one()],
        ],
        corrections: Vec::new(),
        predicted_deg_forward: d,
        predicted_deg_inverse: d,
        jacobian: Scalar::one(),
    };
    finish(ring, 3, Formula::Extruded { a: a.clone(), b: b.clone(), sp, zeta: zeta.clone() }, draft)
}

/// `u = x + φ(ξ)`, `v = y + ψ(η)`, `w = z - (a/c)φ(ξ) - (q/r)ψ(η)` with
/// `ξ = ax + by + cz`, `η = px + qy + rz`. Exactly one of `ar = cp`
/// (then `η` is invariant) or `br = cq` (then `ξ` is) must hold.
#[allow(clippy::too_many_arguments)]
pub fn dim3_partial(
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
    p: &Scalar,
    q: &Scalar,
    r: &Scalar,
    phi: &UniPoly,
    psi: &UniPoly,
) -> Result<AutomorphismPair> {
    let ring = phi.ring();
    check_scalars(ring, &[a, b, c, p, q, r])?;
    check_generator(ring, "phi", phi)?;
    check_generator(ring, "psi", psi)?;
    let a_c = divide(ring, a, c, "c")?;
    let q_r = divide(ring, q, r, "r")?;
    let ar_cp = ring.sub(&ring.mul(a, r), &ring.mul(c, p));
    let br_cq = ring.sub(&ring.mul(b, r), &ring.mul(c, q));
    let eta_invariant = match (ar_cp.is_zero(), br_cq.is_zero()) {
        (true, true) => {
            return Err(Error::ConditionViolated(
                "both a*r = c*p and b*r = c*q hold; this is the fully invariant case, use dim3_full".into(),
            ))
        }
        (false, false) => {
            return Err(Error::ConditionViolated(format!(
                "(a*r - c*p)*(b*r - c*q) must vanish, but a*r - c*p = {ar_cp} and b*r - c*q = {br_cq}"
            )))
        }
        (true, false) => true,
        (false, true) => false,
    };

    let xi = vec![a.clone(), b.clone(), c.clone()];
    let eta = vec![p.clone(), q.clone(), r.clone()];
    let vars = PolyMap::identity(3, ring).into_components();
    // The form that is not invariant moves by k times the other generator:
    // (a,b,c).P(x) - ξ = (b - c*q/r) ψ(η), or (p,q,r).P(x) - η = (p - a*r/c) φ(ξ).
    let (k, invariant, correction) = if eta_invariant {
        let k = ring.sub(b, &ring.mul(c, &q_r));
        let corr = psi.substitute(&lin(&vars, &eta)?)?.scale(&k);
        (k, eta.clone(), FormCorrection { form: xi.clone(), correction: corr })
    } else {
        let k = ring.sub(p, &ring.mul(&a_c, r));
        let corr = phi.substitute(&lin(&vars, &xi)?)?.scale(&k);
        (k, xi.clone(), FormCorrection { form: eta.clone(), correction: corr })
    };
    let degs = [uni_degree(phi), uni_degree(psi)];
    let draft = Draft {
        family: FamilyKind::Dim3Partial,
        invariant_forms: vec![invariant],
        corrections: vec![correction],
        predicted_deg_forward: law(ring, max_degree(&degs)),
        predicted_deg_inverse: law(ring, product_degree(&degs)),
        jacobian: Scalar::one(),
    };
    let formula = Formula::Dim3Partial { xi, eta, a_c, q_r, k, eta_invariant, phi: phi.clone(), psi: psi.clone() };
    finish(ring, 3, formula, draft)
}

/// `u = x + φ(ξ)`, `v = y + ψ(ξ)`, `w = z - (a/c)φ(ξ) - (b/c)ψ(ξ)` with
/// `ξ = ax + by + cz` invariant.
pub fn dim3_full(a: &Scalar, b: &Scalar, c: &Scalar, phi: &UniPoly, psi: &UniPoly) -> Result<AutomorphismPair> {
    let ring = phi.ring();
    check_scalars(ring, &[a, b, c])?;
    check_generator(ring, "phi", phi)?;
    check_generator(ring, "psi", psi)?;
    let a_c = divide(ring, a, c, "c")?;
    let b_c = divide(ring, b, c, "c")?;
    let xi = vec![a.clone(), b.clone(), c.clone()];
    let d = law(ring, max_degree(&[uni_degree(phi), uni_degree(psi)]));
    let draft = Draft {
        family: FamilyKind::Dim3Full,
        invariant_forms: vec![xi.clone()],
        corrections: Vec::new(),
        predicted_deg_forward: d,
        predicted_deg_inverse: d,
        jacobian: Scalar::one(),
    };
    finish(ring, 3, Formula::Dim3Full { xi, a_c, b_c, phi: phi.clone(), psi: psi.clone() }, draft)
}

/// The 4D family `u_i = x_i + f_i(ξ_i)` (`i = 1..3`),
/// `u_4 = x_4 - Σ (a_ii/a_i4) f_i(ξ_i)` with `ξ_i = Σ_j a_ij x_j`.
///
/// `a` is the 3x4 matrix `(a_ij)`. Always required: `a_i4` invertible and
/// `a12*a24 = a14*a22`, `a13*a34 = a14*a33`, `a23*a34 = a24*a33`. The case
/// fixes which of `a11*a24 = a14*a21`, `a11*a34 = a14*a31`,
/// `a22*a34 = a24*a32` hold; the rest must fail.
pub fn dim4_partial(a: &[[Scalar; 4]; 3], f: &[UniPoly; 3], case: Dim4Case) -> Result<AutomorphismPair> {
    let ring = f[0].ring();
    for row in a {
        check_scalars(ring, &row.iter().collect::<Vec<_>>())?;
    }
    for (i, g) in f.iter().enumerate() {
        check_generator(ring, &format!("f{}", i + 1), g)?;
    }
    let m = |i: usize, j: usize| &a[i - 1][j - 1];
    let mul = |x: &Scalar, y: &Scalar| ring.mul(x, y);
    for i in 1..=3 {
        if !ring.is_unit(m(i, 4)) {
            return Err(Error::ConditionViolated(format!("a{i}4 = {} must be nonzero and invertible", m(i, 4))));
        }
    }

    let rel = |l: (usize, usize, usize, usize), r: (usize, usize, usize, usize)| {
        let lhs = mul(m(l.0, l.1), m(l.2, l.3));
        let rhs = mul(m(r.0, r.1), m(r.2, r.3));
        (lhs == rhs, format!("a{}{}*a{}{} = a{}{}*a{}{}", l.0, l.1, l.2, l.3, r.0, r.1, r.2, r.3))
    };
    for (holds, text) in
        [rel((1, 2, 2, 4), (1, 4, 2, 2)), rel((1, 3, 3, 4), (1, 4, 3, 3)), rel((2, 3, 3, 4), (2, 4, 3, 3))]
    {
        if !holds {
            return Err(Error::ConditionViolated(format!("{text} is required")));
        }
    }
    let case_rels = [rel((1, 1, 2, 4), (1, 4, 2, 1)), rel((1, 1, 3, 4), (1, 4, 3, 1)), rel((2, 2, 3, 4), (2, 4, 3, 2))];
    for ((holds, text), want) in case_rels.iter().zip(case.pattern()) {
        if *holds != want {
            let verb = if want { "must hold" } else { "must fail" };
            return Err(Error::ConditionViolated(format!("{case}: {text} {verb}")));
        }
    }

    let ratios = (1..=3).map(|i| divide(ring, m(i, i), m(i, 4), &format!("a{i}4"))).collect::<Result<Vec<_>>>()?;
    // k_rc = a_rc - a_r4 * a_cc / a_c4
    let k = |row: usize, col: usize| ring.sub(m(row, col), &mul(m(row, 4), &ratios[col - 1]));
    let (k21, k31, k32) = (k(2, 1), k(3, 1), k(3, 2));

    let rows: Vec<Vec<Scalar>> = a.iter().map(|row| row.to_vec()).collect();
    let vars = PolyMap::identity(4, ring).into_components();
    let fx = (0..3).map(|i| f[i].substitute(&lin(&vars, &rows[i])?)).collect::<Result<Vec<_>>>()?;
    // L1 is always invariant; L2 moves by k21 f1, L3 by k31 f1 + k32 f2.
    let mut invariant_forms = vec![rows[0].clone()];
    let mut corrections = Vec::new();
    let c2 = fx[0].scale(&k21);
    let c3 = fx[0].scale(&k31).add(&fx[1].scale(&k32))?;
    for (row, corr) in [(&rows[1], c2), (&rows[2], c3)] {
        if corr.is_zero() {
            invariant_forms.push(row.clone());
        } else {
            corrections.push(FormCorrection { form: row.clone(), correction: corr });
        }
    }

    let d = [uni_degree(&f[0]), uni_degree(&f[1]), uni_degree(&f[2])];
    // Zero generators drop out of the degree formulas.
    let prod = |x: Option<u32>, y: Option<u32>| match (x, y) {
        (Some(x), Some(y)) => Some(x * y),
        (x, y) => x.or(y),
    };
    let max = |x: Option<u32>, y: Option<u32>| x.max(y);
    let inv_deg = match case {
        Dim4Case::OneInvariant => prod(prod(d[0], d[1]), d[2]),
        Dim4Case::TwoInvariantA => prod(max(d[0], d[1]), d[2]),
        Dim4Case::TwoInvariantB => max(d[0], prod(d[1], d[2])),
        Dim4Case::ThreeInvariant => max(max(d[0], d[1]), d[2]),
    }
    .unwrap_or(1)
    .max(1);
    let mut inv_law = law(ring, inv_deg);
    if case == Dim4Case::TwoInvariantA && two_a_leading_terms_cancel(ring, f, &k31, &k32, m(2, 4), m(1, 4)) {
        // Here L2 = (a24/a14) L1, so k31 f1(ξ1) + k32 f2(ξ2) is a single
        // polynomial in ξ1 whose top coefficient can vanish.
        inv_law = DegreeLaw::AtMost(inv_deg);
    }
    let draft = Draft {
        family: FamilyKind::Dim4Partial,
        invariant_forms,
        corrections,
        predicted_deg_forward: law(ring, max_degree(&d)),
        predicted_deg_inverse: inv_law,
        jacobian: Scalar::one(),
    };
    finish(ring, 4, Formula::Dim4 { rows, ratios, k21, k31, k32, f: f.to_vec() }, draft)
}

fn two_a_leading_terms_cancel(
    ring: &RingSpec,
    f: &[UniPoly; 3],
    k31: &Scalar,
    k32: &Scalar,
    a24: &Scalar,
    a14: &Scalar,
) -> bool {
    let (Some(d1), Some(d2)) = (uni_degree(&f[0]), uni_degree(&f[1])) else { return false };
    if d1 != d2 || f[2].is_zero() {
        return false;
    }
    let Some(scale) = ring.div(a24, a14) else { return false };
    let top1 = ring.mul(k31, &f[0].coeff(d1 as usize));
    let top2 = ring.mul(k32, &ring.mul(&f[1].coeff(d2 as usize), &ring.pow(&scale, d2)));
    ring.add(&top1, &top2).is_zero()
}

/// `u_i = x_i + φ_i(ξ)` for `i < n`, `u_n = x_n - Σ (a_i/a_n) φ_i(ξ)` with
/// `ξ = Σ a_i x_i` invariant.
pub fn dimn_full(a: &[Scalar], phis: &[UniPoly]) -> Result<AutomorphismPair> {
    let n = a.len();
    if n < 2 {
        return Err(Error::BadDimension(format!("n = {n}, need at least 2")));
    }
    if phis.len() != n - 1 {
        return Err(Error::ArityMismatch { expected: n - 1, found: phis.len() });
    }
    let ring = phis[0].ring();
    check_scalars(ring, &a.iter().collect::<Vec<_>>())?;
    for (i, g) in phis.iter().enumerate() {
        check_generator(ring, &format!("phi_{}", i + 1), g)?;
    }
    let ratios = a[..n - 1].iter().map(|ai| divide(ring, ai, &a[n - 1], "a_n")).collect::<Result<Vec<_>>>()?;
    let d = law(ring, max_degree(&phis.iter().map(uni_degree).collect::<Vec<_>>()));
    let draft = Draft {
        family: FamilyKind::DimNFull,
        invariant_forms: vec![a.to_vec()],
        corrections: Vec::new(),
        predicted_deg_forward: d,
        predicted_deg_inverse: d,
        jacobian: Scalar::one(),
    };
    finish(ring, n, Formula::DimN { a: a.to_vec(), ratios, phis: phis.to_vec() }, draft)
}

/// `u_i = λ_i x_i + f_i(x_1, ..., x_{i-1})`, inverted by back-substitution.
pub fn triangular_param(lambdas: &[Scalar], fs: &[Polynomial]) -> Result<AutomorphismPair> {
    let n = lambdas.len();
    if n == 0 {
        return Err(Error::BadDimension("n = 0".into()));
    }
    if fs.len() != n {
        return Err(Error::ArityMismatch { expected: n, found: fs.len() });
    }
    let ring = fs[0].ring();
    check_scalars(ring, &lambdas.iter().collect::<Vec<_>>())?;
    let mut inv_lambdas = Vec::with_capacity(n);
    for (i, l) in lambdas.iter().enumerate() {
        inv_lambdas.push(ring.inv(l).ok_or(Error::NonInvertibleLambda { index: i + 1 })?);
    }
    for (i, f) in fs.iter().enumerate() {
        if f.ring() != ring {
            return Err(Error::RingMismatch);
        }
        if f.nvars() != n {
            return Err(Error::ArityMismatch { expected: n, found: f.nvars() });
        }
        if let Some(j) = (i..n).find(|&j| f.depends_on(j)) {
            return Err(Error::TriangularityViolated { component: i + 1, variable: j + 1 });
        }
        if !f.is_zero() && f.lowest_degree() < Degree::Finite(2) {
            return Err(Error::DegenerateGenerator(format!("f_{} has a constant or linear term", i + 1)));
        }
    }
    let degs: Vec<Option<u32>> = fs.iter().map(|f| f.total_degree().finite()).collect();
    let jacobian = lambdas.iter().fold(Scalar::one(), |acc, l| ring.mul(&acc, l));
    let draft = Draft {
        family: FamilyKind::TriangularParam,
        invariant_forms: Vec::new(),
        corrections: Vec::new(),
        predicted_deg_forward: DegreeLaw::Exact(max_degree(&degs)),
        predicted_deg_inverse: DegreeLaw::AtMost(product_degree(&degs)),
        jacobian: jacobian.clone(),
    };
    let formula = Formula::Triangular { lambdas: lambdas.to_vec(), inv_lambdas, fs: fs.to_vec() };
    let pair = finish(ring, n, formula, draft)?;
    let report = check_keller(&pair.forward);
    if report.constant_value.as_ref() != Some(&jacobian) {
        return Err(Error::ConditionViolated(format!("Jacobian is {}, expected {jacobian}", report.jacobian)));
    }
    Ok(pair)
}

/// The four two-variable families with quadratic plus cubic nonlinear part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WorkedExample {
    /// `f = a*y^2 + b*y^3`, `g = 0`.
    ShearY,
    /// `f = 0`, `g = a*x^2 + b*x^3`.
    ShearX,
    /// `f = a*ξ^2 - b^2/(9c)*ξ^3`, `g = -ab/(3c)*ξ^2 + b^3/(27c^2)*ξ^3`,
    /// `ξ = x + (3c/b)*y`; needs `b, c != 0`.
    Cubic,
    /// `f = η^2/a`, `g = b*η^2/a^2`, `η = b*x - a*y`; needs `a != 0`.
    Quadratic,
}

impl WorkedExample {
    pub const ALL: [WorkedExample; 4] =
        [WorkedExample::ShearY, WorkedExample::ShearX, WorkedExample::Cubic, WorkedExample::Quadratic];
}

fn require_unit(ring: &RingSpec, x: &Scalar, what: &str) -> Result<Scalar> {
    ring.inv(x).ok_or_else(|| Error::ConditionViolated(format!("{what} must be nonzero (invertible), got {x}")))
}

/// The nonlinear parts `(f, g)` of one worked family.
pub fn worked_example_parts(
    kind: WorkedExample,
    ring: &RingSpec,
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
) -> Result<(Polynomial, Polynomial)> {
    check_scalars(ring, &[a, b, c])?;
    let x = Polynomial::var(2, ring, 0)?;
    let y = Polynomial::var(2, ring, 1)?;
    let cubic_in = |t: &Polynomial, c2: &Scalar, c3: &Scalar| -> Result<Polynomial> {
        t.pow(2)?.scale(c2).add(&t.pow(3)?.scale(c3))
    };
    let zero = Polynomial::zero(2, ring);
    match kind {
        WorkedExample::ShearY => Ok((cubic_in(&y, a, b)?, zero)),
        WorkedExample::ShearX => Ok((zero, cubic_in(&x, a, b)?)),
        WorkedExample::Cubic => {
            let b_inv = require_unit(ring, b, "b")?;
            let c_inv = require_unit(ring, c, "c")?;
            let int = |k: i64| ring.from_i64(k);
            let three_inv = require_unit(ring, &int(3), "3")?;
            let ratio = ring.mul(&ring.mul(&int(3), c), &b_inv);
            let xi = x.add(&y.scale(&ratio))?;
            // b^2/(9c), ab/(3c), b^3/(27c^2)
            let f3 = ring.neg(&ring.mul(&ring.mul(&ring.pow(b, 2), &ring.pow(&three_inv, 2)), &c_inv));
            let g2 = ring.neg(&ring.mul(&ring.mul(&ring.mul(a, b), &three_inv), &c_inv));
            let g3 = ring.mul(&ring.mul(&ring.pow(b, 3), &ring.pow(&three_inv, 3)), &ring.pow(&c_inv, 2));
            Ok((cubic_in(&xi, a, &f3)?, cubic_in(&xi, &g2, &g3)?))
        }
        WorkedExample::Quadratic => {
            let a_inv = require_unit(ring, a, "a")?;
            let eta = x.scale(b).sub(&y.scale(a))?;
            let eta2 = eta.pow(2)?;
            Ok((eta2.scale(&a_inv), eta2.scale(&ring.mul(b, &ring.pow(&a_inv, 2)))))
        }
    }
}

/// The map `(x + f, y + g)` of one worked family.
pub fn worked_example(kind: WorkedExample, ring: &RingSpec, a: &Scalar, b: &Scalar, c: &Scalar) -> Result<PolyMap> {
    let (f, g) = worked_example_parts(kind, ring, a, b, c)?;
    PolyMap::new(vec![Polynomial::var(2, ring, 0)?.add(&f)?, Polynomial::var(2, ring, 1)?.add(&g)?])
}

/// All four worked families for one choice of `(a, b, c)`.
pub fn dim2_worked_examples(ring: &RingSpec, a: &Scalar, b: &Scalar, c: &Scalar) -> Result<Vec<PolyMap>> {
    WorkedExample::ALL.iter().map(|&k| worked_example(k, ring, a, b, c)).collect()
}

/// Parameters selecting one family, in a flat form suitable for files.
///
/// | kind | coefficients | generators |
/// |------|--------------|------------|
/// | `dim2_homogeneous` | `a, b` | `σ` |
/// | `dim2_extruded` | `a, b` | `σ, ζ` |
/// | `dim3_partial` | `a, b, c, p, q, r` | `φ, ψ` |
/// | `dim3_full` | `a, b, c` | `φ, ψ` |
/// | `dim4_partial` | `a11 .. a34`, row-major | `f1, f2, f3` |
/// | `dimn_full` | `a1 .. an` | `φ1 .. φ(n-1)` |
/// | `triangular` | `λ1 .. λn` | `f1 .. fn` in `n` variables |
///
/// Univariate generators are one-variable polynomials in `x1`. `case` is
/// required for `dim4_partial` and ignored otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub ring: RingSpec,
    pub coefficients: Vec<Scalar>,
    pub generators: Vec<Polynomial>,
    pub case: Option<Dim4Case>,
}

impl FamilySpec {
    fn expect_counts(&self, coeffs: Option<usize>, gens: usize) -> Result<()> {
        if let Some(k) = coeffs {
            if self.coefficients.len() != k {
                return Err(Error::ArityMismatch { expected: k, found: self.coefficients.len() });
            }
        }
        if self.generators.len() != gens {
            return Err(Error::ArityMismatch { expected: gens, found: self.generators.len() });
        }
        Ok(())
    }

    fn uni(&self, i: usize) -> Result<UniPoly> {
        let g = &self.generators[i];
        if g.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        UniPoly::from_polynomial(g)
    }

    pub fn build(&self) -> Result<AutomorphismPair> {
        for c in &self.coefficients {
            self.ring.check(c)?;
        }
        let k = &self.coefficients;
        match self.kind {
            FamilyKind::Dim2Homogeneous => {
                self.expect_counts(Some(2), 1)?;
                dim2_homogeneous(&k[0], &k[1], &self.uni(0)?)
            }
            FamilyKind::Dim2Extruded3D => {
                self.expect_counts(Some(2), 2)?;
                dim2_extruded(&k[0], &k[1], &self.uni(0)?, &self.uni(1)?)
            }
            FamilyKind::Dim3Partial => {
                self.expect_counts(Some(6), 2)?;
                dim3_partial(&k[0], &k[1], &k[2], &k[3], &k[4], &k[5], &self.uni(0)?, &self.uni(1)?)
            }
            FamilyKind::Dim3Full => {
                self.expect_counts(Some(3), 2)?;
                dim3_full(&k[0], &k[1], &k[2], &self.uni(0)?, &self.uni(1)?)
            }
            FamilyKind::Dim4Partial => {
                self.expect_counts(Some(12), 3)?;
                let case = self.case.ok_or_else(|| Error::ConditionViolated("dim4_partial needs a case".into()))?;
                let row = |i: usize| -> [Scalar; 4] { core::array::from_fn(|j| k[4 * i + j].clone()) };
                dim4_partial(&[row(0), row(1), row(2)], &[self.uni(0)?, self.uni(1)?, self.uni(2)?], case)
            }
            FamilyKind::DimNFull => {
                let n = k.len();
                self.expect_counts(None, n.saturating_sub(1))?;
                let phis = (0..self.generators.len()).map(|i| self.uni(i)).collect::<Result<Vec<_>>>()?;
                if phis.is_empty() {
                    return Err(Error::BadDimension(format!("n = {n}, need at least 2")));
                }
                dimn_full(k, &phis)
            }
            FamilyKind::TriangularParam => {
                self.expect_counts(None, k.len())?;
                if self.generators.iter().any(|g| g.ring() != &self.ring) {
                    return Err(Error::RingMismatch);
                }
                triangular_param(k, &self.generators)
            }
        }
    }
}

/// Human-readable label for diagnostics.
pub fn describe(pair: &AutomorphismPair) -> String {
    format!(
        "{} in {} variables: deg forward {}, deg inverse {}, jacobian {}",
        pair.family,
        pair.forward.nvars(),
        pair.predicted_deg_forward,
        pair.predicted_deg_inverse,
        pair.jacobian
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn q() -> RingSpec {
        RingSpec::Rationals
    }

    fn s(v: i64) -> Scalar {
        q().from_i64(v)
    }

    fn uni(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(&q(), c)
    }

    fn poly(text: &str, n: usize) -> Polynomial {
        parse_polynomial(text, n, &q()).unwrap()
    }

    fn assert_pair(p: &AutomorphismPair) {
        assert!(p.round_trip_holds().unwrap(), "{}", describe(p));
        // Monomial-wise composition as well, while it stays cheap.
        if p.forward.nvars() <= 3 && p.predicted_deg_inverse.value() <= 4 {
            assert!(p.inverse.compose(&p.forward).unwrap().is_identity(), "inverse . forward");
            assert!(p.forward.compose(&p.inverse).unwrap().is_identity(), "forward . inverse");
        }
        assert_eq!(check_keller(&p.forward).constant_value, Some(p.jacobian.clone()));
        assert!(p.predicted_deg_forward.admits(p.forward.degree()), "{}", describe(p));
        assert!(p.predicted_deg_inverse.admits(p.inverse.degree()), "{}", describe(p));
    }

    #[test]
    fn dim2_cubic_sigma() {
        let p = dim2_homogeneous(&s(1), &s(1), &uni(&[0, 0, 0, 1])).unwrap();
        assert_eq!(p.forward.component(0), &poly("x1 + 3*(x1 + x2)*(x1 + x2)", 2));
        assert_eq!(p.forward.component(1), &poly("x2 - 3*(x1 + x2)*(x1 + x2)", 2));
        assert_pair(&p);
    }

    #[test]
    fn dim2_zero_sigma_is_identity() {
        let p = dim2_homogeneous(&s(1), &s(1), &uni(&[])).unwrap();
        assert!(p.forward.is_identity() && p.inverse.is_identity());
    }

    #[test]
    fn dim2_mixed_sigma_degrees() {
        let p = dim2_homogeneous(&s(2), &s(-1), &uni(&[0, 0, 0, 1, 1])).unwrap();
        assert_eq!(p.predicted_deg_forward, DegreeLaw::Exact(3));
        assert_pair(&p);
    }

    #[test]
    fn dim2_rejects_quadratic_sigma() {
        assert!(matches!(dim2_homogeneous(&s(1), &s(1), &uni(&[0, 0, 1])), Err(Error::DegenerateGenerator(_))));
        assert!(matches!(dim2_homogeneous(&s(0), &s(0), &uni(&[0, 0, 0, 1])), Err(Error::ConditionViolated(_))));
    }

    #[test]
    fn extruded_examples() {
        let p = dim2_extruded(&s(1), &s(1), &uni(&[0, 0, 1]), &uni(&[0, 1])).unwrap();
        assert_eq!(p.forward.component(0), &poly("x1 + 2*x3*(x1 + x2)", 3));
        assert_eq!(p.forward.component(1), &poly("x2 - 2*x3*(x1 + x2)", 3));
        assert_pair(&p);
        assert_pair(&dim2_extruded(&s(1), &s(0), &uni(&[0, 0, 0, 1]), &uni(&[1, 0, 1])).unwrap());
        assert!(dim2_extruded(&s(1), &s(0), &uni(&[0, 0, 1]), &uni(&[1])).is_err());
    }

    #[test]
    fn dim3_partial_eta_invariant() {
        let p = dim3_partial(&s(1), &s(0), &s(1), &s(1), &s(1), &s(1), &uni(&[0, 0, 1]), &uni(&[0, 0, 1])).unwrap();
        assert_eq!(p.predicted_deg_forward, DegreeLaw::Exact(2));
        assert_eq!(p.predicted_deg_inverse, DegreeLaw::Exact(4));
        assert_eq!(p.invariant_forms, vec![vec![s(1), s(1), s(1)]]);
        assert_pair(&p);
    }

    #[test]
    fn dim3_partial_xi_invariant() {
        let p = dim3_partial(&s(0), &s(1), &s(1), &s(1), &s(1), &s(1), &uni(&[0, 0, 0, 1]), &uni(&[0, 0, 1])).unwrap();
        assert_eq!(p.predicted_deg_inverse, DegreeLaw::Exact(6));
        assert_pair(&p);
    }

    #[test]
    fn dim3_partial_without_phi() {
        let p = dim3_partial(&s(1), &s(0), &s(1), &s(1), &s(1), &s(1), &uni(&[]), &uni(&[0, 0, 0, 1])).unwrap();
        assert_eq!(p.predicted_deg_inverse, DegreeLaw::Exact(3));
        assert_pair(&p);
    }

    #[test]
    fn dim3_partial_conditions() {
        let phi = uni(&[0, 0, 1]);
        let both = dim3_partial(&s(1), &s(1), &s(1), &s(1), &s(1), &s(1), &phi, &phi);
        assert!(matches!(both, Err(Error::ConditionViolated(m)) if m.contains("dim3_full")));
        let neither = dim3_partial(&s(1), &s(2), &s(1), &s(3), &s(5), &s(1), &phi, &phi);
        assert!(matches!(neither, Err(Error::ConditionViolated(m)) if m.contains("(a*r - c*p)*(b*r - c*q)")));
        let zero_c = dim3_partial(&s(1), &s(2), &s(0), &s(3), &s(5), &s(1), &phi, &phi);
        assert!(matches!(zero_c, Err(Error::ZeroDenominator(_))));
    }

    #[test]
    fn dim3_full_examples() {
        let p = dim3_full(&s(0), &s(0), &s(1), &uni(&[0, 0, 1]), &uni(&[0, 0, 0, 1])).unwrap();
        assert_eq!(p.forward.into_components(), vec![poly("x1 + x3^2", 3), poly("x2 + x3^3", 3), poly("x3", 3)]);
        assert_eq!(p.inverse.components(), &[poly("x1 - x3^2", 3), poly("x2 - x3^3", 3), poly("x3", 3)]);
        assert_pair(&dim3_full(&s(1), &s(1), &s(1), &uni(&[0, 0, 1]), &uni(&[0, 0, 1])).unwrap());
        assert!(dim3_full(&s(1), &s(1), &s(1), &uni(&[]), &uni(&[])).unwrap().forward.is_identity());
    }

    fn a4(rows: [[i64; 4]; 3]) -> [[Scalar; 4]; 3] {
        rows.map(|r| r.map(s))
    }

    #[test]
    fn dim4_cases() {
        let sq = || uni(&[0, 0, 1]);
        let f = [sq(), sq(), sq()];
        // Rows chosen so the three required equalities hold.
        let one = a4([[1, 1, 1, 1], [2, 1, 1, 1], [3, 2, 1, 1]]);
        let p = dim4_partial(&one, &f, Dim4Case::OneInvariant).unwrap();
        assert_eq!(p.predicted_deg_inverse, DegreeLaw::Exact(8));
        assert_eq!(p.invariant_forms.len(), 1);
        assert_eq!(p.corrections.len(), 2);
        assert_pair(&p);

        let two_a = a4([[1, 1, 1, 1], [1, 1, 1, 1], [3, 2, 1, 1]]);
        let f_a = [uni(&[0, 0, 1]), uni(&[0, 0, 0, 1]), sq()];
        let p = dim4_partial(&two_a, &f_a, Dim4Case::TwoInvariantA).unwrap();
        assert_eq!(p.predicted_deg_inverse, DegreeLaw::Exact(6));
        assert_pair(&p);

        let two_b = a4([[1, 1, 1, 1], [1, 1, 1, 1], [1, 2, 1, 1]]);
        let p = dim4_partial(&two_b, &f, Dim4Case::TwoInvariantB).unwrap();
        assert_eq!(p.predicted_deg_inverse, DegreeLaw::Exact(4));
        assert_pair(&p);

        let three = a4([[1, 1, 1, 1], [2, 2, 2, 2], [1, 1, 1, 1]]);
        let p = dim4_partial(&three, &f, Dim4Case::ThreeInvariant).unwrap();
        assert_eq!(p.predicted_deg_inverse, DegreeLaw::Exact(2));
        assert_eq!(p.invariant_forms.len(), 3);
        assert_pair(&p);
    }

    #[test]
    fn dim4_validation_names_the_relation() {
        let f = [uni(&[0, 0, 1]), uni(&[0, 0, 1]), uni(&[0, 0, 1])];
        let one = a4([[1, 1, 1, 1], [2, 1, 1, 1], [3, 2, 1, 1]]);
        let err = dim4_partial(&one, &f, Dim4Case::ThreeInvariant).unwrap_err();
        assert!(matches!(err, Error::ConditionViolated(m) if m.contains("a11*a24 = a14*a21 must hold")));
        let bad = a4([[1, 2, 1, 1], [2, 1, 1, 1], [3, 2, 1, 1]]);
        let err = dim4_partial(&bad, &f, Dim4Case::OneInvariant).unwrap_err();
        assert!(matches!(err, Error::ConditionViolated(m) if m.contains("a12*a24 = a14*a22")));
        let zero = a4([[1, 1, 1, 0], [2, 1, 1, 1], [3, 2, 1, 1]]);
        assert!(dim4_partial(&zero, &f, Dim4Case::OneInvariant).is_err());
    }

    #[test]
    fn dimn_full_five() {
        let phis: Vec<UniPoly> = (1..5).map(|i| UniPoly::monomial(&q(), i + 1, Scalar::one())).collect();
        let p = dimn_full(&[s(1), s(1), s(1), s(1), s(1)], &phis).unwrap();
        assert_eq!(p.predicted_deg_forward, DegreeLaw::Exact(5));
        assert_pair(&p);
    }

    #[test]
    fn dimn_two_matches_2d_relation() {
        let p = dimn_full(&[s(2), s(3)], &[uni(&[0, 0, 1])]).unwrap();
        let f = p.forward.component(0).sub(&poly("x1", 2)).unwrap();
        let g = p.forward.component(1).sub(&poly("x2", 2)).unwrap();
        assert_eq!(g, f.scale(&q().from_ratio((-2).into(), 3.into()).unwrap()));
    }

    #[test]
    fn triangular_examples() {
        let fs = [poly("0", 4), poly("x1^2", 4), poly("x1*x2", 4), poly("x2^2 + x1*x3", 4)];
        let p = triangular_param(&[s(1), s(1), s(1), s(1)], &fs).unwrap();
        assert_pair(&p);

        let p = triangular_param(&[s(2), s(3)], &[poly("0", 2), poly("x1^2", 2)]).unwrap();
        assert_eq!(p.inverse.components(), &[poly("1/2*x1", 2), poly("1/3*x2 - 1/12*x1^2", 2)]);
        assert_eq!(p.jacobian, s(6));
        assert_pair(&p);
    }

    #[test]
    fn triangular_validation() {
        let zero = poly("0", 2);
        assert_eq!(
            triangular_param(&[s(1), s(0)], &[zero.clone(), zero.clone()]),
            Err(Error::NonInvertibleLambda { index: 2 })
        );
        assert_eq!(
            triangular_param(&[s(1), s(1)], &[zero.clone(), poly("x2^2", 2)]),
            Err(Error::TriangularityViolated { component: 2, variable: 2 })
        );
        assert!(matches!(triangular_param(&[s(1), s(1)], &[zero, poly("x1", 2)]), Err(Error::DegenerateGenerator(_))));
    }

    #[test]
    fn worked_examples_keller() {
        for kind in WorkedExample::ALL {
            let m = worked_example(kind, &q(), &s(1), &s(3), &s(1)).unwrap();
            assert_eq!(check_keller(&m).constant_value, Some(Scalar::one()), "{kind:?}");
        }
        let (f, g) = worked_example_parts(WorkedExample::Cubic, &q(), &s(1), &s(3), &s(1)).unwrap();
        assert_eq!(g, f.neg());
        let (f, g) = worked_example_parts(WorkedExample::Quadratic, &q(), &s(1), &s(1), &s(0)).unwrap();
        assert_eq!(f, poly("x1^2 - 2*x1*x2 + x2^2", 2));
        assert_eq!(g, f);
        assert!(worked_example(WorkedExample::Cubic, &q(), &s(1), &s(0), &s(1)).is_err());
        assert!(worked_example(WorkedExample::Quadratic, &q(), &s(0), &s(1), &s(1)).is_err());
    }

    #[test]
    fn spec_build_dispatches() {
        let spec = FamilySpec {
            kind: FamilyKind::Dim3Full,
            ring: q(),
            coefficients: vec![s(1), s(1), s(1)],
            generators: vec![poly("x1^2", 1), poly("x1^3", 1)],
            case: None,
        };
        assert_pair(&spec.build().unwrap());
        let bad = FamilySpec { generators: vec![poly("x1^2", 1)], ..spec };
        assert!(matches!(bad.build(), Err(Error::ArityMismatch { .. })));
    }
}
