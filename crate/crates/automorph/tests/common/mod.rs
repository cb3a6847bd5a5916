//! Randomized family specifications shared by the integration suites.
//!
//! Coefficients are integers in [-9, 9], generator degrees are at most 5 and
//! dimensions at most 6. Families whose inverse degree is a product of
//! generator degrees are drawn with that product at most
//! [`PRODUCT_DEGREE_CAP`] so the exact checks stay within budget.

#![allow(dead_code)]

use automorph_core::families::{AutomorphismPair, Dim4Case, FamilyKind, FamilySpec};
use automorph_core::{Exponents, Polynomial, RingSpec, Scalar};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_GEN_DEGREE: u32 = 5;
pub const MAX_N: usize = 6;
pub const PRODUCT_DEGREE_CAP: u32 = 12;

pub struct Instance {
    pub spec: FamilySpec,
    pub pair: AutomorphismPair,
    /// Degrees of the nonzero generators, in spec order (`None` for zero).
    pub gen_degrees: Vec<Option<u32>>,
}

fn q() -> RingSpec {
    RingSpec::Rationals
}

fn coeff(rng: &mut impl Rng) -> i64 {
    rng.gen_range(-9..=9)
}

fn nonzero(rng: &mut impl Rng) -> i64 {
    loop {
        let v = coeff(rng);
        if v != 0 {
            return v;
        }
    }
}

fn scalars(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| q().from_i64(x)).collect()
}

/// `sum_{k=low}^{deg} c_k x1^k` with a nonzero top coefficient.
fn univariate(rng: &mut impl Rng, low: u32, deg: u32) -> Polynomial {
    let terms = (low..=deg).map(|k| {
        let c = if k == deg { nonzero(rng) } else { coeff(rng) };
        (vec![k], q().from_i64(c))
    });
    Polynomial::from_terms(1, &q(), terms.collect::<Vec<_>>()).unwrap()
}

fn degree_in(rng: &mut impl Rng, low: u32) -> u32 {
    rng.gen_range(low..=MAX_GEN_DEGREE)
}

/// [`univariate`] with its degree drawn from `min..=max`.
fn univariate_upto(rng: &mut impl Rng, low: u32, min: u32, max: u32) -> Polynomial {
    let deg = rng.gen_range(min..=max);
    univariate(rng, low, deg)
}

/// Nonzero polynomial in `x_1..x_{vars}` of total degree exactly `deg`,
/// every term of degree at least 2, written over `n` variables.
fn lower_triangular_term(rng: &mut impl Rng, n: usize, vars: usize, deg: u32) -> Polynomial {
    let mut p = Polynomial::zero(n, &q());
    while p.total_degree().finite() != Some(deg) {
        let extra = rng.gen_range(0..=2);
        p = Polynomial::zero(n, &q());
        for t in 0..=extra {
            let d = if t == 0 { deg } else { rng.gen_range(2..=deg) };
            let mut exps = vec![0u32; n];
            for _ in 0..d {
                exps[rng.gen_range(0..vars)] += 1;
            }
            let m = Polynomial::monomial(&q(), Exponents::new(exps).unwrap(), q().from_i64(nonzero(rng)));
            p = p.add(&m).unwrap();
        }
    }
    p
}

fn spec(kind: FamilyKind, coefficients: &[i64], generators: Vec<Polynomial>) -> FamilySpec {
    FamilySpec { kind, ring: q(), coefficients: scalars(coefficients), generators, case: None }
}

fn draw_dim2(rng: &mut impl Rng) -> FamilySpec {
    let (a, b) = loop {
        let (a, b) = (coeff(rng), coeff(rng));
        if (a, b) != (0, 0) {
            break (a, b);
        }
    };
    // sigma' must start at degree 2; sigma may carry a constant.
    let mut sigma = univariate_upto(rng, 3, 3, MAX_GEN_DEGREE);
    if rng.gen_bool(0.5) {
        sigma = sigma.add(&Polynomial::constant(1, &q(), q().from_i64(coeff(rng)))).unwrap();
    }
    spec(FamilyKind::Dim2Homogeneous, &[a, b], vec![sigma])
}

fn draw_extruded(rng: &mut impl Rng) -> FamilySpec {
    let (a, b) = loop {
        let (a, b) = (coeff(rng), coeff(rng));
        if (a, b) != (0, 0) {
            break (a, b);
        }
    };
    // zeta(z)*sigma'(xi) needs order at least 2: either sigma' or zeta
    // supplies the vanishing.
    let (sigma, zeta) = if rng.gen_bool(0.5) {
        let ds = degree_in(rng, 3);
        (univariate(rng, 3, ds), univariate_upto(rng, 0, 0, MAX_GEN_DEGREE - (ds - 1)))
    } else {
        let ds = rng.gen_range(2..=4);
        (univariate(rng, 2, ds), univariate_upto(rng, 1, 1, MAX_GEN_DEGREE - (ds - 1)))
    };
    spec(FamilyKind::Dim2Extruded3D, &[a, b], vec![sigma, zeta])
}

fn capped_pair(rng: &mut impl Rng) -> (u32, u32) {
    loop {
        let (d1, d2) = (degree_in(rng, 2), degree_in(rng, 2));
        if d1 * d2 <= PRODUCT_DEGREE_CAP {
            return (d1, d2);
        }
    }
}

fn draw_dim3_partial(rng: &mut impl Rng) -> FamilySpec {
    loop {
        let (a, b, c, r) = (coeff(rng), coeff(rng), nonzero(rng), nonzero(rng));
        let (mut p, mut q_) = (coeff(rng), coeff(rng));
        if rng.gen_bool(0.5) {
            // a*r = c*p: eta invariant.
            if (a * r) % c != 0 {
                continue;
            }
            p = a * r / c;
        } else {
            // b*r = c*q: xi invariant.
            if (b * r) % c != 0 {
                continue;
            }
            q_ = b * r / c;
        }
        if p.abs() > 9 || q_.abs() > 9 || (a * r == c * p && b * r == c * q_) {
            continue;
        }
        let (d1, d2) = capped_pair(rng);
        let gens = vec![univariate(rng, 2, d1), univariate(rng, 2, d2)];
        return spec(FamilyKind::Dim3Partial, &[a, b, c, p, q_, r], gens);
    }
}

fn draw_dim3_full(rng: &mut impl Rng) -> FamilySpec {
    let (a, b, c) = (coeff(rng), coeff(rng), nonzero(rng));
    let gens = vec![univariate_upto(rng, 2, 2, MAX_GEN_DEGREE), univariate_upto(rng, 2, 2, MAX_GEN_DEGREE)];
    spec(FamilyKind::Dim3Full, &[a, b, c], gens)
}

/// Entry `value * num / den` if it is an integer in range.
fn scaled(value: i64, num: i64, den: i64) -> Option<i64> {
    let v = value * num;
    (v % den == 0 && (v / den).abs() <= 9).then_some(v / den)
}

fn other_than(rng: &mut impl Rng, forbidden: i64) -> i64 {
    loop {
        let v = coeff(rng);
        if v != forbidden {
            return v;
        }
    }
}

fn dim4_inverse_degree(case: Dim4Case, d: [u32; 3]) -> u32 {
    match case {
        Dim4Case::OneInvariant => d[0] * d[1] * d[2],
        Dim4Case::TwoInvariantA => d[0].max(d[1]) * d[2],
        Dim4Case::TwoInvariantB => d[0].max(d[1] * d[2]),
        Dim4Case::ThreeInvariant => d[0].max(d[1]).max(d[2]),
    }
}

fn draw_dim4(rng: &mut impl Rng, case: Dim4Case) -> FamilySpec {
    let pattern = case.pattern();
    loop {
        let (s1, s2, s3) = (nonzero(rng), nonzero(rng), nonzero(rng));
        let (a11, a12, a13) = (coeff(rng), coeff(rng), coeff(rng));
        // a22 = a12*s2/s1, a23 = a13*s2/s1, a33 = a13*s3/s1 always.
        let (Some(a22), Some(a23), Some(a33)) = (scaled(a12, s2, s1), scaled(a13, s2, s1), scaled(a13, s3, s1)) else {
            continue;
        };
        // a21 = a11*s2/s1, a31 = a11*s3/s1, a32 = a22*s3/s2 when they hold.
        let (Some(t21), Some(t31), Some(t32)) = (scaled(a11, s2, s1), scaled(a11, s3, s1), scaled(a22, s3, s2)) else {
            continue;
        };
        let a21 = if pattern[0] { t21 } else { other_than(rng, t21) };
        let a31 = if pattern[1] { t31 } else { other_than(rng, t31) };
        let a32 = if pattern[2] { t32 } else { other_than(rng, t32) };
        let d = loop {
            let d = [degree_in(rng, 2), degree_in(rng, 2), degree_in(rng, 2)];
            if dim4_inverse_degree(case, d) <= PRODUCT_DEGREE_CAP {
                break d;
            }
        };
        let gens = d.iter().map(|&k| univariate(rng, 2, k)).collect();
        let coefficients = [a11, a12, a13, s1, a21, a22, a23, s2, a31, a32, a33, s3];
        let mut s = spec(FamilyKind::Dim4Partial, &coefficients, gens);
        s.case = Some(case);
        return s;
    }
}

fn draw_dimn(rng: &mut impl Rng) -> FamilySpec {
    let n = rng.gen_range(2..=MAX_N);
    let mut a: Vec<i64> = (0..n - 1).map(|_| coeff(rng)).collect();
    a.push(nonzero(rng));
    let gens = (0..n - 1).map(|_| univariate_upto(rng, 2, 2, MAX_GEN_DEGREE)).collect();
    spec(FamilyKind::DimNFull, &a, gens)
}

fn draw_triangular(rng: &mut impl Rng) -> FamilySpec {
    let n = rng.gen_range(2..=MAX_N);
    let lambdas: Vec<i64> = (0..n).map(|_| nonzero(rng)).collect();
    loop {
        let mut gens = vec![Polynomial::zero(n, &q())];
        let mut product = 1;
        for i in 1..n {
            if rng.gen_bool(0.25) {
                gens.push(Polynomial::zero(n, &q()));
                continue;
            }
            let d = degree_in(rng, 2);
            product *= d;
            gens.push(lower_triangular_term(rng, n, i, d));
        }
        if product <= PRODUCT_DEGREE_CAP {
            return spec(FamilyKind::TriangularParam, &lambdas, gens);
        }
    }
}

/// One random valid spec of `kind`; dim4 cycles through its cases.
pub fn draw(rng: &mut impl Rng, kind: FamilyKind) -> FamilySpec {
    match kind {
        FamilyKind::Dim2Homogeneous => draw_dim2(rng),
        FamilyKind::Dim2Extruded3D => draw_extruded(rng),
        FamilyKind::Dim3Partial => draw_dim3_partial(rng),
        FamilyKind::Dim3Full => draw_dim3_full(rng),
        FamilyKind::Dim4Partial => {
            let case = *Dim4Case::ALL.choose(rng).unwrap();
            draw_dim4(rng, case)
        }
        FamilyKind::DimNFull => draw_dimn(rng),
        FamilyKind::TriangularParam => draw_triangular(rng),
    }
}

/// `count` built instances of `kind`. Draws whose exact degree cannot be
/// predicted (leading terms cancelling) are replaced by fresh draws.
pub fn corpus(kind: FamilyKind, count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let spec = draw(&mut rng, kind);
        let pair = spec.build().unwrap_or_else(|e| panic!("generated spec rejected: {e}\n{spec:?}"));
        if !pair.predicted_deg_inverse.is_exact() && kind != FamilyKind::TriangularParam {
            continue;
        }
        let gen_degrees = spec.generators.iter().map(|g| g.total_degree().finite()).collect();
        out.push(Instance { spec, pair, gen_degrees });
    }
    out
}
