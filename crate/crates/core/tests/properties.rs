//! Algebraic laws of polynomial arithmetic on random inputs.

use automorph_core::matrix::PolyMatrix;
use automorph_core::parse::parse_polynomial;
use automorph_core::{PolyMap, Polynomial, RingSpec, Scalar};
use proptest::prelude::*;

const NVARS: usize = 3;

fn rings() -> impl Strategy<Value = RingSpec> {
    prop_oneof![
        Just(RingSpec::Rationals),
        Just(RingSpec::integers_mod(7).unwrap()),
        Just(RingSpec::integers_mod(12).unwrap()),
    ]
}

fn scalar(ring: &RingSpec, num: i64, den: i64) -> Scalar {
    match ring {
        RingSpec::Rationals => ring.from_ratio(num.into(), den.into()).unwrap(),
        RingSpec::IntegersMod(_) => ring.from_i64(num),
    }
}

fn poly_in(ring: RingSpec, nvars: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec(0..=max_deg, nvars), -9i64..=9, 1i64..=4);
    prop::collection::vec(term, 0..5).prop_map(move |terms| {
        let terms: Vec<(Vec<u32>, Scalar)> = terms.into_iter().map(|(e, n, d)| (e, scalar(&ring, n, d))).collect();
        Polynomial::from_terms(nvars, &ring, terms).unwrap()
    })
}

fn three(ring: RingSpec) -> impl Strategy<Value = (Polynomial, Polynomial, Polynomial)> {
    (poly_in(ring.clone(), NVARS, 3), poly_in(ring.clone(), NVARS, 3), poly_in(ring, NVARS, 3))
}

fn ring_and_three() -> impl Strategy<Value = (Polynomial, Polynomial, Polynomial)> {
    rings().prop_flat_map(three)
}

/// A map `x_i + (terms of degree 2..=3)`.
fn near_identity(ring: RingSpec, n: usize) -> impl Strategy<Value = Vec<Polynomial>> {
    prop::collection::vec(poly_in(ring.clone(), n, 2), n).prop_map(move |hs| {
        hs.into_iter()
            .enumerate()
            .map(|(i, h)| Polynomial::var(n, &ring, i).unwrap().add(&h.filter_degree(|d| d >= 2)).unwrap())
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((a, b, c) in ring_and_three()) {
        let ring = a.ring().clone();
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.mul(&Polynomial::one(NVARS, &ring)).unwrap(), a.clone());
        prop_assert!(a.mul(&Polynomial::zero(NVARS, &ring)).unwrap().is_zero());
    }

    #[test]
    fn degree_of_product_over_q((a, b, _) in three(RingSpec::Rationals)) {
        let p = a.mul(&b).unwrap();
        if a.is_zero() || b.is_zero() {
            prop_assert!(p.is_zero());
        } else {
            let sum = a.total_degree().or_zero() + b.total_degree().or_zero();
            prop_assert_eq!(p.total_degree().or_zero(), sum);
        }
    }

    #[test]
    fn truncated_product_is_a_truncation((a, b, _) in ring_and_three(), k in 0u32..8) {
        prop_assert_eq!(a.mul_truncated(&b, Some(k)).unwrap(), a.mul(&b).unwrap().truncated(k));
    }

    #[test]
    fn partials_commute((a, _, _) in ring_and_three(), i in 0..NVARS, j in 0..NVARS) {
        prop_assert_eq!(a.partial(i).unwrap().partial(j).unwrap(), a.partial(j).unwrap().partial(i).unwrap());
    }

    #[test]
    fn leibniz_rule((a, b, _) in ring_and_three(), i in 0..NVARS) {
        let lhs = a.mul(&b).unwrap().partial(i).unwrap();
        let rhs = a.partial(i).unwrap().mul(&b).unwrap().add(&a.mul(&b.partial(i).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_with_identity((a, _, _) in ring_and_three()) {
        let ring = a.ring().clone();
        let id: Vec<Polynomial> = (0..NVARS).map(|i| Polynomial::var(NVARS, &ring, i).unwrap()).collect();
        prop_assert_eq!(a.compose(&id).unwrap(), a.clone());
        let map = PolyMap::new(vec![a.clone(), a.clone(), a.clone()]).unwrap();
        prop_assert_eq!(map.compose(&PolyMap::identity(NVARS, &ring)).unwrap(), map.clone());
        prop_assert_eq!(PolyMap::identity(NVARS, &ring).compose(&map).unwrap(), map);
    }

    #[test]
    fn compose_is_a_homomorphism(
        ((a, b, _), args) in rings().prop_flat_map(|r| (three(r.clone()), prop::collection::vec(poly_in(r, 2, 2), NVARS))),
    ) {
        let sum = a.add(&b).unwrap().compose(&args).unwrap();
        prop_assert_eq!(sum, a.compose(&args).unwrap().add(&b.compose(&args).unwrap()).unwrap());
        let prod = a.mul(&b).unwrap().compose(&args).unwrap();
        prop_assert_eq!(prod, a.compose(&args).unwrap().mul(&b.compose(&args).unwrap()).unwrap());
    }

    #[test]
    fn chain_rule(
        (p, _, _) in three(RingSpec::Rationals),
        f in near_identity(RingSpec::Rationals, NVARS),
        i in 0..NVARS,
    ) {
        // d/dx_i p(F(x)) = sum_j (d_j p)(F(x)) * d/dx_i F_j(x)
        let lhs = p.compose(&f).unwrap().partial(i).unwrap();
        let mut rhs = Polynomial::zero(NVARS, &RingSpec::Rationals);
        for (j, fj) in f.iter().enumerate() {
            let term = p.partial(j).unwrap().compose(&f).unwrap().mul(&fj.partial(i).unwrap()).unwrap();
            rhs = rhs.add(&term).unwrap();
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobian_is_multiplicative(
        f in near_identity(RingSpec::Rationals, 2),
        g in near_identity(RingSpec::Rationals, 2),
    ) {
        // det D(F o G) = (det DF o G) * det DG
        let (f, g) = (PolyMap::new(f).unwrap(), PolyMap::new(g).unwrap());
        let lhs = f.compose(&g).unwrap().jacobian_matrix().determinant().unwrap();
        let jf = f.jacobian_matrix().determinant().unwrap().compose(g.components()).unwrap();
        let rhs = jf.mul(&g.jacobian_matrix().determinant().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn print_parse_round_trip((a, _, _) in ring_and_three()) {
        let text = a.to_string();
        let back = parse_polynomial(&text, NVARS, a.ring()).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn trace_and_determinant_are_extreme_minor_sums(
        entries in prop::collection::vec(poly_in(RingSpec::Rationals, 2, 2), 9),
    ) {
        let m = PolyMatrix::new(3, 3, entries.clone()).unwrap();
        let sums = m.principal_minor_sums().unwrap();
        let trace = entries[0].add(&entries[4]).unwrap().add(&entries[8]).unwrap();
        prop_assert_eq!(&sums[0], &trace);
        prop_assert_eq!(&sums[2], &m.determinant().unwrap());
    }
}
