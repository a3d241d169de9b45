use mubkit_core::arith::{divisors, totient};
use mubkit_core::{cyclo_poly, Cyclotomic, GField, IntPolynomial, ZeroTest};
use proptest::prelude::*;

#[test]
fn phi_degree_is_totient() {
    for m in 1..=60u32 {
        let phi = cyclo_poly(m);
        assert_eq!(phi.degree(), Some(totient(u64::from(m)) as usize), "m = {m}");
        assert!(phi.is_monic());
    }
}

#[test]
fn phi_product_is_x_pow_m_minus_one() {
    for m in 1..=60u32 {
        let prod = divisors(u64::from(m))
            .into_iter()
            .fold(IntPolynomial::new(vec![1]), |acc, d| {
                acc.mul(&cyclo_poly(d as u32))
            });
        assert_eq!(prod, IntPolynomial::x_pow_minus_one(m as usize), "m = {m}");
    }
}

#[test]
fn roots_times_conjugates() {
    for m in 1..=24u32 {
        for e in 0..m {
            let r = Cyclotomic::root(m, i64::from(e));
            assert_eq!(&r * &r.conj(), Cyclotomic::one());
        }
        // the sum of all m-th roots vanishes for m > 1
        let mut s = Cyclotomic::zero(m);
        (0..m).for_each(|e| s.add_root(e, 1));
        assert_eq!(s.is_zero(), m > 1);
    }
}

fn cyclotomic() -> impl Strategy<Value = Cyclotomic> {
    (1u32..=24)
        .prop_flat_map(|m| proptest::collection::vec(-5i64..=5, m as usize).prop_map(Cyclotomic::from_coeffs))
}

fn same_order_pair() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
    (1u32..=24).prop_flat_map(|m| {
        let v = || proptest::collection::vec(-5i64..=5, m as usize).prop_map(Cyclotomic::from_coeffs);
        (v(), v(), v())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn zero_test_matches_numerics(a in cyclotomic()) {
        prop_assert_eq!(a.is_zero(), a.approx().norm() < 1e-9);
        prop_assert_eq!(ZeroTest::new(a.order()).is_zero(&a), a.is_zero());
    }

    #[test]
    fn ring_laws((a, b, c) in same_order_pair()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn conj_is_a_homomorphism((a, b, _) in same_order_pair()) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert!(((&a * &a.conj()).approx().im).abs() < 1e-9);
    }

    #[test]
    fn lifting_preserves_value(a in cyclotomic(), f in 1u32..=4) {
        let lifted = a.lift(a.order() * f);
        prop_assert_eq!(&lifted, &a);
        prop_assert!((lifted.approx() - a.approx()).norm() < 1e-9);
    }
}

const SMALL_FIELDS: [(u64, u32); 9] = [
    (2, 1),
    (3, 1),
    (2, 2),
    (5, 1),
    (7, 1),
    (2, 3),
    (3, 2),
    (11, 1),
    (2, 4),
];

#[test]
fn field_axioms_exhaustive() {
    for (p, e) in SMALL_FIELDS {
        let f = GField::new(p, e).unwrap();
        let els: Vec<_> = f.elements().collect();
        assert_eq!(els.len(), f.order());
        for (i, a) in els.iter().enumerate() {
            assert_eq!(f.rank(a), i);
            assert_eq!(f.add(a, &f.neg(a)), f.zero());
            if !f.is_zero(a) {
                assert_eq!(f.mul(a, &f.inv(a).unwrap()), f.one(), "GF({p}^{e})");
            }
            // Frobenius fixes every element: a^q = a
            assert_eq!(f.pow(a, f.order() as u64), *a);
            for b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in &els {
                    assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                    assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
                }
            }
        }
        assert!(f.inv(&f.zero()).is_err());
    }
}

#[test]
fn multiplicative_group_is_cyclic() {
    for (p, e) in SMALL_FIELDS {
        let f = GField::new(p, e).unwrap();
        let q = f.order() as u64;
        let has_generator = f
            .elements()
            .filter(|a| !f.is_zero(a))
            .any(|g| (1..q - 1).all(|k| f.pow(&g, k) != f.one()));
        assert!(has_generator, "GF({q})");
    }
}
