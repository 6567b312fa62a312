use proptest::prelude::*;
use qhiggs_core::scalar::{GaussianRational, LaurentPoly, Rational, Scalar};

fn gauss() -> impl Strategy<Value = GaussianRational> {
    (-5i64..=5, 1i64..=4, prop_oneof![3 => Just(0i64), 1 => -3i64..=3]).prop_map(|(n, d, im)| {
        GaussianRational::new(Rational::new(n, d).unwrap(), Rational::from_int(im))
    })
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i64..=4, gauss()), 0..4).prop_map(LaurentPoly::from_terms)
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (poly(), poly()).prop_map(|(n, d)| {
        let d = if d.is_zero() { LaurentPoly::one() } else { d };
        Scalar::from_parts(n, d).unwrap()
    })
}

fn point() -> impl Strategy<Value = GaussianRational> {
    (2i64..=97, 2i64..=97)
        .prop_filter("|t| != 1", |(a, b)| a != b)
        .prop_map(|(a, b)| GaussianRational::ratio(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn addition_is_associative(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn multiplication_distributes(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn inverse_is_two_sided(a in scalar()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!(a.mul(&inv).is_one());
        prop_assert!(inv.mul(&a).is_one());
    }

    #[test]
    fn canonical_form_is_idempotent(a in scalar()) {
        let again = Scalar::from_parts(a.numerator().clone(), a.denominator().clone()).unwrap();
        prop_assert_eq!(&again, &a);
        prop_assert_eq!(a.denominator().low(), Some(0));
        prop_assert!(a.denominator().leading().unwrap().is_one());
    }

    #[test]
    fn equality_agrees_with_cross_multiplication(a in scalar(), b in scalar()) {
        let cross = a.numerator().mul(b.denominator()) == b.numerator().mul(a.denominator());
        prop_assert_eq!(a == b, cross);
    }

    #[test]
    fn evaluation_is_multiplicative(a in scalar(), b in scalar(), t0 in point()) {
        if let (Ok(x), Ok(y)) = (a.eval_at(&t0), b.eval_at(&t0)) {
            prop_assert_eq!(a.mul(&b).eval_at(&t0).unwrap(), &x * &y);
            prop_assert_eq!(a.add(&b).eval_at(&t0).unwrap(), &x + &y);
        }
    }

    #[test]
    fn real_inputs_stay_real(n in poly(), d in poly(), m in poly()) {
        let real = |p: LaurentPoly| LaurentPoly::from_terms(
            p.terms().map(|(e, c)| (e, GaussianRational::real(c.re.clone()))).collect::<Vec<_>>(),
        );
        let d = real(d);
        let d = if d.is_zero() { LaurentPoly::one() } else { d };
        let a = Scalar::from_parts(real(n), d).unwrap();
        let b = Scalar::from_poly(real(m));
        prop_assert!(a.mul(&b).is_real());
        prop_assert!(a.add(&b).is_real());
        if !b.is_zero() {
            prop_assert!(a.div(&b).unwrap().is_real());
        }
    }
}
