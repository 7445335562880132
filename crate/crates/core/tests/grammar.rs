use deformq_core::polyring::{parse_expr, parse_fun, parse_op, parse_vec, Value};
use deformq_core::random;
use deformq_core::{Ambient, Error, PolyDiffOp, PolyVec, Series};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn functions_round_trip(seed in any::<u64>(), n in 1usize..=3, order in 0usize..=3) {
        let mut r = random::rng(seed);
        let amb = Ambient::new(n, order);
        let f = random::poly_series(&mut r, n, order, 0, 3);
        prop_assert_eq!(parse_fun(&f.to_string(), &amb).unwrap(), f);
    }

    #[test]
    fn polyvectors_round_trip(seed in any::<u64>(), n in 1usize..=3, degree in 0i32..=2) {
        let mut r = random::rng(seed);
        let amb = Ambient::new(n, 2);
        let v = random::series(&mut r, &PolyVec::zero(n, degree), 2, 0, |r| random::polyvec(r, n, degree, 2, 3));
        prop_assert_eq!(parse_vec(&v.to_string(), &amb, degree).unwrap(), v);
    }

    #[test]
    fn operators_round_trip(seed in any::<u64>(), n in 1usize..=2, degree in 0i32..=2, normalized in any::<bool>()) {
        let mut r = random::rng(seed);
        let amb = Ambient::new(n, 2);
        let op = random::series(&mut r, &PolyDiffOp::zero(n, degree), 2, 0, |r| random::diffop(r, n, degree, 2, 2, 3, normalized));
        prop_assert_eq!(parse_op(&op.to_string(), &amb, degree).unwrap(), op);
    }

    #[test]
    fn garbage_is_located(junk in "[a-z#$]{1,3}") {
        let amb = Ambient::new(2, 1);
        let text = format!("x1 + {junk}");
        if let Err(e) = parse_expr(&text, &amb) {
            prop_assert!(e.is_located(), "{e}");
        }
    }
}

#[test]
fn kinds_are_inferred() {
    let amb = Ambient::new(2, 2);
    assert!(matches!(parse_expr("x1^2 + h", &amb).unwrap(), Value::Fun(_)));
    assert!(matches!(parse_expr("h*x1*dx1^dx2", &amb).unwrap(), Value::Vec(_)));
    assert!(matches!(parse_expr("h^2*D[1|2]", &amb).unwrap(), Value::Op(_)));
}

#[test]
fn out_of_range_variable() {
    let amb = Ambient::new(2, 1);
    let err = parse_expr("x3", &amb).unwrap_err();
    assert!(matches!(err, Error::UnknownVariable { .. }), "{err}");
    let err = parse_expr("dx5", &amb).unwrap_err();
    assert!(matches!(err, Error::IndexOutOfRange { .. }), "{err}");
}

#[test]
fn series_are_truncated() {
    let amb = Ambient::new(1, 1);
    let f = parse_fun("1 + h + h^2", &amb).unwrap();
    assert_eq!(f.order(), 1);
    assert_eq!(f.to_string(), "1 + h*(1)");
    let _: Series<_> = f;
}
