use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fock::{equal_on_interior, Fock, Margin, ModeConfig, Outcome};
use crate::scalar::Rational;

fn fock(modes: usize, cutoff: u32) -> Fock {
    Fock::exact(ModeConfig::new(modes, cutoff).unwrap())
}

fn err(src: &str) -> DslError {
    parse_suite(src).expect_err("expected a diagnostic")
}

#[test]
fn commutator_relation_parses() {
    let s = parse_suite("assert r1: [A1m, A1p] == E(a=(4),c=0)").unwrap();
    assert_eq!(s.relations.len(), 1);
    let r = &s.relations[0];
    assert_eq!(r.name, "r1");
    assert!(matches!(&r.lhs, Expr::Comm(a, b) if **a == Expr::name("A1m") && **b == Expr::name("A1p")));
    let Expr::Name { name, args, kwargs } = &r.rhs else {
        panic!("rhs is {:?}", r.rhs)
    };
    assert_eq!(name, "E");
    assert!(args.is_empty());
    assert_eq!(
        kwargs,
        &vec![
            ("a".to_string(), Arg::Tuple(vec![Rational::from_int(4)])),
            ("c".to_string(), Arg::Num(Rational::ZERO)),
        ]
    );
    assert_eq!(r.margin, None);
    assert_eq!(r.mode, None);
}

#[test]
fn qcomm_exponent_is_kept() {
    let s = parse_suite("let j3x = qcomm(j1, j2; 1/2)").unwrap();
    let Expr::QComm(_, _, e) = &s.bindings[0].expr else {
        panic!("{:?}", s.bindings[0].expr)
    };
    assert_eq!(*e, Quarter(2));
    let bad = err("let x = qcomm(j1, j2; 1/8)");
    assert_eq!(bad.kind, DslErrorKind::Syntax);
}

#[test]
fn unterminated_bracket_is_located() {
    let e = err("modes 1\nassert bad: [X");
    assert_eq!(e.kind, DslErrorKind::Syntax);
    assert_eq!((e.line, e.col), (2, 15));
    assert!(e.to_string().starts_with("line 2, column 15:"));
}

#[test]
fn diagnostics_carry_kinds() {
    assert_eq!(err("assert a: Foo == I").kind, DslErrorKind::UnresolvedName);
    assert_eq!(err("let x = y\nlet y = x").kind, DslErrorKind::CyclicBinding);
    assert_eq!(err("let x = x").kind, DslErrorKind::CyclicBinding);
    assert_eq!(err("let x = I\nlet x = I").kind, DslErrorKind::Duplicate);
    assert_eq!(err("assert a: I == I\nassert a: I == I").kind, DslErrorKind::Duplicate);
    assert_eq!(err("let q = I").kind, DslErrorKind::Syntax);
    assert_eq!(err("assert a: I == I $").kind, DslErrorKind::Lexical);
    assert_eq!(err("assert a: I == 1/0").kind, DslErrorKind::Syntax);
    assert_eq!(err("assert a: I^65 == I").kind, DslErrorKind::Syntax);
    assert_eq!(err("assert a: I == I @colour=red").kind, DslErrorKind::Syntax);
    let e = err("modes 2\n\nassert a: A1p ==  Nope");
    assert_eq!((e.kind, e.line, e.col), (DslErrorKind::UnresolvedName, 3, 19));
    let e = err("assert a: (A1p +\n  Nope) == I");
    assert_eq!((e.kind, e.line, e.col), (DslErrorKind::UnresolvedName, 2, 3));
}

#[test]
fn attributes_parse() {
    let s = parse_suite("assert a: I == I @margin=3 @mode=sample @samples=12\nassert b: I == I @margin=auto @mode=limit").unwrap();
    let (a, b) = (&s.relations[0], &s.relations[1]);
    assert_eq!((a.margin, a.mode, a.samples), (Some(3), Some(Mode::Sample), Some(12)));
    assert_eq!((b.margin, b.mode, b.samples), (None, Some(Mode::Limit), None));
}

#[test]
fn literals_fold() {
    let e = parse_expr("1/(1 - t^4)").unwrap();
    let expected = Scalar::one().sub(&Scalar::q()).inv().unwrap();
    assert_eq!(e, Expr::Scalar(expected.clone()));
    assert_eq!(parse_expr(&e.to_string()).unwrap(), Expr::Scalar(expected));
    assert_eq!(parse_expr("q").unwrap(), parse_expr("t^4").unwrap());
    assert_eq!(parse_expr("(1 + i)^2").unwrap(), parse_expr("2 i").unwrap());
    // a scalar factor stays attached to the operator it multiplies
    assert!(matches!(parse_expr("2 q A1p").unwrap(), Expr::Mul(a, _) if *a == Expr::Scalar(Scalar::from_int(2).mul(&Scalar::q()))));
}

#[test]
fn juxtaposition_needs_a_space_before_arguments() {
    assert!(matches!(parse_expr("L(1,2)").unwrap(), Expr::Name { args, .. } if args.len() == 2));
    assert!(matches!(parse_expr("N1 (N2)").unwrap(), Expr::Mul(..)));
}

#[test]
fn builtins_round_trip() {
    let suites = builtin_suites();
    assert_eq!(suites.len(), 15);
    let mut names: Vec<&str> = suites.iter().map(|s| s.name.as_str()).collect();
    let listed = names.clone();
    names.sort();
    assert_eq!(names, listed);
    for s in &suites {
        let text = print_suite(s);
        assert_eq!(text, print_suite(s));
        let back = parse_suite(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", s.name));
        assert_eq!(&back, s, "{}", s.name);
    }
}

#[test]
fn builtins_reference_known_names() {
    for s in builtin_suites() {
        let lets: Vec<&str> = s.bindings.iter().map(|b| b.name.as_str()).collect();
        let mut check = |n: &str, with_args: bool| {
            assert!(
                (!with_args && lets.contains(&n)) || crate::gens::is_known(n),
                "{}: {n}",
                s.name
            );
        };
        for b in &s.bindings {
            b.expr.for_each_name(&mut check);
        }
        for r in &s.relations {
            r.lhs.for_each_name(&mut check);
            r.rhs.for_each_name(&mut check);
        }
    }
}

#[test]
fn qosc_binds_and_holds() {
    let s = builtin_suite("qosc").unwrap();
    let bound = bind(&s, &fock(1, 8)).unwrap();
    assert_eq!(bound.len(), s.relations.len());
    for b in bound {
        let c = equal_on_interior(&b.lhs, &b.rhs, Margin::Auto).unwrap();
        assert_eq!(c.outcome, Outcome::Pass, "{}", b.relation.name);
    }
}

#[test]
fn qhiggs_binds_on_four_modes() {
    let s = builtin_suite("qhiggs-proposition").unwrap();
    assert_eq!(s.modes, 4);
    assert_eq!(bind(&s, &fock(4, 2)).unwrap().len(), s.relations.len());
    assert!(matches!(
        bind(&s, &fock(2, 2)),
        Err(BindError::ConfigTooSmall { needed: 4, available: 2 })
    ));
}

#[test]
fn out_of_range_mode_is_rejected() {
    let s = parse_suite("modes 4\nassert a: A5p == A5p").unwrap();
    assert!(matches!(bind(&s, &fock(4, 2)), Err(BindError::Name { .. })));
}

#[test]
fn operator_type_rules() {
    let f = fock(1, 3);
    let mut b = Binder::new(&f, None).unwrap();
    let op = |src: &str| parse_expr(src).unwrap();
    assert!(matches!(b.operator(&op("A1p / A1m")), Err(BindError::Type { .. })));
    assert!(matches!(b.operator(&op("A1p^-1")), Err(BindError::Type { .. })));
    let scaled = b.operator(&op("A1p / 2 + A1p / 2")).unwrap();
    let plain = b.operator(&op("A1p")).unwrap();
    assert_eq!(equal_on_interior(&scaled, &plain, Margin::Fixed(1)).unwrap().outcome, Outcome::Pass);
}

#[test]
fn seeded_fuzz_never_panics() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let alphabet = b"AIELNqti0123456789()[]{},;:=@+-*/^ \n#pm_.";
    for _ in 0..2000 {
        let len = rng.random_range(0..60);
        let bytes: Vec<u8> = (0..len)
            .map(|_| {
                if rng.random_bool(0.8) {
                    alphabet[rng.random_range(0..alphabet.len())]
                } else {
                    rng.random()
                }
            })
            .collect();
        let text = String::from_utf8_lossy(&bytes);
        if let Err(e) = parse_suite(&text) {
            assert!(e.line >= 1 && e.col >= 1);
        }
        let _ = parse_expr(&text);
    }
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        prop::sample::select(vec!["A1p", "A1m", "N2", "I", "H", "Mplus", "jp"]).prop_map(Expr::name),
        (1i64..4, -3i64..4).prop_map(|(k, c)| Expr::Name {
            name: "E".into(),
            args: vec![],
            kwargs: vec![
                ("a".into(), Arg::Tuple(vec![Rational::from_int(k), Rational::new(-1, 1).unwrap()])),
                ("c".into(), Arg::Num(Rational::from_int(c))),
            ],
        }),
        (1i64..3).prop_map(|i| Expr::Name {
            name: "L".into(),
            args: vec![Arg::Num(Rational::from_int(i)), Arg::Num(Rational::from_int(i + 1))],
            kwargs: vec![],
        }),
        (-5i64..6, -3i64..4, 0i64..3).prop_map(|(c, e, im)| {
            let s = Scalar::from_int(c).mul(&Scalar::t_pow(e));
            let s = s.add(&Scalar::from_int(im).mul(&Scalar::i()));
            Expr::Scalar(s.div(&Scalar::one().sub(&Scalar::q())).unwrap())
        }),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 32, 2, |inner| {
        let pair = (inner.clone(), inner.clone());
        prop_oneof![
            pair.clone().prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            pair.clone().prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            pair.clone().prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            pair.clone().prop_map(|(a, b)| Expr::Comm(Box::new(a), Box::new(b))),
            pair.clone().prop_map(|(a, b)| Expr::AntiComm(Box::new(a), Box::new(b))),
            (pair, -4i64..5).prop_map(|((a, b), e)| Expr::QComm(Box::new(a), Box::new(b), Quarter(e))),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), 0i64..4).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
            (inner, 1i64..5).prop_map(|(a, d)| Expr::Div(Box::new(a), Box::new(Expr::Scalar(Scalar::from_int(d))))),
        ]
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_stable(e in expr()) {
        let once = parse_expr(&e.to_string()).unwrap();
        let twice = parse_expr(&once.to_string()).unwrap();
        prop_assert_eq!(&once, &twice);
        // parsing only folds: trees without name-free compound subtrees survive unchanged
        if !has_foldable(&e) {
            prop_assert_eq!(&once, &e);
        }
    }

    #[test]
    fn suite_round_trip(lhs in expr(), rhs in expr(), margin in prop::option::of(0u32..4)) {
        let suite = Suite {
            name: "generated".into(),
            modes: 2,
            bindings: vec![Binding { name: "x".into(), expr: lhs.clone() }],
            relations: vec![Relation {
                name: "r".into(),
                lhs: Expr::name("x"),
                rhs,
                margin,
                mode: Some(Mode::Sample),
                samples: None,
            }],
        };
        let text = print_suite(&suite);
        let back = parse_suite(&text).unwrap();
        let again = parse_suite(&print_suite(&back)).unwrap();
        prop_assert_eq!(back, again);
    }

    #[test]
    fn arbitrary_text_gives_diagnostics(s in "[ -~\n]{0,80}") {
        if let Err(e) = parse_suite(&s) {
            prop_assert!(e.line >= 1 && e.col >= 1);
        }
    }
}

fn has_foldable(e: &Expr) -> bool {
    fn name_free(e: &Expr) -> bool {
        let mut free = true;
        e.for_each_name(&mut |_, _| free = false);
        free
    }
    match e {
        Expr::Scalar(_) | Expr::Name { .. } => false,
        // a negated or powered leaf, or a scalar-only compound, folds
        _ if name_free(e) => true,
        Expr::Neg(a) | Expr::Pow(a, _) => has_foldable(a),
        Expr::Add(a, b)
        | Expr::Sub(a, b)
        | Expr::Mul(a, b)
        | Expr::Div(a, b)
        | Expr::Comm(a, b)
        | Expr::QComm(a, b, _)
        | Expr::AntiComm(a, b) => has_foldable(a) || has_foldable(b),
    }
}
