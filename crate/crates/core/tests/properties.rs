mod support;

use fisher_lie::conservation::{conservation_ranges, euler_apply, multiplier_residual};
use fisher_lie::dsl::casefile::parse_case;
use fisher_lie::dsl::parse_expr;
use fisher_lie::expr::{exp, func, ln, t, u, x, Expr, Func};
use fisher_lie::jet::{d_t, d_x, PdeSpec};
use fisher_lie::numeric::{certify_zero, CheckOptions, ParamSpace};
use proptest::prelude::*;
use support::corpus::CORPUS;
use support::strategies;

fn zero(e: &Expr) -> bool {
    let mut ps = ParamSpace::new();
    ps.insert("n".into(), vec![fisher_lie::expr::q(1, 2), fisher_lie::expr::q(3, 1)]);
    let opts = CheckOptions { points: 20, ..CheckOptions::default() };
    certify_zero(e, &conservation_ranges(), &ps, &opts).pass()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn euler_annihilates_total_x_derivatives(e in strategies::differential_function()) {
        let r = euler_apply(&d_x(&e).unwrap()).unwrap();
        prop_assert!(zero(&r), "e = {}: {}", e, r);
    }

    #[test]
    fn euler_annihilates_total_t_derivatives(e in strategies::differential_function()) {
        let r = euler_apply(&d_t(&e).unwrap()).unwrap();
        prop_assert!(zero(&r), "e = {}: {}", e, r);
    }

    #[test]
    fn total_derivatives_commute(e in strategies::differential_function()) {
        let a = d_x(&d_t(&e).unwrap()).unwrap();
        let b = d_t(&d_x(&e).unwrap()).unwrap();
        prop_assert!((a - b).is_zero(), "e = {}", e);
    }

    #[test]
    fn printing_then_parsing_is_a_fixpoint(e in strategies::expr()) {
        let n = e.norm();
        let back = parse_expr(&n.to_string()).unwrap();
        prop_assert_eq!(back.norm(), n);
    }

    #[test]
    fn random_text_never_panics(s in "\\PC{0,40}") {
        let _ = parse_expr(&s);
        let _ = parse_case(&s);
    }

    #[test]
    fn random_bytes_never_panic(b in prop::collection::vec(any::<u8>(), 0..64)) {
        let s = String::from_utf8_lossy(&b);
        let _ = parse_expr(&s);
        let _ = parse_case(&format!("[pde]\nf = {s}\n"));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn multiplier_residual_is_linear(a in -3i64..=3, b in -3i64..=3) {
        let p = PdeSpec::new(u(), u() * (1 - u()));
        let l1 = exp(-t()) * func(Func::BesselI0, x());
        let l2 = ln(x()) * t();
        let lhs = multiplier_residual(&p, &(a * l1.clone() + b * l2.clone())).unwrap();
        let rhs = a * multiplier_residual(&p, &l1).unwrap() + b * multiplier_residual(&p, &l2).unwrap();
        prop_assert!((lhs - rhs).simplify().is_zero());
    }
}

#[test]
fn corpus_round_trips() {
    assert!(CORPUS.len() >= 30);
    for src in CORPUS {
        let e = parse_expr(src).unwrap_or_else(|err| panic!("{src}: {err}"));
        let printed = e.norm().to_string();
        let again = parse_expr(&printed).unwrap_or_else(|err| panic!("{printed}: {err}"));
        assert_eq!(again.norm(), e.norm(), "{src} printed as {printed}");
        assert_eq!(again.norm().to_string(), printed, "{src}");
    }
}

#[test]
fn decimal_literals_are_exact() {
    assert_eq!(parse_expr("0.5").unwrap().norm(), Expr::rat(1, 2));
    assert_eq!(parse_expr("2.75").unwrap().norm(), Expr::rat(11, 4));
}
