//! Shared proptest generators for expressions.

use fisher_lie::expr::*;
use proptest::prelude::*;

pub fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-3i64..=3).prop_map(Expr::int),
        (-3i64..=3, 1i64..=3).prop_map(|(n, d)| Expr::rat(n, d)),
        Just(t()),
        Just(x()),
        Just(u()),
        Just(jet(0, 1)),
        Just(jet(0, 2)),
        Just(param("n")),
    ]
}

pub fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::sum),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Expr::product),
            (inner.clone(), -2i64..=3).prop_map(|(b, k)| b.powi(k)),
            (inner.clone(), prop_oneof![Just(Expr::rat(1, 2)), Just(Expr::rat(-1, 3)), Just(param("n"))])
                .prop_map(|(b, k)| b.pow(k)),
            inner.clone().prop_map(exp),
            inner.clone().prop_map(ln),
            inner.clone().prop_map(|a| func(Func::BesselI0, a)),
            inner.clone().prop_map(|a| apply1("f", 1, a)),
        ]
    })
}

/// Leaves of jet order at most one, so total derivatives stay in range.
pub fn low_leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-3i64..=3).prop_map(Expr::int),
        Just(t()),
        Just(x()),
        Just(u()),
        Just(jet(0, 1)),
        Just(jet(1, 0)),
        Just(param("n")),
    ]
}

/// Differential functions of `t, x, u, u_t, u_x` without singular pieces.
pub fn differential_function() -> impl Strategy<Value = Expr> {
    low_leaf().prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::sum),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Expr::product),
            (inner.clone(), 1i64..=3).prop_map(|(b, k)| b.powi(k)),
            inner.clone().prop_map(exp),
            inner.clone().prop_map(|a| func(Func::BesselI0, a)),
        ]
    })
}
