//! Shared proptest strategies.

use mixpart::expr::{BinaryOp, CmpOp, Cond, Expr, UnaryOp, Var};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::Var(Var::X)),
        Just(Expr::Var(Var::Y)),
        any::<f64>()
            .prop_filter("finite", |c| c.is_finite())
            .prop_map(Expr::Const),
        (-1000i32..1000).prop_map(|k| Expr::Const(f64::from(k) / 8.0)),
    ]
}

fn unary_op() -> impl Strategy<Value = UnaryOp> {
    prop::sample::select(vec![
        UnaryOp::Neg,
        UnaryOp::Abs,
        UnaryOp::Sin,
        UnaryOp::Cos,
        UnaryOp::Exp,
        UnaryOp::Log,
        UnaryOp::Sqrt,
        UnaryOp::Sign,
    ])
}

fn binary_op() -> impl Strategy<Value = BinaryOp> {
    prop::sample::select(vec![
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
        BinaryOp::Div,
        BinaryOp::Pow,
        BinaryOp::Min,
        BinaryOp::Max,
    ])
}

pub fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(6, 48, 3, |inner| {
        let cond = {
            let cmp = (
                prop::sample::select(vec![CmpOp::Lt, CmpOp::Le, CmpOp::Eq]),
                inner.clone(),
                inner.clone(),
            )
                .prop_map(|(op, l, r)| Cond::cmp(op, l, r));
            cmp.prop_recursive(2, 6, 2, |c| {
                prop_oneof![
                    (c.clone(), c.clone()).prop_map(|(l, r)| Cond::And(Box::new(l), Box::new(r))),
                    (c.clone(), c).prop_map(|(l, r)| Cond::Or(Box::new(l), Box::new(r))),
                ]
            })
        };
        prop_oneof![
            (unary_op(), inner.clone()).prop_map(|(op, e)| Expr::unary(op, e)),
            (binary_op(), inner.clone(), inner.clone())
                .prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            (cond, inner.clone(), inner).prop_map(|(c, t, e)| Expr::cond(c, t, e)),
        ]
    })
}
