use super::{Expr, Op, RationalPi};

/// Exact value of `op` applied to constant arguments, when representable.
///
/// Only `+ - * /` and negation fold; division by zero, overflow and results
/// outside `q * PI^{0,1}` give `None`.
pub fn fold_op(op: Op, args: &[RationalPi]) -> Option<RationalPi> {
    match (op, args) {
        (Op::Add, [a, b]) => a.checked_add(b),
        (Op::Sub, [a, b]) => a.checked_sub(b),
        (Op::Mul, [a, b]) => a.checked_mul(b),
        (Op::Div, [a, b]) => a.checked_div(b),
        (Op::Neg, [a]) => a.checked_neg(),
        _ => None,
    }
}

/// Replaces every foldable constant subtree by its value. Subtrees that
/// cannot be folded (for example `(/ 1 0)`) are kept as they are.
pub fn fold_constants(e: &Expr) -> Expr {
    match e {
        Expr::App(op, args) => {
            let args: Vec<Expr> = args.iter().map(fold_constants).collect();
            let consts: Option<Vec<RationalPi>> = args
                .iter()
                .map(|a| match a {
                    Expr::Const(c) => Some(*c),
                    _ => None,
                })
                .collect();
            if let Some(v) = consts.and_then(|cs| fold_op(*op, &cs)) {
                return Expr::Const(v);
            }
            Expr::App(*op, args)
        }
        leaf => leaf.clone(),
    }
}
