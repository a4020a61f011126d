//! Detection of identities that merely restate the definition of `f`.

use crate::egraph::{EGraph, EGraphError, ENode, Id, Rewrite, RunBudget, StopReason};
use crate::expr::{Expr, Head, Op, RationalPi};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DefinitionalCheck {
    pub definitional: bool,
    /// The budget ran out before a proof was found.
    pub budget_hit: bool,
}

impl DefinitionalCheck {
    fn from_run(proved: bool, stop: StopReason) -> Self {
        DefinitionalCheck { definitional: proved, budget_hit: !proved && stop != StopReason::Saturated }
    }
}

/// Whether `rhs` equals, for every interpretation of `thefunc`, a term
/// that does not call `thefunc`.
pub fn is_definitional_direct(
    rhs: &Expr,
    rules: &[Rewrite],
    budget: &RunBudget,
) -> Result<DefinitionalCheck, EGraphError> {
    let mut g = EGraph::new();
    let root = g.add(rhs)?;
    let run = g.run(rules, budget)?;
    Ok(DefinitionalCheck::from_run(g.class(root).data.thefunc_free, run.stop_reason))
}

/// Whether asserting `thefunc(x) - rhs = 0` determines `thefunc(x)` as a
/// `thefunc`-free term. Besides the rules, equations `A - B = K`,
/// `A + B = K`, `-A = K` and `c·A = K` (nonzero constant `c`) are solved
/// for their operands in each round.
pub fn is_definitional_equation(
    rhs: &Expr,
    rules: &[Rewrite],
    budget: &RunBudget,
) -> Result<DefinitionalCheck, EGraphError> {
    let mut g = EGraph::new();
    let call = g.add(&Expr::thefunc(Expr::X))?;
    let difference = g.add(&Expr::binary(Op::Sub, Expr::thefunc(Expr::X), rhs.clone()))?;
    let zero = g.add(&Expr::Const(RationalPi::ZERO))?;
    g.union(difference, zero)?;
    g.rebuild()?;
    let mut stop = StopReason::Saturated;
    for _ in 0..budget.max_iters {
        let before = g.version();
        solve_step(&mut g, budget.max_nodes)?;
        let round = RunBudget { max_iters: 1, ..*budget };
        let run = g.run(rules, &round)?;
        stop = run.stop_reason;
        if g.class(call).data.thefunc_free {
            return Ok(DefinitionalCheck { definitional: true, budget_hit: false });
        }
        if g.version() == before {
            return Ok(DefinitionalCheck::from_run(false, StopReason::Saturated));
        }
        if stop == StopReason::NodeLimit || stop == StopReason::TimeLimit {
            break;
        }
        stop = StopReason::IterationLimit;
    }
    Ok(DefinitionalCheck::from_run(false, stop))
}

/// One round of equation solving over every class.
fn solve_step(g: &mut EGraph, max_nodes: usize) -> Result<(), EGraphError> {
    let mut equations: Vec<(Id, ENode)> = Vec::new();
    for class in g.classes() {
        for node in &class.nodes {
            if let Head::Op(Op::Add | Op::Sub | Op::Neg | Op::Mul) = node.head {
                equations.push((class.id, node.clone()));
            }
        }
    }
    for (k, node) in equations {
        if g.total_nodes() > max_nodes {
            break;
        }
        let k = g.find(k);
        let c = &node.children;
        let op = |g: &mut EGraph, op: Op, kids: &[Id]| g.add_node(ENode::new(Head::Op(op), kids.iter().copied()));
        match node.head {
            Head::Op(Op::Sub) => {
                let a = op(g, Op::Add, &[k, c[1]])?;
                g.union(c[0], a)?;
                let b = op(g, Op::Sub, &[c[0], k])?;
                g.union(c[1], b)?;
            }
            Head::Op(Op::Add) => {
                let a = op(g, Op::Sub, &[k, c[1]])?;
                g.union(c[0], a)?;
            }
            Head::Op(Op::Neg) => {
                let a = op(g, Op::Neg, &[k])?;
                g.union(c[0], a)?;
            }
            Head::Op(Op::Mul) => {
                let factor = g.class(c[0]).data.constant;
                if factor.is_some_and(|f| !f.is_zero()) {
                    let a = op(g, Op::Div, &[k, c[0]])?;
                    g.union(c[1], a)?;
                }
            }
            _ => {}
        }
    }
    g.rebuild()
}
