//! Identities `f(x) = rhs[thefunc := f]` and their `s(f(t(x)))` form.

use std::fmt;

use serde::Serialize;

use crate::expr::{Expr, Op};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Candidate,
    Duplicate,
    Composite,
    Trivial,
    Definitional,
    Core,
}

/// `rhs = s[y := thefunc(t)]` where `s` mentions the hole `y` once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub s: Expr,
    pub t: Expr,
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s(y) = {}, t(x) = {}", self.s, self.t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub rhs: Expr,
    pub thefunc_count: usize,
    pub decomposition: Option<Decomposition>,
    pub classification: Classification,
    /// Size of `rhs` with `thefunc` counted as 1.
    pub cost: u64,
}

impl Identity {
    pub fn new(rhs: Expr) -> Self {
        let thefunc_count = rhs.thefunc_count();
        let decomposition = decompose(&rhs);
        let cost = rhs.size() as u64;
        let classification = if is_trivial(&rhs) { Classification::Trivial } else { Classification::Candidate };
        Identity { rhs, thefunc_count, decomposition, classification, cost }
    }

    pub fn trivial() -> Self {
        Self::new(Expr::thefunc(Expr::X))
    }

    pub fn is_trivial(&self) -> bool {
        is_trivial(&self.rhs)
    }

    /// The right-hand side with `thefunc` replaced by the body of `f`.
    pub fn instantiate(&self, f: &Expr) -> Expr {
        self.rhs.inline_thefunc(f)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(thefunc x) = {}", self.rhs)
    }
}

fn is_trivial(rhs: &Expr) -> bool {
    matches!(rhs, Expr::App(Op::Thefunc, args) if args[0] == Expr::X)
}

/// Splits an expression with exactly one `thefunc` call into the
/// reconstruction `s` (with the call replaced by the hole) and the
/// reduction `t` (the call's argument).
pub fn decompose(rhs: &Expr) -> Option<Decomposition> {
    if rhs.thefunc_count() != 1 {
        return None;
    }
    fn walk(e: &Expr, t: &mut Option<Expr>) -> Expr {
        match e {
            Expr::App(Op::Thefunc, args) => {
                *t = Some(args[0].clone());
                Expr::Hole
            }
            Expr::App(op, args) => Expr::App(*op, args.iter().map(|a| walk(a, t)).collect()),
            leaf => leaf.clone(),
        }
    }
    let mut t = None;
    let s = walk(rhs, &mut t);
    Some(Decomposition { s, t: t.expect("one thefunc call") })
}

/// `outer ∘ inner`: each `thefunc(u)` in `outer` becomes `inner[x := u]`.
pub fn compose(outer: &Expr, inner: &Expr) -> Expr {
    outer.inline_thefunc(inner)
}
