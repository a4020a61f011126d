//! Expression grammar over a single real variable `x`.
//!
//! Expressions are immutable trees. Constants are exact ([`RationalPi`]),
//! and the uninterpreted operator `thefunc` stands for the function whose
//! identities are being synthesized.

mod constant;
pub(crate) mod fold;
pub(crate) mod parse;
mod sexp;

use std::fmt;

pub use constant::RationalPi;
pub use fold::fold_constants;
pub use parse::{parse, parse_benchmarks, Benchmark, ParseError};
pub use sexp::{read_sexp, Sexp};

/// Interpreted and uninterpreted operators of the grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Fabs,
    Sqrt,
    Cbrt,
    Pow,
    Floor,
    Sin,
    Cos,
    Tan,
    Asin,
    Acos,
    Atan,
    Sinh,
    Cosh,
    Tanh,
    Acosh,
    Exp,
    Log,
    Expm1,
    Log1p,
    Atan2,
    Thefunc,
}

impl Op {
    pub const ALL: [Op; 26] = [
        Op::Add,
        Op::Sub,
        Op::Mul,
        Op::Div,
        Op::Neg,
        Op::Fabs,
        Op::Sqrt,
        Op::Cbrt,
        Op::Pow,
        Op::Floor,
        Op::Sin,
        Op::Cos,
        Op::Tan,
        Op::Asin,
        Op::Acos,
        Op::Atan,
        Op::Sinh,
        Op::Cosh,
        Op::Tanh,
        Op::Acosh,
        Op::Exp,
        Op::Log,
        Op::Expm1,
        Op::Log1p,
        Op::Atan2,
        Op::Thefunc,
    ];

    pub fn arity(self) -> usize {
        match self {
            Op::Add | Op::Sub | Op::Mul | Op::Div | Op::Pow | Op::Atan2 => 2,
            _ => 1,
        }
    }

    /// Surface name. `Neg` and `Sub` share `-` and are told apart by arity.
    pub fn name(self) -> &'static str {
        match self {
            Op::Add => "+",
            Op::Sub | Op::Neg => "-",
            Op::Mul => "*",
            Op::Div => "/",
            Op::Fabs => "fabs",
            Op::Sqrt => "sqrt",
            Op::Cbrt => "cbrt",
            Op::Pow => "pow",
            Op::Floor => "floor",
            Op::Sin => "sin",
            Op::Cos => "cos",
            Op::Tan => "tan",
            Op::Asin => "asin",
            Op::Acos => "acos",
            Op::Atan => "atan",
            Op::Sinh => "sinh",
            Op::Cosh => "cosh",
            Op::Tanh => "tanh",
            Op::Acosh => "acosh",
            Op::Exp => "exp",
            Op::Log => "log",
            Op::Expm1 => "expm1",
            Op::Log1p => "log1p",
            Op::Atan2 => "atan2",
            Op::Thefunc => "thefunc",
        }
    }

    pub fn from_name(name: &str, arity: usize) -> Option<Op> {
        if name == "-" {
            return match arity {
                1 => Some(Op::Neg),
                _ => Some(Op::Sub),
            };
        }
        Op::ALL.iter().copied().find(|op| op.name() == name && *op != Op::Neg)
    }
}

/// Head symbol of a tree node: a constant, the variable, or an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    Const(RationalPi),
    X,
    /// Placeholder `y` used only in reconstruction functions.
    Hole,
    Op(Op),
}

impl Head {
    pub fn arity(&self) -> usize {
        match self {
            Head::Op(op) => op.arity(),
            _ => 0,
        }
    }
}

/// An expression tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Const(RationalPi),
    X,
    Hole,
    App(Op, Vec<Expr>),
}

impl Expr {
    pub fn constant(c: RationalPi) -> Expr {
        Expr::Const(c)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(RationalPi::integer(n))
    }

    pub fn pi() -> Expr {
        Expr::Const(RationalPi::PI)
    }

    pub fn unary(op: Op, a: Expr) -> Expr {
        debug_assert_eq!(op.arity(), 1);
        Expr::App(op, vec![a])
    }

    pub fn binary(op: Op, a: Expr, b: Expr) -> Expr {
        debug_assert_eq!(op.arity(), 2);
        Expr::App(op, vec![a, b])
    }

    pub fn thefunc(arg: Expr) -> Expr {
        Expr::unary(Op::Thefunc, arg)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Expr) -> Expr {
        Expr::unary(Op::Neg, a)
    }

    pub fn head(&self) -> Head {
        match self {
            Expr::Const(c) => Head::Const(*c),
            Expr::X => Head::X,
            Expr::Hole => Head::Hole,
            Expr::App(op, _) => Head::Op(*op),
        }
    }

    pub fn children(&self) -> &[Expr] {
        match self {
            Expr::App(_, args) => args,
            _ => &[],
        }
    }

    /// Builds a node from a head and children of matching arity.
    pub fn from_head(head: Head, children: Vec<Expr>) -> Expr {
        match head {
            Head::Const(c) => Expr::Const(c),
            Head::X => Expr::X,
            Head::Hole => Expr::Hole,
            Head::Op(op) => {
                debug_assert_eq!(op.arity(), children.len());
                Expr::App(op, children)
            }
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Expr::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(Expr::depth).max().unwrap_or(0)
    }

    pub fn count_op(&self, op: Op) -> usize {
        let here = usize::from(matches!(self, Expr::App(o, _) if *o == op));
        here + self.children().iter().map(|c| c.count_op(op)).sum::<usize>()
    }

    pub fn thefunc_count(&self) -> usize {
        self.count_op(Op::Thefunc)
    }

    pub fn contains_x(&self) -> bool {
        match self {
            Expr::X => true,
            _ => self.children().iter().any(Expr::contains_x),
        }
    }

    /// Replaces every `x` by `value`.
    pub fn subst_x(&self, value: &Expr) -> Expr {
        self.map_leaves(&mut |e| match e {
            Expr::X => Some(value.clone()),
            _ => None,
        })
    }

    /// Replaces every `thefunc(u)` with `body[x := u]`, innermost first.
    pub fn inline_thefunc(&self, body: &Expr) -> Expr {
        match self {
            Expr::App(Op::Thefunc, args) => body.subst_x(&args[0].inline_thefunc(body)),
            Expr::App(op, args) => Expr::App(*op, args.iter().map(|a| a.inline_thefunc(body)).collect()),
            leaf => leaf.clone(),
        }
    }

    fn map_leaves(&self, f: &mut impl FnMut(&Expr) -> Option<Expr>) -> Expr {
        if let Some(e) = f(self) {
            return e;
        }
        match self {
            Expr::App(op, args) => Expr::App(*op, args.iter().map(|a| a.map_leaves(f)).collect()),
            leaf => leaf.clone(),
        }
    }

    /// Merges `(* q PI)` with a rational `q` into a single constant. This is
    /// the form [`parse`] produces, so `parse(print(e)) == e.normalize()`.
    pub fn normalize(&self) -> Expr {
        match self {
            Expr::App(op, args) => {
                let args: Vec<Expr> = args.iter().map(Expr::normalize).collect();
                if let (Op::Mul, [Expr::Const(q), Expr::Const(p)]) = (op, args.as_slice()) {
                    if !q.has_pi() && *p == RationalPi::PI {
                        return Expr::Const(RationalPi::pi_multiple(q.coeff()));
                    }
                }
                Expr::App(*op, args)
            }
            leaf => leaf.clone(),
        }
    }

    /// Prints with the hole written as `name`.
    pub fn display_with_hole<'a>(&'a self, name: &'a str) -> impl fmt::Display + 'a {
        Printer { expr: self, hole: name }
    }
}

struct Printer<'a> {
    expr: &'a Expr,
    hole: &'a str,
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self.expr, self.hole, f)
    }
}

fn write_expr(e: &Expr, hole: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Const(c) => write!(f, "{c}"),
        Expr::X => write!(f, "x"),
        Expr::Hole => write!(f, "{hole}"),
        Expr::App(op, args) => {
            write!(f, "({}", op.name())?;
            for a in args {
                write!(f, " ")?;
                write_expr(a, hole, f)?;
            }
            write!(f, ")")
        }
    }
}

/// Canonical s-expression form.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, "y", f)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
