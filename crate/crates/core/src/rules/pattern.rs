use std::collections::BTreeSet;
use std::fmt;

use crate::expr::{parse::from_sexp, parse::TreeBuild, read_sexp, Expr, Op, ParseError, RationalPi};

/// A rewrite pattern: an expression tree whose leaves may be pattern
/// variables (single lowercase letters other than `x` and `y`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    Var(char),
    Const(RationalPi),
    X,
    Node(Op, Vec<Pattern>),
}

impl Pattern {
    pub fn parse(text: &str) -> Result<Pattern, ParseError> {
        let sexp = read_sexp(text)?;
        from_sexp(&sexp, &mut |name, pos| {
            let mut chars = name.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_lowercase() && c != 'x' && c != 'y' => Ok(Pattern::Var(c)),
                _ => Err(ParseError::UnknownVariable { name: name.to_string(), pos }),
            }
        })
    }

    /// Turns an expression into a pattern, replacing `x` by the variable `var`.
    pub fn from_expr_abstracting_x(e: &Expr, var: char) -> Pattern {
        match e {
            Expr::X => Pattern::Var(var),
            Expr::Const(c) => Pattern::Const(*c),
            Expr::Hole => Pattern::Var('y'),
            Expr::App(op, args) => {
                Pattern::Node(*op, args.iter().map(|a| Self::from_expr_abstracting_x(a, var)).collect())
            }
        }
    }

    /// Pattern variables in first-occurrence order.
    pub fn vars(&self) -> Vec<char> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<char>) {
        match self {
            Pattern::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            Pattern::Node(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }

    pub fn var_set(&self) -> BTreeSet<char> {
        self.vars().into_iter().collect()
    }

    pub fn contains_op(&self, op: Op) -> bool {
        match self {
            Pattern::Node(o, args) => *o == op || args.iter().any(|a| a.contains_op(op)),
            _ => false,
        }
    }

    pub fn contains_x(&self) -> bool {
        match self {
            Pattern::X => true,
            Pattern::Node(_, args) => args.iter().any(Pattern::contains_x),
            _ => false,
        }
    }

    /// Instantiates the pattern; `None` if a variable is unbound.
    pub fn instantiate(&self, binding: &impl Fn(char) -> Option<Expr>) -> Option<Expr> {
        Some(match self {
            Pattern::Var(v) => binding(*v)?,
            Pattern::Const(c) => Expr::Const(*c),
            Pattern::X => Expr::X,
            Pattern::Node(op, args) => {
                Expr::App(*op, args.iter().map(|a| a.instantiate(binding)).collect::<Option<Vec<_>>>()?)
            }
        })
    }
}

impl TreeBuild for Pattern {
    fn constant(c: RationalPi) -> Self {
        Pattern::Const(c)
    }

    fn as_constant(&self) -> Option<RationalPi> {
        match self {
            Pattern::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn raw_app(op: Op, children: Vec<Self>) -> Self {
        Pattern::Node(op, children)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Var(v) => write!(f, "{v}"),
            Pattern::Const(c) => write!(f, "{c}"),
            Pattern::X => write!(f, "x"),
            Pattern::Node(op, args) => {
                write!(f, "({}", op.name())?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
