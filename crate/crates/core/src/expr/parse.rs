use num_rational::Ratio;
use thiserror::Error;

use super::{read_sexp, Expr, Op, RationalPi, Sexp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown operator `{name}` at byte {pos}")]
    UnknownOperator { name: String, pos: usize },
    #[error("`{op}` expects {expected} argument(s), found {found} (byte {pos})")]
    Arity { op: String, expected: usize, found: usize, pos: usize },
    #[error("unsupported variable `{name}` at byte {pos}: only `x` is allowed")]
    UnknownVariable { name: String, pos: usize },
}

/// Parses one expression over `x`, `PI`, rational literals and the operator
/// set. `(* q PI)` with a rational literal `q` becomes a single constant.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let sexp = read_sexp(text)?;
    from_sexp(&sexp, &mut |name, pos| {
        if name == "x" {
            Ok(Expr::X)
        } else {
            Err(ParseError::UnknownVariable { name: name.to_string(), pos })
        }
    })
}

/// Converts an s-expression to an expression; identifiers that are not
/// numbers or `PI` are resolved by `symbol`.
pub(crate) fn from_sexp<T>(
    sexp: &Sexp,
    symbol: &mut impl FnMut(&str, usize) -> Result<T, ParseError>,
) -> Result<T, ParseError>
where
    T: TreeBuild,
{
    match sexp {
        Sexp::Atom { text, pos } => {
            if let Some(c) = parse_number(text) {
                Ok(T::constant(c))
            } else if text == "PI" {
                Ok(T::constant(RationalPi::PI))
            } else if text.chars().next().is_some_and(|c| c.is_ascii_digit() || c == '-' || c == '.') && text.len() > 1
            {
                Err(ParseError::Syntax { pos: *pos, message: format!("bad numeric literal `{text}`") })
            } else {
                symbol(text, *pos)
            }
        }
        Sexp::List { items, pos } => {
            let Some((head, args)) = items.split_first() else {
                return Err(ParseError::Syntax { pos: *pos, message: "empty list".into() });
            };
            let Sexp::Atom { text: name, pos: name_pos } = head else {
                return Err(ParseError::Syntax { pos: head.pos(), message: "operator must be a symbol".into() });
            };
            let op = Op::from_name(name, args.len())
                .ok_or_else(|| ParseError::UnknownOperator { name: name.clone(), pos: *name_pos })?;
            if op.arity() != args.len() {
                return Err(ParseError::Arity { op: name.clone(), expected: op.arity(), found: args.len(), pos: *pos });
            }
            let children = args.iter().map(|a| from_sexp(a, symbol)).collect::<Result<Vec<_>, _>>()?;
            Ok(T::app(op, children))
        }
    }
}

/// Tree types buildable from parsed s-expressions (expressions, patterns).
pub(crate) trait TreeBuild: Sized {
    fn constant(c: RationalPi) -> Self;
    fn as_constant(&self) -> Option<RationalPi>;
    fn raw_app(op: Op, children: Vec<Self>) -> Self;

    fn app(op: Op, children: Vec<Self>) -> Self {
        if op == Op::Mul && children.len() == 2 {
            if let (Some(q), Some(p)) = (children[0].as_constant(), children[1].as_constant()) {
                if !q.has_pi() && p == RationalPi::PI {
                    return Self::constant(RationalPi::pi_multiple(q.coeff()));
                }
            }
        }
        Self::raw_app(op, children)
    }
}

impl TreeBuild for Expr {
    fn constant(c: RationalPi) -> Self {
        Expr::Const(c)
    }

    fn as_constant(&self) -> Option<RationalPi> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn raw_app(op: Op, children: Vec<Self>) -> Self {
        Expr::App(op, children)
    }
}

/// Integer (`-3`), fraction (`1/2`) or terminating decimal (`0.25`, `1e-9`).
fn parse_number(text: &str) -> Option<RationalPi> {
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.parse().ok()?;
        let d: i64 = d.parse().ok()?;
        if d <= 0 {
            return None;
        }
        return RationalPi::rational(n, d);
    }
    if let Ok(n) = text.parse::<i64>() {
        return Some(RationalPi::integer(n));
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Option<RationalPi> {
    let (mantissa, exp) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: i64 = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let pow = 10i64.checked_pow(scale.unsigned_abs())?;
    let mut q = if scale >= 0 { Ratio::from_integer(digits.checked_mul(pow)?) } else { Ratio::new(digits, pow) };
    if neg {
        q = -q;
    }
    Some(RationalPi::new(q, false))
}

/// One benchmark expression with its 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Benchmark {
    pub line: usize,
    pub expr: Expr,
}

/// Parses a benchmark file: one expression per line, `;` comments, blank
/// lines ignored. Errors are annotated with the line number.
pub fn parse_benchmarks(text: &str) -> Result<Vec<Benchmark>, (usize, ParseError)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split(';').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let expr = parse(content).map_err(|e| (i + 1, e))?;
        out.push(Benchmark { line: i + 1, expr });
    }
    Ok(out)
}
