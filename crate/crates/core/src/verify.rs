//! High-precision numeric check of identities.

use astro_float::{BigFloat, Consts, RoundingMode};

use crate::expr::{Expr, Op, RationalPi};

const RM: RoundingMode = RoundingMode::ToEven;
/// Working precision in bits.
pub const PRECISION: usize = 256;
/// Precision of the confirming evaluation.
const CONFIRM_PRECISION: usize = 384;

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub passed: bool,
    /// A sample point where the two sides disagree.
    pub witness: Option<f64>,
    /// Points at which both sides were defined and compared.
    pub compared: usize,
    pub sampled: usize,
}

/// Sample point, kept symbolic so it can be rounded at each precision.
#[derive(Clone, Copy, Debug)]
enum Point {
    Exact(f64),
    PiSixths(i32),
}

impl Point {
    fn value(self, p: usize, cc: &mut Consts) -> BigFloat {
        match self {
            Point::Exact(v) => BigFloat::from_f64(v, p),
            Point::PiSixths(k) => {
                let pi = cc.pi(p + 16, RM);
                pi.mul(&BigFloat::from_i32(k, p + 16), p + 16, RM).div(&BigFloat::from_i32(6, p), p, RM)
            }
        }
    }

    fn approx(self) -> f64 {
        match self {
            Point::Exact(v) => v,
            Point::PiSixths(k) => k as f64 * std::f64::consts::PI / 6.0,
        }
    }
}

/// `count` points: a linear grid on [-10, 10], log grids on ±[1e-12, 1e12]
/// and nonzero multiples of π/6.
fn sample_points(count: usize) -> Vec<Point> {
    let pis = count * 3 / 16;
    let logs = count * 7 / 32;
    let linear = count.saturating_sub(pis + 2 * logs);
    let mut out = Vec::with_capacity(count);
    for i in 0..linear {
        let t = if linear > 1 { i as f64 / (linear - 1) as f64 } else { 0.5 };
        out.push(Point::Exact(-10.0 + 20.0 * t));
    }
    for i in 0..logs {
        let t = if logs > 1 { i as f64 / (logs - 1) as f64 } else { 0.5 };
        let v = 10f64.powf(-12.0 + 24.0 * t);
        out.push(Point::Exact(v));
        out.push(Point::Exact(-v));
    }
    for i in 0..pis as i32 {
        let k = i / 2 + 1;
        out.push(Point::PiSixths(if i % 2 == 0 { k } else { -k }));
    }
    out
}

fn constant(c: RationalPi, p: usize, cc: &mut Consts) -> BigFloat {
    let q = c.coeff();
    let v = BigFloat::from_i64(*q.numer(), p + 16).div(&BigFloat::from_i64(*q.denom(), p + 16), p + 16, RM);
    if c.has_pi() {
        v.mul(&cc.pi(p + 16, RM), p, RM)
    } else {
        v.mul(&BigFloat::from_i32(1, p), p, RM)
    }
}

fn finite(v: BigFloat) -> Option<BigFloat> {
    (!v.is_nan() && !v.is_inf()).then_some(v)
}

/// Evaluates `e` at `x`; `None` where some operation is undefined.
pub fn eval_big(e: &Expr, x: &BigFloat, p: usize, cc: &mut Consts) -> Option<BigFloat> {
    let args = e.children().iter().map(|c| eval_big(c, x, p, cc)).collect::<Option<Vec<_>>>()?;
    let one = BigFloat::from_i32(1, p);
    let zero = BigFloat::from_i32(0, p);
    let v = match e {
        Expr::Const(c) => constant(*c, p, cc),
        Expr::X => x.clone(),
        Expr::Hole => return None,
        Expr::App(op, _) => {
            let a = &args[0];
            match op {
                Op::Add => a.add(&args[1], p, RM),
                Op::Sub => a.sub(&args[1], p, RM),
                Op::Mul => a.mul(&args[1], p, RM),
                Op::Div => {
                    if args[1].is_zero() {
                        return None;
                    }
                    a.div(&args[1], p, RM)
                }
                Op::Neg => a.neg(),
                Op::Fabs => a.abs(),
                Op::Sqrt => {
                    if a.is_negative() && !a.is_zero() {
                        return None;
                    }
                    a.sqrt(p, RM)
                }
                Op::Cbrt => a.cbrt(p, RM),
                Op::Pow => match &e.children()[1] {
                    Expr::Const(c) if !c.has_pi() && c.coeff().is_integer() => powi(a, *c.coeff().numer(), p)?,
                    _ => pow(a, &args[1], p, cc)?,
                },
                Op::Floor => a.floor(),
                Op::Sin => a.sin(p, RM, cc),
                Op::Cos => a.cos(p, RM, cc),
                Op::Tan => a.tan(p, RM, cc),
                Op::Asin | Op::Acos => {
                    if a.abs() > one {
                        return None;
                    }
                    if *op == Op::Asin {
                        a.asin(p, RM, cc)
                    } else {
                        a.acos(p, RM, cc)
                    }
                }
                Op::Atan => a.atan(p, RM, cc),
                Op::Sinh => a.sinh(p, RM, cc),
                Op::Cosh => a.cosh(p, RM, cc),
                Op::Tanh => a.tanh(p, RM, cc),
                Op::Acosh => {
                    if *a < one {
                        return None;
                    }
                    a.acosh(p, RM, cc)
                }
                Op::Exp => a.exp(p, RM, cc),
                Op::Expm1 => a.exp(p + 64, RM, cc).sub(&one, p, RM),
                Op::Log => {
                    if *a <= zero {
                        return None;
                    }
                    a.ln(p, RM, cc)
                }
                Op::Log1p => {
                    let shifted = a.add(&one, p + 64, RM);
                    if shifted <= zero {
                        return None;
                    }
                    shifted.ln(p, RM, cc)
                }
                Op::Atan2 => atan2(a, &args[1], p, cc)?,
                Op::Thefunc => return None,
            }
        }
    };
    finite(v)
}

fn pow(base: &BigFloat, exponent: &BigFloat, p: usize, cc: &mut Consts) -> Option<BigFloat> {
    if base.is_zero() {
        return (exponent.is_positive() && !exponent.is_zero()).then(|| BigFloat::from_i32(0, p));
    }
    if !base.is_positive() && !exponent.is_int() {
        return None;
    }
    // exp(e·ln|b|), refusing exponents that overflow any sensible range
    let log = base.abs().ln(p + 32, RM, cc).mul(exponent, p + 32, RM);
    if log.abs() > BigFloat::from_i32(100_000, p) {
        return None;
    }
    let magnitude = log.exp(p, RM, cc);
    if base.is_positive() {
        return Some(magnitude);
    }
    let half = exponent.div(&BigFloat::from_i32(2, p), p, RM);
    Some(if half.is_int() { magnitude } else { magnitude.neg() })
}

fn powi(base: &BigFloat, n: i64, p: usize) -> Option<BigFloat> {
    if n == 0 {
        return (!base.is_zero()).then(|| BigFloat::from_i32(1, p));
    }
    let magnitude = base.powi(n.unsigned_abs() as usize, p + 16, RM);
    if n > 0 {
        Some(magnitude.mul(&BigFloat::from_i32(1, p), p, RM))
    } else if base.is_zero() {
        None
    } else {
        Some(magnitude.reciprocal(p, RM))
    }
}

fn atan2(y: &BigFloat, x: &BigFloat, p: usize, cc: &mut Consts) -> Option<BigFloat> {
    if x.is_zero() {
        return None;
    }
    let base = y.div(x, p + 16, RM).atan(p + 16, RM, cc);
    if x.is_positive() {
        return Some(base.mul(&BigFloat::from_i32(1, p), p, RM));
    }
    let pi = cc.pi(p + 16, RM);
    Some(if y.is_negative() { base.sub(&pi, p, RM) } else { base.add(&pi, p, RM) })
}

/// Whether `a` and `b` agree to relative tolerance `tol`.
fn close(a: &BigFloat, b: &BigFloat, tol: f64, p: usize) -> bool {
    let diff = a.sub(b, p, RM).abs();
    let scale = if a.abs() > b.abs() { a.abs() } else { b.abs() };
    diff <= scale.mul(&BigFloat::from_f64(tol, p), p, RM)
}

/// Value at `point`, if defined and numerically stable: evaluations at
/// two precisions must agree far below `tol`. Points near poles or where
/// the result is pure cancellation noise count as undefined.
fn stable_value(e: &Expr, point: Point, tol: f64, cc: &mut Consts) -> Option<BigFloat> {
    let lo = eval_big(e, &point.value(PRECISION, cc), PRECISION, cc)?;
    let hi = eval_big(e, &point.value(CONFIRM_PRECISION, cc), CONFIRM_PRECISION, cc)?;
    close(&lo, &hi, tol * 1e-6, CONFIRM_PRECISION).then_some(hi)
}

/// Checks `f(x) = rhs[thefunc := f](x)` at `points` sample points.
///
/// Points where either side is undefined are skipped; the check fails if
/// some compared point differs by more than `tol` relatively, or if no
/// point could be compared.
pub fn verify_identity(f: &Expr, rhs: &Expr, points: usize, tol: f64) -> Verification {
    let lhs = f;
    let rhs = rhs.inline_thefunc(f);
    let mut cc = Consts::new().expect("constant cache");
    let mut compared = 0;
    let sample = sample_points(points);
    for point in &sample {
        let Some(a) = stable_value(lhs, *point, tol, &mut cc) else { continue };
        let Some(b) = stable_value(&rhs, *point, tol, &mut cc) else { continue };
        compared += 1;
        if !close(&a, &b, tol, CONFIRM_PRECISION) {
            return Verification { passed: false, witness: Some(point.approx()), compared, sampled: sample.len() };
        }
    }
    Verification { passed: compared > 0, witness: None, compared, sampled: sample.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn check(f: &str, rhs: &str) -> Verification {
        verify_identity(&parse(f).unwrap(), &parse(rhs).unwrap(), 256, 1e-10)
    }

    #[test]
    fn point_set_has_requested_size() {
        for n in [16, 64, 256, 300] {
            assert_eq!(sample_points(n).len(), n);
        }
    }

    #[test]
    fn sin_reflection_passes() {
        let v = check("(sin x)", "(thefunc (- PI x))");
        assert!(v.passed, "{v:?}");
        assert!(v.compared > 200);
    }

    #[test]
    fn sin_shift_fails_with_witness() {
        let v = check("(sin x)", "(thefunc (+ x PI))");
        assert!(!v.passed);
        let w = v.witness.unwrap();
        assert!((w.sin() + (w + std::f64::consts::PI).sin()).abs() < 1e-6 || w.sin().abs() > 1e-12);
    }

    #[test]
    fn tan_minus_sin_period_passes() {
        let v = check("(- (tan x) (sin x))", "(thefunc (+ x (* 2 PI)))");
        assert!(v.passed, "{v:?}");
    }

    #[test]
    fn parity_and_definition() {
        assert!(check("(- (tan x) (sin x))", "(- (thefunc (- x)))").passed);
        assert!(check("(+ 1 (cos x))", "(- (- 1 (thefunc x)) (- (- (thefunc x)) (cos x)))").passed);
        assert!(!check("(cos x)", "(- (thefunc (- x)))").passed);
    }

    #[test]
    fn everywhere_undefined_fails() {
        let v = check("(sqrt (- -1 (fabs x)))", "(thefunc x)");
        assert!(!v.passed);
        assert_eq!(v.compared, 0);
    }

    #[test]
    fn partial_functions_skip_undefined_points() {
        assert!(check("(log x)", "(- (log (/ 1 x)))").passed);
        assert!(check("(acosh x)", "(thefunc x)").passed);
        assert!(check("(log1p x)", "(log (+ 1 x))").passed);
        assert!(check("(expm1 x)", "(- (exp x) 1)").passed);
    }

    #[test]
    fn atan2_quadrants() {
        assert!(check("(atan2 1 x)", "(thefunc x)").passed);
        assert!(check("(atan2 (- 1) x)", "(- (atan2 1 x))").passed);
    }

    #[test]
    fn integer_powers() {
        assert!(check("(pow x 3)", "(* x (* x x))").passed);
        assert!(check("(pow x 2)", "(* x x)").passed);
        assert!(check("(pow (fabs x) 1/2)", "(sqrt (fabs x))").passed);
        assert!(check("(pow 2 x)", "(exp (* x (log 2)))").passed);
    }

    #[test]
    fn constants_are_exact() {
        let mut cc = Consts::new().unwrap();
        let e = parse("(- (* 2 PI) (+ PI PI))").unwrap();
        let v = eval_big(&e, &BigFloat::from_f64(0.0, PRECISION), PRECISION, &mut cc).unwrap();
        assert!(v.is_zero() || v.abs() < BigFloat::from_f64(1e-70, PRECISION));
    }
}
