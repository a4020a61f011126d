use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DomainTable, Pattern, Rule, RuleStatus};
use crate::expr::Op;

/// How the two sides of a rule disagree at a witness point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Left side defined, right side undefined: the rule builds ill-defined
    /// terms out of well-defined ones.
    Shrinks,
    /// Left side undefined, right side defined: the rule equates an
    /// ill-defined term with a defined one.
    Widens,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub assignment: Vec<(char, f64)>,
    pub violation: Violation,
}

impl Witness {
    /// Re-evaluates both sides at the witness assignment.
    pub fn reproduces(&self, rule: &Rule, table: &DomainTable) -> bool {
        let lookup = |v: char| self.assignment.iter().find(|(n, _)| *n == v).map(|(_, x)| *x);
        let lhs = eval(&rule.lhs, &lookup, table);
        let rhs = eval(&rule.rhs, &lookup, table);
        classify(lhs, rhs) == Some(self.violation)
    }
}

const GRID: [f64; 13] = [0.0, 1.0, -1.0, 2.0, -2.0, 0.5, -0.5, PI, -PI, 1e-9, -1e-9, 1e9, -1e9];

/// Sampling falsifier for domain soundness: the rule is flagged if some
/// assignment of its pattern variables makes exactly one side undefined.
///
/// Assignments are every grid combination (for up to three variables)
/// followed by `samples` pseudo-random ones from a fixed seed.
pub fn validate_rule(rule: &Rule, table: &DomainTable, samples: usize) -> RuleStatus {
    let mut vars = rule.lhs.vars();
    for v in rule.rhs.vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    let check = |values: &[f64]| -> Option<Witness> {
        let lookup = |v: char| vars.iter().position(|n| *n == v).map(|i| values[i]);
        let lhs = eval(&rule.lhs, &lookup, table);
        let rhs = eval(&rule.rhs, &lookup, table);
        classify(lhs, rhs).map(|violation| Witness {
            assignment: vars.iter().copied().zip(values.iter().copied()).collect(),
            violation,
        })
    };

    if vars.len() <= 3 {
        let mut idx = vec![0usize; vars.len()];
        loop {
            let values: Vec<f64> = idx.iter().map(|&i| GRID[i]).collect();
            if let Some(w) = check(&values) {
                return RuleStatus::FlaggedUnsound(w);
            }
            // odometer increment
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < GRID.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_1de5);
    let mut values = vec![0.0; vars.len()];
    for _ in 0..samples {
        for v in values.iter_mut() {
            *v = random_real(&mut rng);
        }
        if let Some(w) = check(&values) {
            return RuleStatus::FlaggedUnsound(w);
        }
    }
    RuleStatus::Validated
}

fn random_real(rng: &mut impl Rng) -> f64 {
    match rng.gen_range(0..5) {
        0 => GRID[rng.gen_range(0..GRID.len())],
        1 => rng.gen_range(-10.0..10.0),
        2 => {
            let mag = 10f64.powf(rng.gen_range(-12.0..12.0));
            if rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        }
        3 => rng.gen_range(-6i32..=6) as f64,
        _ => {
            // just inside or outside of the unit interval
            let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            s * (1.0 + rng.gen_range(-1e-3..1e-3))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Eval {
    Defined(f64),
    Undefined,
    /// Overflow, underflow or NaN in floating point: no verdict.
    Unknown,
}

fn classify(lhs: Eval, rhs: Eval) -> Option<Violation> {
    match (lhs, rhs) {
        (Eval::Defined(_), Eval::Undefined) => Some(Violation::Shrinks),
        (Eval::Undefined, Eval::Defined(_)) => Some(Violation::Widens),
        _ => None,
    }
}

fn eval(p: &Pattern, lookup: &impl Fn(char) -> Option<f64>, table: &DomainTable) -> Eval {
    match p {
        Pattern::Var(v) => lookup(*v).map_or(Eval::Unknown, Eval::Defined),
        Pattern::Const(c) => Eval::Defined(c.to_f64()),
        Pattern::X => Eval::Unknown,
        Pattern::Node(op, args) => {
            let evals: Vec<Eval> = args.iter().map(|a| eval(a, lookup, table)).collect();
            if evals.contains(&Eval::Undefined) {
                return Eval::Undefined;
            }
            let vals: Option<Vec<f64>> = evals
                .iter()
                .map(|e| match e {
                    Eval::Defined(v) => Some(*v),
                    _ => None,
                })
                .collect();
            let Some(vals) = vals else { return Eval::Unknown };
            if table.is_invalid(*op, &vals) {
                return Eval::Undefined;
            }
            let Some(v) = apply_f64(*op, &vals) else { return Eval::Unknown };
            if !v.is_finite() {
                return Eval::Unknown;
            }
            // a product of nonzero values that rounds to zero is an underflow,
            // and tiny values are too unreliable to feed a zero test
            let underflow = (v == 0.0 && matches!(op, Op::Mul | Op::Div | Op::Exp) && vals.iter().all(|x| *x != 0.0))
                || (v != 0.0 && v.abs() < 1e-290);
            if underflow {
                return Eval::Unknown;
            }
            Eval::Defined(v)
        }
    }
}

/// Floating-point semantics of each operator; `None` for `thefunc`.
pub(crate) fn apply_f64(op: Op, a: &[f64]) -> Option<f64> {
    Some(match op {
        Op::Add => a[0] + a[1],
        Op::Sub => a[0] - a[1],
        Op::Mul => a[0] * a[1],
        Op::Div => a[0] / a[1],
        Op::Neg => -a[0],
        Op::Fabs => a[0].abs(),
        Op::Sqrt => a[0].sqrt(),
        Op::Cbrt => a[0].cbrt(),
        Op::Pow => a[0].powf(a[1]),
        Op::Floor => a[0].floor(),
        Op::Sin => a[0].sin(),
        Op::Cos => a[0].cos(),
        Op::Tan => a[0].tan(),
        Op::Asin => a[0].asin(),
        Op::Acos => a[0].acos(),
        Op::Atan => a[0].atan(),
        Op::Sinh => a[0].sinh(),
        Op::Cosh => a[0].cosh(),
        Op::Tanh => a[0].tanh(),
        Op::Acosh => a[0].acosh(),
        Op::Exp => a[0].exp(),
        Op::Log => a[0].ln(),
        Op::Expm1 => a[0].exp_m1(),
        Op::Log1p => a[0].ln_1p(),
        Op::Atan2 => a[0].atan2(a[1]),
        Op::Thefunc => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{default_rules, Rule};

    fn status(lhs: &str, rhs: &str) -> RuleStatus {
        let rule = Rule::parse_directed("r", lhs, rhs).unwrap();
        validate_rule(&rule, &DomainTable::default(), 1000)
    }

    #[test]
    fn multiplicative_inverse_is_flagged_at_zero() {
        let RuleStatus::FlaggedUnsound(w) = status("(* a (/ 1 a))", "1") else { panic!() };
        assert_eq!(w.assignment, vec![('a', 0.0)]);
        assert_eq!(w.violation, Violation::Widens);
    }

    #[test]
    fn reciprocal_of_quotient_is_flagged() {
        let RuleStatus::FlaggedUnsound(w) = status("(/ a b)", "(/ 1 (/ b a))") else { panic!() };
        assert_eq!(w.violation, Violation::Shrinks);
        let a = w.assignment.iter().find(|(v, _)| *v == 'a').unwrap().1;
        let b = w.assignment.iter().find(|(v, _)| *v == 'b').unwrap().1;
        assert_eq!(a, 0.0);
        assert_ne!(b, 0.0);
    }

    #[test]
    fn division_reassociation_is_validated() {
        assert_eq!(status("(/ a (* b c))", "(/ (/ a b) c)"), RuleStatus::Validated);
    }

    #[test]
    fn log_rules() {
        assert!(matches!(status("(log (* a b))", "(+ (log a) (log b))"), RuleStatus::FlaggedUnsound(_)));
        assert!(matches!(status("(exp (log a))", "a"), RuleStatus::FlaggedUnsound(_)));
        assert_eq!(status("(log (exp a))", "a"), RuleStatus::Validated);
    }

    #[test]
    fn witnesses_reproduce() {
        let table = DomainTable::default();
        for (l, r) in [("(* a (/ 1 a))", "1"), ("(/ a b)", "(/ 1 (/ b a))"), ("(sqrt (* a a))", "(sqrt a)")] {
            let rule = Rule::parse_directed("r", l, r).unwrap();
            let RuleStatus::FlaggedUnsound(w) = validate_rule(&rule, &table, 100) else { panic!("{l}") };
            assert!(w.reproduces(&rule, &table));
        }
    }

    #[test]
    fn shipped_rules_validate_with_ten_thousand_samples() {
        let table = DomainTable::default();
        for rule in default_rules() {
            assert_eq!(rule.status, RuleStatus::CuratedSound);
            let forward = validate_rule(&rule, &table, 10_000);
            assert_eq!(forward, RuleStatus::Validated, "{}: {} => {}", rule.name, rule.lhs, rule.rhs);
        }
    }
}
