use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::expr::Op;

/// Minimal numeric interface needed to decide definedness.
pub trait Real {
    /// Comparison against a small integer; `None` for NaN.
    fn cmp_int(&self, n: i64) -> Option<Ordering>;
    fn is_integer(&self) -> bool;
}

impl Real for f64 {
    fn cmp_int(&self, n: i64) -> Option<Ordering> {
        self.partial_cmp(&(n as f64))
    }

    fn is_integer(&self) -> bool {
        self.is_finite() && self.fract() == 0.0
    }
}

/// Condition under which an operation is undefined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvalidDomain {
    /// Argument `i` equals zero.
    ArgZero(usize),
    /// First argument lies outside `[lo, hi]`.
    Outside(i64, i64),
    /// First argument is strictly below the bound.
    Below(i64),
    /// First argument is at most the bound.
    AtMost(i64),
    /// Negative base with a non-integer exponent, or zero base with a
    /// negative exponent.
    Pow,
}

impl InvalidDomain {
    pub fn holds<R: Real>(&self, args: &[R]) -> bool {
        use Ordering::*;
        match *self {
            InvalidDomain::ArgZero(i) => args[i].cmp_int(0) == Some(Equal),
            InvalidDomain::Outside(lo, hi) => args[0].cmp_int(lo) == Some(Less) || args[0].cmp_int(hi) == Some(Greater),
            InvalidDomain::Below(b) => args[0].cmp_int(b) == Some(Less),
            InvalidDomain::AtMost(b) => matches!(args[0].cmp_int(b), Some(Less | Equal)),
            InvalidDomain::Pow => {
                let (base, exp) = (&args[0], &args[1]);
                (base.cmp_int(0) == Some(Less) && !exp.is_integer())
                    || (base.cmp_int(0) == Some(Equal) && exp.cmp_int(0) == Some(Less))
            }
        }
    }
}

/// Maps each partial operator to the condition making it undefined; every
/// operator without an entry is defined everywhere.
#[derive(Clone, Debug)]
pub struct DomainTable {
    entries: BTreeMap<Op, InvalidDomain>,
}

impl Default for DomainTable {
    fn default() -> Self {
        use InvalidDomain::*;
        let entries = BTreeMap::from([
            (Op::Div, ArgZero(1)),
            (Op::Acos, Outside(-1, 1)),
            (Op::Acosh, Below(1)),
            (Op::Asin, Outside(-1, 1)),
            (Op::Log, AtMost(0)),
            (Op::Log1p, AtMost(-1)),
            (Op::Sqrt, Below(0)),
            (Op::Atan2, ArgZero(1)),
            (Op::Pow, Pow),
        ]);
        DomainTable { entries }
    }
}

impl DomainTable {
    pub fn get(&self, op: Op) -> Option<InvalidDomain> {
        self.entries.get(&op).copied()
    }

    /// True if `op` applied to `args` is undefined.
    pub fn is_invalid<R: Real>(&self, op: Op, args: &[R]) -> bool {
        self.get(op).is_some_and(|d| d.holds(args))
    }

    pub fn partial_ops(&self) -> impl Iterator<Item = Op> + '_ {
        self.entries.keys().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_entries() {
        let t = DomainTable::default();
        assert!(t.is_invalid(Op::Div, &[1.0, 0.0]));
        assert!(!t.is_invalid(Op::Div, &[0.0, 1.0]));
        assert!(t.is_invalid(Op::Acos, &[1.5]));
        assert!(!t.is_invalid(Op::Acos, &[1.0]));
        assert!(t.is_invalid(Op::Acosh, &[0.5]));
        assert!(t.is_invalid(Op::Log, &[0.0]));
        assert!(!t.is_invalid(Op::Log, &[1e-300]));
        assert!(t.is_invalid(Op::Log1p, &[-1.0]));
        assert!(t.is_invalid(Op::Sqrt, &[-1e-9]));
        assert!(t.is_invalid(Op::Atan2, &[1.0, 0.0]));
        assert!(t.is_invalid(Op::Pow, &[-2.0, 0.5]));
        assert!(!t.is_invalid(Op::Pow, &[-2.0, 3.0]));
        assert!(t.is_invalid(Op::Pow, &[0.0, -1.0]));
        assert!(!t.is_invalid(Op::Sin, &[1e300]));
        assert!(!t.is_invalid(Op::Tan, &[std::f64::consts::FRAC_PI_2]));
    }

    #[test]
    fn nan_is_not_judged() {
        let t = DomainTable::default();
        assert!(!t.is_invalid(Op::Log, &[f64::NAN]));
    }
}
