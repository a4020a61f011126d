use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

/// Exact constant of the form `q * PI^d` with `q` rational and `d` in {0, 1}.
///
/// A zero coefficient always carries `d = 0`, so equal values have equal
/// representations and derived equality is value equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalPi {
    coeff: Ratio<i64>,
    pi: bool,
}

impl RationalPi {
    pub const ZERO: RationalPi = RationalPi { coeff: Ratio::new_raw(0, 1), pi: false };
    pub const ONE: RationalPi = RationalPi { coeff: Ratio::new_raw(1, 1), pi: false };
    pub const PI: RationalPi = RationalPi { coeff: Ratio::new_raw(1, 1), pi: true };

    pub fn new(coeff: Ratio<i64>, pi: bool) -> Self {
        let pi = pi && !coeff.is_zero();
        RationalPi { coeff, pi }
    }

    pub fn integer(n: i64) -> Self {
        Self::new(Ratio::from_integer(n), false)
    }

    /// `numer / denom`; `None` if `denom` is zero.
    pub fn rational(numer: i64, denom: i64) -> Option<Self> {
        if denom == 0 {
            return None;
        }
        Some(Self::new(Ratio::new(numer, denom), false))
    }

    pub fn pi_multiple(coeff: Ratio<i64>) -> Self {
        Self::new(coeff, true)
    }

    pub fn coeff(&self) -> Ratio<i64> {
        self.coeff
    }

    pub fn has_pi(&self) -> bool {
        self.pi
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(*other);
        }
        if other.is_zero() {
            return Some(*self);
        }
        if self.pi != other.pi {
            return None;
        }
        Some(Self::new(self.coeff.checked_add(&other.coeff)?, self.pi))
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Option<Self> {
        Some(Self::new(Ratio::zero().checked_sub(&self.coeff)?, self.pi))
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        if self.is_zero() || other.is_zero() {
            return Some(Self::ZERO);
        }
        if self.pi && other.pi {
            return None;
        }
        Some(Self::new(self.coeff.checked_mul(&other.coeff)?, self.pi || other.pi))
    }

    /// Exact quotient. Division by zero and results of degree -1 are not
    /// representable and give `None`.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::ZERO);
        }
        let pi = match (self.pi, other.pi) {
            (p, false) => p,
            (true, true) => false,
            (false, true) => return None,
        };
        Some(Self::new(self.coeff.checked_div(&other.coeff)?, pi))
    }

    pub fn to_f64(&self) -> f64 {
        let q = self.coeff.numer().to_f64().unwrap_or(f64::NAN) / self.coeff.denom().to_f64().unwrap_or(f64::NAN);
        if self.pi {
            q * std::f64::consts::PI
        } else {
            q
        }
    }

    /// Sign of the value: -1, 0 or 1.
    pub fn signum(&self) -> i64 {
        if self.coeff.is_zero() {
            0
        } else if self.coeff.is_negative() {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for RationalPi {
    /// `3`, `-1/2`, `PI`, `(* 2 PI)`, `(* -1/3 PI)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.coeff;
        let write_q = |f: &mut fmt::Formatter<'_>| {
            if *q.denom() == 1 {
                write!(f, "{}", q.numer())
            } else {
                write!(f, "{}/{}", q.numer(), q.denom())
            }
        };
        if !self.pi {
            write_q(f)
        } else if q == Ratio::from_integer(1) {
            write!(f, "PI")
        } else {
            write!(f, "(* ")?;
            write_q(f)?;
            write!(f, " PI)")
        }
    }
}

impl fmt::Debug for RationalPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialOrd for RationalPi {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural order (degree, then coefficient); used for deterministic
/// sorting only, not numeric comparison.
impl Ord for RationalPi {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pi.cmp(&other.pi).then_with(|| self.coeff.cmp(&other.coeff))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn pi_plus_pi_is_two_pi() {
        let two_pi = RationalPi::PI.checked_add(&RationalPi::PI).unwrap();
        assert_eq!(two_pi, RationalPi::pi_multiple(r(2, 1)));
        assert_eq!(two_pi.to_string(), "(* 2 PI)");
    }

    #[test]
    fn mixed_degrees_do_not_fold() {
        assert!(RationalPi::PI.checked_add(&RationalPi::ONE).is_none());
        assert!(RationalPi::PI.checked_mul(&RationalPi::PI).is_none());
        assert!(RationalPi::ONE.checked_div(&RationalPi::PI).is_none());
    }

    #[test]
    fn zero_is_degree_agnostic() {
        let z = RationalPi::PI.checked_sub(&RationalPi::PI).unwrap();
        assert_eq!(z, RationalPi::ZERO);
        assert_eq!(RationalPi::ZERO.checked_add(&RationalPi::PI), Some(RationalPi::PI));
        assert_eq!(RationalPi::PI.checked_mul(&RationalPi::ZERO), Some(RationalPi::ZERO));
    }

    #[test]
    fn division() {
        assert!(RationalPi::ONE.checked_div(&RationalPi::ZERO).is_none());
        let half_pi = RationalPi::PI.checked_div(&RationalPi::integer(2)).unwrap();
        assert_eq!(half_pi.to_string(), "(* 1/2 PI)");
        assert_eq!(RationalPi::PI.checked_div(&RationalPi::PI), Some(RationalPi::ONE));
    }

    #[test]
    fn overflow_is_non_foldable() {
        let big = RationalPi::integer(i64::MAX);
        assert!(big.checked_add(&RationalPi::ONE).is_none());
        assert!(big.checked_mul(&RationalPi::integer(2)).is_none());
    }

    #[test]
    fn printing() {
        assert_eq!(RationalPi::rational(-1, 2).unwrap().to_string(), "-1/2");
        assert_eq!(RationalPi::rational(4, 2).unwrap().to_string(), "2");
        assert_eq!(RationalPi::pi_multiple(r(-1, 3)).to_string(), "(* -1/3 PI)");
    }
}
