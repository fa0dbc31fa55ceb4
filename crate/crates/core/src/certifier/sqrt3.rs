//! Exact numbers `a sqrt(3) + b` with integer `a`, `b`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SqrtThreeInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl SqrtThreeInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn sign(&self) -> Sign {
        sqrt3_sign(self)
    }

    /// Nearest-double approximation; only for display.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a * 3f64.sqrt() + b
    }
}

impl fmt::Display for SqrtThreeInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*sqrt(3) + {}", self.a, self.b)
    }
}

impl Add for SqrtThreeInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for SqrtThreeInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for SqrtThreeInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self { a: -self.a, b: -self.b }
    }
}

impl Mul for SqrtThreeInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        // (a1 s + b1)(a2 s + b2) with s^2 = 3.
        Self {
            a: &self.a * &o.b + &o.a * &self.b,
            b: BigInt::from(3) * &self.a * &o.a + &self.b * &o.b,
        }
    }
}

fn sign_of(v: &BigInt) -> Sign {
    if v.is_zero() {
        Sign::Zero
    } else if v.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// Exact sign of `a sqrt(3) + b`. Mixed-sign components are resolved by
/// comparing `3 a^2` with `b^2`; equality there forces `a = b = 0` since
/// sqrt(3) is irrational.
pub fn sqrt3_sign(v: &SqrtThreeInt) -> Sign {
    match (sign_of(&v.a), sign_of(&v.b)) {
        (Sign::Zero, s) | (s, Sign::Zero) => s,
        (Sign::Positive, Sign::Positive) => Sign::Positive,
        (Sign::Negative, Sign::Negative) => Sign::Negative,
        (sa, _) => {
            let three_a2 = BigInt::from(3) * &v.a * &v.a;
            let b2 = &v.b * &v.b;
            match three_a2.cmp(&b2) {
                Ordering::Greater => sa,
                Ordering::Less => {
                    if sa == Sign::Positive {
                        Sign::Negative
                    } else {
                        Sign::Positive
                    }
                }
                Ordering::Equal => unreachable!("3a^2 = b^2 has no nonzero integer solution"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sign_examples() {
        assert_eq!(sqrt3_sign(&SqrtThreeInt::new(-32, 56)), Sign::Positive);
        assert_eq!(sqrt3_sign(&SqrtThreeInt::zero()), Sign::Zero);
        assert_eq!(sqrt3_sign(&SqrtThreeInt::new(1, -2)), Sign::Negative);
        assert_eq!(sqrt3_sign(&SqrtThreeInt::new(-1, 2)), Sign::Positive);
        assert_eq!(sqrt3_sign(&SqrtThreeInt::new(0, -5)), Sign::Negative);
        assert_eq!(sqrt3_sign(&SqrtThreeInt::new(7, 0)), Sign::Positive);
    }

    #[test]
    fn huge_components_do_not_overflow() {
        let n = BigInt::from(1_000_000);
        let n6 = n.pow(6);
        let v = SqrtThreeInt::new(BigInt::from(16) * &n6, -BigInt::from(28) * n.pow(5));
        assert_eq!(v.sign(), Sign::Positive);
    }

    #[test]
    fn product_rule() {
        let p = SqrtThreeInt::new(2, 3) * SqrtThreeInt::new(-1, 5);
        // (2s + 3)(-s + 5) = -6 + 10s - 3s + 15 = 7s + 9
        assert_eq!(p, SqrtThreeInt::new(7, 9));
    }

    proptest! {
        #[test]
        fn sign_agrees_with_float_away_from_zero(a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000) {
            let v = SqrtThreeInt::new(a, b);
            let f = a as f64 * 3f64.sqrt() + b as f64;
            prop_assume!(f.abs() > 1e-6);
            let expect = if f > 0.0 { Sign::Positive } else { Sign::Negative };
            prop_assert_eq!(v.sign(), expect);
        }

        #[test]
        fn sign_is_odd(a in any::<i64>(), b in any::<i64>()) {
            let v = SqrtThreeInt::new(a, b);
            let s = v.sign();
            let t = (-v).sign();
            let flipped = match s { Sign::Positive => Sign::Negative, Sign::Negative => Sign::Positive, Sign::Zero => Sign::Zero };
            prop_assert_eq!(t, flipped);
        }
    }
}
