//! Multiprecision reals for evaluation and refinement.
//!
//! Symbolic work never touches this type; it only carries values derived from
//! exact data at a chosen mantissa precision.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::Signed;

use crate::rational::Rational;

pub const DEFAULT_PRECISION: usize = 128;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants"));
}

/// Mantissa bits from `FNX_PRECISION`, falling back to 128.
pub fn precision_from_env() -> usize {
    std::env::var("FNX_PRECISION")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&p| p >= 32)
        .unwrap_or(DEFAULT_PRECISION)
}

#[derive(Clone, Debug)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Real {
        Real { v, prec }
    }

    pub fn zero(prec: usize) -> Real {
        Real::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Real {
        Real::from_i64(1, prec)
    }

    pub fn from_i64(i: i64, prec: usize) -> Real {
        Real::wrap(BigFloat::from_i64(i, prec), prec)
    }

    pub fn from_f64(f: f64, prec: usize) -> Real {
        Real::wrap(BigFloat::from_f64(f, prec), prec)
    }

    pub fn from_bigint(n: &BigInt, prec: usize) -> Real {
        let (sign, digits) = n.to_u64_digits();
        let work = prec.max(64 * digits.len() + 64);
        let base = BigFloat::from_u128(1u128 << 64, work);
        let mut acc = BigFloat::from_u64(0, work);
        for d in digits.iter().rev() {
            acc = acc.mul(&base, work, RM).add(&BigFloat::from_u64(*d, work), work, RM);
        }
        let mut acc = if sign == num_bigint::Sign::Minus { acc.neg() } else { acc };
        let _ = acc.set_precision(prec, RM);
        Real::wrap(acc, prec)
    }

    pub fn from_rational(r: &Rational, prec: usize) -> Real {
        let n = Real::from_bigint(r.numer(), prec + 8);
        let d = Real::from_bigint(r.denom(), prec + 8);
        Real::wrap(n.v.div(&d.v, prec, RM), prec)
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn ln(&self) -> Real {
        let v = CONSTS.with(|c| self.v.ln(self.prec, RM, &mut c.borrow_mut()));
        Real::wrap(v, self.prec)
    }

    pub fn exp(&self) -> Real {
        let v = CONSTS.with(|c| self.v.exp(self.prec, RM, &mut c.borrow_mut()));
        Real::wrap(v, self.prec)
    }

    pub fn sqrt(&self) -> Real {
        Real::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn powi(&self, n: i64) -> Real {
        let p = self.v.powi(n.unsigned_abs() as usize, self.prec + 8, RM);
        let p = if n < 0 { BigFloat::from_i64(1, self.prec).div(&p, self.prec, RM) } else { p };
        Real::wrap(p, self.prec)
    }

    pub fn abs(&self) -> Real {
        Real::wrap(self.v.abs(), self.prec)
    }

    pub fn signum(&self) -> i32 {
        if self.v.is_zero() {
            0
        } else if self.v.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn max(self, other: Real) -> Real {
        if self < other { other } else { self }
    }

    /// Nearest double (truncated mantissa, which is ample for reporting).
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        let Some((words, _, sign, e, _)) = self.v.as_raw_parts() else { return 0.0 };
        let Some(&top) = words.last() else { return 0.0 };
        if top == 0 {
            return 0.0;
        }
        let next = if words.len() > 1 { words[words.len() - 2] } else { 0 };
        let m = top as f64 / 18446744073709551616.0 + next as f64 / 18446744073709551616.0f64.powi(2);
        let x = m * 2f64.powi(e);
        if sign == Sign::Neg { -x } else { x }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e}", self.to_f64())
    }
}

impl PartialEq for Real {
    fn eq(&self, o: &Real) -> bool {
        self.v.cmp(&o.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, o: &Real) -> Option<Ordering> {
        self.v.cmp(&o.v).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                let p = self.prec.max(o.prec);
                Real::wrap(self.v.$m(&o.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                (&self).$m(&o)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                (&self).$m(o)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

/// Sign of an exact rational, used when comparing reals with exact thresholds.
pub fn rational_sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn conversions() {
        let x = Real::from_rational(&rat(-22, 7), 128);
        assert!((x.to_f64() + 22.0 / 7.0).abs() < 1e-15);
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let y = Real::from_bigint(&big, 200);
        assert!((y.to_f64() / 1.2345678901234568e29 - 1.0).abs() < 1e-15);
        assert_eq!(Real::from_f64(0.0, 64).to_f64(), 0.0);
        assert_eq!(Real::from_f64(1e-300, 64).to_f64(), 1e-300);
    }

    #[test]
    fn transcendental() {
        let two = Real::from_i64(2, 256);
        let l = two.ln();
        assert!((l.to_f64() - std::f64::consts::LN_2).abs() < 1e-16);
        let back = l.exp();
        assert!(((back - two).abs()).to_f64() < 1e-70);
        assert!((Real::from_i64(9, 128).sqrt().to_f64() - 3.0).abs() < 1e-16);
        assert_eq!(Real::from_i64(2, 64).powi(-2).to_f64(), 0.25);
    }

    #[test]
    fn ordering() {
        let a = Real::from_rational(&rat(1, 3), 128);
        let b = Real::from_rational(&rat(1, 2), 128);
        assert!(a < b);
        assert_eq!((&b - &a).signum(), 1);
    }
}
