//! Configurable-precision real numbers used for every numeric evaluation.
//!
//! The working precision is process-wide. It defaults to 50 significant
//! decimal digits and can be overridden with the `QBALL_DIGITS` environment
//! variable or [`set_precision_digits`].

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::OnceLock;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_traits::{Signed, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

pub const DEFAULT_DIGITS: usize = 50;
pub const DIGITS_ENV: &str = "QBALL_DIGITS";

const RM: RoundingMode = RoundingMode::ToEven;

static DIGITS: AtomicUsize = AtomicUsize::new(0);
static ENV_DIGITS: OnceLock<usize> = OnceLock::new();

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

/// Working precision in significant decimal digits.
pub fn precision_digits() -> usize {
    match DIGITS.load(AtomicOrdering::Relaxed) {
        0 => *ENV_DIGITS.get_or_init(|| {
            std::env::var(DIGITS_ENV)
                .ok()
                .and_then(|s| s.trim().parse::<usize>().ok())
                .filter(|&d| d >= 10)
                .unwrap_or(DEFAULT_DIGITS)
        }),
        d => d,
    }
}

pub fn set_precision_digits(digits: usize) {
    DIGITS.store(digits.max(10), AtomicOrdering::Relaxed);
}

/// Mantissa bits for the current precision: 16 guard bits, rounded up to a
/// whole number of 64-bit words.
pub fn precision_bits() -> usize {
    let bits = (precision_digits() as f64 * std::f64::consts::LOG2_10).ceil() as usize + 16;
    bits.div_ceil(64) * 64
}

/// Relative size of one unit in the last retained decimal place.
pub fn unit_roundoff() -> Real {
    Real::from_f64(10f64).powi(-(precision_digits() as i64))
}

#[derive(Clone)]
pub struct Real(BigFloat);

impl Real {
    fn wrap(x: BigFloat) -> Real {
        Real(x)
    }

    pub fn zero() -> Real {
        Real::from_i64(0)
    }

    pub fn one() -> Real {
        Real::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Real {
        Real(BigFloat::from_i64(v, precision_bits()))
    }

    pub fn from_f64(v: f64) -> Real {
        Real(BigFloat::from_f64(v, precision_bits()))
    }

    pub fn from_rational(r: &Rational) -> Real {
        let p = precision_bits();
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(1)) => Real(BigFloat::from_i64(n, p)),
            (Some(n), Some(d)) => Real(BigFloat::from_i64(n, p).div(&BigFloat::from_i64(d, p), p, RM)),
            _ => {
                let n = Real::parse(&r.numer().to_string()).expect("integer literal");
                let d = Real::parse(&r.denom().to_string()).expect("integer literal");
                &n / &d
            }
        }
    }

    /// Parses a decimal literal such as `0.5`, `-1e-3` or `42`.
    pub fn parse(s: &str) -> Result<Real> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        let ok = t.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
        if !ok {
            return Err(Error::Parse(format!("not a decimal number: {t}")));
        }
        let x = CONSTS.with(|cc| BigFloat::parse(t, Radix::Dec, precision_bits(), RM, &mut cc.borrow_mut()));
        if x.is_nan() || x.is_inf() {
            return Err(Error::Parse(format!("not a finite decimal number: {t}")));
        }
        Ok(Real(x))
    }

    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        // Round to 20 significant digits first; f64 parsing handles the rest.
        let short = self.0.clone();
        let s = CONSTS.with(|cc| short.format(Radix::Dec, RM, &mut cc.borrow_mut()));
        s.ok().and_then(|s| s.parse::<f64>().ok()).unwrap_or(f64::NAN)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.0.is_nan() || self.0.is_inf())
    }

    pub fn is_negative(&self) -> bool {
        !self.0.is_zero() && self.0.is_negative()
    }

    pub fn abs(&self) -> Real {
        Real(self.0.abs())
    }

    pub fn sqrt(&self) -> Real {
        Real(self.0.sqrt(precision_bits(), RM))
    }

    /// `self^e` for a real exponent; `self` must be positive.
    pub fn pow(&self, e: &Real) -> Real {
        CONSTS.with(|cc| Real(self.0.pow(&e.0, precision_bits(), RM, &mut cc.borrow_mut())))
    }

    pub fn powi(&self, e: i64) -> Real {
        let p = precision_bits();
        let pos = self.0.powi(e.unsigned_abs() as usize, p, RM);
        if e < 0 {
            Real(pos.reciprocal(p, RM))
        } else {
            Real(pos)
        }
    }

    pub fn ln(&self) -> Real {
        CONSTS.with(|cc| Real(self.0.ln(precision_bits(), RM, &mut cc.borrow_mut())))
    }

    pub fn max(&self, other: &Real) -> Real {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Decimal rendering in scientific notation with the working precision.
    pub fn to_decimal(&self) -> String {
        if self.0.is_zero() {
            return "0".into();
        }
        let mut x = self.0.clone();
        let _ = x.set_precision(precision_bits(), RM);
        CONSTS
            .with(|cc| x.format(Radix::Dec, RM, &mut cc.borrow_mut()))
            .unwrap_or_else(|_| "NaN".into())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal())
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                Real::wrap(self.0.$method(&rhs.0, precision_bits(), RM))
            }
        }
        impl $tr for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.clone().neg())
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.neg())
    }
}

impl std::iter::Sum for Real {
    fn sum<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::zero(), |a, b| &a + &b)
    }
}

/// Converts an exact rational to `Real`, rejecting non-finite results.
pub fn rational_to_real(r: &Rational) -> Real {
    if r.is_zero() {
        return Real::zero();
    }
    let x = Real::from_rational(r);
    debug_assert!(x.is_finite() && (x.is_negative() == r.is_negative()));
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_precision_is_fifty_digits() {
        assert!(precision_bits() >= 166);
        let third = &Real::one() / &Real::from_i64(3);
        let back = &third * &Real::from_i64(3);
        let err = (&back - &Real::one()).abs();
        assert!(err < Real::parse("1e-48").unwrap());
    }

    #[test]
    fn parse_and_convert() {
        let x = Real::parse("0.75").unwrap();
        assert_eq!(x.to_f64(), 0.75);
        assert!(Real::parse("abc").is_err());
        assert!(Real::parse("").is_err());
    }

    #[test]
    fn real_powers() {
        let q = Real::parse("0.5").unwrap();
        assert_eq!(q.powi(-2).to_f64(), 4.0);
        let r = q.pow(&Real::parse("2.5").unwrap()).to_f64();
        assert!((r - 0.5f64.powf(2.5)).abs() < 1e-15);
    }
}
