//! Dense univariate polynomials in `q` over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::real::Real;
use super::Rational;
use crate::error::{Error, Result};

/// A polynomial `c_0 + c_1 q + ... + c_d q^d`. Trailing zero coefficients are
/// never stored, so the zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * q^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        QPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    /// Builds a polynomial from integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Exponent of the lowest nonzero term.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// True when the polynomial has exactly one nonzero term.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
    }

    /// Multiplies by `q^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    /// Divides by `q^k`; the caller guarantees `k <= valuation`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.is_zero() || self.valuation().unwrap() >= k);
        if self.is_zero() {
            return Self::zero();
        }
        QPoly { coeffs: self.coeffs[k..].to_vec() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Substitutes `q -> c q`, i.e. multiplies the k-th coefficient by `c^k`.
    pub fn scale_variable(&self, c: &Rational) -> Self {
        let mut pow = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            out.push(x * &pow);
            pow = &pow * c;
        }
        Self::from_coeffs(out)
    }

    /// Substitutes `q -> q^k`.
    pub fn inflate(&self, k: usize) -> Self {
        assert!(k >= 1);
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        QPoly { coeffs }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division; fails on a zero divisor.
    pub fn div_rem(&self, divisor: &QPoly) -> Result<(QPoly, QPoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[i + j] = &rem[i + j] - &c * d;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((QPoly::from_coeffs(quot), QPoly::from_coeffs(rem)))
    }

    /// Monic greatest common divisor. `gcd(0, 0) = 0`.
    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let mut x = a.monic();
        let mut y = b.monic();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r.monic();
        }
        x
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation at a real point.
    pub fn eval_real(&self, x: &Real) -> Real {
        let mut acc = Real::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Real::from_rational(c);
        }
        acc
    }

    /// `sum |c_k| |x|^k`, a scale for judging cancellation in [`Self::eval_real`].
    pub fn abs_eval_real(&self, x: &Real) -> Real {
        let ax = x.abs();
        let mut acc = Real::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &ax) + &Real::from_rational(&c.abs());
        }
        acc
    }

    pub fn pow(&self, e: u32) -> QPoly {
        let mut acc = QPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Sparse `c*q^k` terms joined by ` + `, lowest power first; `0` for zero.
impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*q^{}", c, k)?;
        }
        Ok(())
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut coeffs = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            coeffs[i] = &coeffs[i] + c;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + a * b;
                }
            }
        }
        QPoly::from_coeffs(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn long_division() {
        // (1 - q^2) = (1 - q)(1 + q)
        let a = QPoly::from_ints(&[1, 0, -1]);
        let b = QPoly::from_ints(&[1, -1]);
        let (quot, rem) = a.div_rem(&b).unwrap();
        assert_eq!(quot, QPoly::from_ints(&[1, 1]));
        assert!(rem.is_zero());
    }

    #[test]
    fn gcd_is_monic() {
        let a = QPoly::from_ints(&[2, 0, -2]);
        let b = QPoly::from_ints(&[3, -3]);
        assert_eq!(QPoly::gcd(&a, &b), QPoly::from_ints(&[-1, 1]));
        assert!(QPoly::gcd(&QPoly::zero(), &QPoly::zero()).is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(QPoly::one().div_rem(&QPoly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn display_is_sparse() {
        let p = QPoly::from_ints(&[1, 0, -1]);
        assert_eq!(p.to_string(), "1*q^0 + -1*q^2");
        assert_eq!(QPoly::zero().to_string(), "0");
    }
}
