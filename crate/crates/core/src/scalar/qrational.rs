use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::QPoly;
use super::real::{unit_roundoff, Real};
use super::Rational;
use crate::error::{Error, Result};

/// An element of the field Q(q), kept in canonical form: the denominator is
/// monic and coprime to the numerator, and zero is `0/1`. Equality is
/// structural.
#[derive(Clone, PartialEq, Eq)]
pub struct QRational {
    num: QPoly,
    den: QPoly,
}

impl Hash for QRational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

/// Reduces `num/den` to canonical form.
pub fn qr_normalize(num: QPoly, den: QPoly) -> Result<QRational> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if num.is_zero() {
        return Ok(QRational::zero());
    }
    let v = num.valuation().unwrap().min(den.valuation().unwrap());
    let (mut num, mut den) = (num.shift_down(v), den.shift_down(v));
    if den.degree() == Some(0) {
        let inv = den.coeff(0).recip();
        return Ok(QRational { num: num.scale(&inv), den: QPoly::one() });
    }
    // After removing the common power of q, a monomial numerator is a
    // nonzero constant and shares no factor with the denominator.
    if !num.is_monomial() {
        let g = QPoly::gcd(&num, &den);
        if g.degree().unwrap_or(0) > 0 {
            num = num.div_rem(&g)?.0;
            den = den.div_rem(&g)?.0;
        }
    }
    let inv = den.leading().unwrap().recip();
    Ok(QRational { num: num.scale(&inv), den: den.scale(&inv) })
}

impl QRational {
    pub fn zero() -> Self {
        QRational { num: QPoly::zero(), den: QPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(r: Rational) -> Self {
        QRational { num: QPoly::constant(r), den: QPoly::one() }
    }

    pub fn from_poly(p: QPoly) -> Self {
        QRational { num: p, den: QPoly::one() }
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        if k >= 0 {
            QRational { num: QPoly::monomial(Rational::one(), k as usize), den: QPoly::one() }
        } else {
            QRational { num: QPoly::one(), den: QPoly::monomial(Rational::one(), (-k) as usize) }
        }
    }

    /// `c * q^k`.
    pub fn term(c: i64, k: i64) -> Self {
        &QRational::from_int(c) * &QRational::q_pow(k)
    }

    /// `1 - q^k`, `k > 0`.
    pub fn one_minus_q_pow(k: i64) -> Self {
        &QRational::one() - &QRational::q_pow(k)
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Power of q in the denominator when the denominator is `q^k`.
    fn den_q_power(&self) -> Option<usize> {
        if self.den.is_monomial() {
            self.den.degree()
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<QRational> {
        qr_normalize(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Result<QRational> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = QRational::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Substitutes `q -> q^k` (`k >= 1`).
    pub fn inflate(&self, k: usize) -> QRational {
        qr_normalize(self.num.inflate(k), self.den.inflate(k)).expect("nonzero denominator")
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval_rational(x) / d)
    }

    /// Numeric value at `q0`; see [`qr_eval`].
    pub fn eval(&self, q0: &Real) -> Result<Real> {
        qr_eval_ratio(&self.num, &self.den, q0)
    }

    pub fn eval_f64(&self, q0: f64) -> Result<f64> {
        self.eval(&Real::from_f64(q0)).map(|x| x.to_f64())
    }
}

/// Evaluates `x` at `q0` with Horner's rule on numerator and denominator.
pub fn qr_eval(x: &QRational, q0: &Real) -> Result<Real> {
    x.eval(q0)
}

/// Evaluates an unreduced quotient `num/den` at `q0`. A denominator that is
/// zero to within the working precision is reported as a pole.
pub fn qr_eval_ratio(num: &QPoly, den: &QPoly, q0: &Real) -> Result<Real> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let d = den.eval_real(q0);
    let scale = den.abs_eval_real(q0);
    let tiny = &(&scale * &unit_roundoff()) * &Real::from_i64(16);
    if d.abs() <= tiny {
        return Err(Error::Pole);
    }
    Ok(&num.eval_real(q0) / &d)
}

impl Default for QRational {
    fn default() -> Self {
        QRational::zero()
    }
}

impl From<i64> for QRational {
    fn from(v: i64) -> Self {
        QRational::from_int(v)
    }
}

impl Add for &QRational {
    type Output = QRational;
    fn add(self, rhs: &QRational) -> QRational {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return qr_normalize(&self.num + &rhs.num, self.den.clone()).expect("nonzero denominator");
        }
        if let (Some(a), Some(b)) = (self.den_q_power(), rhs.den_q_power()) {
            let k = a.max(b);
            let num = &self.num.shift_up(k - a) + &rhs.num.shift_up(k - b);
            return qr_normalize(num, QPoly::monomial(Rational::one(), k)).expect("nonzero denominator");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        qr_normalize(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Sub for &QRational {
    type Output = QRational;
    fn sub(self, rhs: &QRational) -> QRational {
        self + &(-rhs)
    }
}

impl Neg for &QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        QRational { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &QRational {
    type Output = QRational;
    fn mul(self, rhs: &QRational) -> QRational {
        if self.is_zero() || rhs.is_zero() {
            return QRational::zero();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return rhs.clone();
        }
        qr_normalize(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

/// Panics on division by zero; use [`QRational::inv`] for a checked inverse.
impl Div for &QRational {
    type Output = QRational;
    fn div(self, rhs: &QRational) -> QRational {
        qr_normalize(&self.num * &rhs.den, &self.den * &rhs.num).expect("division by zero")
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QRational {
            type Output = QRational;
            fn $m(self, rhs: QRational) -> QRational { (&self).$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        -&self
    }
}

impl fmt::Debug for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `(num)/(den)`, both as sparse `c*q^k` term lists.
impl fmt::Display for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("bad rational coefficient `{t}`"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse("zero denominator in coefficient".into()));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Parses `c*q^k + ...`. Also accepts bare `c`, `q^k`, `q` and `c*q`.
pub fn parse_poly(s: &str) -> Result<QPoly> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut acc = QPoly::zero();
    for term in t.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in `{t}`")));
        }
        let (coeff, power) = match term.split_once('*') {
            Some((c, p)) => (parse_rational(c)?, parse_q_power(p)?),
            None if term.contains('q') => {
                let (sign, rest) = match term.strip_prefix('-') {
                    Some(r) => (-Rational::one(), r),
                    None => (Rational::one(), term),
                };
                (sign, parse_q_power(rest)?)
            }
            None => (parse_rational(term)?, 0),
        };
        acc = &acc + &QPoly::monomial(coeff, power);
    }
    Ok(acc)
}

fn parse_q_power(s: &str) -> Result<usize> {
    let t = s.trim();
    if t == "q" {
        return Ok(1);
    }
    t.strip_prefix("q^")
        .and_then(|e| e.trim().parse::<usize>().ok())
        .ok_or_else(|| Error::Parse(format!("bad power of q `{t}`")))
}

impl FromStr for QRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<QRational> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix('(') {
            if let Some(idx) = rest.find(")/(") {
                let num = parse_poly(&rest[..idx])?;
                let den_part = rest[idx + 3..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{t}`")))?;
                let den = parse_poly(den_part)?;
                return qr_normalize(num, den).map_err(|_| Error::Parse("zero denominator".into()));
            }
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{t}`")))?;
            return Ok(QRational::from_poly(parse_poly(inner)?));
        }
        Ok(QRational::from_poly(parse_poly(t)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn normalize_examples() {
        // (1 - q^2)/(1 - q) = 1 + q, checked against long division.
        let r = qr_normalize(p(&[1, 0, -1]), p(&[1, -1])).unwrap();
        let (quot, rem) = p(&[1, 0, -1]).div_rem(&p(&[1, -1])).unwrap();
        assert!(rem.is_zero());
        assert_eq!(r, QRational::from_poly(quot));
        assert_eq!(qr_normalize(p(&[0, 0, 0, 1]), p(&[0, 0, 0, 1])).unwrap(), QRational::one());
        assert_eq!(qr_normalize(p(&[]), p(&[1, -1])).unwrap(), QRational::zero());
        assert_eq!(qr_normalize(p(&[1]), p(&[])), Err(Error::DivisionByZero));
    }

    #[test]
    fn normalize_is_scale_invariant() {
        let c = p(&[2, 5, -1]);
        let a = qr_normalize(&p(&[1, 3]) * &c, &p(&[0, 4, 1]) * &c).unwrap();
        let b = qr_normalize(p(&[1, 3]), p(&[0, 4, 1])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn evaluation_examples() {
        let q0 = Real::parse("0.5").unwrap();
        assert_eq!(QRational::one_minus_q_pow(2).eval(&q0).unwrap().to_f64(), 0.75);
        let x = &QRational::q_pow(1) - &QRational::q_pow(-1);
        assert_eq!(x.eval(&q0).unwrap().to_f64(), -1.5);
        // Unreduced (1-q^2)/(1-q) has a pole at 1; its reduced form gives 2.
        let one = Real::one();
        assert_eq!(qr_eval_ratio(&p(&[1, 0, -1]), &p(&[1, -1]), &one), Err(Error::Pole));
        let reduced = qr_normalize(p(&[1, 0, -1]), p(&[1, -1])).unwrap();
        assert_eq!(qr_eval(&reduced, &one).unwrap().to_f64(), 2.0);
    }

    #[test]
    fn display_and_parse() {
        let x = &QRational::one_minus_q_pow(2) / &QRational::q_pow(3);
        let s = x.to_string();
        assert_eq!(s, "(1*q^0 + -1*q^2)/(1*q^3)");
        assert_eq!(s.parse::<QRational>().unwrap(), x);
        assert_eq!("q^2".parse::<QRational>().unwrap(), QRational::q_pow(2));
        assert_eq!("-3/2".parse::<QRational>().unwrap(), &QRational::from_int(-3) / &QRational::from_int(2));
        assert!("(1*q^0)/(0)".parse::<QRational>().is_err());
        assert!("1*z^2".parse::<QRational>().is_err());
    }
}
