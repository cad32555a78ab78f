use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::qrational::QRational;
use super::real::Real;
use crate::error::{Error, Result};

/// A polynomial in the auxiliary variable `u` with coefficients in Q(q).
/// Index `j` of the coefficient vector is the power of `u`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<QRational>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(QRational::one())
    }

    pub fn constant(c: QRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * u^j`.
    pub fn monomial(c: QRational, j: usize) -> Self {
        let mut coeffs = vec![QRational::zero(); j + 1];
        coeffs[j] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<QRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[QRational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> QRational {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The constant coefficient, when the polynomial does not involve `u`.
    pub fn as_constant(&self) -> Option<QRational> {
        match self.coeffs.len() {
            0 => Some(QRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &QRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![QRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UPoly { coeffs }
    }

    /// Substitutes `u -> c u`.
    pub fn scale_variable(&self, c: &QRational) -> Self {
        let mut pow = QRational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            out.push(x * &pow);
            pow = &pow * c;
        }
        Self::from_coeffs(out)
    }

    pub fn eval(&self, u0: &QRational) -> QRational {
        let mut acc = QRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * u0) + c;
        }
        acc
    }

    /// Evaluates every coefficient at `q0` and the polynomial at `u0`.
    pub fn eval_real(&self, q0: &Real, u0: &Real) -> Result<Real> {
        let mut acc = Real::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * u0) + &c.eval(q0)?;
        }
        Ok(acc)
    }
}

/// Interpolating polynomial through `points` (Newton divided differences).
/// The result has degree below the number of points.
pub fn upoly_interpolate(points: &[(QRational, QRational)]) -> Result<UPoly> {
    for i in 0..points.len() {
        for j in 0..i {
            if points[i].0 == points[j].0 {
                return Err(Error::DuplicateAbscissa(i));
            }
        }
    }
    let n = points.len();
    let mut dd: Vec<QRational> = points.iter().map(|p| p.1.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = &points[i].0 - &points[i - level].0;
            dd[i] = &num / &den;
        }
    }
    // Horner on the Newton form.
    let mut acc = UPoly::zero();
    for i in (0..n).rev() {
        let x_i = UPoly::from_coeffs(vec![-&points[i].0, QRational::one()]);
        acc = &(&acc * &x_i) + &UPoly::constant(dd[i].clone());
    }
    Ok(acc)
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter().map(|c| c.to_string())).finish()
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..len).map(|j| &self.coeff(j) + &rhs.coeff(j)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        self + &(-rhs)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![QRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        UPoly::from_coeffs(coeffs)
    }
}
