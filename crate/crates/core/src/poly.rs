//! Dense univariate polynomials over the rationals.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Coefficients stored from the constant term up; trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints<I: Into<BigInt>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        Poly::new(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// `y^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        Poly { coeffs }
    }

    /// `(a + b·y)^k`.
    pub fn binomial_power(a: &BigRational, b: &BigRational, k: usize) -> Self {
        let lin = Poly::new(vec![a.clone(), b.clone()]);
        let mut acc = Poly::constant(BigRational::one());
        for _ in 0..k {
            acc = &acc * &lin;
        }
        acc
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    /// Coefficient of `y^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Poly::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    /// Multiplies by `y^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Horner evaluation.
    pub fn eval(&self, y: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * y + c)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    /// `p(y + c)`, by repeated synthetic division.
    pub fn taylor_shift(&self, c: &BigRational) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for k in (i..n - 1).rev() {
                let t = &a[k + 1] * c;
                a[k] += t;
            }
        }
        Poly::new(a)
    }

    /// First `terms` coefficients of the power series `self / den` at zero.
    pub fn series_div(&self, den: &Poly, terms: usize) -> Result<Vec<BigRational>> {
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return Err(Error::Numeric("series division by a series vanishing at 0".into()));
        }
        let inv = d0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(terms);
        for k in 0..terms {
            let mut acc = self.coeff(k);
            for (i, o) in out.iter().enumerate() {
                let dk = k - i;
                if dk < den.coeffs.len() {
                    acc -= o * &den.coeffs[dk];
                }
            }
            out.push(acc * &inv);
        }
        Ok(out)
    }

    /// Truncates to terms of degree `< terms`.
    pub fn truncate(&self, terms: usize) -> Self {
        Poly::new(self.coeffs.iter().take(terms).cloned().collect())
    }

    /// Product truncated to degree `< terms`.
    pub fn mul_trunc(&self, other: &Poly, terms: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(terms);
        let mut out = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Poly) -> Poly {
        let terms = self.coeffs.len() + rhs.coeffs.len();
        self.mul_trunc(rhs, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn arithmetic() {
        let p = Poly::from_ints([1, 1]);
        let sq = &p * &p;
        assert_eq!(sq, Poly::from_ints([1, 2, 1]));
        assert_eq!(&sq - &sq, Poly::zero());
        assert_eq!(sq.eval(&rat(1, 2)), rat(9, 4));
        assert_eq!(sq.derivative(), Poly::from_ints([2, 2]));
        assert_eq!(Poly::binomial_power(&rat(1, 1), &rat(1, 1), 3), Poly::from_ints([1, 3, 3, 1]));
    }

    #[test]
    fn shift() {
        // (y+1)^2 shifted by −1 is y^2.
        let p = Poly::from_ints([1, 2, 1]);
        assert_eq!(p.taylor_shift(&rat(-1, 1)), Poly::monomial(2));
        let q = Poly::from_ints([3, 0, 0, 2]);
        let shifted = q.taylor_shift(&rat(2, 3));
        for x in [rat(0, 1), rat(5, 7), rat(-3, 2)] {
            assert_eq!(shifted.eval(&x), q.eval(&(x.clone() + rat(2, 3))));
        }
    }

    #[test]
    fn division() {
        // 1/(1 − y) = 1 + y + y² + …
        let s = Poly::constant(rat(1, 1))
            .series_div(&Poly::from_ints([1, -1]), 5)
            .unwrap();
        assert!(s.iter().all(|c| c == &rat(1, 1)));
        assert!(Poly::monomial(1).series_div(&Poly::monomial(1), 3).is_err());
    }
}
