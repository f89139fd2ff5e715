use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{AltError, Result};
use crate::scalar::{Rational, Scalar};

/// A polynomial stored as ascending monomial coefficients.
///
/// The trailing coefficient is nonzero unless the polynomial is identically
/// zero, in which case `coeffs` is empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensePoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> DensePoly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^power`.
    pub fn monomial(c: S, power: usize) -> Self {
        let mut coeffs = vec![S::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| S::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn lowest_power(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiplication by `x^p`.
    pub fn shift_up(&self, p: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![S::zero(); p];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Division by `x^p`; fails when a coefficient below `x^p` is nonzero.
    pub fn shift_down(&self, p: usize) -> Result<Self> {
        if let Some(pos) = self.coeffs.iter().take(p).position(|c| !c.is_zero()) {
            return Err(AltError::InvalidParameters(format!(
                "cannot divide by x^{p}: coefficient of x^{pos} is {}",
                self.coeffs[pos]
            )));
        }
        Ok(Self::new(self.coeffs.iter().skip(p).cloned().collect()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * S::from_usize(i))
                .collect(),
        )
    }

    /// `(1 - x)^m` expanded.
    pub fn one_minus_x_pow(m: usize) -> Self {
        let base = Self::new(vec![S::one(), -S::one()]);
        (0..m).fold(Self::constant(S::one()), |acc, _| &acc * &base)
    }

    /// `(x - 1)^m` expanded.
    pub fn x_minus_one_pow(m: usize) -> Self {
        let base = Self::new(vec![-S::one(), S::one()]);
        (0..m).fold(Self::constant(S::one()), |acc, _| &acc * &base)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DensePoly<T> {
        DensePoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_f64(&self) -> DensePoly<f64> {
        self.map(|c| c.to_f64())
    }

    /// Largest absolute coefficient difference against `other`.
    pub fn max_abs_diff(&self, other: &DensePoly<S>) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|i| (self.coeff(i) - other.coeff(i)).to_f64().abs())
            .fold(0.0, f64::max)
    }
}

impl DensePoly<f64> {
    /// `sum |c_i| |x|^i`, the scale against which Horner rounding is judged.
    pub fn abs_eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * ax + c.abs())
    }
}

impl DensePoly<Rational> {
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.to_f64().eval(&x)
    }
}

impl<'a, S: Scalar> Add for &'a DensePoly<S> {
    type Output = DensePoly<S>;
    fn add(self, rhs: &'a DensePoly<S>) -> DensePoly<S> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a, S: Scalar> Sub for &'a DensePoly<S> {
    type Output = DensePoly<S>;
    fn sub(self, rhs: &'a DensePoly<S>) -> DensePoly<S> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a, S: Scalar> Mul for &'a DensePoly<S> {
    type Output = DensePoly<S>;
    fn mul(self, rhs: &'a DensePoly<S>) -> DensePoly<S> {
        if self.is_zero() || rhs.is_zero() {
            return DensePoly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        DensePoly::new(out)
    }
}

impl<S: Scalar> Neg for &DensePoly<S> {
    type Output = DensePoly<S>;
    fn neg(self) -> DensePoly<S> {
        self.map(|c| -c.clone())
    }
}

impl<S: Scalar> fmt::Display for DensePoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = DensePoly<Rational>;

    #[test]
    fn trims_and_reports_degree() {
        let p = Q::from_i64(&[0, 4, -5, 0, 0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.lowest_power(), Some(1));
        assert!(Q::from_i64(&[0, 0]).is_zero());
        assert_eq!(Q::zero().degree(), None);
    }

    #[test]
    fn arithmetic() {
        let a = Q::from_i64(&[2, -3]);
        let b = Q::from_i64(&[0, 1]);
        assert_eq!(&a * &b, Q::from_i64(&[0, 2, -3]));
        assert_eq!(&a + &b, Q::from_i64(&[2, -2]));
        assert_eq!(&a - &a, Q::zero());
        assert_eq!(Q::one_minus_x_pow(2), Q::from_i64(&[1, -2, 1]));
        assert_eq!(Q::x_minus_one_pow(3), Q::from_i64(&[-1, 3, -3, 1]));
    }

    #[test]
    fn shifts() {
        let p = Q::from_i64(&[0, 4, -5]);
        assert_eq!(p.shift_down(1).unwrap(), Q::from_i64(&[4, -5]));
        assert!(p.shift_down(2).is_err());
        assert_eq!(p.shift_up(2), Q::from_i64(&[0, 0, 0, 4, -5]));
        assert_eq!(p.derivative(), Q::from_i64(&[4, -10]));
    }

    #[test]
    fn horner_eval() {
        let p = DensePoly::<f64>::from_i64(&[3, -12, 10]);
        assert_eq!(p.eval(&1.0), 1.0);
        assert_eq!(p.eval(&0.0), 3.0);
    }
}
