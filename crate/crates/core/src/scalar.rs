//! Scalar arithmetic shared by the exact and floating code paths.
//!
//! Every polynomial routine in this crate is generic over [`Scalar`]. The two
//! implementations are `f64` and [`Rational`] (arbitrary precision). Weighted
//! integrals over `[0, 1]` are not rational in general: they are rational
//! multiples of a Beta constant `B(a0, b0)` with `a0, b0` in `(0, 1]`. The
//! associated [`Scalar::Value`] type carries those results, which for rationals
//! is [`ExactValue`] and for floats is plain `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{AltError, Result};

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Result type of a weighted integral.
    type Value: Clone
        + fmt::Debug
        + fmt::Display
        + PartialEq
        + Add<Output = Self::Value>
        + Sub<Output = Self::Value>
        + Neg<Output = Self::Value>
        + Send
        + Sync;

    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_integer(&self) -> bool;
    /// The representative of `self` modulo 1 lying in `(0, 1]`.
    fn fract_unit(&self) -> Self;

    fn lift(c: Self) -> Self::Value;
    fn scale(v: &Self::Value, c: &Self) -> Self::Value;
    fn value_zero() -> Self::Value;
    fn pi() -> Self::Value;
    /// `B(a0, b0)` for reduced arguments `0 < a0, b0 <= 1`.
    fn beta_unit(a0: &Self, b0: &Self) -> Self::Value;
    fn value_to_f64(v: &Self::Value) -> f64;

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }
}

impl Scalar for f64 {
    type Value = f64;
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_integer(&self) -> bool {
        self.fract() == 0.0
    }
    fn fract_unit(&self) -> Self {
        self - self.ceil() + 1.0
    }
    fn lift(c: Self) -> f64 {
        c
    }
    fn scale(v: &f64, c: &Self) -> f64 {
        v * c
    }
    fn value_zero() -> f64 {
        0.0
    }
    fn pi() -> f64 {
        std::f64::consts::PI
    }
    fn beta_unit(a0: &Self, b0: &Self) -> f64 {
        if *a0 == 1.0 {
            1.0 / b0
        } else if *b0 == 1.0 {
            1.0 / a0
        } else if *a0 == 0.5 && *b0 == 0.5 {
            std::f64::consts::PI
        } else {
            use statrs::function::gamma::gamma;
            gamma(*a0) * gamma(*b0) / gamma(a0 + b0)
        }
    }
    fn value_to_f64(v: &f64) -> f64 {
        *v
    }
}

impl Scalar for Rational {
    type Value = ExactValue;
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn is_integer(&self) -> bool {
        Rational::is_integer(self)
    }
    fn fract_unit(&self) -> Self {
        self - self.ceil() + Rational::one()
    }
    fn lift(c: Self) -> ExactValue {
        ExactValue::from_term(Unit::One, c)
    }
    fn scale(v: &ExactValue, c: &Self) -> ExactValue {
        v.scale(c)
    }
    fn value_zero() -> ExactValue {
        ExactValue::zero()
    }
    fn pi() -> ExactValue {
        ExactValue::pi()
    }
    fn beta_unit(a0: &Self, b0: &Self) -> ExactValue {
        let one = Rational::one();
        if *a0 == one {
            ExactValue::from_term(Unit::One, b0.recip())
        } else if *b0 == one {
            ExactValue::from_term(Unit::One, a0.recip())
        } else {
            let half = Rational::from_ratio(1, 2);
            if *a0 == half && *b0 == half {
                ExactValue::pi()
            } else {
                let (lo, hi) = if a0 <= b0 { (a0, b0) } else { (b0, a0) };
                ExactValue::from_term(Unit::Beta(lo.clone(), hi.clone()), Rational::one())
            }
        }
    }
    fn value_to_f64(v: &ExactValue) -> f64 {
        v.to_f64()
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Converts a finite float to the rational it represents exactly.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

/// Parses `"3"`, `"-1/2"`, `"0.25"` or `"1e-3"` into an exact rational.
///
/// Decimal strings are read as the decimal fraction they spell, not as the
/// nearest binary float.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(all);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// Falling factorial `a (a - 1) ... (a - m + 1)`; the empty product is 1.
pub fn falling_factorial<S: Scalar>(a: &S, m: usize) -> S {
    let mut acc = S::one();
    let mut term = a.clone();
    for _ in 0..m {
        acc = acc * term.clone();
        term = term - S::one();
    }
    acc
}

/// Rising product `a (a + 1) ... (a + m - 1)`.
pub fn rising_factorial<S: Scalar>(a: &S, m: usize) -> S {
    let mut acc = S::one();
    let mut term = a.clone();
    for _ in 0..m {
        acc = acc * term.clone();
        term = term + S::one();
    }
    acc
}

pub fn factorial<S: Scalar>(m: usize) -> S {
    falling_factorial(&S::from_usize(m), m)
}

/// Generalized binomial coefficient `(z)_j / j!` with the falling factorial.
pub fn binomial<S: Scalar>(z: &S, j: usize) -> S {
    falling_factorial(z, j) / factorial::<S>(j)
}

/// Number of unit steps between `a` and its reduced representative.
fn unit_steps<S: Scalar>(a: &S, a0: &S) -> usize {
    (a.clone() - a0.clone()).to_f64().round() as usize
}

/// The Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)` for `a, b > 0`.
///
/// Both arguments are reduced into `(0, 1]` by integer steps so that all
/// Gamma ratios become products of scalar factors; only `B(a0, b0)` remains.
pub fn beta<S: Scalar>(a: &S, b: &S) -> Result<S::Value> {
    if !(*a > S::zero()) || !(*b > S::zero()) {
        return Err(AltError::Divergent(format!(
            "Beta function B({a}, {b}) needs positive arguments"
        )));
    }
    let a0 = a.fract_unit();
    let b0 = b.fract_unit();
    let mut coeff = S::one();
    // B(a0 + j + 1, b) = B(a0 + j, b) (a0 + j) / (a0 + j + b)
    let mut cur = a0.clone();
    for _ in 0..unit_steps(a, &a0) {
        coeff = coeff * cur.clone() / (cur.clone() + b.clone());
        cur = cur + S::one();
    }
    let mut cur = b0.clone();
    for _ in 0..unit_steps(b, &b0) {
        coeff = coeff * cur.clone() / (cur.clone() + a0.clone());
        cur = cur + S::one();
    }
    Ok(S::scale(&S::beta_unit(&a0, &b0), &coeff))
}

/// Symbolic constant multiplying a rational coefficient in an [`ExactValue`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unit {
    One,
    Pi,
    /// `B(a0, b0)` with `0 < a0 <= b0 < 1`, not both one half.
    Beta(Rational, Rational),
}

impl Unit {
    fn to_f64(&self) -> f64 {
        match self {
            Unit::One => 1.0,
            Unit::Pi => std::f64::consts::PI,
            Unit::Beta(a, b) => f64::beta_unit(&rational_to_f64(a), &rational_to_f64(b)),
        }
    }
}

/// A finite sum of rational multiples of symbolic units.
///
/// Terms are kept sorted by unit with zero coefficients removed, so derived
/// equality is mathematical equality over the units.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactValue {
    terms: Vec<(Unit, Rational)>,
}

impl ExactValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(r: Rational) -> Self {
        Self::from_term(Unit::One, r)
    }

    pub fn pi() -> Self {
        Self::from_term(Unit::Pi, Rational::one())
    }

    pub fn from_term(unit: Unit, coeff: Rational) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            Self {
                terms: vec![(unit, coeff)],
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Unit, Rational)] {
        &self.terms
    }

    /// The coefficient of `unit`, zero when absent.
    pub fn coeff(&self, unit: &Unit) -> Rational {
        self.terms
            .iter()
            .find(|(u, _)| u == unit)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// `Some(q)` when the value is the rational number `q`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(Unit::One, c)] => Some(c.clone()),
            _ => None,
        }
    }

    /// `Some(q)` when the value is `q * pi`.
    pub fn as_pi_multiple(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(Unit::Pi, c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(u, q)| (u.clone(), q * c)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(u, c)| rational_to_f64(c) * u.to_f64())
            .sum()
    }

    fn merge(mut self, other: &ExactValue, sign: bool) -> Self {
        for (unit, c) in &other.terms {
            let c = if sign { c.clone() } else { -c.clone() };
            match self.terms.binary_search_by(|(u, _)| u.cmp(unit)) {
                Ok(pos) => {
                    let sum = &self.terms[pos].1 + c;
                    if sum.is_zero() {
                        self.terms.remove(pos);
                    } else {
                        self.terms[pos].1 = sum;
                    }
                }
                Err(pos) => self.terms.insert(pos, (unit.clone(), c)),
            }
        }
        self
    }
}

impl Add for ExactValue {
    type Output = ExactValue;
    fn add(self, rhs: ExactValue) -> ExactValue {
        self.merge(&rhs, true)
    }
}

impl Sub for ExactValue {
    type Output = ExactValue;
    fn sub(self, rhs: ExactValue) -> ExactValue {
        self.merge(&rhs, false)
    }
}

impl Neg for ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        ExactValue::zero().merge(&self, false)
    }
}

impl PartialOrd for ExactValue {
    /// Ordered by numeric value; only meaningful for display and tests.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (unit, c)) in self.terms.iter().enumerate() {
            let (neg, abs) = (c.is_negative(), c.abs());
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match unit {
                Unit::One => write!(f, "{abs}")?,
                Unit::Pi if abs.is_one() => write!(f, "pi")?,
                Unit::Pi => write!(f, "{abs}*pi")?,
                Unit::Beta(a, b) => write!(f, "{abs}*B({a},{b})")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn falling_factorial_convention() {
        assert_eq!(falling_factorial(&5.0, 2), 20.0);
        assert_eq!(falling_factorial(&q(7, 3), 0), q(1, 1));
        assert_eq!(falling_factorial(&q(1, 2), 1), q(1, 2));
        // rising would give 5*6 = 30
        assert_eq!(falling_factorial(&q(5, 1), 2), q(20, 1));
        assert_eq!(falling_factorial(&q(-1, 2), 2), q(3, 4));
    }

    #[test]
    fn beta_reduces_to_units() {
        assert_eq!(
            beta(&q(1, 1), &q(1, 1)).unwrap(),
            ExactValue::rational(q(1, 1))
        );
        assert_eq!(
            beta(&q(2, 1), &q(1, 1)).unwrap(),
            ExactValue::rational(q(1, 2))
        );
        assert_eq!(beta(&q(1, 2), &q(1, 2)).unwrap(), ExactValue::pi());
        // B(3/2, 1/2) = pi / 2
        assert_eq!(
            beta(&q(3, 2), &q(1, 2)).unwrap(),
            ExactValue::from_term(Unit::Pi, q(1, 2))
        );
        // B(1/3, 5/3) stays symbolic
        let v = beta(&q(1, 3), &q(5, 3)).unwrap();
        assert!(v.as_rational().is_none());
        let expect = statrs::function::beta::beta(1.0 / 3.0, 5.0 / 3.0);
        assert!((v.to_f64() - expect).abs() < 1e-13 * expect);
    }

    #[test]
    fn beta_rejects_nonpositive() {
        assert!(beta(&q(0, 1), &q(1, 1)).is_err());
        assert!(beta(&0.5, &-0.5).is_err());
    }

    #[test]
    fn float_beta_matches_statrs() {
        for &(a, b) in &[
            (0.5, 0.5),
            (2.5, 1.5),
            (7.0, 3.5),
            (0.3, 11.2),
            (12.5, 12.5),
        ] {
            let mine = beta(&a, &b).unwrap();
            let reference = statrs::function::beta::beta(a, b);
            assert!((mine - reference).abs() < 1e-13 * reference, "{a} {b}");
        }
    }

    #[test]
    fn exact_value_algebra() {
        let a = ExactValue::pi().scale(&q(1, 2)) + ExactValue::rational(q(1, 3));
        let b = a.clone() - ExactValue::rational(q(1, 3));
        assert_eq!(b.as_pi_multiple(), Some(q(1, 2)));
        assert!((a.clone() - a).is_zero());
        assert_eq!(
            format!("{}", ExactValue::pi().scale(&q(-5, 16))),
            "-5/16*pi"
        );
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3"), Some(q(3, 1)));
        assert_eq!(parse_rational("-1/2"), Some(q(-1, 2)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(q(-3, 2)));
        assert_eq!(parse_rational("1e-3"), Some(q(1, 1000)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
    }
}
