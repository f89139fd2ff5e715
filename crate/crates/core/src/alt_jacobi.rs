//! Alternative Jacobi polynomials `P_nk^(a,b)` on `[0, 1]`.
//!
//! For a fixed degree `n` the family is indexed downward `k = n, n-1, ..., 0`;
//! member `k` has degree `n` and lowest power `x^k`, and the members are
//! orthogonal under `x^a (1-x)^b`. This module also provides the classical
//! shifted Jacobi polynomials and the direct family `P_nk, k >= n`, which the
//! reciprocity identities relate to the alternative one.

use serde::Serialize;

use crate::error::{AltError, Result};
use crate::poly::DensePoly;
use crate::scalar::{beta as beta_fn, binomial, factorial, falling_factorial, Scalar};

/// Identifies one polynomial `P_nk^(alpha, beta)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyParams<S> {
    pub alpha: S,
    pub beta: S,
    pub n: usize,
    pub k: usize,
}

/// Parameter regime of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `alpha > -1, beta > -1`: every member is normalizable.
    Normalizable,
    /// `-2 < alpha <= -1, beta > -1`: the `k = 0` member is singular.
    Marginal,
    /// Outside both; coefficients exist but no orthogonality is claimed.
    Unsupported,
}

impl<S: Scalar> PolyParams<S> {
    pub fn new(alpha: S, beta: S, n: usize, k: usize) -> Self {
        Self { alpha, beta, n, k }
    }

    pub fn with_k(&self, k: usize) -> Self {
        Self { k, ..self.clone() }
    }

    pub fn to_f64(&self) -> PolyParams<f64> {
        PolyParams::new(self.alpha.to_f64(), self.beta.to_f64(), self.n, self.k)
    }

    pub fn regime(&self) -> Regime {
        let minus_one = -S::one();
        let minus_two = -S::from_i64(2);
        if !(self.beta > minus_one) {
            Regime::Unsupported
        } else if self.alpha > minus_one {
            Regime::Normalizable
        } else if self.alpha > minus_two {
            Regime::Marginal
        } else {
            Regime::Unsupported
        }
    }

    fn check_finite(&self) -> Result<()> {
        if self.alpha.to_f64().is_finite() && self.beta.to_f64().is_finite() {
            Ok(())
        } else {
            Err(AltError::InvalidParameters(format!(
                "alpha = {}, beta = {} must be finite",
                self.alpha, self.beta
            )))
        }
    }

    fn check_member(&self) -> Result<()> {
        if self.k > self.n {
            return Err(AltError::InvalidParameters(format!(
                "k = {} exceeds n = {}",
                self.k, self.n
            )));
        }
        self.check_finite()
    }
}

/// Monomial coefficients of `P_nk^(alpha, beta)` from the explicit expansion
/// `1/(n-k)! sum_j (-1)^j (n-k)_j / j! (a+n+k+1)_(n-k-j) (b+n-k)_j x^(k+j) (1-x)^(n-k-j)`
/// with falling factorials. `k = n + 1` yields the zero polynomial.
pub fn ajp_coefficients<S: Scalar>(p: &PolyParams<S>) -> Result<DensePoly<S>> {
    if p.k == p.n + 1 {
        p.check_finite()?;
        return Ok(DensePoly::zero());
    }
    p.check_member()?;
    let m = p.n - p.k;
    let m_s = S::from_usize(m);
    let upper = p.alpha.clone() + S::from_usize(p.n + p.k + 1);
    let lower = p.beta.clone() + m_s.clone();
    let mut acc = DensePoly::zero();
    for j in 0..=m {
        let mut c =
            binomial(&m_s, j) * falling_factorial(&upper, m - j) * falling_factorial(&lower, j);
        if j % 2 == 1 {
            c = -c;
        }
        let term = DensePoly::one_minus_x_pow(m - j)
            .shift_up(p.k + j)
            .scale(&c);
        acc = &acc + &term;
    }
    Ok(acc.scale(&(S::one() / factorial::<S>(m))))
}

/// Horner evaluation of [`ajp_coefficients`].
pub fn ajp_eval<S: Scalar>(p: &PolyParams<S>, x: &S) -> Result<S> {
    Ok(ajp_coefficients(p)?.eval(x))
}

/// Evaluates `x^k P_(n-k)^(a+2k+1, b)(1-2x)` through the classical Jacobi
/// recurrence, avoiding the cancellation of the monomial form.
pub fn ajp_eval_stable(p: &PolyParams<f64>, x: f64) -> Result<f64> {
    p.check_member()?;
    let inner = jacobi_eval(
        p.n - p.k,
        p.alpha + 2.0 * p.k as f64 + 1.0,
        p.beta,
        1.0 - 2.0 * x,
    );
    Ok(x.powi(p.k as i32) * inner)
}

/// Builds `P_nk` for `k = n, n-1, ..., up_to_k` with the downward three-term
/// recurrence applied to coefficient vectors. Index `i` of the result holds
/// `k = n - i`.
pub fn ajp_recurrence<S: Scalar>(p: &PolyParams<S>, up_to_k: usize) -> Result<Vec<DensePoly<S>>> {
    p.check_finite()?;
    let n = p.n;
    if up_to_k > n {
        return Err(AltError::InvalidParameters(format!(
            "up_to_k = {up_to_k} exceeds n = {n}"
        )));
    }
    let a = p.alpha.clone();
    let b = p.beta.clone();
    let s = |v: usize| S::from_usize(v);

    let mut out = vec![DensePoly::monomial(S::one(), n)];
    if n == 0 || up_to_k == n {
        return Ok(out);
    }
    let top = DensePoly::new(vec![
        a.clone() + s(2 * n),
        -(a.clone() + b.clone() + s(2 * n + 1)),
    ])
    .shift_up(n - 1);
    out.push(top);

    for k in (up_to_k + 1..n).rev() {
        let next = recurrence_step(p, k, &out[n - k], &out[n - k - 1])?;
        out.push(next);
    }
    Ok(out)
}

/// One downward step: `P_n,k-1` from `cur = P_nk` and `prev = P_n,k+1`.
///
/// The `x^-1` term is applied as a coefficient shift, so `cur` must have a
/// zero constant term.
pub(crate) fn recurrence_step<S: Scalar>(
    p: &PolyParams<S>,
    k: usize,
    cur: &DensePoly<S>,
    prev: &DensePoly<S>,
) -> Result<DensePoly<S>> {
    let n = p.n;
    let a = p.alpha.clone();
    let b = p.beta.clone();
    let s = |v: usize| S::from_usize(v);
    if !cur.coeff(0).is_zero() {
        return Err(AltError::RecurrenceCorruption {
            k,
            detail: cur.coeff(0).to_string(),
        });
    }
    let a2k = a.clone() + s(2 * k);
    let lead = s(n - k + 1) * (a.clone() + s(n + k + 1)) * (a2k.clone() + s(2));
    if lead.is_zero() {
        return Err(AltError::InvalidParameters(format!(
            "recurrence divisor vanishes at k = {k}"
        )));
    }
    let outer = a2k.clone() + S::one();
    let inv_x = cur
        .shift_down(1)?
        .scale(&(outer.clone() * a2k.clone() * (a2k.clone() + s(2))));
    let constant = outer
        * ((a.clone() + s(2 * n + 2)) * (a.clone() + b.clone() + s(2 * k + 1))
            + s(2 * (n - k) * (n - k + 1)));
    let back = (a.clone() + b.clone() + s(n + k + 2)) * (b + s(n - k)) * a2k;
    let next = &(&inv_x - &cur.scale(&constant)) - &prev.scale(&back);
    Ok(next.scale(&(S::one() / lead)))
}

fn check_weight_beta<S: Scalar>(beta: &S) -> Result<()> {
    if beta.clone() > -S::one() {
        Ok(())
    } else {
        Err(AltError::Divergent(format!(
            "beta = {beta} makes the weight non-integrable at x = 1"
        )))
    }
}

/// Squared norm `h_nk` under `x^a (1-x)^b`.
///
/// Valid whenever the square is integrable, i.e. `a + 2k > -1`; this includes
/// the `k >= 1` members of marginal families.
pub fn ajp_norm_h<S: Scalar>(p: &PolyParams<S>) -> Result<S::Value> {
    p.check_member()?;
    check_weight_beta(&p.beta)?;
    let s = |v: usize| S::from_usize(v);
    if !(p.alpha.clone() + s(2 * p.k) > -S::one()) {
        return Err(AltError::NonNormalizable(format!(
            "P_{}{} with alpha = {} is not square-integrable",
            p.n, p.k, p.alpha
        )));
    }
    let (n, k) = (p.n, p.k);
    let base = beta_fn(
        &(p.alpha.clone() + s(n + k + 2)),
        &(p.beta.clone() + s(n - k + 1)),
    )?;
    let ratio = (0..=n - k).fold(S::one(), |acc, j| {
        acc * (p.alpha.clone() + p.beta.clone() + s(n + k + 2 + j))
    });
    let denom = (p.alpha.clone() + s(2 * k + 1)) * factorial::<S>(n - k);
    Ok(S::scale(&base, &(ratio / denom)))
}

/// `int_0^1 x^a (1-x)^b P_nk dx`.
pub fn ajp_single_integral<S: Scalar>(p: &PolyParams<S>) -> Result<S::Value> {
    p.check_member()?;
    check_weight_beta(&p.beta)?;
    let s = |v: usize| S::from_usize(v);
    if !(p.alpha.clone() + s(p.k) > -S::one()) {
        return Err(AltError::NonNormalizable(format!(
            "P_{}{} with alpha = {} is not integrable",
            p.n, p.k, p.alpha
        )));
    }
    let base = beta_fn(
        &(p.alpha.clone() + s(p.k + 1)),
        &(p.beta.clone() + s(p.n - p.k + 1)),
    )?;
    Ok(S::scale(&base, &binomial(&s(p.n), p.k)))
}

/// Shifted Jacobi polynomial `P_m^(a,b)(1 - 2x)` as coefficients in `x`,
/// from the terminating series; any real `a`, `b` are accepted.
pub fn shifted_jacobi_coefficients<S: Scalar>(m: usize, a: &S, b: &S) -> DensePoly<S> {
    let ms = S::from_usize(m);
    let top = ms.clone() + a.clone();
    let bottom = ms + b.clone();
    let mut acc = DensePoly::zero();
    for s in 0..=m {
        let mut c = binomial(&top, m - s) * binomial(&bottom, s);
        if s % 2 == 1 {
            c = -c;
        }
        let term = DensePoly::one_minus_x_pow(m - s).shift_up(s).scale(&c);
        acc = &acc + &term;
    }
    acc
}

pub fn shifted_jacobi<S: Scalar>(m: usize, a: &S, b: &S, x: &S) -> S {
    shifted_jacobi_coefficients(m, a, b).eval(x)
}

/// Classical `P_m^(a,b)(y)` by the three-term recurrence, with a series
/// fallback when a recurrence divisor vanishes.
pub fn jacobi_eval(m: usize, a: f64, b: f64, y: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * y;
    for j in 2..=m {
        let j = j as f64;
        let c = 2.0 * j + a + b;
        let d = 2.0 * j * (j + a + b) * (c - 2.0);
        if d == 0.0 {
            return shifted_jacobi(m, &a, &b, &(0.5 * (1.0 - y)));
        }
        let p2 = ((c - 1.0) * (c * (c - 2.0) * y + a * a - b * b) * p1
            - 2.0 * (j + a - 1.0) * (j + b - 1.0) * c * p0)
            / d;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Derivative of `P_m^(a,b)(y)` with respect to `y`.
pub fn jacobi_derivative(m: usize, a: f64, b: f64, y: f64) -> f64 {
    if m == 0 {
        0.0
    } else {
        0.5 * (m as f64 + a + b + 1.0) * jacobi_eval(m - 1, a + 1.0, b + 1.0, y)
    }
}

/// Direct polynomials `P_nk = x^n P_(k-n)^(a+2n, b)(1-2x)` for `k >= n`.
pub fn direct_coefficients<S: Scalar>(p: &PolyParams<S>) -> Result<DensePoly<S>> {
    if p.k < p.n {
        return Err(AltError::InvalidParameters(format!(
            "direct polynomial needs k >= n, got n = {}, k = {}",
            p.n, p.k
        )));
    }
    p.check_finite()?;
    let a = p.alpha.clone() + S::from_usize(2 * p.n);
    Ok(shifted_jacobi_coefficients(p.k - p.n, &a, &p.beta).shift_up(p.n))
}

/// Squared norm `d_nk` of the direct polynomials.
pub fn direct_norm_d<S: Scalar>(p: &PolyParams<S>) -> Result<S::Value> {
    let (n, k) = (p.n, p.k);
    if k < n {
        return Err(AltError::InvalidParameters(format!(
            "direct norm needs k >= n, got n = {n}, k = {k}"
        )));
    }
    p.check_finite()?;
    check_weight_beta(&p.beta)?;
    let s = |v: usize| S::from_usize(v);
    if !(p.alpha.clone() + s(2 * n) > -S::one()) {
        return Err(AltError::NonNormalizable(format!(
            "direct P_{n}{k} with alpha = {} is not square-integrable",
            p.alpha
        )));
    }
    let base = beta_fn(
        &(p.alpha.clone() + s(k + n + 1)),
        &(p.beta.clone() + s(k - n + 1)),
    )?;
    // Gamma(a+b+2k+1) / Gamma(a+b+k+n+1) with the 1/(a+b+2k+1) factor absorbed
    let ratio = (k + n + 1..=2 * k).fold(S::one(), |acc, j| {
        acc * (p.alpha.clone() + p.beta.clone() + s(j))
    });
    Ok(S::scale(&base, &(ratio / factorial::<S>(k - n))))
}

/// `P_nk = x^k P_0,n-k^(a+2k+1, b)`.
pub fn ajp_via_shifted_jacobi<S: Scalar>(p: &PolyParams<S>) -> Result<DensePoly<S>> {
    p.check_member()?;
    let a = p.alpha.clone() + S::from_usize(2 * p.k + 1);
    Ok(shifted_jacobi_coefficients(p.n - p.k, &a, &p.beta).shift_up(p.k))
}

fn reciprocal_params<S: Scalar>(p: &PolyParams<S>) -> (usize, S, S) {
    // direct index pair (-(n+1), -(k+1)) with parameters (-a-b, b)
    let m = p.n - p.k;
    let a = -p.alpha.clone() - p.beta.clone() - S::from_usize(2 * p.n + 2);
    (m, a, p.beta.clone())
}

/// Coefficients of `x^-1 P_(-(n+1), -(k+1))^(-a-b, b)(1/x)` expanded as a
/// polynomial in `x`; equals `P_nk^(a,b)`.
pub fn ajp_via_reciprocity<S: Scalar>(p: &PolyParams<S>) -> Result<DensePoly<S>> {
    p.check_member()?;
    let (m, a, b) = reciprocal_params(p);
    let top = S::from_usize(m) + a;
    let bottom = S::from_usize(m) + b;
    let mut acc = DensePoly::zero();
    for s in 0..=m {
        let mut c = binomial(&top, m - s) * binomial(&bottom, s);
        if s % 2 == 1 {
            c = -c;
        }
        acc = &acc + &DensePoly::x_minus_one_pow(m - s).scale(&c);
    }
    Ok(acc.shift_up(p.k))
}

/// Pointwise form of the reciprocity relation at `x != 0`, evaluating the
/// negative-index direct polynomial at `y = 1/x` through the Jacobi series.
pub fn ajp_reciprocity_eval<S: Scalar>(p: &PolyParams<S>, x: &S) -> Result<S> {
    p.check_member()?;
    if x.is_zero() {
        return Err(AltError::InvalidParameters(
            "reciprocity evaluation needs x != 0".into(),
        ));
    }
    let (m, a, b) = reciprocal_params(p);
    let y = S::one() / x.clone();
    // y^-(n+1) = x^(n+1), then the leading x^-1
    let mut xp = S::one();
    for _ in 0..p.n {
        xp = xp * x.clone();
    }
    Ok(xp * shifted_jacobi(m, &a, &b, &y))
}

pub fn ajp_derivative<S: Scalar>(p: &PolyParams<S>) -> Result<DensePoly<S>> {
    Ok(ajp_coefficients(p)?.derivative())
}

/// `P' - k x^-1 P + (a+b+n+k+2) P_(n-1,k)^(a+1,b+1)`; zero for `k < n`.
pub fn dx_residual<S: Scalar>(p: &PolyParams<S>) -> Result<DensePoly<S>> {
    if p.k >= p.n {
        return Err(AltError::InvalidParameters(format!(
            "differentiation formula needs k < n, got n = {}, k = {}",
            p.n, p.k
        )));
    }
    let poly = ajp_coefficients(p)?;
    let s = |v: usize| S::from_usize(v);
    let over_x = if p.k == 0 {
        DensePoly::zero()
    } else {
        poly.shift_down(1)?.scale(&s(p.k))
    };
    let lowered = ajp_coefficients(&PolyParams::new(
        p.alpha.clone() + S::one(),
        p.beta.clone() + S::one(),
        p.n - 1,
        p.k,
    ))?;
    let factor = p.alpha.clone() + p.beta.clone() + s(p.n + p.k + 2);
    Ok(&(&poly.derivative() - &over_x) + &lowered.scale(&factor))
}

/// Left side minus right side of the second-order equation satisfied by
/// `P_nk`, as a polynomial.
pub fn ode_residual_poly<S: Scalar>(p: &PolyParams<S>) -> Result<DensePoly<S>> {
    let y = ajp_coefficients(p)?;
    let s = |v: usize| S::from_usize(v);
    let (a, b) = (p.alpha.clone(), p.beta.clone());
    let d1 = y.derivative();
    let d2 = d1.derivative();
    let x2_one_minus_x = DensePoly::new(vec![S::zero(), S::zero(), S::one(), -S::one()]);
    let first = DensePoly::new(vec![
        S::zero(),
        a.clone() + s(2),
        -(a.clone() + b.clone() + s(3)),
    ]);
    let zeroth = DensePoly::new(vec![
        s(p.k) * (a.clone() + s(p.k + 1)),
        -(s(p.n) * (a + b + s(p.n + 2))),
    ]);
    let lhs = &(&x2_one_minus_x * &d2) + &(&first * &d1);
    Ok(&lhs - &(&zeroth * &y))
}

pub fn ode_residual<S: Scalar>(p: &PolyParams<S>, x: &S) -> Result<S> {
    Ok(ode_residual_poly(p)?.eval(x))
}

fn x_one_minus_x<S: Scalar>() -> DensePoly<S> {
    DensePoly::new(vec![S::zero(), S::one(), -S::one()])
}

/// Residual of the differential-difference relation linking `P_nk` and
/// `P_n,k+1`:
/// `(a+2k+2) x(1-x) P' = [k(a+2k+2) - (na + (n-k)b + n^2 + k^2 + 2n) x] P_nk
///   - (a+b+n+k+2)(b+n-k) x P_n,k+1`.
pub fn diff_diff_upper_residual<S: Scalar>(p: &PolyParams<S>) -> Result<DensePoly<S>> {
    p.check_member()?;
    let (n, k) = (p.n, p.k);
    let s = |v: usize| S::from_usize(v);
    let (a, b) = (p.alpha.clone(), p.beta.clone());
    let poly = ajp_coefficients(p)?;
    let next = ajp_coefficients(&p.with_k(k + 1))?;
    let lead = a.clone() + s(2 * k + 2);
    let lhs = (&x_one_minus_x::<S>() * &poly.derivative()).scale(&lead);
    let slope = s(n) * a.clone() + s(n - k) * b.clone() + s(n * n + k * k + 2 * n);
    let bracket = DensePoly::new(vec![s(k) * lead, -slope]);
    let coupling = (a + b.clone() + s(n + k + 2)) * (b + s(n - k));
    let rhs = &(&bracket * &poly) - &next.shift_up(1).scale(&coupling);
    Ok(&lhs - &rhs)
}

/// Residual of the relation linking `P_nk` and `P_n,k-1` (`k >= 1`):
/// `(a+2k) x(1-x) P' = [-(a+2k)(a+k+1) + ((n+1)(a+b+n+1) + (a+k)(a+b+k) + a + 2k) x] P_nk
///   + (n-k+1)(a+n+k+1) x P_n,k-1`.
pub fn diff_diff_lower_residual<S: Scalar>(p: &PolyParams<S>) -> Result<DensePoly<S>> {
    p.check_member()?;
    let (n, k) = (p.n, p.k);
    if k == 0 {
        return Err(AltError::InvalidParameters(
            "lower differential-difference relation needs k >= 1".into(),
        ));
    }
    let s = |v: usize| S::from_usize(v);
    let (a, b) = (p.alpha.clone(), p.beta.clone());
    let poly = ajp_coefficients(p)?;
    let prev = ajp_coefficients(&p.with_k(k - 1))?;
    let lead = a.clone() + s(2 * k);
    let lhs = (&x_one_minus_x::<S>() * &poly.derivative()).scale(&lead);
    let constant = -(lead.clone() * (a.clone() + s(k + 1)));
    let slope = s(n + 1) * (a.clone() + b.clone() + s(n + 1))
        + (a.clone() + s(k)) * (a.clone() + b + s(k))
        + lead;
    let bracket = DensePoly::new(vec![constant, slope]);
    let coupling = s(n - k + 1) * (a + s(n + k + 1));
    let rhs = &(&bracket * &poly) + &prev.shift_up(1).scale(&coupling);
    Ok(&lhs - &rhs)
}

/// The weight `x^a (1-x)^b` on `[0, 1]`.
pub fn weight_eval(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(AltError::InvalidParameters(format!(
            "x = {x} lies outside [0, 1]"
        )));
    }
    if (x == 0.0 && alpha < 0.0) || (x == 1.0 && beta < 0.0) {
        return Err(AltError::Divergent(format!(
            "weight x^{alpha} (1-x)^{beta} is infinite at x = {x}"
        )));
    }
    Ok(x.powf(alpha) * (1.0 - x).powf(beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactValue, Rational};

    type Q = DensePoly<Rational>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn pq(a: i64, b: i64, n: usize, k: usize) -> PolyParams<Rational> {
        PolyParams::new(q(a, 1), q(b, 1), n, k)
    }

    fn rat(v: ExactValue) -> Rational {
        v.as_rational().expect("rational value")
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(
            ajp_coefficients(&pq(3, 7, 2, 2)).unwrap(),
            Q::from_i64(&[0, 0, 1])
        );
        assert_eq!(
            ajp_coefficients(&pq(0, 0, 1, 0)).unwrap(),
            Q::from_i64(&[2, -3])
        );
        assert_eq!(
            ajp_coefficients(&pq(0, 0, 2, 0)).unwrap(),
            Q::from_i64(&[3, -12, 10])
        );
        assert_eq!(
            ajp_coefficients(&pq(0, 0, 2, 1)).unwrap(),
            Q::from_i64(&[0, 4, -5])
        );
        assert!(ajp_coefficients(&pq(0, 0, 2, 3)).unwrap().is_zero());
        assert!(ajp_coefficients(&pq(0, 0, 2, 4)).is_err());
    }

    #[test]
    fn lowest_coefficient_matches_gamma_ratio() {
        // Gamma(a+n+k+2) / ((n-k)! Gamma(a+2k+2)) = rising(a+2k+2, n-k) / (n-k)!
        for (a, b) in [(q(0, 1), q(0, 1)), (q(1, 2), q(3, 2)), (q(-3, 2), q(-1, 2))] {
            for n in 0..7 {
                for k in 0..=n {
                    let p = PolyParams::new(a.clone(), b.clone(), n, k);
                    let c = ajp_coefficients(&p).unwrap();
                    let expect = crate::scalar::rising_factorial(
                        &(a.clone() + q(2 * k as i64 + 2, 1)),
                        n - k,
                    ) / factorial::<Rational>(n - k);
                    assert_eq!(c.lowest_power(), Some(k));
                    assert_eq!(c.degree(), Some(n));
                    assert_eq!(c.coeff(k), expect);
                }
            }
        }
    }

    #[test]
    fn evaluation_examples() {
        let half = 0.5;
        assert_eq!(
            ajp_eval(&PolyParams::new(0.3, 2.0, 1, 1), &half).unwrap(),
            0.5
        );
        assert_eq!(ajp_eval(&pq(0, 0, 1, 0), &q(0, 1)).unwrap(), q(2, 1));
        assert_eq!(ajp_eval(&pq(0, 0, 2, 0), &q(1, 1)).unwrap(), q(1, 1));
    }

    #[test]
    fn recurrence_examples() {
        let start = ajp_recurrence(&pq(0, 0, 1, 0), 0).unwrap();
        assert_eq!(start, vec![Q::from_i64(&[0, 1]), Q::from_i64(&[2, -3])]);
        let two = ajp_recurrence(&pq(0, 0, 2, 0), 0).unwrap();
        assert_eq!(two[1], Q::from_i64(&[0, 4, -5]));
        assert_eq!(two[2], Q::from_i64(&[3, -12, 10]));
        let partial = ajp_recurrence(&pq(0, 0, 4, 0), 2).unwrap();
        assert_eq!(partial.len(), 3);
    }

    #[test]
    fn sentinel_step_reproduces_start_value() {
        // a k = n step from (x^n, P_n,n+1 = 0) gives the hard-coded P_n,n-1
        for n in 1..6 {
            let p = PolyParams::new(q(1, 2), q(2, 1), n, 0);
            let pnn = ajp_coefficients(&p.with_k(n)).unwrap();
            let sentinel = ajp_coefficients(&p.with_k(n + 1)).unwrap();
            let step = recurrence_step(&p, n, &pnn, &sentinel).unwrap();
            assert_eq!(step, ajp_recurrence(&p, n - 1).unwrap()[1]);
        }
    }

    #[test]
    fn recurrence_detects_corrupted_constant_term() {
        let p = pq(0, 0, 3, 0);
        let corrupted = Q::from_i64(&[1, 4, -5]);
        let err = recurrence_step(&p, 2, &corrupted, &Q::from_i64(&[0, 0, 0, 1])).unwrap_err();
        assert!(matches!(err, AltError::RecurrenceCorruption { k: 2, .. }));
        assert!(ajp_recurrence(&p, 4).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(rat(ajp_norm_h(&pq(0, 0, 1, 1)).unwrap()), q(1, 3));
        assert_eq!(rat(ajp_norm_h(&pq(0, 0, 1, 0)).unwrap()), q(1, 1));
        for n in 0..8 {
            assert_eq!(
                rat(ajp_norm_h(&pq(0, 0, n, n)).unwrap()),
                q(1, 2 * n as i64 + 1)
            );
        }
        assert!(matches!(
            ajp_norm_h(&pq(-1, 0, 3, 0)),
            Err(AltError::NonNormalizable(_))
        ));
        // marginal k >= 1 members are fine
        assert_eq!(rat(ajp_norm_h(&pq(-1, 0, 3, 2)).unwrap()), q(1, 4));
    }

    #[test]
    fn single_integral_examples() {
        assert_eq!(rat(ajp_single_integral(&pq(0, 0, 2, 0)).unwrap()), q(1, 3));
        assert_eq!(rat(ajp_single_integral(&pq(0, 0, 1, 1)).unwrap()), q(1, 2));
        assert_eq!(rat(ajp_single_integral(&pq(0, 0, 0, 0)).unwrap()), q(1, 1));
        assert!(ajp_single_integral(&pq(-1, 0, 2, 0)).is_err());
    }

    #[test]
    fn direct_norm_examples() {
        assert_eq!(rat(direct_norm_d(&pq(0, 0, 1, 1)).unwrap()), q(1, 3));
        assert_eq!(rat(direct_norm_d(&pq(0, 0, 0, 1)).unwrap()), q(1, 3));
        assert_eq!(rat(direct_norm_d(&pq(0, 0, 0, 0)).unwrap()), q(1, 1));
        assert!(direct_norm_d(&pq(0, 0, 2, 1)).is_err());
        // Chebyshev weight, constant polynomial
        let v = direct_norm_d(&PolyParams::new(q(-1, 2), q(-1, 2), 0, 0)).unwrap();
        assert_eq!(v, ExactValue::pi());
    }

    #[test]
    fn shifted_jacobi_examples() {
        assert_eq!(shifted_jacobi(0, &q(3, 1), &q(-7, 2), &q(2, 9)), q(1, 1));
        for xi in 0..=8 {
            let x = q(xi, 8);
            assert_eq!(
                shifted_jacobi(1, &q(1, 1), &q(0, 1), &x),
                q(2, 1) - q(3, 1) * x.clone()
            );
            // reciprocity route with negative parameter
            let y = q(1, 1) / x.clone().max(q(1, 16));
            let via = shifted_jacobi(1, &q(-4, 1), &q(0, 1), &y) * x.clone().max(q(1, 16));
            let xx = x.max(q(1, 16));
            assert_eq!(via, q(2, 1) - q(3, 1) * xx);
        }
    }

    #[test]
    fn jacobi_recurrence_matches_series() {
        for &(a, b) in &[(0.0, 0.0), (2.5, -0.5), (1.5, 0.5), (-0.5, -0.5)] {
            for m in 0..10 {
                for i in 0..=10 {
                    let y = -1.0 + 0.2 * i as f64;
                    let series = shifted_jacobi(m, &a, &b, &(0.5 * (1.0 - y)));
                    let rec = jacobi_eval(m, a, b, y);
                    assert!((series - rec).abs() < 1e-9 * series.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(ajp_derivative(&pq(0, 0, 1, 0)).unwrap(), Q::from_i64(&[-3]));
        assert!(dx_residual(&pq(0, 0, 1, 0)).unwrap().is_zero());
        assert_eq!(
            ajp_derivative(&pq(0, 0, 4, 4)).unwrap(),
            Q::from_i64(&[0, 0, 0, 4])
        );
        assert_eq!(
            ajp_derivative(&pq(0, 0, 2, 1)).unwrap(),
            Q::from_i64(&[4, -10])
        );
        assert!(dx_residual(&pq(0, 0, 2, 2)).is_err());
    }

    #[test]
    fn ode_examples() {
        assert!(ode_residual_poly(&pq(5, 2, 4, 4)).unwrap().is_zero());
        assert!(
            ode_residual(&PolyParams::new(0.0, 0.0, 1, 0), &0.37)
                .unwrap()
                .abs()
                < 1e-15
        );
        assert_eq!(ode_residual(&pq(0, 0, 2, 1), &q(1, 1)).unwrap(), q(0, 1));
    }

    #[test]
    fn differential_difference_relations_hold() {
        for (a, b) in [
            (q(0, 1), q(0, 1)),
            (q(2, 1), q(1, 1)),
            (q(-1, 1), q(0, 1)),
            (q(1, 3), q(-1, 2)),
        ] {
            for n in 0..6 {
                for k in 0..=n {
                    let p = PolyParams::new(a.clone(), b.clone(), n, k);
                    assert!(diff_diff_upper_residual(&p).unwrap().is_zero(), "{p:?}");
                    if k >= 1 {
                        assert!(diff_diff_lower_residual(&p).unwrap().is_zero(), "{p:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight_eval(0.0, 0.0, 0.3).unwrap(), 1.0);
        assert_eq!(weight_eval(1.0, 0.0, 0.5).unwrap(), 0.5);
        assert!((weight_eval(-0.5, -0.5, 0.5).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(
            weight_eval(-0.5, 0.0, 0.0),
            Err(AltError::Divergent(_))
        ));
        assert!(matches!(
            weight_eval(0.0, -0.5, 1.0),
            Err(AltError::Divergent(_))
        ));
        assert_eq!(weight_eval(0.0, 0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn regimes() {
        assert_eq!(pq(0, 0, 1, 0).regime(), Regime::Normalizable);
        assert_eq!(pq(-1, 0, 1, 0).regime(), Regime::Marginal);
        assert_eq!(
            PolyParams::new(q(-3, 2), q(-1, 2), 1, 0).regime(),
            Regime::Marginal
        );
        assert_eq!(pq(-2, 0, 1, 0).regime(), Regime::Unsupported);
        assert_eq!(pq(0, -1, 1, 0).regime(), Regime::Unsupported);
    }

    #[test]
    fn stable_evaluation_matches_exact() {
        for n in 0..9 {
            for k in 0..=n {
                let p = PolyParams::new(q(3, 2), q(1, 2), n, k);
                let c = ajp_coefficients(&p).unwrap();
                for i in 0..=16 {
                    let x = q(i, 16);
                    let exact = c.eval(&x).to_f64();
                    let stable = ajp_eval_stable(&p.to_f64(), x.to_f64()).unwrap();
                    assert!((exact - stable).abs() < 1e-11 * exact.abs().max(1.0));
                }
            }
        }
    }
}
