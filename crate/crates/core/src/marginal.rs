//! The two marginal systems: A-kind `A_nk = P_nk^(-1,0)` and T-kind
//! `T_nk = c_nk P_nk^(-3/2,-1/2)` with `c_nk = (n-k)! / (n-k-1/2)_(n-k)`.
//!
//! Each `k = 0` member is orthogonal to the others but not normalizable under
//! its weight. Its singular pairings are reported as divergent rather than
//! assigned a value.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::alt_jacobi::{ajp_coefficients, PolyParams};
use crate::error::{AltError, Result};
use crate::poly::DensePoly;
use crate::quad::{weighted_inner_product, weighted_integral};
use crate::scalar::{binomial, factorial, falling_factorial, ExactValue, Rational, Scalar};
use crate::table::{format_float, Table};

type QPoly = DensePoly<Rational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MarginalKind {
    A,
    T,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn qu(v: usize) -> Rational {
    Rational::from_usize(v)
}

impl MarginalKind {
    pub fn alpha(self) -> Rational {
        match self {
            Self::A => q(-1, 1),
            Self::T => q(-3, 2),
        }
    }

    pub fn beta(self) -> Rational {
        match self {
            Self::A => q(0, 1),
            Self::T => q(-1, 2),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::A => "A",
            Self::T => "T",
        }
    }

    pub fn weight_desc(self) -> &'static str {
        match self {
            Self::A => "x^-1",
            Self::T => "x^-3/2 (1-x)^-1/2",
        }
    }

    /// Factor relating the member to `P_nk^(alpha, beta)`.
    pub fn scale(self, n: usize, k: usize) -> Rational {
        match self {
            Self::A => Rational::one(),
            Self::T => {
                let m = n - k;
                factorial::<Rational>(m) / falling_factorial(&(qu(m) - q(1, 2)), m)
            }
        }
    }

    pub fn coefficients(self, n: usize, k: usize) -> Result<QPoly> {
        match self {
            Self::A => a_coefficients(n, k),
            Self::T => t_coefficients(n, k),
        }
    }

    /// Members `k = n, n-1, ..., 0` from the kind's own downward recurrence.
    pub fn recurrence(self, n: usize) -> Result<Vec<QPoly>> {
        match self {
            Self::A => a_recurrence(n),
            Self::T => t_recurrence(n),
        }
    }

    /// Closed-form `<M_nk, M_nl>` under the marginal weight.
    pub fn norm(self, n: usize, k: usize, l: usize) -> Result<ExactValue> {
        match self {
            Self::A => a_norm(n, k, l),
            Self::T => t_norm(n, k, l),
        }
    }

    pub fn single_integral(self, n: usize, k: usize) -> Result<ExactValue> {
        match self {
            Self::A => a_single_integral(n, k),
            Self::T => t_single_integral(n, k),
        }
    }

    /// `<M_nk, M_nl>` from the Beta-moment expansion.
    pub fn inner_product(self, n: usize, k: usize, l: usize) -> Result<ExactValue> {
        let p = self.coefficients(n, k)?;
        let r = self.coefficients(n, l)?;
        weighted_inner_product(&p, &r, &self.alpha(), &self.beta())
    }

    /// `int M_nk` under the marginal weight from the Beta-moment expansion.
    pub fn integral(self, n: usize, k: usize) -> Result<ExactValue> {
        weighted_integral(&self.coefficients(n, k)?, &self.alpha(), &self.beta())
    }

    /// Residual of the kind's second-order equation
    /// `x^2(1-x) y'' + x p(x) y' - q(x) y` as a polynomial.
    pub fn ode_residual(self, n: usize, k: usize) -> Result<QPoly> {
        let y = self.coefficients(n, k)?;
        let d1 = y.derivative();
        let d2 = d1.derivative();
        let (first, zeroth) = match self {
            // x(1 - 2x), k^2 - n(n+1) x
            Self::A => (
                QPoly::new(vec![q(0, 1), q(1, 1), q(-2, 1)]),
                QPoly::new(vec![qu(k * k), -qu(n * (n + 1))]),
            ),
            // x(1/2 - x), k(k - 1/2) - n^2 x
            Self::T => (
                QPoly::new(vec![q(0, 1), q(1, 2), q(-1, 1)]),
                QPoly::new(vec![qu(k) * (qu(k) - q(1, 2)), -qu(n * n)]),
            ),
        };
        let x2_one_minus_x = QPoly::from_i64(&[0, 0, 1, -1]);
        let lhs = &(&x2_one_minus_x * &d2) + &(&first * &d1);
        Ok(&lhs - &(&zeroth * &y))
    }
}

/// False exactly for the singular `k = 0` member.
pub fn is_normalizable(_kind: MarginalKind, k: usize) -> bool {
    k != 0
}

fn check_member(n: usize, k: usize) -> Result<()> {
    if k > n {
        return Err(AltError::InvalidParameters(format!(
            "k = {k} exceeds n = {n}"
        )));
    }
    Ok(())
}

fn check_pair(kind: MarginalKind, n: usize, k: usize, l: usize) -> Result<()> {
    check_member(n, k)?;
    check_member(n, l)?;
    if k == 0 && l == 0 {
        return Err(AltError::NonNormalizable(format!(
            "{}_{n}0 is not square-integrable under {}",
            kind.symbol(),
            kind.weight_desc()
        )));
    }
    Ok(())
}

/// `A_nk = sum_j (-1)^j C(n-k, j) C(n+k+j, n-k) x^(k+j)`.
pub fn a_coefficients(n: usize, k: usize) -> Result<QPoly> {
    check_member(n, k)?;
    let m = n - k;
    let mut coeffs = vec![Rational::zero(); n + 1];
    for j in 0..=m {
        let c = binomial(&qu(m), j) * binomial(&qu(n + k + j), m);
        coeffs[k + j] = if j % 2 == 1 { -c } else { c };
    }
    Ok(QPoly::new(coeffs))
}

fn inv_x(p: &QPoly, k: usize) -> Result<QPoly> {
    if !p.coeff(0).is_zero() {
        return Err(AltError::RecurrenceCorruption {
            k,
            detail: p.coeff(0).to_string(),
        });
    }
    p.shift_down(1)
}

/// `(2k+1)(n+k)(n-k+1) A_n,k-1 = 2k[(2k-1)(2k+1)/x - 2(n^2+k^2+n)] A_nk
///   - (2k-1)(n-k)(n+k+1) A_n,k+1`, started from `x^n` and
/// `(2n-1) x^(n-1) - 2n x^n`.
pub fn a_recurrence(n: usize) -> Result<Vec<QPoly>> {
    if n == 0 {
        return Err(AltError::InvalidParameters(
            "A-kind systems need n >= 1".into(),
        ));
    }
    let mut out = vec![
        QPoly::monomial(q(1, 1), n),
        QPoly::new(vec![qu(2 * n - 1), -qu(2 * n)]).shift_up(n - 1),
    ];
    for k in (1..n).rev() {
        let cur = &out[n - k];
        let prev = &out[n - k - 1];
        let (kq, nq) = (qu(k), qu(n));
        let two_k = q(2, 1) * kq.clone();
        let head = inv_x(cur, k)?.scale(&(two_k.clone() * qu((2 * k - 1) * (2 * k + 1))));
        let mid = cur.scale(&(two_k * q(2, 1) * qu(n * n + k * k + n)));
        let tail = prev.scale(&(qu((2 * k - 1) * (n - k) * (n + k + 1))));
        let lead = qu(2 * k + 1) * (nq.clone() + kq.clone()) * (nq - kq + q(1, 1));
        let next = &(&head - &mid) - &tail;
        out.push(next.scale(&(q(1, 1) / lead)));
    }
    Ok(out)
}

/// `delta_kl / (k + l)`.
pub fn a_norm(n: usize, k: usize, l: usize) -> Result<ExactValue> {
    check_pair(MarginalKind::A, n, k, l)?;
    Ok(if k == l {
        ExactValue::rational(q(1, 1) / qu(k + l))
    } else {
        ExactValue::zero()
    })
}

/// `1 / k`.
pub fn a_single_integral(n: usize, k: usize) -> Result<ExactValue> {
    check_member(n, k)?;
    if k == 0 {
        return Err(AltError::Divergent(
            "A_n0 is not integrable under x^-1".into(),
        ));
    }
    Ok(ExactValue::rational(q(1, 1) / qu(k)))
}

/// `m!!` with `0!! = (-1)!! = 1`.
pub fn double_factorial(m: i64) -> Result<BigInt> {
    if m < -1 {
        return Err(AltError::InvalidParameters(format!(
            "double factorial undefined for {m}"
        )));
    }
    let mut acc = BigInt::one();
    let mut j = m;
    while j > 1 {
        acc *= j;
        j -= 2;
    }
    Ok(acc)
}

fn double_factorial_q(m: i64) -> Result<Rational> {
    Ok(Rational::from_integer(double_factorial(m)?))
}

pub fn t_coefficients(n: usize, k: usize) -> Result<QPoly> {
    check_member(n, k)?;
    let kind = MarginalKind::T;
    let p = ajp_coefficients(&PolyParams::new(kind.alpha(), kind.beta(), n, k))?;
    Ok(p.scale(&kind.scale(n, k)))
}

/// `[2(n+k)-1][2(n-k)+1](4k+1) T_n,k-1
///   = (4k-1)[(4k-3)(4k+1)/x - 2(4n^2+4k^2-2k-1)] T_nk - 4(n-k)(n+k)(4k-3) T_n,k+1`,
/// started from `x^n` and `(4n-3) x^(n-1) - (4n-2) x^n`.
pub fn t_recurrence(n: usize) -> Result<Vec<QPoly>> {
    if n == 0 {
        return Err(AltError::InvalidParameters(
            "T-kind systems need n >= 1".into(),
        ));
    }
    let mut out = vec![
        QPoly::monomial(q(1, 1), n),
        QPoly::new(vec![qu(4 * n - 3), -qu(4 * n - 2)]).shift_up(n - 1),
    ];
    for k in (1..n).rev() {
        let cur = &out[n - k];
        let prev = &out[n - k - 1];
        let outer = qu(4 * k - 1);
        let head = inv_x(cur, k)?.scale(&(outer.clone() * qu((4 * k - 3) * (4 * k + 1))));
        let mid = cur.scale(&(outer * q(2, 1) * qu(4 * n * n + 4 * k * k - 2 * k - 1)));
        let tail = prev.scale(&qu(4 * (n - k) * (n + k) * (4 * k - 3)));
        let lead = qu(2 * (n + k) - 1) * qu(2 * (n - k) + 1) * qu(4 * k + 1);
        let next = &(&head - &mid) - &tail;
        out.push(next.scale(&(q(1, 1) / lead)));
    }
    Ok(out)
}

/// `delta_kl pi / (2(k+l)-1) (2n-k-l)!!/(2n-k-l-1)!! (2n+k+l-1)!!/(2n+k+l-2)!!`.
pub fn t_norm(n: usize, k: usize, l: usize) -> Result<ExactValue> {
    check_pair(MarginalKind::T, n, k, l)?;
    if k != l {
        return Ok(ExactValue::zero());
    }
    let (n, s) = (n as i64, (k + l) as i64);
    let ratio = double_factorial_q(2 * n - s)? / double_factorial_q(2 * n - s - 1)?
        * double_factorial_q(2 * n + s - 1)?
        / double_factorial_q(2 * n + s - 2)?
        / q(2 * s - 1, 1);
    Ok(ExactValue::pi().scale(&ratio))
}

/// `(2k-3)!!/(2k)!! 2n pi`.
pub fn t_single_integral(n: usize, k: usize) -> Result<ExactValue> {
    check_member(n, k)?;
    if k == 0 {
        return Err(AltError::Divergent(
            "T_n0 is not integrable under x^-3/2 (1-x)^-1/2".into(),
        ));
    }
    let k = k as i64;
    let ratio = double_factorial_q(2 * k - 3)? / double_factorial_q(2 * k)? * q(2 * n as i64, 1);
    Ok(ExactValue::pi().scale(&ratio))
}

/// `T_n(1 - 2x)` from `T_(j+1)(y) = 2y T_j(y) - T_(j-1)(y)`.
pub fn shifted_chebyshev(n: usize) -> QPoly {
    let y = QPoly::from_i64(&[1, -2]);
    let two_y = y.scale(&q(2, 1));
    let mut prev = QPoly::from_i64(&[1]);
    if n == 0 {
        return prev;
    }
    let mut cur = y;
    for _ in 1..n {
        let next = &(&two_y * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Samples `M_n1 .. M_nn` at `points` uniform abscissas on `[0, 1]`, both
/// endpoints included. Values are exact rationals rounded once to `f64`.
pub fn plot_data(kind: MarginalKind, n: usize, points: usize) -> Result<Table> {
    if n == 0 || points < 2 {
        return Err(AltError::InvalidParameters(format!(
            "plot needs n >= 1 and at least 2 points, got n = {n}, points = {points}"
        )));
    }
    let polys = (1..=n)
        .map(|k| kind.coefficients(n, k))
        .collect::<Result<Vec<_>>>()?;
    let mut header = vec!["x".to_string()];
    header.extend((1..=n).map(|k| format!("{}_{n}_{k}", kind.symbol())));
    let mut table = Table::new(header);
    let last = points - 1;
    for i in 0..points {
        let x = Rational::new(BigInt::from(i), BigInt::from(last));
        let mut row = vec![format_float(x.to_f64())];
        row.extend(polys.iter().map(|p| format_float(p.eval(&x).to_f64())));
        table.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alt_jacobi::shifted_jacobi_coefficients;

    fn ints(v: &[i64]) -> QPoly {
        QPoly::from_i64(v)
    }

    #[test]
    fn a_examples() {
        assert_eq!(a_coefficients(3, 3).unwrap(), ints(&[0, 0, 0, 1]));
        assert_eq!(a_coefficients(2, 1).unwrap(), ints(&[0, 3, -4]));
        assert_eq!(a_coefficients(1, 0).unwrap(), ints(&[1, -2]));
        let rec = a_recurrence(2).unwrap();
        assert_eq!(rec[1], ints(&[0, 3, -4]));
        assert_eq!(rec[2], ints(&[1, -6, 6]));
    }

    #[test]
    fn a_routes_agree() {
        for n in 1..=12 {
            let rec = a_recurrence(n).unwrap();
            for (i, poly) in rec.iter().enumerate() {
                let k = n - i;
                let direct = a_coefficients(n, k).unwrap();
                assert_eq!(poly, &direct, "n={n} k={k}");
                let generic = ajp_coefficients(&PolyParams::new(q(-1, 1), q(0, 1), n, k)).unwrap();
                assert_eq!(generic, direct);
                assert!(poly.coeffs().iter().all(|c| c.is_integer()));
            }
        }
    }

    #[test]
    fn a_norm_examples() {
        assert_eq!(a_norm(2, 1, 1).unwrap(), ExactValue::rational(q(1, 2)));
        assert!(a_norm(2, 1, 2).unwrap().is_zero());
        assert!(a_norm(4, 0, 3).unwrap().is_zero());
        assert!(matches!(a_norm(3, 0, 0), Err(AltError::NonNormalizable(_))));
        assert_eq!(
            a_single_integral(2, 1).unwrap(),
            ExactValue::rational(q(1, 1))
        );
        assert_eq!(
            a_single_integral(2, 2).unwrap(),
            ExactValue::rational(q(1, 2))
        );
        assert_eq!(
            a_single_integral(5, 5).unwrap(),
            ExactValue::rational(q(1, 5))
        );
        assert!(a_single_integral(5, 0).is_err());
    }

    #[test]
    fn closed_forms_match_oracle() {
        for kind in [MarginalKind::A, MarginalKind::T] {
            for n in 1..=6 {
                for k in 0..=n {
                    for l in 0..=n {
                        if k == 0 && l == 0 {
                            assert!(kind.inner_product(n, 0, 0).is_err());
                            continue;
                        }
                        assert_eq!(
                            kind.inner_product(n, k, l).unwrap(),
                            kind.norm(n, k, l).unwrap(),
                            "{kind:?} n={n} k={k} l={l}"
                        );
                    }
                    if k > 0 {
                        assert_eq!(
                            kind.integral(n, k).unwrap(),
                            kind.single_integral(n, k).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(5).unwrap(), BigInt::from(15));
        assert_eq!(double_factorial(6).unwrap(), BigInt::from(48));
        assert_eq!(double_factorial(0).unwrap(), BigInt::from(1));
        assert_eq!(double_factorial(-1).unwrap(), BigInt::from(1));
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn t_examples() {
        assert_eq!(t_coefficients(1, 0).unwrap(), ints(&[1, -2]));
        assert_eq!(t_coefficients(2, 1).unwrap(), ints(&[0, 5, -6]));
        assert_eq!(t_coefficients(2, 0).unwrap(), ints(&[1, -8, 8]));
        assert_eq!(t_norm(1, 1, 1).unwrap().as_pi_multiple(), Some(q(1, 2)));
        assert!(t_norm(2, 1, 2).unwrap().is_zero());
        assert_eq!(t_norm(2, 2, 2).unwrap().as_pi_multiple(), Some(q(5, 16)));
        assert_eq!(
            t_single_integral(1, 1).unwrap().as_pi_multiple(),
            Some(q(1, 1))
        );
        assert_eq!(
            t_single_integral(2, 1).unwrap().as_pi_multiple(),
            Some(q(2, 1))
        );
        assert_eq!(
            t_single_integral(2, 2).unwrap().as_pi_multiple(),
            Some(q(1, 2))
        );
    }

    #[test]
    fn t_routes_agree() {
        for n in 1..=10 {
            let rec = t_recurrence(n).unwrap();
            for (i, poly) in rec.iter().enumerate() {
                assert_eq!(
                    poly,
                    &t_coefficients(n, n - i).unwrap(),
                    "n={n} k={}",
                    n - i
                );
            }
        }
    }

    #[test]
    fn singular_members_are_classical() {
        for n in 1..=10 {
            let legendre = shifted_jacobi_coefficients(n, &q(0, 1), &q(0, 1));
            assert_eq!(a_coefficients(n, 0).unwrap(), legendre);
            assert_eq!(t_coefficients(n, 0).unwrap(), shifted_chebyshev(n));
        }
    }

    #[test]
    fn odes_vanish() {
        for kind in [MarginalKind::A, MarginalKind::T] {
            for n in 1..=8 {
                for k in 0..=n {
                    assert!(
                        kind.ode_residual(n, k).unwrap().is_zero(),
                        "{kind:?} n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn normalizability_flag() {
        assert!(!is_normalizable(MarginalKind::A, 0));
        assert!(is_normalizable(MarginalKind::A, 1));
        assert!(!is_normalizable(MarginalKind::T, 0));
    }

    #[test]
    fn plot_endpoints() {
        for kind in [MarginalKind::A, MarginalKind::T] {
            let t = plot_data(kind, 5, 512).unwrap();
            assert_eq!(t.rows().len(), 512);
            assert_eq!(t.header()[1], format!("{}_5_1", kind.symbol()));
            let last = t.rows().last().unwrap();
            assert_eq!(last[0], "1");
            for (k, cell) in last.iter().enumerate().skip(1) {
                let want = if (5 - k) % 2 == 0 { "1" } else { "-1" };
                assert_eq!(cell, want);
            }
            assert_eq!(t.rows()[0][1], "0");
        }
    }
}
