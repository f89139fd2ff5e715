//! Orthogonal exponential polynomials on `[0, inf)`:
//! `E_nk^(a,b)(t) = P_nk^(a-1,b)(e^-t)`, orthogonal under
//! `e^(-a t) (1 - e^-t)^b` for `k = 1..n`.
//!
//! The associated function `E_n0` is not square-integrable and stays out of
//! norms and projections. Its zeros are the nodes of a Gauss-type rule exact
//! for `e^(-2t) .. e^(-(2n+1)t)`.

use serde::Serialize;

use crate::alt_jacobi::{
    ajp_coefficients, ajp_eval, ajp_eval_stable, jacobi_derivative, jacobi_eval, PolyParams,
};
use crate::error::{AltError, Result};
use crate::marginal::{a_coefficients, t_coefficients};
use crate::poly::DensePoly;
use crate::quad::{integrate_semi_axis_poly, Domain, QuadRule, SemiAxisQuadrature, WeightDesc};
use crate::roots::unit_interval_roots;
use crate::scalar::{
    beta as beta_fn, factorial, rational_from_f64, rising_factorial, Rational, Scalar,
};
use crate::table::{format_float, Table};

/// `{E_nk^(alpha, beta)}` for `k = n..1`, plus the associated `E_n0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpPolySystem<S> {
    pub alpha: S,
    pub beta: S,
    pub n: usize,
}

impl<S: Scalar> ExpPolySystem<S> {
    pub fn new(alpha: S, beta: S, n: usize) -> Result<Self> {
        let minus_one = -S::one();
        if !(alpha > minus_one) || !(beta > minus_one) {
            return Err(AltError::InvalidParameters(format!(
                "exponential system needs alpha, beta > -1, got {alpha}, {beta}"
            )));
        }
        if n == 0 {
            return Err(AltError::InvalidParameters(
                "exponential system needs n >= 1".into(),
            ));
        }
        Ok(Self { alpha, beta, n })
    }

    /// Parameters of the underlying polynomial in `x = e^-t`.
    pub fn params(&self, k: usize) -> PolyParams<S> {
        PolyParams::new(self.alpha.clone() - S::one(), self.beta.clone(), self.n, k)
    }

    /// Coefficients in powers of `e^-t`.
    pub fn coefficients(&self, k: usize) -> Result<DensePoly<S>> {
        ajp_coefficients(&self.params(k))
    }

    /// `int_0^inf w E_nk E_nl dt` from the Beta-moment expansion.
    pub fn inner_product(&self, k: usize, l: usize) -> Result<S::Value> {
        if k == 0 && l == 0 {
            return Err(AltError::NonNormalizable(
                "the associated function E_n0 is not square-integrable".into(),
            ));
        }
        let p = &self.coefficients(k)? * &self.coefficients(l)?;
        integrate_semi_axis_poly(&p, &self.alpha, &self.beta)
    }

    pub fn to_f64(&self) -> ExpPolySystem<f64> {
        ExpPolySystem {
            alpha: self.alpha.to_f64(),
            beta: self.beta.to_f64(),
            n: self.n,
        }
    }
}

/// `E_nk(t) = P_nk^(a-1,b)(e^-t)` by Horner on the monomial coefficients.
pub fn e_eval(sys: &ExpPolySystem<f64>, k: usize, t: f64) -> Result<f64> {
    ajp_eval(&sys.params(k), &(-t).exp())
}

/// `E_nk(t)` through the classical Jacobi recurrence.
pub fn e_eval_stable(sys: &ExpPolySystem<f64>, k: usize, t: f64) -> Result<f64> {
    ajp_eval_stable(&sys.params(k), (-t).exp())
}

/// `1/(a+2k) G(a+n+k+1) G(b+n-k+1) / ((n-k)! G(a+b+n+k+1))` for `k >= 1`.
pub fn e_norm<S: Scalar>(sys: &ExpPolySystem<S>, k: usize) -> Result<S::Value> {
    let n = sys.n;
    if k == 0 {
        return Err(AltError::Divergent(
            "the associated function E_n0 is not integrable on the semi-axis".into(),
        ));
    }
    if k > n {
        return Err(AltError::InvalidParameters(format!(
            "k = {k} exceeds n = {n}"
        )));
    }
    let s = |v: usize| S::from_usize(v);
    let (a, b) = (sys.alpha.clone(), sys.beta.clone());
    // G(x) G(y) / G(z) = B(x, y) G(x + y) / G(z), with x + y - z = n - k + 1 whole
    let base = beta_fn(&(a.clone() + s(n + k + 1)), &(b.clone() + s(n - k + 1)))?;
    let rising = rising_factorial(&(a.clone() + b + s(n + k + 1)), n - k + 1);
    let ratio = rising / ((a + s(2 * k)) * factorial::<S>(n - k));
    Ok(S::scale(&base, &ratio))
}

/// Zeros of the associated function `E_n0^(alpha, beta)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroSet {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    /// Ascending; `lambdas[n-1]` is the largest zero.
    pub lambdas: Vec<f64>,
    /// `e^(-lambda)` for each entry of `lambdas`, hence descending.
    pub source_x: Vec<f64>,
    /// Relative backward error of each `source_x` as a root of the exact
    /// polynomial.
    pub residuals: Vec<f64>,
}

impl ZeroSet {
    pub fn max_lambda(&self) -> f64 {
        *self.lambdas.last().expect("nonempty zero set")
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Zeros of `E_n0^(alpha, beta)(t)`, i.e. of `P_n0^(alpha-1, beta)(x)` at
/// `x = e^-t`.
///
/// The polynomial equals `P_n^(alpha, beta)(1 - 2x)`; the classical recurrence
/// evaluates it for Newton polishing.
pub fn e_zeros(alpha: f64, beta: f64, n: usize) -> Result<ZeroSet> {
    let sys = ExpPolySystem::new(alpha, beta, n)?;
    let exact = exact_params(alpha, beta, n)?;
    let poly = ajp_coefficients(&exact)?;
    let stable = |x: f64| {
        let y = 1.0 - 2.0 * x;
        (
            jacobi_eval(n, alpha, beta, y),
            -2.0 * jacobi_derivative(n, alpha, beta, y),
        )
    };
    let roots = unit_interval_roots(&poly, stable)?;
    let mut pairs: Vec<(f64, f64, f64)> = roots
        .values
        .iter()
        .zip(&roots.residuals)
        .map(|(&x, &r)| (-x.ln(), x, r))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(ZeroSet {
        alpha: sys.alpha,
        beta: sys.beta,
        n,
        lambdas: pairs.iter().map(|p| p.0).collect(),
        source_x: pairs.iter().map(|p| p.1).collect(),
        residuals: pairs.iter().map(|p| p.2).collect(),
    })
}

fn exact_params(alpha: f64, beta: f64, n: usize) -> Result<PolyParams<Rational>> {
    let to_q = |v: f64| {
        rational_from_f64(v)
            .ok_or_else(|| AltError::InvalidParameters(format!("parameter {v} is not finite")))
    };
    Ok(PolyParams::new(
        to_q(alpha)? - Rational::from_i64(1),
        to_q(beta)?,
        n,
        0,
    ))
}

/// Rule on `[0, 1]` with nodes at the zeros of `P_n0^(0,0)` and weights
/// `w_s = -2/(n(n+2)) / (x_s^2 P_n1(x_s) P_n0'(x_s))`.
///
/// It integrates `x^m` exactly for `m = 1..2n` but not constants.
pub fn legendre_type_quadrature(n: usize) -> Result<QuadRule> {
    let zeros = e_zeros(1.0, 0.0, n)?;
    let nf = n as f64;
    let factor = -2.0 / (nf * (nf + 2.0));
    let p_n1 = PolyParams::new(0.0, 0.0, n, 1);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &x in &zeros.source_x {
        // P_n0^(0,0)(x) = P_n^(1,0)(1 - 2x)
        let dp_n0 = -2.0 * jacobi_derivative(n, 1.0, 0.0, 1.0 - 2.0 * x);
        let p1 = ajp_eval_stable(&p_n1, x)?;
        nodes.push(x);
        weights.push(factor / (x * x * p1 * dp_n0));
    }
    QuadRule::new(
        nodes,
        weights,
        Domain::UnitInterval,
        WeightDesc::Transformed {
            tag: "legendre-type".into(),
        },
    )
}

/// Semi-axis rule `t_s = -ln x_s`, `v_s = w_s / x_s`; exact for
/// `int_0^inf e^(-mt) dt` with `m = 2..2n+1`.
pub fn semi_axis_rule(n: usize) -> Result<QuadRule> {
    let base = legendre_type_quadrature(n)?;
    let nodes = base.nodes().iter().map(|x| -x.ln()).collect();
    let weights = base
        .nodes()
        .iter()
        .zip(base.weights())
        .map(|(x, w)| w / x)
        .collect();
    QuadRule::new(
        nodes,
        weights,
        Domain::SemiAxis,
        WeightDesc::Transformed {
            tag: "semi-axis".into(),
        },
    )
}

/// Zero table with columns `s, x_s, t_s` and, for `(alpha, beta) = (1, 0)`
/// where weights are known, `w_s, v_s`. Rows ascend in `x_s`.
pub fn zero_table(alpha: f64, beta: f64, n: usize) -> Result<Table> {
    let zeros = e_zeros(alpha, beta, n)?;
    let weights = if alpha == 1.0 && beta == 0.0 {
        Some(legendre_type_quadrature(n)?)
    } else {
        None
    };
    let mut header = vec!["s", "x_s", "t_s"];
    if weights.is_some() {
        header.extend(["w_s", "v_s"]);
    }
    let mut table = Table::new(header);
    let mut xs: Vec<f64> = zeros.source_x.clone();
    xs.sort_by(f64::total_cmp);
    for (s, &x) in xs.iter().enumerate() {
        let mut row = vec![(s + 1).to_string(), format_float(x), format_float(-x.ln())];
        if let Some(rule) = &weights {
            let w = rule.weights()[s];
            row.push(format_float(w));
            row.push(format_float(w / x));
        }
        table.push(row);
    }
    Ok(table)
}

/// `A_nk(e^-t)`.
pub fn ea_eval(n: usize, k: usize, t: f64) -> Result<f64> {
    Ok(a_coefficients(n, k)?.to_f64().eval(&(-t).exp()))
}

/// `T_nk(e^-t)`.
pub fn et_eval(n: usize, k: usize, t: f64) -> Result<f64> {
    Ok(t_coefficients(n, k)?.to_f64().eval(&(-t).exp()))
}

/// `d/dt[E_n,k-1 + E_nk] + (k-1) E_n,k-1 - k E_nk` for the A-kind system,
/// as a polynomial in `x = e^-t` (`d/dt = -x d/dx`).
pub fn ea_derivative_relation_poly(n: usize, k: usize) -> Result<DensePoly<Rational>> {
    if k == 0 || k > n {
        return Err(AltError::InvalidParameters(format!(
            "relation needs 1 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    let lower = a_coefficients(n, k - 1)?;
    let upper = a_coefficients(n, k)?;
    let d_dt = (&lower + &upper)
        .derivative()
        .shift_up(1)
        .scale(&Rational::from_i64(-1));
    let rhs = &lower.scale(&-Rational::from_usize(k - 1)) + &upper.scale(&Rational::from_usize(k));
    Ok(&d_dt - &rhs)
}

pub fn ea_derivative_relation_residual(n: usize, k: usize, t: f64) -> Result<f64> {
    Ok(ea_derivative_relation_poly(n, k)?
        .to_f64()
        .eval(&(-t).exp()))
}

/// Coefficients of `f` in `E_n1..E_nn` and the weighted L2 error of the
/// reconstruction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Projection {
    /// Index `i` holds the coefficient of `E_n,i+1`.
    pub coeffs: Vec<f64>,
    pub l2_error: f64,
}

/// Node count used by [`project`] callers that do not choose one.
pub fn default_projection_nodes(n: usize) -> usize {
    2 * n + 8
}

/// `c_k = <f, E_nk> / h_k` with inner products from an `m`-node rule.
pub fn project(f: impl Fn(f64) -> f64, sys: &ExpPolySystem<f64>, m: usize) -> Result<Projection> {
    let n = sys.n;
    let quad = SemiAxisQuadrature::new(sys.alpha, sys.beta, m)?;
    let mut coeffs = Vec::with_capacity(n);
    for k in 1..=n {
        let dot = quad.integrate(|t| f(t) * e_eval_stable(sys, k, t).unwrap_or(f64::NAN))?;
        coeffs.push(dot / e_norm(sys, k)?);
    }
    let approx = |t: f64| -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * e_eval_stable(sys, i + 1, t).unwrap_or(f64::NAN))
            .sum()
    };
    let err2 = quad.integrate(|t| (f(t) - approx(t)).powi(2))?;
    Ok(Projection {
        coeffs,
        l2_error: err2.max(0.0).sqrt(),
    })
}
