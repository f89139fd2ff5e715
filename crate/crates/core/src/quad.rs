//! Weighted integration on `[0, 1]` and on the semi-axis `[0, inf)`.
//!
//! Polynomial integrands are integrated exactly by expanding into Beta
//! moments. General integrands use Gauss–Jacobi rules computed from the
//! eigen-decomposition of the Jacobi matrix.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{AltError, Result};
use crate::poly::DensePoly;
use crate::scalar::{beta as beta_fn, Scalar};
use crate::table::{format_float, Table};

/// `int_0^1 x^a (1-x)^b dx = B(a+1, b+1)`.
pub fn beta_moment<S: Scalar>(a: &S, b: &S) -> Result<S::Value> {
    let minus_one = -S::one();
    if !(*a > minus_one) || !(*b > minus_one) {
        return Err(AltError::Divergent(format!(
            "moment of x^{a} (1-x)^{b} diverges"
        )));
    }
    beta_fn(&(a.clone() + S::one()), &(b.clone() + S::one()))
}

/// `int_0^1 x^alpha (1-x)^beta p(x) dx`, expanded over the monomials of `p`.
///
/// Fails as divergent when the lowest nonzero monomial is not integrable.
pub fn weighted_integral<S: Scalar>(p: &DensePoly<S>, alpha: &S, beta: &S) -> Result<S::Value> {
    let Some(low) = p.lowest_power() else {
        return Ok(S::value_zero());
    };
    let mut a = alpha.clone() + S::from_usize(low);
    let base = beta_moment(&a, beta)?;
    // moment(a + 1) / moment(a) = (a + 1) / (a + b + 2)
    let mut ratio = S::one();
    let mut acc = S::zero();
    for c in &p.coeffs()[low..] {
        acc = acc + c.clone() * ratio.clone();
        let next = a.clone() + S::one();
        ratio = ratio * next.clone() / (next.clone() + beta.clone() + S::one());
        a = next;
    }
    Ok(S::scale(&base, &acc))
}

/// `<p, q>` under the weight `x^alpha (1-x)^beta`.
pub fn weighted_inner_product<S: Scalar>(
    p: &DensePoly<S>,
    q: &DensePoly<S>,
    alpha: &S,
    beta: &S,
) -> Result<S::Value> {
    weighted_integral(&(p * q), alpha, beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    UnitInterval,
    SemiAxis,
}

/// What a rule integrates against.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightDesc {
    /// `x^alpha (1-x)^beta` on `[0, 1]`.
    Jacobi { alpha: f64, beta: f64 },
    /// A rule derived from another by a change of variables or reweighting.
    Transformed { tag: String },
}

/// Nodes and weights, sorted by ascending node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: Domain,
    weight: WeightDesc,
}

impl QuadRule {
    /// Pairs are reordered by node; nodes must be distinct and finite.
    pub fn new(
        nodes: Vec<f64>,
        weights: Vec<f64>,
        domain: Domain,
        weight: WeightDesc,
    ) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(AltError::InvalidParameters(format!(
                "rule needs matching nonempty node and weight lists, got {} and {}",
                nodes.len(),
                weights.len()
            )));
        }
        let mut pairs: Vec<(f64, f64)> = nodes.into_iter().zip(weights).collect();
        if pairs.iter().any(|(x, w)| !x.is_finite() || !w.is_finite()) {
            return Err(AltError::InvalidParameters(
                "rule has non-finite entries".into(),
            ));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(AltError::InvalidParameters(
                "rule nodes are not distinct".into(),
            ));
        }
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self {
            nodes,
            weights,
            domain,
            weight,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn weight_desc(&self) -> &WeightDesc {
        &self.weight
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `sum_s w_s f(x_s)`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["node", "weight"]);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            t.push(vec![format_float(*x), format_float(*w)]);
        }
        t
    }

    pub fn to_csv(&self) -> String {
        self.to_table().to_csv()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("rule serializes")
    }
}

/// `m`-point Gauss rule for `x^a (1-x)^b` on `[0, 1]`, exact through degree
/// `2m - 1`.
pub fn gauss_jacobi_rule(m: usize, a: f64, b: f64) -> Result<QuadRule> {
    if m == 0 {
        return Err(AltError::InvalidParameters(
            "rule needs at least one node".into(),
        ));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(AltError::Divergent(format!(
            "weight x^{a} (1-x)^{b} is not integrable"
        )));
    }
    let mass = beta_moment(&a, &b)?;
    // Jacobi matrix of P^(a,b) on [-1, 1] with (1-y) <-> x, mapped by x = (1-y)/2.
    let mut jm = DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        jm[(j, j)] = 0.5 * (1.0 - jacobi_diagonal(j, a, b));
        if j > 0 {
            let off = 0.5 * jacobi_offdiagonal(j, a, b);
            jm[(j, j - 1)] = off;
            jm[(j - 1, j)] = off;
        }
    }
    let eig = SymmetricEigen::try_new(jm, f64::EPSILON, 10_000).ok_or_else(|| {
        AltError::EigenFailure(format!("Jacobi matrix for m = {m}, a = {a}, b = {b}"))
    })?;
    let nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let weights: Vec<f64> = (0..m)
        .map(|i| mass * eig.eigenvectors[(0, i)].powi(2))
        .collect();
    if nodes.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return Err(AltError::EigenFailure(format!(
            "nodes for m = {m}, a = {a}, b = {b} left (0, 1)"
        )));
    }
    QuadRule::new(
        nodes,
        weights,
        Domain::UnitInterval,
        WeightDesc::Jacobi { alpha: a, beta: b },
    )
}

fn jacobi_diagonal(j: usize, a: f64, b: f64) -> f64 {
    let s = 2.0 * j as f64 + a + b;
    if j == 0 {
        (b - a) / (a + b + 2.0)
    } else {
        (b * b - a * a) / (s * (s + 2.0))
    }
}

fn jacobi_offdiagonal(j: usize, a: f64, b: f64) -> f64 {
    let j = j as f64;
    let s = 2.0 * j + a + b;
    let head = 4.0 * j * (j + a) * (j + b) / (s * s * (s + 1.0));
    // (j + a + b) / (s - 1) tends to 1 when both vanish (j = 1, a + b = -1)
    let tail = if (s - 1.0).abs() < 1e-300 {
        1.0
    } else {
        (j + a + b) / (s - 1.0)
    };
    (head * tail).sqrt()
}

/// `sum_s w_s f(x_s)` for a rule on `[0, 1]`.
pub fn integrate_unit(f: impl Fn(f64) -> f64, rule: &QuadRule) -> Result<f64> {
    if rule.domain() != Domain::UnitInterval {
        return Err(AltError::InvalidParameters("rule is not on [0, 1]".into()));
    }
    Ok(rule.apply(f))
}

/// `int_0^inf e^(-alpha t) (1-e^(-t))^beta g(t) dt` through `x = e^(-t)`.
///
/// The pulled-back weight is `x^(alpha-1) (1-x)^beta`. When `alpha - 1 <= -1`
/// the smallest number `s` of factors `1/x` moved into the integrand that makes
/// the rule weight integrable is used, and `g(t) e^(s t)` must stay bounded.
pub fn integrate_semi_axis(g: impl Fn(f64) -> f64, alpha: f64, beta: f64, m: usize) -> Result<f64> {
    SemiAxisQuadrature::new(alpha, beta, m)?.integrate(g)
}

/// A reusable `m`-node rule for [`integrate_semi_axis`].
#[derive(Debug, Clone, PartialEq)]
pub struct SemiAxisQuadrature {
    rule: QuadRule,
    shift: i32,
    alpha: f64,
}

impl SemiAxisQuadrature {
    pub fn new(alpha: f64, beta: f64, m: usize) -> Result<Self> {
        if !(alpha.is_finite() && beta > -1.0) {
            return Err(AltError::Divergent(format!(
                "semi-axis weight with alpha = {alpha}, beta = {beta} is not integrable"
            )));
        }
        let shift = if alpha > 0.0 {
            0
        } else {
            (-alpha).floor() as i32 + 1
        };
        let rule = gauss_jacobi_rule(m, alpha - 1.0 + shift as f64, beta)?;
        Ok(Self { rule, shift, alpha })
    }

    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> Result<f64> {
        let shift = self.shift;
        if shift > 0 {
            let growth = |t: f64| g(t).abs() * (shift as f64 * t).exp();
            let (near, far) = (growth(20.0), growth(40.0));
            if !far.is_finite() || far > 1e3 * near.max(1e-300) && far > 1e-8 {
                return Err(AltError::Divergent(format!(
                    "integrand does not decay fast enough for alpha = {}",
                    self.alpha
                )));
            }
        }
        Ok(self.rule.apply(|x| g(-x.ln()) / x.powi(shift)))
    }
}

/// Exact semi-axis integral of `p(e^(-t))` under `e^(-alpha t) (1-e^(-t))^beta`.
pub fn integrate_semi_axis_poly<S: Scalar>(
    p: &DensePoly<S>,
    alpha: &S,
    beta: &S,
) -> Result<S::Value> {
    weighted_integral(p, &(alpha.clone() - S::one()), beta)
}
