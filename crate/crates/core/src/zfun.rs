//! Discretely almost orthogonal systems on `[0, 1]` built from exponential
//! polynomials.
//!
//! For a shape ratio `omega` the exponent `alpha` is chosen so that the
//! largest zero `gamma = lambda_nn^(alpha, omega alpha)` of the associated
//! function is as large as possible without exceeding 1. The members are
//! `Z_nk(t) = E_nk(gamma t)`, so the associated function vanishes at `t = 1`.
//! When `gamma = 1` the scaling is the identity.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{AltError, Result};
use crate::exppoly::{e_eval_stable, e_zeros, ExpPolySystem};
use crate::quad::gauss_jacobi_rule;

/// Equality tolerance on `gamma` for treating a system as unscaled.
pub const UNSCALED_TOL: f64 = 1e-12;

/// Largest zero `lambda_nn` of `E_n0^(alpha, beta)`.
pub fn lambda_max(alpha: f64, beta: f64, n: usize) -> Result<f64> {
    Ok(e_zeros(alpha, beta, n)?.max_lambda())
}

/// `E_nk(lambda_nn t)`, whose associated member vanishes at `t = 1`.
pub fn etilde_eval(alpha: f64, beta: f64, n: usize, k: usize, t: f64) -> Result<f64> {
    let sys = ExpPolySystem::new(alpha, beta, n)?;
    let scale = lambda_max(alpha, beta, n)?;
    e_eval_stable(&sys, k, scale * t)
}

/// Abscissa `ln(1 + omega)` of the maximum of `e^(-alpha t)(1-e^-t)^(omega alpha)`;
/// the maximum sits at `t = 0` for `omega <= 0`.
pub fn weight_peak(omega: f64) -> f64 {
    if omega > 0.0 {
        omega.ln_1p()
    } else {
        0.0
    }
}

fn check_candidate(omega: f64, alpha: f64) -> Result<()> {
    if alpha > -1.0 && omega * alpha > -1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(AltError::InvalidParameters(format!(
            "candidate alpha = {alpha} with omega = {omega} leaves alpha > -1, omega alpha > -1"
        )))
    }
}

/// The feasible candidate with the largest `lambda_nn <= 1`; ties go to the
/// smallest `alpha`. Returns `(alpha, gamma)`.
pub fn z_search(n: usize, omega: f64, candidates: &[f64]) -> Result<(f64, f64)> {
    if candidates.is_empty() {
        return Err(AltError::InvalidParameters("candidate set is empty".into()));
    }
    for &a in candidates {
        check_candidate(omega, a)?;
    }
    let evaluated: Vec<(f64, f64)> = candidates
        .par_iter()
        .map(|&a| lambda_max(a, omega * a, n).map(|l| (a, l)))
        .collect::<Result<_>>()?;
    let mut best: Option<(f64, f64)> = None;
    for (a, l) in evaluated {
        if l > 1.0 {
            continue;
        }
        best = match best {
            Some((ba, bl)) if bl > l || (bl == l && ba <= a) => Some((ba, bl)),
            _ => Some((a, l)),
        };
    }
    best.ok_or_else(|| {
        AltError::Infeasible(format!(
            "every candidate gives a largest zero above 1 for n = {n}, omega = {omega}"
        ))
    })
}

/// Smallest real `alpha` with `lambda_nn^(alpha, omega alpha) = 1`, located by a
/// grid scan and refined by bisection. Returns `(alpha, 1)`.
pub fn z_search_real(n: usize, omega: f64) -> Result<(f64, f64)> {
    let mut lo = -1.0_f64;
    if omega > 0.0 {
        lo = lo.max(-1.0 / omega);
    }
    let mut hi = 64.0_f64;
    if omega < 0.0 {
        hi = hi.min(-1.0 / omega);
    }
    let lo = lo + 1e-9 * (1.0 + lo.abs());
    let hi = hi - 1e-9 * (1.0 + hi.abs());
    if !(lo < hi) {
        return Err(AltError::Infeasible(format!(
            "no admissible alpha for omega = {omega}"
        )));
    }
    let excess = |a: f64| lambda_max(a, omega * a, n).map(|l| l - 1.0);
    let cells = 512;
    let grid: Vec<f64> = (0..=cells)
        .map(|i| lo + (hi - lo) * i as f64 / cells as f64)
        .collect();
    let values: Vec<f64> = grid.par_iter().map(|&a| excess(a)).collect::<Result<_>>()?;
    let bracket = (0..cells)
        .find(|&i| values[i] >= 0.0 && values[i + 1] <= 0.0 && values[i] != values[i + 1]);
    let Some(i) = bracket else {
        return Err(AltError::Infeasible(format!(
            "largest zero never crosses 1 for n = {n}, omega = {omega}"
        )));
    };
    let (mut a, mut b) = (grid[i], grid[i + 1]);
    if values[i + 1] == 0.0 {
        return Ok((b, 1.0));
    }
    // invariant: excess(a) >= 0 > excess(b)
    loop {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if excess(mid)? >= 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    // b is feasible (lambda < 1); prefer whichever endpoint is nearer the crossing
    let pick = if excess(a)?.abs() <= excess(b)?.abs() {
        a
    } else {
        b
    };
    Ok((pick, 1.0))
}

/// Largest whole number in the default candidate set.
pub const DEFAULT_MAX_WHOLE: u32 = 32;

/// Whole numbers `0..=32`, plus every `p/q` with `q <= 4` in `(-1, 32]` when
/// `with_fractions` is set.
pub fn default_candidates(with_fractions: bool) -> Vec<f64> {
    candidates_up_to(DEFAULT_MAX_WHOLE, with_fractions)
}

/// Whole numbers `0..=max_whole`, plus every `p/q` with `q <= 4` in
/// `(-1, max_whole]` when `with_fractions` is set; ascending and free of
/// duplicates.
pub fn candidates_up_to(max_whole: u32, with_fractions: bool) -> Vec<f64> {
    let mut out: Vec<f64> = (0..=max_whole).map(f64::from).collect();
    if with_fractions {
        let top = max_whole as i64;
        for q in 2..=4_i64 {
            for p in (-q + 1)..=(top * q) {
                out.push(p as f64 / q as f64);
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
    }
    out
}

/// A built Z-system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZSystemSpec {
    pub n: usize,
    pub omega: f64,
    pub alpha_n: f64,
    pub beta_n: f64,
    pub gamma_n: f64,
    /// `true` when `gamma_n < 1`, i.e. the time axis is rescaled.
    pub scaled: bool,
    /// Zeros of the associated function in `t`, ascending; all in `(0, 1]`.
    pub lambdas: Vec<f64>,
    /// `Z_n0(1)`.
    pub endpoint_value: f64,
}

impl ZSystemSpec {
    fn system(&self) -> ExpPolySystem<f64> {
        ExpPolySystem {
            alpha: self.alpha_n,
            beta: self.beta_n,
            n: self.n,
        }
    }

    /// `Z_nk(t) = E_nk(gamma t)`; `k = 0` is the associated function.
    pub fn eval(&self, k: usize, t: f64) -> Result<f64> {
        e_eval_stable(&self.system(), k, self.gamma_n * t)
    }

    /// Basis function `j` of `{1, Z_n1, .., Z_nn}`.
    pub fn basis(&self, j: usize, t: f64) -> Result<f64> {
        if j == 0 {
            Ok(1.0)
        } else {
            self.eval(j, t)
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("spec serializes")
    }
}

/// Runs [`z_search`] and assembles the system, checking `Z_n0(1) = 0`.
pub fn z_build(n: usize, omega: f64, candidates: &[f64]) -> Result<ZSystemSpec> {
    let (alpha, gamma) = z_search(n, omega, candidates)?;
    assemble(n, omega, alpha, gamma)
}

/// As [`z_build`] with `alpha` from [`z_search_real`].
pub fn z_build_real(n: usize, omega: f64) -> Result<ZSystemSpec> {
    let (alpha, _) = z_search_real(n, omega)?;
    let gamma = lambda_max(alpha, omega * alpha, n)?;
    assemble(n, omega, alpha, gamma)
}

fn assemble(n: usize, omega: f64, alpha: f64, gamma: f64) -> Result<ZSystemSpec> {
    let beta = omega * alpha;
    let zeros = e_zeros(alpha, beta, n)?;
    let lambdas: Vec<f64> = zeros.lambdas.iter().map(|l| l / gamma).collect();
    let mut spec = ZSystemSpec {
        n,
        omega,
        alpha_n: alpha,
        beta_n: beta,
        gamma_n: gamma,
        scaled: (1.0 - gamma).abs() > UNSCALED_TOL,
        lambdas,
        endpoint_value: 0.0,
    };
    spec.endpoint_value = spec.eval(0, 1.0)?;
    if spec.endpoint_value.abs() >= 1e-9 {
        return Err(AltError::RootFailure(format!(
            "associated function is {} at t = 1",
            spec.endpoint_value
        )));
    }
    Ok(spec)
}

/// Collocation interpolant in `{1, Z_n1, .., Z_nn}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollocationFit {
    /// Constant term first, then `Z_n1 .. Z_nn`.
    pub coeffs: Vec<f64>,
    /// `{0}` followed by the associated zeros, ascending.
    pub nodes: Vec<f64>,
    pub node_residual: f64,
    /// Maximum error on 257 uniform points of `[0, 1]`.
    pub max_error: f64,
    /// 2-norm condition number of the collocation matrix.
    pub condition: f64,
}

/// Condition numbers above this are reported as singular.
pub const SINGULAR_CONDITION: f64 = 1e14;

/// Interpolates `f` at `t = 0` and the zeros of the associated function.
pub fn z_collocation_fit(f: impl Fn(f64) -> f64, spec: &ZSystemSpec) -> Result<CollocationFit> {
    let n = spec.n;
    let mut nodes = vec![0.0];
    nodes.extend(spec.lambdas.iter().copied());
    let dim = n + 1;
    let mut entries = Vec::with_capacity(dim * dim);
    for &t in &nodes {
        for j in 0..dim {
            entries.push(spec.basis(j, t)?);
        }
    }
    let matrix = DMatrix::from_row_slice(dim, dim, &entries);
    let sv = matrix.clone().singular_values();
    let condition = sv.max() / sv.min();
    if !(condition < SINGULAR_CONDITION) {
        return Err(AltError::SingularSystem { condition });
    }
    let rhs = DVector::from_iterator(dim, nodes.iter().map(|&t| f(t)));
    let coeffs = matrix
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(AltError::SingularSystem { condition })?;
    let node_residual = (&matrix * &coeffs - &rhs).amax();
    let coeffs: Vec<f64> = coeffs.iter().copied().collect();
    let interpolant = |t: f64| -> Result<f64> {
        let mut acc = 0.0;
        for (j, c) in coeffs.iter().enumerate() {
            acc += c * spec.basis(j, t)?;
        }
        Ok(acc)
    };
    let mut max_error = 0.0_f64;
    for i in 0..=256 {
        let t = i as f64 / 256.0;
        max_error = max_error.max((f(t) - interpolant(t)?).abs());
    }
    Ok(CollocationFit {
        coeffs,
        nodes,
        node_residual,
        max_error,
        condition,
    })
}

/// Gram matrix of `{1, Z_n1, .., Z_nn}` under the uniform weight on `[0, 1]`.
/// Reported as a diagnostic only.
pub fn z_gram(spec: &ZSystemSpec) -> Result<Vec<Vec<f64>>> {
    let rule = gauss_jacobi_rule(64, 0.0, 0.0)?;
    let dim = spec.n + 1;
    let mut values = vec![vec![0.0; rule.len()]; dim];
    for (j, row) in values.iter_mut().enumerate() {
        for (slot, &t) in row.iter_mut().zip(rule.nodes()) {
            *slot = spec.basis(j, t)?;
        }
    }
    let mut gram = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            let v: f64 = rule
                .weights()
                .iter()
                .zip(values[i].iter().zip(&values[j]))
                .map(|(w, (a, b))| w * a * b)
                .sum();
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }
    Ok(gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{E, LN_2};

    #[test]
    fn lambda_examples() {
        assert_relative_eq!(lambda_max(0.0, 0.0, 1).unwrap(), LN_2, max_relative = 1e-15);
        assert_relative_eq!(
            lambda_max(1.0, 0.0, 1).unwrap(),
            1.5f64.ln(),
            max_relative = 1e-15
        );
        for &a in &[0.0_f64, 0.5, 1.0, 2.0, 5.0] {
            let want = ((a + 2.0) / (a + 1.0)).ln();
            assert!((lambda_max(a, 0.0, 1).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn etilde_examples() {
        assert!(etilde_eval(0.0, 0.0, 1, 0, 1.0).unwrap().abs() < 1e-15);
        assert_eq!(etilde_eval(2.5, 1.0, 3, 3, 0.0).unwrap(), 1.0);
        assert_relative_eq!(
            etilde_eval(1.0, 0.0, 1, 1, 1.0).unwrap(),
            2.0 / 3.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn peaks() {
        assert_relative_eq!(weight_peak(1.0), LN_2);
        assert_eq!(weight_peak(0.0), 0.0);
        assert_relative_eq!(weight_peak(E - 1.0), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn search_examples() {
        let wholes: Vec<f64> = (0..=10).map(f64::from).collect();
        assert_eq!(z_search(1, 0.0, &wholes).unwrap(), (0.0, LN_2));
        let (a, g) = z_search(1, 0.0, &[10.0]).unwrap();
        assert_eq!(a, 10.0);
        assert_relative_eq!(g, (12.0f64 / 11.0).ln(), max_relative = 1e-14);
        assert!(matches!(
            z_search(1, 0.0, &[-0.9]),
            Err(AltError::Infeasible(_))
        ));
        assert!(matches!(
            z_search(1, 0.0, &[-1.5]),
            Err(AltError::InvalidParameters(_))
        ));
    }

    #[test]
    fn search_ignores_order() {
        let mut c = default_candidates(true);
        let forward = z_search(2, 1.0, &c).unwrap();
        c.reverse();
        assert_eq!(z_search(2, 1.0, &c).unwrap(), forward);
    }

    #[test]
    fn real_boundary() {
        let (a, g) = z_search_real(1, 0.0).unwrap();
        assert!((a - (2.0 - E) / (E - 1.0)).abs() < 1e-10, "{a}");
        assert_eq!(g, 1.0);
        let spec = z_build_real(1, 0.0).unwrap();
        assert!(!spec.scaled);
        assert!((spec.gamma_n - 1.0).abs() < 1e-12);
    }

    #[test]
    fn built_systems_vanish_at_one() {
        let cands = candidates_up_to(128, false);
        for n in 1..=5 {
            for &omega in &[0.0, 0.5, 1.0] {
                let spec = z_build(n, omega, &cands).unwrap();
                assert!(spec.gamma_n <= 1.0);
                assert!(spec.endpoint_value.abs() < 1e-9);
                assert!(spec.lambdas.iter().all(|&l| l > 0.0 && l <= 1.0 + 1e-15));
                let sys = spec.system();
                for k in 0..=n {
                    let direct = e_eval_stable(&sys, k, spec.gamma_n).unwrap();
                    assert_eq!(spec.eval(k, 1.0).unwrap(), direct);
                }
            }
        }
        assert!(matches!(
            z_build(4, 1.0, &default_candidates(false)),
            Err(AltError::Infeasible(_))
        ));
        let spec = z_build(1, 0.0, &cands).unwrap();
        assert!(spec.scaled);
        assert_relative_eq!(spec.gamma_n, LN_2, max_relative = 1e-15);
    }

    #[test]
    fn collocation() {
        let cands = default_candidates(false);
        let spec = z_build(2, 1.0, &cands).unwrap();
        let fit = z_collocation_fit(|_| 1.0, &spec).unwrap();
        assert!((fit.coeffs[0] - 1.0).abs() < 1e-12);
        assert!(fit.coeffs[1..].iter().all(|c| c.abs() < 1e-12));
        let fit = z_collocation_fit(|t| spec.eval(1, t).unwrap(), &spec).unwrap();
        assert!((fit.coeffs[1] - 1.0).abs() < 1e-12);
        assert!(fit.coeffs[0].abs() < 1e-12 && fit.coeffs[2].abs() < 1e-12);

        let two = z_collocation_fit(|t| (-t).exp(), &spec).unwrap();
        let spec3 = z_build(3, 1.0, &cands).unwrap();
        let three = z_collocation_fit(|t| (-t).exp(), &spec3).unwrap();
        assert!(two.node_residual < 1e-12);
        assert!(
            three.max_error < two.max_error,
            "{} vs {}",
            three.max_error,
            two.max_error
        );
    }

    #[test]
    fn gram_is_symmetric() {
        let spec = z_build(3, 0.5, &default_candidates(false)).unwrap();
        let g = z_gram(&spec).unwrap();
        assert_relative_eq!(g[0][0], 1.0, max_relative = 1e-14);
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, g[j][i]);
            }
        }
    }
}
