//! Self-verification suites.
//!
//! Every identity the crate relies on is checked over a parameter grid and
//! reported as a [`Check`]. Exact identities are compared with `==` on
//! rational data; float checks state their tolerance in the detail string.
//! Grids are evaluated in parallel and collected in grid order, so reports are
//! reproducible byte for byte.

use std::f64::consts::{E, LN_2};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::alt_jacobi::{
    ajp_coefficients, ajp_eval, ajp_eval_stable, ajp_norm_h, ajp_reciprocity_eval, ajp_recurrence,
    ajp_single_integral, ajp_via_reciprocity, ajp_via_shifted_jacobi, diff_diff_lower_residual,
    diff_diff_upper_residual, direct_coefficients, direct_norm_d, dx_residual, ode_residual_poly,
    shifted_jacobi_coefficients, PolyParams,
};
use crate::error::{AltError, Result};
use crate::exppoly::{
    e_eval, e_eval_stable, e_norm, e_zeros, ea_derivative_relation_poly, ea_eval, et_eval,
    legendre_type_quadrature, semi_axis_rule, ExpPolySystem,
};
use crate::marginal::{a_coefficients, shifted_chebyshev, MarginalKind};
use crate::quad::{
    beta_moment, gauss_jacobi_rule, integrate_semi_axis, weighted_inner_product, weighted_integral,
};
use crate::scalar::{factorial, rising_factorial, ExactValue, Rational, Scalar};
use crate::table::format_float;
use crate::zfun::{
    candidates_up_to, lambda_max, z_build, z_collocation_fit, z_search, z_search_real,
};

/// Outcome of one identity at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub params: String,
    pub passed: bool,
    pub detail: String,
}

fn run(name: &str, params: String, body: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let (passed, detail) = match body() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Check {
        name: name.to_string(),
        params,
        passed,
        detail,
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn qi(n: i64) -> Rational {
    q(n, 1)
}

fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

fn within(err: f64, tol: f64) -> (bool, String) {
    (
        err < tol,
        format!(
            "error {} (tolerance {})",
            format_float(err),
            format_float(tol)
        ),
    )
}

fn equal<T: PartialEq + fmt::Display>(got: &T, want: &T) -> (bool, String) {
    if got == want {
        (true, format!("{got}"))
    } else {
        (false, format!("got {got}, want {want}"))
    }
}

fn par_groups<T: Sync, F>(cases: &[T], f: F) -> Vec<Check>
where
    F: Fn(&T) -> Vec<Check> + Sync + Send,
{
    let groups: Vec<Vec<Check>> = cases.par_iter().map(f).collect();
    groups.into_iter().flatten().collect()
}

fn whole_grid(nmax: usize, n_from: usize) -> Vec<(i64, i64, usize)> {
    let mut out = Vec::new();
    for a in 0..=2 {
        for b in 0..=2 {
            for n in n_from..=nmax {
                out.push((a, b, n));
            }
        }
    }
    out
}

fn pq(a: &Rational, b: &Rational, n: usize, k: usize) -> PolyParams<Rational> {
    PolyParams::new(a.clone(), b.clone(), n, k)
}

fn tag(a: &Rational, b: &Rational, n: usize) -> String {
    format!("alpha={a} beta={b} n={n}")
}

/// `<P_nk, P_nl> = h_nk delta_kl` exactly for `alpha, beta in {0, 1, 2}`.
pub fn exact_orthogonality(nmax: usize) -> Vec<Check> {
    par_groups(&whole_grid(nmax, 0), |&(a, b, n)| {
        let (alpha, beta) = (qi(a), qi(b));
        let base = tag(&alpha, &beta, n);
        let polys: Result<Vec<_>> = (0..=n)
            .map(|k| ajp_coefficients(&pq(&alpha, &beta, n, k)))
            .collect();
        let polys = match polys {
            Ok(p) => p,
            Err(e) => return vec![run("exact_orthogonality", base, || Err(e))],
        };
        let mut out = Vec::new();
        for k in 0..=n {
            for l in k..=n {
                out.push(run(
                    "exact_orthogonality",
                    format!("{base} k={k} l={l}"),
                    || {
                        let got = weighted_inner_product(&polys[k], &polys[l], &alpha, &beta)?;
                        let want = if k == l {
                            ajp_norm_h(&pq(&alpha, &beta, n, k))?
                        } else {
                            ExactValue::zero()
                        };
                        Ok(equal(&got, &want))
                    },
                ));
            }
        }
        out
    })
}

/// Float inner products by Gauss–Jacobi quadrature on recurrence values,
/// for `alpha, beta in {-1/2, 1/2, 3/2}`; tolerance `1e-10` on the
/// normalized off-diagonal and the relative diagonal.
pub fn float_orthogonality(nmax: usize) -> Vec<Check> {
    let halves = [q(-1, 2), q(1, 2), q(3, 2)];
    let mut cases = Vec::new();
    for a in &halves {
        for b in &halves {
            for n in 0..=nmax {
                cases.push((a.clone(), b.clone(), n));
            }
        }
    }
    par_groups(&cases, |(alpha, beta, n)| {
        let n = *n;
        let base = tag(alpha, beta, n);
        let prepared = (|| -> Result<_> {
            let (af, bf) = (alpha.to_f64(), beta.to_f64());
            let rule = gauss_jacobi_rule(n + 1, af, bf)?;
            let mut values = Vec::new();
            let mut norms = Vec::new();
            for k in 0..=n {
                let p = PolyParams::new(af, bf, n, k);
                values.push(
                    rule.nodes()
                        .iter()
                        .map(|&x| ajp_eval_stable(&p, x))
                        .collect::<Result<Vec<_>>>()?,
                );
                norms.push(ajp_norm_h(&pq(alpha, beta, n, k))?.to_f64());
            }
            Ok((rule, values, norms))
        })();
        let (rule, values, norms) = match prepared {
            Ok(v) => v,
            Err(e) => return vec![run("float_orthogonality", base, || Err(e))],
        };
        let mut out = Vec::new();
        for k in 0..=n {
            for l in k..=n {
                out.push(run(
                    "float_orthogonality",
                    format!("{base} k={k} l={l}"),
                    || {
                        let dot: f64 = rule
                            .weights()
                            .iter()
                            .zip(values[k].iter().zip(&values[l]))
                            .map(|(w, (u, v))| w * u * v)
                            .sum();
                        let err = if k == l {
                            rel_err(dot, norms[k])
                        } else {
                            dot.abs() / (norms[k] * norms[l]).sqrt()
                        };
                        Ok(within(err, 1e-10))
                    },
                ));
            }
        }
        out
    })
}

/// Structural identities, exact over `alpha, beta in {0, 1, 2}`.
pub fn identities(nmax: usize) -> Vec<Check> {
    par_groups(&whole_grid(nmax, 0), |&(a, b, n)| {
        let (alpha, beta) = (qi(a), qi(b));
        let base = tag(&alpha, &beta, n);
        let mut out = Vec::new();
        out.push(run("recurrence_matches_expansion", base.clone(), || {
            let rec = ajp_recurrence(&pq(&alpha, &beta, n, 0), 0)?;
            for (i, poly) in rec.iter().enumerate() {
                let direct = ajp_coefficients(&pq(&alpha, &beta, n, n - i))?;
                if poly != &direct {
                    return Ok((false, format!("k={}: {poly} vs {direct}", n - i)));
                }
            }
            Ok((true, format!("{} members", rec.len())))
        }));
        for k in 0..=n {
            let p = pq(&alpha, &beta, n, k);
            let at = format!("{base} k={k}");
            out.push(run("lowest_coefficient", at.clone(), || {
                let poly = ajp_coefficients(&p)?;
                // G(a+n+k+2) / ((n-k)! G(a+2k+2))
                let want = rising_factorial(&(alpha.clone() + qi(2 * k as i64 + 2)), n - k)
                    / factorial::<Rational>(n - k);
                let low = poly.lowest_power() == Some(k);
                let (ok, detail) = equal(&poly.coeff(k), &want);
                Ok((ok && low, detail))
            }));
            out.push(run("single_integral", at.clone(), || {
                let got = weighted_integral(&ajp_coefficients(&p)?, &alpha, &beta)?;
                Ok(equal(&got, &ajp_single_integral(&p)?))
            }));
            out.push(run("reciprocity", at.clone(), || {
                let poly = ajp_coefficients(&p)?;
                let (ok, detail) = equal(&ajp_via_reciprocity(&p)?, &poly);
                let x = q(2, 3);
                let pointwise = ajp_reciprocity_eval(&p, &x)? == ajp_eval(&p, &x)?;
                Ok((ok && pointwise, detail))
            }));
            out.push(run("shifted_jacobi_form", at.clone(), || {
                Ok(equal(&ajp_via_shifted_jacobi(&p)?, &ajp_coefficients(&p)?))
            }));
            if k == 0 {
                out.push(run("singular_member_jacobi", at.clone(), || {
                    let want = shifted_jacobi_coefficients(n, &(alpha.clone() + qi(1)), &beta);
                    Ok(equal(&ajp_coefficients(&p)?, &want))
                }));
            }
            for shift in 1..=2usize {
                out.push(run("shift_invariance", format!("{at} p={shift}"), || {
                    let moved = pq(
                        &(alpha.clone() - qi(2 * shift as i64)),
                        &beta,
                        n + shift,
                        k + shift,
                    );
                    let lhs = ajp_coefficients(&p)?.shift_up(shift);
                    let (ok, detail) = equal(&lhs, &ajp_coefficients(&moved)?);
                    let norms = ajp_norm_h(&moved)? == ajp_norm_h(&p)?;
                    Ok((ok && norms, detail))
                }));
            }
            if k < n {
                out.push(run("differentiation_formula", at.clone(), || {
                    let r = dx_residual(&p)?;
                    Ok((r.is_zero(), format!("residual {r}")))
                }));
            }
            out.push(run("diff_diff_upper", at.clone(), || {
                let r = diff_diff_upper_residual(&p)?;
                Ok((r.is_zero(), format!("residual {r}")))
            }));
            if k >= 1 {
                out.push(run("diff_diff_lower", at.clone(), || {
                    let r = diff_diff_lower_residual(&p)?;
                    Ok((r.is_zero(), format!("residual {r}")))
                }));
            }
            out.push(run("ode", at.clone(), || {
                let r = ode_residual_poly(&p)?;
                Ok((r.is_zero(), format!("residual {r}")))
            }));
            out.push(run("endpoint_sign", at.clone(), || {
                let v = ajp_eval(&p, &qi(1))?;
                let want_positive = (n - k) % 2 == 0;
                let ok = v != Rational::from_i64(0) && (v > Rational::from_i64(0)) == want_positive;
                Ok((ok, format!("value at 1: {v}")))
            }));
        }
        out.push(run("direct_family", base.clone(), || {
            // direct members k = n..n+3: lowest power x^n, sign (-1)^(k-n) at 1,
            // orthogonal with squared norms d_nk
            let ks: Vec<usize> = (n..=n + 3).collect();
            let polys = ks
                .iter()
                .map(|&k| direct_coefficients(&pq(&alpha, &beta, n, k)))
                .collect::<Result<Vec<_>>>()?;
            for (i, poly) in polys.iter().enumerate() {
                let k = ks[i];
                if poly.lowest_power() != Some(n) || poly.degree() != Some(k) {
                    return Ok((false, format!("k={k}: shape {poly}")));
                }
                let at_one = poly.eval(&qi(1));
                if (at_one > Rational::from_i64(0)) != (k - n).is_multiple_of(2) {
                    return Ok((false, format!("k={k}: value at 1 is {at_one}")));
                }
                for (j, other) in polys.iter().enumerate().skip(i) {
                    let got = weighted_inner_product(poly, other, &alpha, &beta)?;
                    let want = if i == j {
                        direct_norm_d(&pq(&alpha, &beta, n, k))?
                    } else {
                        ExactValue::zero()
                    };
                    if got != want {
                        return Ok((false, format!("k={k} l={}: got {got}, want {want}", ks[j])));
                    }
                }
            }
            Ok((true, format!("k={}..{}", n, n + 3)))
        }));
        out
    })
}

/// A-kind and T-kind systems for `n = 1..=nmax`.
pub fn marginal(nmax: usize) -> Vec<Check> {
    let mut cases = Vec::new();
    for kind in [MarginalKind::A, MarginalKind::T] {
        for n in 1..=nmax {
            cases.push((kind, n));
        }
    }
    par_groups(&cases, |&(kind, n)| {
        let s = kind.symbol().to_lowercase();
        let base = format!("n={n}");
        let mut out = Vec::new();
        out.push(run(&format!("{s}_routes"), base.clone(), || {
            let rec = kind.recurrence(n)?;
            for (i, poly) in rec.iter().enumerate() {
                let k = n - i;
                let direct = kind.coefficients(n, k)?;
                if poly != &direct {
                    return Ok((
                        false,
                        format!("k={k}: recurrence {poly} vs expansion {direct}"),
                    ));
                }
                if kind == MarginalKind::A {
                    let generic = ajp_coefficients(&pq(&qi(-1), &qi(0), n, k))?;
                    if generic != direct || !direct.coeffs().iter().all(|c| c.is_integer()) {
                        return Ok((false, format!("k={k}: generic {generic} vs {direct}")));
                    }
                }
            }
            Ok((true, format!("{} members", rec.len())))
        }));
        for k in 0..=n {
            for l in k..=n {
                let at = format!("{base} k={k} l={l}");
                if k == 0 && l == 0 {
                    out.push(run(&format!("{s}_norm_singular"), at, || {
                        let oracle = kind.inner_product(n, 0, 0);
                        let closed = kind.norm(n, 0, 0);
                        Ok((
                            oracle.is_err() && closed.is_err(),
                            "k = l = 0 rejected".into(),
                        ))
                    }));
                    continue;
                }
                out.push(run(&format!("{s}_norm"), at, || {
                    let oracle = kind.inner_product(n, k, l)?;
                    let closed = kind.norm(n, k, l)?;
                    let (ok, detail) = equal(&oracle, &closed);
                    let err = rel_err(closed.to_f64(), oracle.to_f64());
                    Ok((ok && err < 1e-12, detail))
                }));
            }
            if k >= 1 {
                out.push(run(
                    &format!("{s}_single_integral"),
                    format!("{base} k={k}"),
                    || Ok(equal(&kind.integral(n, k)?, &kind.single_integral(n, k)?)),
                ));
            }
            out.push(run(&format!("{s}_ode"), format!("{base} k={k}"), || {
                let r = kind.ode_residual(n, k)?;
                Ok((r.is_zero(), format!("residual {r}")))
            }));
            out.push(run(
                &format!("{s}_endpoint"),
                format!("{base} k={k}"),
                || {
                    let v = kind.coefficients(n, k)?.eval(&qi(1));
                    let want = if (n - k) % 2 == 0 { qi(1) } else { qi(-1) };
                    Ok(equal(&v, &want))
                },
            ));
            if kind == MarginalKind::A {
                let p = pq(&qi(-1), &qi(0), n, k);
                out.push(run("a_diff_diff_upper", format!("{base} k={k}"), || {
                    let r = diff_diff_upper_residual(&p)?;
                    Ok((r.is_zero(), format!("residual {r}")))
                }));
                if k >= 1 {
                    out.push(run("a_diff_diff_lower", format!("{base} k={k}"), || {
                        let r = diff_diff_lower_residual(&p)?;
                        Ok((r.is_zero(), format!("residual {r}")))
                    }));
                }
            }
        }
        out.push(run(&format!("{s}_singular_member_classical"), base, || {
            let got = kind.coefficients(n, 0)?;
            let want = match kind {
                MarginalKind::A => shifted_jacobi_coefficients(n, &qi(0), &qi(0)),
                MarginalKind::T => shifted_chebyshev(n),
            };
            Ok(equal(&got, &want))
        }));
        out
    })
}

/// Beta moments, Gauss–Jacobi rules, the semi-axis transform and the
/// Legendre-type rule.
pub fn quadrature(nmax: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let grid = [q(-1, 2), qi(0), q(1, 2), qi(1), q(3, 2), qi(2), q(7, 3)];
    for a in &grid {
        for b in &grid {
            out.push(run("beta_moment_symmetry", format!("a={a} b={b}"), || {
                Ok(equal(&beta_moment(a, b)?, &beta_moment(b, a)?))
            }));
        }
    }
    let third = [-0.5, 0.0, 0.5];
    let mut rule_cases = Vec::new();
    for m in 1..=20usize {
        for &a in &third {
            for &b in &third {
                rule_cases.push((m, a, b));
            }
        }
    }
    out.extend(par_groups(&rule_cases, |&(m, a, b)| {
        vec![run(
            "gauss_jacobi_exactness",
            format!("m={m} a={a} b={b}"),
            || {
                let rule = gauss_jacobi_rule(m, a, b)?;
                if rule.weights().iter().any(|&w| !(w > 0.0)) {
                    return Ok((false, "nonpositive weight".into()));
                }
                let mut worst = 0.0_f64;
                for j in 0..2 * m {
                    let want = beta_moment(&(a + j as f64), &b)?;
                    worst = worst.max(rel_err(rule.apply(|x| x.powi(j as i32)), want));
                }
                Ok(within(worst, 1e-12))
            },
        )]
    }));

    let params = [q(-1, 2), qi(0), q(1, 2), q(3, 2)];
    let mut ip_cases = Vec::new();
    for a in &params {
        for b in &params {
            for n in 0..=nmax {
                ip_cases.push((a.clone(), b.clone(), n));
            }
        }
    }
    out.extend(par_groups(&ip_cases, |(alpha, beta, n)| {
        let n = *n;
        vec![run("inner_product_vs_rule", tag(alpha, beta, n), || {
            let (af, bf) = (alpha.to_f64(), beta.to_f64());
            let rule = gauss_jacobi_rule(n + 1, af, bf)?;
            let mut worst = 0.0_f64;
            for k in 0..=n {
                let pk = ajp_coefficients(&pq(alpha, beta, n, k))?;
                let hk = ajp_norm_h(&pq(alpha, beta, n, k))?.to_f64();
                for l in k..=n {
                    let pl = ajp_coefficients(&pq(alpha, beta, n, l))?;
                    let hl = ajp_norm_h(&pq(alpha, beta, n, l))?.to_f64();
                    let exact = weighted_inner_product(&pk, &pl, alpha, beta)?.to_f64();
                    let fk = PolyParams::new(af, bf, n, k);
                    let fl = PolyParams::new(af, bf, n, l);
                    let mut numeric = 0.0;
                    for (x, w) in rule.nodes().iter().zip(rule.weights()) {
                        numeric += w * ajp_eval_stable(&fk, *x)? * ajp_eval_stable(&fl, *x)?;
                    }
                    worst = worst.max((numeric - exact).abs() / (hk * hl).sqrt());
                }
            }
            Ok(within(worst, 1e-10))
        })]
    }));

    for n in 1..=nmax {
        out.push(run(
            "semi_axis_transform",
            format!("alpha=2 beta=1 n={n}"),
            || {
                let sys = ExpPolySystem::new(qi(2), qi(1), n)?;
                let fsys = sys.to_f64();
                let mut worst = 0.0_f64;
                for k in 1..=n {
                    let exact = sys.inner_product(k, n)?.to_f64();
                    let numeric = integrate_semi_axis(
                        |t| {
                            e_eval_stable(&fsys, k, t).unwrap_or(f64::NAN)
                                * e_eval_stable(&fsys, n, t).unwrap_or(f64::NAN)
                        },
                        2.0,
                        1.0,
                        n + 2,
                    )?;
                    worst = worst.max((numeric - exact).abs() / e_norm(&fsys, n)?);
                }
                Ok(within(worst, 1e-12))
            },
        ));
    }
    out.extend(legendre_type(nmax));
    out
}

/// The Legendre-type rule: exactness for `x^1 .. x^(2n)`, inexact mass,
/// the `n = 1` rule and the `n = 2` weights against a direct solve.
pub fn legendre_type(nmax: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=nmax {
        let at = format!("n={n}");
        out.push(run("legendre_type_exactness", at.clone(), || {
            let rule = legendre_type_quadrature(n)?;
            let mut worst = 0.0_f64;
            for m in 1..=2 * n {
                let got = rule.apply(|x| x.powi(m as i32));
                worst = worst.max(rel_err(got, 1.0 / (m as f64 + 1.0)));
            }
            Ok(within(worst, 1e-9))
        }));
        out.push(run("legendre_type_mass", at.clone(), || {
            let gap = (legendre_type_quadrature(n)?.weight_sum() - 1.0).abs();
            Ok((gap > 1e-3, format!("|sum w - 1| = {}", format_float(gap))))
        }));
        out.push(run("legendre_type_vs_gauss", at, || {
            let rule = legendre_type_quadrature(n)?;
            let gauss = gauss_jacobi_rule(n, 1.0, 0.0)?;
            let mut worst = 0.0_f64;
            for ((w, gw), x) in rule
                .weights()
                .iter()
                .zip(gauss.weights())
                .zip(gauss.nodes())
            {
                worst = worst.max(rel_err(*w, gw / x));
            }
            Ok(within(worst, 1e-12))
        }));
    }
    out.push(run("legendre_type_n1", "n=1".into(), || {
        let rule = legendre_type_quadrature(1)?;
        let err = (rule.nodes()[0] - 2.0 / 3.0)
            .abs()
            .max((rule.weights()[0] - 0.75).abs());
        Ok(within(err, 1e-15))
    }));
    out.push(run("legendre_type_n2_direct_solve", "n=2".into(), || {
        let rule = legendre_type_quadrature(2)?;
        let (x1, x2) = (rule.nodes()[0], rule.nodes()[1]);
        // w1 x1 + w2 x2 = 1/2, w1 x1^2 + w2 x2^2 = 1/3
        let det = x1 * x2 * x2 - x2 * x1 * x1;
        let w1 = (0.5 * x2 * x2 - x2 / 3.0) / det;
        let w2 = (x1 / 3.0 - 0.5 * x1 * x1) / det;
        let err = (rule.weights()[0] - w1)
            .abs()
            .max((rule.weights()[1] - w2).abs());
        let (ok, detail) = within(err, 1e-6);
        Ok((
            ok,
            format!(
                "{detail}; weights {} {}",
                format_float(w1),
                format_float(w2)
            ),
        ))
    }));
    out
}

/// Exponential systems, their zeros and the semi-axis rule.
pub fn exponential(nmax: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let mut cases = Vec::new();
    for a in 1..=3 {
        for b in 0..=2 {
            for n in 1..=nmax {
                cases.push((a, b, n));
            }
        }
    }
    out.extend(par_groups(&cases, |&(a, b, n)| {
        let base = format!("alpha={a} beta={b} n={n}");
        let mut out = Vec::new();
        out.push(run("e_norm_exact", base.clone(), || {
            let sys = ExpPolySystem::new(qi(a), qi(b), n)?;
            for k in 1..=n {
                for l in k..=n {
                    let got = sys.inner_product(k, l)?;
                    let want = if k == l {
                        e_norm(&sys, k)?
                    } else {
                        ExactValue::zero()
                    };
                    if got != want {
                        return Ok((false, format!("k={k} l={l}: got {got}, want {want}")));
                    }
                }
            }
            Ok((true, format!("{n} members")))
        }));
        out.push(run("e_norm_numeric", base.clone(), || {
            let sys = ExpPolySystem::new(a as f64, b as f64, n)?;
            let mut worst = 0.0_f64;
            for k in 1..=n {
                let numeric = integrate_semi_axis(
                    |t| e_eval_stable(&sys, k, t).unwrap_or(f64::NAN).powi(2),
                    sys.alpha,
                    sys.beta,
                    n + 2,
                )?;
                worst = worst.max(rel_err(numeric, e_norm(&sys, k)?));
            }
            Ok(within(worst, 1e-12))
        }));
        out.push(run("substitution", base, || {
            let sys = ExpPolySystem::new(a as f64, b as f64, n)?;
            for k in 0..=n {
                for t in [0.0_f64, 0.5, 2.0] {
                    let direct = ajp_eval(&sys.params(k), &(-t).exp())?;
                    if e_eval(&sys, k, t)? != direct {
                        return Ok((false, format!("k={k} t={t}")));
                    }
                    let stable = e_eval_stable(&sys, k, t)?;
                    let scale = ajp_coefficients(&sys.params(k))?.abs_eval((-t).exp());
                    if (stable - direct).abs() > 1e-13 * scale {
                        return Ok((false, format!("k={k} t={t}: stable {stable} vs {direct}")));
                    }
                }
            }
            Ok((true, "identical".into()))
        }));
        out
    }));

    for n in 1..=nmax {
        let at = format!("n={n}");
        out.push(run("discrete_orthogonality", at.clone(), || {
            let rule = semi_axis_rule(n)?;
            let sys = ExpPolySystem::new(0.0, 0.0, n)?;
            let mut worst = 0.0_f64;
            for k in 1..=n {
                for l in k..=n {
                    let got = rule.apply(|t| {
                        e_eval_stable(&sys, k, t).unwrap_or(f64::NAN)
                            * e_eval_stable(&sys, l, t).unwrap_or(f64::NAN)
                    });
                    let hk = 0.5 / k as f64;
                    let want = if k == l { hk } else { 0.0 };
                    worst = worst.max((got - want).abs() / (hk * 0.5 / l as f64).sqrt());
                }
            }
            Ok(within(worst, 1e-9))
        }));
        out.push(run("semi_axis_rule_exactness", at.clone(), || {
            let rule = semi_axis_rule(n)?;
            let mut worst = 0.0_f64;
            for m in 2..=2 * n + 1 {
                let got = rule.apply(|t| (-(m as f64) * t).exp());
                worst = worst.max(rel_err(got, 1.0 / m as f64));
            }
            Ok(within(worst, 1e-9))
        }));
        for k in 1..=n {
            out.push(run("ea_derivative_relation", format!("{at} k={k}"), || {
                let r = ea_derivative_relation_poly(n, k)?;
                Ok((r.is_zero(), format!("residual {r}")))
            }));
        }
        out.push(run("marginal_exponential_forms", at.clone(), || {
            let t = 0.75;
            let top = ea_eval(n, n, t)?;
            let tt = et_eval(n, n, t)?;
            let want = (-(n as f64) * t).exp();
            let x = (-t).exp();
            let a_direct = a_coefficients(n, 0)?.to_f64().eval(&x);
            let ok = rel_err(top, want) < 1e-14
                && rel_err(tt, want) < 1e-14
                && ea_eval(n, 0, t)? == a_direct;
            Ok((ok, format!("E_nn({t}) = {}", format_float(top))))
        }));
    }

    out.push(run("zeros_closed_form", "n=1".into(), || {
        let mut worst = (lambda_max(0.0, 0.0, 1)? - LN_2).abs();
        worst = worst.max((lambda_max(1.0, 0.0, 1)? - 1.5f64.ln()).abs());
        for &a in &[0.0_f64, 0.5, 1.0, 2.0, 5.0] {
            worst = worst.max((lambda_max(a, 0.0, 1)? - ((a + 2.0) / (a + 1.0)).ln()).abs());
        }
        Ok(within(worst, 1e-12))
    }));
    let zero_params = [
        (0.0, 0.0),
        (0.5, 0.0),
        (1.0, 0.0),
        (2.0, 0.5),
        (5.0, 1.0),
        (-0.5, -0.5),
        (3.0, 3.0),
    ];
    let mut zero_cases = Vec::new();
    for &(a, b) in &zero_params {
        for n in 1..=nmax {
            zero_cases.push((a, b, n));
        }
    }
    out.extend(par_groups(&zero_cases, |&(a, b, n)| {
        let at = format!("alpha={a} beta={b} n={n}");
        vec![
            run("zero_residual", at.clone(), || {
                let z = e_zeros(a, b, n)?;
                let shape = z.lambdas.len() == n
                    && z.lambdas[0] > 0.0
                    && z.lambdas.windows(2).all(|w| w[0] < w[1]);
                let (ok, detail) = within(z.max_residual(), 1e-13);
                Ok((ok && shape, detail))
            }),
            run("zeros_gauss_nodes", at, || {
                let z = e_zeros(a, b, n)?;
                let rule = gauss_jacobi_rule(n, a, b)?;
                let worst = z
                    .source_x
                    .iter()
                    .rev()
                    .zip(rule.nodes())
                    .map(|(x, g)| (x - g).abs())
                    .fold(0.0, f64::max);
                Ok(within(worst, 1e-12))
            }),
        ]
    }));
    out
}

/// Z-system search, construction and collocation for `n <= min(nmax, 5)`.
pub fn zsystems(nmax: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let wholes: Vec<f64> = (0..=10).map(f64::from).collect();
    out.push(run(
        "z_search_wholes",
        "n=1 omega=0 candidates=0..10".into(),
        || {
            let (a, g) = z_search(1, 0.0, &wholes)?;
            Ok((
                a == 0.0 && g == LN_2,
                format!("alpha {a}, gamma {}", format_float(g)),
            ))
        },
    ));
    out.push(run(
        "z_search_single",
        "n=1 omega=0 candidates=10".into(),
        || {
            let (a, g) = z_search(1, 0.0, &[10.0])?;
            let err = (g - (12.0f64 / 11.0).ln()).abs();
            Ok((
                a == 10.0 && err < 1e-14,
                format!("gamma {}", format_float(g)),
            ))
        },
    ));
    out.push(run(
        "z_search_infeasible",
        "n=1 omega=0 candidates=-0.9".into(),
        || match z_search(1, 0.0, &[-0.9]) {
            Err(AltError::Infeasible(_)) => Ok((true, "infeasible".into())),
            other => Ok((false, format!("{other:?}"))),
        },
    ));
    out.push(run("z_search_real", "n=1 omega=0".into(), || {
        let (a, _) = z_search_real(1, 0.0)?;
        let gamma = lambda_max(a, 0.0, 1)?;
        let err = (a - (2.0 - E) / (E - 1.0)).abs();
        let ok = err < 1e-10 && (gamma - 1.0).abs() < 1e-12;
        Ok((
            ok,
            format!("alpha {}, gamma {}", format_float(a), format_float(gamma)),
        ))
    }));
    let cands = candidates_up_to(128, false);
    let mut cases = Vec::new();
    for n in 1..=nmax.min(5) {
        for &omega in &[0.0, 0.5, 1.0] {
            cases.push((n, omega));
        }
    }
    out.extend(par_groups(&cases, |&(n, omega)| {
        let at = format!("n={n} omega={omega} candidates=0..128");
        let spec = match z_build(n, omega, &cands) {
            Ok(s) => s,
            Err(e) => return vec![run("z_endpoint", at, || Err(e))],
        };
        vec![
            run("z_endpoint", at.clone(), || {
                let inside = spec.lambdas.iter().all(|&l| l > 0.0 && l <= 1.0 + 1e-15);
                let (ok, detail) = within(spec.endpoint_value.abs(), 1e-9);
                Ok((
                    ok && inside && spec.gamma_n <= 1.0,
                    format!("{detail}; alpha {}", spec.alpha_n),
                ))
            }),
            run("z_scaling_identity", at.clone(), || {
                let sys = ExpPolySystem::new(spec.alpha_n, spec.beta_n, n)?;
                for k in 0..=n {
                    if spec.eval(k, 1.0)? != e_eval_stable(&sys, k, spec.gamma_n)? {
                        return Ok((false, format!("k={k}")));
                    }
                }
                Ok((true, "Z_nk(1) = E_nk(gamma)".into()))
            }),
            run("z_search_permutation", at.clone(), || {
                let mut reversed = cands.clone();
                reversed.reverse();
                let forward = z_search(n, omega, &cands)?;
                let backward = z_search(n, omega, &reversed)?;
                Ok((forward == backward, format!("{forward:?}")))
            }),
            run("z_collocation_constant", at, || {
                let fit = z_collocation_fit(|_| 1.0, &spec)?;
                let err = (fit.coeffs[0] - 1.0)
                    .abs()
                    .max(fit.coeffs[1..].iter().map(|c| c.abs()).fold(0.0, f64::max));
                Ok(within(err, 1e-10))
            }),
        ]
    }));
    out
}

/// Named verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Quad,
    Marginal,
    Exp,
    Z,
    All,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Core,
        Suite::Quad,
        Suite::Marginal,
        Suite::Exp,
        Suite::Z,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Quad => "quad",
            Suite::Marginal => "marginal",
            Suite::Exp => "exp",
            Suite::Z => "z",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = AltError;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| AltError::InvalidParameters(format!("unknown suite {s}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub suite: Suite,
    pub nmax: usize,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub nmax: usize,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn summary(&self) -> Summary {
        let passed = self.checks.iter().filter(|c| c.passed).count();
        Summary {
            suite: self.suite,
            nmax: self.nmax,
            total: self.checks.len(),
            passed,
            failed: self.checks.len() - passed,
        }
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// `{"summary": .., "failures": [..]}`, or every check with `all_checks`.
    pub fn to_json(&self, all_checks: bool) -> serde_json::Value {
        let listed: Vec<&Check> = if all_checks {
            self.checks.iter().collect()
        } else {
            self.failures().collect()
        };
        let key = if all_checks { "checks" } else { "failures" };
        serde_json::json!({ "summary": self.summary(), key: listed })
    }
}

/// Runs a suite with degree bound `nmax` (the Z-system checks cap it at 5).
pub fn run_suite(suite: Suite, nmax: usize) -> Report {
    let checks = match suite {
        Suite::Core => {
            let mut c = exact_orthogonality(nmax);
            c.extend(float_orthogonality(nmax));
            c.extend(identities(nmax));
            c
        }
        Suite::Quad => quadrature(nmax),
        Suite::Marginal => marginal(nmax),
        Suite::Exp => exponential(nmax),
        Suite::Z => zsystems(nmax),
        Suite::All => [
            Suite::Core,
            Suite::Quad,
            Suite::Marginal,
            Suite::Exp,
            Suite::Z,
        ]
        .into_iter()
        .flat_map(|s| run_suite(s, nmax).checks)
        .collect(),
    };
    Report {
        suite,
        nmax,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_all(checks: &[Check]) {
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(!checks.is_empty());
    }

    #[test]
    fn small_suites_pass() {
        for suite in [
            Suite::Core,
            Suite::Quad,
            Suite::Marginal,
            Suite::Exp,
            Suite::Z,
        ] {
            assert_all(&run_suite(suite, 3).checks);
        }
    }

    #[test]
    fn failures_are_reported_with_parameters() {
        let c = run("demo", "n=2".into(), || {
            Err(AltError::Divergent("x".into()))
        });
        assert!(!c.passed);
        assert!(c.detail.starts_with("error: divergent"));
        let report = Report {
            suite: Suite::Core,
            nmax: 2,
            checks: vec![c],
        };
        let json = report.to_json(false);
        assert_eq!(json["summary"]["failed"], 1);
        assert_eq!(json["failures"][0]["params"], "n=2");
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(Suite::Marginal, 4).to_json(true);
        let b = run_suite(Suite::Marginal, 4).to_json(true);
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
