//! Real roots in `(0, 1)` of polynomials known to have only simple real zeros
//! there.

use nalgebra::{DMatrix, Schur};
use num_traits::Signed;

use crate::error::{AltError, Result};
use crate::poly::DensePoly;
use crate::scalar::{rational_from_f64, rational_to_f64, Rational};

/// Roots with their relative backward errors.
#[derive(Debug, Clone, PartialEq)]
pub struct Roots {
    /// Ascending.
    pub values: Vec<f64>,
    /// `|p(x)| / sum |c_i| |x|^i` with `p(x)` evaluated exactly.
    pub residuals: Vec<f64>,
}

/// Finds all `deg p` roots of `p` in `(0, 1)`.
///
/// `stable(x)` must return `(p(x), p'(x))` up to a positive factor, computed
/// without the cancellation of the monomial form; it drives Newton polishing
/// and the bisection fallback.
pub fn unit_interval_roots(
    p: &DensePoly<Rational>,
    stable: impl Fn(f64) -> (f64, f64),
) -> Result<Roots> {
    let degree = p
        .degree()
        .filter(|&d| d > 0)
        .ok_or_else(|| AltError::RootFailure("polynomial has no roots".into()))?;
    let estimates = match companion_estimates(p, degree) {
        Some(e) => e,
        None => bracketed_roots(&stable, degree)?,
    };
    let polished = match polish(&estimates, &stable) {
        Some(r) => r,
        None => bracketed_roots(&stable, degree)?,
    };
    check_simple(&polished)?;
    let residuals = polished.iter().map(|&x| backward_error(p, x)).collect();
    Ok(Roots {
        values: polished,
        residuals,
    })
}

/// Eigenvalues of the balanced companion matrix; `None` when the Schur
/// iteration fails or a root is not real and inside `(0, 1)`.
fn companion_estimates(p: &DensePoly<Rational>, degree: usize) -> Option<Vec<f64>> {
    let lead = p.coeff(degree);
    let mut c = DMatrix::<f64>::zeros(degree, degree);
    for i in 0..degree {
        c[(i, degree - 1)] = -rational_to_f64(&(p.coeff(i) / lead.clone()));
        if i + 1 < degree {
            c[(i + 1, i)] = 1.0;
        }
    }
    balance(&mut c);
    let schur = Schur::try_new(c, f64::EPSILON, 100_000)?;
    let eig = schur.complex_eigenvalues();
    let mut roots = Vec::with_capacity(degree);
    for z in eig.iter() {
        if z.im.abs() > 1e-6 || !(z.re > 0.0 && z.re < 1.0) {
            return None;
        }
        roots.push(z.re);
    }
    roots.sort_by(f64::total_cmp);
    Some(roots)
}

/// Diagonal similarity scaling by powers of two equalizing row and column
/// norms.
fn balance(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                col += a[(j, i)].abs();
                row += a[(i, j)].abs();
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let (mut c, r) = (col, row);
            while c < r / 2.0 {
                f *= 2.0;
                c *= 4.0;
            }
            while c > r * 2.0 {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * total {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// Newton from each estimate; `None` if an iterate escapes its neighborhood.
fn polish(estimates: &[f64], stable: &impl Fn(f64) -> (f64, f64)) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(estimates.len());
    for (i, &x0) in estimates.iter().enumerate() {
        let lo = if i == 0 {
            0.0
        } else {
            0.5 * (estimates[i - 1] + x0)
        };
        let hi = if i + 1 == estimates.len() {
            1.0
        } else {
            0.5 * (x0 + estimates[i + 1])
        };
        let mut x = x0;
        for _ in 0..100 {
            let (f, df) = stable(x);
            if f == 0.0 {
                break;
            }
            if df == 0.0 || !df.is_finite() {
                return None;
            }
            let step = f / df;
            let next = x - step;
            if !(next > lo && next < hi) {
                return None;
            }
            let done = (next - x).abs() <= 2.0 * f64::EPSILON * x.abs();
            x = next;
            if done {
                break;
            }
        }
        out.push(x);
    }
    Some(out)
}

/// Sign-change scan of `(0, 1)` followed by bisection.
fn bracketed_roots(stable: &impl Fn(f64) -> (f64, f64), degree: usize) -> Result<Vec<f64>> {
    let cells = 256 * degree;
    let grid: Vec<f64> = (0..=cells).map(|i| i as f64 / cells as f64).collect();
    let mut roots = Vec::new();
    let mut prev = (grid[0], stable(grid[0]).0);
    for &x in &grid[1..] {
        let fx = stable(x).0;
        if fx == 0.0 && x < 1.0 {
            roots.push(x);
        } else if prev.1 != 0.0 && prev.1.signum() != fx.signum() {
            roots.push(bisect(stable, prev.0, x, prev.1));
        }
        prev = (x, fx);
    }
    if roots.len() != degree {
        return Err(AltError::RootFailure(format!(
            "found {} sign changes in (0, 1), expected {degree}",
            roots.len()
        )));
    }
    Ok(roots)
}

fn bisect(stable: &impl Fn(f64) -> (f64, f64), mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let sign_lo = f_lo.signum();
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        let fm = stable(mid).0;
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn check_simple(roots: &[f64]) -> Result<()> {
    if let Some(&x) = roots.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
        return Err(AltError::RootFailure(format!("root {x} outside (0, 1)")));
    }
    for w in roots.windows(2) {
        if w[1] - w[0] <= 1e-12 * w[1] {
            return Err(AltError::RootFailure(format!(
                "roots {} and {} coincide; multiple root suspected",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// `|p(x)| / sum |c_i| |x|^i` with the numerator computed in exact arithmetic.
pub fn backward_error(p: &DensePoly<Rational>, x: f64) -> f64 {
    let xq = rational_from_f64(x).expect("finite root");
    let value = rational_to_f64(&p.eval(&xq).abs());
    let scale = p
        .coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * x.abs() + rational_to_f64(&c.abs()));
    value / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alt_jacobi::jacobi_eval;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn quadratic_roots() {
        // 3 - 12x + 10x^2
        let p = DensePoly::new(vec![q(3, 1), q(-12, 1), q(10, 1)]);
        let r =
            unit_interval_roots(&p, |x| (3.0 - 12.0 * x + 10.0 * x * x, 20.0 * x - 12.0)).unwrap();
        let s = 6f64.sqrt();
        assert!((r.values[0] - (6.0 - s) / 10.0).abs() < 1e-15);
        assert!((r.values[1] - (6.0 + s) / 10.0).abs() < 1e-15);
        assert!(r.residuals.iter().all(|&e| e < 1e-15));
    }

    #[test]
    fn bisection_fallback_agrees() {
        let n = 7;
        let stable = |x: f64| {
            let y = 1.0 - 2.0 * x;
            (
                jacobi_eval(n, 0.0, 0.0, y),
                -2.0 * 0.5 * (n as f64 + 1.0) * jacobi_eval(n - 1, 1.0, 1.0, y),
            )
        };
        let p = crate::alt_jacobi::shifted_jacobi_coefficients(n, &q(0, 1), &q(0, 1));
        let fast = unit_interval_roots(&p, stable).unwrap();
        let slow = bracketed_roots(&stable, n).unwrap();
        for (a, b) in fast.values.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_double_root() {
        // (2x - 1)^2
        let p = DensePoly::new(vec![q(1, 1), q(-4, 1), q(4, 1)]);
        let r = unit_interval_roots(&p, |x| ((2.0 * x - 1.0).powi(2), 4.0 * (2.0 * x - 1.0)));
        assert!(matches!(r, Err(AltError::RootFailure(_))));
    }

    #[test]
    fn balancing_preserves_spectrum() {
        let mut a = DMatrix::from_row_slice(2, 2, &[1.0, 1e6, 1e-6, 2.0]);
        let before = a.trace();
        balance(&mut a);
        assert_eq!(a.trace(), before);
        assert!(a[(0, 1)].abs() < 1e3);
    }
}
