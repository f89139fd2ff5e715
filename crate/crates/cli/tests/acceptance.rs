//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use altpoly::exppoly::legendre_type_quadrature;
use altpoly::marginal::MarginalKind;
use altpoly::verify::{
    exact_orthogonality, exponential, float_orthogonality, identities, legendre_type, marginal,
    zsystems, Check,
};
use altpoly::{ExactValue, Rational};

struct Verdict {
    passed: bool,
    detail: String,
}

fn from_checks(checks: &[Check]) -> Verdict {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    let detail = match failed.first() {
        None => format!("{} checks", checks.len()),
        Some(c) => format!(
            "{} of {} failed; first {} [{}]: {}",
            failed.len(),
            checks.len(),
            c.name,
            c.params,
            c.detail
        ),
    };
    Verdict {
        passed: failed.is_empty() && !checks.is_empty(),
        detail,
    }
}

fn named(checks: Vec<Check>, names: &[&str]) -> Vec<Check> {
    checks
        .into_iter()
        .filter(|c| names.contains(&c.name.as_str()))
        .collect()
}

fn altpoly(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_altpoly"))
        .args(args)
        .env_remove("ALTPOLY_MODE")
        .output()
        .expect("binary runs")
}

fn criterion_4() -> Verdict {
    let mut checks = named(
        marginal(12),
        &[
            "a_norm",
            "a_single_integral",
            "t_norm",
            "t_single_integral",
            "a_norm_singular",
            "t_norm_singular",
        ],
    );
    // A-kind closed values 1/(2k) and 1/k, stated independently of the library forms
    for n in 1..=12usize {
        for k in 1..=n {
            let kk = k as i64;
            let norm = MarginalKind::A.inner_product(n, k, k);
            let single = MarginalKind::A.integral(n, k);
            let ok = norm.as_ref().ok()
                == Some(&ExactValue::rational(Rational::new(
                    1.into(),
                    (2 * kk).into(),
                )))
                && single.as_ref().ok()
                    == Some(&ExactValue::rational(Rational::new(1.into(), kk.into())));
            checks.push(Check {
                name: "a_reciprocal_values".into(),
                params: format!("n={n} k={k}"),
                passed: ok,
                detail: format!("{norm:?} {single:?}"),
            });
        }
    }
    from_checks(&checks)
}

fn criterion_6() -> Verdict {
    let mut v = from_checks(&legendre_type(8));
    if let Ok(rule) = legendre_type_quadrature(2) {
        v.detail = format!(
            "{}; n=2 weights {:.7} {:.7}",
            v.detail,
            rule.weights()[0],
            rule.weights()[1]
        );
    }
    v
}

fn criterion_10() -> Verdict {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut problems = Vec::new();
    for (family, file) in [("a", "plot_a_5.csv"), ("t", "plot_t_5.csv")] {
        let out = altpoly(&[
            "plot-data",
            "--family",
            family,
            "--n",
            "5",
            "--points",
            "512",
        ]);
        if !out.status.success() {
            problems.push(format!("{family}: exit {:?}", out.status.code()));
            continue;
        }
        let text = String::from_utf8_lossy(&out.stdout).into_owned();
        let last: Vec<f64> = text
            .lines()
            .last()
            .unwrap_or_default()
            .split(',')
            .map(|c| c.parse().unwrap_or(f64::NAN))
            .collect();
        if last.len() != 6 || last[0] != 1.0 {
            problems.push(format!("{family}: last row {last:?}"));
        } else {
            for (k, value) in last.iter().enumerate().skip(1) {
                let want = if (5 - k) % 2 == 0 { 1.0 } else { -1.0 };
                if value.is_nan() || (value - want).abs() >= 1e-12 {
                    problems.push(format!("{family}: k={k} ends at {value}"));
                }
            }
        }
        if text.lines().count() != 513 {
            problems.push(format!("{family}: {} lines", text.lines().count()));
        }
        match std::fs::read_to_string(golden.join(file)) {
            Ok(g) if g == text => {}
            Ok(_) => problems.push(format!("{family}: differs from {file}")),
            Err(e) => problems.push(format!("{file}: {e}")),
        }
    }
    Verdict {
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            "endpoints (-1)^(5-k), goldens identical".into()
        } else {
            problems.join("; ")
        },
    }
}

fn criterion_11() -> Verdict {
    let mut problems = Vec::new();
    let repeated: [&[&str]; 3] = [
        &["verify", "--suite", "all", "--nmax", "4", "--all-checks"],
        &["plot-data", "--family", "a", "--n", "5", "--points", "512"],
        &["plot-data", "--family", "t", "--n", "5", "--points", "512"],
    ];
    for args in repeated {
        let first = altpoly(args);
        let second = altpoly(args);
        if first.status.code() != Some(0)
            || first.stdout != second.stdout
            || first.status.code() != second.status.code()
        {
            problems.push(format!("{} not reproducible", args.join(" ")));
        }
    }
    let failing: [(&[&str], i32); 4] = [
        (
            &["zbuild", "--n", "1", "--omega", "0", "--candidates=-0.9"],
            1,
        ),
        (&["quad", "--family", "exp", "--alpha", "2", "--n", "3"], 1),
        (
            &[
                "coeffs",
                "--family",
                "ajp",
                "--n",
                "2",
                "--k",
                "0",
                "--no-such-flag",
            ],
            2,
        ),
        (&["verify", "--suite", "nonexistent"], 2),
    ];
    for (args, code) in failing {
        let out = altpoly(args);
        if out.status.code() != Some(code) {
            problems.push(format!(
                "{} exited {:?}, want {code}",
                args.join(" "),
                out.status.code()
            ));
        }
        if code == 1 {
            let parsed: Result<serde_json::Value, _> = serde_json::from_slice(&out.stderr);
            if !parsed.map(|v| v["kind"].is_string()).unwrap_or(false) {
                problems.push(format!("{}: stderr is not error JSON", args.join(" ")));
            }
        }
    }
    Verdict {
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            "byte-identical reruns, exit codes 1 and 2 honored".into()
        } else {
            problems.join("; ")
        },
    }
}

type Criterion = (&'static str, Box<dyn Fn() -> Verdict>);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            "exact orthogonality, alpha,beta in {0,1,2}, n <= 10",
            Box::new(|| from_checks(&exact_orthogonality(10))),
        ),
        (
            "float orthogonality, alpha,beta in {-1/2,1/2,3/2}, n <= 10",
            Box::new(|| from_checks(&float_orthogonality(10))),
        ),
        (
            "identity suite, n <= 8",
            Box::new(|| from_checks(&identities(8))),
        ),
        (
            "marginal norms and single integrals, n <= 12",
            Box::new(criterion_4),
        ),
        (
            "singular members are shifted Legendre / Chebyshev, n <= 10",
            Box::new(|| {
                from_checks(&named(
                    marginal(10),
                    &["a_singular_member_classical", "t_singular_member_classical"],
                ))
            }),
        ),
        ("Legendre-type quadrature, n <= 8", Box::new(criterion_6)),
        (
            "semi-axis orthogonality and norms, n <= 8",
            Box::new(|| {
                from_checks(&named(
                    exponential(8),
                    &["discrete_orthogonality", "e_norm_exact", "e_norm_numeric"],
                ))
            }),
        ),
        (
            "zeros: closed forms and residuals",
            Box::new(|| {
                from_checks(&named(
                    exponential(8),
                    &["zeros_closed_form", "zero_residual", "zeros_gauss_nodes"],
                ))
            }),
        ),
        ("Z-systems, n <= 5", Box::new(|| from_checks(&zsystems(5)))),
        (
            "plot data endpoints and golden files",
            Box::new(criterion_10),
        ),
        ("CLI determinism and exit codes", Box::new(criterion_11)),
    ];
    let mut failures = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        if !v.passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {title} ({:.1}s): {}",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
