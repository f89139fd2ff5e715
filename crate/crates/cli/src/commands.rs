//! Subcommand implementations. Every command renders a [`Table`] for CSV and
//! either that table or a dedicated document for JSON.

use std::fs;

use altpoly::alt_jacobi::{ajp_coefficients, ajp_eval_stable, PolyParams};
use altpoly::exppoly::{
    default_projection_nodes, e_eval_stable, ea_eval, et_eval, legendre_type_quadrature, project,
    semi_axis_rule, zero_table, ExpPolySystem,
};
use altpoly::marginal::{plot_data, MarginalKind};
use altpoly::quad::gauss_jacobi_rule;
use altpoly::scalar::{parse_rational, rational_to_f64};
use altpoly::table::{format_float, Table};
use altpoly::verify::{run_suite, Suite};
use altpoly::zfun::{candidates_up_to, z_build, z_build_real, z_collocation_fit, ZSystemSpec};
use altpoly::{AltError, DensePoly, Rational};

use crate::{Command, Family, Format, Mode, Output, Params, ZArgs};

#[derive(Debug)]
pub enum Failure {
    /// Flag combination rejected before any computation.
    Usage(String),
    Computation {
        kind: String,
        message: String,
    },
}

impl From<AltError> for Failure {
    fn from(e: AltError) -> Self {
        Failure::Computation {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage<T>(message: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(message.into()))
}

/// Test functions accepted by `project`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Function {
    Const,
    Decay(f64),
    Rational(f64),
    Gaussian(f64),
}

impl Function {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            Function::Const => 1.0,
            Function::Decay(a) => (-a * t).exp(),
            Function::Rational(a) => 1.0 / (1.0 + a * t),
            Function::Gaussian(a) => (-a * t * t).exp(),
        }
    }
}

pub fn parse_function(s: &str) -> std::result::Result<Function, String> {
    if s == "const" {
        return Ok(Function::Const);
    }
    let (name, arg) = s
        .split_once(':')
        .ok_or_else(|| format!("unknown function {s}"))?;
    let a: f64 = arg.parse().map_err(|_| format!("bad parameter in {s}"))?;
    if !a.is_finite() || a < 0.0 {
        return Err(format!("parameter in {s} must be finite and nonnegative"));
    }
    match name {
        "decay" => Ok(Function::Decay(a)),
        "rational" => Ok(Function::Rational(a)),
        "gaussian" => Ok(Function::Gaussian(a)),
        _ => Err(format!("unknown function {s}")),
    }
}

/// Parsed `(alpha, beta)`; the exact pair is absent when either parameter
/// has no rational reading.
struct Resolved {
    exact: Option<(Rational, Rational)>,
    alpha: f64,
    beta: f64,
    mode: Mode,
}

fn parse_param(name: &str, s: &str) -> Outcome<(Option<Rational>, f64)> {
    if let Some(q) = parse_rational(s) {
        return Ok((Some(q.clone()), rational_to_f64(&q)));
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok((None, v)),
        _ => usage(format!("--{name} expects a finite number or p/q, got {s}")),
    }
}

fn env_mode() -> Outcome<Option<Mode>> {
    match std::env::var("ALTPOLY_MODE") {
        Err(_) => Ok(None),
        Ok(v) => match v.as_str() {
            "exact" => Ok(Some(Mode::Exact)),
            "float" => Ok(Some(Mode::Float)),
            other => usage(format!("ALTPOLY_MODE must be exact or float, got {other}")),
        },
    }
}

fn resolve(params: &Params) -> Outcome<Resolved> {
    let (qa, alpha) = parse_param("alpha", &params.alpha)?;
    let (qb, beta) = parse_param("beta", &params.beta)?;
    let exact = qa.zip(qb);
    let mode = match params.mode.or(env_mode()?) {
        Some(Mode::Exact) if exact.is_none() => {
            return usage("exact mode needs rational --alpha and --beta");
        }
        Some(m) => m,
        None if exact.is_some() => Mode::Exact,
        None => Mode::Float,
    };
    Ok(Resolved {
        exact,
        alpha,
        beta,
        mode,
    })
}

/// Shortest representation that parses back to the same float.
fn shortest(v: f64) -> String {
    let a = v.abs();
    if v != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn marginal_kind(family: Family) -> Option<MarginalKind> {
    match family {
        Family::A | Family::ExpA => Some(MarginalKind::A),
        Family::T | Family::ExpT => Some(MarginalKind::T),
        _ => None,
    }
}

fn z_spec(n: usize, z: &ZArgs) -> Outcome<ZSystemSpec> {
    if z.real {
        return Ok(z_build_real(n, z.omega)?);
    }
    let candidates = match &z.candidates {
        Some(c) => c.clone(),
        None => candidates_up_to(z.max_whole, z.fractions),
    };
    Ok(z_build(n, z.omega, &candidates)?)
}

fn grid(points: usize, right: f64) -> Outcome<Vec<f64>> {
    if points < 2 {
        return usage("--points must be at least 2");
    }
    let last = (points - 1) as f64;
    Ok((0..points).map(|i| right * i as f64 / last).collect())
}

fn write(
    output: &Output,
    default: Format,
    table: &Table,
    json: Option<serde_json::Value>,
) -> Outcome<()> {
    let text = match output.format.unwrap_or(default) {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let doc = json.unwrap_or_else(|| table.to_json());
            let mut s = serde_json::to_string_pretty(&doc).expect("json serializes");
            s.push('\n');
            s
        }
    };
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Computation {
            kind: "io".into(),
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(command: Command) -> Outcome<()> {
    match command {
        Command::Coeffs { params, k, output } => coeffs(&params, k, &output),
        Command::Tabulate {
            params,
            points,
            tmax,
            z,
            output,
        } => tabulate(&params, points, tmax, &z, &output),
        Command::Zeros { params, z, output } => zeros(&params, &z, &output),
        Command::Quad {
            params,
            unit,
            output,
        } => quad(&params, unit, &output),
        Command::Verify {
            suite,
            nmax,
            all_checks,
            output,
        } => verify(&suite, nmax, all_checks, &output),
        Command::Zbuild { n, z, output } => zbuild(n, &z, &output),
        Command::Project {
            params,
            function,
            nodes,
            z,
            output,
        } => projection(&params, function, nodes, &z, &output),
        Command::PlotData {
            family,
            n,
            points,
            output,
        } => plot(family, n, points, &output),
    }
}

fn coeffs(params: &Params, k: usize, output: &Output) -> Outcome<()> {
    let r = resolve(params)?;
    let n = params.n;
    let exact: DensePoly<Rational> = match params.family {
        Family::Z => return usage("coeffs does not support --family z"),
        Family::A | Family::T | Family::ExpA | Family::ExpT => marginal_kind(params.family)
            .expect("marginal family")
            .coefficients(n, k)?,
        Family::Ajp | Family::Exp if r.mode == Mode::Exact => {
            let (a, b) = r.exact.clone().expect("exact mode has rational parameters");
            if params.family == Family::Ajp {
                ajp_coefficients(&PolyParams::new(a, b, n, k))?
            } else {
                ExpPolySystem::new(a, b, n)?.coefficients(k)?
            }
        }
        Family::Ajp | Family::Exp => {
            let poly = if params.family == Family::Ajp {
                ajp_coefficients(&PolyParams::new(r.alpha, r.beta, n, k))?
            } else {
                ExpPolySystem::new(r.alpha, r.beta, n)?.coefficients(k)?
            };
            return write_coeffs(poly.coeffs().iter().map(|&c| shortest(c)), output);
        }
    };
    match r.mode {
        Mode::Exact => write_coeffs(exact.coeffs().iter().map(|c| c.to_string()), output),
        Mode::Float => write_coeffs(
            exact.coeffs().iter().map(|c| shortest(rational_to_f64(c))),
            output,
        ),
    }
}

fn write_coeffs(cells: impl Iterator<Item = String>, output: &Output) -> Outcome<()> {
    let mut table = Table::new(["i", "coeff"]);
    for (i, c) in cells.enumerate() {
        table.push(vec![i.to_string(), c]);
    }
    write(output, Format::Csv, &table, None)
}

fn member_label(family: Family, n: usize, k: usize) -> String {
    let symbol = match family {
        Family::Ajp => "P",
        Family::A => "A",
        Family::T => "T",
        Family::Exp => "E",
        Family::ExpA => "EA",
        Family::ExpT => "ET",
        Family::Z => "Z",
    };
    format!("{symbol}_{n}_{k}")
}

fn tabulate(params: &Params, points: usize, tmax: f64, z: &ZArgs, output: &Output) -> Outcome<()> {
    let r = resolve(params)?;
    let n = params.n;
    let polynomial = matches!(params.family, Family::Ajp | Family::A | Family::T);
    if !polynomial && params.mode == Some(Mode::Exact) {
        return usage("exponential families are tabulated in float mode only");
    }
    if !(tmax.is_finite() && tmax > 0.0) {
        return usage("--tmax must be positive");
    }
    let variable = if polynomial { "x" } else { "t" };
    let mut header = vec![variable.to_string()];
    header.extend((0..=n).map(|k| member_label(params.family, n, k)));
    let mut table = Table::new(header);

    if polynomial && r.mode == Mode::Exact {
        let polys = (0..=n)
            .map(|k| match marginal_kind(params.family) {
                Some(kind) => kind.coefficients(n, k),
                None => {
                    let (a, b) = r.exact.clone().expect("exact mode has rational parameters");
                    ajp_coefficients(&PolyParams::new(a, b, n, k))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        if points < 2 {
            return usage("--points must be at least 2");
        }
        let last = (points - 1) as i64;
        for i in 0..points as i64 {
            let x = Rational::new(i.into(), last.into());
            let mut row = vec![x.to_string()];
            row.extend(polys.iter().map(|p| p.eval(&x).to_string()));
            table.push(row);
        }
        return write(output, Format::Csv, &table, None);
    }

    let spec = if params.family == Family::Z {
        Some(z_spec(n, z)?)
    } else {
        None
    };
    let sys = if matches!(params.family, Family::Exp) {
        Some(ExpPolySystem::new(r.alpha, r.beta, n)?)
    } else {
        None
    };
    let marginal = match marginal_kind(params.family) {
        Some(kind) => Some(
            (0..=n)
                .map(|k| kind.coefficients(n, k).map(|p| p.to_f64()))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    let right = match params.family {
        Family::Z | Family::Ajp | Family::A | Family::T => 1.0,
        _ => tmax,
    };
    for v in grid(points, right)? {
        let mut row = vec![shortest(v)];
        for k in 0..=n {
            let value = match params.family {
                Family::Ajp => ajp_eval_stable(&PolyParams::new(r.alpha, r.beta, n, k), v)?,
                Family::A | Family::T => marginal.as_ref().expect("marginal polys")[k].eval(&v),
                Family::Exp => e_eval_stable(sys.as_ref().expect("system"), k, v)?,
                Family::ExpA => ea_eval(n, k, v)?,
                Family::ExpT => et_eval(n, k, v)?,
                Family::Z => spec.as_ref().expect("z system").eval(k, v)?,
            };
            row.push(shortest(value));
        }
        table.push(row);
    }
    write(output, Format::Csv, &table, None)
}

fn zeros(params: &Params, z: &ZArgs, output: &Output) -> Outcome<()> {
    let r = resolve(params)?;
    let n = params.n;
    // zeros of the k = 0 member, read through the exponential system whose
    // associated function it generates
    let (alpha, beta) = match params.family {
        Family::Exp => (r.alpha, r.beta),
        Family::Ajp => (r.alpha + 1.0, r.beta),
        Family::A | Family::ExpA => (0.0, 0.0),
        Family::T | Family::ExpT => (-0.5, -0.5),
        Family::Z => {
            let spec = z_spec(n, z)?;
            let mut table = Table::new(["s", "lambda"]);
            for (s, l) in spec.lambdas.iter().enumerate() {
                table.push(vec![(s + 1).to_string(), format_float(*l)]);
            }
            return write(output, Format::Csv, &table, None);
        }
    };
    let table = zero_table(alpha, beta, n)?;
    write(output, Format::Csv, &table, None)
}

fn quad(params: &Params, unit: bool, output: &Output) -> Outcome<()> {
    let r = resolve(params)?;
    let rule = match params.family {
        Family::Ajp => gauss_jacobi_rule(params.n, r.alpha, r.beta)?,
        Family::Exp => {
            if r.alpha != 1.0 || r.beta != 0.0 {
                return Err(AltError::InvalidParameters(
                    "the exponential rule has known weights only for alpha = 1, beta = 0".into(),
                )
                .into());
            }
            if unit {
                legendre_type_quadrature(params.n)?
            } else {
                semi_axis_rule(params.n)?
            }
        }
        other => return usage(format!("quad supports --family ajp or exp, got {other:?}")),
    };
    write(output, Format::Csv, &rule.to_table(), Some(rule.to_json()))
}

fn verify(suite: &str, nmax: usize, all_checks: bool, output: &Output) -> Outcome<()> {
    let suite: Suite = match suite.parse() {
        Ok(s) => s,
        Err(_) => {
            return usage(format!(
                "unknown suite {suite}; expected core, quad, marginal, exp, z or all"
            ))
        }
    };
    let report = run_suite(suite, nmax);
    let mut table = Table::new(["name", "params", "passed", "detail"]);
    for c in report.checks.iter().filter(|c| all_checks || !c.passed) {
        table.push(vec![
            c.name.clone(),
            c.params.clone(),
            c.passed.to_string(),
            c.detail.clone(),
        ]);
    }
    write(
        output,
        Format::Json,
        &table,
        Some(report.to_json(all_checks)),
    )?;
    let summary = report.summary();
    let first = report
        .failures()
        .next()
        .map(|c| format!("{} ({})", c.name, c.params));
    match first {
        None => Ok(()),
        Some(first) => Err(Failure::Computation {
            kind: "verification_failed".into(),
            message: format!(
                "{} of {} checks failed; first: {first}",
                summary.failed, summary.total
            ),
        }),
    }
}

fn zbuild(n: usize, z: &ZArgs, output: &Output) -> Outcome<()> {
    let spec = z_spec(n, z)?;
    let mut table = Table::new(["s", "lambda"]);
    for (s, l) in spec.lambdas.iter().enumerate() {
        table.push(vec![(s + 1).to_string(), format_float(*l)]);
    }
    write(output, Format::Json, &table, Some(spec.to_json()))
}

fn projection(
    params: &Params,
    function: Function,
    nodes: Option<usize>,
    z: &ZArgs,
    output: &Output,
) -> Outcome<()> {
    let r = resolve(params)?;
    let n = params.n;
    let f = |t: f64| function.eval(t);
    match params.family {
        Family::Exp => {
            let sys = ExpPolySystem::new(r.alpha, r.beta, n)?;
            let m = nodes.unwrap_or_else(|| default_projection_nodes(n));
            let p = project(f, &sys, m)?;
            let mut table = Table::new(["k", "coeff"]);
            for (i, c) in p.coeffs.iter().enumerate() {
                table.push(vec![(i + 1).to_string(), format_float(*c)]);
            }
            let json = serde_json::json!({
                "family": "exp",
                "n": n,
                "nodes": m,
                "coeffs": p.coeffs,
                "l2_error": p.l2_error,
            });
            write(output, Format::Csv, &table, Some(json))
        }
        Family::Z => {
            let spec = z_spec(n, z)?;
            let fit = z_collocation_fit(f, &spec)?;
            let mut table = Table::new(["j", "coeff"]);
            for (j, c) in fit.coeffs.iter().enumerate() {
                table.push(vec![j.to_string(), format_float(*c)]);
            }
            let json = serde_json::json!({
                "family": "z",
                "system": spec.to_json(),
                "fit": serde_json::to_value(&fit).expect("fit serializes"),
            });
            write(output, Format::Csv, &table, Some(json))
        }
        other => usage(format!("project supports --family exp or z, got {other:?}")),
    }
}

fn plot(family: Family, n: usize, points: usize, output: &Output) -> Outcome<()> {
    let kind = match family {
        Family::A => MarginalKind::A,
        Family::T => MarginalKind::T,
        other => return usage(format!("plot-data supports --family a or t, got {other:?}")),
    };
    let table = plot_data(kind, n, points)?;
    write(output, Format::Csv, &table, None)
}
