//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification suite recorded failures,
//! 2 parse or validation error, 3 the requested inverse provably does not
//! exist, 4 numerical failure, 5 spectral precondition violated.
//!
//! Reports are JSON with sorted keys and echo the effective tolerances.
//! `PQINV_TOL_RANK` sets `rank_rtol` unless `--rank-rtol` is given.

mod matrix_file;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::densela::{CMatrix, LinalgError, Tolerances};
use crate::ginv::{drazin_inverse, group_inverse, moore_penrose, GinvError, PenroseResiduals};
use crate::pqinv::{
    construct_w, diagnose, lambda_schedule, one_two_l, one_two_strict, outer_2_strict_via,
    outer_2l_via, repr_group, repr_integral, repr_limit, ExistenceReport, IntegralOptions, PqError,
    PqProblem, PqResult, Route,
};
use crate::verify::{fuzz, run_counterexamples, SuiteReport};

pub use matrix_file::{matrix_to_json, parse_matrix, read_matrix, write_matrix, MatrixFileError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NONEXISTENT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;
pub const EXIT_SPECTRAL: i32 = 5;

pub const TOL_RANK_ENV: &str = "PQINV_TOL_RANK";

#[derive(Parser, Debug)]
#[command(
    name = "pqinv",
    version,
    about = "Generalized inverses with prescribed idempotents"
)]
struct Cli {
    /// Relative singular-value cutoff for numerical rank [default: 1e-10]
    #[arg(long, global = true)]
    rank_rtol: Option<f64>,
    /// Absolute part of the matrix-equality bound [default: 1e-10]
    #[arg(long, global = true)]
    eq_atol: Option<f64>,
    /// Relative part of the matrix-equality bound [default: 1e-8]
    #[arg(long, global = true)]
    eq_rtol: Option<f64>,
    /// Target accuracy of the limit and integral routes [default: 1e-8]
    #[arg(long, global = true)]
    conv_tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide every existence condition for (a, p, q)
    Check { a: PathBuf, p: PathBuf, q: PathBuf },
    /// Compute an inverse and report its residuals
    Compute {
        a: PathBuf,
        /// Required for the (p,q) kinds, ignored otherwise
        p: Option<PathBuf>,
        q: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "2l")]
        kind: Kind,
        /// Representation used for kinds 2l and 2 [default: group]
        #[arg(long, value_enum)]
        route: Option<RouteArg>,
        /// Also write the result as a matrix file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace the limit or integral representation as CSV
    Represent {
        a: PathBuf,
        p: PathBuf,
        q: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Last λ of the decade schedule 1e-2, 1e-3, …
        #[arg(long)]
        lambda_min: Option<f64>,
        /// Integration horizon
        #[arg(long)]
        horizon: Option<f64>,
        /// Write the final iterate as a matrix file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the fixed 2×2 counterexamples
    #[command(alias = "verify-paper")]
    Counterexamples {
        /// Include per-case elapsed times (breaks byte-for-byte reproducibility)
        #[arg(long)]
        timings: bool,
    },
    /// Randomized battery over every equivalence and representation identity
    Fuzz {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Largest matrix size (at most 32)
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    #[value(name = "2l")]
    Outer2l,
    #[value(name = "2")]
    Outer2,
    #[value(name = "12l")]
    OneTwoL,
    #[value(name = "12")]
    OneTwoStrict,
    Group,
    Drazin,
    Mp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RouteArg {
    Group,
    Inner,
    Limit,
    Integral,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Group => Route::GroupFormula,
            RouteArg::Inner => Route::InnerFormula,
            RouteArg::Limit => Route::Limit,
            RouteArg::Integral => Route::Integral,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Limit,
    Integral,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<PqError> for Failure {
    fn from(e: PqError) -> Self {
        let code = match &e {
            PqError::Invalid(_) => EXIT_INVALID,
            PqError::Nonexistent { .. } | PqError::WObstruction { .. } => EXIT_NONEXISTENT,
            PqError::Spectral(_) => EXIT_SPECTRAL,
            PqError::Linalg(l) => linalg_code(l),
            PqError::Ginv(GinvError::NotSquare(_)) => EXIT_INVALID,
            PqError::NonConvergence(_) | PqError::Numerical(_) | PqError::Ginv(_) => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<GinvError> for Failure {
    fn from(e: GinvError) -> Self {
        PqError::Ginv(e).into()
    }
}

impl From<MatrixFileError> for Failure {
    fn from(e: MatrixFileError) -> Self {
        Failure::invalid(e.to_string())
    }
}

fn linalg_code(e: &LinalgError) -> i32 {
    match e {
        LinalgError::Singular
        | LinalgError::Inconsistent { .. }
        | LinalgError::EigenNoConvergence => EXIT_NUMERICAL,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Reports go to stdout, diagnostics to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("pqinv: error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli) -> Result<i32, Failure> {
    let tol = tolerances(&cli)?;
    match cli.command {
        Command::Check { a, p, q } => {
            let prob = load_problem(&a, &p, &q, tol)?;
            print_json(&existence_json(&diagnose(&prob)));
            Ok(EXIT_OK)
        }
        Command::Compute {
            a,
            p,
            q,
            kind,
            route,
            out,
        } => compute(
            &a,
            p.as_deref(),
            q.as_deref(),
            kind,
            route,
            out.as_deref(),
            tol,
        ),
        Command::Represent {
            a,
            p,
            q,
            method,
            lambda_min,
            horizon,
            out,
        } => {
            let prob = load_problem(&a, &p, &q, tol)?;
            represent(&prob, method, lambda_min, horizon, out.as_deref())
        }
        Command::Counterexamples { timings } => Ok(emit_suite(&run_counterexamples(), timings)),
        Command::Fuzz {
            seed,
            trials,
            dim,
            timings,
        } => match fuzz(seed, trials, dim, &tol) {
            Ok(report) => Ok(emit_suite(&report, timings)),
            Err(e) => Err(Failure::invalid(e.to_string())),
        },
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    if let Ok(raw) = std::env::var(TOL_RANK_ENV) {
        tol.rank_rtol = raw
            .trim()
            .parse()
            .map_err(|_| Failure::invalid(format!("{TOL_RANK_ENV}={raw:?} is not a number")))?;
    }
    if let Some(v) = cli.rank_rtol {
        tol.rank_rtol = v;
    }
    if let Some(v) = cli.eq_atol {
        tol.eq_atol = v;
    }
    if let Some(v) = cli.eq_rtol {
        tol.eq_rtol = v;
    }
    if let Some(v) = cli.conv_tol {
        tol.conv_tol = v;
    }
    tol.validate()
        .map_err(|e| Failure::invalid(e.to_string()))?;
    Ok(tol)
}

fn load_problem(a: &Path, p: &Path, q: &Path, tol: Tolerances) -> Result<PqProblem, Failure> {
    let (a, p, q) = (read_matrix(a)?, read_matrix(p)?, read_matrix(q)?);
    Ok(PqProblem::new(a, p, q, tol)?)
}

fn print_json(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("value serializes");
    emit(&format!("{text}\n"));
}

/// Writes to stdout; a closed pipe is not worth a panic.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit_suite(report: &SuiteReport, timings: bool) -> i32 {
    print_json(&report.to_json(timings));
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_SUITE_FAILED
    }
}

fn existence_json(r: &ExistenceReport) -> Value {
    json!({
        "ker_cap_ranp_trivial": r.ker_cap_ranp_trivial,
        "direct_sum": r.direct_sum,
        "image_match": r.image_match,
        "cond5": r.cond5,
        "cond6": r.cond6(),
        "strict_exists": r.strict_exists,
        "l_exists": r.l_exists,
        "l12_exists": r.l12_exists,
        "strict12_exists": r.strict12_exists,
        "dims": r.dims,
        "fragile": r.fragile,
        "equivalence_consistent": r.equivalence_consistent,
        "lattice_consistent": r.lattice_consistent,
        "tolerances": r.tolerances,
    })
}

fn compute(
    a: &Path,
    p: Option<&Path>,
    q: Option<&Path>,
    kind: Kind,
    route: Option<RouteArg>,
    out: Option<&Path>,
    tol: Tolerances,
) -> Result<i32, Failure> {
    let (doc, b) = match kind {
        Kind::Outer2l | Kind::Outer2 | Kind::OneTwoL | Kind::OneTwoStrict => {
            let (Some(p), Some(q)) = (p, q) else {
                return Err(Failure::invalid("this kind needs the p and q files"));
            };
            let prob = load_problem(a, p, q, tol)?;
            let route = route.map(Route::from).unwrap_or(Route::GroupFormula);
            let result = match kind {
                Kind::Outer2l => outer_2l_via(&prob, route)?,
                Kind::Outer2 => outer_2_strict_via(&prob, route)?,
                _ if route != Route::GroupFormula => {
                    return Err(Failure::invalid("--route applies only to kinds 2l and 2"))
                }
                Kind::OneTwoL => one_two_l(&prob)?,
                _ => one_two_strict(&prob)?,
            };
            (pq_json(&result, &tol), result.b)
        }
        Kind::Group | Kind::Drazin | Kind::Mp => {
            if route.is_some() {
                return Err(Failure::invalid("--route applies only to kinds 2l and 2"));
            }
            classical(&read_matrix(a)?, kind, &tol)?
        }
    };
    if let Some(out) = out {
        write_matrix(out, &b)?;
    }
    print_json(&doc);
    Ok(EXIT_OK)
}

fn pq_json(r: &PqResult, tol: &Tolerances) -> Value {
    json!({
        "kind": r.kind,
        "route": r.route,
        "residuals": r.residuals,
        "b": matrix_to_json(&r.b),
        "tolerances": tol,
    })
}

fn classical(a: &CMatrix, kind: Kind, tol: &Tolerances) -> Result<(Value, CMatrix), Failure> {
    let (name, b, extra) = match kind {
        Kind::Mp => {
            let x = moore_penrose(a, tol);
            let r = PenroseResiduals::of(a, &x);
            let residuals = json!({
                "axa_a": r.axx,
                "xax_x": r.xax,
                "ax_hermitian": r.ax_hermitian,
                "xa_hermitian": r.xa_hermitian,
            });
            ("mp", x, json!({ "residuals": residuals }))
        }
        Kind::Drazin => {
            let d = drazin_inverse(a, tol)?;
            let residuals = commuting_residuals(a, &d.inverse, d.index);
            (
                "drazin",
                d.inverse,
                json!({ "index": d.index, "residuals": residuals }),
            )
        }
        _ => {
            let x = group_inverse(a, tol)?.ok_or_else(|| Failure {
                code: EXIT_NONEXISTENT,
                message: "group inverse does not exist: rank(a²) ≠ rank(a)".into(),
            })?;
            let residuals = commuting_residuals(a, &x, 1);
            ("group", x, json!({ "residuals": residuals }))
        }
    };
    let mut doc = json!({
        "kind": name,
        "b": matrix_to_json(&b),
        "tolerances": tol,
    });
    for (k, v) in extra.as_object().expect("object") {
        doc[k] = v.clone();
    }
    Ok((doc, b))
}

/// Residuals of `a^{k+1}x = a^k`, `xax = x`, `ax = xa`.
fn commuting_residuals(a: &CMatrix, x: &CMatrix, k: usize) -> Value {
    let ak = a.pow(k);
    json!({
        "power": (&(&ak * a) * x).distance(&ak),
        "xax_x": (&(x * a) * x).distance(x),
        "ax_xa": (a * x).distance(&(x * a)),
    })
}

fn represent(
    prob: &PqProblem,
    method: Method,
    lambda_min: Option<f64>,
    horizon: Option<f64>,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let tol = prob.tol();
    match (method, lambda_min, horizon) {
        (Method::Limit, _, Some(_)) => {
            return Err(Failure::invalid(
                "--horizon applies only to --method integral",
            ))
        }
        (Method::Integral, Some(_), _) => {
            return Err(Failure::invalid(
                "--lambda-min applies only to --method limit",
            ))
        }
        _ => {}
    }
    let w = construct_w(prob.p(), prob.q(), tol)?;
    let reference = repr_group(prob.a(), &w, tol)?;
    let fmt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
    let mut csv = String::new();
    let last = match method {
        Method::Limit => {
            let lambda_min = lambda_min.unwrap_or(1e-8);
            if !(lambda_min.is_finite() && lambda_min > 0.0) {
                return Err(Failure::invalid(format!(
                    "--lambda-min must be positive, got {lambda_min}"
                )));
            }
            let trace = repr_limit(prob.a(), &w, &lambda_schedule(lambda_min), tol)?;
            csv.push_str("lambda,cauchy,error_vs_group\n");
            for s in &trace.steps {
                let err = s.iterate.distance(&reference);
                let _ = writeln!(csv, "{:e},{},{:e}", s.lambda, fmt(s.cauchy), err);
            }
            trace.b
        }
        Method::Integral => {
            let opts = IntegralOptions {
                horizon,
                ..Default::default()
            };
            let trace = repr_integral(prob.a(), &w, &opts, tol)?;
            csv.push_str("horizon,cauchy,tail_bound,error_vs_group\n");
            for s in &trace.steps {
                let err = s.iterate.distance(&reference);
                let _ = writeln!(
                    csv,
                    "{:e},{},{:e},{:e}",
                    s.horizon,
                    fmt(s.cauchy),
                    s.tail_bound,
                    err
                );
            }
            trace.b
        }
    };
    if let Some(out) = out {
        write_matrix(out, &last)?;
    }
    emit(&csv);
    Ok(EXIT_OK)
}
