//! End-to-end runs of the `pqinv` binary: exit codes, reports, round trips.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pqinv::cli::{read_matrix, write_matrix};
use pqinv::{CMatrix, Complex64};
use serde_json::Value;
use tempfile::TempDir;

fn pqinv(args: &[&str]) -> Output {
    pqinv_env(args, None)
}

fn pqinv_env(args: &[&str], tol_rank: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pqinv"));
    cmd.args(args).env_remove("PQINV_TOL_RANK");
    if let Some(v) = tol_rank {
        cmd.env("PQINV_TOL_RANK", v);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Self {
            dir: TempDir::new().unwrap(),
        }
    }

    fn raw(&self, name: &str, text: &str) -> String {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path.display().to_string()
    }

    fn matrix(&self, name: &str, m: &CMatrix) -> String {
        let path = self.dir.path().join(name);
        write_matrix(&path, m).unwrap();
        path.display().to_string()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    /// `a`, `p`, `q` of the 2×2 counterexample with `1 − q = [[0,1],[0,1]]`.
    fn counterexample(&self) -> [String; 3] {
        [
            self.matrix("a.json", &CMatrix::real(&[[0.0, 0.0], [1.0, 0.0]])),
            self.matrix("p.json", &CMatrix::real(&[[1.0, 1.0], [0.0, 0.0]])),
            self.matrix("q.json", &CMatrix::real(&[[1.0, -1.0], [0.0, 0.0]])),
        ]
    }
}

fn matrix_of(v: &Value) -> CMatrix {
    pqinv::cli::parse_matrix(&v.to_string(), "stdout").unwrap()
}

#[test]
fn check_reports_relaxed_but_not_strict() {
    let f = Files::new();
    let [a, p, q] = f.counterexample();
    let out = pqinv(&["check", &a, &p, &q]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = stdout_json(&out);
    assert_eq!(r["strict_exists"], false);
    assert_eq!(r["l_exists"], true);
    assert_eq!(r["direct_sum"], true);
    assert_eq!(r["image_match"], false);
    assert_eq!(r["fragile"], false);
    assert_eq!(r["tolerances"]["rank_rtol"], 1e-10);
}

#[test]
fn check_identity_everything_exists() {
    let f = Files::new();
    let i = f.matrix("i.json", &CMatrix::identity(3));
    let z = f.matrix("z.json", &CMatrix::zeros(3, 3));
    let out = pqinv(&["check", &i, &i, &z]);
    assert_eq!(code(&out), 0);
    let r = stdout_json(&out);
    for key in [
        "ker_cap_ranp_trivial",
        "direct_sum",
        "image_match",
        "cond5",
        "cond6",
        "strict_exists",
        "l_exists",
        "l12_exists",
        "strict12_exists",
    ] {
        assert_eq!(r[key], true, "{key}");
    }
}

#[test]
fn non_idempotent_p_is_a_validation_error() {
    let f = Files::new();
    let [a, _, q] = f.counterexample();
    let p = f.matrix("bad.json", &CMatrix::real(&[[1.0, 1.0], [0.0, 1.0]]));
    let out = pqinv(&["check", &a, &p, &q]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("p fails p²=p"), "{}", stderr(&out));
}

#[test]
fn malformed_inputs_exit_2() {
    let f = Files::new();
    let cases = [
        r#"{"rows":2,"cols":2,"data":[1,2,3]}"#,
        r#"{"rows":1,"cols":1,"data":[1e999]}"#,
        r#"{"rows":1,"cols":1,"data":["x"]}"#,
        "not json",
    ];
    for (k, text) in cases.iter().enumerate() {
        let m = f.raw(&format!("m{k}.json"), text);
        let out = pqinv(&["compute", &m, "--kind", "mp"]);
        assert_eq!(code(&out), 2, "{text}: {}", stderr(&out));
        assert!(stderr(&out).contains(&m), "message should name the file");
    }
    let missing = f.path("missing.json").display().to_string();
    assert_eq!(code(&pqinv(&["compute", &missing, "--kind", "mp"])), 2);
    let rect = f.matrix("r.json", &CMatrix::zeros(2, 3));
    let [_, p, q] = f.counterexample();
    assert_eq!(code(&pqinv(&["check", &rect, &p, &q])), 2);
    assert_eq!(code(&pqinv(&["compute", &rect, "--kind", "drazin"])), 2);
}

#[test]
fn usage_errors_exit_2_and_help_exits_0() {
    assert_eq!(code(&pqinv(&["bogus"])), 2);
    assert_eq!(code(&pqinv(&["compute"])), 2);
    assert_eq!(code(&pqinv(&["fuzz", "--trials", "x"])), 2);
    assert_eq!(code(&pqinv(&["--help"])), 0);
    assert_eq!(code(&pqinv(&["--rank-rtol", "-1", "verify-paper"])), 2);
    let f = Files::new();
    let [a, p, q] = f.counterexample();
    assert_eq!(code(&pqinv(&["compute", &a, "--kind", "2l"])), 2);
    assert_eq!(
        code(&pqinv(&[
            "compute", &a, &p, &q, "--kind", "12", "--route", "limit"
        ])),
        2
    );
    assert_eq!(
        code(&pqinv(&[
            "represent",
            &a,
            &p,
            &q,
            "--method",
            "limit",
            "--horizon",
            "3"
        ])),
        2
    );
}

#[test]
fn compute_relaxed_inverse_and_round_trip_output() {
    let f = Files::new();
    let [a, p, q] = f.counterexample();
    let out_path = f.path("b.json");
    let out = pqinv(&[
        "compute",
        &a,
        &p,
        &q,
        "--kind",
        "2l",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = stdout_json(&out);
    let b = matrix_of(&doc["b"]);
    assert_eq!(b, CMatrix::real(&[[0.0, 1.0], [0.0, 0.0]]));
    assert_eq!(read_matrix(&out_path).unwrap(), b);
    assert_eq!(doc["kind"], "outer2l");
    assert_eq!(doc["residuals"]["bab_b"], 0.0);
    assert_eq!(doc["residuals"]["ba_p"], 1.0);
}

#[test]
fn every_route_agrees_on_an_invertible_instance() {
    let f = Files::new();
    let a = f.matrix("a.json", &CMatrix::real(&[[2.0, 1.0], [0.0, 3.0]]));
    let i = f.matrix("i.json", &CMatrix::identity(2));
    let z = f.matrix("z.json", &CMatrix::zeros(2, 2));
    let inv = CMatrix::real(&[[0.5, -1.0 / 6.0], [0.0, 1.0 / 3.0]]);
    for route in ["group", "inner", "limit", "integral"] {
        for kind in ["2l", "2"] {
            let out = pqinv(&["compute", &a, &i, &z, "--kind", kind, "--route", route]);
            assert_eq!(code(&out), 0, "{kind}/{route}: {}", stderr(&out));
            let b = matrix_of(&stdout_json(&out)["b"]);
            assert!(b.distance(&inv) < 1e-6, "{kind}/{route}");
        }
    }
}

#[test]
fn strict_inverse_absent_exits_3() {
    let f = Files::new();
    let [a, p, q] = f.counterexample();
    let out = pqinv(&["compute", &a, &p, &q, "--kind", "2"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("ba ≠ p"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let nil = f.matrix("n.json", &CMatrix::real(&[[0.0, 1.0], [0.0, 0.0]]));
    assert_eq!(code(&pqinv(&["compute", &nil, "--kind", "group"])), 3);

    // dim Ran p + dim Ran q ≠ n
    let i = f.matrix("i.json", &CMatrix::identity(2));
    let out = pqinv(&["represent", &i, &i, &i, "--method", "limit"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn classical_kinds_ignore_p_and_q() {
    let f = Files::new();
    let [a, _, _] = f.counterexample();
    let out = pqinv(&["compute", &a, "--kind", "mp"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(
        matrix_of(&doc["b"]),
        CMatrix::real(&[[0.0, 1.0], [0.0, 0.0]])
    );
    assert_eq!(doc["residuals"]["axa_a"], 0.0);

    let idem = f.matrix("e.json", &CMatrix::real(&[[1.0, 1.0], [0.0, 0.0]]));
    let out = pqinv(&["compute", &idem, "--kind", "drazin"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["index"], 1);
    assert!(matrix_of(&doc["b"]).distance(&CMatrix::real(&[[1.0, 1.0], [0.0, 0.0]])) < 1e-12);
}

#[test]
fn numerical_failure_exits_4() {
    let f = Files::new();
    let g = f.matrix(
        "g.json",
        &CMatrix::real(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 10.0]]),
    );
    let out = pqinv(&[
        "--eq-atol",
        "0",
        "--eq-rtol",
        "0",
        "compute",
        &g,
        "--kind",
        "drazin",
    ]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|x| {
                    if x.is_empty() {
                        f64::NAN
                    } else {
                        x.parse().unwrap()
                    }
                })
                .collect()
        })
        .collect();
    (header, rows)
}

/// `a = w = diag(0,1)`, `p = diag(0,1)`, `q = diag(1,0)`: `aw = diag(0,1)`
/// and the inverse is `diag(0,1)`.
fn diag_core(f: &Files) -> [String; 3] {
    let e2 = f.matrix("e2.json", &CMatrix::real_diag(&[0.0, 1.0]));
    let e1 = f.matrix("e1.json", &CMatrix::real_diag(&[1.0, 0.0]));
    [e2.clone(), e2, e1]
}

#[test]
fn limit_trace_error_tracks_lambda() {
    let f = Files::new();
    let [a, p, q] = diag_core(&f);
    let out_path = f.path("limit.json");
    let out = pqinv(&[
        "represent",
        &a,
        &p,
        &q,
        "--method",
        "limit",
        "--lambda-min",
        "1e-6",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["lambda", "cauchy", "error_vs_group"]);
    assert_eq!(rows.len(), 5);
    for row in &rows {
        // |1/(1+λ) − 1| = λ/(1+λ)
        let (lambda, err) = (row[0], row[2]);
        assert!((err - lambda / (1.0 + lambda)).abs() < 1e-12, "{row:?}");
    }
    let last = read_matrix(&out_path).unwrap();
    assert!(last.distance(&CMatrix::real_diag(&[0.0, 1.0])) < 2e-6);
}

#[test]
fn integral_trace_tail_is_exponential() {
    let f = Files::new();
    let [a, p, q] = diag_core(&f);
    let out = pqinv(&["represent", &a, &p, &q, "--method", "integral"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = csv_rows(&out);
    assert_eq!(
        header,
        ["horizon", "cauchy", "tail_bound", "error_vs_group"]
    );
    for row in &rows {
        let (t, tail) = (row[0], row[2]);
        assert!((tail / (-t).exp() - 1.0).abs() < 1e-9, "{row:?}");
    }
    assert!(rows.last().unwrap()[3] <= 1e-8);
}

#[test]
fn imaginary_spectrum_exits_5() {
    let f = Files::new();
    let rot = f.matrix("rot.json", &CMatrix::real(&[[0.0, 1.0], [-1.0, 0.0]]));
    let i = f.matrix("i.json", &CMatrix::identity(2));
    let z = f.matrix("z.json", &CMatrix::zeros(2, 2));
    let out = pqinv(&["represent", &rot, &i, &z, "--method", "integral"]);
    assert_eq!(code(&out), 5, "{}", stderr(&out));
    let out = pqinv(&["compute", &rot, &i, &z, "--route", "integral"]);
    assert_eq!(code(&out), 5, "{}", stderr(&out));
}

#[test]
fn counterexample_suite_passes_under_both_names() {
    let a = pqinv(&["counterexamples"]);
    let b = pqinv(&["verify-paper"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let doc = stdout_json(&a);
    assert_eq!(doc["summary"]["fail"], 0);
    assert_eq!(doc["summary"]["total"], 5);
    assert!(doc["cases"][0].get("elapsed_s").is_none());
    let timed = stdout_json(&pqinv(&["counterexamples", "--timings"]));
    assert!(timed["cases"][0]["elapsed_s"].is_number());
}

#[test]
fn fuzz_is_deterministic_and_validates() {
    let args = ["fuzz", "--seed", "42", "--trials", "200", "--dim", "8"];
    let first = pqinv(&args);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    let doc = stdout_json(&first);
    assert_eq!(doc["summary"]["fail"], 0);
    assert_eq!(doc["seed"], 42);
    assert_eq!(doc["trials"], 200);
    assert_eq!(pqinv(&args).stdout, first.stdout);

    assert_eq!(code(&pqinv(&["fuzz", "--dim", "0"])), 2);
    assert_eq!(code(&pqinv(&["fuzz", "--dim", "33"])), 2);
    assert_eq!(code(&pqinv(&["fuzz", "--trials", "0"])), 2);
}

#[test]
fn rank_tolerance_from_environment_and_flag() {
    let rank_rtol = |out: &Output| {
        stdout_json(out)["tolerances"]["rank_rtol"]
            .as_f64()
            .unwrap()
    };
    let f = Files::new();
    let [a, p, q] = f.counterexample();
    let env = pqinv_env(&["check", &a, &p, &q], Some("1e-6"));
    assert_eq!(rank_rtol(&env), 1e-6);
    let both = pqinv_env(&["check", &a, &p, &q, "--rank-rtol", "1e-7"], Some("1e-6"));
    assert_eq!(rank_rtol(&both), 1e-7);
    let bad = pqinv_env(&["check", &a, &p, &q], Some("abc"));
    assert_eq!(code(&bad), 2);
    assert!(stderr(&bad).contains("PQINV_TOL_RANK"));
}

#[test]
fn matrix_file_round_trip_through_disk_is_bit_exact() {
    let f = Files::new();
    let entries: Vec<Complex64> = [
        (0.1, -0.2),
        (1.0 / 3.0, 2.0f64.sqrt()),
        (-0.0, 5e-324),
        (f64::MAX, -f64::MIN_POSITIVE),
    ]
    .iter()
    .map(|&(re, im)| Complex64::new(re, im))
    .collect();
    let m = CMatrix::new(2, 2, entries).unwrap();
    let path = f.matrix("m.json", &m);
    let back = read_matrix(Path::new(&path)).unwrap();
    for (x, y) in m.entries().iter().zip(back.entries()) {
        assert_eq!(x.re.to_bits(), y.re.to_bits());
        assert_eq!(x.im.to_bits(), y.im.to_bits());
    }
}
