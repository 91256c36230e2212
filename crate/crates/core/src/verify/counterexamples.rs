use std::time::Instant;

use super::{Case, SuiteReport};
use crate::densela::{CMatrix, Tolerances};
use crate::pqinv::{diagnose, outer_2_strict, outer_2l, PqError, PqProblem};
use crate::subspace::{image, range_of};

fn a() -> CMatrix {
    CMatrix::real(&[[0.0, 0.0], [1.0, 0.0]])
}

fn p() -> CMatrix {
    CMatrix::real(&[[1.0, 1.0], [0.0, 0.0]])
}

fn one_minus_q() -> CMatrix {
    CMatrix::real(&[[0.0, 1.0], [0.0, 1.0]])
}

fn b() -> CMatrix {
    CMatrix::real(&[[0.0, 1.0], [0.0, 0.0]])
}

fn exact(case: &mut Case, key: &str, got: &CMatrix, want: &CMatrix) {
    let r = (got - want).max_abs();
    case.residual(key, r);
    case.check(
        r == 0.0,
        format!("{key}: expected exact equality, residual {r:e}"),
    );
}

fn timed(name: &str, body: impl FnOnce(&mut Case)) -> Case {
    let start = Instant::now();
    let mut case = Case::new(name);
    body(&mut case);
    case.elapsed = start.elapsed();
    case
}

/// Rebuilds the 2×2 counterexamples and checks every claimed verdict:
///
/// * `b = [[0,1],[0,0]]` satisfies `pb = b`, `bap = p`, `b(1−q) = b`,
///   `(1−q)ab = 1−q` exactly, yet `ba = diag(1,0) ≠ p`, so no strict
///   `(p,q)`-outer inverse exists while the `(p,q,l)` one equals `b`;
/// * the same data has `ℂ² = a·Ran p ∔ Ran q` but `a·Ran p ≠ Ran(1−q)`;
/// * with `1 − q = diag(0,1)`, `a·Ran p = Ran(1−q)` and still no strict
///   inverse exists.
pub fn run_counterexamples() -> SuiteReport {
    let tol = Tolerances::default();
    let q = one_minus_q().complement();
    let prob = PqProblem::new(a(), p(), q.clone(), tol).expect("idempotent data");
    let mut cases = Vec::new();

    cases.push(timed("products_fix_b_and_p", |c| {
        let (a, p, b, oq) = (a(), p(), b(), one_minus_q());
        exact(c, "pb_b", &(&p * &b), &b);
        exact(c, "bap_p", &(&(&b * &a) * &p), &p);
        exact(c, "b_one_minus_q_b", &(&b * &oq), &b);
        exact(c, "one_minus_q_ab", &(&(&oq * &a) * &b), &oq);
        exact(c, "bab_b", &(&(&b * &a) * &b), &b);
    }));

    cases.push(timed("strict_inverse_absent_for_b", |c| {
        let (a, b) = (a(), b());
        let ba = &b * &a;
        exact(c, "ba_diag10", &ba, &CMatrix::real_diag(&[1.0, 0.0]));
        let ba_p = ba.distance(&p());
        c.residual("ba_p", ba_p);
        c.check(ba_p > 0.5, "ba should differ from p");
        let ab_oq = (&a * &b).distance(&one_minus_q());
        c.residual("ab_one_minus_q", ab_oq);
        c.check(ab_oq > 0.5, "ab should differ from 1−q");
        match outer_2_strict(&prob) {
            Err(PqError::Nonexistent { reason, .. }) => {
                c.note(format!("strict inverse: {reason}"));
                c.check(reason.contains("ba ≠ p"), "nonexistence should name ba ≠ p");
            }
            Ok(_) => c.check(false, "strict inverse reported to exist"),
            Err(e) => c.check(false, format!("unexpected error: {e}")),
        }
        let report = diagnose(&prob);
        c.check(!report.strict_exists, "diagnose reports strict_exists");
        c.check(report.l_exists, "diagnose reports no (p,q,l) inverse");
    }));

    cases.push(timed("outer_2l_equals_b", |c| match outer_2l(&prob) {
        Ok(r) => {
            let d = r.b.distance(&b());
            c.residual("b_distance", d);
            c.residual("bab_b", r.residuals.bab_b);
            c.residual("range_distance", r.residuals.range_distance);
            c.residual("kernel_distance", r.residuals.kernel_distance);
            let worst = d
                .max(r.residuals.bab_b)
                .max(r.residuals.range_distance)
                .max(r.residuals.kernel_distance);
            c.check(worst <= 1e-12, format!("residual {worst:e} above 1e-12"));
        }
        Err(e) => c.check(false, format!("(p,q,l)-outer inverse failed: {e}")),
    }));

    cases.push(timed("direct_sum_without_image_match", |c| {
        let report = diagnose(&prob);
        c.check(report.direct_sum, "direct_sum should hold");
        c.check(!report.image_match, "image_match should fail");
        c.check(!report.fragile, "verdicts are fragile");
        let a_ran_p = image(&a(), &range_of(&p(), &tol), &tol);
        let d = a_ran_p.distance(&range_of(&one_minus_q(), &tol));
        c.residual("image_distance", d);
        c.check(
            (d - 1.0).abs() <= 1e-12,
            format!("subspace distance {d} ≠ 1"),
        );
    }));

    cases.push(timed("image_match_without_strict", |c| {
        let q = CMatrix::real_diag(&[0.0, 1.0]).complement();
        let prob = PqProblem::new(a(), p(), q, tol).expect("idempotent data");
        let report = diagnose(&prob);
        c.check(report.image_match, "image_match should hold");
        c.check(!report.strict_exists, "strict inverse should not exist");
        c.check(!report.fragile, "verdicts are fragile");
        match outer_2_strict(&prob) {
            Err(PqError::Nonexistent { residuals, .. }) => {
                if let Some(r) = residuals {
                    c.residual("ba_p", r.ba_p);
                }
            }
            Ok(_) => c.check(false, "strict inverse reported to exist"),
            Err(e) => c.check(false, format!("unexpected error: {e}")),
        }
        if let Ok(r) = outer_2l(&prob) {
            let d = r.b.distance(&b());
            c.residual("outer_2l_b_distance", d);
            c.check(d <= 1e-12, "(p,q,l)-outer inverse should be [[0,1],[0,0]]");
        }
    }));

    SuiteReport::new("counterexamples", 0, 1, 2, cases, tol)
}
