use super::represent::{
    default_lambda_schedule, repr_group, repr_inner, repr_integral, repr_limit,
};
use super::{
    nonexistent, IntegralOptions, InverseKind, PqError, PqProblem, PqResult, Residuals, Route,
};
use crate::densela::{polar_unitary, CMatrix, Tolerances};
use crate::subspace::{
    image, intersect, is_direct_sum_all, kernel_of, range_of, range_of_idempotent, Subspace,
};

/// `w = U·Q·Nᴴ` with `U` an orthonormal basis of `Ran p`, `N` one of
/// `Ran(q)^⊥` and `Q` the unitary polar factor of `UᴴN`, so that
/// `Ran w = Ran p`, `Ker w = Ran q`, and `w` does not depend on the bases
/// picked. For orthogonal `p` and `q = 1 − p` this is `w = p`.
pub fn construct_w(p: &CMatrix, q: &CMatrix, tol: &Tolerances) -> Result<CMatrix, PqError> {
    w_from_subspaces(
        &range_of_idempotent(p, tol),
        &range_of_idempotent(q, tol),
        tol,
    )
}

pub(crate) fn w_from_subspaces(
    ran_p: &Subspace,
    ran_q: &Subspace,
    tol: &Tolerances,
) -> Result<CMatrix, PqError> {
    let n = ran_p.ambient();
    if ran_p.dim() + ran_q.dim() != n {
        return Err(PqError::WObstruction {
            ran_p: ran_p.dim(),
            ran_q: ran_q.dim(),
            n,
        });
    }
    let perp = ran_q.orthogonal_complement(tol);
    let (u, nb) = (ran_p.basis(), perp.basis());
    let q = polar_unitary(&(&u.adjoint() * nb));
    Ok(&(u * &q) * &nb.adjoint())
}

/// The `(p,q,l)`-outer inverse through the group-inverse representation.
pub fn outer_2l(prob: &PqProblem) -> Result<PqResult, PqError> {
    outer_2l_via(prob, Route::GroupFormula)
}

/// The `(p,q,l)`-outer inverse through a chosen representation.
///
/// Limit uses the default λ schedule and integral the default horizon.
/// Results of the approximate routes are validated against the continuous
/// equation set (`b = pb`, `p = bap`, `b(1−q) = b`, `(1−q)ab = 1−q`) at
/// a tolerance widened to their truncation error.
pub fn outer_2l_via(prob: &PqProblem, route: Route) -> Result<PqResult, PqError> {
    let tol = prob.tol();
    let kind = InverseKind::Outer2l;
    let ran_p = range_of_idempotent(prob.p(), tol);
    let ran_q = range_of_idempotent(prob.q(), tol);
    if !intersect(&kernel_of(prob.a(), tol), &ran_p, tol).is_zero() {
        return Err(nonexistent(kind, "Ker(a) ∩ Ran(p) ≠ {0}"));
    }
    if !is_direct_sum_all(&image(prob.a(), &ran_p, tol), &ran_q, tol) {
        return Err(nonexistent(kind, "ℂⁿ ≠ a·Ran(p) ∔ Ran(q)"));
    }
    let w = w_from_subspaces(&ran_p, &ran_q, tol)?;
    let a = prob.a();
    let b = match route {
        Route::GroupFormula | Route::Direct => repr_group(a, &w, tol),
        Route::InnerFormula => repr_inner(a, &w, tol),
        Route::Limit => repr_limit(a, &w, &default_lambda_schedule(), tol).map(|t| t.b),
        Route::Integral => repr_integral(a, &w, &IntegralOptions::default(), tol).map(|t| t.b),
    }
    .map_err(|e| match e {
        // Existence was established above, so a failing representation is
        // an internal inconsistency rather than a verdict.
        PqError::Nonexistent { reason, .. } => PqError::Numerical(reason),
        other => other,
    })?;
    let route = if route == Route::Direct {
        Route::GroupFormula
    } else {
        route
    };
    let result = finish(prob, kind, route, b);
    validate_outer_2l(prob, &result)?;
    Ok(result)
}

/// The strict `(p,q)`-outer inverse: the `(p,q,l)` candidate, accepted when
/// `ba = p` and `ab = 1 − q`.
pub fn outer_2_strict(prob: &PqProblem) -> Result<PqResult, PqError> {
    outer_2_strict_via(prob, Route::GroupFormula)
}

/// [`outer_2_strict`] with the candidate from a chosen representation;
/// approximate routes are judged at their widened tolerance.
pub fn outer_2_strict_via(prob: &PqProblem, route: Route) -> Result<PqResult, PqError> {
    let kind = InverseKind::Outer2;
    let mut result = outer_2l_via(prob, route).map_err(|e| retag(e, kind))?;
    result.kind = kind;
    let tol = &route_tolerances(result.route, prob.tol());
    let b = &result.b;
    let reason = if !tol.close(&(b * prob.a()), prob.p()) {
        Some("ba ≠ p")
    } else if !tol.close(&(prob.a() * b), &prob.q().complement()) {
        Some("ab ≠ 1−q")
    } else {
        None
    };
    match reason {
        Some(reason) => Err(PqError::Nonexistent {
            kind,
            reason: reason.into(),
            residuals: Some(result.residuals),
        }),
        None => Ok(result),
    }
}

/// Strict inverse computed from an externally supplied `w` with `wa = p`
/// and `aw = 1 − q`, as `(wa)^# w = p·w`, and checked against
/// [`outer_2_strict`].
pub fn outer_2_strict_with_witness(prob: &PqProblem, w: &CMatrix) -> Result<PqResult, PqError> {
    let tol = prob.tol();
    let a = prob.a();
    if !tol.close(&(w * a), prob.p()) || !tol.close(&(a * w), &prob.q().complement()) {
        return Err(PqError::Invalid(
            "witness must satisfy wa = p and aw = 1−q".into(),
        ));
    }
    let via_group = repr_group(a, w, tol)?;
    let reference = outer_2_strict(prob)?;
    if !tol.close(&via_group, &reference.b) || !tol.close(&(prob.p() * w), &reference.b) {
        return Err(PqError::Numerical(
            "witness route disagrees with the strict inverse".into(),
        ));
    }
    Ok(reference)
}

/// `{1,2}`-inverse with `Ran b = Ran p`, `Ker b = Ran q`; exists iff
/// `ℂⁿ = Ran(a) ∔ Ran(q) = Ker(a) ∔ Ran(p)`.
pub fn one_two_l(prob: &PqProblem) -> Result<PqResult, PqError> {
    let kind = InverseKind::OneTwoL;
    let tol = prob.tol();
    let a = prob.a();
    let mut failing = Vec::new();
    if !is_direct_sum_all(&range_of(a, tol), &range_of_idempotent(prob.q(), tol), tol) {
        failing.push("ℂⁿ ≠ Ran(a) ∔ Ran(q)");
    }
    if !is_direct_sum_all(&kernel_of(a, tol), &range_of_idempotent(prob.p(), tol), tol) {
        failing.push("ℂⁿ ≠ Ker(a) ∔ Ran(p)");
    }
    if !failing.is_empty() {
        return Err(nonexistent(kind, failing.join("; ")));
    }
    let mut result = outer_2l(prob).map_err(|e| match e {
        PqError::Nonexistent { reason, .. } => PqError::Numerical(format!(
            "decompositions hold but the (p,q,l)-outer inverse failed: {reason}"
        )),
        other => other,
    })?;
    result.kind = kind;
    if !tol.close(&(&(a * &result.b) * a), a) {
        return Err(PqError::Numerical(format!(
            "aba ≠ a (residual {:e})",
            result.residuals.aba_a
        )));
    }
    Ok(result)
}

/// `{1,2}`-inverse with `ba = p`, `ab = 1 − q`; exists iff [`one_two_l`]
/// does and `Ran(a) = Ran(1−q)`, `Ker(a) = Ran(1−p)`.
pub fn one_two_strict(prob: &PqProblem) -> Result<PqResult, PqError> {
    let kind = InverseKind::OneTwoStrict;
    let tol = prob.tol();
    let a = prob.a();
    let mut result = one_two_l(prob).map_err(|e| retag(e, kind))?;
    result.kind = kind;
    if !range_of(a, tol).equals(&range_of_idempotent(&prob.q().complement(), tol), tol) {
        return Err(nonexistent(kind, "Ran(a) ≠ Ran(1−q)"));
    }
    if !kernel_of(a, tol).equals(&range_of_idempotent(&prob.p().complement(), tol), tol) {
        return Err(nonexistent(kind, "Ker(a) ≠ Ran(1−p)"));
    }
    let b = &result.b;
    if !tol.close(&(b * a), prob.p()) || !tol.close(&(a * b), &prob.q().complement()) {
        return Err(PqError::Numerical(
            "subspace conditions hold but ba = p or ab = 1−q fails".into(),
        ));
    }
    Ok(result)
}

fn retag(e: PqError, kind: InverseKind) -> PqError {
    match e {
        PqError::Nonexistent {
            reason, residuals, ..
        } => PqError::Nonexistent {
            kind,
            reason,
            residuals,
        },
        other => other,
    }
}

/// Tolerances used to judge a result produced by `route`.
pub(crate) fn route_tolerances(route: Route, tol: &Tolerances) -> Tolerances {
    if route.is_approximate() {
        let loose = (1e3 * tol.conv_tol).max(tol.eq_rtol);
        Tolerances {
            rank_rtol: tol.rank_rtol.max(tol.conv_tol.sqrt()),
            eq_atol: tol.eq_atol.max(loose),
            eq_rtol: loose,
            conv_tol: tol.conv_tol,
        }
    } else {
        *tol
    }
}

pub(crate) fn measure(prob: &PqProblem, b: &CMatrix, route: Route) -> Residuals {
    let tol = route_tolerances(route, prob.tol());
    let (a, p, q) = (prob.a(), prob.p(), prob.q());
    let one_minus_q = q.complement();
    let ba = b * a;
    let ab = a * b;
    Residuals {
        bab_b: (&ba * b).distance(b),
        aba_a: (&ab * a).distance(a),
        range_distance: range_of(b, &tol).distance(&range_of_idempotent(p, &tol)),
        kernel_distance: kernel_of(b, &tol).distance(&range_of_idempotent(q, &tol)),
        ba_p: ba.distance(p),
        ab_one_minus_q: ab.distance(&one_minus_q),
        pb_b: (p * b).distance(b),
        bap_p: (&ba * p).distance(p),
        b_one_minus_q_b: (b * &one_minus_q).distance(b),
        one_minus_q_ab: (&(&one_minus_q * a) * b).distance(&one_minus_q),
    }
}

fn finish(prob: &PqProblem, kind: InverseKind, route: Route, b: CMatrix) -> PqResult {
    let residuals = measure(prob, &b, route);
    PqResult {
        kind,
        b,
        route,
        residuals,
    }
}

fn validate_outer_2l(prob: &PqProblem, result: &PqResult) -> Result<(), PqError> {
    let tol = route_tolerances(result.route, prob.tol());
    let (a, p, b) = (prob.a(), prob.p(), &result.b);
    let one_minus_q = prob.q().complement();
    let ba = b * a;
    let checks = [
        ("bab = b", tol.close(&(&ba * b), b)),
        ("pb = b", tol.close(&(p * b), b)),
        ("bap = p", tol.close(&(&ba * p), p)),
        ("b(1−q) = b", tol.close(&(b * &one_minus_q), b)),
        (
            "(1−q)ab = 1−q",
            tol.close(&(&(&one_minus_q * a) * b), &one_minus_q),
        ),
    ];
    if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
        return Err(PqError::Numerical(format!(
            "computed (p,q,l)-outer inverse violates {name}"
        )));
    }
    if !result.route.is_approximate() {
        let t = prob.tol();
        if !range_of(b, t).equals(&range_of_idempotent(p, t), t) {
            return Err(PqError::Numerical("Ran b ≠ Ran p".into()));
        }
        if !kernel_of(b, t).equals(&range_of_idempotent(prob.q(), t), t) {
            return Err(PqError::Numerical("Ker b ≠ Ran q".into()));
        }
    }
    Ok(())
}
