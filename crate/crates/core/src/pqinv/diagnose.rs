use serde::Serialize;

use super::compute::w_from_subspaces;
use super::PqProblem;
use crate::densela::{
    norm_2, rank, solve_left_relative_to, solve_right_relative_to, CMatrix, Tolerances,
};
use crate::ginv::group_inverse;
use crate::subspace::{
    image, intersect, is_direct_sum_all, kernel_of, range_of, range_of_idempotent,
    range_of_relative_to, Subspace,
};

/// `s`, `t` with `p = t(1−q)ap` and `1 − q = (1−q)aps`.
#[derive(Clone, Debug)]
pub struct Cond6Witnesses {
    pub s: CMatrix,
    pub t: CMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub n: usize,
    pub ran_p: usize,
    pub ran_q: usize,
    pub rank_a: usize,
}

/// Every existence condition, each decided by its own computation.
#[derive(Clone, Debug)]
pub struct ExistenceReport {
    /// `Ker(a) ∩ Ran(p) = {0}`.
    pub ker_cap_ranp_trivial: bool,
    /// `ℂⁿ = a·Ran(p) ∔ Ran(q)`.
    pub direct_sum: bool,
    /// `a·Ran(p) = Ran(1−q)`.
    pub image_match: bool,
    /// Row space of `p` inside that of `(1−q)ap`, and `Ran(1−q) ⊆ Ran((1−q)ap)`.
    pub cond5: bool,
    pub cond6_witnesses: Option<Cond6Witnesses>,
    pub strict_exists: bool,
    pub l_exists: bool,
    pub l12_exists: bool,
    pub strict12_exists: bool,
    pub dims: Dims,
    /// Some verdict flips when `rank_rtol` is scaled by 10 or 0.1.
    pub fragile: bool,
    /// `l_exists`, `direct_sum ∧ ker_cap_ranp_trivial`, `cond5` and `cond6` agree.
    pub equivalence_consistent: bool,
    /// `strict ⇒ l`, `strict ⇒ image_match ⇒ direct_sum`, `strict12 ⇒ l12`.
    pub lattice_consistent: bool,
    pub tolerances: Tolerances,
}

impl ExistenceReport {
    pub fn cond6(&self) -> bool {
        self.cond6_witnesses.is_some()
    }

    fn verdicts(&self) -> [bool; 9] {
        [
            self.ker_cap_ranp_trivial,
            self.direct_sum,
            self.image_match,
            self.cond5,
            self.cond6(),
            self.strict_exists,
            self.l_exists,
            self.l12_exists,
            self.strict12_exists,
        ]
    }
}

/// Decides every existence condition for `prob`, then repeats the decision
/// with `rank_rtol` scaled by 10 and by 0.1 to flag knife-edge verdicts.
pub fn diagnose(prob: &PqProblem) -> ExistenceReport {
    let tol = *prob.tol();
    let mut report = diagnose_at(prob, &tol);
    let fragile = [10.0, 0.1].iter().any(|&f| {
        let other = diagnose_at(prob, &tol.with_rank_scaled(f));
        other.verdicts() != report.verdicts()
    });
    report.fragile = fragile;
    report
}

fn diagnose_at(prob: &PqProblem, tol: &Tolerances) -> ExistenceReport {
    let n = prob.n();
    let (a, p, q) = (prob.a(), prob.p(), prob.q());
    let one_minus_q = q.complement();
    let one_minus_p = p.complement();

    let ran_p = range_of_idempotent(p, tol);
    let ran_q = range_of_idempotent(q, tol);
    let ran_a = range_of(a, tol);
    let ker_a = kernel_of(a, tol);
    let ran_1q = range_of_idempotent(&one_minus_q, tol);
    let ran_1p = range_of_idempotent(&one_minus_p, tol);

    let ker_cap_ranp_trivial = intersect(&ker_a, &ran_p, tol).is_zero();
    let a_ran_p = image(a, &ran_p, tol);
    let direct_sum = is_direct_sum_all(&a_ran_p, &ran_q, tol);
    let image_match = a_ran_p.equals(&ran_1q, tol);

    // Solvability of the ideal-membership conditions, once by subspace
    // containment and once by explicit least-squares witnesses.
    let m = &(&one_minus_q * a) * p;
    // Idempotent factors count with norm at least 1: a rounding-level
    // 1 − q must not set the scale for its own noise.
    let reference = norm_2(&one_minus_q).max(1.0) * norm_2(a) * norm_2(p).max(1.0);
    let row_m = range_of_relative_to(&m.adjoint(), reference, tol);
    let col_m = range_of_relative_to(&m, reference, tol);
    let cond5 = row_m.contains(&range_of_idempotent(&p.adjoint(), tol), tol)
        && col_m.contains(&ran_1q, tol);
    let cond6_witnesses = match (
        solve_left_relative_to(&m, p, reference, tol),
        solve_right_relative_to(&m, &one_minus_q, reference, tol),
    ) {
        (Ok(t), Ok(s)) => Some(Cond6Witnesses { s, t }),
        _ => None,
    };

    // Definitional test: build the only possible candidate and check it.
    let candidate = l_candidate(a, &ran_p, &ran_q, tol);
    let l_exists = candidate.is_some();
    let strict_exists = candidate
        .as_ref()
        .is_some_and(|b| tol.close(&(b * a), p) && tol.close(&(a * b), &one_minus_q));

    let l12_exists =
        is_direct_sum_all(&ran_a, &ran_q, tol) && is_direct_sum_all(&ker_a, &ran_p, tol);
    let strict12_exists = l12_exists && ran_a.equals(&ran_1q, tol) && ker_a.equals(&ran_1p, tol);

    let cond6 = cond6_witnesses.is_some();
    let pair = direct_sum && ker_cap_ranp_trivial;
    let equivalence_consistent = l_exists == pair && pair == cond5 && cond5 == cond6;
    let lattice_consistent = (!strict_exists || (l_exists && image_match))
        && (!image_match || direct_sum)
        && (!strict12_exists || l12_exists);

    ExistenceReport {
        ker_cap_ranp_trivial,
        direct_sum,
        image_match,
        cond5,
        cond6_witnesses,
        strict_exists,
        l_exists,
        l12_exists,
        strict12_exists,
        dims: Dims {
            n,
            ran_p: ran_p.dim(),
            ran_q: ran_q.dim(),
            rank_a: rank(a, tol),
        },
        fragile: false,
        equivalence_consistent,
        lattice_consistent,
        tolerances: *tol,
    }
}

/// `w(aw)^#` when it satisfies `bab = b`, `Ran b = Ran p`, `Ker b = Ran q`.
fn l_candidate(
    a: &CMatrix,
    ran_p: &Subspace,
    ran_q: &Subspace,
    tol: &Tolerances,
) -> Option<CMatrix> {
    let w = w_from_subspaces(ran_p, ran_q, tol).ok()?;
    let c = group_inverse(&(a * &w), tol).ok()??;
    let b = &w * &c;
    let ok = tol.close(&(&(&b * a) * &b), &b)
        && range_of(&b, tol).equals(ran_p, tol)
        && kernel_of(&b, tol).equals(ran_q, tol);
    ok.then_some(b)
}
