use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use super::gen::{self, Spectrum};
use super::{Case, Status, SuiteReport};
use crate::densela::{norm_2, rank_relative_to, CMatrix, LinalgError, Tolerances};
use crate::ginv::{
    drazin_index, drazin_inverse, gi_idempotents, group_inverse, has_group_inverse_by_rank,
    moore_penrose, one_five_inverse, reflexive_inverse, PenroseResiduals,
};
use crate::pqinv::{
    construct_w, default_lambda_schedule, diagnose, one_two_l, one_two_strict, outer_2_strict,
    outer_2l, repr_group, repr_inner, repr_integral, repr_limit, special_case_drazin,
    special_case_mp, ExistenceReport, IntegralOptions, PqError, PqProblem, PqResult,
};
use crate::subspace::{kernel_of, range_of, range_of_idempotent, range_of_relative_to};

pub const MAX_FUZZ_DIM: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuzzError {
    #[error("max_dim must be between 1 and {MAX_FUZZ_DIM}, got {0}")]
    BadDim(usize),
    #[error("trials must be positive")]
    NoTrials,
    #[error(transparent)]
    Tolerance(#[from] LinalgError),
}

/// Runs `trials` seeded trials at sizes `1..=max_dim`. Even trials draw an
/// instance where the `(p,q,l)`-outer inverse exists by construction, odd
/// trials an unconstrained triple. Each trial yields one case per property
/// family, named `fuzz/<trial>/<family>`.
pub fn fuzz(
    seed: u64,
    trials: usize,
    max_dim: usize,
    tol: &Tolerances,
) -> Result<SuiteReport, FuzzError> {
    if max_dim == 0 || max_dim > MAX_FUZZ_DIM {
        return Err(FuzzError::BadDim(max_dim));
    }
    if trials == 0 {
        return Err(FuzzError::NoTrials);
    }
    tol.validate()?;
    let cases: Vec<Case> = (0..trials)
        .into_par_iter()
        .flat_map_iter(|t| trial(seed, t, max_dim, tol))
        .collect();
    Ok(SuiteReport::new("fuzz", seed, trials, max_dim, cases, *tol))
}

/// Random draws for one trial, taken up front so that the stream position
/// never depends on a numerical verdict.
struct Draws {
    n: usize,
    a: CMatrix,
    p: CMatrix,
    q: CMatrix,
    constructed: bool,
    y: CMatrix,
    z: CMatrix,
    mp_input: CMatrix,
    drazin_input: CMatrix,
    drazin_index: usize,
    nilpotent: CMatrix,
    nilpotent_index: usize,
}

fn draw(seed: u64, t: usize, max_dim: usize) -> Draws {
    let mut rng = gen::rng(seed, t as u64);
    let n = rng.gen_range(1..=max_dim);
    let constructed = t.is_multiple_of(2);
    let (a, p, q) = if constructed {
        let r = rng.gen_range(0..=n);
        let oblique = rng.gen_bool(0.5);
        let spectrum = if rng.gen_bool(0.5) {
            Spectrum::RightHalfPlane { min_re: 0.2 }
        } else {
            Spectrum::Generic
        };
        let c = gen::constructed(&mut rng, n, r, oblique, spectrum);
        (c.a, c.p, c.q)
    } else {
        gen::unconstrained(&mut rng, n)
    };
    let y = gen::gaussian(&mut rng, n, n);
    let z = gen::gaussian(&mut rng, n, n);
    let mp_rank = if n == 1 {
        rng.gen_range(0..=1)
    } else {
        rng.gen_range(0..n)
    };
    let mp_input = gen::with_rank(&mut rng, n, mp_rank);
    let drazin_index = rng.gen_range(0..=n.min(3));
    let drazin_input = gen::with_index(&mut rng, n, drazin_index);
    let nilpotent_index = rng.gen_range(n.min(2)..=n.min(4));
    let nilpotent = gen::with_index(&mut rng, n, nilpotent_index);
    Draws {
        n,
        a,
        p,
        q,
        constructed,
        y,
        z,
        mp_input,
        drazin_input,
        drazin_index,
        nilpotent,
        nilpotent_index,
    }
}

fn timed(name: String, body: impl FnOnce(&mut Case)) -> Case {
    let start = Instant::now();
    let mut case = Case::new(name);
    body(&mut case);
    case.elapsed = start.elapsed();
    case
}

fn trial(seed: u64, t: usize, max_dim: usize, tol: &Tolerances) -> Vec<Case> {
    let d = draw(seed, t, max_dim);
    let name = |family: &str| format!("fuzz/{t:06}/{family}");
    let mut cases = Vec::new();

    let prob = match PqProblem::new(d.a.clone(), d.p.clone(), d.q.clone(), *tol) {
        Ok(prob) => Some(prob),
        Err(e) => {
            let mut c = Case::new(name("existence"));
            c.check(false, format!("generated problem rejected: {e}"));
            cases.push(c);
            None
        }
    };
    let mut fragile = false;
    if let Some(prob) = prob {
        let report = diagnose(&prob);
        fragile = report.fragile;
        cases.push(timed(name("existence"), |c| {
            existence(c, &report, d.constructed, d.n)
        }));
        if report.l_exists {
            match outer_2l(&prob) {
                Ok(res) => {
                    cases.push(timed(name("equations"), |c| {
                        equations(c, &prob, &report, &res)
                    }));
                    cases.push(timed(name("routes"), |c| routes(c, &prob, &res)));
                    cases.push(timed(name("uniqueness"), |c| {
                        uniqueness(c, &prob, &res, &d.y)
                    }));
                    cases.push(timed(name("fixing"), |c| fixing(c, &prob, &res, &d.y)));
                    cases.push(timed(name("one_five"), |c| one_five(c, &prob, &res, &d.z)));
                }
                Err(e) => {
                    let mut c = Case::new(name("equations"));
                    c.check(false, format!("(p,q,l)-outer inverse failed: {e}"));
                    cases.push(c);
                }
            }
        }
        cases.push(timed(name("one_two"), |c| one_two(c, &prob, &report)));
    }
    cases.push(timed(name("ginv"), |c| ginv(c, &d.a, tol)));
    cases.push(timed(name("nilpotent_part"), |c| {
        nilpotent_part(c, &d.nilpotent, d.nilpotent_index, tol)
    }));
    cases.push(timed(name("special_mp"), |c| {
        special_mp(c, &d.mp_input, tol)
    }));
    cases.push(timed(name("special_drazin"), |c| {
        special_drazin(c, &d.drazin_input, d.drazin_index, tol)
    }));

    if fragile {
        for c in &mut cases {
            if c.status == Status::Fail {
                c.status = Status::Fragile;
            }
        }
    }
    cases
}

fn existence(c: &mut Case, r: &ExistenceReport, constructed: bool, n: usize) {
    c.note(format!(
        "n={n} {} l={} strict={} direct_sum={} ker_trivial={} image_match={} cond5={} cond6={} l12={} strict12={}{}",
        if constructed { "constructed" } else { "unconstrained" },
        r.l_exists,
        r.strict_exists,
        r.direct_sum,
        r.ker_cap_ranp_trivial,
        r.image_match,
        r.cond5,
        r.cond6(),
        r.l12_exists,
        r.strict12_exists,
        if r.fragile { " fragile" } else { "" },
    ));
    c.check(
        r.equivalence_consistent,
        "l_exists, direct_sum ∧ ker_trivial, cond5, cond6 disagree",
    );
    c.check(r.lattice_consistent, "implication lattice violated");
    if constructed {
        c.check(r.l_exists, "constructed instance reported nonexistent");
    }
}

/// Scale for equation residuals in products of `a`, `b`, `p`, `q`.
fn product_scale(prob: &PqProblem, b: &CMatrix) -> f64 {
    (1.0 + norm_2(prob.a()))
        * (1.0 + norm_2(b))
        * (1.0 + norm_2(prob.p()))
        * (1.0 + norm_2(prob.q()))
}

fn equations(c: &mut Case, prob: &PqProblem, report: &ExistenceReport, res: &PqResult) {
    let tol = prob.tol();
    let (a, p, b) = (prob.a(), prob.p(), &res.b);
    let r = &res.residuals;
    let bound = tol.eq_bound(1.0) * product_scale(prob, b);
    for (key, value) in [
        ("bab_b", r.bab_b),
        ("pb_b", r.pb_b),
        ("bap_p", r.bap_p),
        ("b_one_minus_q_b", r.b_one_minus_q_b),
        ("one_minus_q_ab", r.one_minus_q_ab),
    ] {
        c.residual(key, value);
        c.check(value <= bound, format!("{key} = {value:e} above {bound:e}"));
    }
    c.residual("range_distance", r.range_distance);
    c.residual("kernel_distance", r.kernel_distance);
    let ran_p = range_of_idempotent(p, tol);
    let ran_q = range_of_idempotent(prob.q(), tol);
    c.check(range_of(b, tol).equals(&ran_p, tol), "Ran b ≠ Ran p");
    c.check(kernel_of(b, tol).equals(&ran_q, tol), "Ker b ≠ Ran q");

    let ba = b * a;
    let ab = a * b;
    let reference = norm_2(b) * norm_2(a);
    c.check(
        range_of_relative_to(&ba, reference, tol).equals(&ran_p, tol),
        "Ran ba ≠ Ran p",
    );
    let ker_ab = crate::subspace::range_of_relative_to(&ab.complement(), 1.0, tol);
    c.check(ker_ab.equals(&ran_q, tol), "Ker ab ≠ Ran q");

    let strict_by_equations = tol.close(&ba, p) && tol.close(&ab, &prob.q().complement());
    c.check(
        strict_by_equations == report.strict_exists,
        format!(
            "ba = p ∧ ab = 1−q is {strict_by_equations} but strict_exists is {}",
            report.strict_exists
        ),
    );
    let strict_ok = outer_2_strict(prob).is_ok();
    c.check(
        strict_ok == report.strict_exists,
        format!(
            "outer_2_strict succeeded = {strict_ok}, strict_exists = {}",
            report.strict_exists
        ),
    );
}

fn routes(c: &mut Case, prob: &PqProblem, res: &PqResult) {
    let tol = prob.tol();
    let a = prob.a();
    let w = match construct_w(prob.p(), prob.q(), tol) {
        Ok(w) => w,
        Err(e) => return c.check(false, format!("construct_w: {e}")),
    };
    let group = match repr_group(a, &w, tol) {
        Ok(b) => b,
        Err(e) => return c.check(false, format!("group route: {e}")),
    };
    let aw = a * &w;
    let sharp = match group_inverse(&aw, tol) {
        Ok(Some(s)) => s,
        _ => return c.check(false, "aw lost its group inverse"),
    };
    let scale = (1.0 + group.fro_norm())
        * (1.0 + sharp.fro_norm())
        * (1.0 + (&aw * &sharp).complement().fro_norm());
    c.residual("scale", scale);
    let dev = group.distance(&res.b);
    c.residual("group_vs_result", dev);
    c.check(
        dev <= 1e-8 * scale,
        format!("group route differs from result by {dev:e}"),
    );

    match repr_inner(a, &w, tol) {
        Ok(b) => {
            let dev = b.distance(&group);
            c.residual("inner_vs_group", dev);
            c.check(dev <= 1e-8 * scale, format!("inner route off by {dev:e}"));
        }
        Err(e) => c.check(false, format!("inner route: {e}")),
    }
    match repr_limit(a, &w, &default_lambda_schedule(), tol) {
        Ok(trace) => {
            let dev = trace.b.distance(&group);
            c.residual("limit_vs_group", dev);
            c.check(dev <= 1e-6 * scale, format!("limit route off by {dev:e}"));
        }
        Err(PqError::Spectral(m)) => c.note(format!("limit skipped: {m}")),
        Err(e) => c.check(false, format!("limit route: {e}")),
    }
    match repr_integral(a, &w, &IntegralOptions::default(), tol) {
        Ok(trace) => {
            let dev = trace.b.distance(&group);
            c.residual("integral_vs_group", dev);
            c.residual("integral_tail_bound", trace.tail_bound);
            c.check(
                dev <= 1e-6 * scale,
                format!("integral route off by {dev:e}"),
            );
        }
        Err(PqError::Spectral(m)) => c.note(format!("integral skipped: {m}")),
        Err(e) => c.check(false, format!("integral route: {e}")),
    }
}

/// `w₂ = p Y (1 − q)` has the same range and kernel as `construct_w`'s
/// choice, so both must give the same inverse.
fn uniqueness(c: &mut Case, prob: &PqProblem, res: &PqResult, y: &CMatrix) {
    let tol = prob.tol();
    let w2 = &(prob.p() * y) * &prob.q().complement();
    let ran_p = range_of_idempotent(prob.p(), tol);
    let reference = norm_2(prob.p()) * norm_2(y) * norm_2(&prob.q().complement());
    if rank_relative_to(&w2, reference, tol) != ran_p.dim() {
        c.note("second w lost rank; skipped");
        return;
    }
    match repr_group(prob.a(), &w2, tol) {
        Ok(b2) => {
            let dev = b2.distance(&res.b);
            let bound = 1e-8 * (1.0 + res.b.fro_norm()).powi(2);
            c.residual("w_independence", dev);
            c.check(
                dev <= bound,
                format!("second w gives a result {dev:e} away"),
            );
        }
        Err(e) => c.check(false, format!("group route with second w: {e}")),
    }
}

/// `bax = x ⟺ Ran x ⊆ Ran p` and `xab = x ⟺ Ran q ⊆ Ker x`.
fn fixing(c: &mut Case, prob: &PqProblem, res: &PqResult, y: &CMatrix) {
    let (a, b, p, q) = (prob.a(), &res.b, prob.p(), prob.q());
    let n = a.rows();
    let ba = b * a;
    let ab = a * b;
    let bound = 1e-8 * (1.0 + norm_2(b) * norm_2(a));
    let rel = |x: &CMatrix, fx: &CMatrix| fx.distance(x) / x.fro_norm().max(f64::MIN_POSITIVE);

    let rank_p = range_of_idempotent(p, prob.tol()).dim();
    let rank_q = range_of_idempotent(q, prob.tol()).dim();
    if rank_p > 0 {
        let inside = p * y;
        let r = rel(&inside, &(&ba * &inside));
        c.residual("left_inside", r);
        c.check(r <= bound, format!("bax ≠ x for Ran x ⊆ Ran p ({r:e})"));
    }
    if rank_p < n {
        let r = rel(y, &(&ba * y));
        c.residual("left_outside", r);
        c.check(r > bound, format!("bax = x although Ran x ⊄ Ran p ({r:e})"));
    }
    if rank_q < n {
        let killed = y * &q.complement();
        let r = rel(&killed, &(&killed * &ab));
        c.residual("right_inside", r);
        c.check(r <= bound, format!("xab ≠ x for Ran q ⊆ Ker x ({r:e})"));
    }
    if rank_q > 0 {
        let r = rel(y, &(y * &ab));
        c.residual("right_outside", r);
        c.check(r > bound, format!("xab = x although Ran q ⊄ Ker x ({r:e})"));
    }
}

/// Every (1,5)-inverse of `aw` (resp. `wa`) has the form
/// `m^# + (1 − m m^#) Z (1 − m m^#)`; each must reproduce the inverse
/// through `w·x` (resp. `y·w`).
fn one_five(c: &mut Case, prob: &PqProblem, res: &PqResult, z: &CMatrix) {
    let tol = prob.tol();
    let a = prob.a();
    let w = match construct_w(prob.p(), prob.q(), tol) {
        Ok(w) => w,
        Err(e) => return c.check(false, format!("construct_w: {e}")),
    };
    for (label, m, left) in [("aw", a * &w, true), ("wa", &w * a, false)] {
        let sharp = match group_inverse(&m, tol) {
            Ok(Some(s)) => s,
            _ => return c.check(false, format!("{label} has no group inverse")),
        };
        let e = (&m * &sharp).complement();
        let x = &sharp + &(&(&e * z) * &e);
        let scale = (1.0 + norm_2(&m)).powi(2) * (1.0 + x.fro_norm());
        let axiom1 = (&(&m * &x) * &m).distance(&m);
        let axiom5 = (&m * &x).distance(&(&x * &m));
        c.residual(&format!("{label}_axiom1"), axiom1);
        c.residual(&format!("{label}_axiom5"), axiom5);
        c.check(
            axiom1.max(axiom5) <= 1e-8 * scale,
            format!("{label}: drawn x is not a (1,5)-inverse"),
        );
        let b = if left { &w * &x } else { &x * &w };
        let dev = b.distance(&res.b);
        c.residual(&format!("{label}_representation"), dev);
        c.check(
            dev <= 1e-8 * scale * (1.0 + res.b.fro_norm()),
            format!("{label}: (1,5)-inverse representation off by {dev:e}"),
        );
    }
}

fn one_two(c: &mut Case, prob: &PqProblem, report: &ExistenceReport) {
    for (label, expected, outcome) in [
        ("one_two_l", report.l12_exists, one_two_l(prob)),
        (
            "one_two_strict",
            report.strict12_exists,
            one_two_strict(prob),
        ),
    ] {
        match outcome {
            Ok(r) => {
                c.residual(&format!("{label}_aba_a"), r.residuals.aba_a);
                c.check(
                    expected,
                    format!("{label} computed although the report says absent"),
                );
            }
            Err(PqError::Nonexistent { reason, .. }) => {
                c.check(
                    !expected,
                    format!("{label} absent ({reason}) although the report says present"),
                );
            }
            Err(e) => c.check(false, format!("{label}: {e}")),
        }
    }
}

fn ginv(c: &mut Case, a: &CMatrix, tol: &Tolerances) {
    let fro = a.fro_norm();
    let mp = moore_penrose(a, tol);
    let pen = PenroseResiduals::of(a, &mp).max();
    c.residual("penrose", pen);
    c.check(
        pen <= 1e-10 * (1.0 + fro),
        format!("Penrose residual {pen:e}"),
    );

    let x = reflexive_inverse(a, tol);
    let refl = (&(a * &x) * a)
        .distance(a)
        .max((&(&x * a) * &x).distance(&x));
    c.residual("reflexive", refl);
    c.check(
        refl <= 1e-9 * (1.0 + fro) * (1.0 + x.fro_norm()).powi(2),
        format!("reflexive residual {refl:e}"),
    );

    let (p, q) = gi_idempotents(a, tol);
    c.check(
        kernel_of(&p, tol).equals(&kernel_of(a, tol), tol),
        "Ker(a†a) ≠ Ker a",
    );
    c.check(
        range_of(&q, tol).equals(&range_of(a, tol), tol),
        "Ran(aa†) ≠ Ran a",
    );

    group_checks(c, a, tol);
    match drazin_inverse(a, tol) {
        Ok(d) => drazin_checks(c, a, &d.inverse, d.index, &d.spectral_idempotent),
        Err(e) => c.check(false, format!("Drazin: {e}")),
    }
}

fn group_checks(c: &mut Case, a: &CMatrix, tol: &Tolerances) {
    let by_rank = has_group_inverse_by_rank(a, tol);
    let g = group_inverse(a, tol).ok().flatten();
    let one_five = one_five_inverse(a, tol).ok().flatten();
    c.check(
        g.is_some() == by_rank,
        format!(
            "group inverse exists = {}, rank test = {by_rank}",
            g.is_some()
        ),
    );
    c.check(
        one_five.is_some() == g.is_some(),
        "group and (1,5) existence disagree",
    );
    if let Some(g) = g {
        let scale = (1.0 + a.fro_norm()) * (1.0 + g.fro_norm()).powi(2);
        let axioms = (&(a * &g) * a)
            .distance(a)
            .max((&(&g * a) * &g).distance(&g))
            .max((a * &g).distance(&(&g * a)));
        c.residual("group_axioms", axioms);
        c.check(axioms <= 1e-9 * scale, format!("group axioms {axioms:e}"));
    }
}

fn drazin_checks(c: &mut Case, a: &CMatrix, x: &CMatrix, k: usize, pi: &CMatrix) {
    let ak = a.pow(k);
    let scale = (1.0 + norm_2(a)).powi(k as i32 + 1) * (1.0 + x.fro_norm()).powi(2);
    let r = (&(&ak * a) * x)
        .distance(&ak)
        .max((&(x * a) * x).distance(x))
        .max((a * x).distance(&(x * a)));
    c.residual("drazin_axioms", r);
    c.check(r <= 1e-9 * scale, format!("Drazin axioms {r:e}"));
    let idem = (pi * pi).distance(pi);
    c.residual("spectral_idempotent", idem);
    c.check(
        idem <= 1e-9 * scale,
        format!("a^π not idempotent ({idem:e})"),
    );
}

fn nilpotent_part(c: &mut Case, a: &CMatrix, k: usize, tol: &Tolerances) {
    c.note(format!("index {k}"));
    match drazin_index(a, tol) {
        Ok(found) => c.check(found == k, format!("index {found}, expected {k}")),
        Err(e) => c.check(false, format!("index: {e}")),
    }
    group_checks(c, a, tol);
    if k >= 2 {
        c.check(
            !has_group_inverse_by_rank(a, tol),
            "index ≥ 2 but rank test passes",
        );
    }
    match drazin_inverse(a, tol) {
        Ok(d) => drazin_checks(c, a, &d.inverse, d.index, &d.spectral_idempotent),
        Err(e) => c.check(false, format!("Drazin: {e}")),
    }
}

fn special_mp(c: &mut Case, a: &CMatrix, tol: &Tolerances) {
    match special_case_mp(a, tol) {
        Ok(r) => {
            let dev = r.b.distance(&moore_penrose(a, tol));
            c.residual("vs_moore_penrose", dev);
            c.check(dev <= 1e-9, format!("deviation {dev:e}"));
        }
        Err(e) => c.check(false, format!("{e}")),
    }
}

fn special_drazin(c: &mut Case, a: &CMatrix, k: usize, tol: &Tolerances) {
    c.note(format!("index {k}"));
    match (special_case_drazin(a, tol), drazin_inverse(a, tol)) {
        (Ok(r), Ok(d)) => {
            let dev = r.b.distance(&d.inverse);
            c.residual("vs_drazin", dev);
            c.check(dev <= 1e-8, format!("deviation {dev:e}"));
        }
        (Err(e), _) => c.check(false, format!("{e}")),
        (_, Err(e)) => c.check(false, format!("{e}")),
    }
}
