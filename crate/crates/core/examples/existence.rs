//! Existence diagnosis: every condition is decided by its own computation,
//! so disagreements would show up side by side.
//!
//!     cargo run --example existence

use pqinv::pqinv::{diagnose, outer_2_strict, outer_2l, PqProblem};
use pqinv::{CMatrix, Tolerances};

fn show(label: &str, a: CMatrix, p: CMatrix, q: CMatrix) {
    let prob = PqProblem::new(a, p, q, Tolerances::default()).expect("valid idempotents");
    let r = diagnose(&prob);
    println!("{label}");
    println!(
        "  ker∩ran={} direct_sum={} image_match={} cond5={} cond6={}",
        r.ker_cap_ranp_trivial,
        r.direct_sum,
        r.image_match,
        r.cond5,
        r.cond6()
    );
    println!(
        "  l={} strict={} l12={} strict12={} fragile={}",
        r.l_exists, r.strict_exists, r.l12_exists, r.strict12_exists, r.fragile
    );
    match outer_2l(&prob) {
        Ok(res) => print!("  (p,q,l)-outer inverse:\n{}", res.b),
        Err(e) => println!("  {e}"),
    }
    if let Err(e) = outer_2_strict(&prob) {
        println!("  {e}");
    }
}

fn main() {
    let a = CMatrix::real(&[[0.0, 0.0], [1.0, 0.0]]);
    let p = CMatrix::real(&[[1.0, 1.0], [0.0, 0.0]]);
    let one_minus_q = CMatrix::real(&[[0.0, 1.0], [0.0, 1.0]]);
    show(
        "oblique 1−q: relaxed inverse only",
        a.clone(),
        p.clone(),
        one_minus_q.complement(),
    );
    show(
        "1−q = diag(0,1): images match, still no strict inverse",
        a.clone(),
        p.clone(),
        CMatrix::real_diag(&[1.0, 0.0]),
    );
    show(
        "p = 1: Ker a meets Ran p",
        a,
        CMatrix::identity(2),
        CMatrix::zeros(2, 2),
    );
    let b = CMatrix::real(&[[2.0, 1.0], [0.0, 3.0]]);
    show(
        "invertible a, p = 1, q = 0: a⁻¹",
        b,
        CMatrix::identity(2),
        CMatrix::zeros(2, 2),
    );
}
