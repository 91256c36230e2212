//! Range, kernel, image, intersection and direct-sum tests.
//!
//!     cargo run --example subspaces

use pqinv::subspace::{image, intersect, is_direct_sum_all, kernel_of, range_of, sum};
use pqinv::{CMatrix, Tolerances};

fn main() {
    let tol = Tolerances::default();
    let a = CMatrix::real(&[[0.0, 0.0], [1.0, 0.0]]);
    let p = CMatrix::real(&[[1.0, 1.0], [0.0, 0.0]]);
    let one_minus_q = CMatrix::real(&[[0.0, 1.0], [0.0, 1.0]]);

    let ran_p = range_of(&p, &tol);
    let ker_a = kernel_of(&a, &tol);
    let a_ran_p = image(&a, &ran_p, &tol);
    let ran_q = range_of(&one_minus_q.complement(), &tol);
    let ran_1q = range_of(&one_minus_q, &tol);

    println!("Ran p basis:\n{}", ran_p.basis());
    println!("Ker a basis:\n{}", ker_a.basis());
    println!("a·Ran p basis:\n{}", a_ran_p.basis());
    println!(
        "dim(Ker a ∩ Ran p) = {}",
        intersect(&ker_a, &ran_p, &tol).dim()
    );
    println!(
        "dim(a·Ran p + Ran q) = {}",
        sum(&a_ran_p, &ran_q, &tol).dim()
    );
    println!(
        "ℂ² = a·Ran p ∔ Ran q: {}",
        is_direct_sum_all(&a_ran_p, &ran_q, &tol)
    );
    println!("a·Ran p = Ran(1−q): {}", a_ran_p.equals(&ran_1q, &tol));
    println!("projector distance = {}", a_ran_p.distance(&ran_1q));
}
