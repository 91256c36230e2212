//! a† and a^D recovered as strict outer inverses with prescribed
//! idempotents: a† with (a†a, 1 − aa†) and a^D with (1 − a^π, a^π).
//!
//!     cargo run --example special_cases

use pqinv::ginv::{drazin_inverse, moore_penrose};
use pqinv::pqinv::{special_case_drazin, special_case_mp};
use pqinv::verify::gen;
use pqinv::Tolerances;

fn main() {
    let tol = Tolerances::default();
    let mut rng = gen::rng(11, 0);
    for r in 0..=4 {
        let a = gen::with_rank(&mut rng, 4, r);
        let res = special_case_mp(&a, &tol).expect("always exists");
        println!(
            "rank {r}: ‖b − a†‖ = {:e}",
            res.b.distance(&moore_penrose(&a, &tol))
        );
    }
    for k in 0..=3 {
        let a = gen::with_index(&mut rng, 5, k);
        let res = special_case_drazin(&a, &tol).expect("always exists");
        let d = drazin_inverse(&a, &tol).expect("Drazin axioms hold");
        println!("index {k}: ‖b − a^D‖ = {:e}", res.b.distance(&d.inverse));
    }
}
