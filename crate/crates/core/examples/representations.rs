//! The four representations on one random instance, plus the limit and
//! integral convergence traces.
//!
//!     cargo run --example representations [seed]

use pqinv::pqinv::{
    default_lambda_schedule, repr_group, repr_inner, repr_integral, repr_limit, IntegralOptions,
};
use pqinv::verify::gen::{self, Spectrum};
use pqinv::Tolerances;

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let tol = Tolerances::default();
    let mut rng = gen::rng(seed, 0);
    let inst = gen::constructed(
        &mut rng,
        5,
        3,
        true,
        Spectrum::RightHalfPlane { min_re: 0.3 },
    );
    let (a, w) = (&inst.a, &inst.w);

    let group = repr_group(a, w, &tol).expect("exists by construction");
    let inner = repr_inner(a, w, &tol).expect("exists by construction");
    let limit = repr_limit(a, w, &default_lambda_schedule(), &tol).expect("converges");
    let integral = repr_integral(a, w, &IntegralOptions::default(), &tol).expect("Re σ > 0");

    println!("w(aw)^#:\n{group}");
    println!("‖inner − group‖    = {:e}", inner.distance(&group));
    println!("‖limit − group‖    = {:e}", limit.b.distance(&group));
    println!("‖integral − group‖ = {:e}", integral.b.distance(&group));

    println!("\nλ          error");
    for s in &limit.steps {
        println!("{:<10e} {:e}", s.lambda, s.iterate.distance(&group));
    }
    println!("\nhorizon    tail bound   error");
    for s in &integral.steps {
        println!(
            "{:<10.4} {:<12e} {:e}",
            s.horizon,
            s.tail_bound,
            s.iterate.distance(&group)
        );
    }
}
