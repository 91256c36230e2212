//! Moore–Penrose, group, Drazin and (1,5) inverses with their axioms.
//!
//!     cargo run --example classical_inverses

use pqinv::ginv::{
    drazin_inverse, group_inverse, has_group_inverse_by_rank, moore_penrose, one_five_inverse,
    PenroseResiduals,
};
use pqinv::verify::gen;
use pqinv::{CMatrix, Tolerances};

fn main() {
    let tol = Tolerances::default();
    let a = CMatrix::real(&[[0.0, 0.0], [1.0, 0.0]]);
    let x = moore_penrose(&a, &tol);
    println!("a† of [[0,0],[1,0]]:\n{x}");
    println!("Penrose residual {:e}", PenroseResiduals::of(&a, &x).max());

    let mut rng = gen::rng(3, 0);
    let m = gen::with_rank(&mut rng, 4, 2);
    let r = PenroseResiduals::of(&m, &moore_penrose(&m, &tol));
    println!("rank-2 4×4: Penrose residual {:e}", r.max());

    let nil = CMatrix::real(&[[0.0, 1.0], [0.0, 0.0]]);
    println!(
        "nilpotent: rank test says group inverse exists = {}, computed = {:?}",
        has_group_inverse_by_rank(&nil, &tol),
        group_inverse(&nil, &tol).unwrap().is_some()
    );

    let idem = CMatrix::real(&[[1.0, 1.0], [0.0, 0.0]]);
    let g = group_inverse(&idem, &tol)
        .unwrap()
        .expect("idempotents are group invertible");
    println!(
        "group inverse of an idempotent is itself: ‖g − p‖ = {:e}",
        g.distance(&idem)
    );
    let f = one_five_inverse(&idem, &tol)
        .unwrap()
        .expect("same existence as the group inverse");
    println!(
        "(1,5): ‖afa − a‖ = {:e}",
        (&(&idem * &f) * &idem).distance(&idem)
    );

    for k in 0..=3 {
        let b = gen::with_index(&mut rng, 6, k);
        let d = drazin_inverse(&b, &tol).expect("Drazin axioms hold");
        // a^π projects onto the nilpotent part; its trace is that part's size.
        println!(
            "6×6 built with index {k}: computed index {}, dim of nilpotent part {:.0}",
            d.index,
            d.spectral_idempotent.trace().re
        );
    }
}
