//! Property tests. Random matrices come from seeded generators so that a
//! shrunk failure reproduces from its seed alone.

use pqinv::cli::{matrix_to_json, parse_matrix};
use pqinv::densela::rank;
use pqinv::ginv::{
    drazin_inverse, group_inverse, has_group_inverse_by_rank, moore_penrose, PenroseResiduals,
};
use pqinv::pqinv::{diagnose, outer_2l, repr_group, PqProblem};
use pqinv::subspace::{intersect, range_of, sum};
use pqinv::verify::gen::{self, Spectrum};
use pqinv::{CMatrix, Complex64, Tolerances};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn finite() -> impl Strategy<Value = f64> {
    any::<f64>().prop_filter("finite", |x| x.is_finite())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_file_round_trip(
        (rows, cols, parts) in (0usize..4, 0usize..4).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), proptest::collection::vec((finite(), finite()), r * c))
        })
    ) {
        let entries = parts.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let m = CMatrix::new(rows, cols, entries).unwrap();
        let back = parse_matrix(&matrix_to_json(&m).to_string(), "prop").unwrap();
        prop_assert_eq!((back.rows(), back.cols()), (rows, cols));
        for (x, y) in m.entries().iter().zip(back.entries()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn entry_round_trip(re in finite(), im in finite()) {
        let m = CMatrix::new(1, 1, vec![Complex64::new(re, im)]).unwrap();
        let back = parse_matrix(&matrix_to_json(&m).to_string(), "prop").unwrap();
        prop_assert_eq!(back.get(0, 0).re.to_bits(), re.to_bits());
        prop_assert_eq!(back.get(0, 0).im.to_bits(), im.to_bits());
    }

    /// `A^# = A (A³)† A` whenever the group inverse exists.
    #[test]
    fn group_inverse_matches_cube_formula(seed in any::<u64>(), n in 1usize..7, k in 0usize..2) {
        let t = tol();
        let a = gen::with_index(&mut gen::rng(seed, 0), n, k.min(n));
        let g = group_inverse(&a, &t).unwrap().expect("index ≤ 1");
        let cube = &(&a * &a) * &a;
        let oracle = &(&a * &moore_penrose(&cube, &t)) * &a;
        prop_assert!(g.distance(&oracle) <= 1e-9 * (1.0 + oracle.fro_norm()));
    }

    #[test]
    fn group_verdict_matches_rank_test(seed in any::<u64>(), n in 1usize..7, k in 0usize..5) {
        let t = tol();
        let a = gen::with_index(&mut gen::rng(seed, 0), n, k.min(n));
        let exists = group_inverse(&a, &t).unwrap().is_some();
        prop_assert_eq!(exists, has_group_inverse_by_rank(&a, &t));
        prop_assert_eq!(exists, k.min(n) <= 1);
    }

    #[test]
    fn penrose_equations(seed in any::<u64>(), n in 1usize..7, r in 0usize..7) {
        let t = tol();
        let a = gen::with_rank(&mut gen::rng(seed, 0), n, r.min(n));
        let x = moore_penrose(&a, &t);
        prop_assert!(PenroseResiduals::of(&a, &x).max() <= 1e-10 * (1.0 + a.fro_norm()));
        prop_assert_eq!(rank(&x, &t), r.min(n));
    }

    /// `(S A S⁻¹)^D = S A^D S⁻¹`.
    #[test]
    fn drazin_commutes_with_similarity(seed in any::<u64>(), n in 1usize..7, k in 0usize..4) {
        let t = tol();
        let mut rng = gen::rng(seed, 0);
        let a = gen::with_index(&mut rng, n, k.min(n));
        let u = gen::orthonormal(&mut rng, n, n);
        let d = drazin_inverse(&a, &t).unwrap();
        let moved = drazin_inverse(&(&(&u * &a) * &u.adjoint()), &t).unwrap();
        prop_assert_eq!(moved.index, d.index);
        let expect = &(&u * &d.inverse) * &u.adjoint();
        prop_assert!(moved.inverse.distance(&expect) <= 1e-9 * (1.0 + expect.fro_norm()));
    }

    #[test]
    fn intersection_and_sum_dimensions(seed in any::<u64>(), n in 1usize..7, s in 0usize..7, u in 0usize..7) {
        let t = tol();
        let mut rng = gen::rng(seed, 0);
        let x = range_of(&gen::gaussian(&mut rng, n, s.min(n)), &t);
        let y = range_of(&gen::gaussian(&mut rng, n, u.min(n)), &t);
        let cap = intersect(&x, &y, &t).dim();
        let cup = sum(&x, &y, &t).dim();
        prop_assert_eq!(cap + cup, x.dim() + y.dim());
        prop_assert_eq!(cup, (x.dim() + y.dim()).min(n));
    }

    /// The result depends on `Ran w` and `Ker w` only.
    #[test]
    fn gauge_invariance_in_w(seed in any::<u64>(), n in 1usize..7, r in 0usize..7) {
        let t = tol();
        let mut rng = gen::rng(seed, 0);
        let inst = gen::constructed(&mut rng, n, r.min(n), true, Spectrum::Generic);
        let m = gen::conditioned(&mut rng, r.min(n), 10.0);
        let w2 = &(&inst.range * &m) * &inst.corange.adjoint();
        let b1 = repr_group(&inst.a, &inst.w, &t).unwrap();
        let b2 = repr_group(&inst.a, &w2, &t).unwrap();
        prop_assert!(b1.distance(&b2) <= 1e-8 * (1.0 + b1.fro_norm()));
    }

    /// Constructed instances always admit the relaxed inverse, and it fixes
    /// `p` and `1 − q` on the correct sides.
    #[test]
    fn constructed_instances_satisfy_the_equations(
        seed in any::<u64>(), n in 1usize..7, r in 0usize..7, oblique in any::<bool>()
    ) {
        let t = tol();
        let inst = gen::constructed(&mut gen::rng(seed, 0), n, r.min(n), oblique, Spectrum::Generic);
        let prob = PqProblem::new(inst.a, inst.p, inst.q, t).unwrap();
        let report = diagnose(&prob);
        prop_assert!(report.l_exists && report.equivalence_consistent && report.lattice_consistent);
        let res = outer_2l(&prob).unwrap();
        let (a, p, b) = (prob.a(), prob.p(), &res.b);
        let oq = prob.q().complement();
        let scale = 1.0 + b.fro_norm() * (1.0 + a.fro_norm()) * (1.0 + p.fro_norm() + oq.fro_norm());
        prop_assert!((p * b).distance(b) <= 1e-9 * scale);
        prop_assert!((&(b * a) * p).distance(p) <= 1e-9 * scale);
        prop_assert!((b * &oq).distance(b) <= 1e-9 * scale);
        prop_assert!((&(&oq * a) * b).distance(&oq) <= 1e-9 * scale);
    }

    /// Unitary change of coordinates moves the inverse along.
    #[test]
    fn unitary_covariance(seed in any::<u64>(), n in 1usize..6, r in 0usize..6) {
        let t = tol();
        let mut rng = gen::rng(seed, 0);
        let inst = gen::constructed(&mut rng, n, r.min(n), true, Spectrum::Generic);
        let v = gen::orthonormal(&mut rng, n, n);
        let conj = |m: &CMatrix| &(&v * m) * &v.adjoint();
        let b = outer_2l(&PqProblem::new(inst.a.clone(), inst.p.clone(), inst.q.clone(), t).unwrap())
            .unwrap()
            .b;
        let moved = outer_2l(&PqProblem::new(conj(&inst.a), conj(&inst.p), conj(&inst.q), t).unwrap())
            .unwrap()
            .b;
        prop_assert!(moved.distance(&conj(&b)) <= 1e-9 * (1.0 + b.fro_norm()));
    }

    /// Scaling `a` by `c ≠ 0` keeps every verdict and scales the inverse by `1/c`.
    #[test]
    fn scaling_a(seed in any::<u64>(), n in 1usize..6, re in 0.1f64..10.0, im in -5.0f64..5.0) {
        let t = tol();
        let (a, p, q) = gen::unconstrained(&mut gen::rng(seed, 0), n);
        let c = Complex64::new(re, im);
        let base = PqProblem::new(a.clone(), p.clone(), q.clone(), t).unwrap();
        let scaled = PqProblem::new(a.scale(c), p, q, t).unwrap();
        let (r0, r1) = (diagnose(&base), diagnose(&scaled));
        if !(r0.fragile || r1.fragile) {
            prop_assert_eq!(r0.l_exists, r1.l_exists);
            prop_assert_eq!(r0.strict_exists, r1.strict_exists);
            prop_assert_eq!(r0.direct_sum, r1.direct_sum);
        }
        if let (Ok(b0), Ok(b1)) = (outer_2l(&base), outer_2l(&scaled)) {
            let expect = b0.b.scale(c.inv());
            prop_assert!(b1.b.distance(&expect) <= 1e-8 * (1.0 + expect.fro_norm()));
        }
    }

    /// In ℂ¹ with `p = 1`, `q = 0` the inverse is `1/a`.
    #[test]
    fn scalar_inverse(re in -1e3f64..1e3, im in -1e3f64..1e3) {
        prop_assume!(Complex64::new(re, im).norm() > 1e-3);
        let a = CMatrix::new(1, 1, vec![Complex64::new(re, im)]).unwrap();
        let prob = PqProblem::new(a, CMatrix::identity(1), CMatrix::zeros(1, 1), tol()).unwrap();
        let b = outer_2l(&prob).unwrap().b.get(0, 0);
        let expect = Complex64::new(re, im).inv();
        prop_assert!((b - expect).norm() <= 1e-14 * expect.norm());
    }
}
