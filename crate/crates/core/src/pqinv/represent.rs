//! Four independent representations of the `(p,q,l)`-outer inverse for a
//! `w` with `Ran w = Ran p`, `Ker w = Ran q`:
//!
//! * `w(aw)^# = (wa)^# w`
//! * `w(waw)⁻w` for any inner inverse of `waw`
//! * `lim_{λ→0} w(λ + aw)⁻¹`
//! * `∫₀^∞ w e^{−(aw)t} dt` when the nonzero spectrum of `aw` lies in the
//!   open right half plane

use num_complex::Complex64;

use super::{nonexistent, InverseKind, PqError};
use crate::densela::{eigenvalues, lu_solve, matrix_exp, rank, CMatrix, Tolerances};
use crate::ginv::{group_inverse, inner_inverse};
use crate::subspace::{intersect, kernel_of, range_of};

/// `w(aw)^#`, checked against `(wa)^# w` and against
/// `w·a·w·c = w`, `b·a·w·c = b` with `c = (aw)^#`.
pub fn repr_group(a: &CMatrix, w: &CMatrix, tol: &Tolerances) -> Result<CMatrix, PqError> {
    let kind = InverseKind::Outer2l;
    if !intersect(&kernel_of(a, tol), &range_of(w, tol), tol).is_zero() {
        return Err(nonexistent(kind, "Ker(a) ∩ Ran(w) ≠ {0}"));
    }
    let aw = a * w;
    let wa = w * a;
    let c = group_inverse(&aw, tol)?.ok_or_else(|| nonexistent(kind, "aw has no group inverse"))?;
    let d = group_inverse(&wa, tol)?.ok_or_else(|| nonexistent(kind, "wa has no group inverse"))?;
    let b = w * &c;
    let left = &d * w;
    if !tol.close(&b, &left) {
        return Err(PqError::Numerical(format!(
            "w(aw)^# and (wa)^# w differ by {:e}",
            b.distance(&left)
        )));
    }
    let awc = &aw * &c;
    if !tol.close(&(w * &awc), w) {
        return Err(PqError::Numerical("w·a·w·(aw)^# ≠ w".into()));
    }
    if !tol.close(&(&b * &awc), &b) {
        return Err(PqError::Numerical("b·a·w·(aw)^# ≠ b".into()));
    }
    Ok(b)
}

/// `w(waw)⁻w` with the canonical inner inverse of `waw`.
///
/// Also checks the explicit inner inverse `x = a((wa)^#)²` of `waw` and
/// agreement with [`repr_group`].
pub fn repr_inner(a: &CMatrix, w: &CMatrix, tol: &Tolerances) -> Result<CMatrix, PqError> {
    let via_group = repr_group(a, w, tol)?;
    let waw = &(w * a) * w;
    let g = inner_inverse(&waw, tol);
    let b = &(w * &g) * w;
    if !tol.close(&b, &via_group) {
        return Err(PqError::Numerical(format!(
            "w(waw)⁻w and w(aw)^# differ by {:e}",
            b.distance(&via_group)
        )));
    }
    let wa_sharp = group_inverse(&(w * a), tol)?
        .ok_or_else(|| PqError::Numerical("wa lost its group inverse".into()))?;
    let x = a * &(&wa_sharp * &wa_sharp);
    if !tol.close(&(&(&waw * &x) * &waw), &waw) {
        return Err(PqError::Numerical(
            "a((wa)^#)² is not an inner inverse of waw".into(),
        ));
    }
    Ok(b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitStep {
    pub lambda: f64,
    /// Frobenius distance to the previous iterate.
    pub cauchy: Option<f64>,
    /// `w(λ + aw)⁻¹`.
    pub iterate: CMatrix,
}

#[derive(Clone, Debug)]
pub struct LimitTrace {
    pub b: CMatrix,
    pub steps: Vec<LimitStep>,
}

/// λ = 1e-2, 1e-3, …, 1e-8.
pub fn default_lambda_schedule() -> Vec<f64> {
    lambda_schedule(1e-8)
}

/// Decades from 1e-2 down to `lambda_min` (which is always included).
pub fn lambda_schedule(lambda_min: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut exp = -2;
    while 10f64.powi(exp) > lambda_min * (1.0 + 1e-9) {
        out.push(10f64.powi(exp));
        exp -= 1;
    }
    out.push(lambda_min);
    out
}

/// Splits `σ(m)` into its `n − rank(m)` smallest-modulus eigenvalues
/// (treated as zero) and the rest.
fn split_spectrum(
    m: &CMatrix,
    tol: &Tolerances,
) -> Result<(Vec<Complex64>, Vec<Complex64>), PqError> {
    let mut eig = eigenvalues(m)?;
    eig.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    let zeros = m.rows() - rank(m, tol);
    let nonzero = eig.split_off(zeros);
    Ok((eig, nonzero))
}

/// `w(λ_min + aw)⁻¹` along a decreasing λ schedule with the Cauchy
/// differences between successive iterates.
pub fn repr_limit(
    a: &CMatrix,
    w: &CMatrix,
    schedule: &[f64],
    tol: &Tolerances,
) -> Result<LimitTrace, PqError> {
    if schedule.is_empty() {
        return Err(PqError::Invalid("empty λ schedule".into()));
    }
    if schedule.iter().any(|&l| !(l.is_finite() && l > 0.0))
        || schedule.windows(2).any(|p| p[1] >= p[0])
    {
        return Err(PqError::Invalid(
            "λ schedule must be positive and strictly decreasing".into(),
        ));
    }
    let aw = a * w;
    let (_, nonzero) = split_spectrum(&aw, tol)?;
    let mut steps = Vec::with_capacity(schedule.len());
    let mut prev: Option<CMatrix> = None;
    for &lambda in schedule {
        // σ(−aw) = −σ(aw); the zero eigenvalue is the limit point itself.
        if let Some(mu) = nonzero
            .iter()
            .find(|mu| (Complex64::new(lambda, 0.0) + **mu).norm() <= tol.conv_tol)
        {
            return Err(PqError::Spectral(format!(
                "λ = {lambda:e} lies within {:e} of σ(−aw) ∋ {}",
                tol.conv_tol, -mu
            )));
        }
        let shifted = aw.shift(Complex64::new(lambda, 0.0));
        // w (λ + aw)⁻¹ = ((λ + aw)⁻ᴴ wᴴ)ᴴ
        let b = lu_solve(&shifted.adjoint(), &w.adjoint())
            .map_err(|_| PqError::Spectral(format!("λ + aw is singular at λ = {lambda:e}")))?
            .adjoint();
        let cauchy = prev.as_ref().map(|p| p.distance(&b));
        steps.push(LimitStep {
            lambda,
            cauchy,
            iterate: b.clone(),
        });
        prev = Some(b);
    }
    let diffs: Vec<f64> = steps.iter().filter_map(|s| s.cauchy).collect();
    if diffs.len() >= 2 && diffs[diffs.len() - 1] > diffs[0] {
        return Err(PqError::NonConvergence(format!(
            "Cauchy differences grow from {:e} to {:e}",
            diffs[0],
            diffs[diffs.len() - 1]
        )));
    }
    Ok(LimitTrace {
        b: prev.expect("schedule is nonempty"),
        steps,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralOptions {
    /// Integration horizon; defaults to `1.25·ln(1/conv_tol)/α` extended
    /// until the tail bound meets `conv_tol`.
    pub horizon: Option<f64>,
    /// Finest trapezoid subdivision of the base panel (rounded up to a
    /// power of two, at least 8).
    pub steps: usize,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        Self {
            horizon: None,
            steps: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralStep {
    pub horizon: f64,
    pub cauchy: Option<f64>,
    pub tail_bound: f64,
    /// `∫₀^horizon w e^{−(aw)t} dt`.
    pub iterate: CMatrix,
}

#[derive(Clone, Debug)]
pub struct IntegralTrace {
    pub b: CMatrix,
    pub tail_bound: f64,
    /// Smallest real part over the nonzero spectrum of `aw`.
    pub alpha: f64,
    pub horizon: f64,
    pub steps: Vec<IntegralStep>,
}

const MAX_EXTRA_DOUBLINGS: usize = 40;

/// `∫₀^T w e^{−(aw)t} dt` by Romberg integration on a base panel `[0, h]`
/// followed by panel doubling `J(2τ) = J(τ) + e^{−awτ} J(τ)`.
///
/// The tail beyond `T` is bounded by `‖w e^{−awT}‖_F / α`.
pub fn repr_integral(
    a: &CMatrix,
    w: &CMatrix,
    opts: &IntegralOptions,
    tol: &Tolerances,
) -> Result<IntegralTrace, PqError> {
    let aw = a * w;
    let n = aw.rows();
    let (zeros, nonzero) = split_spectrum(&aw, tol)?;

    // The non-decaying part of the integrand must be annihilated by w.
    let ker_aw = kernel_of(&aw, tol);
    if ker_aw.dim() != zeros.len() {
        return Err(PqError::Spectral(
            "zero eigenvalue of aw is not semisimple".into(),
        ));
    }
    if (w * ker_aw.basis()).fro_norm() > tol.eq_bound(w.fro_norm()) {
        return Err(PqError::Spectral("Ker(aw) ⊄ Ker(w)".into()));
    }
    if nonzero.is_empty() {
        return Ok(IntegralTrace {
            b: CMatrix::zeros(n, n),
            tail_bound: 0.0,
            alpha: f64::INFINITY,
            horizon: 0.0,
            steps: Vec::new(),
        });
    }
    let rho = nonzero.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let margin = tol.conv_tol * rho.max(1.0);
    if let Some(bad) = nonzero.iter().find(|z| z.re <= margin) {
        return Err(PqError::Spectral(format!(
            "aw has eigenvalue {bad} outside the open right half plane"
        )));
    }
    let alpha = nonzero.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let conv = tol.conv_tol.max(f64::EPSILON);
    let min_horizon = (1.0 / conv).ln() / alpha;
    let horizon = match opts.horizon {
        Some(h) if !(h.is_finite() && h > 0.0) => {
            return Err(PqError::Invalid(format!(
                "horizon must be positive, got {h}"
            )))
        }
        Some(h) if h < min_horizon => {
            return Err(PqError::Spectral(format!(
                "horizon {h} is below ln(1/conv_tol)/α = {min_horizon}"
            )))
        }
        Some(h) => h,
        None => 1.25 * min_horizon,
    };

    let mut doublings = 0u32;
    while horizon / 2f64.powi(doublings as i32) * rho > 1.0 {
        doublings += 1;
    }
    let h = horizon / 2f64.powi(doublings as i32);
    let neg = aw.scale_real(-1.0);
    let mut integral = romberg_panel(&neg, h, opts.steps.max(8).next_power_of_two());

    let tail = |tau: f64| (w * &matrix_exp(&neg.scale_real(tau))).fro_norm() / alpha;
    let mut tau = h;
    let mut current = w * &integral;
    let mut steps = vec![IntegralStep {
        horizon: tau,
        cauchy: None,
        tail_bound: tail(tau),
        iterate: current.clone(),
    }];
    let mut extra = 0;
    loop {
        let reached = tau >= horizon * (1.0 - 1e-12);
        let tail_now = steps.last().unwrap().tail_bound;
        if reached && (opts.horizon.is_some() || tail_now <= conv || extra >= MAX_EXTRA_DOUBLINGS) {
            break;
        }
        if reached {
            extra += 1;
        }
        let e = matrix_exp(&neg.scale_real(tau));
        integral = &integral + &(&e * &integral);
        tau *= 2.0;
        let next = w * &integral;
        steps.push(IntegralStep {
            horizon: tau,
            cauchy: Some(next.distance(&current)),
            tail_bound: tail(tau),
            iterate: next.clone(),
        });
        current = next;
    }
    let tail_bound = steps.last().unwrap().tail_bound;
    if tail_bound > conv {
        return Err(PqError::NonConvergence(format!(
            "tail bound {tail_bound:e} at horizon {tau} exceeds conv_tol {conv:e}"
        )));
    }
    Ok(IntegralTrace {
        b: current,
        tail_bound,
        alpha,
        horizon: tau,
        steps,
    })
}

/// `∫₀^h e^{g t} dt` by Romberg extrapolation of trapezoid sums on
/// `fine` subintervals (a power of two).
fn romberg_panel(g: &CMatrix, h: f64, fine: usize) -> CMatrix {
    let nodes: Vec<CMatrix> = (0..=fine)
        .map(|j| matrix_exp(&g.scale_real(h * j as f64 / fine as f64)))
        .collect();
    let levels = fine.trailing_zeros() as usize;
    let mut table: Vec<Vec<CMatrix>> = Vec::with_capacity(levels + 1);
    for level in 0..=levels {
        let count = 1usize << level;
        let stride = fine / count;
        let step = h / count as f64;
        let mut sum = &nodes[0].scale_real(0.5) + &nodes[fine].scale_real(0.5);
        for k in 1..count {
            sum = &sum + &nodes[k * stride];
        }
        let mut row = vec![sum.scale_real(step)];
        for j in 1..=level {
            let factor = 4f64.powi(j as i32);
            let refined = &row[j - 1] - &table[level - 1][j - 1];
            let next = &row[j - 1] + &refined.scale_real(1.0 / (factor - 1.0));
            row.push(next);
        }
        table.push(row);
    }
    table.pop().unwrap().pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn a() -> CMatrix {
        CMatrix::real(&[[0.0, 0.0], [1.0, 0.0]])
    }

    fn w() -> CMatrix {
        CMatrix::real(&[[0.0, 1.0], [0.0, 0.0]])
    }

    #[test]
    fn group_route_examples() {
        let b = repr_group(&a(), &w(), &tol()).unwrap();
        assert!(b.distance(&w()) < 1e-14);
        let idem = CMatrix::real(&[[0.3, 0.7], [0.3, 0.7]]);
        let b = repr_group(&CMatrix::identity(2), &idem, &tol()).unwrap();
        assert!(b.distance(&idem) < 1e-14);
    }

    #[test]
    fn group_route_rejects_kernel_overlap() {
        let err = repr_group(
            &CMatrix::real_diag(&[0.0, 1.0]),
            &CMatrix::real_diag(&[1.0, 0.0]),
            &tol(),
        );
        assert!(matches!(err, Err(PqError::Nonexistent { .. })));
    }

    #[test]
    fn inner_route_examples() {
        let waw = &(&w() * &a()) * &w();
        assert_eq!(waw, w());
        let b = repr_inner(&a(), &w(), &tol()).unwrap();
        assert!(b.distance(&w()) < 1e-14);
        let i = CMatrix::identity(2);
        assert!(repr_inner(&i, &i, &tol()).unwrap().distance(&i) < 1e-14);
    }

    #[test]
    fn limit_closed_form() {
        let lam = 1e-6;
        let t = repr_limit(&a(), &w(), &[lam], &tol()).unwrap();
        let expected = CMatrix::real(&[[0.0, 1.0 / (1.0 + lam)], [0.0, 0.0]]);
        assert!(t.b.distance(&expected) < 1e-15);
        assert!((t.b.distance(&w()) - lam).abs() < 1e-9);
    }

    #[test]
    fn limit_identity() {
        let i = CMatrix::identity(2);
        let t = repr_limit(&i, &i, &default_lambda_schedule(), &tol()).unwrap();
        assert!(t.b.distance(&i) < 3e-8);
        assert_eq!(t.steps.len(), 7);
        let diffs: Vec<f64> = t.steps.iter().filter_map(|s| s.cauchy).collect();
        assert!(diffs.windows(2).all(|d| d[1] < d[0]));
    }

    #[test]
    fn limit_rejects_spectrum_hit() {
        // σ(−aw) = {−1, 1}; λ = 1 sits on it.
        let m = CMatrix::real_diag(&[1.0, -1.0]);
        let err = repr_limit(&m, &CMatrix::identity(2), &[1.0], &tol());
        assert!(matches!(err, Err(PqError::Spectral(_))));
    }

    #[test]
    fn limit_diverges_when_kernel_mismatch() {
        // aw = 0: w(λ+aw)⁻¹ = w/λ blows up.
        let err = repr_limit(&w(), &w(), &default_lambda_schedule(), &tol());
        assert!(err.is_err());
    }

    #[test]
    fn schedule_shape() {
        assert_eq!(lambda_schedule(1e-4), vec![1e-2, 1e-3, 1e-4]);
        assert_eq!(lambda_schedule(5e-4), vec![1e-2, 1e-3, 5e-4]);
    }

    #[test]
    fn integral_closed_form() {
        let t = repr_integral(&a(), &w(), &IntegralOptions::default(), &tol()).unwrap();
        assert!(t.b.distance(&w()) < 1e-8, "{}", t.b.distance(&w()));
        assert!((t.alpha - 1.0).abs() < 1e-12);
        let last = t.steps.last().unwrap();
        assert!((last.tail_bound - (-last.horizon).exp()).abs() < 1e-12);
    }

    #[test]
    fn integral_identity() {
        let i = CMatrix::identity(3);
        let t = repr_integral(&i, &i, &IntegralOptions::default(), &tol()).unwrap();
        assert!(t.b.distance(&i) < 1e-8);
    }

    #[test]
    fn integral_rejects_imaginary_spectrum() {
        let rot = CMatrix::real(&[[0.0, 1.0], [-1.0, 0.0]]);
        let err = repr_integral(
            &rot,
            &CMatrix::identity(2),
            &IntegralOptions::default(),
            &tol(),
        );
        assert!(matches!(err, Err(PqError::Spectral(_))));
    }

    #[test]
    fn integral_short_horizon_rejected() {
        let opts = IntegralOptions {
            horizon: Some(1.0),
            ..Default::default()
        };
        assert!(matches!(
            repr_integral(&a(), &w(), &opts, &tol()),
            Err(PqError::Spectral(_))
        ));
    }

    #[test]
    fn romberg_scalar() {
        // ∫₀^1 e^{−2t} dt = (1 − e^{−2})/2
        let g = CMatrix::real(&[[-2.0]]);
        let v = romberg_panel(&g, 1.0, 32);
        assert!((v.get(0, 0).re - (1.0 - (-2.0f64).exp()) / 2.0).abs() < 1e-14);
    }
}
