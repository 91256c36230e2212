//! Subspaces of ℂⁿ with orthonormal bases.
//!
//! In `M_n(ℂ)` the right ideal generated by `x` is determined by `Ran(x)` and
//! the right annihilator of `x` by `Ker(x)`, so ideal identities reduce to the
//! subspace identities implemented here. Left-ideal statements are handled by
//! applying these to conjugate transposes.

use crate::densela::{null_basis, range_basis, CMatrix, Tolerances};

#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: CMatrix,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self {
            ambient: n,
            basis: CMatrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            ambient: n,
            basis: CMatrix::identity(n),
        }
    }

    /// Wraps a basis that is already orthonormal. Panics if it is not.
    pub fn from_orthonormal(basis: CMatrix) -> Self {
        let d = basis.cols();
        let gram = &basis.adjoint() * &basis;
        assert!(
            gram.distance(&CMatrix::identity(d)) <= 1e-10,
            "basis is not orthonormal"
        );
        Self {
            ambient: basis.rows(),
            basis,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Orthogonal projector `B Bᴴ`.
    pub fn projector(&self) -> CMatrix {
        &self.basis * &self.basis.adjoint()
    }

    /// Every basis vector of `other` lies in `self` up to a projection
    /// residual of `eq_atol + eq_rtol` (basis vectors have unit norm).
    pub fn contains(&self, other: &Subspace, tol: &Tolerances) -> bool {
        self.check_ambient(other);
        if other.dim() > self.dim() {
            return false;
        }
        if other.is_zero() {
            return true;
        }
        let coords = &self.basis.adjoint() * &other.basis;
        let residual = &other.basis - &(&self.basis * &coords);
        let bound = tol.eq_bound(1.0);
        (0..other.dim()).all(|j| residual.columns(j, 1).fro_norm() <= bound)
    }

    pub fn equals(&self, other: &Subspace, tol: &Tolerances) -> bool {
        self.dim() == other.dim() && self.contains(other, tol) && other.contains(self, tol)
    }

    /// `‖P_S − P_T‖_F` between the orthogonal projectors.
    pub fn distance(&self, other: &Subspace) -> f64 {
        self.check_ambient(other);
        self.projector().distance(&other.projector())
    }

    pub fn orthogonal_complement(&self, tol: &Tolerances) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.ambient);
        }
        Subspace {
            ambient: self.ambient,
            basis: null_basis(&self.basis.adjoint(), 0.0, tol),
        }
    }

    fn check_ambient(&self, other: &Subspace) {
        assert_eq!(
            self.ambient, other.ambient,
            "subspaces live in different spaces"
        );
    }
}

/// Column space of `a`.
pub fn range_of(a: &CMatrix, tol: &Tolerances) -> Subspace {
    range_of_relative_to(a, 0.0, tol)
}

/// Column space with the rank cutoff measured against `reference`.
pub fn range_of_relative_to(a: &CMatrix, reference: f64, tol: &Tolerances) -> Subspace {
    Subspace {
        ambient: a.rows(),
        basis: range_basis(a, reference, tol),
    }
}

/// Column space of an idempotent. A nonzero idempotent has `‖p‖₂ ≥ 1`,
/// so the cutoff is taken against 1 and rounding residue counts as zero.
pub fn range_of_idempotent(p: &CMatrix, tol: &Tolerances) -> Subspace {
    range_of_relative_to(p, 1.0, tol)
}

/// Null space of `a`.
pub fn kernel_of(a: &CMatrix, tol: &Tolerances) -> Subspace {
    Subspace {
        ambient: a.cols(),
        basis: null_basis(a, 0.0, tol),
    }
}

/// `a·S`. The rank cutoff is taken against `‖a‖₂` so that directions of `S`
/// inside `Ker(a)` are dropped even when `a·S` is tiny overall.
pub fn image(a: &CMatrix, s: &Subspace, tol: &Tolerances) -> Subspace {
    assert_eq!(a.cols(), s.ambient(), "image: dimension mismatch");
    if s.is_zero() {
        return Subspace::zero(a.rows());
    }
    let reference = crate::densela::norm_2(a);
    range_of_relative_to(&(a * s.basis()), reference, tol)
}

/// `S ∩ T` from the null space of `[B_S | −B_T]`.
pub fn intersect(s: &Subspace, t: &Subspace, tol: &Tolerances) -> Subspace {
    s.check_ambient(t);
    let n = s.ambient();
    if s.is_zero() || t.is_zero() {
        return Subspace::zero(n);
    }
    let stacked = CMatrix::hstack(&[s.basis(), &-t.basis()]);
    let null = null_basis(&stacked, 0.0, tol);
    let k = null.cols();
    if k == 0 {
        return Subspace::zero(n);
    }
    let vectors = s.basis() * &null.row_block(0, s.dim());
    // Injective on the null space, so the first k left singular vectors span it.
    let basis = range_basis(
        &vectors,
        0.0,
        &Tolerances {
            rank_rtol: 0.0,
            ..*tol
        },
    );
    Subspace {
        ambient: n,
        basis: basis.columns(0, k.min(basis.cols())),
    }
}

/// `S + T`.
pub fn sum(s: &Subspace, t: &Subspace, tol: &Tolerances) -> Subspace {
    s.check_ambient(t);
    range_of(&CMatrix::hstack(&[s.basis(), t.basis()]), tol)
}

/// `ℂⁿ = S ∔ T`: complementary dimensions, trivial intersection, full sum.
pub fn is_direct_sum_all(s: &Subspace, t: &Subspace, tol: &Tolerances) -> bool {
    s.check_ambient(t);
    let n = s.ambient();
    s.dim() + t.dim() == n && intersect(s, t, tol).is_zero() && sum(s, t, tol).dim() == n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn line(x: f64, y: f64) -> Subspace {
        range_of(&CMatrix::real(&[[x], [y]]), &tol())
    }

    fn a() -> CMatrix {
        CMatrix::real(&[[0.0, 0.0], [1.0, 0.0]])
    }

    fn p() -> CMatrix {
        CMatrix::real(&[[1.0, 1.0], [0.0, 0.0]])
    }

    #[test]
    fn range_examples() {
        let t = tol();
        assert!(range_of(&p(), &t).equals(&line(1.0, 0.0), &t));
        assert_eq!(range_of(&CMatrix::identity(2), &t).dim(), 2);
        assert_eq!(range_of(&CMatrix::zeros(2, 2), &t).dim(), 0);
    }

    #[test]
    fn kernel_examples() {
        let t = tol();
        assert!(kernel_of(&a(), &t).equals(&line(0.0, 1.0), &t));
        assert_eq!(kernel_of(&CMatrix::identity(2), &t).dim(), 0);
        assert_eq!(kernel_of(&CMatrix::zeros(2, 2), &t).dim(), 2);
    }

    #[test]
    fn image_examples() {
        let t = tol();
        let e1 = line(1.0, 0.0);
        assert!(image(&a(), &e1, &t).equals(&line(0.0, 1.0), &t));
        assert!(image(&CMatrix::identity(2), &e1, &t).equals(&e1, &t));
        assert!(image(&CMatrix::zeros(2, 2), &e1, &t).is_zero());
    }

    #[test]
    fn intersect_examples() {
        let t = tol();
        let e1 = line(1.0, 0.0);
        let e2 = line(0.0, 1.0);
        assert!(intersect(&e1, &e2, &t).is_zero());
        assert!(intersect(&kernel_of(&a(), &t), &range_of(&p(), &t), &t).is_zero());
        assert!(intersect(&e1, &e1, &t).equals(&e1, &t));
        let plane = Subspace::full(2);
        assert!(intersect(&plane, &line(1.0, 1.0), &t).equals(&line(1.0, 1.0), &t));
    }

    #[test]
    fn sum_examples() {
        let t = tol();
        assert_eq!(sum(&line(1.0, 0.0), &line(0.0, 1.0), &t).dim(), 2);
        let s = line(1.0, 2.0);
        assert!(sum(&s, &Subspace::zero(2), &t).equals(&s, &t));
    }

    #[test]
    fn direct_sum_examples() {
        let t = tol();
        assert!(is_direct_sum_all(&line(0.0, 1.0), &line(1.0, 0.0), &t));
        assert!(!is_direct_sum_all(&line(1.0, 0.0), &line(1.0, 0.0), &t));
        assert!(is_direct_sum_all(
            &Subspace::zero(2),
            &Subspace::full(2),
            &t
        ));
    }

    #[test]
    fn containment_and_equality() {
        let t = tol();
        let arp = image(&a(), &range_of(&p(), &t), &t);
        let one_minus_q = CMatrix::real(&[[0.0, 1.0], [0.0, 1.0]]);
        let r1q = range_of(&one_minus_q, &t);
        assert!(!arp.equals(&r1q, &t));
        assert!((arp.distance(&r1q) - 1.0).abs() < 1e-14);
        assert!(line(3.0, 1.0).contains(&Subspace::zero(2), &t));
        assert!(Subspace::full(2).contains(&line(3.0, 1.0), &t));
    }

    #[test]
    fn complement_is_orthogonal() {
        let t = tol();
        let s = line(1.0, 1.0);
        let c = s.orthogonal_complement(&t);
        assert_eq!(c.dim(), 1);
        assert!(c.equals(&line(1.0, -1.0), &t));
    }
}
