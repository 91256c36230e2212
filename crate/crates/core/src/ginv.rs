//! Classical generalized inverses on `M_n(ℂ)`: inner, reflexive,
//! Moore–Penrose, group, Drazin and (1,5).

use thiserror::Error;

use crate::densela::{
    lu_solve, norm_2, pinv_relative_to, rank, rank_factorization, rank_relative_to, CMatrix,
    Tolerances,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GinvError {
    #[error("matrix must be square, got {0:?}")]
    NotSquare((usize, usize)),
    #[error("Drazin axiom `{axiom}` failed with residual {residual:e}")]
    DrazinBreakdown { axiom: &'static str, residual: f64 },
}

/// Drazin inverse together with its index and `a^π = 1 − a·a^D`.
#[derive(Clone, Debug)]
pub struct DrazinResult {
    pub inverse: CMatrix,
    pub index: usize,
    pub spectral_idempotent: CMatrix,
}

/// Residuals of the four Penrose equations for a candidate `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PenroseResiduals {
    pub axx: f64,
    pub xax: f64,
    pub ax_hermitian: f64,
    pub xa_hermitian: f64,
}

impl PenroseResiduals {
    pub fn of(a: &CMatrix, x: &CMatrix) -> Self {
        let ax = a * x;
        let xa = x * a;
        Self {
            axx: (&ax * a).distance(a),
            xax: (&xa * x).distance(x),
            ax_hermitian: ax.distance(&ax.adjoint()),
            xa_hermitian: xa.distance(&xa.adjoint()),
        }
    }

    pub fn max(&self) -> f64 {
        self.axx
            .max(self.xax)
            .max(self.ax_hermitian)
            .max(self.xa_hermitian)
    }
}

/// `A†` from the truncated SVD.
pub fn moore_penrose(a: &CMatrix, tol: &Tolerances) -> CMatrix {
    pinv_relative_to(a, 0.0, tol)
}

/// A fixed {1}-inverse. The Moore–Penrose inverse is used so that results
/// are reproducible.
pub fn inner_inverse(a: &CMatrix, tol: &Tolerances) -> CMatrix {
    moore_penrose(a, tol)
}

/// `G·A·G` for an inner inverse `G`; satisfies both `AbA = A` and `bAb = b`.
pub fn reflexive_inverse(a: &CMatrix, tol: &Tolerances) -> CMatrix {
    let g = inner_inverse(a, tol);
    &(&g * a) * &g
}

/// `A^#` when `rank(A) = rank(A²)`, computed as `F (GF)⁻² G`.
pub fn group_inverse(a: &CMatrix, tol: &Tolerances) -> Result<Option<CMatrix>, GinvError> {
    if !a.is_square() {
        return Err(GinvError::NotSquare(a.shape()));
    }
    let (f, g) = rank_factorization(a, tol);
    Ok(group_inverse_from_factors(&f, &g, norm_2(a), tol))
}

/// `F (GF)⁻² G` for any full-rank factorization `A = FG`.
///
/// The core `GF` is invertible exactly when `A` is group invertible; its
/// rank is judged against `reference` (normally `‖A‖₂`). The result does not
/// depend on the gauge `F → FM, G → M⁻¹G`.
pub fn group_inverse_from_factors(
    f: &CMatrix,
    g: &CMatrix,
    reference: f64,
    tol: &Tolerances,
) -> Option<CMatrix> {
    let n = f.rows();
    let r = f.cols();
    if r == 0 {
        return Some(CMatrix::zeros(n, g.cols()));
    }
    let core = g * f;
    if rank_relative_to(&core, reference, tol) < r {
        return None;
    }
    let once = lu_solve(&core, g).ok()?;
    let twice = lu_solve(&core, &once).ok()?;
    Some(f * &twice)
}

/// Least `k` with `rank(A^k) = rank(A^{k+1})`; zero for invertible `A`.
pub fn drazin_index(a: &CMatrix, tol: &Tolerances) -> Result<usize, GinvError> {
    if !a.is_square() {
        return Err(GinvError::NotSquare(a.shape()));
    }
    let n = a.rows();
    let norm = norm_2(a);
    let mut prev_rank = n;
    let mut power = CMatrix::identity(n);
    for k in 0..=n {
        power = &power * a;
        let r = rank_relative_to(&power, norm.powi(k as i32 + 1), tol);
        if r == prev_rank {
            return Ok(k);
        }
        prev_rank = r;
    }
    Ok(n)
}

/// `A^D = A^k (A^{2k+1})⁻ A^k`, validated against the three Drazin axioms.
pub fn drazin_inverse(a: &CMatrix, tol: &Tolerances) -> Result<DrazinResult, GinvError> {
    let k = drazin_index(a, tol)?;
    let n = a.rows();
    let norm = norm_2(a);
    let ak = a.pow(k);
    let big = a.pow(2 * k + 1);
    let y = pinv_relative_to(&big, norm.powi(2 * k as i32 + 1), tol);
    let x = &(&ak * &y) * &ak;

    let ak1x = &(&ak * a) * &x;
    check_axiom(tol, "a^{k+1} x = a^k", &ak1x, &ak)?;
    let xax = &(&x * a) * &x;
    check_axiom(tol, "x a x = x", &xax, &x)?;
    let ax = a * &x;
    check_axiom(tol, "a x = x a", &ax, &(&x * a))?;

    let pi = &CMatrix::identity(n) - &ax;
    Ok(DrazinResult {
        inverse: x,
        index: k,
        spectral_idempotent: pi,
    })
}

fn check_axiom(
    tol: &Tolerances,
    axiom: &'static str,
    lhs: &CMatrix,
    rhs: &CMatrix,
) -> Result<(), GinvError> {
    if tol.close(lhs, rhs) {
        Ok(())
    } else {
        Err(GinvError::DrazinBreakdown {
            axiom,
            residual: lhs.distance(rhs),
        })
    }
}

/// A (1,5)-inverse: `AxA = A` and `Ax = xA`. Exists exactly when `A^#`
/// does, and `A^#` is returned as the representative.
pub fn one_five_inverse(a: &CMatrix, tol: &Tolerances) -> Result<Option<CMatrix>, GinvError> {
    group_inverse(a, tol)
}

/// `(A†A, AA†)`: idempotents with `Ker p = Ker A` and `Ran q = Ran A`.
pub fn gi_idempotents(a: &CMatrix, tol: &Tolerances) -> (CMatrix, CMatrix) {
    let x = moore_penrose(a, tol);
    (&x * a, a * &x)
}

/// Integer existence test for the group inverse.
pub fn has_group_inverse_by_rank(a: &CMatrix, tol: &Tolerances) -> bool {
    let r1 = rank(a, tol);
    let r2 = rank_relative_to(&(a * a), norm_2(a).powi(2), tol);
    r1 == r2
}
