//! Factorizations through LAPACK: SVD for everything rank-related, LU for
//! square solves, the QR algorithm for spectra.

use ndarray::{s, Array1, Array2};
use ndarray_linalg::{EigVals, Factorize, Solve, SVD};
use num_complex::Complex64;

use super::{CMatrix, LinalgError, Tolerances};

/// SVD with singular values in decreasing order. `u` (m×m) and `v` (n×n)
/// are full, so trailing columns of `v` span the null space.
pub(crate) struct SortedSvd {
    pub u: Array2<Complex64>,
    pub s: Vec<f64>,
    pub v: Array2<Complex64>,
}

impl SortedSvd {
    pub fn new(a: &Array2<Complex64>) -> Self {
        let (m, n) = a.dim();
        if m.min(n) == 0 {
            return Self {
                u: Array2::eye(m),
                s: Vec::new(),
                v: Array2::eye(n),
            };
        }
        let (u, s, vt) = packed(a)
            .svd(true, true)
            .expect("LAPACK SVD failed on finite input");
        let u = u.expect("requested u");
        let v = vt.expect("requested vᴴ").t().mapv(|z| z.conj());
        Self {
            u,
            s: s.to_vec(),
            v,
        }
    }

    pub fn sigma_max(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    pub fn rank(&self, reference: f64, tol: &Tolerances) -> usize {
        let cut = tol.rank_cutoff(self.sigma_max(), reference);
        self.s.iter().filter(|&&x| x > cut).count()
    }
}

/// Row-major copy with nonzero strides, as LAPACK requires.
fn packed(a: &Array2<Complex64>) -> Array2<Complex64> {
    Array2::from_shape_vec(a.dim(), a.iter().copied().collect()).expect("same length")
}

/// Spectral norm (largest singular value).
pub fn norm_2(a: &CMatrix) -> f64 {
    SortedSvd::new(a.nd()).sigma_max()
}

/// Numerical rank: singular values above `rank_rtol·σ_max`.
pub fn rank(a: &CMatrix, tol: &Tolerances) -> usize {
    SortedSvd::new(a.nd()).rank(0.0, tol)
}

/// Numerical rank with the cutoff measured against `max(σ_max, reference)`.
///
/// Used for products and powers whose exact value may vanish: rounding noise
/// in such a matrix is small against its factors, not against itself.
pub fn rank_relative_to(a: &CMatrix, reference: f64, tol: &Tolerances) -> usize {
    SortedSvd::new(a.nd()).rank(reference, tol)
}

/// Orthonormal basis of the column space.
pub(crate) fn range_basis(a: &CMatrix, reference: f64, tol: &Tolerances) -> CMatrix {
    let svd = SortedSvd::new(a.nd());
    let r = svd.rank(reference, tol);
    CMatrix::from_nd(svd.u.slice(s![.., ..r]).to_owned())
}

/// Orthonormal basis of the null space (columns live in ℂ^cols).
pub(crate) fn null_basis(a: &CMatrix, reference: f64, tol: &Tolerances) -> CMatrix {
    let svd = SortedSvd::new(a.nd());
    let r = svd.rank(reference, tol);
    CMatrix::from_nd(svd.v.slice(s![.., r..]).to_owned())
}

/// Unitary factor `Q` of the polar decomposition `A = Q H` of a square
/// matrix (`U Vᴴ` from the SVD).
pub fn polar_unitary(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "polar factor of a non-square matrix");
    let svd = SortedSvd::new(a.nd());
    CMatrix::from_nd(svd.u.dot(&svd.v.t().mapv(|z| z.conj())))
}

/// `A = F·G` with `F` full column rank and `G` full row rank.
///
/// Realized as `F = U_r Σ_r`, `G = V_rᴴ`. For rank 0 the factors are
/// `n×0` and `0×m`.
pub fn rank_factorization(a: &CMatrix, tol: &Tolerances) -> (CMatrix, CMatrix) {
    let svd = SortedSvd::new(a.nd());
    let r = svd.rank(0.0, tol);
    let (m, n) = a.shape();
    let f = Array2::from_shape_fn((m, r), |(i, j)| svd.u[(i, j)] * svd.s[j]);
    let g = Array2::from_shape_fn((r, n), |(i, j)| svd.v[(j, i)].conj());
    (CMatrix::from_nd(f), CMatrix::from_nd(g))
}

/// Truncated pseudo-inverse `V_r Σ_r⁻¹ U_rᴴ`.
pub(crate) fn pinv_relative_to(a: &CMatrix, reference: f64, tol: &Tolerances) -> CMatrix {
    let svd = SortedSvd::new(a.nd());
    let r = svd.rank(reference, tol);
    let (m, n) = a.shape();
    let mut x = Array2::<Complex64>::zeros((n, m));
    for k in 0..r {
        let inv = 1.0 / svd.s[k];
        for i in 0..n {
            let vik = svd.v[(i, k)] * inv;
            for j in 0..m {
                x[(i, j)] += vik * svd.u[(j, k)].conj();
            }
        }
    }
    CMatrix::from_nd(x)
}

/// Least-squares solution of `A X = B`, returned only when consistent:
/// `‖AX − B‖_F ≤ eq_atol + eq_rtol·‖B‖_F`.
pub fn solve_right(a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<CMatrix, LinalgError> {
    solve_right_relative_to(a, b, 0.0, tol)
}

/// `solve_right` with the rank cutoff of `A` measured against `reference`.
pub fn solve_right_relative_to(
    a: &CMatrix,
    b: &CMatrix,
    reference: f64,
    tol: &Tolerances,
) -> Result<CMatrix, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_right",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let x = &pinv_relative_to(a, reference, tol) * b;
    let residual = (a * &x).distance(b);
    let bound = tol.eq_bound(b.fro_norm());
    if residual <= bound {
        Ok(x)
    } else {
        Err(LinalgError::Inconsistent { residual, bound })
    }
}

/// Solves `X A = B` through `Aᴴ Xᴴ = Bᴴ`.
pub fn solve_left(a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<CMatrix, LinalgError> {
    solve_left_relative_to(a, b, 0.0, tol)
}

pub fn solve_left_relative_to(
    a: &CMatrix,
    b: &CMatrix,
    reference: f64,
    tol: &Tolerances,
) -> Result<CMatrix, LinalgError> {
    if a.cols() != b.cols() {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_left",
            left: a.shape(),
            right: b.shape(),
        });
    }
    solve_right_relative_to(&a.adjoint(), &b.adjoint(), reference, tol).map(|x| x.adjoint())
}

/// Solves the square system `A X = B` by LU with partial pivoting.
pub fn lu_solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare(a.shape()));
    }
    if a.rows() != b.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "lu_solve",
            left: a.shape(),
            right: b.shape(),
        });
    }
    if a.rows() == 0 {
        return Ok(b.clone());
    }
    let lu = packed(a.nd())
        .factorize()
        .map_err(|_| LinalgError::Singular)?;
    let mut x = Array2::zeros((b.rows(), b.cols()));
    for j in 0..b.cols() {
        let col: Array1<Complex64> = lu
            .solve(&Array1::from_iter(b.nd().column(j).iter().copied()))
            .map_err(|_| LinalgError::Singular)?;
        x.column_mut(j).assign(&col);
    }
    let x = CMatrix::from_nd(x);
    if x.is_finite() {
        Ok(x)
    } else {
        Err(LinalgError::Singular)
    }
}

/// Inverse of a numerically nonsingular matrix.
pub fn inverse(a: &CMatrix, tol: &Tolerances) -> Result<CMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare(a.shape()));
    }
    let n = a.rows();
    if rank(a, tol) < n {
        return Err(LinalgError::Singular);
    }
    lu_solve(a, &CMatrix::identity(n))
}

/// All `n` eigenvalues with multiplicity.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare(a.shape()));
    }
    if a.rows() == 0 {
        return Ok(Vec::new());
    }
    let e = packed(a.nd())
        .eigvals()
        .map_err(|_| LinalgError::EigenNoConvergence)?;
    Ok(e.to_vec())
}
