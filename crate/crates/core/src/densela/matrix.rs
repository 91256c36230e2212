use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use ndarray::{concatenate, s, Array2, Axis};
use num_complex::Complex64;

use super::LinalgError;

/// Dense complex double-precision matrix.
///
/// Every constructor rejects NaN and infinite entries. Zero-sized
/// dimensions are allowed so that empty subspace bases and rank-0
/// factors have a representation.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    inner: Array2<Complex64>,
}

impl CMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::BadLength {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self {
            inner: Array2::from_shape_vec((rows, cols), entries).expect("length checked"),
        })
    }

    /// Real matrix from fixed-width rows; handy for literals.
    ///
    /// Panics on non-finite input.
    pub fn real<const C: usize>(rows: &[[f64; C]]) -> Self {
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::new(rows.len(), C, entries).expect("finite literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: Array2::zeros((rows, cols)),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: Array2::eye(n),
        }
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Array2::zeros((n, n));
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        Self { inner: m }
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<_> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let m = Array2::from_shape_fn((rows, cols), |(i, j)| f(i, j));
        assert!(
            m.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "non-finite entry"
        );
        Self { inner: m }
    }

    pub(crate) fn from_nd(inner: Array2<Complex64>) -> Self {
        Self { inner }
    }

    pub(crate) fn nd(&self) -> &Array2<Complex64> {
        &self.inner
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> Vec<Complex64> {
        self.inner.iter().copied().collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.t().mapv(|z| z.conj()),
        }
    }

    pub fn fro_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols())
            .map(|j| self.inner.column(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.diag().sum()
    }

    /// Frobenius distance ‖self − other‖.
    pub fn distance(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in distance");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    /// Checked product. The kernel's summation order depends only on the
    /// shapes, so repeated calls are bitwise reproducible.
    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix, LinalgError> {
        if self.cols() != rhs.rows() {
            return Err(LinalgError::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self {
            inner: self.inner.dot(&rhs.inner),
        })
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        Self {
            inner: &self.inner * s,
        }
    }

    pub fn scale_real(&self, s: f64) -> CMatrix {
        self.scale(Complex64::new(s, 0.0))
    }

    /// `self + s·I`; square only.
    pub fn shift(&self, s: Complex64) -> CMatrix {
        assert!(self.is_square());
        let mut m = self.inner.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += s;
        }
        Self { inner: m }
    }

    /// `I − self`; square only.
    pub fn complement(&self) -> CMatrix {
        CMatrix::identity(self.rows()) - self
    }

    pub fn pow(&self, k: usize) -> CMatrix {
        assert!(self.is_square());
        let mut out = CMatrix::identity(self.rows());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Horizontal concatenation; all blocks share the row count.
    pub fn hstack(blocks: &[&CMatrix]) -> CMatrix {
        let rows = blocks.first().map_or(0, |b| b.rows());
        assert!(
            blocks.iter().all(|b| b.rows() == rows),
            "hstack row mismatch"
        );
        let cols: usize = blocks.iter().map(|b| b.cols()).sum();
        if cols == 0 {
            return Self::zeros(rows, 0);
        }
        let views: Vec<_> = blocks.iter().map(|b| b.inner.view()).collect();
        Self {
            inner: concatenate(Axis(1), &views).expect("row counts checked"),
        }
    }

    /// Columns `start..start+count`.
    pub fn columns(&self, start: usize, count: usize) -> CMatrix {
        Self {
            inner: self.inner.slice(s![.., start..start + count]).to_owned(),
        }
    }

    /// Rows `start..start+count`.
    pub fn row_block(&self, start: usize, count: usize) -> CMatrix {
        Self {
            inner: self.inner.slice(s![start..start + count, ..]).to_owned(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.inner
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols() {
                let z = self.inner[(i, j)];
                if j > 0 {
                    write!(f, ", ")?;
                }
                if z.im == 0.0 {
                    write!(f, "{}", z.re)?;
                } else {
                    write!(f, "{}{:+}i", z.re, z.im)?;
                }
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows() {
            write!(f, "[")?;
            for j in 0..self.cols() {
                let z = self.inner[(i, j)];
                if j > 0 {
                    write!(f, "  ")?;
                }
                if z.im.abs() < 1e-14 * (1.0 + z.re.abs()) {
                    write!(f, "{:>10.6}", z.re)?;
                } else {
                    write!(f, "{:>10.6}{:+.6}i", z.re, z.im)?;
                }
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

// Operator forms panic on shape mismatch; use `matmul` for the checked path.
impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        CMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(
            self.shape(),
            rhs.shape(),
            "matrix difference shape mismatch"
        );
        CMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl Sub<&CMatrix> for CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        &self - rhs
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix {
            inner: -&self.inner,
        }
    }
}
