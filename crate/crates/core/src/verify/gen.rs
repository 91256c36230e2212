//! Seeded random instances for the fuzz battery and the acceptance suite.
//!
//! Every generator draws from a caller-supplied [`ChaCha8Rng`]; [`rng`]
//! derives an independent stream per trial so trials can run in any order.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::densela::{inverse, CMatrix, Tolerances};
use crate::subspace::{range_of, Subspace};

/// Stream `stream` of the generator seeded with `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Entries `(x + iy)/√2` with `x, y` standard normal.
pub fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(s * re, s * im)
    })
}

/// `n × k` matrix with orthonormal columns spanning a random subspace.
pub fn orthonormal(rng: &mut ChaCha8Rng, n: usize, k: usize) -> CMatrix {
    if k == 0 {
        return CMatrix::zeros(n, 0);
    }
    let g = gaussian(rng, n, k);
    let basis = range_of(&g, &Tolerances::default()).basis().clone();
    assert_eq!(basis.cols(), k, "gaussian sample lost rank");
    basis
}

/// Orthonormal basis of the orthogonal complement of `Ran basis`.
pub fn complement(basis: &CMatrix) -> CMatrix {
    Subspace::from_orthonormal(basis.clone())
        .orthogonal_complement(&Tolerances::default())
        .basis()
        .clone()
}

/// `Q₁ Σ Q₂ᴴ` with singular values log-uniform in `[cond^{-1/2}, cond^{1/2}]`.
pub fn conditioned(rng: &mut ChaCha8Rng, n: usize, cond: f64) -> CMatrix {
    with_rank_cond(rng, n, n, cond)
}

/// Rank `r` matrix with nonzero singular values in `[0.5, 2]`.
pub fn with_rank(rng: &mut ChaCha8Rng, n: usize, r: usize) -> CMatrix {
    with_rank_cond(rng, n, r, 4.0)
}

fn with_rank_cond(rng: &mut ChaCha8Rng, n: usize, r: usize, cond: f64) -> CMatrix {
    if r == 0 {
        return CMatrix::zeros(n, n);
    }
    let q1 = orthonormal(rng, n, r);
    let q2 = orthonormal(rng, n, r);
    let half = cond.max(1.0).ln() / 2.0;
    let sigma: Vec<f64> = (0..r).map(|_| rng.gen_range(-half..=half).exp()).collect();
    &(&q1 * &CMatrix::real_diag(&sigma)) * &q2.adjoint()
}

/// `S diag(1_r, 0) S⁻¹` with `cond(S) ≤ cond`.
pub fn idempotent(rng: &mut ChaCha8Rng, n: usize, r: usize, cond: f64) -> CMatrix {
    let s = conditioned(rng, n, cond);
    let s_inv = inverse(&s, &Tolerances::default()).expect("conditioned matrix is invertible");
    let d: Vec<f64> = (0..n).map(|i| if i < r { 1.0 } else { 0.0 }).collect();
    &(&s * &CMatrix::real_diag(&d)) * &s_inv
}

/// Nilpotent matrix with Jordan blocks of the given sizes (in that order).
pub fn jordan_nilpotent(blocks: &[usize]) -> CMatrix {
    let n: usize = blocks.iter().sum();
    let mut superdiag = vec![false; n];
    let mut start = 0;
    for &b in blocks {
        superdiag[start..start + b.saturating_sub(1)].fill(true);
        start += b;
    }
    CMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 && superdiag[i] {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Matrix of Drazin index exactly `k` (`k ≤ n`): a similarity of
/// `diag(C, N)` with `C` invertible (eigenvalue moduli in `[0.7, 1.4]`)
/// and `N` nilpotent of index `k`.
pub fn with_index(rng: &mut ChaCha8Rng, n: usize, k: usize) -> CMatrix {
    assert!(k <= n, "index {k} exceeds size {n}");
    let m = if k == 0 { 0 } else { rng.gen_range(k..=n) };
    let mut blocks = vec![k];
    let mut left = m.saturating_sub(k);
    while left > 0 {
        let b = rng.gen_range(1..=left.min(k));
        blocks.push(b);
        left -= b;
    }
    if k == 0 {
        blocks.clear();
    }
    let nil = jordan_nilpotent(&blocks);
    let core_size = n - m;
    let q = orthonormal(rng, core_size, core_size);
    let lambdas: Vec<Complex64> = (0..core_size)
        .map(|_| {
            let modulus = rng.gen_range(0.7..1.4);
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(modulus, angle)
        })
        .collect();
    let core = &(&q * &CMatrix::diag(&lambdas)) * &q.adjoint();
    let block = CMatrix::from_fn(n, n, |i, j| {
        if i < core_size && j < core_size {
            core.get(i, j)
        } else if i >= core_size && j >= core_size {
            nil.get(i - core_size, j - core_size)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let s = conditioned(rng, n, 4.0);
    let s_inv = inverse(&s, &Tolerances::default()).expect("conditioned matrix is invertible");
    &(&s * &block) * &s_inv
}

/// Where the nonzero spectrum of `aw` is placed in a constructed instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Spectrum {
    /// A well-conditioned core with arbitrary eigenvalues.
    Generic,
    /// Eigenvalues with real part in `[min_re, 2]` and imaginary part in
    /// `[−1, 1]`.
    RightHalfPlane { min_re: f64 },
    /// Real eigenvalues in `[0.5, 2]` with a unitary eigenbasis.
    PositiveDiagonalizable,
}

/// An instance where the `(p,q,l)`-outer inverse exists by construction.
#[derive(Clone, Debug)]
pub struct Constructed {
    pub a: CMatrix,
    pub p: CMatrix,
    pub q: CMatrix,
    /// `w = U Nᴴ` with `Ran w = Ran p`, `Ker w = Ran q`.
    pub w: CMatrix,
    /// Orthonormal basis of `Ran p`.
    pub range: CMatrix,
    /// Orthonormal basis of `Ran q`.
    pub kernel: CMatrix,
    /// Orthonormal basis of `Ran(q)^⊥`.
    pub corange: CMatrix,
    /// `Nᴴ a U`: the nonzero spectrum of `aw` is the spectrum of this block.
    pub core: CMatrix,
}

/// Random `U` (rank `r`) and `K` (dimension `n − r`), `w = U Nᴴ` with
/// `N ⊥ K`, and `a = (N C + K D) Uᴴ + Z (1 − U Uᴴ)`. Then `a U` has full
/// rank and `Ran(aU) ∔ Ran K = ℂⁿ`. With `oblique`, `p` and `q` are
/// non-orthogonal idempotents onto the same subspaces.
pub fn constructed(
    rng: &mut ChaCha8Rng,
    n: usize,
    r: usize,
    oblique: bool,
    spectrum: Spectrum,
) -> Constructed {
    assert!(r <= n);
    let u = orthonormal(rng, n, r);
    let k = orthonormal(rng, n, n - r);
    let nb = complement(&k);
    let c = match spectrum {
        Spectrum::Generic => conditioned(rng, r, 10.0),
        Spectrum::RightHalfPlane { min_re } => {
            let lambdas: Vec<Complex64> = (0..r)
                .map(|_| Complex64::new(rng.gen_range(min_re..=2.0), rng.gen_range(-1.0..=1.0)))
                .collect();
            let s = conditioned(rng, r, 4.0);
            let s_inv = inverse(&s, &Tolerances::default()).expect("invertible");
            &(&s * &CMatrix::diag(&lambdas)) * &s_inv
        }
        Spectrum::PositiveDiagonalizable => {
            let lambdas: Vec<f64> = (0..r).map(|_| rng.gen_range(0.5..=2.0)).collect();
            let q = orthonormal(rng, r, r);
            &(&q * &CMatrix::real_diag(&lambdas)) * &q.adjoint()
        }
    };
    let d = gaussian(rng, n - r, r).scale_real(0.5);
    let z = gaussian(rng, n, n).scale_real(0.5);
    let x = &(&nb * &c) + &(&k * &d);
    let a = &(&x * &u.adjoint()) + &(&z * &(&u * &u.adjoint()).complement());
    let w = &u * &nb.adjoint();

    let p = projector_onto(rng, &u, oblique);
    let q = projector_onto(rng, &k, oblique);
    Constructed {
        a,
        p,
        q,
        w,
        range: u,
        kernel: k,
        corange: nb,
        core: c,
    }
}

/// Idempotent with range `Ran basis`: `B Bᴴ`, or `B (Bᴴ + Mᴴ Vᴴ)` with
/// `V ⊥ B` when oblique.
fn projector_onto(rng: &mut ChaCha8Rng, basis: &CMatrix, oblique: bool) -> CMatrix {
    let orth = basis * &basis.adjoint();
    if !oblique || basis.cols() == 0 || basis.cols() == basis.rows() {
        return orth;
    }
    let v = complement(basis);
    let m = gaussian(rng, v.cols(), basis.cols());
    &orth + &(&(basis * &m.adjoint()) * &v.adjoint())
}

/// Unconstrained triple: `a` of random rank, `p`, `q` random idempotents
/// with `cond(S) ≤ 100`; half the time `rank q = n − rank p`.
pub fn unconstrained(rng: &mut ChaCha8Rng, n: usize) -> (CMatrix, CMatrix, CMatrix) {
    let ra = if rng.gen_bool(0.5) {
        n
    } else {
        rng.gen_range(0..=n)
    };
    let a = with_rank(rng, n, ra);
    let rp = rng.gen_range(0..=n);
    let rq = if rng.gen_bool(0.5) {
        n - rp
    } else {
        rng.gen_range(0..=n)
    };
    let cp = rng.gen_range(1.0f64..100.0);
    let cq = rng.gen_range(1.0f64..100.0);
    let p = idempotent(rng, n, rp, cp);
    let q = idempotent(rng, n, rq, cq);
    (a, p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densela::{norm_2, rank};
    use crate::ginv::drazin_index;
    use crate::subspace::kernel_of;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let x = gaussian(&mut rng(7, 3), 3, 3);
        assert_eq!(x, gaussian(&mut rng(7, 3), 3, 3));
        assert_ne!(x, gaussian(&mut rng(7, 4), 3, 3));
    }

    #[test]
    fn idempotent_has_rank() {
        let t = Tolerances::default();
        let p = idempotent(&mut rng(1, 0), 6, 2, 100.0);
        assert!((&p * &p).distance(&p) < 1e-9 * norm_2(&p).powi(2));
        assert_eq!(rank(&p, &t), 2);
    }

    #[test]
    fn index_is_exact() {
        let t = Tolerances::default();
        for k in 0..=4 {
            let a = with_index(&mut rng(2, k as u64), 6, k);
            assert_eq!(drazin_index(&a, &t).unwrap(), k);
        }
    }

    #[test]
    fn jordan_shape() {
        let n = jordan_nilpotent(&[3, 1]);
        assert_eq!(n.pow(2).fro_norm(), 1.0);
        assert_eq!(n.pow(3).fro_norm(), 0.0);
        assert_eq!(n.rows(), 4);
    }

    #[test]
    fn constructed_meets_its_contract() {
        let t = Tolerances::default();
        for (i, &oblique) in [false, true].iter().enumerate() {
            let c = constructed(&mut rng(3, i as u64), 5, 2, oblique, Spectrum::Generic);
            assert!((&c.p * &c.p).distance(&c.p) < 1e-12);
            assert!((&c.q * &c.q).distance(&c.q) < 1e-12);
            assert!(range_of(&c.w, &t).equals(&range_of(&c.p, &t), &t));
            assert!(kernel_of(&c.w, &t).equals(&range_of(&c.q, &t), &t));
        }
    }
}
