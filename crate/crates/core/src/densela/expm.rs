//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants of degree 3, 5, 7, 9 or 13 (Higham 2005).

use num_complex::Complex64;

use super::{lu_solve, CMatrix};

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// 1-norm bounds below which each degree meets unit roundoff.
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152;

/// `e^A` for square `A`.
pub fn matrix_exp(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "matrix_exp needs a square matrix");
    let n = a.rows();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let norm = a.norm_1();
    if norm == 0.0 {
        return CMatrix::identity(n);
    }
    for &(m, theta) in &THETA {
        if norm <= theta {
            return pade_low(a, m);
        }
    }
    let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    let scaled = a.scale_real(0.5f64.powi(s));
    let mut r = pade13(&scaled);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn pade_low(a: &CMatrix, m: usize) -> CMatrix {
    let b: &[f64] = match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        _ => &B9,
    };
    let n = a.rows();
    let a2 = a * a;
    // powers[k] = A^{2k}
    let mut powers = vec![CMatrix::identity(n), a2.clone()];
    while powers.len() <= m / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    for k in 0..=m / 2 {
        u = &u + &powers[k].scale(c(b[2 * k + 1]));
        v = &v + &powers[k].scale(c(b[2 * k]));
    }
    let u = a * &u;
    rational(&u, &v)
}

fn pade13(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let b = &B13;
    let id = CMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let inner_u = &(&a6.scale(c(b[13])) + &a4.scale(c(b[11]))) + &a2.scale(c(b[9]));
    let tail_u =
        &(&(&a6.scale(c(b[7])) + &a4.scale(c(b[5]))) + &a2.scale(c(b[3]))) + &id.scale(c(b[1]));
    let u = a * &(&(&a6 * &inner_u) + &tail_u);

    let inner_v = &(&a6.scale(c(b[12])) + &a4.scale(c(b[10]))) + &a2.scale(c(b[8]));
    let tail_v =
        &(&(&a6.scale(c(b[6])) + &a4.scale(c(b[4]))) + &a2.scale(c(b[2]))) + &id.scale(c(b[0]));
    let v = &(&a6 * &inner_v) + &tail_v;
    rational(&u, &v)
}

/// `(V − U)⁻¹ (V + U)`.
fn rational(u: &CMatrix, v: &CMatrix) -> CMatrix {
    let den = v - u;
    let num = v + u;
    // The denominator is well conditioned inside the θ bounds.
    lu_solve(&den, &num).expect("Padé denominator is nonsingular")
}
