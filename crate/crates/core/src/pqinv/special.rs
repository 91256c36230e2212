//! Moore–Penrose and Drazin inverses recovered as strict `(p,q)`-outer
//! inverses.

use super::{outer_2_strict, PqError, PqProblem, PqResult};
use crate::densela::{CMatrix, Tolerances};
use crate::ginv::{drazin_inverse, moore_penrose};

/// `a^{(2)}_{p,q}` with `p = a†a`, `q = 1 − aa†`, checked against `a†`.
pub fn special_case_mp(a: &CMatrix, tol: &Tolerances) -> Result<PqResult, PqError> {
    let x = moore_penrose(a, tol);
    let p = &x * a;
    let q = (a * &x).complement();
    let prob = PqProblem::new(a.clone(), p, q, *tol)?;
    let res =
        outer_2_strict(&prob).map_err(|e| PqError::Numerical(format!("a†a, 1−aa† case: {e}")))?;
    if !tol.close(&res.b, &x) {
        return Err(PqError::Numerical(format!(
            "(p,q)-outer inverse differs from a† by {:e}",
            res.b.distance(&x)
        )));
    }
    Ok(res)
}

/// `a^{(2)}_{p,q}` with `p = 1 − a^π`, `q = a^π`, checked against `a^D`.
pub fn special_case_drazin(a: &CMatrix, tol: &Tolerances) -> Result<PqResult, PqError> {
    if !a.is_square() {
        return Err(PqError::Invalid(format!(
            "a must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let d = drazin_inverse(a, tol)?;
    let q = d.spectral_idempotent.clone();
    let p = q.complement();
    let prob = PqProblem::new(a.clone(), p, q, *tol)?;
    let res =
        outer_2_strict(&prob).map_err(|e| PqError::Numerical(format!("1−a^π, a^π case: {e}")))?;
    if !tol.close(&res.b, &d.inverse) {
        return Err(PqError::Numerical(format!(
            "(p,q)-outer inverse differs from a^D by {:e}",
            res.b.distance(&d.inverse)
        )));
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pqinv::InverseKind;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn mp_examples() {
        let a = CMatrix::real(&[[0.0, 0.0], [1.0, 0.0]]);
        let r = special_case_mp(&a, &tol()).unwrap();
        assert_eq!(r.kind, InverseKind::Outer2);
        assert!(r.b.distance(&CMatrix::real(&[[0.0, 1.0], [0.0, 0.0]])) < 1e-14);
        let i = CMatrix::identity(3);
        assert!(special_case_mp(&i, &tol()).unwrap().b.distance(&i) < 1e-14);
        assert!(
            special_case_mp(&CMatrix::zeros(2, 2), &tol())
                .unwrap()
                .b
                .fro_norm()
                < 1e-14
        );
    }

    #[test]
    fn drazin_examples() {
        let idem = CMatrix::real(&[[1.0, 1.0], [0.0, 0.0]]);
        let r = special_case_drazin(&idem, &tol()).unwrap();
        assert!(r.b.distance(&idem) < 1e-13);

        let a = CMatrix::real(&[[2.0, 1.0], [0.0, 3.0]]);
        let r = special_case_drazin(&a, &tol()).unwrap();
        let inv = CMatrix::real(&[[0.5, -1.0 / 6.0], [0.0, 1.0 / 3.0]]);
        assert!(r.b.distance(&inv) < 1e-13);

        // index 2 with a nonzero core
        let a = CMatrix::real(&[[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 4.0]]);
        let r = special_case_drazin(&a, &tol()).unwrap();
        assert!(r.b.distance(&CMatrix::real_diag(&[0.0, 0.0, 0.25])) < 1e-13);
    }
}
