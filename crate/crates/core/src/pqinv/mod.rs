//! Outer inverses with prescribed idempotents.
//!
//! For `a ∈ M_n(ℂ)` and idempotents `p`, `q`:
//!
//! * the strict `(p,q)`-outer inverse is the `b` with `bab = b`, `ba = p`,
//!   `1 − ab = q`;
//! * the `(p,q,l)`-outer inverse relaxes the last two equations to
//!   `Ran b = Ran p`, `Ker b = Ran q`;
//! * the `{1,2}` variants additionally require `aba = a`.
//!
//! All four are unique when they exist. [`diagnose`] decides existence,
//! [`outer_2l`] and friends compute them, and the `repr_*` functions are the
//! four independent representations (group inverse, inner inverse, resolvent
//! limit, exponential integral) used to cross-check each other.

mod compute;
mod diagnose;
mod represent;
mod special;

use serde::Serialize;
use std::fmt;
use thiserror::Error;

use crate::densela::{CMatrix, LinalgError, Tolerances};
use crate::ginv::GinvError;

pub use compute::{
    construct_w, one_two_l, one_two_strict, outer_2_strict, outer_2_strict_via,
    outer_2_strict_with_witness, outer_2l, outer_2l_via,
};
pub use diagnose::{diagnose, Cond6Witnesses, Dims, ExistenceReport};
pub use represent::{
    default_lambda_schedule, lambda_schedule, repr_group, repr_inner, repr_integral, repr_limit,
    IntegralOptions, IntegralStep, IntegralTrace, LimitStep, LimitTrace,
};
pub use special::{special_case_drazin, special_case_mp};

/// A square matrix with a pair of idempotents of the same size.
#[derive(Clone, Debug)]
pub struct PqProblem {
    a: CMatrix,
    p: CMatrix,
    q: CMatrix,
    tol: Tolerances,
}

impl PqProblem {
    /// Validates shapes and `p² = p`, `q² = q` at equality tolerance.
    pub fn new(a: CMatrix, p: CMatrix, q: CMatrix, tol: Tolerances) -> Result<Self, PqError> {
        tol.validate()?;
        for (name, m) in [("a", &a), ("p", &p), ("q", &q)] {
            if !m.is_square() {
                return Err(PqError::Invalid(format!(
                    "{name} must be square, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let n = a.rows();
        if p.rows() != n || q.rows() != n {
            return Err(PqError::Invalid(format!(
                "a, p, q must share one size: {}, {}, {}",
                n,
                p.rows(),
                q.rows()
            )));
        }
        if !tol.close(&(&p * &p), &p) {
            return Err(PqError::Invalid("p fails p²=p".into()));
        }
        if !tol.close(&(&q * &q), &q) {
            return Err(PqError::Invalid("q fails q²=q".into()));
        }
        Ok(Self { a, p, q, tol })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn p(&self) -> &CMatrix {
        &self.p
    }

    pub fn q(&self) -> &CMatrix {
        &self.q
    }

    pub fn tol(&self) -> &Tolerances {
        &self.tol
    }

    /// Same matrices under different tolerances.
    pub fn with_tol(&self, tol: Tolerances) -> Self {
        Self {
            tol,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseKind {
    /// `bab = b, ba = p, ab = 1 − q`.
    Outer2,
    /// `bab = b, Ran b = Ran p, Ker b = Ran q`.
    Outer2l,
    /// `Outer2l` plus `aba = a`.
    OneTwoL,
    /// `Outer2` plus `aba = a`.
    OneTwoStrict,
}

impl fmt::Display for InverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InverseKind::Outer2 => "(p,q)-outer inverse",
            InverseKind::Outer2l => "(p,q,l)-outer inverse",
            InverseKind::OneTwoL => "(p,q,l) {1,2}-inverse",
            InverseKind::OneTwoStrict => "(p,q) {1,2}-inverse",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    GroupFormula,
    InnerFormula,
    Limit,
    Integral,
    Direct,
}

impl Route {
    /// Limit and integral results carry truncation error at `conv_tol` scale.
    pub fn is_approximate(self) -> bool {
        matches!(self, Route::Limit | Route::Integral)
    }
}

/// Residuals of every defining equation for a computed `b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residuals {
    pub bab_b: f64,
    pub aba_a: f64,
    /// `‖P_{Ran b} − P_{Ran p}‖_F`.
    pub range_distance: f64,
    /// `‖P_{Ker b} − P_{Ran q}‖_F`.
    pub kernel_distance: f64,
    pub ba_p: f64,
    pub ab_one_minus_q: f64,
    pub pb_b: f64,
    pub bap_p: f64,
    pub b_one_minus_q_b: f64,
    pub one_minus_q_ab: f64,
}

#[derive(Clone, Debug)]
pub struct PqResult {
    pub kind: InverseKind,
    pub b: CMatrix,
    pub route: Route,
    pub residuals: Residuals,
}

#[derive(Debug, Error, Clone)]
pub enum PqError {
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error("{kind} does not exist: {reason}")]
    Nonexistent {
        kind: InverseKind,
        reason: String,
        residuals: Option<Residuals>,
    },
    #[error("no w with Ran w = Ran p and Ker w = Ran q: dim Ran p + dim Ran q = {ran_p} + {ran_q} ≠ {n}")]
    WObstruction {
        ran_p: usize,
        ran_q: usize,
        n: usize,
    },
    #[error("spectral precondition violated: {0}")]
    Spectral(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Ginv(#[from] GinvError),
}

pub(crate) fn nonexistent(kind: InverseKind, reason: impl Into<String>) -> PqError {
    PqError::Nonexistent {
        kind,
        reason: reason.into(),
        residuals: None,
    }
}
