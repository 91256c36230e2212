//! Generalized inverses of square complex matrices with prescribed
//! idempotents.
//!
//! Given `a` and idempotents `p`, `q`, the crate decides whether the
//! `(p,q)`-outer inverse (`bab = b`, `ba = p`, `1 − ab = q`) or its
//! range/kernel relaxation (`bab = b`, `Ran b = Ran p`, `Ker b = Ran q`)
//! exists, computes it through four independent representations, and ships
//! a verification suite that replays the classical counterexamples and
//! fuzzes every equivalence.

pub mod cli;
pub mod densela;
pub mod ginv;
pub mod pqinv;
pub mod subspace;
pub mod verify;

pub use densela::{CMatrix, Complex64, LinalgError, Tolerances};
