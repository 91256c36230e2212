use serde::{Deserialize, Serialize};

use super::{CMatrix, LinalgError};

/// Thresholds threaded through every numerical decision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value cutoff for numerical rank.
    pub rank_rtol: f64,
    /// Absolute part of the matrix-equality bound.
    pub eq_atol: f64,
    /// Relative part of the matrix-equality bound.
    pub eq_rtol: f64,
    /// Target for limit and integral representations.
    pub conv_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rtol: 1e-10,
            eq_atol: 1e-10,
            eq_rtol: 1e-8,
            conv_tol: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<(), LinalgError> {
        let fields = [
            ("rank_rtol", self.rank_rtol),
            ("eq_atol", self.eq_atol),
            ("eq_rtol", self.eq_rtol),
            ("conv_tol", self.conv_tol),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v >= 0.0) {
                return Err(LinalgError::BadTolerance(name));
            }
        }
        Ok(())
    }

    /// Copy with `rank_rtol` multiplied by `factor`.
    pub fn with_rank_scaled(&self, factor: f64) -> Self {
        Self {
            rank_rtol: self.rank_rtol * factor,
            ..*self
        }
    }

    /// Mixed absolute/relative bound for a residual measured against `scale`.
    pub fn eq_bound(&self, scale: f64) -> f64 {
        self.eq_atol + self.eq_rtol * scale
    }

    /// `‖x − y‖_F ≤ eq_atol + eq_rtol·max(‖x‖_F, ‖y‖_F)`.
    pub fn close(&self, x: &CMatrix, y: &CMatrix) -> bool {
        x.shape() == y.shape() && x.distance(y) <= self.eq_bound(x.fro_norm().max(y.fro_norm()))
    }

    /// Singular values strictly above this count toward the rank.
    pub(crate) fn rank_cutoff(&self, sigma_max: f64, reference: f64) -> f64 {
        (self.rank_rtol * sigma_max.max(reference)).max(f64::MIN_POSITIVE)
    }
}
