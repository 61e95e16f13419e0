use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mixed absolute/relative tolerance: `|a - b| <= abs_tol + rel_tol * max(|a|, |b|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) || !abs_tol.is_finite() || !rel_tol.is_finite() {
            return Err(Error::InvalidTolerance { abs_tol, rel_tol });
        }
        Ok(Self { abs_tol, rel_tol })
    }

    /// Allowed deviation for quantities of magnitude `scale`.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale.abs()
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.threshold(a.abs().max(b.abs()))
    }

    pub fn is_zero(&self, a: f64) -> bool {
        a.abs() <= self.abs_tol
    }
}

/// `|a - b| / max(1, |a|, |b|)`, the residual measure used by the relative checks.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}
