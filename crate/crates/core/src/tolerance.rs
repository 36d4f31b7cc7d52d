use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every numeric threshold used by the crate, threaded explicitly through
/// the public API.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct ToleranceConfig {
    /// Allowed |d+e+f| for a gauge-fixed parameter set.
    pub gauge: f64,
    /// Allowed negativity of a W entry.
    pub entry: f64,
    /// Hermiticity check on input matrices.
    pub hermitian: f64,
    /// Spread allowed between row and column sums in `from_matrix`.
    pub doubly_stochastic: f64,
    /// Band in which a condition value counts as saturated (and as holding).
    pub saturation: f64,
    /// Radicands at or below this make an edge construction degenerate.
    pub degenerate: f64,
    /// Relative singular-value threshold for numerical rank.
    pub rank: f64,
    /// Radicands in (-radicand_clamp, 0) are clamped to zero silently.
    pub radicand_clamp: f64,
    /// Radicands below -radicand_error are reported as errors.
    pub radicand_error: f64,
    /// Eigenvalue floor when checking density matrices.
    pub state_psd: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            gauge: 1e-12,
            entry: 1e-12,
            hermitian: 1e-12,
            doubly_stochastic: 1e-10,
            saturation: 1e-9,
            degenerate: 1e-10,
            rank: 1e-8,
            radicand_clamp: 1e-14,
            radicand_error: 1e-10,
            state_psd: 1e-10,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gauge", self.gauge),
            ("entry", self.entry),
            ("hermitian", self.hermitian),
            ("doublyStochastic", self.doubly_stochastic),
            ("saturation", self.saturation),
            ("degenerate", self.degenerate),
            ("rank", self.rank),
            ("radicandClamp", self.radicand_clamp),
            ("radicandError", self.radicand_error),
            ("statePsd", self.state_psd),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }

    /// Square root of a radicand with the clamp/error policy applied.
    /// `edge` only labels the error.
    pub(crate) fn checked_sqrt(&self, radicand: f64, edge: usize) -> Result<f64> {
        if radicand >= 0.0 {
            Ok(radicand.sqrt())
        } else if radicand >= -self.radicand_error {
            Ok(0.0)
        } else {
            Err(Error::NegativeRadicand { edge, value: radicand })
        }
    }
}
