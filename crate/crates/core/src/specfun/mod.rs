//! Special functions: gamma family, Gauss ₂F₁ and Appell F₂.

mod appell;
mod gamma;
mod gauss;

pub use appell::{
    appell_f2, appell_f2_deriv, appell_f2_direct, appell_f2_integral, appell_f2_scaled,
    appell_f2_series, HypergeometricParams,
};
pub use gamma::{digamma, gamma, gamma_ratio, gamma_sign, ln_gamma, pochhammer, rgamma, EULER_GAMMA};
pub use gauss::{gauss_2f1, gauss_2f1_at_one, gauss_2f1_log_case, Gauss2F1};

use crate::error::{invalid, Result};

/// Truncation control shared by every series in this module.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeriesControl {
    /// Relative truncation tolerance.
    pub rel_tol: f64,
    /// Hard cap on the number of terms (blocks for double series).
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_terms: 1_000_000 }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        let ctrl = Self { rel_tol, max_terms };
        ctrl.validate()?;
        Ok(ctrl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return invalid(format!("rel_tol must be positive, got {}", self.rel_tol));
        }
        if self.max_terms == 0 {
            return invalid("max_terms must be at least 1");
        }
        Ok(())
    }
}
