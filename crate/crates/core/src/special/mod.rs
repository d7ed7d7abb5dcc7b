//! Self-contained special functions and the quadrature used to check them.

mod airy;
mod bessel;
mod quadrature;

pub use airy::{airy_ai, airy_ai_scaled, AI_ZERO};
pub use bessel::bessel_j;
pub use quadrature::{integrate_adaptive, integrate_adaptive_with_error, MAX_SUBINTERVALS};

use crate::error::{Error, Result};

/// Numerical policy for [`airy_ai`] and [`bessel_j`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialFunctionConfig {
    pub target_abs_tolerance: f64,
    pub series_max_terms: usize,
    /// |x| beyond which Ai switches from series to asymptotics.
    pub asymptotic_switch_airy: f64,
}

impl Default for SpecialFunctionConfig {
    fn default() -> Self {
        Self {
            target_abs_tolerance: 1e-10,
            series_max_terms: 200,
            asymptotic_switch_airy: 7.0,
        }
    }
}

impl SpecialFunctionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_tolerance > 0.0) {
            return Err(Error::InvalidConfig("target_abs_tolerance must be > 0".into()));
        }
        if self.series_max_terms < 10 {
            return Err(Error::InvalidConfig("series_max_terms must be >= 10".into()));
        }
        if !(self.asymptotic_switch_airy > 0.0) {
            return Err(Error::InvalidConfig("asymptotic_switch_airy must be > 0".into()));
        }
        Ok(())
    }
}
