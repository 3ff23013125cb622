use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every construction in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// An entry with modulus above this counts as non-zero (block structure).
    pub zero_tol: f64,
    /// Idempotency, self-adjointness and diagonal residuals.
    pub residual_tol: f64,
    /// Distance to the nearest integer accepted as "integral".
    pub integrality_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            zero_tol: 1e-10,
            residual_tol: 1e-8,
            integrality_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.zero_tol, self.residual_tol, self.integrality_tol]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !all_positive || self.zero_tol >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be positive with zero_tol < 1: {self:?}"
            )));
        }
        Ok(())
    }

    pub fn with_residual_tol(mut self, tol: f64) -> Self {
        self.residual_tol = tol;
        self
    }

    pub fn with_zero_tol(mut self, tol: f64) -> Self {
        self.zero_tol = tol;
        self
    }
}

/// Controls how parametrized path legs are discretized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOptions {
    /// Uniform samples per parametrized leg before refinement.
    pub samples: usize,
    /// Consecutive samples further apart than this (Frobenius) get a midpoint inserted.
    pub max_step: f64,
    /// Hard cap on samples per leg after refinement.
    pub max_samples: usize,
    pub tol: ToleranceConfig,
}

impl Default for PathOptions {
    fn default() -> Self {
        Self {
            samples: 200,
            max_step: 0.1,
            max_samples: 20_000,
            tol: ToleranceConfig::default(),
        }
    }
}

impl PathOptions {
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_tol(mut self, tol: ToleranceConfig) -> Self {
        self.tol = tol;
        self
    }
}
