use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision and budgets shared by every evaluator.
///
/// Arithmetic inside an evaluation runs at `digits + guard_digits` decimal
/// digits; values are rounded to `digits` when reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub digits: u32,
    pub guard_digits: u32,
    pub max_terms: u64,
    /// Minimum accepted distance from a gamma pole or a vanishing denominator.
    /// Zero means only exact poles are rejected.
    pub pole_margin: f64,
}

impl PrecisionContext {
    pub const DEFAULT_GUARD: u32 = 10;
    pub const DEFAULT_MAX_TERMS: u64 = 1_000_000;

    pub fn new(digits: u32) -> Result<Self> {
        Self::with_options(digits, Self::DEFAULT_GUARD, Self::DEFAULT_MAX_TERMS, 0.0)
    }

    pub fn with_options(
        digits: u32,
        guard_digits: u32,
        max_terms: u64,
        pole_margin: f64,
    ) -> Result<Self> {
        if digits < 10 {
            return Err(Error::InvalidContext(format!("digits must be >= 10, got {digits}")));
        }
        if guard_digits < 5 {
            return Err(Error::InvalidContext(format!(
                "guard_digits must be >= 5, got {guard_digits}"
            )));
        }
        if max_terms < 1000 {
            return Err(Error::InvalidContext(format!(
                "max_terms must be >= 1000, got {max_terms}"
            )));
        }
        if !(pole_margin >= 0.0) {
            return Err(Error::InvalidContext(format!(
                "pole_margin must be nonnegative, got {pole_margin}"
            )));
        }
        Ok(PrecisionContext { digits, guard_digits, max_terms, pole_margin })
    }

    pub fn with_max_terms(mut self, max_terms: u64) -> Result<Self> {
        if max_terms < 1000 {
            return Err(Error::InvalidContext(format!(
                "max_terms must be >= 1000, got {max_terms}"
            )));
        }
        self.max_terms = max_terms;
        Ok(self)
    }

    pub fn with_pole_margin(mut self, margin: f64) -> Self {
        self.pole_margin = margin.max(0.0);
        self
    }

    /// Total decimal digits carried internally.
    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard_digits
    }

    /// Binary precision matching `working_digits`, plus a few spare bits.
    pub fn bits(&self) -> u32 {
        (f64::from(self.working_digits()) * LOG2_10).ceil() as u32 + 8
    }

    /// Binary precision matching the reported `digits`.
    pub fn report_bits(&self) -> u32 {
        (f64::from(self.digits) * LOG2_10).ceil() as u32 + 1
    }

    /// Relative tolerance used as the "negligible" threshold in summation.
    pub fn epsilon(&self) -> f64 {
        10f64.powi(-(self.working_digits() as i32))
    }

    /// Relative accuracy promised to callers.
    pub fn target(&self) -> f64 {
        10f64.powi(-(self.digits as i32))
    }

    /// Same budgets with more digits; used by routes that need headroom.
    pub fn widened(&self, extra_digits: u32) -> Self {
        PrecisionContext { digits: self.digits + extra_digits, ..*self }
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            digits: 30,
            guard_digits: Self::DEFAULT_GUARD,
            max_terms: Self::DEFAULT_MAX_TERMS,
            pole_margin: 0.0,
        }
    }
}
