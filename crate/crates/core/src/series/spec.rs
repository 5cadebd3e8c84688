use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ComplexValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Unilateral,
    Bilateral,
}

/// Parameters of a `1+r F s` (unilateral) or `r H r` (bilateral) series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub uppers: Vec<ComplexValue>,
    pub lowers: Vec<ComplexValue>,
    pub argument: ComplexValue,
    pub kind: SeriesKind,
}

impl SeriesSpec {
    pub fn unilateral(
        uppers: Vec<ComplexValue>,
        lowers: Vec<ComplexValue>,
        argument: ComplexValue,
    ) -> Result<Self> {
        if uppers.is_empty() {
            return Err(Error::Domain("a unilateral series needs at least one upper parameter".into()));
        }
        Ok(SeriesSpec { uppers, lowers, argument, kind: SeriesKind::Unilateral })
    }

    pub fn bilateral(
        uppers: Vec<ComplexValue>,
        lowers: Vec<ComplexValue>,
        argument: ComplexValue,
    ) -> Result<Self> {
        if uppers.len() != lowers.len() {
            return Err(Error::Domain(format!(
                "bilateral series need as many uppers as lowers ({} vs {})",
                uppers.len(),
                lowers.len()
            )));
        }
        Ok(SeriesSpec { uppers, lowers, argument, kind: SeriesKind::Bilateral })
    }

    /// Largest operand precision in the spec.
    pub fn prec(&self) -> u32 {
        self.uppers
            .iter()
            .chain(&self.lowers)
            .map(ComplexValue::prec)
            .chain(std::iter::once(self.argument.prec()))
            .max()
            .unwrap_or(64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase")]
pub enum ConvergenceClass {
    /// Only the terms with index `0..=n` can be nonzero.
    Terminating { n: u64 },
    /// Term ratio tends to `ratio` with `|ratio| < 1`.
    Geometric { ratio: f64 },
    /// Terms behave like `k^(-exponent)` with `exponent > 1`.
    Algebraic { exponent: f64 },
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "closed-form")]
    Closed,
    #[serde(rename = "terminating")]
    Terminating,
    #[serde(rename = "direct")]
    Direct,
    #[serde(rename = "direct+tail")]
    DirectTail,
    #[serde(rename = "wynn")]
    Wynn,
    #[serde(rename = "levin")]
    Levin,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Closed => "closed-form",
            Method::Terminating => "terminating",
            Method::Direct => "direct",
            Method::DirectTail => "direct+tail",
            Method::Wynn => "wynn",
            Method::Levin => "levin",
        }
    }
}

/// A summed series (or a closed-form value) with its heuristic error.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub value: ComplexValue,
    /// Estimated absolute error.
    pub err_estimate: f64,
    pub terms_used: u64,
    pub method: Method,
    pub convergence: ConvergenceClass,
}

impl SeriesResult {
    /// A value computed without any series, e.g. a gamma or q-product ratio.
    /// The error estimate is a few units in the last working place.
    pub fn closed(value: ComplexValue) -> Self {
        let err = rounding_error(&value);
        SeriesResult {
            value,
            err_estimate: err,
            terms_used: 0,
            method: Method::Closed,
            convergence: ConvergenceClass::Terminating { n: 0 },
        }
    }

    /// Multiplies by an exact-to-working-precision factor.
    pub fn scaled(&self, factor: &ComplexValue) -> Self {
        let value = &self.value * factor;
        let err = self.err_estimate * factor.abs_f64() + rounding_error(&value);
        SeriesResult { value, err_estimate: err, ..self.clone() }
    }

    /// Sum of two results: errors add, the costlier method is reported.
    pub fn plus(&self, other: &SeriesResult) -> Self {
        let value = &self.value + &other.value;
        SeriesResult {
            err_estimate: self.err_estimate + other.err_estimate + rounding_error(&value),
            value,
            terms_used: self.terms_used + other.terms_used,
            method: self.method.max(other.method),
            convergence: combine_class(self.convergence, other.convergence),
        }
    }

    /// Product of two results with first-order error propagation.
    pub fn times(&self, other: &SeriesResult) -> Self {
        let value = &self.value * &other.value;
        let err = self.err_estimate * other.value.abs_f64()
            + other.err_estimate * self.value.abs_f64()
            + rounding_error(&value);
        SeriesResult {
            value,
            err_estimate: err,
            terms_used: self.terms_used + other.terms_used,
            method: self.method.max(other.method),
            convergence: combine_class(self.convergence, other.convergence),
        }
    }
}

fn combine_class(a: ConvergenceClass, b: ConvergenceClass) -> ConvergenceClass {
    use ConvergenceClass::*;
    match (a, b) {
        (Divergent, _) | (_, Divergent) => Divergent,
        (Algebraic { exponent: x }, Algebraic { exponent: y }) => Algebraic { exponent: x.min(y) },
        (Algebraic { exponent }, _) | (_, Algebraic { exponent }) => Algebraic { exponent },
        (Geometric { ratio: x }, Geometric { ratio: y }) => Geometric { ratio: x.max(y) },
        (Geometric { ratio }, _) | (_, Geometric { ratio }) => Geometric { ratio },
        (Terminating { n: x }, Terminating { n: y }) => Terminating { n: x.max(y) },
    }
}

/// A few ulps of `value` at its own precision.
pub(crate) fn rounding_error(value: &ComplexValue) -> f64 {
    let mag = value.abs_f64();
    mag * 4.0 * 2f64.powi(-(value.prec() as i32))
}
