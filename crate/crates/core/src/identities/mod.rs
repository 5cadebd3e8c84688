//! The executable catalog: every summation identity as a parameter schema,
//! constraint predicates, a sampler and an evaluator returning both sides.

mod basic;
mod classical;
mod exact;
mod expr;
mod sample;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{ComplexValue, GaussRational, PrecisionContext};
use crate::series::SeriesResult;

pub use basic::{omega_closed, omega_raw, theta_closed, theta_raw};
pub use classical::{phi_as_3f2, phi_sum, saalschuetz_substitution, theorem_rhs};
pub use sample::Draw;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKind {
    Complex,
    Integer,
    Nome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
}

const fn cplx(name: &'static str) -> ParamSpec {
    ParamSpec { name, kind: ParamKind::Complex }
}

const fn int(name: &'static str) -> ParamSpec {
    ParamSpec { name, kind: ParamKind::Integer }
}

const fn nome(name: &'static str) -> ParamSpec {
    ParamSpec { name, kind: ParamKind::Nome }
}

/// Named exact parameter values. Sampled values are dyadic (or `m/256` for
/// `q`), so they convert to any precision without rounding.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParameterSet {
    values: BTreeMap<String, GaussRational>,
}

impl ParameterSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: impl Into<GaussRational>) -> Self {
        self.insert(name, value);
        self
    }

    pub fn insert(&mut self, name: &str, value: impl Into<GaussRational>) {
        self.values.insert(name.to_string(), value.into());
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    /// Exact value; panics on a name outside the schema, which is a catalog bug.
    pub fn exact(&self, name: &str) -> &GaussRational {
        self.values
            .get(name)
            .unwrap_or_else(|| panic!("parameter {name} missing from set"))
    }

    pub fn get(&self, name: &str) -> Option<&GaussRational> {
        self.values.get(name)
    }

    pub fn value(&self, name: &str, prec: u32) -> ComplexValue {
        self.exact(name).to_complex(prec)
    }

    pub fn integer(&self, name: &str) -> i64 {
        let v = self.exact(name);
        v.re.numer().to_i64().expect("integer parameter out of range")
    }

    pub fn f64(&self, name: &str) -> (f64, f64) {
        self.exact(name).to_f64_parts()
    }

    /// Decimal renderings at `digits` significant digits.
    pub fn to_strings(&self, digits: usize) -> BTreeMap<String, String> {
        self.values
            .iter()
            .map(|(k, v)| (k.clone(), v.to_complex(256).to_decimal(digits)))
            .collect()
    }
}

impl fmt::Display for ParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A machine-checkable side condition.
#[derive(Clone, Copy)]
pub struct Constraint {
    pub text: &'static str,
    pub check: fn(&ParameterSet) -> bool,
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text)
    }
}

/// A secondary equality checked alongside the main one, e.g. a specialization
/// or an intermediate step of a derivation.
#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub left: SeriesResult,
    pub right: SeriesResult,
}

impl Check {
    pub fn new(label: impl Into<String>, left: SeriesResult, right: SeriesResult) -> Self {
        Check { label: label.into(), left, right }
    }
}

/// An equality between two values computed in exact rational arithmetic;
/// it holds only if they are identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCheck {
    pub label: String,
    pub left: GaussRational,
    pub right: GaussRational,
}

impl ExactCheck {
    pub fn new(label: impl Into<String>, left: GaussRational, right: GaussRational) -> Self {
        ExactCheck { label: label.into(), left, right }
    }

    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

/// Both sides of an identity plus any secondary checks, in floating point
/// and, for terminating identities, in exact arithmetic.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub lhs: SeriesResult,
    pub rhs: SeriesResult,
    pub checks: Vec<Check>,
    pub exact: Vec<ExactCheck>,
}

impl Evaluation {
    pub fn new(lhs: SeriesResult, rhs: SeriesResult) -> Self {
        Evaluation { lhs, rhs, checks: Vec::new(), exact: Vec::new() }
    }

    pub fn with_check(mut self, check: Check) -> Self {
        self.checks.push(check);
        self
    }

    pub fn with_exact(mut self, check: ExactCheck) -> Self {
        self.exact.push(check);
        self
    }

    /// Largest relative error estimate over both sides and all checks.
    pub fn relative_error_estimate(&self) -> f64 {
        let rel = |r: &SeriesResult| {
            let m = r.value.abs_f64();
            if m > 0.0 {
                r.err_estimate / m
            } else {
                r.err_estimate
            }
        };
        self.checks
            .iter()
            .flat_map(|c| [rel(&c.left), rel(&c.right)])
            .chain([rel(&self.lhs), rel(&self.rhs)])
            .fold(0.0, f64::max)
    }
}

/// Re-evaluations allowed when cancellation eats the guard digits.
const MAX_WIDENINGS: usize = 2;
const MAX_EXTRA_DIGITS: u32 = 200;

pub type Evaluator = fn(&ParameterSet, &PrecisionContext) -> Result<Evaluation>;
pub type Sampler = fn(&mut Draw) -> ParameterSet;

/// One catalog entry.
#[derive(Clone, Copy)]
pub struct IdentityCase {
    pub id: &'static str,
    pub title: &'static str,
    pub formula: &'static str,
    pub schema: &'static [ParamSpec],
    pub constraints: &'static [Constraint],
    /// Human-readable description of the sampling ranges.
    pub ranges: &'static str,
    pub sampler: Sampler,
    pub evaluator: Evaluator,
}

impl fmt::Debug for IdentityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityCase").field("id", &self.id).finish()
    }
}

impl IdentityCase {
    /// Texts of the constraints `params` violates, or a schema mismatch.
    pub fn violations(&self, params: &ParameterSet) -> Vec<&'static str> {
        let names: Vec<&str> = params.names().collect();
        let mut expected: Vec<&str> = self.schema.iter().map(|p| p.name).collect();
        expected.sort_unstable();
        if names != expected {
            return vec!["parameter names do not match the schema"];
        }
        self.constraints
            .iter()
            .filter(|c| !(c.check)(params))
            .map(|c| c.text)
            .collect()
    }

    /// Checks the constraints, then evaluates both sides.
    ///
    /// When cancellation leaves the error estimate of either side above
    /// `10^-digits` relative, the evaluation is repeated with enough extra
    /// digits to cover the loss (at most twice).
    pub fn evaluate(&self, params: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
        if let Some(v) = self.violations(params).first() {
            return Err(Error::ConstraintViolated { id: self.id.to_string(), constraint: v.to_string() });
        }
        let mut work = *ctx;
        let mut eval = (self.evaluator)(params, &work)?;
        for _ in 0..MAX_WIDENINGS {
            let loss = eval.relative_error_estimate() / ctx.target();
            if !(loss > 1.0) || !loss.is_finite() {
                break;
            }
            let extra = (loss.log10().ceil() as u32 + 5).min(MAX_EXTRA_DIGITS);
            work = work.widened(extra);
            eval = (self.evaluator)(params, &work)?;
        }
        Ok(eval)
    }
}

/// All catalog entries in listing order.
pub fn catalog() -> Vec<IdentityCase> {
    let mut all = classical::cases();
    all.extend(basic::cases());
    all
}

pub fn find(id: &str) -> Result<IdentityCase> {
    catalog()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// `|lhs - rhs| / |rhs|`, or the absolute error when `rhs` is zero.
pub fn rel_err(lhs: &ComplexValue, rhs: &ComplexValue) -> f64 {
    lhs.rel_diff(rhs)
}

/// Largest relative error accepted for a pair of results at `digits`:
/// `max(10^(8 - digits), 100 (err_l + err_r) / |rhs|)`.
pub fn tolerance(lhs: &SeriesResult, rhs: &SeriesResult, digits: u32) -> f64 {
    let floor = 10f64.powi(8 - digits as i32);
    let mag = rhs.value.abs_f64();
    let est = if mag > 0.0 {
        100.0 * (lhs.err_estimate + rhs.err_estimate) / mag
    } else {
        100.0 * (lhs.err_estimate + rhs.err_estimate)
    };
    floor.max(est)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_seventeen_unique_ids() {
        let ids: Vec<&str> = catalog().iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), 17);
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 17);
        assert!(find("nope").is_err());
    }

    #[test]
    fn dougall_constraint_text() {
        let c = find("dougall-2h2").unwrap();
        assert!(c.constraints.iter().any(|k| k.text == "Re(c+d-a-b)>1"));
    }

    #[test]
    fn schema_mismatch_is_reported() {
        let c = find("gauss-2f1").unwrap();
        let p = ParameterSet::new().with("a", 1).with("b", 1);
        assert!(!c.violations(&p).is_empty());
        let err = c.evaluate(&p, &PrecisionContext::new(20).unwrap()).unwrap_err();
        assert_eq!(err.kind(), "ConstraintViolated");
    }
}
