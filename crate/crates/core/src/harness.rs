//! Seeded sampling, per-sample verification and suite reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::{catalog, find, rel_err, tolerance, Draw, Evaluation, IdentityCase, ParameterSet};
use crate::numerics::PrecisionContext;
use crate::series::SeriesResult;

/// Sampler calls allowed per `(seed, id, index)` before giving up.
pub const REJECTION_CAP: u32 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Identity IDs; `"all"` expands to the whole catalog.
    pub identities: Vec<String>,
    pub samples: u64,
    pub seed: u64,
    pub digits: u32,
    pub format: OutputFormat,
    pub max_terms: Option<u64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            identities: vec!["all".to_string()],
            samples: 20,
            seed: 0,
            digits: 30,
            format: OutputFormat::Text,
            max_terms: None,
        }
    }
}

impl SuiteConfig {
    /// Resolves the identity list and the precision context; unknown IDs and
    /// bad precision settings are reported here, before any evaluation.
    pub fn resolve(&self) -> Result<(Vec<IdentityCase>, PrecisionContext)> {
        let mut ctx = PrecisionContext::new(self.digits)?;
        if let Some(m) = self.max_terms {
            ctx = ctx.with_max_terms(m)?;
        }
        let mut cases: Vec<IdentityCase> = Vec::new();
        for id in &self.identities {
            if id == "all" {
                cases.extend(catalog());
            } else {
                cases.push(find(id)?);
            }
        }
        let mut seen = std::collections::HashSet::new();
        cases.retain(|c| seen.insert(c.id));
        Ok((cases, ctx))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sides<T> {
    pub lhs: T,
    pub rhs: T,
}

/// A secondary equality inside one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub label: String,
    /// `"numeric"` or `"exact"`.
    pub kind: String,
    pub left: String,
    pub right: String,
    pub rel_err: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: String,
    pub index: u64,
    pub params: BTreeMap<String, String>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub terms_used: Option<Sides<u64>>,
    pub method: Option<Sides<String>>,
    pub checks: Vec<CheckReport>,
    pub diagnostics: Vec<String>,
    pub wall_time: f64,
}

impl IdentityReport {
    fn failed(case: &IdentityCase, params: &ParameterSet, digits: u32, diagnostic: String) -> Self {
        IdentityReport {
            id: case.id.to_string(),
            index: 0,
            params: params.to_strings(digits as usize),
            lhs: None,
            rhs: None,
            abs_err: None,
            rel_err: None,
            tolerance: None,
            pass: false,
            terms_used: None,
            method: None,
            checks: Vec::new(),
            diagnostics: vec![diagnostic],
            wall_time: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteInfo {
    pub seed: u64,
    pub digits: u32,
    pub started_at: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: u64,
    pub passed: u64,
    pub failed: u64,
    /// `None` for an identity with a sample that produced no error figure.
    pub max_rel_err_by_id: BTreeMap<String, Option<f64>>,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: SuiteInfo,
    pub results: Vec<IdentityReport>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let status = if r.pass { "PASS" } else { "FAIL" };
            let err = r.rel_err.map_or("-".to_string(), |e| format!("{e:.2e}"));
            let tol = r.tolerance.map_or("-".to_string(), |t| format!("{t:.1e}"));
            let terms = r.terms_used.as_ref().map_or("-".to_string(), |t| format!("{}/{}", t.lhs, t.rhs));
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(
                out,
                "{status} {:<18} #{:<3} rel_err={err:<9} tol={tol:<7} terms={terms:<11} {}",
                r.id,
                r.index,
                params.join(" ")
            );
            for d in &r.diagnostics {
                let _ = writeln!(out, "     {d}");
            }
        }
        let _ = writeln!(out);
        for (id, e) in &self.summary.max_rel_err_by_id {
            let e = e.map_or("-".to_string(), |e| format!("{e:.2e}"));
            let _ = writeln!(out, "max rel_err {id:<18} {e}");
        }
        let _ = writeln!(
            out,
            "{} samples, {} passed, {} failed, seed {}, {} digits, {:.2}s",
            self.summary.total,
            self.summary.passed,
            self.summary.failed,
            self.suite.seed,
            self.suite.digits,
            self.summary.wall_time
        );
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.to_text(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

/// Deterministic admissible parameters for `(seed, case.id, index)`.
pub fn sample_parameters(case: &IdentityCase, seed: u64, index: u64) -> Result<ParameterSet> {
    if case.schema.is_empty() {
        return Err(Error::InvalidContext(format!("{} has an empty schema", case.id)));
    }
    let mut draw = Draw::new(seed, case.id, index);
    for _ in 0..REJECTION_CAP {
        let p = (case.sampler)(&mut draw);
        if case.violations(&p).is_empty() {
            return Ok(p);
        }
    }
    Err(Error::SamplingExhausted { id: case.id.to_string(), attempts: REJECTION_CAP })
}

fn check_pair(label: &str, left: &SeriesResult, right: &SeriesResult, ctx: &PrecisionContext) -> CheckReport {
    let e = rel_err(&left.value, &right.value);
    let tol = tolerance(left, right, ctx.digits);
    CheckReport {
        label: label.to_string(),
        kind: "numeric".to_string(),
        left: left.value.to_decimal(ctx.digits as usize),
        right: right.value.to_decimal(ctx.digits as usize),
        rel_err: Some(e),
        tolerance: Some(tol),
        pass: e <= tol,
    }
}

fn report_from(case: &IdentityCase, params: &ParameterSet, eval: &Evaluation, ctx: &PrecisionContext) -> IdentityReport {
    let digits = ctx.digits as usize;
    let diff = &eval.lhs.value - &eval.rhs.value;
    let rel = rel_err(&eval.lhs.value, &eval.rhs.value);
    let tol = tolerance(&eval.lhs, &eval.rhs, ctx.digits);
    let mut diagnostics = Vec::new();
    let main_ok = rel <= tol;
    if !main_ok {
        diagnostics.push(format!("rel_err {rel:.3e} exceeds tolerance {tol:.3e}"));
    }
    let mut checks: Vec<CheckReport> =
        eval.checks.iter().map(|c| check_pair(&c.label, &c.left, &c.right, ctx)).collect();
    checks.extend(eval.exact.iter().map(|c| CheckReport {
        label: c.label.clone(),
        kind: "exact".to_string(),
        left: c.left.to_string(),
        right: c.right.to_string(),
        rel_err: None,
        tolerance: None,
        pass: c.holds(),
    }));
    for c in checks.iter().filter(|c| !c.pass) {
        diagnostics.push(format!("check failed: {}", c.label));
    }
    let pass = main_ok && checks.iter().all(|c| c.pass);
    IdentityReport {
        id: case.id.to_string(),
        index: 0,
        params: params.to_strings(digits),
        lhs: Some(eval.lhs.value.to_decimal(digits)),
        rhs: Some(eval.rhs.value.to_decimal(digits)),
        abs_err: Some(diff.abs_f64()),
        rel_err: Some(rel),
        tolerance: Some(tol),
        pass,
        terms_used: Some(Sides { lhs: eval.lhs.terms_used, rhs: eval.rhs.terms_used }),
        method: Some(Sides { lhs: eval.lhs.method.as_str().to_string(), rhs: eval.rhs.method.as_str().to_string() }),
        checks,
        diagnostics,
        wall_time: 0.0,
    }
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".to_string())
}

/// Evaluates one sample. Evaluator errors and panics become failed reports.
pub fn verify_one(case: &IdentityCase, params: &ParameterSet, ctx: &PrecisionContext) -> IdentityReport {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| case.evaluate(params, ctx)));
    let mut report = match outcome {
        Ok(Ok(eval)) => report_from(case, params, &eval, ctx),
        Ok(Err(e)) => IdentityReport::failed(case, params, ctx.digits, e.to_string()),
        Err(payload) => IdentityReport::failed(case, params, ctx.digits, format!("panic: {}", panic_message(&*payload))),
    };
    report.wall_time = start.elapsed().as_secs_f64();
    report
}

/// Runs every requested `(identity, index)` pair in parallel and aggregates
/// the results, sorted by `(id, index)`.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let (cases, ctx) = config.resolve()?;
    let started_at = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let start = Instant::now();
    let work: Vec<(IdentityCase, u64)> =
        cases.iter().flat_map(|c| (0..config.samples).map(move |i| (*c, i))).collect();
    let mut results: Vec<IdentityReport> = work
        .par_iter()
        .map(|(case, index)| {
            let mut report = match sample_parameters(case, config.seed, *index) {
                Ok(p) => verify_one(case, &p, &ctx),
                Err(e) => IdentityReport::failed(case, &ParameterSet::new(), ctx.digits, e.to_string()),
            };
            report.index = *index;
            report
        })
        .collect();
    results.sort_by(|a, b| (&a.id, a.index).cmp(&(&b.id, b.index)));

    let mut max_rel_err_by_id: BTreeMap<String, Option<f64>> = BTreeMap::new();
    for c in &cases {
        max_rel_err_by_id.insert(c.id.to_string(), Some(0.0));
    }
    for r in &results {
        let slot = max_rel_err_by_id.entry(r.id.clone()).or_insert(Some(0.0));
        *slot = match (*slot, r.rel_err) {
            (Some(m), Some(e)) => Some(m.max(e)),
            _ => None,
        };
    }
    let passed = results.iter().filter(|r| r.pass).count() as u64;
    let total = results.len() as u64;
    Ok(SuiteReport {
        suite: SuiteInfo { seed: config.seed, digits: config.digits, started_at },
        summary: Summary {
            total,
            passed,
            failed: total - passed,
            max_rel_err_by_id,
            wall_time: start.elapsed().as_secs_f64(),
        },
        results,
    })
}
