//! Sequence acceleration: Levin's u-transform (primary route for slowly
//! convergent sums), Wynn's epsilon algorithm (cross-check only) and the
//! integral-comparison tail bound for algebraically decaying terms.

use rug::{Complex, Float};

use super::spec::{ConvergenceClass, Method, SeriesResult};
use crate::error::{Error, Result};
use crate::numerics::{ComplexValue, PrecisionContext};

/// Hard cap on the size of the Levin table.
pub const LEVIN_MAX_TERMS: u64 = 400;
/// Steps without a better error estimate before the table is abandoned.
const LEVIN_STAGNATION: u64 = 16;
/// Default `beta` of the remainder estimate `(n + beta) a_n`.
pub const LEVIN_BETA: u64 = 1;

/// Levin u-transform of the partial sums of `terms`.
///
/// Builds the table one anti-diagonal per term (remainder estimate
/// `(n + 1) a_n`) and returns the top entry whose difference from its
/// predecessor is smallest. Stops once that difference is below the working
/// epsilon, after `LEVIN_STAGNATION` steps without improvement, or at the
/// table cap. Fails if the best estimate is still above `10^-digits`
/// relative. The table runs at the precision of the first term; since it
/// amplifies rounding noise, callers feed terms at about twice the working
/// precision.
pub fn levin_u<I>(terms: I, ctx: &PrecisionContext) -> Result<SeriesResult>
where
    I: IntoIterator<Item = Result<ComplexValue>>,
{
    levin_u_shifted(terms, LEVIN_BETA, ctx)
}

/// `levin_u` with remainder estimate `(n + beta) a_n`. For the tail of a
/// series that starts at index `m`, `beta = m + 1` keeps the estimate tied to
/// the original index.
pub fn levin_u_shifted<I>(terms: I, beta: u64, ctx: &PrecisionContext) -> Result<SeriesResult>
where
    I: IntoIterator<Item = Result<ComplexValue>>,
{
    let cap = LEVIN_MAX_TERMS.min(ctx.max_terms);
    let mut prec = ctx.bits();
    let mut table: Option<LevinTable> = None;
    let mut last: Option<Complex> = None;
    let mut best: Option<(Complex, Float, u64)> = None;
    let mut last_terms: [Option<ComplexValue>; 2] = [None, None];
    let tol = ctx.epsilon();
    let accept = ctx.target();
    let mut used = 0u64;

    for (n, term) in terms.into_iter().enumerate() {
        let n = n as u64;
        if n >= cap {
            break;
        }
        let term = term?;
        used = n + 1;
        if n == 0 {
            prec = prec.max(term.prec());
        }
        let table = table.get_or_insert_with(|| LevinTable::new(prec, beta));
        let a = Complex::with_val(prec, term.inner());
        if a.is_zero() {
            return Err(Error::NumericalBreakdown(format!(
                "term {n} is exactly zero; Levin remainder estimate undefined"
            )));
        }
        last_terms = [last_terms[1].take(), Some(term)];
        let Some(estimate) = table.push(&a) else {
            continue;
        };
        if let Some(prev) = &last {
            let diff = Float::with_val(53, Complex::with_val(prec, &estimate - prev).abs_ref());
            let mag = Float::with_val(53, estimate.abs_ref());
            let improved = match &best {
                Some((_, e, _)) => diff <= *e,
                None => true,
            };
            if improved {
                best = Some((estimate.clone(), diff.clone(), n));
            }
            if n >= 3 && diff <= Float::with_val(53, &mag * tol) {
                break;
            }
            if let Some((_, _, bn)) = &best {
                if n - bn >= LEVIN_STAGNATION {
                    break;
                }
            }
        }
        last = Some(estimate);
    }

    let (value, err, _) = best.ok_or_else(|| {
        Error::NumericalBreakdown("Levin table needs at least three terms".into())
    })?;
    let value = ComplexValue::from_complex(value);
    let err = err.to_f64();
    let mag = value.abs_f64();
    if !(err <= accept * mag) {
        return Err(Error::AccelerationFailed {
            estimate: if mag > 0.0 { err / mag } else { err },
            tolerance: accept,
        });
    }
    // The table runs above working precision; the result is rounded back.
    let rounding = if prec > ctx.bits() { mag * 2f64.powi(-(ctx.bits() as i32)) } else { 0.0 };
    Ok(SeriesResult {
        value: value.with_prec(ctx.bits()),
        err_estimate: err + rounding,
        terms_used: used,
        method: Method::Levin,
        convergence: observed_class(&last_terms, used),
    })
}

/// One anti-diagonal of the numerator and denominator tables of the
/// u-transform, extended one term at a time.
struct LevinTable {
    prec: u32,
    beta: u64,
    partial: Option<Complex>,
    p_diag: Vec<Complex>,
    q_diag: Vec<Complex>,
}

impl LevinTable {
    fn new(prec: u32, beta: u64) -> Self {
        LevinTable { prec, beta, partial: None, p_diag: Vec::new(), q_diag: Vec::new() }
    }

    /// Appends term `a_n` and returns the new top entry `L_n^(0)`, or `None`
    /// when its denominator vanishes.
    fn push(&mut self, a: &Complex) -> Option<Complex> {
        let prec = self.prec;
        let n = self.p_diag.len() as u64;
        let s = match self.partial.take() {
            Some(p) => p + a,
            None => a.clone(),
        };
        let omega = Complex::with_val(prec, a * (n + self.beta));
        let q0 = Complex::with_val(prec, omega.recip_ref());
        let p0 = Complex::with_val(prec, &s * &q0);
        self.partial = Some(s);

        let mut new_p = Vec::with_capacity(self.p_diag.len() + 1);
        let mut new_q = Vec::with_capacity(self.q_diag.len() + 1);
        new_p.push(p0);
        new_q.push(q0);
        for k in 1..=n as usize {
            let f = levin_factor(k as u64, n - k as u64, self.beta, prec);
            let fp = Complex::with_val(prec, &self.p_diag[k - 1] * &f);
            let fq = Complex::with_val(prec, &self.q_diag[k - 1] * &f);
            new_p.push(Complex::with_val(prec, &new_p[k - 1] - &fp));
            new_q.push(Complex::with_val(prec, &new_q[k - 1] - &fq));
        }
        self.p_diag = new_p;
        self.q_diag = new_q;
        let top_q = &self.q_diag[n as usize];
        if top_q.is_zero() {
            return None;
        }
        Some(Complex::with_val(prec, &self.p_diag[n as usize] / top_q))
    }
}

/// `(b+m) (b+m+k-1)^(k-2) / (b+m+k)^(k-1)` with `b = beta`.
fn levin_factor(k: u64, m: u64, beta: u64, prec: u32) -> Float {
    if k == 1 {
        return Float::with_val(prec, 1);
    }
    let base = Float::with_val(prec, beta + m + k - 1) / Float::with_val(prec, beta + m + k);
    let pow = Float::with_val(prec, rug::ops::Pow::pow(&base, (k - 2) as u32));
    Float::with_val(prec, pow * (beta + m)) / Float::with_val(prec, beta + m + k)
}

/// Classifies decay from the last two terms: geometric when the ratio is
/// clearly below one, otherwise an estimated algebraic exponent.
fn observed_class(last: &[Option<ComplexValue>; 2], n: u64) -> ConvergenceClass {
    let (Some(a), Some(b)) = (&last[0], &last[1]) else {
        return ConvergenceClass::Terminating { n: n.saturating_sub(1) };
    };
    let ratio = (b.log10_abs() - a.log10_abs()) * std::f64::consts::LN_10;
    if ratio.exp() < 0.9 {
        return ConvergenceClass::Geometric { ratio: ratio.exp() };
    }
    let k = (n - 1) as f64;
    let exponent = -ratio / (k / (k - 1.0)).ln();
    ConvergenceClass::Algebraic { exponent }
}

/// Limit estimate from an extrapolation routine.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub value: ComplexValue,
    pub err_estimate: f64,
}

/// Wynn's epsilon algorithm on a list of partial sums.
///
/// Returns the last entry of the deepest even column, with the distance to
/// its predecessor as error estimate. Two equal entries in an even column mean
/// the sequence has converged; equal entries in an odd column are a breakdown.
pub fn wynn_epsilon(partials: &[ComplexValue]) -> Result<Extrapolation> {
    if partials.len() < 5 {
        return Err(Error::Domain(format!(
            "Wynn epsilon needs at least 5 partial sums, got {}",
            partials.len()
        )));
    }
    let prec = partials.iter().map(ComplexValue::prec).max().unwrap_or(64);
    let tiny = Float::with_val(53, Float::i_exp(1, 8 - prec as i32));
    let lift = |x: &ComplexValue| Complex::with_val(prec, x.inner());
    let mut prev: Vec<Complex> = vec![Complex::new(prec); partials.len() + 1];
    let mut cur: Vec<Complex> = partials.iter().map(lift).collect();
    // (value, predecessor in the same column)
    let mut deepest: (Complex, Option<Complex>) = (
        cur[cur.len() - 1].clone(),
        Some(cur[cur.len() - 2].clone()),
    );
    let mut column = 0usize;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = Complex::with_val(prec, &cur[i + 1] - &cur[i]);
            let scale = Float::with_val(53, cur[i].abs_ref()).max(&Float::with_val(53, 1e-300));
            let small = Float::with_val(53, diff.abs_ref()) <= Float::with_val(53, &tiny * &scale);
            if small {
                if column % 2 == 0 {
                    return Ok(Extrapolation {
                        value: ComplexValue::from_complex(cur[i + 1].clone()),
                        err_estimate: Float::with_val(53, diff.abs_ref()).to_f64(),
                    });
                }
                return Err(Error::NumericalBreakdown(format!(
                    "equal entries in odd epsilon column {column}"
                )));
            }
            next.push(Complex::with_val(prec, &prev[i + 1] + diff.recip()));
        }
        prev = cur;
        cur = next;
        column += 1;
        if column % 2 == 0 && !cur.is_empty() {
            let last = cur[cur.len() - 1].clone();
            let before = if cur.len() >= 2 {
                Some(cur[cur.len() - 2].clone())
            } else {
                Some(deepest.0.clone())
            };
            deepest = (last, before);
        }
    }
    let (value, before) = deepest;
    let err = match before {
        Some(b) => Float::with_val(53, Complex::with_val(prec, &value - &b).abs_ref()).to_f64(),
        None => f64::INFINITY,
    };
    Ok(Extrapolation { value: ComplexValue::from_complex(value), err_estimate: err })
}

/// Integral-comparison bound on `sum_{k>K} C k^(-s)` given `|term_K|`:
/// `last_term_mag * K / (s - 1)`. Infinite when `s <= 1`.
pub fn tail_bound_algebraic(k: u64, s: f64, last_term_mag: f64) -> f64 {
    if !(s > 1.0) || k == 0 {
        return f64::INFINITY;
    }
    last_term_mag * k as f64 / (s - 1.0)
}
