//! Summation of `1+r F s` and bilateral `r H r` series.
//!
//! Every sum is produced by a running term ratio. The route is picked from
//! the convergence class: finite sums for terminating series, direct
//! summation for geometric decay, direct summation plus an integral tail
//! bound when algebraic decay is fast enough, and the Levin u-transform
//! otherwise.

pub mod accel;
mod spec;
mod terms;

pub use accel::{levin_u, levin_u_shifted, tail_bound_algebraic, wynn_epsilon, Extrapolation};
pub use spec::{ConvergenceClass, Method, SeriesKind, SeriesResult, SeriesSpec};

pub(crate) use spec::rounding_error;
pub(crate) use terms::TermStream;

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{gamma_ratio, ComplexValue, PrecisionContext};

/// Largest number of terms the direct algebraic route may spend before the
/// Levin transform is preferred.
pub const DIRECT_ROUTE_CAP: u64 = 20_000;

/// Extra relative accuracy (in decimal digits beyond `ctx.digits`) demanded
/// from the algebraic tail bound.
const TAIL_EXTRA_DIGITS: i32 = 3;

/// Factor by which the Levin table precision exceeds the working precision;
/// the transform loses digits to cancellation on monotone sequences.
const LEVIN_PREC_FACTOR: u32 = 2;

/// Terms the geometric route must see below threshold in a row.
const SMALL_RUN: u32 = 3;
/// Multiples of the largest parameter modulus used as Levin head lengths.
const LEVIN_HEAD_FACTORS: [f64; 3] = [2.0, 8.0, 32.0];
/// Smallest budget worth starting a Levin table with.
const LEVIN_MIN_TERMS: u64 = 16;

/// `|z| = 1` up to a few ulps.
fn on_unit_circle(z: &ComplexValue) -> Option<std::cmp::Ordering> {
    let prec = z.prec();
    let m = z.abs();
    let one = Float::with_val(prec, 1);
    let diff = Float::with_val(prec, &m - &one).abs();
    if diff <= Float::with_val(prec, Float::i_exp(1, 8 - prec as i32)) {
        Some(std::cmp::Ordering::Equal)
    } else {
        m.partial_cmp(&one)
    }
}

fn sum_re(xs: &[ComplexValue]) -> f64 {
    xs.iter().map(|x| x.re().to_f64()).sum()
}

/// Smallest `n` with some upper parameter equal to `-n`.
fn terminating_index(uppers: &[ComplexValue]) -> Option<u64> {
    uppers.iter().filter_map(ComplexValue::nonpositive_integer).min()
}

/// Convergence class of a series from its parameters alone.
pub fn classify(spec: &SeriesSpec) -> ConvergenceClass {
    match spec.kind {
        SeriesKind::Unilateral => classify_unilateral(&spec.uppers, &spec.lowers, &spec.argument),
        SeriesKind::Bilateral => classify_bilateral(spec),
    }
}

fn classify_unilateral(
    uppers: &[ComplexValue],
    lowers: &[ComplexValue],
    z: &ComplexValue,
) -> ConvergenceClass {
    use std::cmp::Ordering::*;
    if z.is_zero() {
        return ConvergenceClass::Terminating { n: 0 };
    }
    if let Some(n) = terminating_index(uppers) {
        return ConvergenceClass::Terminating { n };
    }
    let (p, q) = (uppers.len(), lowers.len());
    if p <= q {
        return ConvergenceClass::Geometric { ratio: 0.0 };
    }
    if p > q + 1 {
        return ConvergenceClass::Divergent;
    }
    match on_unit_circle(z) {
        Some(Less) => ConvergenceClass::Geometric { ratio: z.abs_f64() },
        Some(Equal) => {
            let s = sum_re(lowers) + 1.0 - sum_re(uppers);
            if s > 1.0 {
                ConvergenceClass::Algebraic { exponent: s }
            } else {
                ConvergenceClass::Divergent
            }
        }
        _ => ConvergenceClass::Divergent,
    }
}

fn classify_bilateral(spec: &SeriesSpec) -> ConvergenceClass {
    let (plus, minus) = match split_bilateral(spec) {
        Ok(parts) => parts,
        Err(_) => return ConvergenceClass::Divergent,
    };
    let pos = classify(&plus);
    let neg = match &minus {
        Some((_, m)) => classify(m),
        None => ConvergenceClass::Terminating { n: 0 },
    };
    use ConvergenceClass::*;
    match (pos, neg) {
        (Divergent, _) | (_, Divergent) => Divergent,
        (Terminating { n: x }, Terminating { n: y }) => Terminating { n: x + y + 1 },
        (Algebraic { exponent }, _) | (_, Algebraic { exponent }) => Algebraic { exponent },
        (Geometric { ratio: x }, Geometric { ratio: y }) => Geometric { ratio: x.max(y) },
        (Geometric { ratio }, _) | (_, Geometric { ratio }) => Geometric { ratio },
    }
}

/// Algebraic exponent `Re(sum lowers - sum uppers)` of a bilateral series.
fn bilateral_exponent(spec: &SeriesSpec) -> f64 {
    sum_re(&spec.lowers) - sum_re(&spec.uppers)
}

/// Splits `sum_k (a)_k/(b)_k z^k` at `k = 0`.
///
/// The `k >= 0` part is `F(a, 1; b; z)`. With `(x)_{-k} = (-1)^k/(1-x)_k`,
/// the `k <= -1` part becomes `P * F(1, 2-b; 2-a; 1/z)` where
/// `P = prod(1-b) / (prod(1-a) z)`; it is `None` when `P` vanishes.
fn split_bilateral(
    spec: &SeriesSpec,
) -> Result<(SeriesSpec, Option<(ComplexValue, SeriesSpec)>)> {
    if spec.kind != SeriesKind::Bilateral {
        return Err(Error::Domain("expected a bilateral series".into()));
    }
    let prec = spec.prec();
    let z = &spec.argument;
    if z.is_zero() {
        return Err(Error::Domain("bilateral series need a nonzero argument".into()));
    }
    let one = ComplexValue::one(prec);
    let mut plus_uppers = spec.uppers.clone();
    plus_uppers.push(one.clone());
    let plus = SeriesSpec::unilateral(plus_uppers, spec.lowers.clone(), z.clone())?;

    for (i, a) in spec.uppers.iter().enumerate() {
        if let Some(m) = (&one - a).nonpositive_integer() {
            // (a)_{-k} has a gamma pole once k > m.
            return Err(Error::LowerPole {
                param: format!("1-a{} = {}", i + 1, (&one - a).to_decimal(12)),
                index: m + 1,
            });
        }
    }
    let num: ComplexValue = spec.lowers.iter().map(|b| &one - b).product::<ComplexValue>();
    if num.is_zero() {
        return Ok((plus, None));
    }
    let den: ComplexValue = spec.uppers.iter().map(|a| &one - a).product::<ComplexValue>() * z;
    let prefactor = &num / &den;
    let two = ComplexValue::from_i64(2, prec);
    let mut m_uppers = vec![one];
    m_uppers.extend(spec.lowers.iter().map(|b| &two - b));
    let m_lowers = spec.uppers.iter().map(|a| &two - a).collect();
    let minus = SeriesSpec::unilateral(m_uppers, m_lowers, z.recip())?;
    Ok((plus, Some((prefactor, minus))))
}

/// Sums a unilateral series to `ctx.digits`.
pub fn sum_unilateral(spec: &SeriesSpec, ctx: &PrecisionContext) -> Result<SeriesResult> {
    if spec.kind != SeriesKind::Unilateral {
        return Err(Error::Domain("expected a unilateral series".into()));
    }
    let prec = ctx.bits().max(spec.prec());
    let class = classify(spec);
    match class {
        ConvergenceClass::Terminating { n } => sum_terminating(spec, n, prec, ctx),
        ConvergenceClass::Geometric { ratio } => sum_geometric(spec, ratio, prec, ctx),
        ConvergenceClass::Algebraic { exponent } => sum_algebraic(spec, exponent, prec, ctx),
        ConvergenceClass::Divergent => Err(Error::Divergent(format!(
            "{} uppers, {} lowers at |z| = {}",
            spec.uppers.len(),
            spec.lowers.len(),
            spec.argument.abs_f64()
        ))),
    }
}

/// Sums a bilateral series as the sum of its two unilateral halves.
pub fn sum_bilateral(spec: &SeriesSpec, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let (plus, minus) = split_bilateral(spec)?;
    if classify(spec) == ConvergenceClass::Divergent {
        if on_unit_circle(&spec.argument) == Some(std::cmp::Ordering::Equal) {
            return Err(Error::NotConvergent { exponent: bilateral_exponent(spec) });
        }
        return Err(Error::Divergent(format!(
            "no convergent annulus contains |z| = {}",
            spec.argument.abs_f64()
        )));
    }
    let pos = sum_unilateral(&plus, ctx)?;
    let Some((prefactor, minus)) = minus else {
        return Ok(pos);
    };
    let neg = sum_unilateral(&minus, ctx)?.scaled(&prefactor);
    Ok(pos.plus(&neg))
}

/// Dispatches on the series kind.
pub fn sum_series(spec: &SeriesSpec, ctx: &PrecisionContext) -> Result<SeriesResult> {
    match spec.kind {
        SeriesKind::Unilateral => sum_unilateral(spec, ctx),
        SeriesKind::Bilateral => sum_bilateral(spec, ctx),
    }
}

fn sum_terminating(
    spec: &SeriesSpec,
    n: u64,
    prec: u32,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    if n >= ctx.max_terms {
        return Err(Error::BudgetExceeded { needed: n + 1, budget: ctx.max_terms });
    }
    let mut stream = TermStream::new(&spec.uppers, &spec.lowers, &spec.argument, prec);
    let mut sum = ComplexValue::zero(prec);
    let mut mass = 0f64;
    for _ in 0..=n {
        let t = stream.next_term()?;
        mass += t.abs_f64();
        sum = &sum + &t;
    }
    let err = mass * (n as f64 + 1.0) * 2f64.powi(-(prec as i32));
    Ok(SeriesResult {
        value: sum,
        err_estimate: err,
        terms_used: n + 1,
        method: Method::Terminating,
        convergence: ConvergenceClass::Terminating { n },
    })
}

fn sum_geometric(
    spec: &SeriesSpec,
    ratio: f64,
    prec: u32,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    let eps = ctx.epsilon();
    let mut stream = TermStream::new(&spec.uppers, &spec.lowers, &spec.argument, prec);
    let mut sum = ComplexValue::zero(prec);
    let mut run = 0;
    let mut prev_mag = f64::NAN;
    let mut observed = 0f64;
    let mut last_mag;
    loop {
        if stream.index() >= ctx.max_terms {
            return Err(Error::BudgetExceeded {
                needed: stream.index() + 1,
                budget: ctx.max_terms,
            });
        }
        let t = stream.next_term()?;
        sum = &sum + &t;
        let mag = t.abs_f64();
        if prev_mag > 0.0 {
            observed = mag / prev_mag;
        }
        prev_mag = mag;
        last_mag = mag;
        if mag <= eps * sum.abs_f64() {
            run += 1;
            if run >= SMALL_RUN {
                break;
            }
        } else {
            run = 0;
        }
    }
    let rho = ratio.max(observed);
    let tail = if rho < 1.0 { last_mag * rho / (1.0 - rho) } else { last_mag };
    let value = sum;
    let err = tail + rounding_error(&value) * stream.index() as f64;
    Ok(SeriesResult {
        value,
        err_estimate: err,
        terms_used: stream.index(),
        method: Method::Direct,
        convergence: ConvergenceClass::Geometric { ratio },
    })
}

/// Leading constant `C` of `|term_k| ~ C k^(-s)` for a series at `|z| = 1`:
/// `|prod Gamma(b) / prod Gamma(a)|` (the `k!` is the extra lower `1`).
fn algebraic_constant(spec: &SeriesSpec) -> Option<f64> {
    let low = PrecisionContext::new(15).ok()?;
    let c = gamma_ratio(&spec.lowers, &spec.uppers, &low).ok()?;
    let c = c.abs_f64();
    (c.is_finite() && c > 0.0).then_some(c)
}

fn sum_algebraic(
    spec: &SeriesSpec,
    s: f64,
    prec: u32,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    let tol = 10f64.powi(-(ctx.digits as i32) - TAIL_EXTRA_DIGITS);
    let direct_cap = DIRECT_ROUTE_CAP.min(ctx.max_terms.saturating_sub(accel::LEVIN_MAX_TERMS));
    let mut stream = TermStream::new(&spec.uppers, &spec.lowers, &spec.argument, prec);
    let mut sum = ComplexValue::zero(prec);
    let probe = 64.min(direct_cap);
    let mut last_mag = 0f64;
    for _ in 0..probe {
        let t = stream.next_term()?;
        last_mag = t.abs_f64();
        sum = &sum + &t;
    }
    let c = algebraic_constant(spec);
    let needed = c.map(|c| {
        let k = (tol * sum.abs_f64() * (s - 1.0) / c).powf(-1.0 / (s - 1.0));
        if k.is_finite() { k.ceil() as u64 } else { u64::MAX }
    });
    if let Some(needed) = needed.filter(|&k| k <= direct_cap) {
        loop {
            let k = stream.index();
            let bound = tail_bound_algebraic(k, s, last_mag);
            if bound <= tol * sum.abs_f64() && k >= needed.min(probe) {
                let value = sum;
                let err = bound + rounding_error(&value) * k as f64;
                return Ok(SeriesResult {
                    value,
                    err_estimate: err,
                    terms_used: k,
                    method: Method::DirectTail,
                    convergence: ConvergenceClass::Algebraic { exponent: s },
                });
            }
            if k >= direct_cap {
                break;
            }
            let t = stream.next_term()?;
            last_mag = t.abs_f64();
            sum = &sum + &t;
        }
    }
    // Every evaluated term counts against the budget, failed attempts included.
    let mut spent = stream.index();
    let mut failure = None;
    for head in levin_heads(spec) {
        let Some(left) = ctx.max_terms.checked_sub(spent + head).filter(|&l| l >= LEVIN_MIN_TERMS) else {
            break;
        };
        let mut sub = *ctx;
        sub.max_terms = head + left;
        match levin_after_head(spec, head, prec, &sub) {
            Ok(mut r) => {
                r.terms_used += spent;
                r.convergence = ConvergenceClass::Algebraic { exponent: s };
                return Ok(r);
            }
            Err(e @ Error::AccelerationFailed { .. }) => {
                spent += head + accel::LEVIN_MAX_TERMS.min(left);
                failure = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    match failure {
        Some(_) => Err(Error::BudgetExceeded { needed: needed.unwrap_or(u64::MAX), budget: direct_cap }),
        None => Err(Error::BudgetExceeded { needed: u64::MAX, budget: ctx.max_terms }),
    }
}

/// Head lengths tried before the Levin transform takes over. Large
/// parameters delay the asymptotic regime of the terms to `k` of the order
/// of the parameters, so the later attempts skip past it.
fn levin_heads(spec: &SeriesSpec) -> Vec<u64> {
    let scale = spec.uppers.iter().chain(&spec.lowers).map(ComplexValue::abs_f64).fold(1.0, f64::max);
    let mut heads = vec![0];
    for factor in LEVIN_HEAD_FACTORS {
        let h = (scale * factor).ceil() as u64;
        if heads.last().is_some_and(|&l| h > l) {
            heads.push(h);
        }
    }
    heads
}

/// Sums terms `0..head` directly and the rest with the Levin transform, all
/// at `LEVIN_PREC_FACTOR` times the working precision.
fn levin_after_head(spec: &SeriesSpec, head: u64, prec: u32, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let levin_prec = prec * LEVIN_PREC_FACTOR;
    let mut stream = TermStream::new(&spec.uppers, &spec.lowers, &spec.argument, levin_prec);
    let mut sum = ComplexValue::zero(levin_prec);
    let mut mass = 0f64;
    for _ in 0..head {
        let t = stream.next_term()?;
        mass += t.abs_f64();
        sum = &sum + &t;
    }
    let mut tail_ctx = *ctx;
    tail_ctx.max_terms = ctx.max_terms - head;
    let tail = levin_u_shifted(std::iter::from_fn(|| Some(stream.next_term())), head + accel::LEVIN_BETA, &tail_ctx)?;
    let value = (&sum + &tail.value).with_prec(prec);
    // The transform accepted the tail relative to its own size; relative to
    // the whole sum the requirement is checked again here.
    // Head rounding at the doubled precision plus the final rounding to
    // working precision.
    let mag = value.abs_f64();
    let err = tail.err_estimate + mass * head as f64 * 2f64.powi(-(levin_prec as i32)) + mag * 2f64.powi(1 - prec as i32);
    if head > 0 && !(err <= ctx.target() * mag) {
        return Err(Error::AccelerationFailed { estimate: err / mag, tolerance: ctx.target() });
    }
    Ok(SeriesResult { value, err_estimate: err, terms_used: head + tail.terms_used, ..tail })
}
