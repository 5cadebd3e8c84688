//! Gamma-family primitives at arbitrary precision.
//!
//! Both `gamma` and `log_gamma` shift the argument up to a precision-dependent
//! threshold and finish with Stirling's series. `gamma` additionally uses the
//! reflection formula for `Re z < 1/2`; `log_gamma` never reflects, which makes
//! it the principal log-gamma (continuous off the negative real axis) and gives
//! an independent route for cross-checks.

use std::f64::consts::PI;

use rug::float::Constant;
use rug::{Complex, Float};

use super::complex::ComplexValue;
use super::context::PrecisionContext;
use crate::error::{Error, Result};

/// Largest positive integer argument returned as an exact factorial.
const EXACT_FACTORIAL_MAX: u32 = 1000;
/// Above this modulus `gamma` goes through `log_gamma`.
const DIRECT_GAMMA_MAX_ABS: f64 = 100.0;

fn check_pole(z: &ComplexValue, ctx: &PrecisionContext) -> Result<()> {
    if let Some(m) = z.nonpositive_integer() {
        return Err(Error::Pole(format!("-{m}")));
    }
    if ctx.pole_margin > 0.0 {
        let (m, dist) = z.nearest_nonpositive_integer();
        if dist < ctx.pole_margin {
            return Err(Error::Pole(format!(
                "{} (within {} of -{m})",
                z.to_decimal(12),
                ctx.pole_margin
            )));
        }
    }
    Ok(())
}

fn stirling_threshold(ctx: &PrecisionContext) -> f64 {
    f64::from(ctx.working_digits()).max(12.0)
}

fn shift_count(z: &ComplexValue, ctx: &PrecisionContext) -> u64 {
    let re = z.re().to_f64();
    let r = stirling_threshold(ctx);
    if re >= r {
        0
    } else {
        (r - re).ceil() as u64
    }
}

/// Stirling's series for `ln Gamma(w)`, valid once `Re w` is past the
/// threshold. Coefficients `B_2m / (2m(2m-1))` are produced from
/// `2(2m-2)! zeta(2m) / (2 pi)^2m` with alternating sign.
fn stirling_ln_gamma(w: &ComplexValue) -> ComplexValue {
    let prec = w.prec();
    let pi = Float::with_val(prec, Constant::Pi);
    let two_pi = Float::with_val(prec, &pi * 2u32);
    let two_pi_sq = Float::with_val(prec, two_pi.square_ref());
    let half_ln_two_pi = Float::with_val(prec, two_pi.ln_ref()) / 2u32;

    let ln_w = w.ln();
    let head = &(&(w - &ComplexValue::from_f64(0.5, prec)) * &ln_w) - w;
    let mut sum = head.into_inner() + &half_ln_two_pi;

    let w_inv = w.recip().into_inner();
    let w_inv_sq = Complex::with_val(prec, w_inv.square_ref());
    let mut power = w_inv;
    // c_m = 2 (2m-2)! / (2 pi)^(2m)
    let mut coeff = Float::with_val(prec, 2u32) / &two_pi_sq;
    let eps = Float::with_val(53, Float::i_exp(1, -(prec as i32)));
    let max_m = 4 * prec;
    for m in 1..=max_m {
        let zeta = Float::with_val(prec, Float::zeta_u(2 * m));
        let mag = Float::with_val(prec, &coeff * &zeta);
        let term = Complex::with_val(prec, &power * &mag);
        if m % 2 == 1 {
            sum += &term;
        } else {
            sum -= &term;
        }
        let term_abs = Float::with_val(53, term.abs_ref());
        let sum_abs = Float::with_val(53, sum.abs_ref());
        if term_abs <= Float::with_val(53, &eps * &sum_abs) {
            break;
        }
        power *= &w_inv_sq;
        let k = 2 * m;
        coeff *= k * (k - 1);
        coeff /= &two_pi_sq;
    }
    ComplexValue::from_complex(sum)
}

fn shifted_product(z: &ComplexValue, n: u64) -> ComplexValue {
    let prec = z.prec();
    let mut p = Complex::with_val(prec, 1);
    for k in 0..n {
        let factor = Complex::with_val(prec, z.inner() + k);
        p *= factor;
    }
    ComplexValue::from_complex(p)
}

/// `ln Gamma(z)` on the principal branch: real for real `z > 0`, continuous
/// along paths that avoid the negative real axis.
pub fn log_gamma(z: &ComplexValue, ctx: &PrecisionContext) -> Result<ComplexValue> {
    check_pole(z, ctx)?;
    let prec = ctx.bits();
    let z = z.with_prec(prec);
    let n = shift_count(&z, ctx);
    let w = &z + n as i64;
    let mut lg = stirling_ln_gamma(&w);
    if n > 0 {
        let ln_p = shifted_product(&z, n).ln();
        // Principal ln of the product differs from the sum of principal logs
        // by a multiple of 2 pi i; recover it from a double-precision arg sum.
        let (zr, zi) = z.to_f64_parts();
        let arg_sum: f64 = (0..n).map(|k| zi.atan2(zr + k as f64)).sum();
        let wraps = ((arg_sum - ln_p.im().to_f64()) / (2.0 * PI)).round();
        let mut correction = ln_p.into_inner();
        if wraps != 0.0 {
            let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
            let shift = Float::with_val(prec, two_pi * wraps);
            *correction.mut_imag() += shift;
        }
        lg = &lg - &ComplexValue::from_complex(correction);
    }
    Ok(lg.with_prec(prec))
}

fn gamma_right_half(z: &ComplexValue, ctx: &PrecisionContext) -> ComplexValue {
    let n = shift_count(z, ctx);
    let w = z + n as i64;
    let g = stirling_ln_gamma(&w).exp();
    if n == 0 {
        g
    } else {
        &g / &shifted_product(z, n)
    }
}

/// `Gamma(z)` at `ctx.bits()` precision.
pub fn gamma(z: &ComplexValue, ctx: &PrecisionContext) -> Result<ComplexValue> {
    check_pole(z, ctx)?;
    let prec = ctx.bits();
    let z = z.with_prec(prec);
    if let Some(n) = z.as_integer() {
        if let Some(n) = n.to_u32().filter(|&n| n >= 1 && n <= EXACT_FACTORIAL_MAX) {
            let f = Float::with_val(prec, Float::factorial(n - 1));
            return Ok(ComplexValue::from_parts(f, Float::new(prec)));
        }
    }
    if z.abs_f64() >= DIRECT_GAMMA_MAX_ABS {
        return Ok(log_gamma(&z, ctx)?.exp());
    }
    if z.re().to_f64() < 0.5 {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let one_minus = &ComplexValue::one(prec) - &z;
        let denom = &z.sin_pi() * &gamma_right_half(&one_minus, ctx);
        return Ok(&ComplexValue::pi(prec) / &denom);
    }
    Ok(gamma_right_half(&z, ctx))
}

/// Shifted factorial `(x)_n = Gamma(x + n) / Gamma(x)` for any integer `n`.
///
/// Positive `n` multiplies the rising product directly; negative `n` uses
/// `(x)_{-m} = 1 / ((x-1)(x-2)...(x-m))`.
pub fn pochhammer(x: &ComplexValue, n: i64, ctx: &PrecisionContext) -> Result<ComplexValue> {
    let prec = ctx.bits();
    let x = x.with_prec(prec);
    let mut acc = Complex::with_val(prec, 1);
    if n >= 0 {
        for k in 0..n {
            let f = Complex::with_val(prec, x.inner() + k);
            acc *= f;
        }
        return Ok(ComplexValue::from_complex(acc));
    }
    for j in 1..=n.unsigned_abs() {
        let f = Complex::with_val(prec, x.inner() - j);
        if f.is_zero() {
            return Err(Error::DivisionByZero(format!(
                "({})_{n}: factor x-{j} vanishes",
                x.to_decimal(12)
            )));
        }
        acc *= f;
    }
    Ok(ComplexValue::from_complex(acc.recip()))
}

/// `prod Gamma(numer_i) / prod Gamma(denom_j)` through summed log-gammas and
/// one final exponential.
///
/// A denominator argument at a pole makes the ratio exactly zero; a pole in
/// the numerator is an error, and coinciding poles are indeterminate.
pub fn gamma_ratio(
    numer: &[ComplexValue],
    denom: &[ComplexValue],
    ctx: &PrecisionContext,
) -> Result<ComplexValue> {
    let prec = ctx.bits();
    let numer_pole = numer.iter().find(|x| x.nonpositive_integer().is_some());
    let denom_pole = denom.iter().find(|x| x.nonpositive_integer().is_some());
    match (numer_pole, denom_pole) {
        (Some(n), Some(d)) => {
            return Err(Error::Indeterminate(format!(
                "numerator pole at {} and denominator pole at {}",
                n.to_decimal(12),
                d.to_decimal(12)
            )))
        }
        (Some(n), None) => return Err(Error::Pole(n.to_decimal(12))),
        (None, Some(_)) => return Ok(ComplexValue::zero(prec)),
        (None, None) => {}
    }
    let mut acc = ComplexValue::zero(prec);
    for x in numer {
        acc = &acc + &log_gamma(x, ctx)?;
    }
    for x in denom {
        acc = &acc - &log_gamma(x, ctx)?;
    }
    Ok(acc.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    fn c(x: f64) -> ComplexValue {
        ComplexValue::from_f64(x, ctx().bits())
    }

    #[test]
    fn gamma_small_values() {
        let ctx = ctx();
        assert_eq!(gamma(&c(1.0), &ctx).unwrap().to_f64_parts(), (1.0, 0.0));
        assert_eq!(gamma(&c(5.0), &ctx).unwrap().to_f64_parts(), (24.0, 0.0));
        let sqrt_pi = Float::with_val(ctx.bits(), Constant::Pi).sqrt();
        let g = gamma(&c(0.5), &ctx).unwrap();
        assert!(g.rel_diff(&ComplexValue::from_parts(sqrt_pi, Float::new(ctx.bits()))) < 1e-45);
        assert!(g.to_decimal(10).starts_with("1.772453851"));
    }

    #[test]
    fn gamma_pole_errors() {
        let ctx = ctx();
        assert_eq!(gamma(&c(0.0), &ctx).unwrap_err().kind(), "PoleError");
        assert_eq!(gamma(&c(-3.0), &ctx).unwrap_err().kind(), "PoleError");
        assert_eq!(log_gamma(&c(-1.0), &ctx).unwrap_err().kind(), "PoleError");
        let margin = ctx.with_pole_margin(1e-6);
        assert!(gamma(&c(-2.0 + 1e-9), &margin).is_err());
        assert!(gamma(&c(-2.0 + 1e-9), &ctx).is_ok());
    }

    #[test]
    fn log_gamma_basics() {
        let ctx = ctx();
        assert!(log_gamma(&c(1.0), &ctx).unwrap().abs_f64() < 1e-48);
        assert!(log_gamma(&c(2.0), &ctx).unwrap().abs_f64() < 1e-48);
        let x = c(10.5);
        let via_log = log_gamma(&x, &ctx).unwrap().exp();
        let direct = gamma(&x, &ctx).unwrap();
        assert!(via_log.rel_diff(&direct) < 1e-45);
    }

    #[test]
    fn log_gamma_is_principal_on_negative_reals() {
        // Gamma(-1/2) = -2 sqrt(pi); the branch shared with the standard
        // loggamma puts Im = -pi, and -2 pi at -3/2.
        let ctx = ctx();
        let lg = log_gamma(&c(-0.5), &ctx).unwrap();
        assert!((lg.im().to_f64() + PI).abs() < 1e-12);
        let half_ln_pi_4 = (4.0 * PI).sqrt().ln();
        assert!((lg.re().to_f64() - half_ln_pi_4).abs() < 1e-12);
        let lg = log_gamma(&c(-1.5), &ctx).unwrap();
        assert!((lg.im().to_f64() + 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn log_gamma_imaginary_part_is_continuous() {
        let ctx = PrecisionContext::new(20).unwrap();
        let mut prev: Option<f64> = None;
        for i in 0..=200 {
            let t = -8.0 + 16.0 * i as f64 / 200.0;
            let z = ComplexValue::from_f64_parts(t, 0.75, ctx.bits());
            let im = log_gamma(&z, &ctx).unwrap().im().to_f64();
            if let Some(p) = prev {
                assert!((im - p).abs() < 1.0, "jump at t={t}: {p} -> {im}");
            }
            prev = Some(im);
        }
    }

    #[test]
    fn pochhammer_examples() {
        let ctx = ctx();
        let x = ComplexValue::from_f64_parts(0.3, -1.2, ctx.bits());
        assert_eq!(pochhammer(&x, 0, &ctx).unwrap().to_f64_parts(), (1.0, 0.0));
        assert_eq!(pochhammer(&c(1.0), 4, &ctx).unwrap().to_f64_parts(), (24.0, 0.0));
        assert_eq!(pochhammer(&c(3.0), -2, &ctx).unwrap().to_f64_parts(), (0.5, 0.0));
        // Gamma(1)/Gamma(3) by the gamma route
        let oracle = &gamma(&c(1.0), &ctx).unwrap() / &gamma(&c(3.0), &ctx).unwrap();
        assert_eq!(pochhammer(&c(3.0), -2, &ctx).unwrap(), oracle);
        assert_eq!(pochhammer(&c(2.0), -3, &ctx).unwrap_err().kind(), "DivisionByZero");
    }

    #[test]
    fn gamma_ratio_examples() {
        let ctx = ctx();
        let r = gamma_ratio(&[c(3.0), c(1.0)], &[c(2.0), c(2.0)], &ctx).unwrap();
        let oracle = &(&gamma(&c(3.0), &ctx).unwrap() * &gamma(&c(1.0), &ctx).unwrap())
            / &(&gamma(&c(2.0), &ctx).unwrap() * &gamma(&c(2.0), &ctx).unwrap());
        assert!(r.rel_diff(&oracle) < 1e-45);
        let x = ComplexValue::from_f64_parts(2.75, 0.5, ctx.bits());
        let one = gamma_ratio(&[x.clone()], &[x], &ctx).unwrap();
        assert!(one.rel_diff(&c(1.0)) < 1e-45);
        assert!(gamma_ratio(&[c(1.0)], &[c(0.0)], &ctx).unwrap().is_zero());
        assert_eq!(gamma_ratio(&[c(-1.0)], &[c(2.0)], &ctx).unwrap_err().kind(), "PoleError");
        assert_eq!(
            gamma_ratio(&[c(-1.0)], &[c(-2.0)], &ctx).unwrap_err().kind(),
            "IndeterminateError"
        );
    }

    #[test]
    fn large_arguments_agree_between_routes() {
        let ctx = ctx();
        let z = ComplexValue::from_f64_parts(150.25, -20.0, ctx.bits());
        let g = gamma(&z, &ctx).unwrap();
        let shifted = &gamma(&(&z - 1), &ctx).unwrap() * &(&z - 1);
        assert!(g.rel_diff(&shifted) < 1e-44);
    }
}
