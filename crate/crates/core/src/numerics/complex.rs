//! Extended-precision complex scalar.
//!
//! `ComplexValue` wraps an MPC complex number whose real and imaginary parts
//! share one binary precision. Binary operations produce the larger of the two
//! operand precisions, so a value built at working precision stays there.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexValue(Complex);

impl ComplexValue {
    pub fn from_complex(c: Complex) -> Self {
        ComplexValue(c)
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        ComplexValue(Complex::with_val(prec, (re, im)))
    }

    pub fn zero(prec: u32) -> Self {
        ComplexValue(Complex::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        ComplexValue(Complex::with_val(prec, v))
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        ComplexValue(Complex::with_val(prec, v))
    }

    pub fn from_f64_parts(re: f64, im: f64, prec: u32) -> Self {
        ComplexValue(Complex::with_val(prec, (re, im)))
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Self {
        ComplexValue(Complex::with_val(prec, v))
    }

    pub fn from_rational_parts(re: &Rational, im: &Rational, prec: u32) -> Self {
        ComplexValue(Complex::with_val(prec, (re, im)))
    }

    pub fn pi(prec: u32) -> Self {
        ComplexValue(Complex::with_val(prec, Float::with_val(prec, Constant::Pi)))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec().0
    }

    /// Rounds (or exactly extends) to another binary precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        ComplexValue(Complex::with_val(prec, &self.0))
    }

    pub fn inner(&self) -> &Complex {
        &self.0
    }

    pub fn into_inner(self) -> Complex {
        self.0
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn to_f64_parts(&self) -> (f64, f64) {
        (self.re().to_f64(), self.im().to_f64())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.0.abs_ref())
    }

    /// Modulus rounded to `f64`; saturates to 0 or infinity outside range.
    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// log10 of the modulus without leaving extended range; -inf for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let a = self.abs();
        let (m, e) = a.to_f64_exp();
        m.abs().log10() + f64::from(e) * std::f64::consts::LOG10_2
    }

    pub fn is_zero(&self) -> bool {
        self.re().is_zero() && self.im().is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im().is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re().is_finite() && self.im().is_finite()
    }

    /// Exact integer value, if the imaginary part is exactly zero and the
    /// real part is exactly an integer.
    pub fn as_integer(&self) -> Option<Integer> {
        if !self.im().is_zero() || !self.re().is_integer() {
            return None;
        }
        self.re().to_integer()
    }

    /// `Some(m)` when the value is exactly the integer `-m` with `m >= 0`.
    pub fn nonpositive_integer(&self) -> Option<u64> {
        let n = self.as_integer()?;
        if n.cmp0() == Ordering::Greater {
            return None;
        }
        Integer::from(-n).to_u64()
    }

    /// Nearest nonpositive integer `-m`, returned as `(m, |self + m|)`.
    pub fn nearest_nonpositive_integer(&self) -> (u64, Float) {
        let prec = self.prec();
        let mut r = self.re().clone();
        r.round_mut();
        let m = if r.cmp0() == Some(Ordering::Greater) {
            Float::new(prec)
        } else {
            r
        };
        let diff = Complex::with_val(prec, &self.0 - &m);
        let dist = Float::with_val(prec, diff.abs_ref());
        let mag = m.to_integer().and_then(|i| Integer::from(-i).to_u64()).unwrap_or(u64::MAX);
        (mag, dist)
    }

    pub fn exp(&self) -> Self {
        ComplexValue(self.0.clone().exp())
    }

    /// Principal natural logarithm.
    pub fn ln(&self) -> Self {
        ComplexValue(self.0.clone().ln())
    }

    pub fn sin(&self) -> Self {
        ComplexValue(self.0.clone().sin())
    }

    pub fn cos(&self) -> Self {
        ComplexValue(self.0.clone().cos())
    }

    /// Principal square root (branch cut on the negative real axis).
    pub fn sqrt(&self) -> Self {
        ComplexValue(self.0.clone().sqrt())
    }

    pub fn recip(&self) -> Self {
        ComplexValue(self.0.clone().recip())
    }

    pub fn square(&self) -> Self {
        ComplexValue(self.0.clone().square())
    }

    pub fn pow_i64(&self, n: i64) -> Self {
        let prec = self.prec();
        if n >= 0 {
            ComplexValue(Complex::with_val(prec, (&self.0).pow(n as u64)))
        } else {
            ComplexValue(Complex::with_val(prec, (&self.0).pow(n.unsigned_abs())).recip())
        }
    }

    pub fn pow(&self, e: &ComplexValue) -> Self {
        let prec = self.prec().max(e.prec());
        ComplexValue(Complex::with_val(prec, (&self.0).pow(&e.0)))
    }

    /// `sin(pi z)` with the nearest integer removed exactly before scaling,
    /// so zeros at the integers are reproduced without cancellation.
    pub fn sin_pi(&self) -> Self {
        let prec = self.prec();
        let mut m = self.re().clone();
        m.round_mut();
        let parity_odd = m
            .to_integer()
            .map(|i| i.is_odd())
            .unwrap_or(false);
        let reduced = Complex::with_val(prec, &self.0 - &m);
        let pi = Float::with_val(prec, Constant::Pi);
        let s = Complex::with_val(prec, reduced * pi).sin();
        if parity_odd {
            ComplexValue(-s)
        } else {
            ComplexValue(s)
        }
    }

    pub fn conj(&self) -> Self {
        ComplexValue(self.0.clone().conj())
    }

    /// Relative distance `|self - other| / |other|`, or the absolute distance
    /// when `other` is zero.
    pub fn rel_diff(&self, other: &ComplexValue) -> f64 {
        let d = self - other;
        if other.is_zero() {
            return d.abs_f64();
        }
        let q = Float::with_val(53, d.abs() / other.abs());
        q.to_f64()
    }

    /// Decimal rendering with `digits` significant digits: `RE`, or `RE+IMi`
    /// when the imaginary part is nonzero.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = format_float(self.re(), digits);
        if self.im().is_zero() {
            return re;
        }
        let im_abs = Float::with_val(self.prec(), self.im().abs_ref());
        let sign = if self.im().is_sign_negative() { '-' } else { '+' };
        format!("{re}{sign}{}i", format_float(&im_abs, digits))
    }

    /// Parses `RE`, `RE+IMi`, `RE-IMi` or `IMi`; each part is a decimal,
    /// scientific or `p/q` literal.
    pub fn parse(text: &str, prec: u32) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty complex literal".into()));
        }
        if let Some(body) = s.strip_suffix('i') {
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(i, c)| {
                    (c == '+' || c == '-')
                        && !matches!(body.as_bytes()[i - 1], b'e' | b'E')
                })
                .map(|(i, _)| i)
                .last();
            let (re_s, im_s) = match split {
                Some(i) => (&body[..i], &body[i..]),
                None => ("0", body),
            };
            let im_s = match im_s {
                "" | "+" => "1",
                "-" => "-1",
                other => other,
            };
            let re = parse_real(re_s, prec)?;
            let im = parse_real(im_s, prec)?;
            Ok(ComplexValue(Complex::with_val(prec, (re, im))))
        } else {
            Ok(ComplexValue(Complex::with_val(prec, parse_real(&s, prec)?)))
        }
    }
}

fn parse_real(s: &str, prec: u32) -> Result<Float> {
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.contains('/') {
        let r = Rational::from_str(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        return Ok(Float::with_val(prec, &r));
    }
    let parsed = Float::parse(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(Float::with_val(prec, parsed))
}

/// Formats a real with `digits` significant digits, positional for moderate
/// exponents and scientific otherwise.
pub fn format_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let (neg, mantissa, exp) = x.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
    let exp = exp.unwrap_or(0);
    let sign = if neg { "-" } else { "" };
    let m = mantissa.as_str();
    let body = if exp > 0 && (exp as usize) <= digits.max(21) {
        let e = exp as usize;
        if e >= m.len() {
            format!("{m}{}", "0".repeat(e - m.len()))
        } else {
            format!("{}.{}", &m[..e], &m[e..])
        }
    } else if exp <= 0 && exp > -6 {
        format!("0.{}{m}", "0".repeat((-exp) as usize))
    } else {
        let rest = if m.len() > 1 { &m[1..] } else { "0" };
        format!("{}.{}e{}", &m[..1], rest, exp - 1)
    };
    format!("{sign}{body}")
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&self.to_decimal(digits))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ComplexValue> for &ComplexValue {
            type Output = ComplexValue;
            fn $method(self, rhs: &ComplexValue) -> ComplexValue {
                let prec = self.prec().max(rhs.prec());
                ComplexValue(Complex::with_val(prec, (&self.0).$method(&rhs.0)))
            }
        }
        impl $trait<ComplexValue> for ComplexValue {
            type Output = ComplexValue;
            fn $method(self, rhs: ComplexValue) -> ComplexValue {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ComplexValue> for ComplexValue {
            type Output = ComplexValue;
            fn $method(self, rhs: &ComplexValue) -> ComplexValue {
                (&self).$method(rhs)
            }
        }
        impl $trait<ComplexValue> for &ComplexValue {
            type Output = ComplexValue;
            fn $method(self, rhs: ComplexValue) -> ComplexValue {
                self.$method(&rhs)
            }
        }
        impl $trait<i64> for &ComplexValue {
            type Output = ComplexValue;
            fn $method(self, rhs: i64) -> ComplexValue {
                ComplexValue(Complex::with_val(self.prec(), (&self.0).$method(rhs)))
            }
        }
        impl $trait<i64> for ComplexValue {
            type Output = ComplexValue;
            fn $method(self, rhs: i64) -> ComplexValue {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ComplexValue {
    type Output = ComplexValue;
    fn neg(self) -> ComplexValue {
        ComplexValue(-self.0)
    }
}

impl Neg for &ComplexValue {
    type Output = ComplexValue;
    fn neg(self) -> ComplexValue {
        ComplexValue(Complex::with_val(self.prec(), -&self.0))
    }
}

impl std::iter::Sum for ComplexValue {
    fn sum<I: Iterator<Item = ComplexValue>>(mut iter: I) -> ComplexValue {
        let first = iter.next().unwrap_or_else(|| ComplexValue::zero(64));
        iter.fold(first, |acc, x| acc + x)
    }
}

impl std::iter::Product for ComplexValue {
    fn product<I: Iterator<Item = ComplexValue>>(mut iter: I) -> ComplexValue {
        let first = iter.next().unwrap_or_else(|| ComplexValue::one(64));
        iter.fold(first, |acc, x| acc * x)
    }
}
