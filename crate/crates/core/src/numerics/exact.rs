//! Exact Gaussian-rational arithmetic for terminating identities.
//!
//! Sampled parameters are dyadic rationals, so finite sums and products built
//! from them can be compared with zero tolerance.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::Rational;

use super::complex::ComplexValue;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRational { re, im: Rational::new() }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::real(Rational::from(v))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0().is_eq() && self.im.cmp0().is_eq()
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0().is_eq()
    }

    /// `Some(m)` when the value is exactly `-m` for an integer `m >= 0`.
    pub fn nonpositive_integer(&self) -> Option<u64> {
        if !self.is_real() || !self.re.is_integer() || self.re.cmp0().is_gt() {
            return None;
        }
        (-self.re.numer().clone()).to_u64()
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im);
        Some(GaussRational {
            re: Rational::from(&self.re / &norm),
            im: Rational::from(-&self.im) / &norm,
        })
    }

    /// Integer power; `None` for a negative power of zero.
    pub fn pow(&self, n: i64) -> Option<Self> {
        let mut base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = GaussRational::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Some(acc)
    }

    pub fn to_complex(&self, prec: u32) -> ComplexValue {
        ComplexValue::from_rational_parts(&self.re, &self.im, prec)
    }

    pub fn to_f64_parts(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else if self.im.cmp0().is_lt() {
            write!(f, "{}-{}i", self.re, Rational::from(-&self.im))
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl From<i64> for GaussRational {
    fn from(v: i64) -> Self {
        GaussRational::from_i64(v)
    }
}

impl From<Rational> for GaussRational {
    fn from(v: Rational) -> Self {
        GaussRational::real(v)
    }
}

impl Add<&GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: Rational::from(&self.re + &rhs.re),
            im: Rational::from(&self.im + &rhs.im),
        }
    }
}

impl Sub<&GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: Rational::from(&self.re - &rhs.re),
            im: Rational::from(&self.im - &rhs.im),
        }
    }
}

impl Mul<&GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        if self.is_real() && rhs.is_real() {
            return GaussRational::real(Rational::from(&self.re * &rhs.re));
        }
        let rr = Rational::from(&self.re * &rhs.re);
        let ii = Rational::from(&self.im * &rhs.im);
        let ri = Rational::from(&self.re * &rhs.im);
        let ir = Rational::from(&self.im * &rhs.re);
        GaussRational { re: rr - ii, im: ri + ir }
    }
}

impl Div<&GaussRational> for &GaussRational {
    type Output = Option<GaussRational>;
    fn div(self, rhs: &GaussRational) -> Option<GaussRational> {
        if rhs.is_real() {
            if rhs.re.cmp0().is_eq() {
                return None;
            }
            return Some(GaussRational {
                re: Rational::from(&self.re / &rhs.re),
                im: Rational::from(&self.im / &rhs.re),
            });
        }
        Some(self * &rhs.recip()?)
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational { re: Rational::from(-&self.re), im: Rational::from(-&self.im) }
    }
}

impl Add<i64> for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: i64) -> GaussRational {
        GaussRational { re: Rational::from(&self.re + rhs), im: self.im.clone() }
    }
}

impl Sub<i64> for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: i64) -> GaussRational {
        GaussRational { re: Rational::from(&self.re - rhs), im: self.im.clone() }
    }
}

/// Exact shifted factorial `(x)_n` for `n >= 0`.
pub fn pochhammer_exact(x: &GaussRational, n: u64) -> GaussRational {
    let mut acc = GaussRational::one();
    for k in 0..n {
        acc = &acc * &(x + k as i64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn field_ops() {
        let a = GaussRational::new(r(1, 2), r(3, 4));
        let b = GaussRational::new(r(-2, 3), r(1, 8));
        let q = (&a / &b).unwrap();
        assert_eq!(&q * &b, a);
        assert_eq!(&(&a + &b) - &b, a);
        assert!((&a / &GaussRational::zero()).is_none());
        assert_eq!(a.pow(-2).unwrap(), (&GaussRational::one() / &(&a * &a)).unwrap());
    }

    #[test]
    fn pochhammer_is_factorial_at_one() {
        assert_eq!(pochhammer_exact(&GaussRational::one(), 5), GaussRational::from(120));
        assert_eq!(pochhammer_exact(&GaussRational::from(-3), 4), GaussRational::zero());
    }

    #[test]
    fn nonpositive_integer_detection() {
        assert_eq!(GaussRational::from(-4).nonpositive_integer(), Some(4));
        assert_eq!(GaussRational::from(0).nonpositive_integer(), Some(0));
        assert_eq!(GaussRational::from(3).nonpositive_integer(), None);
        assert_eq!(GaussRational::real(r(-1, 2)).nonpositive_integer(), None);
    }
}
