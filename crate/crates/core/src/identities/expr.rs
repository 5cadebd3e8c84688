//! Tiny exact expression forms over a `ParameterSet`: linear combinations
//! like `c+d-a-b-1` or `1+a/2-b-c`, and monomials like `q^2a^2/cdef^2`.
//! Parameter names are single letters.

use rug::Rational;

use super::ParameterSet;
use crate::numerics::GaussRational;

fn digits_prefix(s: &str) -> (Option<i64>, &str) {
    let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    if end == 0 {
        (None, s)
    } else {
        (Some(s[..end].parse().expect("numeric literal")), &s[end..])
    }
}

/// Evaluates a sum of terms `[k]x[/m]` or `k`.
pub(crate) fn lin(p: &ParameterSet, expr: &str) -> GaussRational {
    let mut total = GaussRational::zero();
    let mut rest: &str = expr;
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'-' => (-1, &rest[1..]),
            b'+' => (1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let (term, tail) = body.split_at(end);
        rest = tail;
        let (coef, after) = digits_prefix(term);
        let (name, divisor) = match after.split_once('/') {
            Some((n, d)) => (n, d.parse::<i64>().expect("divisor")),
            None => (after, 1),
        };
        let scale = GaussRational::real(Rational::from((sign * coef.unwrap_or(1), divisor)));
        let value = if name.is_empty() {
            scale
        } else {
            &scale * p.exact(name)
        };
        total = &total + &value;
    }
    total
}

fn factors(p: &ParameterSet, s: &str) -> GaussRational {
    let (coef, mut rest) = digits_prefix(s);
    let mut acc = GaussRational::from_i64(coef.unwrap_or(1));
    while let Some(c) = rest.chars().next() {
        let name = &rest[..c.len_utf8()];
        rest = &rest[c.len_utf8()..];
        let mut power = 1i64;
        if let Some(r) = rest.strip_prefix('^') {
            let (neg, r) = match r.strip_prefix('-') {
                Some(r) => (true, r),
                None => (false, r),
            };
            let (k, r) = digits_prefix(r);
            power = k.expect("exponent") * if neg { -1 } else { 1 };
            rest = r;
        }
        let v = p.exact(name).pow(power).expect("nonzero base for negative power");
        acc = &acc * &v;
    }
    acc
}

/// Evaluates `num[/den]` where each side is `[k]` followed by letters with
/// optional `^k` powers; `None` when the denominator vanishes.
pub(crate) fn mono(p: &ParameterSet, expr: &str) -> Option<GaussRational> {
    match expr.split_once('/') {
        Some((n, d)) => &factors(p, n) / &factors(p, d),
        None => Some(factors(p, expr)),
    }
}
