//! Exact Gaussian-rational evaluation of terminating sums, used to compare
//! terminating identities with zero tolerance.

use crate::numerics::{pochhammer_exact, GaussRational};

/// `sum_{k=0}^{n} prod (a)_k / (k! prod (b)_k) z^k`; `None` when a lower
/// factor vanishes inside the range.
pub(crate) fn pfq_sum(uppers: &[GaussRational], lowers: &[GaussRational], z: &GaussRational, n: u64) -> Option<GaussRational> {
    let mut term = GaussRational::one();
    let mut sum = GaussRational::one();
    for k in 0..n {
        let j = k as i64;
        let mut num = z.clone();
        for a in uppers {
            num = &num * &(a + j);
        }
        let mut den = GaussRational::from_i64(j + 1);
        for b in lowers {
            den = &den * &(b + j);
        }
        term = (&(&term * &num) / &den)?;
        sum = &sum + &term;
    }
    Some(sum)
}

/// `prod_i (x_i)_n / prod_j (y_j)_n`.
pub(crate) fn pochhammer_ratio(numers: &[GaussRational], denoms: &[GaussRational], n: u64) -> Option<GaussRational> {
    let mut num = GaussRational::one();
    for x in numers {
        num = &num * &pochhammer_exact(x, n);
    }
    let mut den = GaussRational::one();
    for y in denoms {
        den = &den * &pochhammer_exact(y, n);
    }
    &num / &den
}

/// `(x; q)_n` for `n >= 0`.
pub(crate) fn q_pochhammer(x: &GaussRational, q: &GaussRational, n: u64) -> GaussRational {
    let one = GaussRational::one();
    let mut acc = one.clone();
    let mut xq = x.clone();
    for _ in 0..n {
        acc = &acc * &(&one - &xq);
        xq = &xq * q;
    }
    acc
}

pub(crate) fn q_bracket(numers: &[GaussRational], denoms: &[GaussRational], q: &GaussRational, n: u64) -> Option<GaussRational> {
    let mut num = GaussRational::one();
    for x in numers {
        num = &num * &q_pochhammer(x, q, n);
    }
    let mut den = GaussRational::one();
    for y in denoms {
        den = &den * &q_pochhammer(y, q, n);
    }
    &num / &den
}

/// `sum_{k=0}^{n} K_k prod (num;q)_k / prod (den;q)_k z^k` where `den`
/// already contains `q` and `K_k = (1 - a q^2k)/(1 - a)` when a
/// very-well-poised centre `a` is given (the `±q sqrt(a)` over `±sqrt(a)`
/// pairs collapse to it), else `K_k = 1`.
pub(crate) fn q_sum(
    num: &[GaussRational],
    den: &[GaussRational],
    q: &GaussRational,
    z: &GaussRational,
    n: u64,
    well_poised: Option<&GaussRational>,
) -> Option<GaussRational> {
    let one = GaussRational::one();
    let kernel_den = match well_poised {
        Some(a) => Some(&one - a),
        None => None,
    };
    let mut ratio_part = one.clone();
    let mut qk = one.clone();
    let mut sum = GaussRational::zero();
    for k in 0..=n {
        if k > 0 {
            let mut r = z.clone();
            for x in num {
                r = &r * &(&one - &(x * &qk));
            }
            let mut d = one.clone();
            for y in den {
                d = &d * &(&one - &(y * &qk));
            }
            ratio_part = (&(&ratio_part * &r) / &d)?;
            qk = &qk * q;
        }
        let term = match (well_poised, &kernel_den) {
            (Some(a), Some(kd)) => {
                let q2k = qk.pow(2)?;
                (&(&(&one - &(a * &q2k)) * &ratio_part) / kd)?
            }
            _ => ratio_part.clone(),
        };
        sum = &sum + &term;
    }
    Some(sum)
}
