//! q-shifted factorials, bracket products and summation of `r phi s` and
//! bilateral `r psi s` series.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::numerics::{ComplexValue, PrecisionContext};
use crate::series::{rounding_error, ConvergenceClass, Method, SeriesResult};

/// A nome `q` with `0 < |q| < 1` and the precision it is used at.
#[derive(Debug, Clone, PartialEq)]
pub struct QContext {
    pub q: ComplexValue,
    pub ctx: PrecisionContext,
}

impl QContext {
    pub fn new(q: ComplexValue, ctx: PrecisionContext) -> Result<Self> {
        let m = q.abs_f64();
        if !(m < 1.0) || q.abs() >= 1 {
            return Err(Error::Domain(format!("|q| = {m} is not below 1")));
        }
        if q.is_zero() {
            return Err(Error::Domain("q = 0".into()));
        }
        let q = q.with_prec(ctx.bits().max(q.prec()));
        Ok(QContext { q, ctx })
    }

    pub fn prec(&self) -> u32 {
        self.q.prec()
    }
}

/// Length of a q-shifted factorial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QIndex {
    Finite(i64),
    Infinite,
}

impl From<i64> for QIndex {
    fn from(n: i64) -> Self {
        QIndex::Finite(n)
    }
}

/// `|v|` is below the noise floor of `prec`-bit arithmetic on O(1) inputs.
fn negligible(v: &Complex, prec: u32) -> bool {
    let mag = Float::with_val(53, v.abs_ref());
    mag <= Float::with_val(53, Float::i_exp(1, 16 - prec as i32))
}

/// `1 - x`, snapped to exact zero when it is pure rounding noise.
fn one_minus(x: &Complex, prec: u32) -> Complex {
    let f = Complex::with_val(prec, 1 - x);
    if negligible(&f, prec) {
        Complex::new(prec)
    } else {
        f
    }
}

/// `(x; q)_n` for finite `n >= 0`.
fn finite_product(x: &Complex, q: &Complex, n: u64, prec: u32) -> Complex {
    let mut acc = Complex::with_val(prec, 1);
    let mut xq = x.clone();
    for _ in 0..n {
        let f = one_minus(&xq, prec);
        if f.is_zero() {
            return f;
        }
        acc *= f;
        xq *= q;
    }
    acc
}

/// `(x; q)_n`; negative `n` uses `(x;q)_{-m} = 1/(x q^{-m}; q)_m`.
pub fn q_pochhammer(x: &ComplexValue, qc: &QContext, n: QIndex) -> Result<ComplexValue> {
    let prec = qc.prec().max(x.prec());
    let q = Complex::with_val(prec, qc.q.inner());
    let xv = Complex::with_val(prec, x.inner());
    match n {
        QIndex::Finite(n) if n >= 0 => {
            Ok(ComplexValue::from_complex(finite_product(&xv, &q, n as u64, prec)))
        }
        QIndex::Finite(n) => {
            let m = n.unsigned_abs();
            let shifted = Complex::with_val(prec, &xv * &qc.q.pow_i64(n).with_prec(prec).into_inner());
            let p = finite_product(&shifted, &q, m, prec);
            if p.is_zero() {
                return Err(Error::DivisionByZero(format!(
                    "({}; q)_{n} has a vanishing factor",
                    x.to_decimal(12)
                )));
            }
            Ok(ComplexValue::from_complex(p.recip()))
        }
        QIndex::Infinite => infinite_product(&xv, &q, &qc.ctx, prec).map(ComplexValue::from_complex),
    }
}

/// `(x; q)_inf`, truncated at the first `N` with `|x q^N| < 10^-(digits+guard)`
/// and closed with the first-order tail factor `exp(-x q^N / (1 - q))`.
fn infinite_product(x: &Complex, q: &Complex, ctx: &PrecisionContext, prec: u32) -> Result<Complex> {
    let eps = ctx.epsilon();
    let mut acc = Complex::with_val(prec, 1);
    let mut xq = x.clone();
    let mut n = 0u64;
    while Float::with_val(53, xq.abs_ref()).to_f64() >= eps {
        if n >= ctx.max_terms {
            return Err(Error::BudgetExceeded { needed: n + 1, budget: ctx.max_terms });
        }
        let f = one_minus(&xq, prec);
        if f.is_zero() {
            return Ok(f);
        }
        acc *= f;
        xq *= q;
        n += 1;
    }
    if !xq.is_zero() {
        let one_minus_q = Complex::with_val(prec, 1 - q);
        let tail = Complex::with_val(prec, -(xq / one_minus_q)).exp();
        acc *= tail;
    }
    Ok(acc)
}

/// `prod (x_i; q)_n / prod (y_j; q)_n` with a shared `n`.
pub fn q_bracket(
    numers: &[ComplexValue],
    denoms: &[ComplexValue],
    qc: &QContext,
    n: QIndex,
) -> Result<ComplexValue> {
    let prec = qc.prec();
    let mut num = ComplexValue::one(prec);
    let mut num_zero = false;
    for x in numers {
        let v = q_pochhammer(x, qc, n)?;
        num_zero |= v.is_zero();
        num = &num * &v;
    }
    let mut den = ComplexValue::one(prec);
    let mut den_zero = None;
    for y in denoms {
        let v = q_pochhammer(y, qc, n)?;
        if v.is_zero() {
            den_zero = Some(y);
        }
        den = &den * &v;
    }
    match (num_zero, den_zero) {
        (true, Some(y)) => Err(Error::Indeterminate(format!(
            "numerator and denominator products both vanish (denominator entry {})",
            y.to_decimal(12)
        ))),
        (true, None) => Ok(ComplexValue::zero(prec)),
        (false, Some(y)) => Err(Error::DivisionByZero(format!(
            "denominator entry ({}; q) vanishes",
            y.to_decimal(12)
        ))),
        (false, None) => Ok(&num / &den),
    }
}

/// Principal square root, used for the `±q sqrt(a)` very-well-poised pairs.
pub fn principal_sqrt(a: &ComplexValue) -> ComplexValue {
    a.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QSeriesKind {
    /// `1+r phi s`: `(q;q)_k` joins the lowers.
    Phi,
    /// `r psi s`: summed over all integers.
    Psi,
}

/// Parameters of a basic hypergeometric series.
#[derive(Debug, Clone, PartialEq)]
pub struct QSeriesSpec {
    pub uppers: Vec<ComplexValue>,
    pub lowers: Vec<ComplexValue>,
    pub argument: ComplexValue,
    pub kind: QSeriesKind,
}

impl QSeriesSpec {
    pub fn phi(uppers: Vec<ComplexValue>, lowers: Vec<ComplexValue>, argument: ComplexValue) -> Result<Self> {
        if uppers.is_empty() {
            return Err(Error::Domain("phi series need at least one upper parameter".into()));
        }
        Ok(QSeriesSpec { uppers, lowers, argument, kind: QSeriesKind::Phi })
    }

    pub fn psi(uppers: Vec<ComplexValue>, lowers: Vec<ComplexValue>, argument: ComplexValue) -> Result<Self> {
        Ok(QSeriesSpec { uppers, lowers, argument, kind: QSeriesKind::Psi })
    }

    /// Exponent `s - r` of the `(-1)^k q^(k choose 2)` factor.
    pub fn binomial_exponent(&self) -> i64 {
        let (u, l) = (self.uppers.len() as i64, self.lowers.len() as i64);
        match self.kind {
            QSeriesKind::Phi => l - (u - 1),
            QSeriesKind::Psi => l - u,
        }
    }
}

/// `sum_k prod (num;q)_k / prod (den;q)_k ((-1)^k q^(k choose 2))^e z^k`
/// over `k >= 0`, generated by its term ratio.
struct QTerms {
    num: Vec<Complex>,
    den: Vec<Complex>,
    den_labels: Vec<String>,
    z: Complex,
    q: Complex,
    exponent: i64,
    prec: u32,
    /// `q^k` for the next ratio.
    qk: Complex,
    k: u64,
    term: Complex,
    terminated: bool,
}

impl QTerms {
    fn new(
        num: &[ComplexValue],
        den: &[ComplexValue],
        z: &ComplexValue,
        exponent: i64,
        qc: &QContext,
        prec: u32,
    ) -> Self {
        let lift = |x: &ComplexValue| Complex::with_val(prec, x.inner());
        QTerms {
            num: num.iter().map(lift).collect(),
            den: den.iter().map(lift).collect(),
            den_labels: den.iter().map(|x| x.to_decimal(12)).collect(),
            z: lift(z),
            q: lift(&qc.q),
            exponent,
            prec,
            qk: Complex::with_val(prec, 1),
            k: 0,
            term: Complex::with_val(prec, 1),
            terminated: false,
        }
    }

    /// Term `k`, then advance. After an upper factor vanishes every further
    /// term is zero and `terminated` is set.
    fn next_term(&mut self) -> Result<Complex> {
        if self.k > 0 && !self.terminated {
            let prec = self.prec;
            let mut ratio = self.z.clone();
            for a in &self.num {
                let f = one_minus(&Complex::with_val(prec, a * &self.qk), prec);
                if f.is_zero() {
                    self.terminated = true;
                    self.term = Complex::new(prec);
                    break;
                }
                ratio *= f;
            }
            if !self.terminated {
                for (b, label) in self.den.iter().zip(&self.den_labels) {
                    let f = one_minus(&Complex::with_val(prec, b * &self.qk), prec);
                    if f.is_zero() {
                        return Err(Error::LowerPole { param: label.clone(), index: self.k });
                    }
                    ratio /= f;
                }
                match self.exponent {
                    0 => {}
                    e => {
                        let mut g = Complex::with_val(prec, -&self.qk);
                        if e < 0 {
                            g = g.recip();
                        }
                        for _ in 0..e.unsigned_abs() {
                            ratio *= &g;
                        }
                    }
                }
                self.term *= ratio;
            }
            self.qk *= &self.q;
        }
        self.k += 1;
        Ok(self.term.clone())
    }
}

/// `Some(m)` when `x q^m = 1` for an integer `0 <= m <= limit`.
fn q_power_index(x: &ComplexValue, qc: &QContext) -> Option<u64> {
    let lq = qc.q.abs_f64().ln();
    let lx = x.abs_f64().ln();
    if !lx.is_finite() {
        return None;
    }
    let m = (-lx / lq).round();
    if !(0.0..=1e6).contains(&m) {
        return None;
    }
    let m = m as i64;
    let prod = x * &qc.q.pow_i64(m);
    let prec = prod.prec();
    negligible(&Complex::with_val(prec, prod.inner() - 1), prec).then_some(m as u64)
}

/// Sums a one-sided q-series with the geometric stopping rule.
fn sum_q_terms(mut terms: QTerms, ctx: &PrecisionContext, nominal_ratio: f64) -> Result<SeriesResult> {
    let eps = ctx.epsilon();
    let prec = terms.prec;
    let mut sum = Complex::new(prec);
    let mut run = 0;
    let mut prev = f64::NAN;
    let mut observed = 0f64;
    let mut last = 0f64;
    let mut mass = 0f64;
    loop {
        if terms.k >= ctx.max_terms {
            return Err(Error::BudgetExceeded { needed: terms.k + 1, budget: ctx.max_terms });
        }
        let t = terms.next_term()?;
        if terms.terminated {
            break;
        }
        sum += &t;
        let mag = Float::with_val(53, t.abs_ref()).to_f64();
        if prev > 0.0 {
            observed = mag / prev;
        }
        prev = mag;
        last = mag;
        mass += mag;
        let smag = Float::with_val(53, sum.abs_ref()).to_f64();
        if mag <= eps * smag || mag == 0.0 {
            run += 1;
            if run >= 3 {
                break;
            }
        } else {
            run = 0;
        }
    }
    let value = ComplexValue::from_complex(sum);
    let used = terms.k - u64::from(terms.terminated);
    // Rounding grows with the largest partial sums, not the final one.
    let rounding = rounding_error(&value).max(mass * 4.0 * 2f64.powi(-(prec as i32))) * used as f64;
    if terms.terminated {
        let n = used.saturating_sub(1);
        return Ok(SeriesResult {
            err_estimate: rounding,
            value,
            terms_used: used,
            method: Method::Terminating,
            convergence: ConvergenceClass::Terminating { n },
        });
    }
    let rho = nominal_ratio.max(observed);
    let tail = if rho < 1.0 { last * rho / (1.0 - rho) } else { last };
    Ok(SeriesResult {
        err_estimate: tail + rounding,
        value,
        terms_used: used,
        method: Method::Direct,
        convergence: ConvergenceClass::Geometric { ratio: nominal_ratio },
    })
}

/// Convergence of a one-sided q-sum with binomial exponent `e` and ratio
/// tending to `z` (for `e = 0`).
fn one_sided_ok(num: &[ComplexValue], z: &ComplexValue, e: i64, qc: &QContext) -> Result<f64> {
    if z.is_zero() || num.iter().any(|a| q_power_index(a, qc).is_some()) || e > 0 {
        return Ok(0.0);
    }
    let r = z.abs_f64();
    if e == 0 && r < 1.0 {
        return Ok(r);
    }
    Err(Error::Domain(format!(
        "series with |z| = {r} and q-binomial exponent {e} does not converge"
    )))
}

/// Sums an `r phi s` or `r psi s` series.
///
/// A psi series is split at `k = 0`. Using
/// `(x;q)_{-k} = (-q/x)^k q^(k choose 2) / (q/x;q)_k`, the `k <= -1` half is
/// `sum_{k>=1} prod (q/b;q)_k / prod (q/a;q)_k w^k` with
/// `w = prod b / (prod a z)`; it is summed from `k = 1` as
/// `P * sum_{j>=0} prod (q^2/b;q)_j / prod (q^2/a;q)_j w^j`.
pub fn sum_q_series(spec: &QSeriesSpec, qc: &QContext) -> Result<SeriesResult> {
    let ctx = &qc.ctx;
    let prec = qc.prec();
    let e = spec.binomial_exponent();
    match spec.kind {
        QSeriesKind::Phi => {
            let mut den = spec.lowers.clone();
            den.push(qc.q.clone());
            let rho = one_sided_ok(&spec.uppers, &spec.argument, e, qc)?;
            sum_q_terms(QTerms::new(&spec.uppers, &den, &spec.argument, e, qc, prec), ctx, rho)
        }
        QSeriesKind::Psi => {
            let z = &spec.argument;
            if z.is_zero() {
                return Err(Error::Domain("psi series need a nonzero argument".into()));
            }
            let q = &qc.q;
            for (i, a) in spec.uppers.iter().enumerate() {
                if a.is_zero() {
                    return Err(Error::Domain(format!("upper parameter a{} = 0", i + 1)));
                }
                if let Some(m) = q_power_index(&(q / a), qc) {
                    // (a;q)_{-k} has a pole once k > m.
                    return Err(Error::LowerPole {
                        param: format!("q/a{} = {}", i + 1, (q / a).to_decimal(12)),
                        index: m + 1,
                    });
                }
            }
            if spec.lowers.iter().any(ComplexValue::is_zero) {
                return Err(Error::Domain("lower parameter equal to 0".into()));
            }
            let w = spec.lowers.iter().cloned().product::<ComplexValue>()
                / (spec.uppers.iter().cloned().product::<ComplexValue>() * z);
            let reflected_num: Vec<ComplexValue> = spec.lowers.iter().map(|b| q / b).collect();
            let reflected_den: Vec<ComplexValue> = spec.uppers.iter().map(|a| q / a).collect();

            let rho_pos = one_sided_ok(&spec.uppers, z, e, qc)?;
            let rho_neg = one_sided_ok(&reflected_num, &w, 0, qc)?;
            let pos = sum_q_terms(QTerms::new(&spec.uppers, &spec.lowers, z, e, qc, prec), ctx, rho_pos)?;

            let one = ComplexValue::one(prec);
            let p_num: ComplexValue = reflected_num.iter().map(|x| &one - x).product();
            let p_num = snap_zero(p_num);
            if p_num.is_zero() {
                return Ok(pos);
            }
            let p_den: ComplexValue = reflected_den.iter().map(|x| &one - x).product();
            let prefactor = &(&p_num / &p_den) * &w;
            let shifted_num: Vec<ComplexValue> = reflected_num.iter().map(|x| x * q).collect();
            let shifted_den: Vec<ComplexValue> = reflected_den.iter().map(|x| x * q).collect();
            let neg = sum_q_terms(QTerms::new(&shifted_num, &shifted_den, &w, 0, qc, prec), ctx, rho_neg)?;
            Ok(pos.plus(&neg.scaled(&prefactor)))
        }
    }
}

fn snap_zero(v: ComplexValue) -> ComplexValue {
    let prec = v.prec();
    if negligible(v.inner(), prec) {
        ComplexValue::zero(prec)
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qc(q: f64, digits: u32) -> QContext {
        let ctx = PrecisionContext::new(digits).unwrap();
        QContext::new(ComplexValue::from_f64(q, ctx.bits()), ctx).unwrap()
    }

    fn cv(x: f64, qc: &QContext) -> ComplexValue {
        ComplexValue::from_f64(x, qc.prec())
    }

    #[test]
    fn q_range_enforced() {
        let ctx = PrecisionContext::new(20).unwrap();
        assert!(QContext::new(ComplexValue::from_f64(1.0, 64), ctx.clone()).is_err());
        assert!(QContext::new(ComplexValue::from_f64_parts(0.8, 0.7, 64), ctx).is_err());
    }

    #[test]
    fn trivial_products() {
        let c = qc(0.5, 20);
        assert_eq!(q_pochhammer(&cv(0.3, &c), &c, 0.into()).unwrap(), ComplexValue::one(c.prec()));
        let zero = ComplexValue::zero(c.prec());
        assert_eq!(q_pochhammer(&zero, &c, 7.into()).unwrap(), ComplexValue::one(c.prec()));
        assert_eq!(q_pochhammer(&zero, &c, QIndex::Infinite).unwrap(), ComplexValue::one(c.prec()));
    }

    #[test]
    fn euler_function_at_half() {
        let c = qc(0.5, 30);
        let v = q_pochhammer(&c.q, &c, QIndex::Infinite).unwrap();
        // Oracle: plain product at 400 bits far past the truncation point.
        let mut acc = ComplexValue::one(400);
        let q = ComplexValue::from_f64(0.5, 400);
        let mut qi = q.clone();
        for _ in 0..400 {
            acc = &acc * &(&ComplexValue::one(400) - &qi);
            qi = &qi * &q;
        }
        assert!(v.rel_diff(&acc) < 1e-38);
        assert!(v.to_decimal(13).starts_with("0.2887880950866"), "{}", v.to_decimal(13));
    }

    #[test]
    fn bracket_examples() {
        let c = qc(0.5, 30);
        let q2 = c.q.square();
        let v = q_bracket(&[c.q.clone()], &[q2], &c, QIndex::Infinite).unwrap();
        assert!(v.rel_diff(&cv(0.5, &c)) < 1e-38);
        let x = cv(0.37, &c);
        let one = q_bracket(&[x.clone()], &[x], &c, 9.into()).unwrap();
        assert!(one.rel_diff(&ComplexValue::one(c.prec())) < 1e-40);
        let z = q_bracket(&[ComplexValue::one(c.prec())], &[cv(0.3, &c)], &c, QIndex::Infinite).unwrap();
        assert!(z.is_zero());
        let both = q_bracket(&[ComplexValue::one(c.prec())], &[c.q.recip()], &c, QIndex::Infinite);
        assert!(matches!(both, Err(Error::Indeterminate(_))));
    }

    #[test]
    fn negative_index_forms_agree() {
        // (x;q)_{-m} = (-q/x)^m q^(m choose 2) / (q/x;q)_m
        let c = qc(0.375, 30);
        let x = ComplexValue::from_f64_parts(0.7, -0.4, c.prec());
        for m in 1..8i64 {
            let direct = q_pochhammer(&x, &c, (-m).into()).unwrap();
            let qx = &c.q / &x;
            let alt = (-&qx).pow_i64(m) * c.q.pow_i64(m * (m - 1) / 2)
                / q_pochhammer(&qx, &c, m.into()).unwrap();
            assert!(direct.rel_diff(&alt) < 1e-38, "m={m}");
        }
        let pole = q_pochhammer(&c.q.pow_i64(2), &c, (-3).into());
        assert!(matches!(pole, Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn finite_matches_ratio_of_infinite() {
        let c = qc(0.625, 30);
        let x = ComplexValue::from_f64_parts(-1.3, 0.2, c.prec());
        for n in [0i64, 1, 5, 17] {
            let fin = q_pochhammer(&x, &c, n.into()).unwrap();
            let lim = q_bracket(&[x.clone()], &[&x * &c.q.pow_i64(n)], &c, QIndex::Infinite).unwrap();
            assert!(fin.rel_diff(&lim) < 1e-36, "n={n}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn functional_equation(xn in -40i32..40, qn in 26u32..230, n in -6i64..7, m in -6i64..7) {
            let c = qc(qn as f64 / 256.0, 25);
            let x = ComplexValue::from_f64_parts(xn as f64 / 16.0 + 0.03125, 0.25, c.prec());
            let lhs = q_pochhammer(&x, &c, (n + m).into());
            let a = q_pochhammer(&x, &c, n.into());
            let b = q_pochhammer(&(&x * &c.q.pow_i64(n)), &c, m.into());
            if let (Ok(l), Ok(a), Ok(b)) = (lhs, a, b) {
                let r = &a * &b;
                prop_assert!(l.rel_diff(&r) < 1e-30, "{} vs {}", l, r);
            }
        }
    }

    #[test]
    fn phi_zero_argument() {
        let c = qc(0.5, 20);
        let s = QSeriesSpec::phi(vec![cv(0.3, &c), cv(0.2, &c)], vec![cv(0.7, &c)], ComplexValue::zero(c.prec()))
            .unwrap();
        let r = sum_q_series(&s, &c).unwrap();
        assert!(r.value.rel_diff(&ComplexValue::one(c.prec())) < 1e-30);
    }

    #[test]
    fn q_binomial_theorem() {
        // 1phi0(a;;q,z) = (az;q)_inf / (z;q)_inf
        let c = qc(0.3, 30);
        let a = cv(2.5, &c);
        let z = ComplexValue::from_f64_parts(0.2, 0.35, c.prec());
        let s = QSeriesSpec::phi(vec![a.clone()], vec![], z.clone()).unwrap();
        let r = sum_q_series(&s, &c).unwrap();
        let exact = q_bracket(&[&a * &z], &[z], &c, QIndex::Infinite).unwrap();
        assert!(r.value.rel_diff(&exact) < 1e-38);
    }

    #[test]
    fn terminating_phi() {
        // q-Chu-Vandermonde: 2phi1(q^-n, b; c; q, q) = (c/b;q)_n / (c;q)_n b^n
        let c = qc(0.5, 30);
        let n = 6;
        let b = cv(0.3, &c);
        let cc = cv(0.7, &c);
        let s = QSeriesSpec::phi(vec![c.q.pow_i64(-n), b.clone()], vec![cc.clone()], c.q.clone()).unwrap();
        let r = sum_q_series(&s, &c).unwrap();
        assert_eq!(r.method, Method::Terminating);
        assert_eq!(r.terms_used, 7);
        let exact = q_bracket(&[&cc / &b], &[cc], &c, n.into()).unwrap() * b.pow_i64(n);
        assert!(r.value.rel_diff(&exact) < 1e-30, "{}", r.value.rel_diff(&exact));
    }

    fn six_psi_six(a: &ComplexValue, b: &[ComplexValue; 4], c: &QContext, root: &ComplexValue) -> QSeriesSpec {
        let q = &c.q;
        let qa = q * a;
        let mut uppers = vec![q * root, -(q * root)];
        let mut lowers = vec![root.clone(), -root];
        for x in b {
            uppers.push(x.clone());
            lowers.push(&qa / x);
        }
        let z = &(q * &a.square()) / &b.iter().cloned().product::<ComplexValue>();
        QSeriesSpec::psi(uppers, lowers, z).unwrap()
    }

    fn six_psi_six_rhs(a: &ComplexValue, b: &[ComplexValue; 4], c: &QContext) -> ComplexValue {
        let q = &c.q;
        let qa = q * a;
        let mut num = vec![q.clone(), qa.clone(), q / a];
        for i in 0..4 {
            for j in i + 1..4 {
                num.push(&qa / &(&b[i] * &b[j]));
            }
        }
        let mut den: Vec<ComplexValue> = b.iter().map(|x| q / x).collect();
        den.extend(b.iter().map(|x| &qa / x));
        den.push(&(q * &a.square()) / &b.iter().cloned().product::<ComplexValue>());
        q_bracket(&num, &den, c, QIndex::Infinite).unwrap()
    }

    #[test]
    fn bailey_six_psi_six_example() {
        let c = qc(0.5, 30);
        let a = cv(2.25, &c);
        let b = [cv(1.5, &c), cv(1.5, &c), cv(1.5, &c), cv(1.5, &c)];
        let root = principal_sqrt(&a);
        let lhs = sum_q_series(&six_psi_six(&a, &b, &c, &root), &c).unwrap();
        let rhs = six_psi_six_rhs(&a, &b, &c);
        assert!(lhs.value.rel_diff(&rhs) < 1e-25, "{}", lhs.value.rel_diff(&rhs));
        let flipped = sum_q_series(&six_psi_six(&a, &b, &c, &-root), &c).unwrap();
        assert!(flipped.value.rel_diff(&lhs.value) < 1e-35);
    }

    #[test]
    fn psi_outside_annulus() {
        let c = qc(0.5, 20);
        let a = cv(2.25, &c);
        let b = [cv(0.625, &c), cv(0.625, &c), cv(1.5, &c), cv(1.5, &c)];
        let s = six_psi_six(&a, &b, &c, &principal_sqrt(&a));
        assert!(s.argument.abs_f64() > 1.0);
        let err = sum_q_series(&s, &c).unwrap_err();
        assert_eq!(err.kind(), "DomainError");
    }

    #[test]
    fn sqrt_is_principal() {
        let four = ComplexValue::from_i64(4, 64);
        assert_eq!(principal_sqrt(&four), ComplexValue::from_i64(2, 64));
        let a = ComplexValue::from_f64_parts(-3.0, -0.5, 128);
        let r = principal_sqrt(&a);
        assert!(r.re().is_sign_positive());
        assert!(r.square().rel_diff(&a) < 1e-35);
    }

    /// Double-precision brute force over `k in [-K, K]` by term ratios.
    fn brute_psi(uppers: &[f64], lowers: &[f64], z: f64, q: f64, kmax: i32) -> f64 {
        let ratio = |k: i32| -> f64 {
            let qk = q.powi(k);
            uppers.iter().map(|a| 1.0 - a * qk).product::<f64>() / lowers.iter().map(|b| 1.0 - b * qk).product::<f64>()
                * z
        };
        let mut total = 1.0;
        let mut t = 1.0;
        for k in 0..kmax {
            t *= ratio(k);
            total += t;
        }
        let mut t = 1.0;
        for k in (-kmax..0).rev() {
            t /= ratio(k);
            total += t;
        }
        total
    }

    #[test]
    fn psi_split_matches_brute_force() {
        let c = qc(0.5, 20);
        let q = 0.5;
        let cases: [(&[f64], &[f64], f64); 4] = [
            (&[2.5, 3.0], &[0.9, 1.1], 0.6),
            (&[1.3, -2.4], &[0.7, -0.9], 0.5),
            (&[2.75, 1.25], &[1.5, 0.625], 0.75),
            (&[3.0], &[0.9], 0.7),
        ];
        for (u, l, z) in cases {
            let s = QSeriesSpec::psi(
                u.iter().map(|&x| cv(x, &c)).collect(),
                l.iter().map(|&x| cv(x, &c)).collect(),
                cv(z, &c),
            )
            .unwrap();
            let r = sum_q_series(&s, &c).unwrap();
            let brute = brute_psi(u, l, z, q, 300);
            let gap = (r.value.re().to_f64() - brute).abs();
            assert!(gap <= 1e-12 * brute.abs() + r.err_estimate, "{u:?}/{l:?}: {gap}");
        }
    }
}
