//! Basic (q-) hypergeometric entries of the catalog: Bailey's 6psi6 sum, its
//! 6phi5 specialization, Jackson's 8phi7 sum in terminating and
//! nonterminating form, and the two halves `Omega` and `Theta` of a split
//! 6psi6 together with their 8phi7 closed forms.

use super::exact::{q_bracket as exact_bracket, q_sum};
use super::expr::mono;
use super::{int, nome, cplx, Check, Constraint, Draw, Evaluation, ExactCheck, IdentityCase, ParamSpec, ParameterSet};
use crate::error::{Error, Result};
use crate::numerics::{ComplexValue, GaussRational, PrecisionContext};
use crate::qseries::{principal_sqrt, q_bracket, sum_q_series, QContext, QIndex, QSeriesSpec};
use crate::series::SeriesResult;

/// Powers `q^j` with `|j|` up to this bound are checked for coincidences.
const Q_POWER_SPAN: i64 = 64;
/// Samplers keep the series arguments at or below this modulus.
const MAX_ARGUMENT: f64 = 0.8;

/// Exact parameter values with the nome set up at working precision.
struct QVals<'a> {
    p: &'a ParameterSet,
    qc: QContext,
}

impl<'a> QVals<'a> {
    fn new(p: &'a ParameterSet, ctx: &PrecisionContext) -> Result<Self> {
        let qc = QContext::new(p.value("q", ctx.bits()), *ctx)?;
        Ok(QVals { p, qc })
    }

    fn prec(&self) -> u32 {
        self.qc.prec()
    }

    fn exact(&self, expr: &str) -> Result<GaussRational> {
        mono(self.p, expr).ok_or_else(|| Error::DivisionByZero(format!("{expr} has a zero denominator")))
    }

    fn m(&self, expr: &str) -> Result<ComplexValue> {
        Ok(self.exact(expr)?.to_complex(self.prec()))
    }

    fn all(&self, exprs: &[&str]) -> Result<Vec<ComplexValue>> {
        exprs.iter().map(|e| self.m(e)).collect()
    }

    fn sqrt(&self, expr: &str) -> Result<ComplexValue> {
        Ok(principal_sqrt(&self.m(expr)?))
    }

    fn bracket(&self, numer: &[&str], denom: &[&str], n: QIndex) -> Result<SeriesResult> {
        let v = q_bracket(&self.all(numer)?, &self.all(denom)?, &self.qc, n)?;
        let factors = (numer.len() + denom.len()) as f64;
        let r = SeriesResult::closed(v);
        Ok(SeriesResult { err_estimate: r.err_estimate * factors, ..r })
    }

    /// Very-well-poised `phi` with centre `a`, root `root` (either sign of
    /// `sqrt(a)`), further uppers `rest` and argument `z`: uppers
    /// `a, q root, -q root, rest...`, lowers `root, -root, qa/x...`.
    fn vwp(&self, a: &ComplexValue, root: &ComplexValue, rest: &[ComplexValue], z: &ComplexValue) -> Result<SeriesResult> {
        let q = &self.qc.q;
        let qa = q * a;
        let qr = q * root;
        let mut uppers = vec![a.clone(), qr.clone(), -&qr];
        uppers.extend(rest.iter().cloned());
        let mut lowers = vec![root.clone(), -root];
        lowers.extend(rest.iter().map(|x| &qa / x));
        sum_q_series(&QSeriesSpec::phi(uppers, lowers, z.clone())?, &self.qc)
    }

    /// A one-sided sum without the `(q;q)_k` denominator, written as a phi
    /// series with an extra upper `q`.
    fn unilateral(&self, uppers: Vec<ComplexValue>, lowers: Vec<ComplexValue>, z: ComplexValue) -> Result<SeriesResult> {
        let mut u = vec![self.qc.q.clone()];
        u.extend(uppers);
        sum_q_series(&QSeriesSpec::phi(u, lowers, z)?, &self.qc)
    }
}

// Constraint helpers. All comparisons are exact.

fn q_of(p: &ParameterSet) -> &GaussRational {
    p.exact("q")
}

fn nome_ok(p: &ParameterSet) -> bool {
    let q = q_of(p);
    let norm = q.re.clone() * &q.re + q.im.clone() * &q.im;
    !q.is_zero() && norm < 1
}

/// True when no `x q^j` equals 1 for `j` in `lo..=hi`.
fn avoids_q_powers(p: &ParameterSet, x: &GaussRational, lo: i64, hi: i64) -> bool {
    let q = q_of(p);
    let Some(mut v) = q.pow(lo).map(|qj| x * &qj) else {
        return true;
    };
    let one = GaussRational::one();
    for _ in lo..=hi {
        if v == one {
            return false;
        }
        v = &v * q;
    }
    true
}

/// Lower parameters and denominator factors: none may equal `q^-j`, `j >= 0`.
fn no_poles(p: &ParameterSet, exprs: &[&str]) -> bool {
    nome_ok(p)
        && exprs.iter().all(|e| match mono(p, e) {
            Some(x) => avoids_q_powers(p, &x, 0, Q_POWER_SPAN),
            None => false,
        })
}

/// `x` with a `±sqrt(x)` pair among the lowers (and `±q sqrt(x)` among the
/// uppers of a bilateral series): `x` must avoid every even power of `q`.
fn sqrt_pair_ok(p: &ParameterSet, exprs: &[&str]) -> bool {
    nome_ok(p)
        && exprs.iter().all(|e| match mono(p, e) {
            Some(x) => {
                let mut ok = true;
                let q2 = q_of(p).pow(2).expect("nonzero q");
                let mut v = match q2.pow(-Q_POWER_SPAN) {
                    Some(s) => &x * &s,
                    None => return false,
                };
                for _ in -Q_POWER_SPAN..=Q_POWER_SPAN {
                    ok &= v != GaussRational::one();
                    v = &v * &q2;
                }
                ok
            }
            None => false,
        })
}

fn modulus_below_one(p: &ParameterSet, expr: &str) -> bool {
    match mono(p, expr) {
        Some(z) => z.re.clone() * &z.re + z.im.clone() * &z.im < 1,
        None => false,
    }
}

fn modulus_f64(p: &ParameterSet, expr: &str) -> f64 {
    mono(p, expr).map_or(f64::INFINITY, |z| {
        let (re, im) = z.to_f64_parts();
        re.hypot(im)
    })
}

fn draw_q(d: &mut Draw) -> GaussRational {
    d.open(0.1, 0.8)
}

/// Draws parameter sets until the constraints hold and `arg` stays at or
/// below `MAX_ARGUMENT`; the harness rejects anything left over.
fn sample_until(
    d: &mut Draw,
    constraints: &[Constraint],
    arg: &str,
    mut draw: impl FnMut(&mut Draw) -> ParameterSet,
) -> ParameterSet {
    let mut last = draw(d);
    for _ in 0..1000 {
        if modulus_f64(&last, arg) <= MAX_ARGUMENT && constraints.iter().all(|c| (c.check)(&last)) {
            break;
        }
        last = draw(d);
    }
    last
}

// Bailey's 6psi6.

const BAILEY_UPPERS: [&str; 4] = ["b", "c", "d", "e"];
const BAILEY_LOWERS: [&str; 4] = ["qa/b", "qa/c", "qa/d", "qa/e"];
const BAILEY_ARG: &str = "qa^2/bcde";
const BAILEY_NUM: [&str; 9] = ["q", "qa", "q/a", "qa/bc", "qa/bd", "qa/be", "qa/cd", "qa/ce", "qa/de"];
const BAILEY_DEN: [&str; 9] = ["q/b", "q/c", "q/d", "q/e", "qa/b", "qa/c", "qa/d", "qa/e", "qa^2/bcde"];

fn bailey_psi(v: &QVals, root: &ComplexValue) -> Result<SeriesResult> {
    let q = &v.qc.q;
    let qr = q * root;
    let mut uppers = vec![qr.clone(), -&qr];
    uppers.extend(v.all(&BAILEY_UPPERS)?);
    let mut lowers = vec![root.clone(), -root];
    lowers.extend(v.all(&BAILEY_LOWERS)?);
    sum_q_series(&QSeriesSpec::psi(uppers, lowers, v.m(BAILEY_ARG)?)?, &v.qc)
}

fn bailey_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = QVals::new(p, ctx)?;
    let root = v.sqrt("a")?;
    let lhs = bailey_psi(&v, &root)?;
    let flipped = bailey_psi(&v, &-&root)?;
    let rhs = v.bracket(&BAILEY_NUM, &BAILEY_DEN, QIndex::Infinite)?;
    Ok(Evaluation::new(lhs.clone(), rhs).with_check(Check::new("other sign of sqrt(a)", flipped, lhs)))
}

const BAILEY_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "0<|q|<1", check: nome_ok },
    Constraint { text: "|qa^2/bcde|<1", check: |p| modulus_below_one(p, BAILEY_ARG) },
    Constraint { text: "a not an integer power of q^2", check: |p| sqrt_pair_ok(p, &["a"]) },
    Constraint {
        text: "qa/b, qa/c, qa/d, qa/e not in {1, q^-1, q^-2, ...}",
        check: |p| no_poles(p, &BAILEY_LOWERS),
    },
    Constraint {
        text: "q/b, q/c, q/d, q/e not in {1, q^-1, q^-2, ...}",
        check: |p| no_poles(p, &["q/b", "q/c", "q/d", "q/e"]),
    },
];

fn bailey_sample(d: &mut Draw) -> ParameterSet {
    sample_until(d, BAILEY_CONSTRAINTS, BAILEY_ARG, |d| {
        ParameterSet::new()
            .with("q", draw_q(d))
            .with("a", d.open(0.25, 3.0))
            .with("b", d.open(0.5, 3.0))
            .with("c", d.open(0.5, 3.0))
            .with("d", d.open(0.5, 3.0))
            .with("e", d.open(0.5, 3.0))
    })
}

// 6phi5.

const PHI65_ARG: &str = "qa/bcd";
const PHI65_NUM: [&str; 4] = ["qa", "qa/bc", "qa/bd", "qa/cd"];
const PHI65_DEN: [&str; 4] = ["qa/b", "qa/c", "qa/d", "qa/bcd"];

fn phi65_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = QVals::new(p, ctx)?;
    let a = v.m("a")?;
    let root = v.sqrt("a")?;
    let rest = v.all(&["b", "c", "d"])?;
    let z = v.m(PHI65_ARG)?;
    let lhs = v.vwp(&a, &root, &rest, &z)?;
    let flipped = v.vwp(&a, &-&root, &rest, &z)?;
    let rhs = v.bracket(&PHI65_NUM, &PHI65_DEN, QIndex::Infinite)?;
    Ok(Evaluation::new(lhs.clone(), rhs).with_check(Check::new("other sign of sqrt(a)", flipped, lhs)))
}

const PHI65_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "0<|q|<1", check: nome_ok },
    Constraint { text: "|qa/bcd|<1", check: |p| modulus_below_one(p, PHI65_ARG) },
    Constraint { text: "a not in {1, q^-2, q^-4, ...}", check: |p| no_poles(p, &["a"]) && sqrt_pair_ok(p, &["a"]) },
    Constraint {
        text: "qa/b, qa/c, qa/d not in {1, q^-1, q^-2, ...}",
        check: |p| no_poles(p, &["qa/b", "qa/c", "qa/d"]),
    },
];

fn phi65_sample(d: &mut Draw) -> ParameterSet {
    sample_until(d, PHI65_CONSTRAINTS, PHI65_ARG, |d| {
        ParameterSet::new()
            .with("q", draw_q(d))
            .with("a", d.open(0.25, 3.0))
            .with("b", d.open(0.5, 3.0))
            .with("c", d.open(0.5, 3.0))
            .with("d", d.open(0.5, 3.0))
    })
}

// Terminating 8phi7.

/// `q^(1+n) a^2/bcd` and `q^-n`, the two uppers tied to `n`.
fn jackson_extra(p: &ParameterSet) -> Result<(GaussRational, GaussRational)> {
    let n = p.integer("n");
    let q = q_of(p);
    let qn = q.pow(n).ok_or_else(|| Error::DivisionByZero("q = 0".into()))?;
    let base = mono(p, "qa^2/bcd").ok_or_else(|| Error::DivisionByZero("bcd = 0".into()))?;
    let companion = &base * &qn;
    let inverse = qn.recip().ok_or_else(|| Error::DivisionByZero("q = 0".into()))?;
    Ok((companion, inverse))
}

fn jackson_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = QVals::new(p, ctx)?;
    let n = p.integer("n");
    let (companion, inverse) = jackson_extra(p)?;
    let prec = v.prec();
    let a = v.m("a")?;
    let mut rest = v.all(&["b", "c", "d"])?;
    rest.push(companion.to_complex(prec));
    rest.push(inverse.to_complex(prec));
    let root = v.sqrt("a")?;
    let lhs = v.vwp(&a, &root, &rest, &v.qc.q)?;
    let flipped = v.vwp(&a, &-&root, &rest, &v.qc.q)?;
    let rhs = v.bracket(&PHI65_NUM, &PHI65_DEN, QIndex::Finite(n))?;

    let ea = p.exact("a");
    let q = q_of(p);
    let mut num = vec![ea.clone()];
    let mut den = Vec::new();
    for x in [p.exact("b").clone(), p.exact("c").clone(), p.exact("d").clone(), companion, inverse] {
        den.push(exact_div(&(q * ea), &x)?);
        num.push(x);
    }
    den.push(q.clone());
    let nn = n as u64;
    let exact_lhs = q_sum(&num, &den, q, q, nn, Some(ea))
        .ok_or_else(|| Error::DivisionByZero("exact 8phi7 hits a vanishing factor".into()))?;
    let bracket_num: Result<Vec<_>> = PHI65_NUM.iter().map(|e| v.exact(e)).collect();
    let bracket_den: Result<Vec<_>> = PHI65_DEN.iter().map(|e| v.exact(e)).collect();
    let exact_rhs = exact_bracket(&bracket_num?, &bracket_den?, q, nn)
        .ok_or_else(|| Error::DivisionByZero("exact bracket denominator vanishes".into()))?;
    Ok(Evaluation::new(lhs.clone(), rhs)
        .with_check(Check::new("other sign of sqrt(a)", flipped, lhs))
        .with_exact(ExactCheck::new("rational sum = rational product", exact_lhs, exact_rhs)))
}

fn exact_div(x: &GaussRational, y: &GaussRational) -> Result<GaussRational> {
    (x / y).ok_or_else(|| Error::DivisionByZero("zero parameter".into()))
}

/// Lower parameters of the terminating sum must not vanish before index `n`.
fn jackson_lowers_ok(p: &ParameterSet) -> bool {
    if !nome_ok(p) || p.integer("n") < 0 {
        return false;
    }
    let n = p.integer("n");
    let Ok((companion, inverse)) = jackson_extra(p) else {
        return false;
    };
    let q = q_of(p);
    let qa = q * p.exact("a");
    let mut lowers = Vec::new();
    for x in [p.exact("b"), p.exact("c"), p.exact("d"), &companion, &inverse] {
        match &qa / x {
            Some(l) => lowers.push(l),
            None => return false,
        }
    }
    // (l;q)_k, k <= n, vanishes iff l q^j = 1 for some 0 <= j < n.
    let lowers_ok = lowers.iter().all(|l| n == 0 || avoids_q_powers(p, l, 0, n - 1));
    // (sqrt(a);q)_k (-sqrt(a);q)_k = (a;q^2)_k and the kernel needs a != 1.
    let a = p.exact("a");
    let root_ok = n == 0 || {
        let q2 = q.pow(2).expect("nonzero q");
        let mut v = a.clone();
        let mut ok = true;
        for _ in 0..n {
            ok &= v != GaussRational::one();
            v = &v * &q2;
        }
        ok
    };
    lowers_ok && root_ok && *a != GaussRational::one()
}

const JACKSON_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "0<|q|<1", check: nome_ok },
    Constraint { text: "n >= 0", check: |p| p.integer("n") >= 0 },
    Constraint { text: "no lower parameter vanishes before index n", check: jackson_lowers_ok },
    Constraint {
        text: "qa/b, qa/c, qa/d, qa/bcd not in {1, q^-1, ..., q^(1-n)}",
        check: |p| {
            let n = p.integer("n");
            n <= 0
                || PHI65_DEN.iter().all(|e| match mono(p, e) {
                    Some(x) => avoids_q_powers(p, &x, 0, n - 1),
                    None => false,
                })
        },
    },
];

fn jackson_sample(d: &mut Draw) -> ParameterSet {
    let n = d.integer(0, 15);
    let mut last = ParameterSet::new();
    for _ in 0..1000 {
        last = ParameterSet::new()
            .with("q", draw_q(d))
            .with("a", d.open(0.25, 3.0))
            .with("b", d.open(0.5, 3.0))
            .with("c", d.open(0.5, 3.0))
            .with("d", d.open(0.5, 3.0))
            .with("n", n);
        if JACKSON_CONSTRAINTS.iter().all(|c| (c.check)(&last)) {
            break;
        }
    }
    last
}

// Nonterminating 8phi7.

const JNT_ARG: &str = "qa^2/bcde";
const JNT_B1_NUM: [&str; 10] = ["qa", "c", "d", "e", "f", "qb/a", "qb/c", "qb/d", "qb/e", "qb/f"];
const JNT_B1_DEN: [&str; 10] = ["qa/b", "qa/c", "qa/d", "qa/e", "qa/f", "bc/a", "bd/a", "be/a", "bf/a", "b^2q/a"];
const JNT_B2_NUM: [&str; 8] = ["qa", "b/a", "qa/cd", "qa/ce", "qa/cf", "qa/de", "qa/df", "qa/ef"];
const JNT_B2_DEN: [&str; 8] = ["qa/c", "qa/d", "qa/e", "qa/f", "bc/a", "bd/a", "be/a", "bf/a"];

/// The parameter set with `f = qa^2/bcde` added.
fn with_f(p: &ParameterSet) -> Result<ParameterSet> {
    let f = mono(p, JNT_ARG).ok_or_else(|| Error::DivisionByZero("bcde = 0".into()))?;
    Ok(p.clone().with("f", f))
}

fn jnt_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let pf = with_f(p)?;
    let v = QVals::new(&pf, ctx)?;
    let q = v.qc.q.clone();
    let a = v.m("a")?;
    let root = v.sqrt("a")?;
    let rest = v.all(&["b", "c", "d", "e", "f"])?;
    let lhs = v.vwp(&a, &root, &rest, &q)?;
    let flipped = v.vwp(&a, &-&root, &rest, &q)?;

    let big_a = v.m("b^2/a")?;
    let second_rest = v.all(&["b", "bc/a", "bd/a", "be/a", "bf/a"])?;
    let inner = v.vwp(&big_a, &principal_sqrt(&big_a), &second_rest, &q)?;
    let b1 = v.bracket(&JNT_B1_NUM, &JNT_B1_DEN, QIndex::Infinite)?;
    let b2 = v.bracket(&JNT_B2_NUM, &JNT_B2_DEN, QIndex::Infinite)?;
    let rhs = inner.times(&b1).scaled(&v.m("b/a")?).plus(&b2);
    Ok(Evaluation::new(lhs.clone(), rhs).with_check(Check::new("other sign of sqrt(a)", flipped, lhs)))
}

const JNT_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "0<|q|<1", check: nome_ok },
    Constraint { text: "a, b^2/a not integer powers of q^2", check: |p| sqrt_pair_ok(p, &["a", "b^2/a"]) },
    Constraint {
        text: "qa/b, qa/c, qa/d, qa/e, qa/f not in {1, q^-1, q^-2, ...} with f = qa^2/bcde",
        check: |p| with_f(p).is_ok_and(|pf| no_poles(&pf, &["qa/b", "qa/c", "qa/d", "qa/e", "qa/f"])),
    },
    Constraint {
        text: "qb/a, qb/c, qb/d, qb/e, qb/f, bc/a, bd/a, be/a, bf/a, b^2q/a not in {1, q^-1, q^-2, ...}",
        check: |p| {
            with_f(p).is_ok_and(|pf| {
                no_poles(&pf, &["qb/a", "qb/c", "qb/d", "qb/e", "qb/f", "bc/a", "bd/a", "be/a", "bf/a", "b^2q/a"])
            })
        },
    },
];

fn jnt_sample(d: &mut Draw) -> ParameterSet {
    let mut last = ParameterSet::new();
    for _ in 0..1000 {
        last = ParameterSet::new()
            .with("q", draw_q(d))
            .with("a", d.open(0.25, 3.0))
            .with("b", d.open(0.5, 3.0))
            .with("c", d.open(0.5, 3.0))
            .with("d", d.open(0.5, 3.0))
            .with("e", d.open(0.5, 3.0));
        if JNT_CONSTRAINTS.iter().all(|c| (c.check)(&last)) {
            break;
        }
    }
    last
}

// Omega and Theta: the k >= 0 and k < 0 halves of the 6psi6 with centre
// cdef/a and uppers cde/a, cdf/a, cef/a, def/a.

const SPLIT_ARG: &str = "qa^2/cdef";

/// `sum_{k>=0} (q sqrt(A), -q sqrt(A), cde/a, cdf/a, cef/a, def/a)_k /
/// (sqrt(A), -sqrt(A), qf, qe, qd, qc)_k (qa^2/cdef)^k`, `A = cdef/a`.
pub fn omega_raw(p: &ParameterSet, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let v = QVals::new(p, ctx)?;
    let q = &v.qc.q;
    let root = v.sqrt("cdef/a")?;
    let qr = q * &root;
    let mut uppers = vec![qr.clone(), -&qr];
    uppers.extend(v.all(&["cde/a", "cdf/a", "cef/a", "def/a"])?);
    let mut lowers = vec![root.clone(), -&root];
    lowers.extend(v.all(&["qf", "qe", "qd", "qc"])?);
    v.unilateral(uppers, lowers, v.m(SPLIT_ARG)?)
}

/// `[q, qa/c, qa/d, qa/e, qa/f, qcdef/a / qa, qc, qd, qe, qf, qa^2/cdef]_inf
/// 8phi7(a; qa^2/cdef, c, d, e, f; q, q)`.
pub fn omega_closed(p: &ParameterSet, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let v = QVals::new(p, ctx)?;
    let bracket = v.bracket(
        &["q", "qa/c", "qa/d", "qa/e", "qa/f", "qcdef/a"],
        &["qa", "qc", "qd", "qe", "qf", "qa^2/cdef"],
        QIndex::Infinite,
    )?;
    let a = v.m("a")?;
    let series = v.vwp(&a, &v.sqrt("a")?, &v.all(&["qa^2/cdef", "c", "d", "e", "f"])?, &v.qc.q)?;
    Ok(series.times(&bracket))
}

/// Rational prefactor of `Theta`.
fn theta_prefactor(p: &ParameterSet) -> Result<GaussRational> {
    let one = GaussRational::one();
    let m = |e: &str| mono(p, e).ok_or_else(|| Error::DivisionByZero(format!("{e} has a zero denominator")));
    let mut num = m(SPLIT_ARG)?;
    for e in ["q^2a/cdef", "1/c", "1/d", "1/e", "1/f"] {
        num = &num * &(&one - &m(e)?);
    }
    let mut den = one.clone();
    for e in ["a/cdef", "qa/cde", "qa/cdf", "qa/cef", "qa/def"] {
        den = &den * &(&one - &m(e)?);
    }
    (&num / &den).ok_or_else(|| Error::DivisionByZero("Theta prefactor denominator vanishes".into()))
}

/// `Theta` as the reflected sum: prefactor times
/// `sum_{k>=0} (q^2 r, -q^2 r, q/c, q/d, q/e, q/f)_k /
/// (q r, -q r, q^2a/def, q^2a/cef, q^2a/cdf, q^2a/cde)_k (qa^2/cdef)^k`,
/// `r = sqrt(a/cdef)`.
pub fn theta_raw(p: &ParameterSet, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let v = QVals::new(p, ctx)?;
    let q = &v.qc.q;
    let r = v.sqrt("a/cdef")?;
    let qr = q * &r;
    let q2r = q * &qr;
    let mut uppers = vec![q2r.clone(), -&q2r];
    uppers.extend(v.all(&["q/c", "q/d", "q/e", "q/f"])?);
    let mut lowers = vec![qr.clone(), -&qr];
    lowers.extend(v.all(&["q^2a/def", "q^2a/cef", "q^2a/cdf", "q^2a/cde"])?);
    let series = v.unilateral(uppers, lowers, v.m(SPLIT_ARG)?)?;
    Ok(series.scaled(&theta_prefactor(p)?.to_complex(v.prec())))
}

/// `Theta` in closed form: prefactor times an infinite bracket times
/// `8phi7(q^2a^3/c^2d^2e^2f^2; qa^2/cdef, qa/cde, qa/cdf, qa/cef, qa/def; q, q)`.
pub fn theta_closed(p: &ParameterSet, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let v = QVals::new(p, ctx)?;
    let bracket = v.bracket(
        &["q", "q^3a/cdef", "q^2a^2/c^2def", "q^2a^2/cd^2ef", "q^2a^2/cde^2f", "q^2a^2/cdef^2"],
        &["q^2a/cde", "q^2a/cdf", "q^2a/cef", "q^2a/def", "qa^2/cdef", "q^3a^3/c^2d^2e^2f^2"],
        QIndex::Infinite,
    )?;
    let big_a = v.m("q^2a^3/c^2d^2e^2f^2")?;
    let rest = v.all(&["qa^2/cdef", "qa/cde", "qa/cdf", "qa/cef", "qa/def"])?;
    let series = v.vwp(&big_a, &principal_sqrt(&big_a), &rest, &v.qc.q)?;
    Ok(series.times(&bracket).scaled(&theta_prefactor(p)?.to_complex(v.prec())))
}

const SPLIT_NUM: [&str; 9] = ["q", "qa/cd", "qa/ce", "qa/cf", "qa/de", "qa/df", "qa/ef", "qa/cdef", "qcdef/a"];
const SPLIT_DEN: [&str; 9] = ["qc", "qd", "qe", "qf", "qa/cde", "qa/cdf", "qa/cef", "qa/def", "qa^2/cdef"];

fn omega_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    Ok(Evaluation::new(omega_raw(p, ctx)?, omega_closed(p, ctx)?))
}

fn theta_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    Ok(Evaluation::new(theta_raw(p, ctx)?, theta_closed(p, ctx)?))
}

fn split_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = QVals::new(p, ctx)?;
    let lhs = v.bracket(&SPLIT_NUM, &SPLIT_DEN, QIndex::Infinite)?;
    let rhs = omega_raw(p, ctx)?.plus(&theta_raw(p, ctx)?);
    let closed = omega_closed(p, ctx)?.plus(&theta_closed(p, ctx)?);

    let q = &v.qc.q;
    let root = v.sqrt("cdef/a")?;
    let qr = q * &root;
    let mut uppers = vec![qr.clone(), -&qr];
    uppers.extend(v.all(&["cde/a", "cdf/a", "cef/a", "def/a"])?);
    let mut lowers = vec![root.clone(), -&root];
    lowers.extend(v.all(&["qf", "qe", "qd", "qc"])?);
    let psi = sum_q_series(&QSeriesSpec::psi(uppers, lowers, v.m(SPLIT_ARG)?)?, &v.qc)?;
    Ok(Evaluation::new(lhs.clone(), rhs)
        .with_check(Check::new("bilateral 6psi6 summed directly", psi, lhs.clone()))
        .with_check(Check::new("closed Omega + closed Theta", closed, lhs)))
}

/// Every lower parameter and bracket denominator met by `Omega`, `Theta`
/// and their closed forms.
const SPLIT_POLES: [&str; 19] = [
    "qc",
    "qd",
    "qe",
    "qf",
    "qa",
    "qa/c",
    "qa/d",
    "qa/e",
    "qa/f",
    "cdef/a",
    "qa^2/cdef",
    "q^2a/cde",
    "q^2a/cdf",
    "q^2a/cef",
    "q^2a/def",
    "q^2a^2/c^2def",
    "q^2a^2/cd^2ef",
    "q^2a^2/cde^2f",
    "q^2a^2/cdef^2",
];

const SPLIT_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "0<|q|<1", check: nome_ok },
    Constraint { text: "|qa^2/cdef|<1", check: |p| modulus_below_one(p, SPLIT_ARG) },
    Constraint {
        text: "a, cdef/a, q^2a^3/c^2d^2e^2f^2 not integer powers of q^2",
        check: |p| sqrt_pair_ok(p, &["a", "cdef/a", "q^2a^3/c^2d^2e^2f^2"]),
    },
    Constraint {
        text: "lower parameters and bracket denominators not in {1, q^-1, q^-2, ...}",
        check: |p| no_poles(p, &SPLIT_POLES) && no_poles(p, &["q^3a^3/c^2d^2e^2f^2", "q^2a/cdef"]),
    },
    Constraint {
        text: "a/cdef, qa/cde, qa/cdf, qa/cef, qa/def != 1",
        check: |p| {
            ["a/cdef", "qa/cde", "qa/cdf", "qa/cef", "qa/def"]
                .iter()
                .all(|e| mono(p, e).is_some_and(|x| x != GaussRational::one()))
        },
    },
];

fn split_sample(d: &mut Draw) -> ParameterSet {
    sample_until(d, SPLIT_CONSTRAINTS, SPLIT_ARG, |d| {
        ParameterSet::new()
            .with("q", draw_q(d))
            .with("a", d.open(0.25, 3.0))
            .with("c", d.open(0.5, 3.0))
            .with("d", d.open(0.5, 3.0))
            .with("e", d.open(0.5, 3.0))
            .with("f", d.open(0.5, 3.0))
    })
}

const SCHEMA_ABCDEQ: &[ParamSpec] = &[cplx("a"), cplx("b"), cplx("c"), cplx("d"), cplx("e"), nome("q")];
const SCHEMA_ABCDQ: &[ParamSpec] = &[cplx("a"), cplx("b"), cplx("c"), cplx("d"), nome("q")];
const SCHEMA_ABCDQN: &[ParamSpec] = &[cplx("a"), cplx("b"), cplx("c"), cplx("d"), nome("q"), int("n")];
const SCHEMA_ACDEFQ: &[ParamSpec] = &[cplx("a"), cplx("c"), cplx("d"), cplx("e"), cplx("f"), nome("q")];

pub(crate) fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "bailey-6psi6",
            title: "Bailey's 6psi6 sum",
            formula: "6psi6(q sqrt(a),-q sqrt(a),b,c,d,e; sqrt(a),-sqrt(a),qa/b,qa/c,qa/d,qa/e; q, qa^2/bcde) = \
                      [q,qa,q/a,qa/bc,qa/bd,qa/be,qa/cd,qa/ce,qa/de / q/b,q/c,q/d,q/e,qa/b,qa/c,qa/d,qa/e,qa^2/bcde]_inf",
            schema: SCHEMA_ABCDEQ,
            constraints: BAILEY_CONSTRAINTS,
            ranges: "q in (0.1,0.8); a in (0.25,3); b,c,d,e in (0.5,3); |qa^2/bcde| <= 0.8",
            sampler: bailey_sample,
            evaluator: bailey_eval,
        },
        IdentityCase {
            id: "phi65",
            title: "Very-well-poised 6phi5 sum",
            formula: "6phi5(a,q sqrt(a),-q sqrt(a),b,c,d; sqrt(a),-sqrt(a),qa/b,qa/c,qa/d; q, qa/bcd) = \
                      [qa,qa/bc,qa/bd,qa/cd / qa/b,qa/c,qa/d,qa/bcd]_inf",
            schema: SCHEMA_ABCDQ,
            constraints: PHI65_CONSTRAINTS,
            ranges: "q in (0.1,0.8); a in (0.25,3); b,c,d in (0.5,3); |qa/bcd| <= 0.8",
            sampler: phi65_sample,
            evaluator: phi65_eval,
        },
        IdentityCase {
            id: "jackson-8phi7",
            title: "Jackson's terminating 8phi7 sum",
            formula: "8phi7(a,q sqrt(a),-q sqrt(a),b,c,d,q^(1+n)a^2/bcd,q^-n; sqrt(a),-sqrt(a),qa/b,qa/c,qa/d,q^-n bcd/a,q^(1+n)a; q, q) = \
                      [qa,qa/bc,qa/bd,qa/cd / qa/b,qa/c,qa/d,qa/bcd]_n",
            schema: SCHEMA_ABCDQN,
            constraints: JACKSON_CONSTRAINTS,
            ranges: "q in (0.1,0.8); a in (0.25,3); b,c,d in (0.5,3); n in 0..=15",
            sampler: jackson_sample,
            evaluator: jackson_eval,
        },
        IdentityCase {
            id: "jackson-nt",
            title: "Nonterminating 8phi7 sum",
            formula: "8phi7(a; b,c,d,e,f; q, q) = (b/a) [qa,c,d,e,f,qb/a,qb/c,qb/d,qb/e,qb/f / qa/b,qa/c,qa/d,qa/e,qa/f,bc/a,bd/a,be/a,bf/a,b^2q/a]_inf \
                      8phi7(b^2/a; b,bc/a,bd/a,be/a,bf/a; q, q) + [qa,b/a,qa/cd,qa/ce,qa/cf,qa/de,qa/df,qa/ef / qa/c,qa/d,qa/e,qa/f,bc/a,bd/a,be/a,bf/a]_inf, \
                      f = qa^2/bcde",
            schema: SCHEMA_ABCDEQ,
            constraints: JNT_CONSTRAINTS,
            ranges: "q in (0.1,0.8); a in (0.25,3); b,c,d,e in (0.5,3); f = qa^2/bcde",
            sampler: jnt_sample,
            evaluator: jnt_eval,
        },
        IdentityCase {
            id: "omega",
            title: "Nonnegative half of a split 6psi6",
            formula: "sum_{k>=0} [q sqrt(A),-q sqrt(A),cde/a,cdf/a,cef/a,def/a / sqrt(A),-sqrt(A),qf,qe,qd,qc]_k (qa^2/cdef)^k = \
                      [q,qa/c,qa/d,qa/e,qa/f,qcdef/a / qa,qc,qd,qe,qf,qa^2/cdef]_inf 8phi7(a; qa^2/cdef,c,d,e,f; q, q), A = cdef/a",
            schema: SCHEMA_ACDEFQ,
            constraints: SPLIT_CONSTRAINTS,
            ranges: "q in (0.1,0.8); a in (0.25,3); c,d,e,f in (0.5,3); |qa^2/cdef| <= 0.8",
            sampler: split_sample,
            evaluator: omega_eval,
        },
        IdentityCase {
            id: "theta",
            title: "Negative half of a split 6psi6",
            formula: "P sum_{k>=0} [q^2 r,-q^2 r,q/c,q/d,q/e,q/f / q r,-q r,q^2a/def,q^2a/cef,q^2a/cdf,q^2a/cde]_k (qa^2/cdef)^k = \
                      P [q,q^3a/cdef,q^2a^2/c^2def,q^2a^2/cd^2ef,q^2a^2/cde^2f,q^2a^2/cdef^2 / \
                      q^2a/cde,q^2a/cdf,q^2a/cef,q^2a/def,qa^2/cdef,q^3a^3/c^2d^2e^2f^2]_inf \
                      8phi7(q^2a^3/c^2d^2e^2f^2; qa^2/cdef,qa/cde,qa/cdf,qa/cef,qa/def; q, q), r = sqrt(a/cdef), \
                      P = (qa^2/cdef)(1-q^2a/cdef)(1-1/c)(1-1/d)(1-1/e)(1-1/f) / ((1-a/cdef)(1-qa/cde)(1-qa/cdf)(1-qa/cef)(1-qa/def))",
            schema: SCHEMA_ACDEFQ,
            constraints: SPLIT_CONSTRAINTS,
            ranges: "q in (0.1,0.8); a in (0.25,3); c,d,e,f in (0.5,3); |qa^2/cdef| <= 0.8",
            sampler: split_sample,
            evaluator: theta_eval,
        },
        IdentityCase {
            id: "bailey-split",
            title: "6psi6 with centre cdef/a as Omega + Theta",
            formula: "[q,qa/cd,qa/ce,qa/cf,qa/de,qa/df,qa/ef,qa/cdef,qcdef/a / qc,qd,qe,qf,qa/cde,qa/cdf,qa/cef,qa/def,qa^2/cdef]_inf \
                      = Omega(a,c,d,e,f) + Theta(a,c,d,e,f)",
            schema: SCHEMA_ACDEFQ,
            constraints: SPLIT_CONSTRAINTS,
            ranges: "q in (0.1,0.8); a in (0.25,3); c,d,e,f in (0.5,3); |qa^2/cdef| <= 0.8",
            sampler: split_sample,
            evaluator: split_eval,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::find;
    use rug::Rational;

    fn r(n: i64, d: i64) -> GaussRational {
        GaussRational::real(Rational::from((n, d)))
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(30).unwrap()
    }

    fn agree(e: &Evaluation, tol: f64) {
        let d = e.lhs.value.rel_diff(&e.rhs.value);
        assert!(d < tol, "lhs {} rhs {} ({d})", e.lhs.value, e.rhs.value);
        for c in &e.checks {
            let d = c.left.value.rel_diff(&c.right.value);
            assert!(d < tol, "{}: {} vs {} ({d})", c.label, c.left.value, c.right.value);
        }
        assert!(e.exact.iter().all(ExactCheck::holds));
    }

    #[test]
    fn bailey_sample_point() {
        let p = ParameterSet::new()
            .with("q", r(1, 2))
            .with("a", r(9, 4))
            .with("b", r(3, 2))
            .with("c", r(3, 2))
            .with("d", r(3, 2))
            .with("e", r(3, 2));
        agree(&find("bailey-6psi6").unwrap().evaluate(&p, &ctx()).unwrap(), 1e-25);
    }

    #[test]
    fn bailey_with_e_equal_a_is_phi65() {
        let base = ParameterSet::new().with("q", r(3, 8)).with("a", r(5, 4)).with("b", r(7, 4)).with("c", r(3, 2)).with("d", r(9, 8));
        let phi = find("phi65").unwrap().evaluate(&base, &ctx()).unwrap();
        let p = base.clone().with("e", r(5, 4));
        let psi = find("bailey-6psi6").unwrap().evaluate(&p, &ctx()).unwrap();
        assert!(psi.lhs.value.rel_diff(&phi.lhs.value) < 1e-25);
        assert!(psi.rhs.value.rel_diff(&phi.rhs.value) < 1e-25);
    }

    #[test]
    fn phi65_terminating_by_finite_sum() {
        // b = q^-3 terminates after four terms; compare with the exact sum.
        let q = r(1, 3);
        let p = ParameterSet::new().with("q", q.clone()).with("a", r(5, 4)).with("b", q.pow(-3).unwrap()).with("c", r(3, 2)).with("d", r(7, 8));
        let e = find("phi65").unwrap().evaluate(&p, &ctx()).unwrap();
        assert_eq!(e.lhs.terms_used, 4);
        let a = p.exact("a").clone();
        let num = vec![a.clone(), p.exact("b").clone(), p.exact("c").clone(), p.exact("d").clone()];
        let mut den: Vec<GaussRational> = num[1..].iter().map(|x| (&(&q * &a) / x).unwrap()).collect();
        den.push(q.clone());
        let z = mono(&p, PHI65_ARG).unwrap();
        let exact = q_sum(&num, &den, &q, &z, 3, Some(&a)).unwrap();
        assert!(e.lhs.value.rel_diff(&exact.to_complex(200)) < 1e-28);
        agree(&e, 1e-25);
    }

    #[test]
    fn jackson_small_n() {
        for n in 0..=2 {
            let p = ParameterSet::new()
                .with("q", r(1, 2))
                .with("a", r(3, 4))
                .with("b", r(5, 4))
                .with("c", r(3, 2))
                .with("d", r(7, 8))
                .with("n", n);
            let e = find("jackson-8phi7").unwrap().evaluate(&p, &ctx()).unwrap();
            agree(&e, 1e-25);
            assert_eq!(e.exact.len(), 1);
            if n == 0 {
                assert_eq!(e.exact[0].left, GaussRational::one());
            }
        }
    }

    #[test]
    fn jackson_large_n_small_q() {
        let p = ParameterSet::new()
            .with("q", r(26, 256))
            .with("a", r(3, 4))
            .with("b", r(5, 4))
            .with("c", r(3, 2))
            .with("d", r(7, 8))
            .with("n", 15);
        agree(&find("jackson-8phi7").unwrap().evaluate(&p, &ctx()).unwrap(), 1e-22);
    }

    #[test]
    fn nonterminating_jackson_point() {
        let p = ParameterSet::new()
            .with("q", r(1, 3))
            .with("a", r(3, 2))
            .with("b", r(5, 8))
            .with("c", r(7, 4))
            .with("d", r(9, 8))
            .with("e", r(5, 4));
        agree(&find("jackson-nt").unwrap().evaluate(&p, &ctx()).unwrap(), 1e-22);
    }

    #[test]
    fn split_halves_point() {
        let p = ParameterSet::new()
            .with("q", r(1, 3))
            .with("a", r(3, 4))
            .with("c", r(5, 4))
            .with("d", r(3, 2))
            .with("e", r(7, 8))
            .with("f", r(9, 8));
        for id in ["omega", "theta", "bailey-split"] {
            agree(&find(id).unwrap().evaluate(&p, &ctx()).unwrap(), 1e-22);
        }
    }

    #[test]
    fn theta_vanishes_at_c_one() {
        let p = ParameterSet::new()
            .with("q", r(1, 3))
            .with("a", r(3, 4))
            .with("c", 1)
            .with("d", r(3, 2))
            .with("e", r(7, 8))
            .with("f", r(9, 8));
        let c = ctx();
        assert!(theta_raw(&p, &c).unwrap().value.is_zero());
        assert!(theta_closed(&p, &c).unwrap().value.is_zero());
    }

    #[test]
    fn q_power_coincidences() {
        let p = ParameterSet::new().with("q", r(1, 2)).with("x", 8);
        assert!(!avoids_q_powers(&p, &r(8, 1), 0, 5));
        assert!(avoids_q_powers(&p, &r(8, 1), 4, 10));
        assert!(sqrt_pair_ok(&p, &["x"]));
        let p = ParameterSet::new().with("q", r(1, 2)).with("x", 4);
        assert!(!sqrt_pair_ok(&p, &["x"]));
        let p = ParameterSet::new().with("q", r(1, 2)).with("x", r(1, 2));
        assert!(sqrt_pair_ok(&p, &["x"]));
        assert!(!no_poles(&ParameterSet::new().with("q", r(1, 2)).with("x", 1), &["x"]));
    }

    #[test]
    fn samplers_meet_constraints() {
        for case in cases() {
            for i in 0..5 {
                let p = (case.sampler)(&mut Draw::new(11, case.id, i));
                assert!(case.violations(&p).is_empty(), "{} sample {i}: {p}", case.id);
            }
        }
    }
}
