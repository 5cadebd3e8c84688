//! Ordinary hypergeometric entries of the catalog, and the `Phi` building
//! blocks their checks share.

use super::exact::{pfq_sum, pochhammer_ratio};
use super::expr::lin;
use super::{cplx, int, Check, Constraint, Draw, Evaluation, ExactCheck, IdentityCase, ParamSpec, ParameterSet};
use crate::error::{Error, Result};
use crate::numerics::{gamma_ratio, pochhammer, ComplexValue, GaussRational, PrecisionContext};
use crate::series::{rounding_error, sum_series, SeriesResult, SeriesSpec};

/// `pFq(uppers; lowers; 1)` through the series engine.
fn at_one(uppers: Vec<ComplexValue>, lowers: Vec<ComplexValue>, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let z = ComplexValue::one(ctx.bits());
    sum_series(&SeriesSpec::unilateral(uppers, lowers, z)?, ctx)
}

/// Gamma ratio as a closed result. Summed log-gammas lose roughly
/// `|ln Gamma(x)|` ulps each, which goes into the error estimate.
fn gammas(numer: &[ComplexValue], denom: &[ComplexValue], ctx: &PrecisionContext) -> Result<SeriesResult> {
    let value = gamma_ratio(numer, denom, ctx)?;
    let growth: f64 = numer
        .iter()
        .chain(denom)
        .map(|x| {
            let m = x.abs_f64();
            (m + 1.0) * (m + 2.0).ln()
        })
        .sum();
    let err = rounding_error(&value) * (4.0 + growth);
    Ok(SeriesResult { err_estimate: err, ..SeriesResult::closed(value) })
}

fn neg(r: &SeriesResult) -> SeriesResult {
    SeriesResult { value: -&r.value, ..r.clone() }
}

/// `Phi(a,b;c,d) = sum_k Gamma(a+k) Gamma(b+k) Gamma(a+b+c+d-1+k) /
/// (k! Gamma(a+b+c+k) Gamma(a+b+d+k))`, summed as a gamma prefactor times a
/// balanced `3F2` at unit argument.
pub fn phi_sum(
    a: &ComplexValue,
    b: &ComplexValue,
    c: &ComplexValue,
    d: &ComplexValue,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    let ab = a + b;
    let s1 = &(&(&ab + c) + d) - 1;
    let l1 = &ab + c;
    let l2 = &ab + d;
    let pre = gammas(&[a.clone(), b.clone(), s1.clone()], &[l1.clone(), l2.clone()], ctx)?;
    let series = at_one(vec![a.clone(), b.clone(), s1], vec![l1, l2], ctx)?;
    Ok(series.times(&pre))
}

/// `3F2(1, a+d, b+d; 1+d, a+b+c+d; 1) / (d (a+b+c+d-1))`, which equals
/// `Phi(c,d;a,b)`.
pub fn phi_as_3f2(
    a: &ComplexValue,
    b: &ComplexValue,
    c: &ComplexValue,
    d: &ComplexValue,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    let prec = ctx.bits();
    let s = &(&(a + b) + c) + d;
    let factor = &(d * &(&s - 1)).recip() * &ComplexValue::one(prec);
    let series = at_one(vec![ComplexValue::one(prec), a + d, b + d], vec![d + 1, s], ctx)?;
    Ok(series.scaled(&factor))
}

/// `Gamma(a) Gamma(b) Gamma(c) Gamma(d) Gamma(a+b+c+d-1) /
/// (Gamma(a+c) Gamma(a+d) Gamma(b+c) Gamma(b+d))`.
pub fn theorem_rhs(
    a: &ComplexValue,
    b: &ComplexValue,
    c: &ComplexValue,
    d: &ComplexValue,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    let s1 = &(&(&(a + b) + c) + d) - 1;
    gammas(
        &[a.clone(), b.clone(), c.clone(), d.clone(), s1],
        &[a + c, a + d, b + c, b + d],
        ctx,
    )
}

/// Both sides of the nonterminating Saalschuetz sum rebuilt from `Phi`: with
/// `C = d-a-b`, `D = c-a-b` and
/// `g = Gamma(c) Gamma(d) / (Gamma(a) Gamma(b) Gamma(c+d-a-b-1))`, returns
/// `(g Phi(a,b;C,D), g (rhs(a,b,C,D) - Phi(C,D;a,b)))`.
pub fn saalschuetz_substitution(
    a: &ComplexValue,
    b: &ComplexValue,
    c: &ComplexValue,
    d: &ComplexValue,
    ctx: &PrecisionContext,
) -> Result<(SeriesResult, SeriesResult)> {
    let ab = a + b;
    let cc = d - &ab;
    let dd = c - &ab;
    let s1 = &(&(c + d) - &ab) - 1;
    let scale = gammas(&[c.clone(), d.clone()], &[a.clone(), b.clone(), s1], ctx)?;
    let left = phi_sum(a, b, &cc, &dd, ctx)?.times(&scale);
    let y = phi_as_3f2(a, b, &cc, &dd, ctx)?;
    let z = theorem_rhs(a, b, &cc, &dd, ctx)?;
    let right = z.plus(&neg(&y)).times(&scale);
    Ok((left, right))
}

/// Closed form of Dixon's well-poised `3F2(a, b, c; 1+a-b, 1+a-c; 1)`.
fn dixon_rhs(a: &ComplexValue, b: &ComplexValue, c: &ComplexValue, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let h = a / 2;
    let hb = &h - b;
    let hc = &h - c;
    let hbc = &hb - c;
    gammas(
        &[&h + 1, &(a - b) + 1, &(a - c) + 1, &hbc + 1],
        &[a + 1, &hb + 1, &hc + 1, &(&(a - b) - c) + 1],
        ctx,
    )
}

// Constraint helpers over exact parameter values.

fn off_poles(p: &ParameterSet, exprs: &[&str]) -> bool {
    exprs.iter().all(|e| lin(p, e).nonpositive_integer().is_none())
}

fn re_gt(p: &ParameterSet, expr: &str, bound: i64) -> bool {
    lin(p, expr).re > bound
}

/// True unless `expr` is a positive integer.
fn not_positive_integer(p: &ParameterSet, exprs: &[&str]) -> bool {
    exprs.iter().all(|e| {
        let v = lin(p, e);
        !(v.is_real() && v.re.is_integer() && v.re > 0)
    })
}

/// Lower parameter `expr` of a series terminating after `n` terms: its
/// factors `expr + j`, `j < n`, must not vanish.
fn lower_ok(p: &ParameterSet, expr: &str) -> bool {
    let n = p.integer("n");
    match lin(p, expr).nonpositive_integer() {
        Some(m) => m as i64 >= n,
        None => true,
    }
}

fn n_nonnegative(p: &ParameterSet) -> bool {
    p.integer("n") >= 0 && p.exact("n").re.is_integer() && p.exact("n").is_real()
}

// Parameter access in evaluators.

struct Vals<'a> {
    p: &'a ParameterSet,
    prec: u32,
}

impl Vals<'_> {
    fn new<'a>(p: &'a ParameterSet, ctx: &PrecisionContext) -> Vals<'a> {
        Vals { p, prec: ctx.bits() }
    }

    fn v(&self, expr: &str) -> ComplexValue {
        lin(self.p, expr).to_complex(self.prec)
    }

    fn all(&self, exprs: &[&str]) -> Vec<ComplexValue> {
        exprs.iter().map(|e| self.v(e)).collect()
    }

    fn exact(&self, exprs: &[&str]) -> Vec<GaussRational> {
        exprs.iter().map(|e| lin(self.p, e)).collect()
    }
}

fn exact_or(v: Option<GaussRational>, what: &str) -> Result<GaussRational> {
    v.ok_or_else(|| Error::DivisionByZero(format!("exact {what} hits a vanishing denominator")))
}

fn pochhammers(v: &Vals, numer: &[&str], denom: &[&str], n: i64, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let mut acc = ComplexValue::one(v.prec);
    for e in numer {
        acc = &acc * &pochhammer(&v.v(e), n, ctx)?;
    }
    for e in denom {
        acc = &acc / &pochhammer(&v.v(e), n, ctx)?;
    }
    Ok(SeriesResult::closed(acc))
}

// Pfaff-Saalschuetz.

fn saalschuetz_sample(d: &mut Draw) -> ParameterSet {
    let mut p = ParameterSet::new()
        .with("a", d.open(0.0, 4.0))
        .with("b", d.open(0.0, 4.0))
        .with("c", d.open(0.0, 4.0))
        .with("n", d.integer(0, 30));
    d.complexify(&mut p, &["a", "b"]);
    p
}

fn saalschuetz_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = Vals::new(p, ctx);
    let n = p.integer("n");
    let uppers = ["a", "b", "-n"];
    let lowers = ["c", "1+a+b-c-n"];
    let lhs = at_one(v.all(&uppers), v.all(&lowers), ctx)?;
    let rhs = pochhammers(&v, &["c-a", "c-b"], &["c", "c-a-b"], n, ctx)?;
    let exact_lhs = exact_or(pfq_sum(&v.exact(&uppers), &v.exact(&lowers), &GaussRational::one(), n as u64), "sum")?;
    let exact_rhs = exact_or(pochhammer_ratio(&v.exact(&["c-a", "c-b"]), &v.exact(&["c", "c-a-b"]), n as u64), "product")?;
    Ok(Evaluation::new(lhs, rhs).with_exact(ExactCheck::new("rational sum = rational product", exact_lhs, exact_rhs)))
}

// Nonterminating Saalschuetz.

fn saal_nt_sample(d: &mut Draw) -> ParameterSet {
    let mut p = ParameterSet::new()
        .with("a", d.open(0.0, 4.0))
        .with("b", d.open(0.0, 4.0))
        .with("c", d.open(0.0, 4.0));
    d.complexify(&mut p, &["a", "b"]);
    let m = d.closed(14.0, 24.0);
    let dd = &lin(&p, "a+b") + &m;
    p.insert("d", dd);
    p
}

fn saal_nt_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = Vals::new(p, ctx);
    let [a, b, c, d] = [v.v("a"), v.v("b"), v.v("c"), v.v("d")];
    let lhs = at_one(v.all(&["a", "b", "c+d-a-b-1"]), v.all(&["c", "d"]), ctx)?;
    let series = at_one(v.all(&["1", "c-a", "c-b"]), v.all(&["c-a-b+1", "c+d-a-b"]), ctx)?;
    let pre = gammas(&v.all(&["c", "d"]), &v.all(&["a", "b", "c+d-a-b"]), ctx)?;
    let first = series.times(&pre).scaled(&v.v("a+b-c").recip());
    let second = gammas(&v.all(&["c", "d", "c-a-b", "d-a-b"]), &v.all(&["c-a", "c-b", "d-a", "d-b"]), ctx)?;
    let rhs = first.plus(&second);
    let (left, right) = saalschuetz_substitution(&a, &b, &c, &d, ctx)?;
    Ok(Evaluation::new(lhs.clone(), rhs.clone())
        .with_check(Check::new("scaled Phi(a,b;d-a-b,c-a-b) = left side", left, lhs))
        .with_check(Check::new("scaled symmetric sum minus Phi(d-a-b,c-a-b;a,b) = right side", right, rhs)))
}

// Dougall's 2H2.

fn dougall_sample(d: &mut Draw) -> ParameterSet {
    let mut p = ParameterSet::new()
        .with("a", d.open(0.0, 4.0))
        .with("b", d.open(0.0, 4.0))
        .with("c", d.open(0.0, 4.0));
    d.complexify(&mut p, &["a", "b"]);
    let m = d.closed(15.0, 30.0);
    let dd = &lin(&p, "a+b-c") + &m;
    p.insert("d", dd);
    p
}

fn dougall_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = Vals::new(p, ctx);
    let spec = SeriesSpec::bilateral(v.all(&["a", "b"]), v.all(&["c", "d"]), ComplexValue::one(v.prec))?;
    let lhs = sum_series(&spec, ctx)?;
    let rhs = gammas(
        &v.all(&["1-a", "1-b", "c", "d", "c+d-a-b-1"]),
        &v.all(&["c-a", "c-b", "d-a", "d-b"]),
        ctx,
    )?;
    Ok(Evaluation::new(lhs, rhs))
}

// Gauss.

fn gauss_sample(d: &mut Draw) -> ParameterSet {
    let mut p = ParameterSet::new().with("a", d.open(0.0, 4.0)).with("b", d.open(0.0, 4.0));
    d.complexify(&mut p, &["a", "b"]);
    let m = d.closed(5.0, 25.0);
    let c = &lin(&p, "a+b") + &m;
    p.insert("c", c);
    p
}

fn gauss_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = Vals::new(p, ctx);
    let lhs = at_one(v.all(&["a", "b"]), v.all(&["c"]), ctx)?;
    let rhs = gammas(&v.all(&["c", "c-a-b"]), &v.all(&["c-a", "c-b"]), ctx)?;
    Ok(Evaluation::new(lhs, rhs))
}

// Dixon.

fn dixon_sample(d: &mut Draw) -> ParameterSet {
    let mut p = ParameterSet::new().with("b", d.open(-2.0, 2.0)).with("c", d.open(-2.0, 2.0));
    let m = d.closed(5.0, 15.0);
    // 1 + a/2 - b - c = m
    let a = &lin(&p, "2b+2c-2") + &(&m * &GaussRational::from_i64(2));
    p.insert("a", a);
    d.complexify(&mut p, &["a", "b"]);
    p
}

fn dixon_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = Vals::new(p, ctx);
    let lhs = at_one(v.all(&["a", "b", "c"]), v.all(&["1+a-b", "1+a-c"]), ctx)?;
    let rhs = dixon_rhs(&v.v("a"), &v.v("b"), &v.v("c"), ctx)?;
    Ok(Evaluation::new(lhs, rhs))
}

// Symmetric Phi sum.

fn theorem_sample(d: &mut Draw) -> ParameterSet {
    let mut p = ParameterSet::new()
        .with("a", d.open(0.0, 3.0))
        .with("b", d.open(0.0, 3.0))
        .with("d", d.open(0.0, 3.0));
    // Every fourth sample takes Re(c) >= 5 so the 3F2 route for Phi(c,d;a,b)
    // is exercised alongside.
    let c = if d.index % 4 == 3 { d.closed(5.0, 8.0 - 1.0 / 256.0) } else { d.open(0.0, 3.0) };
    p.insert("c", c);
    d.complexify(&mut p, &["a", "b"]);
    p
}

fn theorem_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = Vals::new(p, ctx);
    let [a, b, c, d] = [v.v("a"), v.v("b"), v.v("c"), v.v("d")];
    let first = phi_sum(&a, &b, &c, &d, ctx)?;
    let second = phi_sum(&c, &d, &a, &b, ctx)?;
    let lhs = first.plus(&second);
    let rhs = theorem_rhs(&a, &b, &c, &d, ctx)?;
    let mut eval = Evaluation::new(lhs, rhs);
    if p.exact("c").re >= 5 {
        let alt = phi_as_3f2(&a, &b, &c, &d, ctx)?;
        eval = eval.with_check(Check::new("Phi(c,d;a,b) via 3F2(1,a+d,b+d;1+d,a+b+c+d;1)", alt, second));
    }
    Ok(eval)
}

// c = a, d = b.

fn ca_db_sample(d: &mut Draw) -> ParameterSet {
    let mut p = ParameterSet::new().with("a", d.open(0.0, 3.0)).with("b", d.open(0.0, 3.0));
    d.complexify(&mut p, &["a", "b"]);
    p
}

fn ca_db_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = Vals::new(p, ctx);
    let [a, b] = [v.v("a"), v.v("b")];
    let lhs = at_one(v.all(&["a", "b", "2a+2b-1"]), v.all(&["a+2b", "2a+b"]), ctx)?;
    let half = ComplexValue::one(v.prec) / 2;
    let rhs = gammas(&v.all(&["a", "b", "a+2b", "2a+b"]), &v.all(&["2a", "2b", "a+b", "a+b"]), ctx)?.scaled(&half);
    let scale = gammas(&v.all(&["2a+b", "a+2b"]), &v.all(&["a", "b", "2a+2b-1"]), ctx)?.scaled(&half);
    let t_lhs = phi_sum(&a, &b, &a, &b, ctx)?.plus(&phi_sum(&a, &b, &a, &b, ctx)?);
    let t_rhs = theorem_rhs(&a, &b, &a, &b, ctx)?;
    let dixon = dixon_rhs(&v.v("2a+2b-1"), &b, &a, ctx)?;
    Ok(Evaluation::new(lhs.clone(), rhs.clone())
        .with_check(Check::new("symmetric sum at (a,b,a,b), left side", t_lhs.times(&scale), lhs))
        .with_check(Check::new("symmetric sum at (a,b,a,b), right side", t_rhs.times(&scale), rhs.clone()))
        .with_check(Check::new("Dixon at (2a+2b-1, b, a)", dixon, rhs)))
}

// b = -n.

fn neg_n_sample(d: &mut Draw) -> ParameterSet {
    let mut p = ParameterSet::new()
        .with("a", d.open(0.0, 4.0))
        .with("c", d.open(0.0, 4.0))
        .with("d", d.open(0.0, 4.0))
        .with("n", d.integer(0, 20));
    d.complexify(&mut p, &["a", "c"]);
    p
}

fn neg_n_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = Vals::new(p, ctx);
    let n = p.integer("n");
    let uppers = ["a", "a+c+d-1-n", "-n"];
    let lowers = ["a+c-n", "a+d-n"];
    let lhs = at_one(v.all(&uppers), v.all(&lowers), ctx)?;
    let numer = ["1-c", "1-d"];
    let denom = ["1-a-c", "1-a-d"];
    let rhs = pochhammers(&v, &numer, &denom, n, ctx)?;
    // Pfaff-Saalschuetz with (a, b, c) -> (a, a+c+d-1-n, a+c-n).
    let saal_numer = ["c-n", "1-d"];
    let saal_denom = ["a+c-n", "1-a-d"];
    let saal = pochhammers(&v, &saal_numer, &saal_denom, n, ctx)?;
    let nn = n as u64;
    let exact_lhs = exact_or(pfq_sum(&v.exact(&uppers), &v.exact(&lowers), &GaussRational::one(), nn), "sum")?;
    let exact_rhs = exact_or(pochhammer_ratio(&v.exact(&numer), &v.exact(&denom), nn), "product")?;
    let exact_saal = exact_or(pochhammer_ratio(&v.exact(&saal_numer), &v.exact(&saal_denom), nn), "product")?;
    Ok(Evaluation::new(lhs, rhs.clone())
        .with_check(Check::new("Pfaff-Saalschuetz at (a, a+c+d-1-n, a+c-n)", saal, rhs))
        .with_exact(ExactCheck::new("rational sum = rational product", exact_lhs.clone(), exact_rhs))
        .with_exact(ExactCheck::new("rational sum = Pfaff-Saalschuetz product", exact_lhs, exact_saal)))
}

// Phi(c,d;a,b) as a 3F2.

fn phi3f2_sample(d: &mut Draw) -> ParameterSet {
    let mut p = ParameterSet::new()
        .with("a", d.open(0.0, 3.0))
        .with("b", d.open(0.0, 3.0))
        .with("c", d.closed(5.0, 9.0))
        .with("d", d.open(0.0, 3.0));
    d.complexify(&mut p, &["a", "b"]);
    p
}

fn phi3f2_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = Vals::new(p, ctx);
    let [a, b, c, d] = [v.v("a"), v.v("b"), v.v("c"), v.v("d")];
    let lhs = phi_as_3f2(&a, &b, &c, &d, ctx)?;
    let rhs = phi_sum(&c, &d, &a, &b, ctx)?;
    Ok(Evaluation::new(lhs, rhs))
}

// Splitting 2H2(1-a,1-b;1+c,1+d;1) into two Phi sums.

fn h22_sample(d: &mut Draw) -> ParameterSet {
    loop {
        let mut p = ParameterSet::new()
            .with("a", d.open(0.0, 3.0))
            .with("b", d.open(0.0, 3.0))
            .with("c", d.open(0.0, 3.0))
            .with("d", d.open(0.0, 3.0));
        if lin(&p, "a+b+c+d").re >= 2 {
            d.complexify(&mut p, &["a", "b"]);
            return p;
        }
    }
}

fn h22_eval(p: &ParameterSet, ctx: &PrecisionContext) -> Result<Evaluation> {
    let v = Vals::new(p, ctx);
    let [a, b, c, d] = [v.v("a"), v.v("b"), v.v("c"), v.v("d")];
    let cd = &c * &d;
    let lhs = phi_sum(&c, &d, &a, &b, ctx)?.plus(&phi_sum(&a, &b, &c, &d, ctx)?).scaled(&cd);
    let spec = SeriesSpec::bilateral(v.all(&["1-a", "1-b"]), v.all(&["1+c", "1+d"]), ComplexValue::one(v.prec))?;
    let rhs = sum_series(&spec, ctx)?;
    let closed = gammas(&v.all(&["a", "b", "1+c", "1+d", "a+b+c+d-1"]), &v.all(&["a+c", "a+d", "b+c", "b+d"]), ctx)?;
    Ok(Evaluation::new(lhs, rhs.clone()).with_check(Check::new("Dougall closed form", closed, rhs)))
}

const SAAL_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "n >= 0", check: n_nonnegative },
    Constraint { text: "c not in {0,-1,...,1-n}", check: |p| lower_ok(p, "c") },
    Constraint { text: "1+a+b-c-n not in {0,-1,...,1-n}", check: |p| lower_ok(p, "1+a+b-c-n") },
];

const SAAL_NT_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "Re(d-a-b)>0", check: |p| re_gt(p, "d-a-b", 0) },
    Constraint { text: "a+b-c != 0", check: |p| !lin(p, "a+b-c").is_zero() },
    Constraint {
        text: "c, d, c-a-b, d-a-b, c+d-a-b not poles of Gamma",
        check: |p| off_poles(p, &["c", "d", "c-a-b", "d-a-b", "c+d-a-b"]),
    },
];

const DOUGALL_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "Re(c+d-a-b)>1", check: |p| re_gt(p, "c+d-a-b", 1) },
    Constraint { text: "a, b not positive integers", check: |p| not_positive_integer(p, &["a", "b"]) },
    Constraint { text: "c, d not poles of Gamma", check: |p| off_poles(p, &["c", "d"]) },
    Constraint {
        text: "c-a, c-b, d-a, d-b not poles of Gamma",
        check: |p| off_poles(p, &["c-a", "c-b", "d-a", "d-b"]),
    },
];

const GAUSS_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "Re(c-a-b)>0", check: |p| re_gt(p, "c-a-b", 0) },
    Constraint { text: "c not a pole of Gamma", check: |p| off_poles(p, &["c"]) },
];

const DIXON_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "Re(1+a/2-b-c)>0", check: |p| re_gt(p, "1+a/2-b-c", 0) },
    Constraint {
        text: "1+a-b, 1+a-c, 1+a/2 not poles of Gamma",
        check: |p| off_poles(p, &["1+a-b", "1+a-c", "1+a/2"]),
    },
];

const THEOREM_CONSTRAINTS: &[Constraint] = &[
    Constraint {
        text: "a, b, c, d, a+b+c+d-1 not poles of Gamma",
        check: |p| off_poles(p, &["a", "b", "c", "d", "a+b+c+d-1"]),
    },
    Constraint {
        text: "a+b+c, a+b+d, a+c+d, b+c+d not poles of Gamma",
        check: |p| off_poles(p, &["a+b+c", "a+b+d", "a+c+d", "b+c+d"]),
    },
];

const CA_DB_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "Re(a)>0", check: |p| re_gt(p, "a", 0) },
    Constraint { text: "Re(b)>0", check: |p| re_gt(p, "b", 0) },
];

const NEG_N_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "n >= 0", check: n_nonnegative },
    Constraint { text: "a+c-n not in {0,-1,...,1-n}", check: |p| lower_ok(p, "a+c-n") },
    Constraint { text: "a+d-n not in {0,-1,...,1-n}", check: |p| lower_ok(p, "a+d-n") },
];

const PHI_3F2_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "Re(c)>0", check: |p| re_gt(p, "c", 0) },
    Constraint { text: "d != 0", check: |p| !lin(p, "d").is_zero() },
    Constraint {
        text: "c, d, a+b+c+d-1 not poles of Gamma",
        check: |p| off_poles(p, &["c", "d", "a+b+c+d-1"]),
    },
    Constraint {
        text: "1+d, a+c+d, b+c+d, a+b+c+d not poles of Gamma",
        check: |p| off_poles(p, &["1+d", "a+c+d", "b+c+d", "a+b+c+d"]),
    },
];

const H22_CONSTRAINTS: &[Constraint] = &[
    Constraint { text: "Re(a+b+c+d)>1", check: |p| re_gt(p, "a+b+c+d", 1) },
    Constraint { text: "c != 0, d != 0", check: |p| !lin(p, "c").is_zero() && !lin(p, "d").is_zero() },
    Constraint {
        text: "a, b, c, d, a+b+c+d-1 not poles of Gamma",
        check: |p| off_poles(p, &["a", "b", "c", "d", "a+b+c+d-1"]),
    },
    Constraint {
        text: "a+b+c, a+b+d, a+c+d, b+c+d not poles of Gamma",
        check: |p| off_poles(p, &["a+b+c", "a+b+d", "a+c+d", "b+c+d"]),
    },
];

const SCHEMA_ABCD: &[ParamSpec] = &[cplx("a"), cplx("b"), cplx("c"), cplx("d")];
const SCHEMA_ABCN: &[ParamSpec] = &[cplx("a"), cplx("b"), cplx("c"), int("n")];
const SCHEMA_ABC: &[ParamSpec] = &[cplx("a"), cplx("b"), cplx("c")];
const SCHEMA_AB: &[ParamSpec] = &[cplx("a"), cplx("b")];
const SCHEMA_ACDN: &[ParamSpec] = &[cplx("a"), cplx("c"), cplx("d"), int("n")];

pub(crate) fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "saalschuetz",
            title: "Pfaff-Saalschuetz sum",
            formula: "3F2(a,b,-n; c,1+a+b-c-n; 1) = (c-a)_n (c-b)_n / ((c)_n (c-a-b)_n)",
            schema: SCHEMA_ABCN,
            constraints: SAAL_CONSTRAINTS,
            ranges: "a,b,c in (0,4); n in 0..=30",
            sampler: saalschuetz_sample,
            evaluator: saalschuetz_eval,
        },
        IdentityCase {
            id: "saalschuetz-nt",
            title: "Nonterminating Saalschuetz sum",
            formula: "3F2(a,b,c+d-a-b-1; c,d; 1) = G(c)G(d)/(G(a)G(b)G(c+d-a-b)) 3F2(1,c-a,c-b; c-a-b+1,c+d-a-b; 1)/(a+b-c) \
                      + G(c)G(d)G(c-a-b)G(d-a-b)/(G(c-a)G(c-b)G(d-a)G(d-b))",
            schema: SCHEMA_ABCD,
            constraints: SAAL_NT_CONSTRAINTS,
            ranges: "a,b,c in (0,4); d = a+b+m, m in [14,24]",
            sampler: saal_nt_sample,
            evaluator: saal_nt_eval,
        },
        IdentityCase {
            id: "dougall-2h2",
            title: "Dougall's 2H2 sum",
            formula: "2H2(a,b; c,d; 1) = G(1-a)G(1-b)G(c)G(d)G(c+d-a-b-1) / (G(c-a)G(c-b)G(d-a)G(d-b))",
            schema: SCHEMA_ABCD,
            constraints: DOUGALL_CONSTRAINTS,
            ranges: "a,b,c in (0,4); d = a+b-c+m, m in [15,30]",
            sampler: dougall_sample,
            evaluator: dougall_eval,
        },
        IdentityCase {
            id: "gauss-2f1",
            title: "Gauss 2F1 sum",
            formula: "2F1(a,b; c; 1) = G(c)G(c-a-b) / (G(c-a)G(c-b))",
            schema: SCHEMA_ABC,
            constraints: GAUSS_CONSTRAINTS,
            ranges: "a,b in (0,4); c = a+b+m, m in [5,25]",
            sampler: gauss_sample,
            evaluator: gauss_eval,
        },
        IdentityCase {
            id: "dixon",
            title: "Dixon's 3F2 sum",
            formula: "3F2(a,b,c; 1+a-b,1+a-c; 1) = G(1+a/2)G(1+a-b)G(1+a-c)G(1+a/2-b-c) / \
                      (G(1+a)G(1+a/2-b)G(1+a/2-c)G(1+a-b-c))",
            schema: SCHEMA_ABC,
            constraints: DIXON_CONSTRAINTS,
            ranges: "b,c in (-2,2); a = 2(m-1+b+c), m in [5,15]",
            sampler: dixon_sample,
            evaluator: dixon_eval,
        },
        IdentityCase {
            id: "theorem-1",
            title: "Symmetric Phi sum",
            formula: "Phi(a,b;c,d) + Phi(c,d;a,b) = G(a)G(b)G(c)G(d)G(a+b+c+d-1) / (G(a+c)G(a+d)G(b+c)G(b+d)), \
                      Phi(a,b;c,d) = sum_k G(a+k)G(b+k)G(a+b+c+d-1+k) / (k! G(a+b+c+k)G(a+b+d+k))",
            schema: SCHEMA_ABCD,
            constraints: THEOREM_CONSTRAINTS,
            ranges: "a,b,d in (0,3); c in (0,3), or [5,8) for every fourth sample",
            sampler: theorem_sample,
            evaluator: theorem_eval,
        },
        IdentityCase {
            id: "theorem-1-ca-db",
            title: "Symmetric Phi sum at c=a, d=b",
            formula: "3F2(a,b,2a+2b-1; a+2b,2a+b; 1) = G(a)G(b)G(a+2b)G(2a+b) / (2 G(2a)G(2b)G(a+b)^2)",
            schema: SCHEMA_AB,
            constraints: CA_DB_CONSTRAINTS,
            ranges: "a,b in (0,3)",
            sampler: ca_db_sample,
            evaluator: ca_db_eval,
        },
        IdentityCase {
            id: "theorem-1-b-neg-n",
            title: "Symmetric Phi sum at b=-n",
            formula: "3F2(a,a+c+d-1-n,-n; a+c-n,a+d-n; 1) = (1-c)_n (1-d)_n / ((1-a-c)_n (1-a-d)_n)",
            schema: SCHEMA_ACDN,
            constraints: NEG_N_CONSTRAINTS,
            ranges: "a,c,d in (0,4); n in 0..=20",
            sampler: neg_n_sample,
            evaluator: neg_n_eval,
        },
        IdentityCase {
            id: "phi-as-3f2",
            title: "Phi(c,d;a,b) as a 3F2",
            formula: "Phi(c,d;a,b) = 3F2(1,a+d,b+d; 1+d,a+b+c+d; 1) / (d (a+b+c+d-1))",
            schema: SCHEMA_ABCD,
            constraints: PHI_3F2_CONSTRAINTS,
            ranges: "a,b,d in (0,3); c in [5,9]",
            sampler: phi3f2_sample,
            evaluator: phi3f2_eval,
        },
        IdentityCase {
            id: "h22-split",
            title: "2H2 split into two Phi sums",
            formula: "2H2(1-a,1-b; 1+c,1+d; 1) = cd (Phi(c,d;a,b) + Phi(a,b;c,d))",
            schema: SCHEMA_ABCD,
            constraints: H22_CONSTRAINTS,
            ranges: "a,b,c,d in (0,3) with a+b+c+d >= 2",
            sampler: h22_sample,
            evaluator: h22_eval,
        },
    ]
}
