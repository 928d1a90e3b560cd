//! Side builders: each returns the printed members of one identity, in order.

use crate::bailey::{andrews_alpha, thm23_pair, BaileyPair, Normalization, Thm23Variant};
use crate::error::Result;
use crate::partitions::omega;
use crate::qseries::{div_poch, div_poch_inf, hecke_double_sum, mul_poch, mul_poch_inf, poch, poch_inf, qbinomial};
use crate::series::{HalfExponent, MonomialSpec, Series, EXACT};

use super::Bindings;

const Q1: HalfExponent = HalfExponent::q(1);
const Q2: HalfExponent = HalfExponent::q(2);

fn mq(c: i64, h: i64) -> MonomialSpec {
    MonomialSpec::scaled_q(c, h)
}

fn ord(h: i64) -> HalfExponent {
    HalfExponent(h)
}

/// `Σ_{k≥0} (num)_k / (den)_{k+extra} q^{ratio·k/2}` with Pochhammer step `step/2`.
fn ksum(num: &MonomialSpec, den: &MonomialSpec, extra: usize, step: i64, ratio: i64, o: HalfExponent) -> Result<Series> {
    let mut term = div_poch(&Series::one(o.0), den, ord(step), extra)?;
    let mut acc = Series::zero(o.0);
    let mut k = 0i64;
    while k * ratio < o.0 {
        acc = acc.add(&term);
        term = term
            .mul_binomial(&num.shift(k * step))
            .div_binomial(&den.shift((k + extra as i64) * step))?
            .shift(ratio)
            .truncate(o.0);
        k += 1;
    }
    Ok(acc)
}

/// `(X)_n (Y)_n r^n` for `X = q^{-M}`, `Y = q^{-L}`, exact.
fn xy_weight(m: i64, l: i64, n: usize, r: &MonomialSpec) -> Result<Series> {
    let exact = ord(EXACT);
    Ok(poch(&mq(1, -2 * m), Q1, n, exact)?
        .mul(&poch(&mq(1, -2 * l), Q1, n, exact)?)
        .mul_monomial(&r.pow(n as u32)))
}

pub(super) fn eq1_1(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    let (a, z) = (b.mono("a")?, b.mono("z")?);
    let mut lhs = Series::zero(o.0);
    let mut term = Series::one(o.0);
    let mut n = 0i64;
    while n * z.qpower.0 < o.0 {
        lhs = lhs.add(&term);
        term = term.mul_binomial(&a.shift(2 * n)).mul_monomial(&z).div_binomial(&mq(1, 2 * n + 2))?.truncate(o.0);
        n += 1;
    }
    let rhs = div_poch_inf(&poch_inf(&a.mul(&z), Q1, o)?, &z, Q1)?;
    Ok(vec![lhs, rhs])
}

pub(super) fn eq1_2(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    let (a, z) = (b.mono("a")?, b.mono("z")?);
    let mut sum = Series::zero(o.0);
    let mut term = Series::one(o.0);
    let mut n = 0i64;
    while n * z.qpower.0 < o.0 {
        sum = sum.add(&term);
        term = term.mul_binomial(&a.shift(2 * n + 2)).mul_monomial(&z).truncate(o.0);
        n += 1;
    }
    let lhs = mul_poch_inf(&sum, &z, Q1)?;
    let mut inv_qk = vec![Series::one(o.0)];
    let mut rhs = Series::zero(o.0);
    let mut n = 0usize;
    while (n * (n + 1)) as i64 + n as i64 * z.qpower.0 < o.0 {
        if n > 0 {
            let prev = inv_qk[n - 1].div_binomial(&mq(1, 2 * n as i64))?;
            inv_qk.push(prev);
        }
        let mut inner = Series::zero(o.0);
        for (k, s) in inv_qk.iter().enumerate() {
            inner = inner.add(&s.mul_monomial(&a.pow((n - k) as u32)));
        }
        let w = z.neg().pow(n as u32).shift((n * (n + 1)) as i64);
        rhs = rhs.add(&inner.mul_monomial(&w).truncate(o.0));
        n += 1;
    }
    Ok(vec![lhs, rhs])
}

pub(super) fn eq1_3(_: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    let mut partial = Series::zero(o.0);
    let mut inv_qn = Series::one(o.0);
    let mut lhs = Series::zero(o.0);
    let mut n = 0i64;
    while n * (n + 1) < o.0 {
        if n > 0 {
            inv_qn = inv_qn.div_binomial(&mq(1, 2 * n))?;
        }
        partial = partial.add(&inv_qn);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        lhs = lhs.add(&partial.mul_monomial(&mq(sign, n * (n + 1))).truncate(o.0));
        n += 1;
    }
    let e = poch_inf(&mq(1, 2), Q1, o)?;
    Ok(vec![lhs, e.mul(&e)])
}

pub(super) fn eq1_5(_: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    let mut terms = Vec::new();
    let mut n = 0i64;
    while 2 * (24 * n + 2) < o.0 {
        terms.push((2 * (24 * n + 2), crate::coeffring::Coefficient::from_integer(omega(n)?)));
        n += 1;
    }
    Ok(vec![Series::from_terms(terms, o.0), hecke_double_sum(o)?])
}

/// Cleared form: `b^{N+1}(1-q^{N+1})((a/b)q)_{N+1} Σ (aq)_n/(bq)_n q^{(N+1)n}` and
/// `(1-b)(q)_{N+1}[(aq)_∞/(b)_∞ - Σ_{n≤N} ((a/b)q)_n b^n/(q)_n]`.
pub(crate) fn lemma2_2_sides(a: &MonomialSpec, b: &MonomialSpec, big_n: usize, o: HalfExponent) -> Result<Vec<Series>> {
    let binv = b.inverse().ok_or_else(|| crate::error::Error::InvalidArgument(format!("b = {b} is not invertible")))?;
    let n1 = big_n as i64 + 1;
    let abq = a.mul(&binv).shift(2);
    let aq = a.shift(2);
    let bq = b.shift(2);
    let sum = ksum(&aq, &bq, 0, 2, 2 * n1, o)?;
    let lhs = mul_poch(&sum.mul_binomial(&mq(1, 2 * n1)), &abq, Q1, big_n + 1)?.mul_monomial(&b.pow(n1 as u32));
    let mut finite = Series::zero(o.0);
    for n in 0..=big_n {
        let t = poch(&abq, Q1, n, o)?.mul_monomial(&b.pow(n as u32));
        finite = finite.add(&div_poch(&t, &mq(1, 2), Q1, n)?);
    }
    let prod = div_poch_inf(&poch_inf(&aq, Q1, o)?, b, Q1)?;
    let rhs = mul_poch(&prod.sub(&finite), &mq(1, 2), Q1, big_n + 1)?.mul_binomial(b);
    Ok(vec![lhs, rhs])
}

pub(super) fn lemma2_2(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    lemma2_2_sides(&b.mono("a")?, &b.mono("b")?, b.int("N")? as usize, o)
}

pub(super) fn eq3_3(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    let x = b.mono("x")?;
    let big_n = b.int("N")? as usize;
    let mut lhs = Series::zero(o.0);
    for n in 0..=big_n {
        let t = poch(&x, Q1, n, o)?.scale(&sign(n));
        lhs = lhs.add(&div_poch(&t, &mq(1, 2), Q1, n)?);
    }
    let half = crate::coeffring::Rational::new(1, 2);
    let first = div_poch_inf(&poch_inf(&x.neg(), Q1, o)?, &mq(-1, 2), Q1)?.scale(&half);
    let inner = ksum(&x.neg(), &mq(-1, 2), 0, 2, 2 * (big_n as i64 + 1), o)?;
    let second = div_poch(&mul_poch(&inner, &x, Q1, big_n + 1)?, &mq(1, 2), Q1, big_n)?.scale(&(&half * &sign(big_n)));
    Ok(vec![lhs, first.add(&second)])
}

fn sign(n: usize) -> crate::coeffring::Rational {
    crate::coeffring::Rational::from_integer(if n.is_multiple_of(2) { 1 } else { -1 })
}

fn eq3_4_sides(b: &Bindings, o: HalfExponent, literal: bool) -> Result<Vec<Series>> {
    let x = b.mono("x")?;
    let big_n = b.int("N")? as usize;
    let mut lhs = Series::zero(o.0);
    for n in 0..=big_n {
        let t = poch(&x, Q1, n, o)?.mul_monomial(&mq(-1, 1).pow(n as u32));
        lhs = lhs.add(&div_poch(&t, &mq(1, 2), Q1, n)?);
    }
    let xh = x.shift(1).neg();
    let first = div_poch_inf(&poch_inf(&xh, Q1, o)?, &mq(-1, 1), Q1)?;
    let ratio = 2 * (big_n as i64 + 1);
    let w = mq(-1, 1).pow(big_n as u32).shift(1);
    let second = if literal {
        let inner = ksum(&xh, &mq(-1, 1), 0, 2, ratio, o)?;
        let t = mul_poch(&inner, &x.shift(1), Q1, big_n + 1)?.div_binomial(&mq(-1, 1))?;
        div_poch(&t, &mq(1, 2), Q1, big_n)?.mul_monomial(&w)
    } else {
        let inner = ksum(&xh, &mq(-1, 1), 1, 2, ratio, o)?;
        let t = mul_poch(&inner, &x, Q1, big_n + 1)?;
        div_poch(&t, &mq(1, 2), Q1, big_n)?.mul_monomial(&w)
    };
    Ok(vec![lhs, first.add(&second)])
}

pub(super) fn eq3_4(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    eq3_4_sides(b, o, false)
}

pub(super) fn eq3_4_literal(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    eq3_4_sides(b, o, true)
}

pub(super) fn eq2_10(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    let (a, bb, t) = (b.mono("a")?, b.mono("b")?, b.mono("t")?);
    let lhs_sum = {
        let mut acc = Series::zero(o.0);
        let mut term = Series::one(o.0);
        let mut n = 0i64;
        while n * t.qpower.0 < o.0 {
            acc = acc.add(&term);
            term = term
                .mul_binomial(&a.shift(2 * n + 2))
                .div_binomial(&bb.shift(2 * n + 2))?
                .mul_monomial(&t)
                .truncate(o.0);
            n += 1;
        }
        acc
    };
    let lhs = mul_poch_inf(&lhs_sum, &t, Q1)?;
    let mut inner_terms: Vec<Series> = Vec::new();
    let mut rhs = Series::zero(o.0);
    let mut n = 0usize;
    while (n * (n + 1)) as i64 + n as i64 * t.qpower.0 < o.0 {
        let k_term = div_poch(&poch(&bb, Q1, n, o)?, &mq(1, 2), Q1, n)?;
        inner_terms.push(k_term);
        let mut inner = Series::zero(o.0);
        for (k, s) in inner_terms.iter().enumerate() {
            inner = inner.add(&s.mul_monomial(&a.pow((n - k) as u32)));
        }
        let w = t.neg().pow(n as u32).shift((n * (n + 1)) as i64);
        rhs = rhs.add(&div_poch(&inner.mul_monomial(&w).truncate(o.0), &bb.shift(2), Q1, n)?);
        n += 1;
    }
    Ok(vec![lhs, rhs])
}

/// Both sides multiplied through by `(q)_N (bq)_N`; exact polynomials.
pub(super) fn eq2_11(b: &Bindings, _: HalfExponent) -> Result<Vec<Series>> {
    let (a, bb) = (b.mono("a")?, b.mono("b")?);
    let big_n = b.int("N")? as usize;
    let exact = ord(EXACT);
    let lhs = poch(&mq(1, 2), Q1, big_n, exact)?.mul(&poch(&a.shift(2), Q1, big_n, exact)?);
    let mut rhs = Series::zero(EXACT);
    for n in 0..=big_n {
        let mut inner = Series::zero(EXACT);
        for k in 0..=n {
            let ak = a.powi(n as i64 - k as i64).expect("a is invertible in the domain");
            let t = poch(&bb, Q1, k, exact)?.mul(&poch(&mq(1, 2 * k as i64 + 2), Q1, n - k, exact)?);
            inner = inner.add(&t.mul_monomial(&ak));
        }
        let w = mq(if n % 2 == 0 { 1 } else { -1 }, (n * (n + 1)) as i64);
        let t = inner
            .mul_monomial(&w)
            .mul(&qbinomial(big_n, n))
            .mul(&poch(&bb.shift(2 * n as i64 + 2), Q1, big_n - n, exact)?);
        rhs = rhs.add(&t);
    }
    Ok(vec![lhs, rhs])
}

/// Right member of Bailey's lemma with `a = q`, `X = q^{-M}`, `Y = q^{-L}`.
fn lemma_rhs(pair: &BaileyPair, m: i64, l: i64, o: HalfExponent) -> Result<Series> {
    let r = mq(1, 2 * (2 + m + l));
    let mut acc = Series::zero(o.0);
    for n in 0..=m.min(l) as usize {
        let w = xy_weight(m, l, n, &r)?;
        let sub = ord(o.0 - w.valuation().min(o.0));
        let t = w.mul(&pair.alpha(n, sub)?);
        let t = div_poch(&t, &mq(1, 4 + 2 * m), Q1, n)?;
        acc = acc.add(&div_poch(&t, &mq(1, 4 + 2 * l), Q1, n)?);
    }
    let mut s = mul_poch_inf(&acc, &mq(1, 4 + 2 * m), Q1)?;
    s = mul_poch_inf(&s, &mq(1, 4 + 2 * l), Q1)?;
    s = div_poch_inf(&s, &mq(1, 4), Q1)?;
    div_poch_inf(&s, &r, Q1)
}

pub(super) fn thm3_1_1(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    let x = b.mono("x")?;
    let (m, l) = (b.int("M")?, b.int("L")?);
    let r = mq(1, 2 * (2 + m + l));
    let half = crate::coeffring::Rational::new(1, 2);
    let mut t1 = Series::zero(o.0);
    let mut t2 = Series::zero(o.0);
    for n in 0..=m.min(l) as usize {
        let w = xy_weight(m, l, n, &r)?;
        let s = div_poch(&w.truncate(o.0), &mq(-1, 2), Q1, n)?;
        t1 = t1.add(&div_poch(&s, &x.shift(2), Q1, n)?);
        let inner = ksum(&x.neg(), &mq(-1, 2), 0, 2, 2 * (n as i64 + 1), o)?;
        let s = w.mul(&inner).scale(&sign(n));
        t2 = t2.add(&div_poch(&s, &mq(1, 4), Q2, n)?);
    }
    let pre = div_poch_inf(&poch_inf(&x.neg(), Q1, o)?, &mq(-1, 2), Q1)?;
    let lhs = pre.mul(&t1).scale(&half).add(&t2.mul_binomial(&x).scale(&half));
    let rhs = lemma_rhs(&thm23_pair(Thm23Variant::First, &x), m, l, o)?;
    Ok(vec![lhs, rhs])
}

fn thm3_1_2_sides(b: &Bindings, o: HalfExponent, literal: bool) -> Result<Vec<Series>> {
    let x = b.mono("x")?;
    let (m, l) = (b.int("M")?, b.int("L")?);
    let r = mq(1, 2 * (2 + m + l));
    let xh = x.shift(1).neg();
    let mut t1 = Series::zero(o.0);
    let mut t2 = Series::zero(o.0);
    for n in 0..=m.min(l) as usize {
        let w = xy_weight(m, l, n, &r)?;
        let s = div_poch(&w.truncate(o.0), &mq(-1, 3), Q1, n)?;
        t1 = t1.add(&div_poch(&s, &x.shift(2), Q1, n)?);
        let ratio = 2 * (n as i64 + 1);
        let (inner, num) = if literal {
            (ksum(&xh, &mq(-1, 1), 0, 2, ratio, o)?, x.shift(1))
        } else {
            (ksum(&xh, &mq(-1, 1), 1, 2, ratio, o)?, x.clone())
        };
        let s = w.mul_monomial(&mq(-1, 1).pow(n as u32)).mul(&inner);
        let s = mul_poch(&s, &num, Q1, n + 1)?;
        let s = div_poch(&s, &mq(-1, 3), Q1, n)?;
        let s = div_poch(&s, &mq(1, 2), Q1, n)?;
        t2 = t2.add(&div_poch(&s, &x.shift(2), Q1, n)?);
    }
    let pre = div_poch_inf(&poch_inf(&xh, Q1, o)?, &mq(-1, 1), Q1)?;
    let t2 = if literal { t2 } else { t2.mul_monomial(&mq(1, 1)) };
    let lhs = pre.mul(&t1).add(&t2);
    let rhs = lemma_rhs(&thm23_pair(Thm23Variant::Second, &x), m, l, o)?;
    Ok(vec![lhs, rhs])
}

pub(super) fn thm3_1_2(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_1_2_sides(b, o, false)
}

pub(super) fn thm3_1_2_literal(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_1_2_sides(b, o, true)
}

/// `Σ_n q^{shift(n)} A_n(q, q, x) / den(n)` while the lower bound `bound(n)` on the
/// term valuation stays below the order.
fn andrews_sum(
    x: &MonomialSpec,
    o: HalfExponent,
    norm: Normalization,
    shift: impl Fn(i64) -> i64,
    bound: impl Fn(i64) -> i64,
    den: impl Fn(i64) -> Option<MonomialSpec>,
) -> Result<Series> {
    let mut acc = Series::zero(o.0);
    let mut n = 0i64;
    while bound(n) < o.0 {
        let e = shift(n);
        let mut t = andrews_alpha(0, x, n as usize, ord(o.0 - e), norm)?.shift(e);
        if let Some(d) = den(n) {
            t = t.div_binomial(&d)?;
        }
        acc = acc.add(&t);
        n += 1;
    }
    Ok(acc)
}

fn thm3_5_sides(x: &MonomialSpec, o: HalfExponent, literal: bool) -> Result<Vec<Series>> {
    let half = crate::coeffring::Rational::new(1, 2);
    let mut a = Series::zero(o.0);
    let mut c = Series::zero(o.0);
    let mut n = 0i64;
    while 2 * n * (n + 1) < o.0 {
        let nu = n as usize;
        let s = Series::monomial(&mq(1, 2 * n * (n + 1)), o.0);
        a = a.add(&div_poch(&div_poch(&s, &mq(-1, 2), Q1, nu)?, &x.shift(2), Q1, nu)?);
        let inner = ksum(&x.neg(), &mq(-1, 2), 0, 2, 2 * (n + 1), o)?;
        let s = inner.mul_monomial(&mq(1, 2 * n * (n + 1))).scale(&sign(nu));
        c = c.add(&div_poch(&s, &mq(1, 4), Q2, nu)?);
        n += 1;
    }
    let pre = div_poch_inf(&poch_inf(&x.neg(), Q1, o)?, &mq(-1, 2), Q1)?;
    let e1 = pre.mul(&a).scale(&half).add(&c.mul_binomial(x).scale(&half));
    let e2 = if literal {
        let s = andrews_sum(x, o, Normalization::Printed, |n| n * (n + 1), |n| 2 * n * n, |_| None)?;
        div_poch_inf(&s, &mq(1, 2), Q1)?
    } else {
        let s = andrews_sum(x, o, Normalization::Corrected, |n| n * (n + 1), |n| 2 * n * (n + 1), |_| None)?;
        div_poch_inf(&s, &mq(1, 4), Q1)?
    };
    let mut e3 = Series::zero(o.0);
    let mut n = 0i64;
    while n * (n + 1) < o.0 {
        let nu = n as usize;
        let s = poch(&mq(-1, 2), Q1, nu, o)?.mul_monomial(&mq(1, n * (n + 1)));
        e3 = e3.add(&div_poch(&s, &x.shift(2), Q1, nu)?);
        n += 1;
    }
    let e3 = div_poch_inf(&e3, &mq(-1, 2), Q1)?;
    Ok(vec![e1, e2, e3])
}

pub(super) fn thm3_5(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_5_sides(&b.mono("x")?, o, false)
}

pub(super) fn thm3_5_literal(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_5_sides(&b.mono("x")?, o, true)
}

pub(super) fn thm3_6(_: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    let half = crate::coeffring::Rational::new(1, 2);
    let mut a = Series::zero(o.0);
    let mut n = 0i64;
    while 2 * n * (n + 1) < o.0 {
        a = a.add(&div_poch(&Series::monomial(&mq(1, 2 * n * (n + 1)), o.0), &mq(-1, 2), Q1, n as usize)?);
        n += 1;
    }
    let a = div_poch_inf(&a, &mq(-1, 2), Q1)?;
    let mut c = Series::zero(o.0);
    let mut n = 0i64;
    while 2 * n < o.0 {
        let s = mul_poch_inf(&Series::monomial(&mq(1, 2 * n), o.0), &mq(1, 2 * n + 4), Q2)?;
        c = c.add(&div_poch(&s, &mq(-1, 2), Q1, n as usize)?);
        n += 1;
    }
    let e1 = a.add(&c).scale(&half);
    let mut e2 = Series::zero(o.0);
    let mut n = 0i64;
    while n * (n + 1) < o.0 {
        e2 = e2.add(&poch(&mq(-1, 2), Q1, n as usize, o)?.mul_monomial(&mq(1, n * (n + 1))));
        n += 1;
    }
    Ok(vec![e1, div_poch_inf(&e2, &mq(-1, 2), Q1)?])
}

/// thm3.2-3.7 members in base q²; `lead` is `q` (as derived) or `-q` (as typeset).
fn thm3_7_sides(o: HalfExponent, literal: bool) -> Result<Vec<Series>> {
    let half = crate::coeffring::Rational::new(1, 2);
    let lead = if literal { mq(-1, 2) } else { mq(1, 2) };
    let mut a = Series::zero(o.0);
    let mut c = Series::zero(o.0);
    let mut n = 0i64;
    while 4 * n * (n + 1) < o.0 {
        let nu = n as usize;
        let s = Series::monomial(&mq(1, 4 * n * (n + 1)), o.0);
        a = a.add(&div_poch(&s, &mq(-1, 2), Q1, 2 * nu + 1)?);
        let inner = ksum(&lead, &mq(-1, 4), 0, 4, 4 * (n + 1), o)?;
        let s = inner.mul_monomial(&mq(1, 4 * n * (n + 1))).scale(&sign(nu));
        c = c.add(&div_poch(&s, &mq(1, 8), HalfExponent::q(4), nu)?);
        n += 1;
    }
    let pre = div_poch_inf(&poch_inf(&lead, Q2, o)?, &mq(-1, 4), Q2)?;
    let e1 = pre.mul(&a).add(&c).scale(&half);
    let mut e2 = Series::zero(o.0);
    let mut n = 0i64;
    while 2 * n * (n + 1) < o.0 {
        let nu = n as usize;
        let s = poch(&mq(-1, 4), Q2, nu, o)?.mul_monomial(&mq(1, 2 * n * (n + 1)));
        e2 = e2.add(&div_poch(&s, &mq(-1, 2), Q2, nu + 1)?);
        n += 1;
    }
    Ok(vec![e1, div_poch_inf(&e2, &mq(-1, 4), Q2)?])
}

pub(super) fn thm3_7(_: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_7_sides(o, false)
}

pub(super) fn thm3_7_literal(_: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_7_sides(o, true)
}

fn thm3_8_sides(x: &MonomialSpec, o: HalfExponent, literal: bool) -> Result<Vec<Series>> {
    let xh = x.shift(1).neg();
    let mut a = Series::zero(o.0);
    let mut c = Series::zero(o.0);
    let mut n = 0i64;
    while 2 * n * (n + 1) < o.0 {
        let nu = n as usize;
        let s = Series::monomial(&mq(1, 2 * n * (n + 1)), o.0);
        a = a.add(&div_poch(&div_poch(&s, &mq(-1, 1), Q1, nu + 1)?, &x.shift(2), Q1, nu)?);
        let ratio = 2 * (n + 1);
        let (inner, num) = if literal {
            (ksum(&xh, &mq(-1, 1), 0, 2, ratio, o)?, x.shift(1))
        } else {
            (ksum(&xh, &mq(-1, 1), 1, 2, ratio, o)?, x.clone())
        };
        let s = inner.mul_monomial(&mq(if nu.is_multiple_of(2) { 1 } else { -1 }, 2 * n * n + 3 * n));
        let s = mul_poch(&s, &num, Q1, nu + 1)?;
        let s = div_poch(&s, &mq(-1, 1), Q1, nu + 1)?;
        let s = div_poch(&s, &mq(1, 2), Q1, nu)?;
        c = c.add(&div_poch(&s, &x.shift(2), Q1, nu)?);
        n += 1;
    }
    let pre = div_poch_inf(&poch_inf(&xh, Q1, o)?, &mq(-1, 1), Q1)?;
    let e1 = pre.mul(&a).add(&c.mul_monomial(&mq(1, 1)));
    let s = andrews_sum(
        x,
        o,
        Normalization::Corrected,
        |n| n * n + 2 * n,
        |n| 2 * n * n + 3 * n,
        |n| Some(mq(-1, 2 * n + 1)),
    )?;
    let e2 = div_poch_inf(&s, &mq(1, 4), Q1)?;
    let mut e3 = Series::zero(o.0);
    let mut n = 0i64;
    while n * (n + 2) < o.0 {
        let nu = n as usize;
        let s = poch(&mq(-1, 1), Q1, nu, o)?.mul_monomial(&mq(1, n * (n + 2)));
        e3 = e3.add(&div_poch(&s, &x.shift(2), Q1, nu)?);
        n += 1;
    }
    let e3 = div_poch_inf(&e3, &mq(-1, 1), Q1)?;
    Ok(vec![e1, e2, e3])
}

pub(super) fn thm3_8(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_8_sides(&b.mono("x")?, o, false)
}

pub(super) fn thm3_8_literal(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_8_sides(&b.mono("x")?, o, true)
}

/// `q Σ (-1)^n q^{n(2n+3)} / ((-q;q²)_{n+1} (q²;q²)_n) · inner(n)`.
fn base2_tail(o: HalfExponent, inner: impl Fn(i64) -> Result<Series>) -> Result<Series> {
    let mut c = Series::zero(o.0);
    let mut n = 0i64;
    while 2 * n * (2 * n + 3) < o.0 {
        let nu = n as usize;
        let s = inner(n)?.mul_monomial(&mq(if nu.is_multiple_of(2) { 1 } else { -1 }, 2 * n * (2 * n + 3)));
        let s = div_poch(&s, &mq(-1, 2), Q2, nu + 1)?;
        c = c.add(&div_poch(&s, &mq(1, 4), Q2, nu)?);
        n += 1;
    }
    Ok(c.mul_monomial(&mq(1, 2)))
}

pub(super) fn thm3_9(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_9_sides(b, o, false)
}

pub(super) fn thm3_9_literal(b: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_9_sides(b, o, true)
}

fn thm3_9_sides(_: &Bindings, o: HalfExponent, literal: bool) -> Result<Vec<Series>> {
    let mut a = Series::zero(o.0);
    let mut n = 0i64;
    while 4 * n * (n + 1) < o.0 {
        a = a.add(&div_poch(&Series::monomial(&mq(1, 4 * n * (n + 1)), o.0), &mq(-1, 2), Q2, n as usize + 1)?);
        n += 1;
    }
    let a = div_poch_inf(&a, &mq(-1, 2), Q2)?;
    let extra = if literal { 0 } else { 1 };
    let c = base2_tail(o, |n| ksum(&MonomialSpec::zero(), &mq(-1, 2), extra, 4, 4 * (n + 1), o))?;
    let e1 = a.add(&c);
    let mut e2 = Series::zero(o.0);
    let mut n = 0i64;
    while 2 * n * (n + 2) < o.0 {
        e2 = e2.add(&poch(&mq(-1, 2), Q2, n as usize, o)?.mul_monomial(&mq(1, 2 * n * (n + 2))));
        n += 1;
    }
    Ok(vec![e1, div_poch_inf(&e2, &mq(-1, 2), Q2)?])
}

fn thm3_10_sides(o: HalfExponent, literal: bool) -> Result<Vec<Series>> {
    let mut a = Series::zero(o.0);
    let mut n = 0i64;
    while 4 * n * (n + 1) < o.0 {
        a = a.add(&div_poch(&Series::monomial(&mq(1, 4 * n * (n + 1)), o.0), &mq(-1, 2), Q1, 2 * n as usize + 1)?);
        n += 1;
    }
    let a = div_poch_inf(&mul_poch_inf(&a, &mq(1, 2), Q2)?, &mq(-1, 2), Q2)?;
    let c = if literal {
        let mut c = Series::zero(o.0);
        let mut n = 0i64;
        while 2 * n * (2 * n + 3) < o.0 {
            let nu = n as usize;
            let inner = ksum(&mq(1, 2), &mq(-1, 2), 0, 4, 4 * (n + 1), o)?;
            let s = inner.mul_monomial(&mq(if nu.is_multiple_of(2) { 1 } else { -1 }, 2 * n * (2 * n + 3)));
            c = c.add(&div_poch(&s, &mq(1, 8), HalfExponent::q(4), nu)?);
            n += 1;
        }
        c.mul_monomial(&mq(1, 2))
    } else {
        base2_tail(o, |n| ksum(&mq(1, 2), &mq(-1, 2), 1, 4, 4 * (n + 1), o))?.scale(&2.into())
    };
    let e1 = a.add(&c);
    let mut e2 = Series::zero(o.0);
    let mut n = 0i64;
    while 2 * n * (n + 2) < o.0 {
        let nu = n as usize;
        let s = poch(&mq(-1, 2), Q2, nu, o)?.mul_monomial(&mq(1, 2 * n * (n + 2)));
        e2 = e2.add(&div_poch(&s, &mq(-1, 4), Q2, nu)?);
        n += 1;
    }
    Ok(vec![e1, div_poch_inf(&e2, &mq(-1, 2), Q2)?])
}

pub(super) fn thm3_10(_: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_10_sides(o, false)
}

pub(super) fn thm3_10_literal(_: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_10_sides(o, true)
}

fn thm3_11_sides(o: HalfExponent, literal: bool) -> Result<Vec<Series>> {
    let mut a = Series::zero(o.0);
    let mut n = 0i64;
    while 4 * n * (n + 1) < o.0 {
        let nu = n as usize;
        let s = Series::monomial(&mq(1, 4 * n * (n + 1)), o.0);
        let s = div_poch(&div_poch(&s, &mq(-1, 2), Q2, nu + 1)?, &mq(-1, 2), Q2, nu + 1)?;
        a = a.add(&s);
        n += 1;
    }
    let pre_arg = if literal { mq(-1, 4) } else { mq(1, 4) };
    let a = div_poch_inf(&mul_poch_inf(&a, &pre_arg, Q2)?, &mq(-1, 2), Q2)?;
    let c = if literal {
        let mut c = Series::zero(o.0);
        let mut n = 0i64;
        while 2 * n * (2 * n + 3) < o.0 {
            let nu = n as usize;
            let inner = ksum(&mq(-1, 4), &mq(-1, 2), 0, 4, 4 * (n + 1), o)?;
            let s = inner.mul_monomial(&mq(if nu.is_multiple_of(2) { 1 } else { -1 }, 2 * n * (2 * n + 3)));
            let s = mul_poch(&s, &mq(-1, 4), Q2, nu + 1)?;
            let s = div_poch(&div_poch(&s, &mq(-1, 2), Q2, nu + 1)?, &mq(-1, 2), Q2, nu + 1)?;
            c = c.add(&div_poch(&s, &mq(1, 4), Q2, nu)?);
            n += 1;
        }
        c.mul_monomial(&mq(1, 2))
    } else {
        base2_tail(o, |n| ksum(&mq(1, 4), &mq(-1, 2), 1, 4, 4 * (n + 1), o))?
    };
    let e1 = a.add(&c);
    let mut e2 = Series::zero(o.0);
    let mut n = 0i64;
    while 2 * n * (n + 2) < o.0 {
        e2 = e2.add(&Series::monomial(&mq(1, 2 * n * (n + 2)), o.0).div_binomial(&mq(-1, 4 * n + 2))?);
        n += 1;
    }
    Ok(vec![e1, div_poch_inf(&e2, &mq(-1, 2), Q2)?])
}

pub(super) fn thm3_11(_: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_11_sides(o, false)
}

pub(super) fn thm3_11_literal(_: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    thm3_11_sides(o, true)
}

/// `Σ q^{n(n+1)} / (den(n) (xq)_n) Σ_{k≤n} (x)_k (-1)^k / (q)_k`.
fn remark_series(x: &MonomialSpec, o: HalfExponent, den: impl Fn(&Series, usize) -> Result<Series>) -> Result<Series> {
    // (x)_k may carry negative q-powers; work with a margin and truncate at the end.
    let work = ord(o.0 + 2 * x.qpower.0.min(0).abs() + 4);
    let mut inner = Series::zero(work.0);
    let mut acc = Series::zero(work.0);
    let mut n = 0i64;
    while 2 * n * (n + 1) < work.0 {
        let nu = n as usize;
        let t = poch(x, Q1, nu, ord(work.0 + 2 * (n + 1) * n))?.scale(&sign(nu));
        inner = inner.add(&div_poch(&t, &mq(1, 2), Q1, nu)?.truncate(work.0));
        let s = inner.mul_monomial(&mq(1, 2 * n * (n + 1)));
        let s = den(&s, nu)?;
        acc = acc.add(&div_poch(&s, &x.shift(2), Q1, nu)?);
        n += 1;
    }
    Ok(acc.truncate(o.0))
}

pub(super) fn rem3_12(_: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    let lhs = remark_series(&MonomialSpec::int(-1), o, |s, n| div_poch(s, &mq(-1, 2), Q1, n))?;
    Ok(vec![lhs, poch_inf(&mq(1, 4), Q2, o)?])
}

pub(super) fn rem3_13(_: &Bindings, o: HalfExponent) -> Result<Vec<Series>> {
    let lhs = remark_series(&mq(-1, -1), o, |s, n| div_poch(s, &mq(-1, 1), Q1, n + 1))?;
    let work = ord(o.0 + 2);
    let ratio = div_poch_inf(&poch_inf(&mq(1, 4), Q2, work)?, &mq(1, 2), Q2)?;
    let rhs = div_poch_inf(&ratio.sub(&Series::one(work.0)), &mq(-1, 1), Q1)?.shift(-2);
    Ok(vec![lhs, rhs.truncate(o.0)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ksum_geometric() {
        // Σ_k q^k with trivial Pochhammers
        let s = ksum(&MonomialSpec::zero(), &MonomialSpec::zero(), 0, 2, 2, ord(20)).unwrap();
        assert_eq!(s.terms().count(), 10);
        // Σ_k q^k/(q)_{k+1}... one extra denominator factor at k = 0
        let s = ksum(&MonomialSpec::zero(), &mq(1, 2), 1, 2, 2, ord(20)).unwrap();
        let t = div_poch(&Series::one(20), &mq(1, 2), Q1, 1).unwrap();
        assert_eq!(s.coefficient_at(HalfExponent(0)).unwrap(), t.coefficient_at(HalfExponent(0)).unwrap());
    }

    #[test]
    fn xy_weight_has_nonnegative_valuation() {
        for (m, l) in [(1, 1), (2, 3), (3, 3)] {
            for n in 0..=3usize {
                let w = xy_weight(m, l, n, &mq(1, 2 * (2 + m + l))).unwrap();
                assert!(w.is_zero() || w.valuation() >= 0);
                if n as i64 > m.min(l) {
                    assert!(w.is_zero());
                }
            }
        }
    }
}
