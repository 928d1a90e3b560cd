//! Bailey pairs, Bailey's lemma and the S2/S5 transforms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use crate::coeffring::Param;
use crate::error::{Error, Result};
use crate::qseries::{div_poch, div_poch_inf, mul_poch, mul_poch_inf, poch};
use crate::report::{Mismatch, VerificationReport};
use crate::series::{HalfExponent, MonomialSpec, Series, EXACT};

/// `(n, order) -> Series` producing one side of a pair.
pub type Generator = Arc<dyn Fn(usize, HalfExponent) -> Result<Series> + Send + Sync>;

const Q1: HalfExponent = HalfExponent::q(1);

fn q_mono() -> MonomialSpec {
    MonomialSpec::q_half(2)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Side {
    Alpha,
    Beta,
}

struct Inner {
    name: String,
    base_a: MonomialSpec,
    alpha: Generator,
    beta: Generator,
    memo: Mutex<HashMap<(Side, usize, i64), Series>>,
}

/// A pair `(α_n, β_n)` relative to `(a, q)`. Cloning is cheap and shares the cache.
#[derive(Clone)]
pub struct BaileyPair {
    inner: Arc<Inner>,
}

impl fmt::Debug for BaileyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaileyPair").field("name", &self.inner.name).field("base_a", &self.inner.base_a).finish()
    }
}

impl BaileyPair {
    pub fn new(name: impl Into<String>, base_a: MonomialSpec, alpha: Generator, beta: Generator) -> Self {
        BaileyPair {
            inner: Arc::new(Inner { name: name.into(), base_a, alpha, beta, memo: Mutex::new(HashMap::new()) }),
        }
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn base_a(&self) -> &MonomialSpec {
        &self.inner.base_a
    }

    fn get(&self, side: Side, n: usize, order: HalfExponent) -> Result<Series> {
        let key = (side, n, order.0);
        if let Some(s) = self.inner.memo.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        // The lock is released while computing; a racing thread may compute the
        // same entry, which is harmless since generators are deterministic.
        let g = match side {
            Side::Alpha => &self.inner.alpha,
            Side::Beta => &self.inner.beta,
        };
        let s = g(n, order)?.truncate(order.0);
        self.inner.memo.lock().unwrap().insert(key, s.clone());
        Ok(s)
    }

    pub fn alpha(&self, n: usize, order: HalfExponent) -> Result<Series> {
        self.get(Side::Alpha, n, order)
    }

    pub fn beta(&self, n: usize, order: HalfExponent) -> Result<Series> {
        self.get(Side::Beta, n, order)
    }
}

/// Base parameter of a pair: pure q-powers only.
fn base_half_units(a: &MonomialSpec) -> Result<i64> {
    if !a.is_pure_q_power() || a.qpower.0 < 0 {
        return Err(Error::InvalidArgument(format!("base a = {a} must be a nonnegative pure q-power")));
    }
    Ok(a.qpower.0)
}

/// `β_n = Σ_j α_j / ((q)_{n-j} (aq)_{n+j})`.
pub fn beta_from_alpha(
    alpha: &dyn Fn(usize, HalfExponent) -> Result<Series>,
    base_a: &MonomialSpec,
    n: usize,
    order: HalfExponent,
) -> Result<Series> {
    let aq = base_a.mul(&q_mono());
    let mut acc = Series::zero(order.0);
    for j in 0..=n {
        let a = alpha(j, order)?;
        if a.is_zero() {
            acc = acc.add(&a);
            continue;
        }
        let t = div_poch(&a, &q_mono(), Q1, n - j)?;
        acc = acc.add(&div_poch(&t, &aq, Q1, n + j)?);
    }
    Ok(acc)
}

/// Checks the defining relation for every `n <= n_max` below `order`.
pub fn verify_pair(pair: &BaileyPair, n_max: usize, order: HalfExponent) -> VerificationReport {
    let start = Instant::now();
    let mut params = BTreeMap::new();
    params.insert("n_max".to_string(), n_max.to_string());
    let report = VerificationReport::new(pair.name(), params, order);
    let alpha = |j: usize, o: HalfExponent| pair.alpha(j, o);
    for n in 0..=n_max {
        let verdict = beta_from_alpha(&alpha, pair.base_a(), n, order)
            .and_then(|lhs| Ok((lhs, pair.beta(n, order)?)))
            .and_then(|(lhs, rhs)| lhs.equal_up_to(&rhs, order));
        match verdict {
            Err(e) => return report.error_with(&e).with_detail(format!("n = {n}: {e}")).timed(start),
            Ok(v) => {
                if let Some(mut m) = Mismatch::from_verdict(&v) {
                    m.index = Some(n);
                    return report.fail_with(m).timed(start);
                }
            }
        }
    }
    report.timed(start)
}

/// `α_0 = 1`, `α_n = 0` otherwise, relative to `(q, q)`.
pub fn unit_pair() -> BaileyPair {
    let alpha: Generator = Arc::new(|n, order| Ok(if n == 0 { Series::one(order.0) } else { Series::zero(order.0) }));
    let beta: Generator = Arc::new(|n, order| {
        let s = div_poch(&Series::one(order.0), &q_mono(), Q1, n)?;
        div_poch(&s, &MonomialSpec::q_half(4), Q1, n)
    });
    BaileyPair::new("unit", q_mono(), alpha, beta)
}

/// Renders `b` for pair names: the free parameter `b` is shown as `symbolic`.
fn b_label(b: &MonomialSpec) -> String {
    if *b == MonomialSpec::param(Param::B) {
        "symbolic".to_string()
    } else {
        b.to_string()
    }
}

fn parse_b(text: &str) -> Result<MonomialSpec> {
    match text.trim() {
        "symbolic" => Ok(MonomialSpec::param(Param::B)),
        t => t.parse(),
    }
}

/// Which power of `a q` multiplies the Andrews pair's `α_n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Normalization {
    /// `(aq)^n q^(n(3n-1)/2)`: the form satisfying the pair relation.
    Corrected,
    /// `a^n q^(n(3n-1)/2)` as typeset.
    Printed,
}

/// `A_n(aq, q, b)` for `a = q^(a_h/2)` in the cleared form
/// `b^n (aq/b)_n = Π_{k=1}^n (b - a q^k)`.
pub fn andrews_alpha(
    a_h: i64,
    b: &MonomialSpec,
    n: usize,
    order: HalfExponent,
    norm: Normalization,
) -> Result<Series> {
    let a = MonomialSpec::q_half(a_h);
    let ni = n as i64;
    let mut e = ni * (3 * ni - 1) + ni * a_h;
    if norm == Normalization::Corrected {
        e += 2 * ni;
    }
    let inner = order.0 - e;
    let bs = Series::monomial(b, EXACT);
    let tail = |j: usize| -> Series {
        let mut p = Series::one(EXACT);
        for k in j + 1..=n {
            p = p.mul(&bs.sub(&Series::monomial(&a.shift(2 * k as i64), EXACT)));
        }
        p
    };
    let mut bracket = tail(0).truncate(inner);
    for j in 1..=n {
        let jj = j as i64;
        let mut num = poch(&a.shift(2), Q1, j - 1, HalfExponent(EXACT))?;
        num = num.mul_binomial(&a.shift(4 * jj));
        num = mul_poch(&num, b, Q1, j)?;
        num = num.mul(&tail(j)).shift(-(jj * a_h + 2 * jj * jj));
        bracket = bracket.add(&div_poch(&num.truncate(inner), &q_mono(), Q1, j)?);
    }
    let mut s = bracket.mul_binomial(&a.shift(4 * ni + 2));
    s = s.div_binomial(&a.shift(2))?;
    s = div_poch(&s, &b.shift(2), Q1, n)?;
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    Ok(s.mul_monomial(&MonomialSpec::scaled_q(sign, e)))
}

/// `A_n(aq, q, b)` evaluated term by term as typeset, with `b^{-j}` and
/// `(aq/b)_j` denominators. Needs an invertible monomial `b`.
pub fn andrews_alpha_literal(a_h: i64, b: &MonomialSpec, n: usize, order: HalfExponent) -> Result<Series> {
    let binv = b
        .inverse()
        .ok_or_else(|| Error::InvalidArgument(format!("literal form needs an invertible b, got {b}")))?;
    let a = MonomialSpec::q_half(a_h);
    let ni = n as i64;
    let aqb = a.shift(2).mul(&binv);
    let pre = MonomialSpec::scaled_q(if n.is_multiple_of(2) { 1 } else { -1 }, ni * (3 * ni - 1) + ni * a_h).mul(&b.pow(n as u32));
    let margin = 4 * ni * ni + 8 * ni + 2 * b.qpower.0.abs() * (ni + 1) + 8;
    let work = HalfExponent(order.0 - pre.qpower.0 + margin);
    let mut bracket = Series::one(work.0);
    for j in 1..=n {
        let jj = j as i64;
        let mut t = poch(&a.shift(2), Q1, j - 1, work)?;
        t = t.mul_binomial(&a.shift(4 * jj));
        t = mul_poch(&t, b, Q1, j)?;
        let w = a.powi(-jj).unwrap().mul(&MonomialSpec::q_half(-2 * jj * jj)).mul(&binv.pow(j as u32));
        t = t.mul_monomial(&w);
        t = div_poch(&t, &q_mono(), Q1, j)?;
        t = div_poch(&t, &aqb, Q1, j)?;
        bracket = bracket.add(&t);
    }
    let mut s = mul_poch(&bracket, &aqb, Q1, n)?;
    s = s.mul_binomial(&a.shift(4 * ni + 2));
    s = s.div_binomial(&a.shift(2))?;
    s = div_poch(&s, &b.shift(2), Q1, n)?;
    Ok(s.mul_monomial(&pre).truncate(order.0))
}

/// Andrews' one-parameter pair `(A_n(aq, q, b), 1/(bq)_n)` relative to `(aq, q)`.
pub fn andrews_pair(a: &MonomialSpec, b: &MonomialSpec) -> Result<BaileyPair> {
    andrews_with(a, b, false)
}

/// The pair with the typeset normalization of `A_n`, kept for diagnostics.
pub fn andrews_literal_pair(a: &MonomialSpec, b: &MonomialSpec) -> Result<BaileyPair> {
    andrews_with(a, b, true)
}

fn andrews_with(a: &MonomialSpec, b: &MonomialSpec, literal: bool) -> Result<BaileyPair> {
    let a_h = base_half_units(a)?;
    let norm = if literal { Normalization::Printed } else { Normalization::Corrected };
    let bb = b.clone();
    let alpha: Generator = Arc::new(move |n, order| andrews_alpha(a_h, &bb, n, order, norm));
    let bb = b.clone();
    let beta: Generator = Arc::new(move |n, order| div_poch(&Series::one(order.0), &bb.shift(2), Q1, n));
    let prefix = if literal { "andrews-literal" } else { "andrews" };
    let name = format!("{prefix}({a},{})", b_label(b));
    Ok(BaileyPair::new(name, a.shift(2), alpha, beta))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Thm23Variant {
    First,
    Second,
}

/// The two pairs relative to `(q, q)` built from `A_n(q, q, b)`.
pub fn thm23_pair(variant: Thm23Variant, b: &MonomialSpec) -> BaileyPair {
    let bb = b.clone();
    let alpha: Generator = Arc::new(move |n, order| {
        let ni = n as i64;
        match variant {
            Thm23Variant::First => {
                let shift = -ni * (ni + 1);
                let a = andrews_alpha(0, &bb, n, HalfExponent(order.0 - shift), Normalization::Corrected)?;
                Ok(a.shift(shift))
            }
            Thm23Variant::Second => {
                let shift = -ni * ni;
                let a = andrews_alpha(0, &bb, n, HalfExponent(order.0 - shift), Normalization::Corrected)?;
                let a = a.shift(shift).mul_binomial(&MonomialSpec::scaled_q(-1, 1));
                a.div_binomial(&MonomialSpec::scaled_q(-1, 2 * ni + 1))
            }
        }
    });
    let bb = b.clone();
    let beta: Generator = Arc::new(move |n, order| {
        let (ratio, lead) = match variant {
            Thm23Variant::First => (MonomialSpec::int(-1), MonomialSpec::scaled_q(-1, 2)),
            Thm23Variant::Second => (MonomialSpec::scaled_q(-1, 1), MonomialSpec::scaled_q(-1, 3)),
        };
        let mut sum = Series::zero(order.0);
        for k in 0..=n {
            let t = poch(&bb, Q1, k, order)?.mul_monomial(&ratio.pow(k as u32));
            sum = sum.add(&div_poch(&t, &q_mono(), Q1, k)?);
        }
        let s = div_poch(&sum, &lead, Q1, n)?;
        div_poch(&s, &bb.shift(2), Q1, n)
    });
    let tag = match variant {
        Thm23Variant::First => "first",
        Thm23Variant::Second => "second",
    };
    BaileyPair::new(format!("thm2.3-{tag}({})", b_label(b)), q_mono(), alpha, beta)
}

/// `a^(1/2)` for a base that is an even power of `t`.
fn sqrt_base(pair: &BaileyPair) -> Result<i64> {
    let h = base_half_units(pair.base_a())?;
    if h % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "transform needs a^(1/2) as a power of q^(1/2); base is {}",
            pair.base_a()
        )));
    }
    Ok(h / 2)
}

/// `α'_n = a^{n/2} q^{n²/2} α_n`,
/// `β'_n = Σ_k (-√(aq))_k a^{k/2} q^{k²/2} β_k / (q)_{n-k}` over `(-√(aq))_n`.
pub fn transform_s2(pair: &BaileyPair) -> Result<BaileyPair> {
    let r = sqrt_base(pair)?;
    let p = pair.clone();
    let alpha: Generator = Arc::new(move |n, order| {
        let w = n as i64 * r + (n * n) as i64;
        Ok(p.alpha(n, HalfExponent(order.0 - w))?.shift(w))
    });
    let p = pair.clone();
    let root = MonomialSpec::scaled_q(-1, r + 1);
    let beta: Generator = Arc::new(move |n, order| {
        let mut acc = Series::zero(order.0);
        for k in 0..=n {
            let w = k as i64 * r + (k * k) as i64;
            let bk = p.beta(k, HalfExponent(order.0 - w))?.shift(w);
            let t = mul_poch(&bk, &root, Q1, k)?;
            acc = acc.add(&div_poch(&t, &q_mono(), Q1, n - k)?);
        }
        div_poch(&acc, &root, Q1, n)
    });
    Ok(BaileyPair::new(format!("s2({})", pair.name()), pair.base_a().clone(), alpha, beta))
}

/// `α'_n = (-a^{1/2} q)_n / (-a^{1/2})_n a^{n/2} q^{(n²-n)/2} α_n`,
/// `β'_n = Σ_k (-√a q)_k a^{k/2} q^{(k²-k)/2} β_k / (q)_{n-k}` over `(-√a)_n`.
pub fn transform_s5(pair: &BaileyPair) -> Result<BaileyPair> {
    let r = sqrt_base(pair)?;
    if r == 0 {
        return Err(Error::InvalidArgument("S5 needs a != 1 so that (-a^(1/2))_n is invertible".into()));
    }
    let p = pair.clone();
    let root = MonomialSpec::scaled_q(-1, r);
    let root_q = root.shift(2);
    let (rt, rt_q) = (root.clone(), root_q.clone());
    let alpha: Generator = Arc::new(move |n, order| {
        let w = n as i64 * r + (n * n) as i64 - n as i64;
        let s = p.alpha(n, HalfExponent(order.0 - w))?.shift(w);
        let s = mul_poch(&s, &rt_q, Q1, n)?;
        div_poch(&s, &rt, Q1, n)
    });
    let p = pair.clone();
    let beta: Generator = Arc::new(move |n, order| {
        let mut acc = Series::zero(order.0);
        for k in 0..=n {
            let w = k as i64 * r + (k * k) as i64 - k as i64;
            let bk = p.beta(k, HalfExponent(order.0 - w))?.shift(w);
            let t = mul_poch(&bk, &root_q, Q1, k)?;
            acc = acc.add(&div_poch(&t, &q_mono(), Q1, n - k)?);
        }
        div_poch(&acc, &root, Q1, n)
    });
    Ok(BaileyPair::new(format!("s5({})", pair.name()), pair.base_a().clone(), alpha, beta))
}

/// Bailey's lemma with `X = q^{-M}`, `Y = q^{-L}`: both sums terminate.
pub fn bailey_lemma_check(pair: &BaileyPair, m: usize, l: usize, order: HalfExponent) -> VerificationReport {
    let start = Instant::now();
    let mut params = BTreeMap::new();
    params.insert("pair".to_string(), pair.name().to_string());
    params.insert("M".to_string(), m.to_string());
    params.insert("L".to_string(), l.to_string());
    let report = VerificationReport::new("lemma2.1", params, order);
    let run = || -> Result<(Series, Series)> {
        let a_h = base_half_units(pair.base_a())?;
        let (mi, li) = (m as i64, l as i64);
        let x = MonomialSpec::q_half(-2 * mi);
        let y = MonomialSpec::q_half(-2 * li);
        let ratio = MonomialSpec::q_half(a_h + 2 + 2 * mi + 2 * li);
        let aq_x = MonomialSpec::q_half(a_h + 2 + 2 * mi);
        let aq_y = MonomialSpec::q_half(a_h + 2 + 2 * li);
        let exact = HalfExponent(EXACT);
        let mut lhs = Series::zero(order.0);
        let mut rhs = Series::zero(order.0);
        for n in 0..=m.min(l) {
            let w = poch(&x, Q1, n, exact)?
                .mul(&poch(&y, Q1, n, exact)?)
                .mul_monomial(&ratio.pow(n as u32));
            let vw = w.valuation().min(order.0);
            let sub = HalfExponent(order.0 - vw);
            lhs = lhs.add(&w.mul(&pair.beta(n, sub)?));
            let t = w.mul(&pair.alpha(n, sub)?);
            let t = div_poch(&t, &aq_x, Q1, n)?;
            rhs = rhs.add(&div_poch(&t, &aq_y, Q1, n)?);
        }
        let mut r = mul_poch_inf(&rhs, &aq_x, Q1)?;
        r = mul_poch_inf(&r, &aq_y, Q1)?;
        r = div_poch_inf(&r, &MonomialSpec::q_half(a_h + 2), Q1)?;
        r = div_poch_inf(&r, &ratio, Q1)?;
        Ok((lhs, r))
    };
    match run().and_then(|(l, r)| l.equal_up_to(&r, order)) {
        Err(e) => report.error_with(&e).timed(start),
        Ok(v) => match Mismatch::from_verdict(&v) {
            Some(mm) => report.fail_with(mm).timed(start),
            None => report.timed(start),
        },
    }
}

/// Parses pair names: `unit`, `andrews(a,b)`, `andrews-literal(a,b)`,
/// `thm2.3-first(b)`, `thm2.3-second(b)`, `s2(...)`, `s5(...)`.
pub fn parse_pair(name: &str) -> Result<BaileyPair> {
    let name = name.trim();
    let err = || Error::Parse(format!("unknown pair name '{name}'"));
    if name == "unit" {
        return Ok(unit_pair());
    }
    let (head, rest) = name.split_once('(').ok_or_else(err)?;
    let body = rest.strip_suffix(')').ok_or_else(err)?;
    match head {
        "s2" => transform_s2(&parse_pair(body)?),
        "s5" => transform_s5(&parse_pair(body)?),
        "thm2.3-first" => Ok(thm23_pair(Thm23Variant::First, &parse_b(body)?)),
        "thm2.3-second" => Ok(thm23_pair(Thm23Variant::Second, &parse_b(body)?)),
        "andrews" | "andrews-literal" => {
            let (a, b) = body.split_once(',').ok_or_else(err)?;
            let a: MonomialSpec = a.trim().parse()?;
            let b = parse_b(b)?;
            if head == "andrews" {
                andrews_pair(&a, &b)
            } else {
                andrews_literal_pair(&a, &b)
            }
        }
        _ => Err(err()),
    }
}
