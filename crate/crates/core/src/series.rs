//! Truncated Laurent series in `t = q^(1/2)` with [`Coefficient`] entries.
//!
//! Every series carries its own truncation order: coefficients at exponents
//! `>= order` are unknown and never reported. Operations propagate the
//! tightest order that is still sound. Finite polynomials use the
//! [`EXACT`] order and stay untruncated until combined with a truncated
//! series.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coeffring::{Coefficient, Exponents, Param, Rational};
use crate::error::{Error, Result};

/// Order marker for untruncated (polynomial) series.
pub const EXACT: i64 = i64::MAX;

/// A q-exponent stored in half-units: `q^(half_units / 2)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfExponent(pub i64);

impl HalfExponent {
    pub const fn new(half_units: i64) -> Self {
        HalfExponent(half_units)
    }

    /// Integer power of `q`.
    pub const fn q(n: i64) -> Self {
        HalfExponent(2 * n)
    }

    pub const fn half_units(self) -> i64 {
        self.0
    }

    pub fn is_exact(self) -> bool {
        self.0 == EXACT
    }
}

impl fmt::Display for HalfExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `a + b` on orders, keeping [`EXACT`] absorbing.
pub(crate) fn order_add(a: i64, b: i64) -> i64 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a + b
    }
}

/// `scalar * params * q^qpower`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialSpec {
    pub scalar: Rational,
    pub params: Exponents,
    pub qpower: HalfExponent,
}

impl MonomialSpec {
    pub fn new(scalar: Rational, params: Exponents, qpower: HalfExponent) -> Self {
        MonomialSpec { scalar, params, qpower }
    }

    pub fn zero() -> Self {
        MonomialSpec::constant(Rational::zero())
    }

    pub fn constant(c: Rational) -> Self {
        MonomialSpec { scalar: c, params: Exponents::ZERO, qpower: HalfExponent(0) }
    }

    pub fn int(n: i64) -> Self {
        MonomialSpec::constant(Rational::from_integer(n))
    }

    /// `q^(half_units/2)`.
    pub fn q_half(half_units: i64) -> Self {
        MonomialSpec { scalar: Rational::one(), params: Exponents::ZERO, qpower: HalfExponent(half_units) }
    }

    /// `scalar * q^(half_units/2)`.
    pub fn scaled_q(scalar: i64, half_units: i64) -> Self {
        MonomialSpec {
            scalar: Rational::from_integer(scalar),
            params: Exponents::ZERO,
            qpower: HalfExponent(half_units),
        }
    }

    /// The bare parameter `p`.
    pub fn param(p: Param) -> Self {
        MonomialSpec { scalar: Rational::one(), params: Exponents::single(p, 1), qpower: HalfExponent(0) }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn has_params(&self) -> bool {
        !self.params.is_zero()
    }

    /// True for `q^k` with unit scalar and no parameter part.
    pub fn is_pure_q_power(&self) -> bool {
        self.scalar.is_one() && !self.has_params()
    }

    pub fn coefficient(&self) -> Coefficient {
        Coefficient::term(self.scalar.clone(), self.params)
    }

    pub fn mul(&self, other: &MonomialSpec) -> MonomialSpec {
        let mut e = self.params;
        for (i, d) in other.params.0.iter().enumerate() {
            e.0[i] += d;
        }
        MonomialSpec {
            scalar: &self.scalar * &other.scalar,
            params: e,
            qpower: HalfExponent(self.qpower.0 + other.qpower.0),
        }
    }

    /// Multiplies by `q^(half_units/2)`.
    pub fn shift(&self, half_units: i64) -> MonomialSpec {
        MonomialSpec { qpower: HalfExponent(self.qpower.0 + half_units), ..self.clone() }
    }

    pub fn neg(&self) -> MonomialSpec {
        MonomialSpec { scalar: -&self.scalar, ..self.clone() }
    }

    /// Nonnegative power, with `0^0 = 1`.
    pub fn pow(&self, k: u32) -> MonomialSpec {
        let mut e = self.params;
        for d in e.0.iter_mut() {
            *d *= k;
        }
        MonomialSpec {
            scalar: self.scalar.pow(k as i32).expect("nonnegative power"),
            params: e,
            qpower: HalfExponent(self.qpower.0 * k as i64),
        }
    }

    /// Inverse; only defined for nonzero monomials without a parameter part.
    pub fn inverse(&self) -> Option<MonomialSpec> {
        if self.has_params() {
            return None;
        }
        Some(MonomialSpec {
            scalar: self.scalar.recip()?,
            params: Exponents::ZERO,
            qpower: HalfExponent(-self.qpower.0),
        })
    }

    /// Integer power that may be negative (requires an invertible monomial then).
    pub fn powi(&self, k: i64) -> Option<MonomialSpec> {
        if k >= 0 {
            Some(self.pow(k as u32))
        } else {
            Some(self.inverse()?.pow((-k) as u32))
        }
    }

    /// Square root of a pure `q^(2k)` power.
    pub fn sqrt_q_power(&self) -> Option<MonomialSpec> {
        if self.is_pure_q_power() && self.qpower.0 % 2 == 0 {
            Some(MonomialSpec::q_half(self.qpower.0 / 2))
        } else {
            None
        }
    }
}

impl fmt::Display for MonomialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scalar.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        let mag = self.scalar.abs();
        let neg = self.scalar.is_negative();
        let has_rest = self.has_params() || self.qpower.0 != 0;
        if !mag.is_one() || !has_rest {
            parts.push(mag.to_string());
        }
        for p in Param::ALL {
            match self.params.degree(p) {
                0 => {}
                1 => parts.push(p.symbol().to_string()),
                d => parts.push(format!("{}^{}", p.symbol(), d)),
            }
        }
        let h = self.qpower.0;
        if h != 0 {
            if h == 2 {
                parts.push("q".into());
            } else if h % 2 == 0 {
                let e = h / 2;
                if e < 0 {
                    parts.push(format!("q^{{{e}}}"));
                } else {
                    parts.push(format!("q^{e}"));
                }
            } else {
                parts.push(format!("q^{{{h}/2}}"));
            }
        }
        if neg {
            write!(f, "-")?;
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Parses monomials such as `0`, `-1`, `q`, `-q^{1/2}`, `q^2`, `-x*q^{-1}`, `1/2*b`.
impl FromStr for MonomialSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("cannot parse monomial '{s}'"));
        let mut t = s.trim().replace(' ', "");
        if t.is_empty() {
            return Err(err());
        }
        let mut scalar = Rational::one();
        if let Some(rest) = t.strip_prefix('-') {
            scalar = -scalar;
            t = rest.to_string();
        }
        let mut params = Exponents::ZERO;
        let mut qpower = 0i64;
        for factor in t.split('*') {
            if factor.is_empty() {
                return Err(err());
            }
            let (head, exp) = match factor.split_once('^') {
                Some((h, e)) => (h, Some(e.trim_start_matches('{').trim_end_matches('}'))),
                None => (factor, None),
            };
            if head == "q" {
                qpower += match exp {
                    None => 2,
                    Some(e) => match e.split_once('/') {
                        Some((n, "2")) => n.parse::<i64>().map_err(|_| err())?,
                        Some(_) => return Err(err()),
                        None => 2 * e.parse::<i64>().map_err(|_| err())?,
                    },
                };
            } else if let Some(p) = head.chars().next().and_then(Param::from_symbol).filter(|_| head.len() == 1) {
                let d = match exp {
                    None => 1,
                    Some(e) => e.parse::<u32>().map_err(|_| err())?,
                };
                params.0[p.slot()] += d;
            } else {
                if exp.is_some() {
                    return Err(err());
                }
                let c: Rational = head.parse().map_err(|_| err())?;
                scalar = &scalar * &c;
            }
        }
        if scalar.is_zero() {
            return Ok(MonomialSpec::zero());
        }
        Ok(MonomialSpec { scalar, params, qpower: HalfExponent(qpower) })
    }
}

/// Outcome of a coefficient-by-coefficient comparison.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Pass,
    Fail { exponent: HalfExponent, lhs: Coefficient, rhs: Coefficient },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Truncated Laurent series in `t = q^(1/2)`.
///
/// Stored densely from the valuation: `coeffs[i]` is the coefficient of
/// `t^(base + i)`. The first and last stored coefficients are nonzero and
/// every stored exponent is below `order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    base: i64,
    coeffs: Vec<Coefficient>,
    order: i64,
}

impl Series {
    pub fn zero(order: i64) -> Self {
        Series { base: 0, coeffs: Vec::new(), order }
    }

    pub fn one(order: i64) -> Self {
        Series::term(Coefficient::one(), 0, order)
    }

    pub fn constant(c: Rational, order: i64) -> Self {
        Series::term(Coefficient::constant(c), 0, order)
    }

    /// `c * t^half_units`, dropped if it falls at or beyond `order`.
    pub fn term(c: Coefficient, half_units: i64, order: i64) -> Self {
        if c.is_zero() || half_units >= order {
            return Series::zero(order);
        }
        Series { base: half_units, coeffs: vec![c], order }
    }

    /// Builds from `(half_units, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Coefficient)>, order: i64) -> Self {
        let terms: Vec<(i64, Coefficient)> =
            terms.into_iter().filter(|(e, c)| *e < order && !c.is_zero()).collect();
        let Some(lo) = terms.iter().map(|(e, _)| *e).min() else {
            return Series::zero(order);
        };
        let hi = terms.iter().map(|(e, _)| *e).max().unwrap();
        let mut coeffs = vec![Coefficient::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = &*slot + &c;
        }
        Series::normalized(lo, coeffs, order)
    }

    /// The one-term series for a monomial; rejects `order <= qpower`.
    pub fn make_monomial(m: &MonomialSpec, order: HalfExponent) -> Result<Self> {
        if order.0 <= m.qpower.0 {
            return Err(Error::BeyondOrder { qpower: m.qpower.0, order: order.0 });
        }
        Ok(Series::monomial(m, order.0))
    }

    /// The one-term series for a monomial, empty if beyond `order`.
    pub fn monomial(m: &MonomialSpec, order: i64) -> Self {
        Series::term(m.coefficient(), m.qpower.0, order)
    }

    /// `1 - m`.
    pub fn one_minus(m: &MonomialSpec, order: i64) -> Self {
        Series::one(order).sub(&Series::monomial(m, order))
    }

    /// `t^half_units` as an exact polynomial.
    pub fn q_half_power(half_units: i64) -> Self {
        Series::term(Coefficient::one(), half_units, EXACT)
    }

    fn normalized(mut base: i64, mut coeffs: Vec<Coefficient>, order: i64) -> Self {
        if order != EXACT {
            let keep = (order - base).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Series::zero(order);
        }
        if lead > 0 {
            coeffs.drain(..lead);
            base += lead as i64;
        }
        Series { base, coeffs, order }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn order_exp(&self) -> HalfExponent {
        HalfExponent(self.order)
    }

    pub fn is_exact(&self) -> bool {
        self.order == EXACT
    }

    /// Least exponent with a nonzero coefficient; `order` for the zero series.
    pub fn valuation(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.order
        } else {
            self.base
        }
    }

    /// Largest stored exponent, `None` for the zero series.
    pub fn max_exponent(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.base + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (HalfExponent, &Coefficient)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (HalfExponent(self.base + i as i64), c))
    }

    /// Coefficient at `t^half_units`, zero if absent.
    pub fn coefficient_at(&self, e: HalfExponent) -> Result<Coefficient> {
        if e.0 >= self.order {
            return Err(Error::OrderExhausted { requested: e.0, order: self.order });
        }
        Ok(self.coeff_raw(e.0).cloned().unwrap_or_default())
    }

    fn coeff_raw(&self, e: i64) -> Option<&Coefficient> {
        if e < self.base {
            return None;
        }
        self.coeffs.get((e - self.base) as usize)
    }

    /// Drops everything at or beyond `order` (never raises the order).
    pub fn truncate(&self, order: i64) -> Series {
        let o = order.min(self.order);
        Series::normalized(self.base, self.coeffs.clone(), o)
    }

    pub fn neg(&self) -> Series {
        Series { base: self.base, coeffs: self.coeffs.iter().map(|c| -c).collect(), order: self.order }
    }

    pub fn add(&self, other: &Series) -> Series {
        let order = self.order.min(other.order);
        if self.is_zero() {
            return other.truncate(order);
        }
        if other.is_zero() {
            return self.truncate(order);
        }
        let lo = self.base.min(other.base);
        let hi = self.max_exponent().unwrap().max(other.max_exponent().unwrap());
        let hi = if order == EXACT { hi } else { hi.min(order - 1) };
        if hi < lo {
            return Series::zero(order);
        }
        let mut coeffs = Vec::with_capacity((hi - lo + 1) as usize);
        for e in lo..=hi {
            let c = match (self.coeff_raw(e), other.coeff_raw(e)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => Coefficient::zero(),
            };
            coeffs.push(c);
        }
        Series::normalized(lo, coeffs, order)
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    /// Cauchy product truncated at `min(o1 + v2, o2 + v1)`.
    pub fn mul(&self, other: &Series) -> Series {
        let order = order_add(self.order, other.valuation()).min(order_add(other.order, self.valuation()));
        if self.is_zero() || other.is_zero() {
            return Series::zero(order);
        }
        let base = self.base + other.base;
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let len = if order == EXACT { full } else { full.min((order - base).max(0) as usize) };
        let mut out = vec![Coefficient::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= len {
                    break;
                }
                if !b.is_zero() {
                    out[k].add_mul_assign(a, b);
                }
            }
        }
        Series::normalized(base, out, order)
    }

    pub fn scale(&self, c: &Rational) -> Series {
        if c.is_zero() {
            return Series::zero(self.order);
        }
        Series { base: self.base, coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect(), order: self.order }
    }

    pub fn mul_coefficient(&self, c: &Coefficient) -> Series {
        if c.is_zero() {
            return Series::zero(self.order);
        }
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Series::normalized(self.base, coeffs, self.order)
    }

    /// Multiplies by the monomial `m`; a negative q-power lowers the order.
    pub fn mul_monomial(&self, m: &MonomialSpec) -> Series {
        let shift = m.qpower.0;
        let order = order_add(self.order, shift);
        if m.is_zero() {
            return Series::zero(order);
        }
        let c = m.coefficient();
        let coeffs = self.coeffs.iter().map(|x| x * &c).collect();
        Series::normalized(self.base + shift, coeffs, order)
    }

    /// Multiplies by `t^half_units`.
    pub fn shift(&self, half_units: i64) -> Series {
        Series { base: self.base + half_units, coeffs: self.coeffs.clone(), order: order_add(self.order, half_units) }
            .renormalize()
    }

    fn renormalize(self) -> Series {
        Series::normalized(self.base, self.coeffs, self.order)
    }

    /// `self * (1 - m)`.
    pub fn mul_binomial(&self, m: &MonomialSpec) -> Series {
        self.sub(&self.mul_monomial(m))
    }

    /// `self / (1 - m)`.
    pub fn div_binomial(&self, m: &MonomialSpec) -> Result<Series> {
        let p = m.qpower.0;
        if m.is_zero() {
            return Ok(self.clone());
        }
        if p == 0 {
            return match m.coefficient().as_constant() {
                Some(c) => {
                    let d = Rational::one() - c;
                    match d.recip() {
                        Some(r) => Ok(self.scale(&r)),
                        None => Err(Error::InvertNonUnit { leading: "0".into(), half_units: 0 }),
                    }
                }
                None => Err(Error::InvertNonUnit {
                    leading: (&Coefficient::one() - &m.coefficient()).to_string(),
                    half_units: 0,
                }),
            };
        }
        if p < 0 {
            // 1 - m = -m (1 - 1/m)
            let inv = m.inverse().ok_or_else(|| Error::InvertNonUnit {
                leading: m.neg().coefficient().to_string(),
                half_units: p,
            })?;
            return self.mul_monomial(&inv.neg()).div_binomial(&inv);
        }
        if self.order == EXACT {
            return Err(Error::UnboundedInverse);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let len = (self.order - self.base).max(0) as usize;
        let c = m.coefficient();
        let p = p as usize;
        let mut out: Vec<Coefficient> = Vec::with_capacity(len);
        for i in 0..len {
            let mut v = self.coeffs.get(i).cloned().unwrap_or_default();
            if i >= p && !out[i - p].is_zero() {
                v.add_mul_assign(&out[i - p], &c);
            }
            out.push(v);
        }
        Ok(Series::normalized(self.base, out, self.order))
    }

    /// Multiplicative inverse; the leading coefficient must be a nonzero constant.
    pub fn invert(&self) -> Result<Series> {
        if self.order == EXACT {
            return Err(Error::UnboundedInverse);
        }
        let Some(lead) = self.coeffs.first() else {
            return Err(Error::InvertNonUnit { leading: "0".into(), half_units: self.order });
        };
        let c0 = match lead.as_constant() {
            Some(c) if !c.is_zero() => c,
            _ => return Err(Error::InvertNonUnit { leading: lead.to_string(), half_units: self.base }),
        };
        let v = self.base;
        let inv0 = c0.recip().unwrap();
        let len = (self.order - 2 * v - (-v)).max(0) as usize;
        let mut w: Vec<Coefficient> = Vec::with_capacity(len);
        for k in 0..len {
            if k == 0 {
                w.push(Coefficient::constant(inv0.clone()));
                continue;
            }
            let mut acc = Coefficient::zero();
            let top = k.min(self.coeffs.len() - 1);
            for i in 1..=top {
                let ci = &self.coeffs[i];
                if ci.is_zero() || w[k - i].is_zero() {
                    continue;
                }
                acc.add_mul_assign(ci, &w[k - i]);
            }
            w.push(acc.scale(&(-&inv0)));
        }
        Ok(Series::normalized(-v, w, self.order - 2 * v))
    }

    pub fn div(&self, other: &Series) -> Result<Series> {
        Ok(self.mul(&other.invert()?))
    }

    /// Substitutes `q -> q^k`.
    pub fn rescale(&self, k: u32) -> Series {
        assert!(k > 0, "rescale factor must be positive");
        let k = k as i64;
        let mut coeffs = Vec::new();
        if !self.coeffs.is_empty() {
            coeffs = vec![Coefficient::zero(); (self.coeffs.len() - 1) * k as usize + 1];
            for (i, c) in self.coeffs.iter().enumerate() {
                coeffs[i * k as usize] = c.clone();
            }
        }
        let order = if self.order == EXACT { EXACT } else { self.order * k };
        Series::normalized(self.base * k, coeffs, order)
    }

    /// Coefficient-wise comparison below `e`.
    pub fn equal_up_to(&self, other: &Series, e: HalfExponent) -> Result<Verdict> {
        let bound = self.order.min(other.order);
        if e.0 > bound {
            return Err(Error::OrderExhausted { requested: e.0, order: bound });
        }
        let lo = self.valuation().min(other.valuation());
        let hi = self.max_exponent().unwrap_or(lo).max(other.max_exponent().unwrap_or(lo));
        let hi = hi.min(e.0.saturating_sub(1));
        for x in lo..=hi {
            let a = self.coeff_raw(x);
            let b = other.coeff_raw(x);
            let same = match (a, b) {
                (Some(a), Some(b)) => a == b,
                (Some(a), None) => a.is_zero(),
                (None, Some(b)) => b.is_zero(),
                (None, None) => true,
            };
            if !same {
                return Ok(Verdict::Fail {
                    exponent: HalfExponent(x),
                    lhs: a.cloned().unwrap_or_default(),
                    rhs: b.cloned().unwrap_or_default(),
                });
            }
        }
        Ok(Verdict::Pass)
    }

    /// Substitutes a rational value for a parameter in every coefficient.
    pub fn evaluate_param(&self, p: Param, value: &Rational) -> Series {
        let coeffs = self.coeffs.iter().map(|c| c.evaluate(p, value)).collect();
        Series::normalized(self.base, coeffs, self.order)
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Series>, order: i64) -> Series {
        items.into_iter().fold(Series::zero(order), |acc, s| acc.add(s))
    }
}

fn render_q(h: i64) -> String {
    if h == 2 {
        "q".to_string()
    } else if h % 2 == 0 && h > 0 {
        format!("q^{}", h / 2)
    } else if h % 2 == 0 {
        format!("q^{{{}}}", h / 2)
    } else {
        format!("q^{{{h}/2}}")
    }
}

/// Terms in increasing exponent order, e.g. `1 - 2*q + (1 + x)*q^{3/2} + O(q^5)`.
impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let single_neg = c.terms().len() == 1 && c.terms()[0].1.is_negative();
            let body = if single_neg { (-c).to_string() } else { c.to_string() };
            let sep = match (first, single_neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let text = if e.0 == 0 {
                body
            } else {
                let q = render_q(e.0);
                if body == "1" {
                    q
                } else if c.terms().len() > 1 {
                    format!("({body})*{q}")
                } else {
                    format!("{body}*{q}")
                }
            };
            write!(f, "{sep}{text}")?;
            first = false;
        }
        if self.order != EXACT {
            if first {
                write!(f, "O({})", render_q(self.order).replace("q^0", "1"))?;
            } else {
                write!(f, " + O({})", render_q(self.order))?;
            }
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Series {
        Series::q_half_power(2 * n)
    }

    fn poly(coeffs: &[(i64, i64)]) -> Series {
        Series::from_terms(coeffs.iter().map(|&(e, c)| (2 * e, Coefficient::from_integer(c))), EXACT)
    }

    fn geometric(order_q: i64) -> Series {
        Series::from_terms((0..order_q).map(|n| (2 * n, Coefficient::one())), 2 * order_q)
    }

    #[test]
    fn make_monomial_examples() {
        let s = Series::make_monomial(&MonomialSpec::q_half(2), HalfExponent::q(10)).unwrap();
        assert_eq!(s.valuation(), 2);
        assert_eq!(s.to_string(), "q + O(q^10)");
        let m: MonomialSpec = "-x*q^{1/2}".parse().unwrap();
        let s = Series::make_monomial(&m, HalfExponent::q(5)).unwrap();
        assert_eq!(s.to_string(), "-x*q^{1/2} + O(q^5)");
        assert!(matches!(
            Series::make_monomial(&MonomialSpec::int(1), HalfExponent::q(0)),
            Err(Error::BeyondOrder { .. })
        ));
    }

    #[test]
    fn add_examples() {
        assert_eq!(poly(&[(0, 1), (1, 1)]).add(&poly(&[(0, 1), (1, -1)])), poly(&[(0, 2)]));
        let a = Series::one(10);
        let b = Series::term(Coefficient::one(), 14, 20);
        let s = a.add(&b);
        assert_eq!(s.order(), 10);
        assert_eq!(s, Series::one(10));
        let x = Coefficient::param(Param::X);
        let s = Series::term(x.clone(), 2, EXACT).add(&q(1));
        assert_eq!(s, Series::term(&Coefficient::one() + &x, 2, EXACT));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(poly(&[(0, 1), (1, -1)]).mul(&poly(&[(0, 1), (1, 1)])), poly(&[(0, 1), (2, -1)]));
        assert_eq!(
            poly(&[(0, 1), (1, -1)]).mul(&poly(&[(0, 1), (2, -1)])),
            poly(&[(0, 1), (1, -1), (2, -1), (3, 1)])
        );
        let t = poly(&[(0, 1), (1, -1)]).mul(&geometric(20));
        assert_eq!(t, Series::one(40));
    }

    #[test]
    fn mul_order_propagation() {
        // (q^{-1} + O(q^3)) * (q^2 + O(q^5)) is known below min(3 + 4, 5 - 2) = 3 in q-units.
        let a = Series::term(Coefficient::one(), -2, 6);
        let b = Series::term(Coefficient::one(), 4, 10);
        assert_eq!(a.mul(&b).order(), 8);
    }

    #[test]
    fn invert_examples() {
        let inv = poly(&[(0, 1), (1, -1)]).truncate(40).invert().unwrap();
        assert_eq!(inv, geometric(20));
        let x = Coefficient::param(Param::X);
        let s = Series::one(40).sub(&Series::term(x.clone(), 2, 40));
        let inv = s.invert().unwrap();
        for n in 0..20 {
            assert_eq!(
                inv.coefficient_at(HalfExponent::q(n)).unwrap(),
                Coefficient::monomial(Rational::one(), Param::X, n as u32)
            );
        }
        let bad = Series::term(x, 0, 40).add(&q(1));
        assert!(matches!(bad.invert(), Err(Error::InvertNonUnit { .. })));
        assert!(matches!(q(1).invert(), Err(Error::UnboundedInverse)));
    }

    #[test]
    fn invert_laurent() {
        // 1/(q^{-1} - 1) = q/(1 - q)
        let s = Series::from_terms([(-2, Coefficient::one()), (0, Coefficient::from_integer(-1))], 20);
        let inv = s.invert().unwrap();
        assert_eq!(inv.valuation(), 2);
        assert_eq!(inv.order(), 24);
        assert!(inv.mul(&s).equal_up_to(&Series::one(EXACT), HalfExponent(20)).unwrap().is_pass());
    }

    #[test]
    fn coefficient_at_examples() {
        let s = poly(&[(0, 1), (1, -1), (2, -1)]);
        assert_eq!(s.coefficient_at(HalfExponent::q(1)).unwrap(), Coefficient::from_integer(-1));
        let t = Series::one(10);
        assert!(matches!(t.coefficient_at(HalfExponent::q(7)), Err(Error::OrderExhausted { .. })));
    }

    #[test]
    fn equal_up_to_examples() {
        let inv = poly(&[(0, 1), (1, -1)]).truncate(40).invert().unwrap();
        assert!(inv.equal_up_to(&geometric(20), HalfExponent::q(20)).unwrap().is_pass());
        let v = poly(&[(0, 1), (1, 1)])
            .equal_up_to(&poly(&[(0, 1), (1, 1), (3, 1)]), HalfExponent::q(10))
            .unwrap();
        assert_eq!(
            v,
            Verdict::Fail {
                exponent: HalfExponent::q(3),
                lhs: Coefficient::zero(),
                rhs: Coefficient::one()
            }
        );
        assert!(Series::one(10).equal_up_to(&Series::one(10), HalfExponent(11)).is_err());
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(poly(&[(0, 1), (1, 1)]).rescale(2), poly(&[(0, 1), (2, 1)]));
        let r = geometric(5).rescale(2);
        assert_eq!(r.order(), 20);
        assert_eq!(r, Series::from_terms((0..5).map(|n| (4 * n, Coefficient::one())), 20));
        assert_eq!(Series::q_half_power(1).rescale(2), q(1));
    }

    #[test]
    fn binomial_division_matches_inverse() {
        let m: MonomialSpec = "-x*q^{3/2}".parse().unwrap();
        let s = geometric(15);
        let a = s.div_binomial(&m).unwrap();
        let b = s.mul(&Series::one_minus(&m, 30).invert().unwrap());
        assert_eq!(a, b);
        let m: MonomialSpec = "q^{-1}".parse().unwrap();
        let a = s.div_binomial(&m).unwrap();
        let b = s.div(&Series::one_minus(&m, 30)).unwrap();
        assert!(a.equal_up_to(&b, HalfExponent(a.order().min(b.order()))).unwrap().is_pass());
        assert!(s.div_binomial(&MonomialSpec::param(Param::X)).is_err());
        assert_eq!(s.div_binomial(&MonomialSpec::int(-1)).unwrap(), s.scale(&Rational::new(1, 2)));
    }

    #[test]
    fn rendering() {
        let s = poly(&[(0, 1), (1, -2)]).add(&Series::term(
            &Coefficient::one() + &Coefficient::param(Param::X),
            3,
            EXACT,
        ));
        assert_eq!(s.truncate(10).to_string(), "1 - 2*q + (1 + x)*q^{3/2} + O(q^5)");
        assert_eq!(Series::zero(4).to_string(), "O(q^2)");
    }

    #[test]
    fn monomial_parse_and_display() {
        for text in ["0", "-1", "q", "-q^{1/2}", "q^2", "-x*q^{-1}", "1/2*b", "2", "x*q^{3/2}"] {
            let m: MonomialSpec = text.parse().unwrap();
            assert_eq!(m.to_string(), text, "round trip of {text}");
        }
        let m: MonomialSpec = "-q^{-1/2}".parse().unwrap();
        assert_eq!(m.qpower, HalfExponent(-1));
        assert!("y".parse::<MonomialSpec>().is_err());
        assert!("q^{1/3}".parse::<MonomialSpec>().is_err());
    }

    fn coefficient_strategy() -> impl Strategy<Value = Coefficient> {
        proptest::collection::vec((0u32..=2, -3i64..=3, 1i64..=3), 0..=3).prop_map(|ts| {
            Coefficient::from_terms(
                ts.into_iter().map(|(d, n, den)| (Exponents::single(Param::X, d), Rational::new(n, den))),
            )
        })
    }

    fn series_strategy() -> impl Strategy<Value = Series> {
        (-4i64..=4, proptest::collection::vec(coefficient_strategy(), 0..=12), 10i64..=40).prop_map(
            |(base, cs, order)| Series::from_terms(cs.into_iter().enumerate().map(|(i, c)| (base + i as i64, c)), order),
        )
    }

    /// A unit: nonzero rational leading coefficient at any valuation.
    fn unit_strategy() -> impl Strategy<Value = Series> {
        (series_strategy(), -4i64..=4, 1i64..=5, prop_oneof![Just(1i64), Just(-1)]).prop_map(
            |(tail, v, c, sign)| {
                let order = tail.order().max(v + 4);
                let tail = tail.shift(v + 1 - tail.valuation().min(tail.order()));
                Series::term(Coefficient::from_integer(sign * c), v, order).add(&tail.truncate(order))
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn invert_is_inverse(s in unit_strategy()) {
            let r = s.invert().unwrap();
            prop_assert_eq!(r.valuation(), -s.valuation());
            let p = s.mul(&r);
            prop_assert!(p.order() > 0);
            prop_assert!(p.equal_up_to(&Series::one(EXACT), HalfExponent(p.order())).unwrap().is_pass());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_laws(a in series_strategy(), b in series_strategy(), c in series_strategy()) {
            let ab = a.add(&b);
            prop_assert_eq!(&ab, &b.add(&a));
            prop_assert_eq!(ab.add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            let l = a.mul(&b).mul(&c);
            let r = a.mul(&b.mul(&c));
            let o = HalfExponent(l.order().min(r.order()));
            prop_assert!(l.equal_up_to(&r, o).unwrap().is_pass());
            let l = a.mul(&b.add(&c));
            let r = a.mul(&b).add(&a.mul(&c));
            let o = HalfExponent(l.order().min(r.order()));
            prop_assert!(l.equal_up_to(&r, o).unwrap().is_pass());
        }

        #[test]
        fn nothing_stored_at_or_beyond_order(a in series_strategy(), b in series_strategy()) {
            for s in [a.add(&b), a.mul(&b), a.rescale(3), a.neg().sub(&b)] {
                if let Some(m) = s.max_exponent() {
                    prop_assert!(m < s.order());
                }
                prop_assert!(s.terms().all(|(_, c)| !c.is_zero()));
            }
        }

        #[test]
        fn q_binomial_theorem(ai in 0usize..4, zi in 0usize..3) {
            use crate::qseries::{poch, poch_inf};
            let a = ["0", "q", "q^2", "-q"][ai].parse::<MonomialSpec>().unwrap();
            let z = ["q", "q^2", "-q^2"][zi].parse::<MonomialSpec>().unwrap();
            let order = HalfExponent::q(40);
            let step = HalfExponent::q(1);
            let mut lhs = Series::zero(order.0);
            for n in 0..40usize {
                let zn = z.pow(n as u32);
                if zn.qpower.0 >= order.0 {
                    break;
                }
                let term = poch(&a, step, n, order).unwrap().mul_monomial(&zn);
                lhs = lhs.add(&crate::qseries::div_poch(&term, &MonomialSpec::q_half(2), step, n).unwrap());
            }
            let rhs = poch_inf(&a.mul(&z), step, order).unwrap().div(&poch_inf(&z, step, order).unwrap()).unwrap();
            prop_assert!(lhs.equal_up_to(&rhs, order).unwrap().is_pass());
        }
    }
}
