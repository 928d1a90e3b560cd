//! Exact coefficient arithmetic.
//!
//! [`Rational`] is an always-reduced arbitrary precision fraction and
//! [`Coefficient`] is a sparse polynomial in the formal parameters
//! `x, a, b, z` with rational coefficients. Every coefficient of a
//! [`Series`](crate::series::Series) is a `Coefficient`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Arbitrary precision rational number, reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// Integer power; `0^0 = 1`, negative powers of zero return `None`.
    pub fn pow(&self, e: i32) -> Option<Self> {
        if e < 0 && self.is_zero() {
            return None;
        }
        Some(Rational(num_traits::Pow::pow(&self.0, e)))
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            num_traits::ToPrimitive::to_i64(self.0.numer())
        } else {
            None
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| format!("bad rational '{s}'"))?;
        let d: BigInt = d.parse().map_err(|_| format!("bad rational '{s}'"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in '{s}'"));
        }
        Ok(Rational::from_big(n, d))
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);
rational_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

/// The declared formal parameters, in canonical slot order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    X,
    A,
    B,
    Z,
}

impl Param {
    pub const ALL: [Param; 4] = [Param::X, Param::A, Param::B, Param::Z];

    pub fn slot(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> char {
        match self {
            Param::X => 'x',
            Param::A => 'a',
            Param::B => 'b',
            Param::Z => 'z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Param> {
        match c {
            'x' => Some(Param::X),
            'a' => Some(Param::A),
            'b' => Some(Param::B),
            'z' => Some(Param::Z),
            _ => None,
        }
    }
}

/// Exponent vector over `[x, a, b, z]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Exponents(pub [u32; 4]);

impl Exponents {
    pub const ZERO: Exponents = Exponents([0; 4]);

    pub fn single(p: Param, deg: u32) -> Self {
        let mut e = [0; 4];
        e[p.slot()] = deg;
        Exponents(e)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn degree(&self, p: Param) -> u32 {
        self.0[p.slot()]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn plus(&self, other: &Exponents) -> Exponents {
        Exponents([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
            self.0[3] + other.0[3],
        ])
    }
}

/// Sparse polynomial in the declared parameters with rational coefficients.
///
/// Terms are kept sorted ascending by exponent vector (lexicographic over
/// `x, a, b, z`) with no zero entries, so structural equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Coefficient {
    terms: Vec<(Exponents, Rational)>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Coefficient::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Coefficient::zero()
        } else {
            Coefficient { terms: vec![(Exponents::ZERO, c)] }
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Coefficient::constant(Rational::from_integer(n))
    }

    /// `c * p^deg`.
    pub fn monomial(c: Rational, p: Param, deg: u32) -> Self {
        Coefficient::term(c, Exponents::single(p, deg))
    }

    pub fn term(c: Rational, e: Exponents) -> Self {
        if c.is_zero() {
            Coefficient::zero()
        } else {
            Coefficient { terms: vec![(e, c)] }
        }
    }

    pub fn param(p: Param) -> Self {
        Coefficient::monomial(Rational::one(), p, 1)
    }

    /// Builds a canonical coefficient from arbitrary (possibly repeated, zero) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Self {
        let mut v: Vec<(Exponents, Rational)> = terms.into_iter().collect();
        v.sort_by_key(|a| a.0);
        let mut out: Vec<(Exponents, Rational)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += &c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Coefficient { terms: out }
    }

    pub fn terms(&self) -> &[(Exponents, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this coefficient has no parameter part.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(e, c)] if e.is_zero() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Largest exponent of `p` among the terms (0 for constants).
    pub fn degree_in(&self, p: Param) -> u32 {
        self.terms.iter().map(|(e, _)| e.degree(p)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Coefficient {
        if c.is_zero() {
            return Coefficient::zero();
        }
        Coefficient { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    /// Multiplies by `c * e` where `e` is a parameter monomial.
    pub fn mul_term(&self, c: &Rational, e: &Exponents) -> Coefficient {
        if c.is_zero() {
            return Coefficient::zero();
        }
        Coefficient { terms: self.terms.iter().map(|(te, v)| (te.plus(e), v * c)).collect() }
    }

    /// `self += a * b`.
    pub fn add_mul_assign(&mut self, a: &Coefficient, b: &Coefficient) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        if let ([(ea, ca)], [(eb, cb)]) = (a.terms.as_slice(), b.terms.as_slice()) {
            self.add_term(ea.plus(eb), ca * cb);
            return;
        }
        let prod = a * b;
        *self = &*self + &prod;
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        match self.terms.binary_search_by(|(te, _)| te.cmp(&e)) {
            Ok(i) => {
                self.terms[i].1 += &c;
                if self.terms[i].1.is_zero() {
                    self.terms.remove(i);
                }
            }
            Err(i) => {
                if !c.is_zero() {
                    self.terms.insert(i, (e, c));
                }
            }
        }
    }

    /// Substitutes a rational value for a parameter.
    pub fn evaluate(&self, p: Param, value: &Rational) -> Coefficient {
        Coefficient::from_terms(self.terms.iter().map(|(e, c)| {
            let d = e.degree(p);
            let mut ne = *e;
            ne.0[p.slot()] = 0;
            let v = value.pow(d as i32).expect("nonnegative power");
            (ne, c * &v)
        }))
    }
}

impl<'a> Add<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &'a Coefficient) -> Coefficient {
        let (l, r) = (&self.terms, &rhs.terms);
        let mut out = Vec::with_capacity(l.len() + r.len());
        let (mut i, mut j) = (0, 0);
        while i < l.len() && j < r.len() {
            match l[i].0.cmp(&r[j].0) {
                Ordering::Less => {
                    out.push(l[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(r[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let s = &l[i].1 + &r[j].1;
                    if !s.is_zero() {
                        out.push((l[i].0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&l[i..]);
        out.extend_from_slice(&r[j..]);
        Coefficient { terms: out }
    }
}

impl<'a> Sub<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &'a Coefficient) -> Coefficient {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &'a Coefficient) -> Coefficient {
        if self.is_zero() || rhs.is_zero() {
            return Coefficient::zero();
        }
        if let [(e, c)] = rhs.terms.as_slice() {
            return self.mul_term(c, e);
        }
        if let [(e, c)] = self.terms.as_slice() {
            return rhs.mul_term(c, e);
        }
        Coefficient::from_terms(self.terms.iter().flat_map(|(ea, ca)| {
            rhs.terms.iter().map(move |(eb, cb)| (ea.plus(eb), ca * cb))
        }))
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

impl From<Rational> for Coefficient {
    fn from(c: Rational) -> Self {
        Coefficient::constant(c)
    }
}

fn write_params(f: &mut fmt::Formatter<'_>, e: &Exponents) -> fmt::Result {
    let mut first = true;
    for p in Param::ALL {
        let d = e.degree(p);
        if d == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if d == 1 {
            write!(f, "{}", p.symbol())?;
        } else {
            write!(f, "{}^{}", p.symbol(), d)?;
        }
    }
    Ok(())
}

/// Canonical text: terms in canonical order joined by `" + "` / `" - "`,
/// e.g. `1 - 2*x + x^2`, `-1/2*x*a`.
impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_params(f, e)?;
            }
        }
        Ok(())
    }
}
