//! q-Pochhammer symbols, infinite products, q-binomials and the Hecke double sum.

use std::collections::BTreeMap;

use crate::coeffring::{Coefficient, Rational};
use crate::error::{Error, Result};
use crate::series::{HalfExponent, MonomialSpec, Series, EXACT};

fn check_step(step: HalfExponent) -> Result<i64> {
    if step.0 <= 0 {
        return Err(Error::InvalidStep(step.0));
    }
    Ok(step.0)
}

/// `(a; q^(step/2))_n` truncated at `order`.
pub fn poch(a: &MonomialSpec, step: HalfExponent, n: usize, order: HalfExponent) -> Result<Series> {
    let step = check_step(step)?;
    // Factors with negative q-power lower the valuation, so those are
    // multiplied exactly and the truncation applied at the end.
    let negative = a.qpower.0 < 0;
    let mut s = Series::one(if negative { EXACT } else { order.0 });
    for k in 0..n {
        s = s.mul_binomial(&a.shift(k as i64 * step));
    }
    Ok(s.truncate(order.0))
}

/// `(a; q^(step/2))_∞` up to `order`.
pub fn poch_inf(a: &MonomialSpec, step: HalfExponent, order: HalfExponent) -> Result<Series> {
    if step.0 <= 0 {
        return Err(Error::DivergentProduct(format!("step {} is not positive", step.0)));
    }
    if a.qpower.0 < 0 {
        return Err(Error::DivergentProduct(format!("argument {a} has negative q-power")));
    }
    mul_poch_inf(&Series::one(order.0), a, step)
}

/// `s * (a; q^(step/2))_∞`, using only the factors that matter below `s.order()`.
pub fn mul_poch_inf(s: &Series, a: &MonomialSpec, step: HalfExponent) -> Result<Series> {
    let step = check_step(step)?;
    if a.qpower.0 < 0 {
        return Err(Error::DivergentProduct(format!("argument {a} has negative q-power")));
    }
    if s.is_exact() {
        return Err(Error::UnboundedInverse);
    }
    let reach = s.order() - s.valuation();
    let mut out = s.clone();
    let mut m = a.clone();
    while m.qpower.0 < reach {
        out = out.mul_binomial(&m);
        m = m.shift(step);
    }
    Ok(out)
}

/// `s / (a; q^(step/2))_∞`.
pub fn div_poch_inf(s: &Series, a: &MonomialSpec, step: HalfExponent) -> Result<Series> {
    let step = check_step(step)?;
    if a.qpower.0 < 0 {
        return Err(Error::DivergentProduct(format!("argument {a} has negative q-power")));
    }
    if s.is_exact() {
        return Err(Error::UnboundedInverse);
    }
    let reach = s.order() - s.valuation();
    let mut out = s.clone();
    let mut m = a.clone();
    while m.qpower.0 < reach {
        out = out.div_binomial(&m)?;
        m = m.shift(step);
    }
    Ok(out)
}

/// `s * (a; q^(step/2))_n`.
pub fn mul_poch(s: &Series, a: &MonomialSpec, step: HalfExponent, n: usize) -> Result<Series> {
    let step = check_step(step)?;
    let mut out = s.clone();
    for k in 0..n {
        out = out.mul_binomial(&a.shift(k as i64 * step));
    }
    Ok(out)
}

/// `s / (a; q^(step/2))_n`.
pub fn div_poch(s: &Series, a: &MonomialSpec, step: HalfExponent, n: usize) -> Result<Series> {
    let step = check_step(step)?;
    let mut out = s.clone();
    for k in 0..n {
        out = out.div_binomial(&a.shift(k as i64 * step))?;
    }
    Ok(out)
}

/// The Gaussian binomial `[n choose k]_q` as an exact polynomial.
pub fn qbinomial(n: usize, k: usize) -> Series {
    if k > n {
        return Series::zero(EXACT);
    }
    // Row of [m choose j] for j = 0..=k, built by [m,j] = [m-1,j-1] + q^j [m-1,j].
    let mut row: Vec<Series> = vec![Series::one(EXACT)];
    for m in 1..=n {
        let mut next = Vec::with_capacity(row.len() + 1);
        for j in 0..=m.min(k) {
            let left = if j > 0 { row[j - 1].clone() } else { Series::zero(EXACT) };
            let right = row.get(j).map(|s| s.shift(2 * j as i64)).unwrap_or_else(|| Series::zero(EXACT));
            next.push(left.add(&right));
        }
        row = next;
    }
    row.swap_remove(k)
}

/// `Σ_{k≥0, 2|l|≤k} (-1)^(l+k) q^(3(2k+1)^2 - (6l+1)^2)` below `order`.
pub fn hecke_double_sum(order: HalfExponent) -> Result<Series> {
    if order.is_exact() {
        return Err(Error::InvalidArgument("the Hecke double sum needs a finite order".into()));
    }
    let mut acc: BTreeMap<i64, i64> = BTreeMap::new();
    let mut k: i64 = 0;
    // min over admissible l of the exponent is 3k^2 + 6k + 2
    while 2 * (3 * k * k + 6 * k + 2) < order.0 {
        let lmax = k / 2;
        for l in -lmax..=lmax {
            let e = 3 * (2 * k + 1).pow(2) - (6 * l + 1).pow(2);
            debug_assert!(e >= 3 * k * k + 6 * k + 2);
            if 2 * e < order.0 {
                let sign = if (l + k).rem_euclid(2) == 0 { 1 } else { -1 };
                *acc.entry(2 * e).or_default() += sign;
            }
        }
        k += 1;
    }
    Ok(Series::from_terms(
        acc.into_iter().map(|(e, c)| (e, Coefficient::constant(Rational::from_integer(c)))),
        order.0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Param;
    use proptest::prelude::*;

    fn q1() -> HalfExponent {
        HalfExponent::q(1)
    }

    fn ints(s: &Series, upto_q: i64) -> Vec<i64> {
        (0..upto_q)
            .map(|n| {
                s.coefficient_at(HalfExponent::q(n))
                    .unwrap()
                    .as_constant()
                    .unwrap()
                    .to_i64()
                    .unwrap()
            })
            .collect()
    }

    fn pentagonal(order_q: i64) -> Vec<i64> {
        let mut v = vec![0; order_q as usize];
        for j in -40i64..=40 {
            let e = j * (3 * j - 1) / 2;
            if e < order_q {
                v[e as usize] += if j % 2 == 0 { 1 } else { -1 };
            }
        }
        v
    }

    #[test]
    fn finite_products() {
        let s = poch(&MonomialSpec::q_half(2), q1(), 3, HalfExponent::q(20)).unwrap();
        assert_eq!(ints(&s, 8), vec![1, -1, -1, 0, 1, 1, -1, 0]);
        let s = poch(&MonomialSpec::param(Param::A), q1(), 0, HalfExponent::q(5)).unwrap();
        assert_eq!(s, Series::one(10));
        let s = poch(&MonomialSpec::int(-1), q1(), 2, HalfExponent::q(10)).unwrap();
        assert_eq!(ints(&s, 3), vec![2, 2, 0]);
        assert!(matches!(
            poch(&MonomialSpec::int(1), HalfExponent(0), 2, HalfExponent::q(4)),
            Err(Error::InvalidStep(0))
        ));
    }

    #[test]
    fn negative_power_argument_is_exact_before_truncation() {
        // (q^{-2}; q)_3 = (1 - q^{-2})(1 - q^{-1})(1 - 1) = 0
        let s = poch(&MonomialSpec::q_half(-4), q1(), 3, HalfExponent::q(4)).unwrap();
        assert!(s.is_zero());
        // (q^{-1}; q)_2 = (1 - q^{-1})(1 - 1) = 0 and (q^{-1}; q)_1 = 1 - q^{-1}
        let s = poch(&MonomialSpec::q_half(-2), q1(), 1, HalfExponent::q(4)).unwrap();
        assert_eq!(s.to_string(), "-q^{-1} + 1 + O(q^4)");
    }

    #[test]
    fn infinite_products() {
        let s = poch_inf(&MonomialSpec::q_half(2), q1(), HalfExponent::q(13)).unwrap();
        assert_eq!(ints(&s, 13), vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]);
        let s = poch_inf(&MonomialSpec::q_half(2), q1(), HalfExponent::q(300)).unwrap();
        assert_eq!(ints(&s, 300), pentagonal(300));
        assert_eq!(poch_inf(&MonomialSpec::zero(), q1(), HalfExponent::q(9)).unwrap(), Series::one(18));
        let s = poch_inf(&MonomialSpec::param(Param::X).neg(), q1(), HalfExponent::q(3)).unwrap();
        let x = Coefficient::param(Param::X);
        let xx = &x * &x;
        assert_eq!(s.coefficient_at(HalfExponent(0)).unwrap(), &Coefficient::one() + &x);
        assert_eq!(s.coefficient_at(HalfExponent::q(1)).unwrap(), &x + &xx);
        assert_eq!(s.coefficient_at(HalfExponent::q(2)).unwrap(), &x + &xx);
        assert!(matches!(
            poch_inf(&MonomialSpec::q_half(-1), q1(), HalfExponent::q(3)),
            Err(Error::DivergentProduct(_))
        ));
        assert!(poch_inf(&MonomialSpec::q_half(1), HalfExponent(0), HalfExponent::q(3)).is_err());
    }

    #[test]
    fn hecke_examples() {
        let h = hecke_double_sum(HalfExponent::q(60)).unwrap();
        let at = |n| h.coefficient_at(HalfExponent::q(n)).unwrap();
        assert_eq!(at(2), Coefficient::one());
        assert_eq!(at(26), Coefficient::from_integer(-2));
        assert_eq!(at(3), Coefficient::zero());
        let h = hecke_double_sum(HalfExponent::q(2000)).unwrap();
        for (e, _) in h.terms() {
            assert_eq!(e.0 % 2, 0);
            assert_eq!((e.0 / 2).rem_euclid(24), 2);
        }
    }

    #[test]
    fn qbinomial_small() {
        // [4 choose 2] = 1 + q + 2q^2 + q^3 + q^4
        assert_eq!(ints(&qbinomial(4, 2).truncate(20), 6), vec![1, 1, 2, 1, 1, 0]);
        assert_eq!(qbinomial(3, 0), Series::one(EXACT));
        assert!(qbinomial(2, 3).is_zero());
    }

    fn monomial_strategy() -> impl Strategy<Value = MonomialSpec> {
        (-3i64..=3, 0u32..=1, 0i64..=4).prop_map(|(c, d, h)| {
            let base = if d == 1 { MonomialSpec::param(Param::X) } else { MonomialSpec::int(1) };
            base.mul(&MonomialSpec::scaled_q(c, h))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn poch_recurrence(a in monomial_strategy(), step in 1i64..=3, n in 0usize..=20) {
            let order = HalfExponent(40);
            let step = HalfExponent(step);
            let lhs = poch(&a, step, n + 1, order).unwrap();
            let rhs = poch(&a, step, n, order).unwrap().mul(&Series::one_minus(&a.shift(n as i64 * step.0), order.0));
            prop_assert!(lhs.equal_up_to(&rhs, order).unwrap().is_pass());
        }

        #[test]
        fn poch_inf_splits(a in monomial_strategy(), step in 1i64..=3, n in 0usize..=10) {
            let order = HalfExponent(40);
            let step = HalfExponent(step);
            let lhs = poch_inf(&a, step, order).unwrap();
            let rhs = poch(&a, step, n, order).unwrap()
                .mul(&poch_inf(&a.shift(n as i64 * step.0), step, order).unwrap());
            prop_assert!(lhs.equal_up_to(&rhs, order).unwrap().is_pass());
        }
    }
}
