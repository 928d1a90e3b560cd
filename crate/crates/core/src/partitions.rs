//! Partition counts behind the alternating sum ω(n), its Hecke-sum and
//! quadratic-form counterparts, and the λ, μ ↦ ϖ construction.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::coeffring::Rational;
use crate::error::{Error, Result};
use crate::qseries::{div_poch, hecke_double_sum};
use crate::report::{Mismatch, VerificationReport};
use crate::series::{HalfExponent, MonomialSpec, Series};

/// Parts in weakly decreasing order, all positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts the parts; rejects zero parts.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Number of parts, `#(π)`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Largest part, `L(π)`; zero for the empty partition.
    pub fn largest(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let parts = (1..=self.largest())
            .map(|i| self.parts.iter().take_while(|&&p| p >= i).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Multiplicity of the part `i`.
    pub fn multiplicity(&self, i: u32) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", ps.join(","))
    }
}

/// All partitions of `n` into parts at most `max_part`, largest parts first.
pub fn partitions_bounded(n: u32, max_part: u32) -> Vec<Partition> {
    fn go(rem: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=cap.min(rem)).rev() {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_part, &mut Vec::new(), &mut out);
    out
}

fn check_rn(r: i64, big_n: i64) -> Result<()> {
    if r < 0 || big_n < 0 || r > big_n {
        return Err(Error::InvalidArgument(format!("need 0 <= r <= N, got r={r}, N={big_n}")));
    }
    Ok(())
}

/// Partitions of `n` into parts `<= N` where parts `<= r` appear at least
/// once and parts in `(r, N]` appear exactly once, counted by enumeration.
pub fn p_rn_enum(r: i64, big_n: i64, n: i64) -> Result<u64> {
    check_rn(r, big_n)?;
    if n < 0 {
        return Err(Error::InvalidArgument(format!("negative weight {n}")));
    }
    let (r, big_n) = (r as u32, big_n as u32);
    // Walk multiplicity vectors for parts N, N-1, ..., 1, pruning as soon as a
    // multiplicity breaks the rule for its part.
    fn go(part: u32, rem: u64, r: u32) -> u64 {
        if part == 0 {
            return u64::from(rem == 0);
        }
        let p = part as u64;
        let (lo, hi) = if part > r { (1, 1) } else { (1, rem / p) };
        let mut total = 0;
        for m in lo..=hi {
            if m * p > rem {
                break;
            }
            total += go(part - 1, rem - m * p, r);
        }
        total
    }
    Ok(go(big_n, n as u64, r))
}

/// `q^(N(N+1)/2) / (q; q)_r`.
pub fn p_rn_gf(r: i64, big_n: i64, order: HalfExponent) -> Result<Series> {
    check_rn(r, big_n)?;
    let lead = big_n * (big_n + 1);
    let s = Series::monomial(&MonomialSpec::q_half(lead), order.0);
    div_poch(&s, &MonomialSpec::q_half(2), HalfExponent::q(1), r as usize)
}

/// Enlarges `mu` to `τ` with `τ_i = N - (i-1) + μ_i` for `i <= N` and
/// `τ_i = μ_i` beyond, then conjugates.
pub fn construct_varpi(big_n: u32, mu: &Partition) -> Partition {
    let len = (big_n as usize).max(mu.len());
    let tau: Vec<u32> = (0..len)
        .map(|i| {
            let m = mu.parts.get(i).copied().unwrap_or(0);
            if i < big_n as usize {
                big_n - i as u32 + m
            } else {
                m
            }
        })
        .filter(|&p| p > 0)
        .collect();
    Partition { parts: tau }.conjugate()
}

/// Largest `N` with `N(N+1)/2 <= n`.
fn max_staircase(n: i64) -> i64 {
    let mut big_n = 0;
    while (big_n + 1) * (big_n + 2) / 2 <= n {
        big_n += 1;
    }
    big_n
}

/// `ω(n) = Σ_{N, 0 <= r <= N} (-1)^N p_{r,N}(n)`.
pub fn omega(n: i64) -> Result<i64> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("negative weight {n}")));
    }
    let mut total = 0i64;
    for big_n in 0..=max_staircase(n) {
        let sign = if big_n % 2 == 0 { 1 } else { -1 };
        for r in 0..=big_n {
            total += sign * p_rn_enum(r, big_n, n)? as i64;
        }
    }
    Ok(total)
}

/// Wedge representatives `(x, y)` of `3y^2 - x^2 = m` with `y > 0`,
/// `x ≡ 1 (mod 6)` and `-3y/2 < x < 3y/2`.
pub fn wedge_representatives(m: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    // Inside the wedge 3y^2 - x^2 > 3y^2/4, so y^2 < 4m/3.
    let mut y = 1i64;
    while 3 * y * y < 4 * m {
        let d = 3 * y * y - m;
        if d >= 0 {
            let x = isqrt(d);
            if x * x == d {
                for x in if x == 0 { vec![0] } else { vec![x, -x] } {
                    if x.rem_euclid(6) == 1 && 2 * x.abs() < 3 * y {
                        out.push((x, y));
                    }
                }
            }
        }
        y += 1;
    }
    out.sort_unstable();
    out
}

fn isqrt(d: i64) -> i64 {
    let mut r = (d as f64).sqrt() as i64;
    while r * r > d {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= d {
        r += 1;
    }
    r
}

/// Excess of representatives with `x + 3y ≡ 4` over those with `x + 3y ≡ 10 (mod 12)`.
pub fn class_excess_i(m: i64) -> Result<i64> {
    if m <= 0 || m % 24 != 2 {
        return Err(Error::InvalidArgument(format!("I(m) needs m > 0 with m ≡ 2 (mod 24), got {m}")));
    }
    let mut total = 0;
    for (x, y) in wedge_representatives(m) {
        match (x + 3 * y).rem_euclid(12) {
            4 => total += 1,
            10 => total -= 1,
            _ => {}
        }
    }
    Ok(total)
}

/// One row of the three-way table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TheoremRow {
    pub n: i64,
    pub omega: i64,
    pub hecke: i64,
    pub class_excess: i64,
}

impl TheoremRow {
    pub fn agrees(&self) -> bool {
        self.omega == self.hecke && self.hecke == self.class_excess
    }
}

/// Rows `n = 0..=n_max` of ω(n), the Hecke coefficient at `q^(24n+2)` and `I(24n+2)`.
pub fn theorem_1_1_table(n_max: i64) -> Result<Vec<TheoremRow>> {
    use rayon::prelude::*;
    let order = HalfExponent::q(24 * n_max + 3);
    let hecke = hecke_double_sum(order)?;
    (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let m = 24 * n + 2;
            let h = hecke
                .coefficient_at(HalfExponent::q(m))?
                .as_constant()
                .and_then(|c: Rational| c.to_i64())
                .ok_or_else(|| Error::InvalidArgument("non-integral Hecke coefficient".into()))?;
            Ok(TheoremRow { n, omega: omega(n)?, hecke: h, class_excess: class_excess_i(m)? })
        })
        .collect()
}

/// Asserts ω(n) = Hecke coefficient = I(24n+2) for `0 <= n <= n_max`.
pub fn theorem_1_1_check(n_max: i64) -> VerificationReport {
    let start = Instant::now();
    let mut params = BTreeMap::new();
    params.insert("n_max".to_string(), n_max.to_string());
    let report = VerificationReport::new("thm1.1", params, HalfExponent::q(24 * n_max + 3));
    let rows = match theorem_1_1_table(n_max) {
        Ok(rows) => rows,
        Err(e) => return report.error_with(&e).timed(start),
    };
    for row in rows {
        if row.agrees() {
            continue;
        }
        let (sides, lhs, rhs) = if row.omega != row.hecke {
            ([0, 1], row.omega, row.hecke)
        } else {
            ([1, 2], row.hecke, row.class_excess)
        };
        return report
            .fail_with(Mismatch {
                exponent_half_units: 2 * (24 * row.n + 2),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
                sides: Some(sides),
                index: Some(row.n as usize),
            })
            .timed(start);
    }
    report.timed(start)
}
