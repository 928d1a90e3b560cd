//! The batch of checks behind the `suite` subcommand.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::bailey::{bailey_lemma_check, parse_pair, transform_s2, transform_s5, verify_pair, BaileyPair};
use crate::error::Result;
use crate::partitions::theorem_1_1_check;
use crate::report::{Status, VerificationReport};
use crate::series::{HalfExponent, MonomialSpec, Series};

use super::{builders, compare_sides, list_identities, Bindings, Value};

const PAIR_ORDER: HalfExponent = HalfExponent::q(30);

const PAIRS: [&str; 9] = [
    "unit",
    "andrews(1,0)",
    "andrews(1,-1)",
    "andrews(1,-q^{1/2})",
    "andrews(1,symbolic)",
    "andrews(q,-1)",
    "andrews(q^2,symbolic)",
    "thm2.3-first(symbolic)",
    "thm2.3-second(symbolic)",
];

const LEMMA_PAIRS: [&str; 3] = ["unit", "andrews(1,-1)", "thm2.3-first(symbolic)"];

type Job = Box<dyn Fn() -> VerificationReport + Send + Sync>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuiteSummary {
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub diagnostics_passed: usize,
    pub diagnostics_failed: usize,
}

impl SuiteSummary {
    pub fn tally(reports: &[VerificationReport]) -> Self {
        let mut s = SuiteSummary::default();
        for r in reports {
            match (r.diagnostic, r.status) {
                (true, Status::Pass) => s.diagnostics_passed += 1,
                (true, _) => s.diagnostics_failed += 1,
                (false, Status::Pass) => s.passed += 1,
                (false, Status::Fail) => s.failed += 1,
                (false, Status::Error) => s.errors += 1,
            }
        }
        s
    }

    /// True when every non-diagnostic check passed.
    pub fn gate(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }
}

fn diag(mut r: VerificationReport) -> VerificationReport {
    r.diagnostic = true;
    r
}

fn pair_jobs() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for name in PAIRS {
        jobs.push(Box::new(move || match parse_pair(name) {
            Ok(p) => verify_pair(&p, 8, PAIR_ORDER),
            Err(e) => VerificationReport::new(name, BTreeMap::new(), PAIR_ORDER).error_with(&e),
        }));
        for t in [transform_s2 as fn(&BaileyPair) -> Result<BaileyPair>, transform_s5] {
            // Transforms that do not apply to a base (odd power of t, or a = 1 for S5) are skipped.
            if let Ok(tp) = parse_pair(name).and_then(|p| t(&p)) {
                jobs.push(Box::new(move || verify_pair(&tp, 6, PAIR_ORDER)));
            }
        }
    }
    jobs.push(Box::new(|| match parse_pair("andrews-literal(1,-1)") {
        Ok(p) => diag(verify_pair(&p, 4, PAIR_ORDER)),
        Err(e) => diag(VerificationReport::new("andrews-literal(1,-1)", BTreeMap::new(), PAIR_ORDER).error_with(&e)),
    }));
    for name in LEMMA_PAIRS {
        for m in 1..=3 {
            for l in 1..=3 {
                jobs.push(Box::new(move || match parse_pair(name) {
                    Ok(p) => bailey_lemma_check(&p, m, l, PAIR_ORDER),
                    Err(e) => VerificationReport::new("lemma2.1", BTreeMap::new(), PAIR_ORDER).error_with(&e),
                }));
            }
        }
    }
    jobs
}

struct Coherence {
    label: &'static str,
    specialize: fn(HalfExponent) -> Result<Vec<Series>>,
    target: fn(HalfExponent) -> Result<Vec<Series>>,
}

fn x_bound(s: &str) -> Bindings {
    Bindings::new().with("x", Value::Monomial(s.parse().expect("monomial")))
}

/// Keeps the first and last members of a three-member chain.
fn ends(mut v: Vec<Series>) -> Vec<Series> {
    let last = v.pop().expect("non-empty chain");
    v.truncate(1);
    v.push(last);
    v
}

/// Members of a base-q chain at `x`, rewritten in base q² and divided by `1 + q` if asked.
fn doubled(
    build: fn(&Bindings, HalfExponent) -> Result<Vec<Series>>,
    x: &str,
    o: HalfExponent,
    over_one_plus_q: bool,
) -> Result<Vec<Series>> {
    let half = HalfExponent((o.0 + 1) / 2);
    ends(build(&x_bound(x), half)?)
        .into_iter()
        .map(|s| {
            let s = s.rescale(2);
            if over_one_plus_q {
                s.div_binomial(&MonomialSpec::scaled_q(-1, 2))
            } else {
                Ok(s)
            }
        })
        .collect()
}

const COHERENCE: [Coherence; 5] = [
    Coherence {
        label: "thm3.2-3.5@x=0->thm3.2-3.6",
        specialize: |o| Ok(ends(builders::thm3_5(&x_bound("0"), o)?)),
        target: |o| builders::thm3_6(&Bindings::new(), o),
    },
    Coherence {
        label: "thm3.2-3.5@x=-q^{1/2}->thm3.2-3.7",
        specialize: |o| doubled(builders::thm3_5, "-q^{1/2}", o, true),
        target: |o| builders::thm3_7(&Bindings::new(), o),
    },
    Coherence {
        label: "thm3.2-3.8@x=0->thm3.2-3.9",
        specialize: |o| doubled(builders::thm3_8, "0", o, false),
        target: |o| builders::thm3_9(&Bindings::new(), o),
    },
    Coherence {
        label: "thm3.2-3.8@x=-1->thm3.2-3.10",
        specialize: |o| doubled(builders::thm3_8, "-1", o, false),
        target: |o| builders::thm3_10(&Bindings::new(), o),
    },
    Coherence {
        label: "thm3.2-3.8@x=-q^{1/2}->thm3.2-3.11",
        specialize: |o| doubled(builders::thm3_8, "-q^{1/2}", o, true),
        target: |o| builders::thm3_11(&Bindings::new(), o),
    },
];

/// Checks that each specialized identity is the stated specialization of its parent,
/// member by member (first with first, last with last).
pub fn coherence_checks(order: HalfExponent) -> Vec<VerificationReport> {
    COHERENCE.par_iter().map(|c| coherence_one(c, order)).collect()
}

fn coherence_one(c: &Coherence, order: HalfExponent) -> VerificationReport {
    let start = Instant::now();
    let mut params = BTreeMap::new();
    params.insert("case".to_string(), c.label.to_string());
    let report = VerificationReport::new("coherence", params, order);
    let run = || -> Result<Option<crate::report::Mismatch>> {
        let a = (c.specialize)(order)?;
        let b = (c.target)(order)?;
        for (i, (s, t)) in a.iter().zip(&b).enumerate() {
            if let Some(mut m) = compare_sides(&[s.clone(), t.clone()], order)? {
                m.sides = Some([i, i]);
                return Ok(Some(m));
            }
        }
        Ok(None)
    };
    match run() {
        Ok(None) => report.timed(start),
        Ok(Some(m)) => report.fail_with(m).timed(start),
        Err(e) => report.error_with(&e).timed(start),
    }
}

/// Every registered identity over its grid, thm1.1 to n = 40, pair closure,
/// Bailey's lemma and the specialization checks. Output order is fixed.
pub fn run_suite(order: Option<HalfExponent>) -> Vec<VerificationReport> {
    let mut jobs: Vec<Job> = Vec::new();
    for case in list_identities() {
        let o = if case.exact { case.default_order } else { order.unwrap_or(case.default_order) };
        for row in case.grid() {
            jobs.push(Box::new(move || match case.bind(&row) {
                Ok(b) => case.run(&b, o),
                Err(e) => VerificationReport::new(case.id, row.clone(), o).error_with(&e),
            }));
        }
    }
    jobs.push(Box::new(|| theorem_1_1_check(40)));
    jobs.extend(pair_jobs());
    let coherence_order = order.unwrap_or(HalfExponent::q(30));
    for c in &COHERENCE {
        jobs.push(Box::new(move || coherence_one(c, coherence_order)));
    }
    jobs.par_iter().map(|j| j()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coherence_holds() {
        for r in coherence_checks(HalfExponent::q(20)) {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn summary_separates_diagnostics() {
        let mut a = VerificationReport::new("x", BTreeMap::new(), HalfExponent(1));
        a.status = Status::Fail;
        let b = diag(a.clone());
        let s = SuiteSummary::tally(&[a, b]);
        assert_eq!((s.failed, s.diagnostics_failed), (1, 1));
        assert!(!s.gate());
    }
}
