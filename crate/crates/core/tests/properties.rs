use std::collections::BTreeMap;

use baileykit::bailey::{andrews_pair, bailey_lemma_check, verify_pair};
use baileykit::identities::{coherence_checks, find_identity};
use baileykit::{check_identity, list_identities, lemma_2_2_check, HalfExponent, MonomialSpec, Status, VerificationReport};
use proptest::prelude::*;

fn b_values() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["0", "-1", "-q^{1/2}", "q", "symbolic"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn andrews_pairs_satisfy_the_lemma(b in b_values(), m in 1usize..=3, l in 1usize..=3) {
        let b: MonomialSpec = if b == "symbolic" { MonomialSpec::param(baileykit::Param::B) } else { b.parse().unwrap() };
        let p = andrews_pair(&MonomialSpec::int(1), &b).unwrap();
        prop_assert!(verify_pair(&p, 4, HalfExponent::q(16)).passed());
        prop_assert!(bailey_lemma_check(&p, m, l, HalfExponent::q(16)).passed());
    }

    #[test]
    fn lemma_2_2_over_the_domain(
        a in prop::sample::select(vec!["0", "-1", "q", "q^2", "-x*q^{-1}"]),
        b in prop::sample::select(vec!["-1", "-q^{1/2}", "q", "1/2", "-1/2"]),
        n in 0usize..=6,
    ) {
        let r = lemma_2_2_check(&a.parse().unwrap(), &b.parse().unwrap(), n, HalfExponent::q(12));
        prop_assert!(r.passed(), "{}", r);
    }

    /// The identity holds at every truncation, not just the default one.
    #[test]
    fn eq1_1_at_every_order(o in 4i64..40) {
        let r = check_identity("eq1.1", &BTreeMap::new(), Some(HalfExponent(o))).unwrap();
        prop_assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn grid_rows_of_eq2_11_hold(row in 0usize..39) {
        let case = find_identity("eq2.11").unwrap();
        let grid = case.grid();
        let b = case.bind(&grid[row % grid.len()]).unwrap();
        prop_assert!(case.run(&b, case.default_order).passed());
    }
}

#[test]
fn every_theorem_default_binding_passes_at_low_order() {
    for case in list_identities().iter().filter(|c| !c.is_diagnostic()) {
        let r = check_identity(case.id, &BTreeMap::new(), Some(HalfExponent(20))).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn diagnostics_report_a_location() {
    for case in list_identities().iter().filter(|c| c.is_diagnostic()) {
        let r = check_identity(case.id, &BTreeMap::new(), Some(HalfExponent(40))).unwrap();
        assert!(r.diagnostic);
        assert_ne!(r.status, Status::Error, "{r}");
        assert_eq!(r.status == Status::Fail, r.first_mismatch.is_some());
    }
}

#[test]
fn reports_round_trip_through_json() {
    let mut reps: Vec<VerificationReport> = coherence_checks(HalfExponent(24));
    reps.push(check_identity("rem3.13-modular", &BTreeMap::new(), None).unwrap());
    for r in reps {
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<VerificationReport>(&text).unwrap(), r);
    }
}
