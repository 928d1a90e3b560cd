use std::process::{Command, Output};

use baileykit::{Status, VerificationReport};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_baileykit")).args(args).output().expect("binary runs")
}

fn reports(out: &Output) -> Vec<VerificationReport> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("report json"))
        .collect()
}

#[test]
fn run_eq1_3_passes_with_json() {
    let out = run(&["run", "--id", "eq1.3", "--order", "120"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = reports(&out);
    assert_eq!(rs.len(), 1);
    assert_eq!(rs[0].status, Status::Pass);
    assert_eq!(rs[0].order_half_units, 120);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["run", "--id", "nosuch"]).status.code(), Some(2));
    assert_eq!(run(&["run", "--id", "thm3.1-3.1", "--param", "M=9"]).status.code(), Some(2));
    assert_eq!(run(&["run", "--id", "eq1.3", "--order", "0"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["pair", "--name", "bogus(", "--n-max", "2", "--order", "10"]).status.code(), Some(2));
}

#[test]
fn failing_pair_exits_one_with_index() {
    let out = run(&["pair", "--name", "andrews-literal(1,-1)", "--n-max", "3", "--order", "20"]);
    assert_eq!(out.status.code(), Some(1));
    let rs = reports(&out);
    let m = rs[0].first_mismatch.as_ref().unwrap();
    assert_eq!(m.index, Some(1));
}

#[test]
fn diagnostics_do_not_gate() {
    let out = run(&["run", "--id", "rem3.13-modular", "--order", "80"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = reports(&out);
    assert!(rs[0].diagnostic);
    assert_eq!(rs[0].status, Status::Fail);
    assert!(String::from_utf8_lossy(&out.stderr).contains("diagnostics: 0 passed, 1 failed"));
}

#[test]
fn params_and_text_format() {
    let out = run(&[
        "run", "--id", "thm3.2-3.8", "--param", "x=-q^{1/2}", "--order", "30", "--format", "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("thm3.2-3.8 [pass] x=-q^{1/2}"), "{text}");
}

#[test]
fn json_round_trips_for_every_suite_report() {
    let out = run(&["suite", "--order", "16"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    for line in text.lines() {
        let r: VerificationReport = serde_json::from_str(line).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), line);
    }
    assert!(text.lines().count() > 500);
}

#[test]
fn partitions_csv() {
    let out = run(&["partitions", "--max-n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "n,omega,hecke_coeff,I,status\n0,1,1,1,pass\n1,-2,-2,-2,pass\n2,-1,-1,-1,pass\n"
    );
}

#[test]
fn list_names_every_identity() {
    let out = run(&["list"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for id in ["eq1.3", "lemma2.2", "eq2.11", "thm3.1-3.2", "thm3.2-3.11", "rem3.12-modular"] {
        assert!(text.lines().any(|l| l.starts_with(id)), "{id}");
    }
}
