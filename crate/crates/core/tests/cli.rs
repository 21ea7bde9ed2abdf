//! The batch front end: report contents, schema round trips, determinism and exit codes.

use affinisation::cli::{
    execute, CheckIsomResult, Command, NormalizeResult, Options, Report, RootsResult, TwistedEnergyResult,
};
use affinisation::energy::Minimum;
use affinisation::rational::qf;
use affinisation::rootdata::Functional;
use serde::de::DeserializeOwned;
use std::process::Command as Proc;

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn typed<T: DeserializeOwned + serde::Serialize>(v: &serde_json::Value) -> Report<T> {
    let r: Report<T> = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(&serde_json::to_value(&r).unwrap(), v, "report re-parses into an equal value");
    assert_eq!(r.schema, "v1");
    r
}

#[test]
fn normalize_reports_exponents_and_slant() {
    let (v, ok) = execute(Command::Normalize, &data("diag_zeta3.json"), &Options::default()).unwrap();
    assert!(ok);
    let r: Report<NormalizeResult> = typed(&v);
    let mu = Functional::from_pairs(&[(2, qf(-1, 3)), (3, qf(-2, 3))]);
    assert_eq!(r.result.certificate.mu, mu);
    assert_eq!(r.result.certificate.exponents, vec![0, 1, 2]);
    assert!(r.result.verification.passed);
}

#[test]
fn twisted_energy_on_the_involution_agrees_with_the_oracle() {
    let (v, ok) = execute(Command::TwistedEnergy, &data("involution.json"), &Options::default()).unwrap();
    assert!(ok);
    let r: Report<TwistedEnergyResult> = typed(&v);
    assert_eq!(r.result.report.method_agreement, Some(true));
    assert!(matches!(r.result.report.minimum, Minimum::Finite(_)));
}

#[test]
fn roots_window_zero_lists_the_finite_roots() {
    let opts = Options { window: Some(0), ..Options::default() };
    let (v, _) = execute(Command::Roots, &data("a1_rank2.json"), &opts).unwrap();
    let r: Report<RootsResult> = typed(&v);
    assert_eq!(r.result.count, 2);
    assert!(r.result.roots.iter().all(|x| x.mode == 0 && x.finite_part.is_some()));
}

#[test]
fn identical_requests_give_identical_reports() {
    let opts = Options { seed: 9, ..Options::default() };
    let a = execute(Command::CheckIsom, &data("diag_zeta3.json"), &opts).unwrap().0;
    let b = execute(Command::CheckIsom, &data("diag_zeta3.json"), &opts).unwrap().0;
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let r: Report<CheckIsomResult> = typed(&a);
    assert_eq!((r.result.bracket_failures, r.result.cartan_failures), (0, 0));
}

fn bin(args: &[&str], stdin: &str) -> (i32, String, String) {
    use std::io::Write;
    let mut child = Proc::new(env!("CARGO_BIN_EXE_affinisation"))
        .args(args)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn exit_codes() {
    let (code, out, _) = bin(&["min-energy"], &data("a1_rank2.json"));
    assert_eq!(code, 0);
    assert!(out.contains("\"minimum\": \"0/1\""));

    let bad_type = data("diag_zeta3.json").replace("\"dim\": 3", "\"dim\": \"three\"");
    let (code, _, err) = bin(&["normalize"], &bad_type);
    assert_eq!(code, 2);
    assert!(err.contains("operator.dim"), "{err}");

    let wrong_order = data("diag_zeta3.json").replace("\"order\": 3", "\"order\": 2");
    let (code, _, err) = bin(&["normalize"], &wrong_order);
    assert_eq!(code, 1, "{err}");

    let (code, _, _) = bin(&["normalize", "--input", "/nonexistent/request.json"], "");
    assert_eq!(code, 2);

    let negative = data("a1_rank2.json").replace("\"lc\": \"1\"", "\"lc\": \"-1\"");
    let (code, out, _) = bin(&["min-energy"], &negative);
    assert_eq!(code, 0);
    assert!(out.contains("\"positive_energy\": false"));
}
