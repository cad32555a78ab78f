use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

use qball::algebra::{Element, GenIndex, Shape};
use qball::kernels::{KernelElement, KernelJson};
use qball::scalar::QRational;
use qball_cli::commands::CliError;

fn qball(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qball"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn qball");
    {
        let mut pipe = child.stdin.take().expect("stdin");
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).expect("write stdin");
        }
    }
    child.wait_with_output().expect("qball output")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn ok(args: &[&str]) -> Value {
    let out = qball(args, None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    json_of(&out)
}

fn value_f64(v: &Value, key: &str) -> f64 {
    v[key].as_str().expect("decimal string").parse().expect("decimal")
}

fn fixture(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/v1").join(name);
    serde_json::from_str(&std::fs::read_to_string(&path).expect("fixture")).expect("fixture JSON")
}

#[test]
fn nf_disc_example() {
    let s = Shape::new(1, 1).unwrap();
    let got = Element::from_json_str(&ok(&["nf", "--m", "1", "--n", "1", "zs[1,1] z[1,1]"]).to_string()).unwrap();
    let z = Element::generator(s, GenIndex::z(1, 1)).unwrap();
    let q2 = QRational::q_pow(2);
    let expect = &z.mul(&z.star()).unwrap().scale(&q2) + &Element::constant(s, &QRational::one() - &q2);
    assert_eq!(got, expect);
}

#[test]
fn trace_closed_example() {
    let v = ok(&["trace", "--m", "1", "--n", "1", "--q", "0.5", "--lambda", "2", "--closed"]);
    assert!((value_f64(&v, "value") - 4.0 / 3.0).abs() < 1e-15);
    assert!(value_f64(&v, "error_bound") < 1e-30);
}

#[test]
fn trace_series_reports_its_tail() {
    let v = ok(&["trace", "--m", "1", "--n", "2", "--q", "0.5", "--lambda", "2.5", "--series"]);
    let closed = ok(&["trace", "--m", "1", "--n", "2", "--q", "0.5", "--lambda", "2.5", "--closed"]);
    let diff = (value_f64(&v, "value") - value_f64(&closed, "value")).abs();
    assert!(diff <= value_f64(&v, "error_bound") + 1e-15, "diff {diff}");
    assert!(v["degree"].as_u64().unwrap() > 0);
}

#[test]
fn integrate_from_stdin() {
    let f = ok(&["nf", "--m", "1", "--n", "1", "z[1,1] zs[1,1]"]).to_string();
    let out = qball(&["integrate", "--q", "0.5", "--lambda", "2"], Some(&f));
    assert_eq!(out.status.code(), Some(0));
    let (q, lambda) = (0.5f64, 2.0);
    let expect = (1.0 - q * q) * q.powf(2.0 * (lambda - 1.0)) / (1.0 - q.powf(2.0 * lambda));
    assert!((value_f64(&json_of(&out), "value") - expect).abs() < 1e-15);
}

#[test]
fn bergman_reproduces_holomorphic_input() {
    let f = ok(&["nf", "--m", "1", "--n", "2", "z[2,1] z[1,1]"]);
    let out = qball(&["bergman", "--q", "0.6", "--lambda", "3"], Some(&f.to_string()));
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let terms = v["terms"].as_array().unwrap();
    let exact = f["terms"].as_array().unwrap();
    assert_eq!(terms.len(), exact.len());
    for (t, e) in terms.iter().zip(exact) {
        assert_eq!(t["z"], e["z"]);
        let c = e["coeff"].as_str().unwrap().parse::<QRational>().unwrap().eval_f64(0.6).unwrap();
        assert!((value_f64(t, "value") - c).abs() < 1e-12);
    }
}

#[test]
fn element_json_round_trip() {
    let v = ok(&["nf", "--m", "2", "--n", "3", "zs[1,2] z[3,1] zs[2,2] z[2,2]"]);
    let e = Element::from_json_str(&v.to_string()).unwrap();
    assert_eq!(serde_json::to_value(e.to_json()).unwrap(), v);
}

#[test]
fn kernel_json_round_trip() {
    for args in [
        &["kernel", "K", "--m", "1", "--n", "2", "--trunc", "2"][..],
        &["kernel", "K", "--m", "2", "--n", "2", "--lambda", "-2", "--trunc", "2"][..],
        &["kernel", "chi", "--m", "2", "--n", "3", "--k", "2"][..],
    ] {
        let v = ok(args);
        let parsed: KernelJson = serde_json::from_value(v.clone()).unwrap();
        let k = KernelElement::from_json(&parsed).unwrap();
        assert_eq!(serde_json::to_value(k.to_json()).unwrap(), v);
    }
}

#[test]
fn commute_reports_zero_residual() {
    let v = ok(&["kernel", "commute", "--m", "2", "--n", "3", "--j", "1", "--k", "2"]);
    assert_eq!(v["commute"], Value::Bool(true));
    assert!(v["residual"]["terms"].as_array().unwrap().is_empty());
}

#[test]
fn fixtures_reproduce() {
    let cases: [(&str, &[&str]); 5] = [
        ("nf_disc.json", &["nf", "--m", "1", "--n", "1", "zs[1,1] z[1,1]"]),
        ("nf_2x2_mixed.json", &["nf", "--m", "2", "--n", "2", "zs[1,1] z[2,2]"]),
        ("theta_1x2_zs21_deg2.json", &["theta", "--m", "1", "--n", "2", "--gen", "zs[2,1]", "--deg", "2"]),
        ("gram_2x2_deg1.json", &["gram", "--m", "2", "--n", "2", "--deg", "1"]),
        ("kernel_disc_trunc3.json", &["kernel", "K", "--m", "1", "--n", "1", "--trunc", "3"]),
    ];
    for (name, args) in cases {
        assert_eq!(ok(args), fixture(name), "{name}");
    }
    let numeric: [(&str, &[&str]); 2] = [
        ("trace_disc_closed.json", &["trace", "--m", "1", "--n", "1", "--q", "0.5", "--lambda", "2", "--closed"]),
        ("trace_2x2_series.json", &["trace", "--m", "2", "--n", "2", "--q", "0.5", "--lambda", "4.5", "--series"]),
    ];
    for (name, args) in numeric {
        let (got, want) = (ok(args), fixture(name));
        assert!((value_f64(&got, "value") - value_f64(&want, "value")).abs() < 1e-30, "{name}");
    }
}

fn error_kind(args: &[&str], stdin: Option<&str>, code: i32) -> String {
    let out = qball(args, stdin);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    json_of(&out)["error"]["kind"].as_str().expect("error kind").to_string()
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["nf", "--m", "2", "--n", "1", "z[1,1]"][..],
        &["nf", "--m", "1", "--n", "1", "z[2,1]"][..],
        &["nf", "--m", "1", "--n", "1", "w[1,1]"][..],
        &["trace", "--q", "1.5", "--lambda", "2", "--closed"][..],
        &["trace", "--q", "abc", "--lambda", "2"][..],
        &["no-such-command"][..],
    ] {
        assert_eq!(error_kind(args, None, 1), "usage");
    }
    assert_eq!(error_kind(&["integrate", "--q", "0.5", "--lambda", "2"], Some("{not json"), 1), "usage");
}

#[test]
fn computation_errors_exit_two() {
    assert_eq!(error_kind(&["trace", "--m", "1", "--n", "2", "--q", "0.5", "--lambda", "0.5", "--closed"], None, 2), "computation");
}

#[test]
fn acceptance_failure_exit_code() {
    assert_eq!(CliError::AcceptanceFailed(Value::Null).exit_code(), 3);
}

#[test]
fn help_exits_zero() {
    assert_eq!(qball(&["--help"], None).status.code(), Some(0));
}
