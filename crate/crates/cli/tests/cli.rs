use std::path::PathBuf;
use std::process::{Command, Output};

use kmspin_core::export::matrix_from_json;
use kmspin_core::{GaussianRational, Rational};
use serde_json::Value;

fn kmspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmspin"))
        .args(args)
        .env_remove("KMSPIN_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn trailing_report(o: &Output) -> Value {
    let text = stdout(o);
    let start = text.find("\n{").map(|i| i + 1).or_else(|| text.starts_with('{').then_some(0)).expect("report");
    serde_json::from_str(&text[start..]).expect("valid JSON report")
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("kmspin-test-{}-{name}", std::process::id()))
}

#[test]
fn rep_exports_sigma_for_a2() {
    let path = temp_path("a2.json");
    let o = kmspin(&["rep", "--type", "A2", "--spin", "three_half", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let matrices = v["matrices"].as_array().unwrap();
    assert_eq!(matrices.len(), 2);
    for m in matrices {
        assert_eq!(m["matrix"]["dim"], 8);
        let q = matrix_from_json::<Rational>(&m["matrix"]).unwrap();
        assert_eq!(q.rows(), 8);
        assert!(q.is_antisymmetric() || !q.is_symmetric());
    }
    std::fs::remove_file(path).ok();
}

#[test]
fn rep_coordinate_convention_five_half() {
    let o = kmspin(&["rep", "--type", "A~2", "--spin", "five_half", "--convention", "coord", "--max-height", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all relations hold"));
    assert!(stdout(&o).contains("X(alpha) is 16x16"));
    assert!(stdout(&o).contains("size 80"));
}

#[test]
fn halfspin_round_trips_through_json_and_csv() {
    let json_path = temp_path("d4.json");
    let o = kmspin(&["halfspin", "--type", "D4", "-o", json_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let rho = matrix_from_json::<GaussianRational>(&v["matrices"][0]["matrix"]).unwrap();
    assert_eq!(rho.rows(), 2);
    assert!(rho.is_anti_hermitian());

    let csv_path = temp_path("d4.csv");
    let o = kmspin(&["halfspin", "--type", "D4", "--format", "csv", "-o", csv_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), ["name", "dim", "row", "col", "re", "im"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert!(rows.iter().any(|r| &r[0] == "gamma_4"));
    for r in &rows {
        r[4].parse::<Rational>().unwrap();
        r[5].parse::<Rational>().unwrap();
    }
    std::fs::remove_file(json_path).ok();
    std::fs::remove_file(csv_path).ok();
}

#[test]
fn sym3_reports_sign_component() {
    let o = kmspin(&["sym3", "--type", "A2", "--space", "sym3"]);
    assert_eq!(o.status.code(), Some(1));
    let report = trailing_report(&o);
    assert_eq!(report["sign_found"], true);
    assert!(report["pairs"][0]["sign_multiplicity"].as_u64().unwrap() >= 1);
    assert_eq!(report["pairs"][0]["residual_zero"], false);

    let o = kmspin(&["sym3", "--type", "A2", "--space", "sym3", "--expect-sign"]);
    assert_eq!(o.status.code(), Some(0));

    for space in ["h", "sym2"] {
        let o = kmspin(&["sym3", "--type", "E6", "--space", space]);
        assert_eq!(o.status.code(), Some(0), "{space}");
    }
}

#[test]
fn closure_outcomes() {
    let o = kmspin(&["closure", "--type", "A3", "--max-height", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("closure = real roots up to height 10: YES"));

    let o = kmspin(&["closure", "--type", "3; 1 2; 2 3; 1 3", "--max-height", "20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("closure = real roots up to height 20: NO"));
    let report = trailing_report(&o);
    assert_eq!(report["closure"], 6);
    assert_eq!(report["real_roots"], 42);

    let o = kmspin(&["closure", "--type", "E10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equality not asserted"));
}

#[test]
fn randomized_sweeps_are_reproducible() {
    let a = kmspin(&["identities", "--type", "A~2", "--trials", "10", "--seed", "3"]);
    let b = kmspin(&["identities", "--type", "A~2", "--trials", "10", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));

    let path = temp_path("lemma.json");
    let o = kmspin(&["clifford-lemma", "--k", "2", "--l", "3", "--trials", "5", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["seed"], 0);
    std::fs::remove_file(path).ok();
}

#[test]
fn roots_and_coclique() {
    let o = kmspin(&["roots", "--type", "D4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("12 positive real roots"));

    let path = temp_path("roots.csv");
    let o = kmspin(&["roots", "--type", "A2", "--format", "csv", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "height,c1,c2\n1,1,0\n1,0,1\n2,1,1\n");
    std::fs::remove_file(path).ok();

    let o = kmspin(&["coclique", "--type", "E10"]);
    assert!(stdout(&o).contains("2^5 = 32"));
}

#[test]
fn jobs_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_kmspin"))
        .args(["rep", "--type", "D4", "--spin", "three_half"])
        .env("KMSPIN_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["roots", "--type", "Q7"],
        vec!["roots"],
        vec!["roots", "--type", "A2", "--max-height", "0"],
        vec!["rep", "--type", "A2", "--spin", "seven_half"],
        vec!["clifford-lemma", "--k", "5", "--l", "5"],
        vec!["closure", "--type", "A2", "--format", "csv", "-o", "/dev/null"],
        vec!["frobnicate"],
    ] {
        assert_eq!(kmspin(&args).status.code(), Some(2), "{args:?}");
    }
}
