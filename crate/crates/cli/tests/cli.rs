use std::fs;
use std::process::{Command, Output};

fn dloop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dloop"))
        .args(args)
        .env_remove("DLOOP_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn intensity_prints_empty_constants() {
    let o = dloop(&["intensity"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "K0,KG\n1.09066034,0.553767064\n");
}

#[test]
fn solvers() {
    let o = dloop(&["solve", "balance"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0.898847102"));

    let o = dloop(&["solve", "unit-visibility", "--t", "0.1"]);
    assert!(stdout(&o).contains("2.82403222"));

    let o = dloop(&["solve", "unit-visibility", "--t", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(dloop(&["figure", "--id", "fig9"]).status.code(), Some(2));
    assert_eq!(dloop(&["bogus"]).status.code(), Some(2));
    let o = dloop(&["sweep", "--var", "chi_d", "--from", "1", "--to", "1", "--steps", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(dloop(&["solve", "balance", "--alpha-d", "-1"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let o = dloop(&["verify", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS oracle-forward"));

    let coarse = [
        "verify", "--samples", "10", "--tol", "1e-12", "--phase-samples", "4", "--y-nodes", "3",
        "--k-nodes", "3",
    ];
    let o = dloop(&coarse);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn negative_phases_accepted() {
    let o = dloop(&[
        "sweep", "--var", "t_d", "--from", "0", "--to", "1", "--steps", "3", "--chi-f", "-1.5",
        "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["name"], "sweep-t_d");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["columns"].as_array().unwrap().len(), 4);
}

#[test]
fn figure_output_is_byte_stable() {
    let a = dloop(&["figure", "--id", "fig8c"]);
    let b = dloop(&["figure", "--id", "fig8c"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("chi_d,K0[T_d=0.1;chi_f=2.824;"));
    assert_eq!(text.lines().count(), 1 + 1001);
}

#[test]
fn out_dir_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_dloop"))
        .args(["figure", "--id", "fig4", "--format", "json"])
        .env("DLOOP_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = fs::read_to_string(dir.path().join("fig4.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 101);

    let file = dir.path().join("custom.csv");
    let o = dloop(&["figure", "--id", "fig4", "--out", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(&file).unwrap().starts_with("T_d,"));

    let missing = dir.path().join("no/such/dir/x.csv");
    let o = dloop(&["figure", "--id", "fig4", "--out", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
