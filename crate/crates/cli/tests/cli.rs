use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualbvp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_writes_coefficients_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    let o = run(&["solve", s(&spec("example1.json")), "--degree", "8", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("degree 8: 9 coefficients"));
    assert!(text.contains("E_8 9.93"), "{text}");

    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["degree"], 8);
    assert_eq!(doc["coefficients"].as_array().unwrap().len(), 9);
    assert_eq!(doc["residuals"].as_array().unwrap().len(), 7);
    assert_eq!(doc["options"]["quad_panels"], 2);
    assert_eq!(doc["options"]["projection"], "compensated");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        assert!(run(&["solve", s(&spec("example2.json")), "--degree", "12", "--out", s(p)]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let t1 = run(&["table", "--examples", "5,1", "--max-degree", "9"]);
    let t2 = run(&["table", "--examples", "5,1", "--max-degree", "9"]);
    assert_eq!(t1.stdout, t2.stdout);
    assert!(stdout(&t1).starts_with("n,example5,example1\n2,1.48e0,5.58e-3\n"));
}

#[test]
fn eval_after_solve_matches_the_error_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    assert!(run(&["solve", s(&spec("example3.json")), "--degree", "9", "--out", s(&out)]).status.success());
    let curve = stdout(&run(&["error-curve", "--spec", s(&spec("example3.json")), "--degree", "9", "--grid", "4"]));
    let rows: Vec<&str> = curve.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    for (i, row) in rows.iter().enumerate() {
        let x = i as f64 / 4.0;
        let eps: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        let w: f64 = stdout(&run(&["eval", "--coeffs", s(&out), "--at", &x.to_string()])).trim().parse().unwrap();
        let y = -25.0 - 10.0 * x + 27.0 * (x / 3.0).exp();
        assert_eq!(eps, (y - w).abs(), "x = {x}");
    }
    let at0: f64 = stdout(&run(&["eval", "--coeffs", s(&out), "--at", "0"])).trim().parse().unwrap();
    assert_eq!(at0, 2.0);
}

#[test]
fn midpoint_of_example_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    assert!(run(&["solve", s(&spec("example1.json")), "--degree", "20", "--out", s(&out)]).status.success());
    let v: f64 = stdout(&run(&["eval", "--coeffs", s(&out), "--at", "0.5"])).trim().parse().unwrap();
    assert!((v - 0.5f64.cos().ln()).abs() < 1e-12, "{v}");
}

#[test]
fn eval_of_a_bare_coefficient_list() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.json");
    std::fs::write(&f, "[0, 0.5, 1]").unwrap();
    let o = run(&["eval", "--coeffs", s(&f), "--at", "0.25"]);
    assert_eq!(stdout(&o), "2.5000000000000000e-1\n");
    assert_eq!(run(&["eval", "--coeffs", s(&f), "--at", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--coeffs", s(&f), "--at", "-0.5"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--coeffs", "/nonexistent", "--at", "0.5"]).status.code(), Some(2));
}

#[test]
fn error_curves_of_fixture_examples() {
    let text = stdout(&run(&["error-curve", "--example", "4", "--degree", "20"]));
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (x, e) = l.split_once(',').unwrap();
            (x.parse().unwrap(), e.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 201);
    assert_eq!(rows[200].0, 1.0);
    assert!(rows.iter().all(|&(_, e)| e <= 1e-12));

    let first = stdout(&run(&["error-curve", "--example", "1", "--degree", "3"]));
    let max = first
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!((max / 4.83e-3 - 1.0).abs() < 0.01);
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["table", "--examples", "9"],
        &["table", "--max-degree", "61"],
        &["error-curve", "--example", "1", "--degree", "5", "--grid", "0"],
        &["error-curve", "--spec", "/nonexistent.json", "--degree", "5"],
        &["error-curve", "--degree", "5"],
        &["solve", "--degree", "3"],
        &["frobnicate"],
    ];
    for args in cases {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
    let no_exact = run(&["error-curve", "--spec", s(&spec("example4.json")), "--degree", "5"]);
    assert_eq!(no_exact.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&no_exact.stderr).contains("no exact solution"));
}

#[test]
fn numerical_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("p.json");
    std::fs::write(&f, r#"{"order": 2, "left": [0], "right": [1], "rhs": "ln(y0 - 2)"}"#).unwrap();
    let o = run(&["solve", s(&f), "--degree", "4", "--out", s(&dir.path().join("w.json"))]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("iteration n = 2"));
}

#[test]
fn fixture_specs_solve() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["example4.json", "example5.json"] {
        let o = run(&["solve", s(&spec(name)), "--degree", "12", "--out", s(&dir.path().join("w.json"))]);
        assert!(o.status.success(), "{name}");
        assert!(!stdout(&o).contains("E_12"));
    }
}
