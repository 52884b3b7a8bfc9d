use std::path::Path;
use std::process::{Command, Output};

fn fipm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fipm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// The objective line printed after the iteration table.
fn final_objective(o: &Output) -> f64 {
    let text = stdout(o);
    let line = text
        .lines()
        .rev()
        .find(|l| !l.starts_with("status"))
        .unwrap();
    line.trim().parse().unwrap()
}

fn rows_of<'a>(text: &'a str, phase: &str) -> Vec<&'a str> {
    let mut current = "";
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(head) = line.split_whitespace().next() {
            if head.chars().all(|c| c.is_ascii_alphabetic()) {
                current = head;
            } else if current == phase && line.starts_with(' ') && head.parse::<usize>().is_ok() {
                rows.push(line);
            }
        }
    }
    rows
}

fn csv(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn lp_fixture_reaches_the_vertex() {
    let o = fipm(&["lp", "--fixture", "lp_example"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((final_objective(&o) + 13.0).abs() < 1e-8);
    assert!(stdout(&o).ends_with("status: optimal\n"));
}

#[test]
fn sos_gce_from_the_standard_start() {
    let o = fipm(&[
        "sdp",
        "--fixture",
        "sos",
        "--search",
        "gce",
        "--start",
        "0.75,2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(rows_of(&text, "ini").is_empty());
    // row 0 is the start itself
    assert!(rows_of(&text, "cnt").len() <= 6);
    assert!(text.contains(" 1.000000000e+00"));
    assert!((final_objective(&o) - 1.0).abs() < 1e-8);
}

#[test]
fn missing_file_and_unknown_fixture_are_usage_errors() {
    let o = fipm(&["sdp", "--file", "definitely/missing.dat-s"]);
    assert_eq!(o.status.code(), Some(1));
    let o = fipm(&["sdp", "--fixture", "nope"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    for name in [
        "lp_example",
        "sos_example",
        "combinatorial_example",
        "pencil_example",
    ] {
        assert!(err.contains(name), "{err}");
    }
    assert_eq!(fipm(&["sdp"]).status.code(), Some(1));
    assert_eq!(fipm(&["lp", "--fixture", "sos"]).status.code(), Some(1));
}

#[test]
fn iteration_limit_exit_code() {
    let o = fipm(&["sdp", "--fixture", "sos", "--maxit", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("status: iteration-limit"));
}

#[test]
fn trace_csv_starts_at_the_requested_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let o = fipm(&[
        "sdp",
        "--fixture",
        "sos",
        "--start",
        "0.75,2",
        "--trace-csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv(&path);
    assert_eq!(
        rows[0].join(","),
        "phase,iter,xi,eta,alpha,trCdX,trCX,residual,invnorm"
    );
    assert!(rows.iter().all(|r| r.len() == 9));
    let num = |s: &String| s.parse::<f64>().unwrap();
    assert_eq!(rows[1][0], "cnt");
    assert_eq!((num(&rows[1][2]), num(&rows[1][3])), (0.75, 2.0));

    // a step row and the centered row after it lie on the same objective level
    let mut pairs = 0;
    for w in rows[1..].windows(2) {
        if w[0][0] == "step" && w[1][0] == "cnt" {
            assert_eq!(w[0][1], w[1][1]);
            assert!((num(&w[0][3]) - num(&w[1][3])).abs() < 1e-9);
            pairs += 1;
        }
    }
    assert!(pairs > 0);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["sdp", "--fixture", "sos"][..],
        &["sdp", "--fixture", "combinatorial", "--search", "sym"][..],
        &["lp", "--fixture", "lp"][..],
    ] {
        let a = fipm(args);
        let b = fipm(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn exported_problem_solves_the_same() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sos.dat-s");
    let p = path.to_str().unwrap();
    let a = fipm(&[
        "sdp",
        "--fixture",
        "sos",
        "--search",
        "gce",
        "--export-dats",
        p,
    ]);
    assert_eq!(a.status.code(), Some(0));
    let b = fipm(&["sdp", "--file", p, "--search", "gce"]);
    assert_eq!(b.status.code(), Some(0));
    assert!((final_objective(&b) - 1.0).abs() < 1e-7);

    let lp_path = dir.path().join("lp.dat-s");
    let q = lp_path.to_str().unwrap();
    assert_eq!(
        fipm(&["lp", "--fixture", "lp", "--export-dats", q])
            .status
            .code(),
        Some(0)
    );
    let c = fipm(&["lp", "--file", q]);
    assert_eq!(c.status.code(), Some(0));
    assert!((final_objective(&c) + 13.0).abs() < 1e-8);
}

#[test]
fn invalid_parameters_are_rejected() {
    assert_eq!(
        fipm(&["sdp", "--fixture", "sos", "--tau", "1.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        fipm(&["sdp", "--fixture", "sos", "--search", "xyz"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        fipm(&["sdp", "--fixture", "sos", "--start", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        fipm(&["lp", "--fixture", "lp", "--mu", "0.5"])
            .status
            .code(),
        Some(1)
    );
}
