use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn lstsync(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lstsync"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn reset_on_c4_file_prints_verified_certificate() {
    let path = scratch("c4.txt", "4 2\n1 0\n2 1\n3 2\n0 0\n");
    let out = lstsync(&["reset", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("kind=reset"));
    assert!(text.contains("verified=true"));
    assert!(text.contains("from {0,1,2,3}"));
}

#[test]
fn road_color_rejects_periodic_graph() {
    let path = scratch("periodic.txt", "2 2\n1 1\n0 0\n");
    let out = lstsync(&["road-color", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("aperiodicity: period 2"));
}

#[test]
fn road_color_writes_dot() {
    let dot = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("coloring.dot");
    let out = lstsync(&["road-color", "agw:7:2", "--seed", "4", "--emit-dot", dot.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("kind=coloring"));
    assert!(fs::read_to_string(dot).unwrap().starts_with("digraph"));
}

#[test]
fn cerny_bench_matches_known_reset_lengths() {
    let out = lstsync(&["bench", "--family", "cerny", "--n", "4..8"]);
    assert!(out.status.success());
    let mut rows = csv::Reader::from_reader(out.stdout.as_slice());
    let header = rows.headers().unwrap().clone();
    assert_eq!(
        header.iter().collect::<Vec<_>>(),
        ["id", "n", "k", "M", "t", "cert_len", "bound", "oracle_len", "margin"]
    );
    let mut seen = 0;
    for (record, n) in rows.records().zip(4usize..) {
        let record = record.unwrap();
        assert_eq!(record[1].parse::<usize>().unwrap(), n);
        assert_eq!(record[7].parse::<usize>().unwrap(), (n - 1) * (n - 1));
        assert!(record[8].parse::<f64>().unwrap() >= 0.0);
        seen += 1;
    }
    assert_eq!(seen, 5);
}

#[test]
fn bench_is_reproducible() {
    for family in ["one-cluster", "agw"] {
        let args = ["bench", "--family", family, "--n", "4..7", "--count", "5", "--seed", "9"];
        let a = lstsync(&args);
        let b = lstsync(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn analyze_and_oracle_agree_on_example() {
    let out = lstsync(&["analyze", "ex1", "--words", "a,aa"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("M = 1, minimal rank t = 2"));
    assert!(text.contains("synchronizing: false"));
    let out = lstsync(&["oracle", "ex1", "--rank", "--m", "a,aa"]);
    assert_eq!(stdout(&out), "minimal rank: 2\nM: 1\n");
}

#[test]
fn bad_inputs_fail_cleanly() {
    assert!(!lstsync(&["reset", "/nonexistent/automaton.txt"]).status.success());
    assert!(!lstsync(&["collapse", "cerny:4", "--set", "9"]).status.success());
    assert!(!lstsync(&["oracle", "cerny:8", "--cap-n", "6"]).status.success());
}
