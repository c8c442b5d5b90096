//! End-to-end tests of the qprank binary.

use std::path::Path;
use std::process::{Command, Output};

use qprank::{DirectedGraph, GoogleMatrix};

fn qprank(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qprank"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn generate_then_classical_rank() {
    let dir = tempfile::tempdir().unwrap();
    let out = qprank(dir.path(), &["generate", "--n", "16", "--m", "2", "--seed", "7", "--out", "g.edges"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.path().join("g.edges").exists());

    let out = qprank(dir.path(), &["rank", "--classical", "--graph", "g.edges"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let sum_line = text.lines().find(|l| l.starts_with("sum:")).expect("sum line");
    let sum: f64 = sum_line.trim_start_matches("sum:").trim().parse().unwrap();
    assert!((sum - 1.0).abs() < 1e-9, "classical rank sums to {sum}");
    assert_eq!(text.lines().filter(|l| l.trim_start().starts_with("node ")).count(), 16);
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.edges", "b.edges"] {
        let out = qprank(dir.path(), &["generate", "--n", "12", "--m", "2", "--seed", "3", "--out", name]);
        assert!(out.status.success());
    }
    assert_eq!(
        std::fs::read(dir.path().join("a.edges")).unwrap(),
        std::fs::read(dir.path().join("b.edges")).unwrap()
    );
}

#[test]
fn rank_at_zero_phases_prints_row_sum_distribution() {
    let dir = tempfile::tempdir().unwrap();
    qprank(dir.path(), &["generate", "--n", "8", "--m", "2", "--seed", "4", "--out", "g.edges"]);
    let out = qprank(
        dir.path(),
        &["rank", "--graph", "g.edges", "--theta1", "0", "--theta2", "0", "--steps", "50", "--window", "10"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);

    // The final line is the machine-readable CSV row; columns 8.. hold the
    // distribution.
    let row = text.lines().last().unwrap();
    let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields.len(), 8 + 8);

    let graph = DirectedGraph::generate_scale_free(8, 2, 4).unwrap();
    let matrix = GoogleMatrix::new(&graph, 0.85).unwrap();
    for i in 0..8 {
        let row_sum: f64 = (0..8).map(|j| matrix.get(i, j)).sum();
        assert!((fields[8 + i] - row_sum / 8.0).abs() < 1e-12, "node {i}");
    }
}

#[test]
fn trackback_flag_reverses_the_graph() {
    let dir = tempfile::tempdir().unwrap();
    qprank(dir.path(), &["generate", "--n", "10", "--m", "2", "--seed", "5", "--out", "g.edges"]);
    let fwd = qprank(dir.path(), &["rank", "--classical", "--graph", "g.edges"]);
    let back = qprank(dir.path(), &["rank", "--classical", "--graph", "g.edges", "--trackback"]);
    let hash = |out: &Output| {
        stdout(out)
            .lines()
            .find(|l| l.contains("edge_hash:"))
            .unwrap()
            .split("edge_hash: ")
            .nth(1)
            .unwrap()
            .to_string()
    };
    assert_ne!(hash(&fwd), hash(&back));

    let expected = DirectedGraph::generate_scale_free(10, 2, 5).unwrap().reverse();
    assert_eq!(hash(&back), expected.edge_hash());
}

#[test]
fn sweep_cluster_report_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    qprank(dir.path(), &["generate", "--n", "8", "--m", "2", "--seed", "1", "--out", "g.edges"]);
    let out = qprank(
        dir.path(),
        &[
            "sweep", "--graph", "g.edges", "--scheme", "alternate-opposite", "--grid", "3",
            "--steps", "40", "--window", "10", "--out", "s.csv",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 9);
    assert!(dir.path().join("s.csv.meta").exists());

    let out = qprank(
        dir.path(),
        &["cluster", "--sweep", "s.csv", "--k", "2", "--seed", "1", "--out", "labels.csv"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let labels = std::fs::read_to_string(dir.path().join("labels.csv")).unwrap();
    assert_eq!(labels.lines().count(), 1 + 9);
    assert!(stdout(&out).contains("inertia:"));

    let out = qprank(
        dir.path(),
        &["report", "--sweep", "s.csv", "--outdir", "rep", "--loglog-cell", "0"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    for name in ["fidelity", "variance", "coherence", "entanglement", "beta", "r2"] {
        let table = std::fs::read_to_string(dir.path().join("rep").join(format!("{name}.csv")))
            .unwrap();
        assert_eq!(table.lines().count(), 1 + 9, "{name}");
        assert_eq!(table.lines().next().unwrap(), "theta1,theta2,value");
    }
    let loglog =
        std::fs::read_to_string(dir.path().join("rep").join("loglog_cell_0.csv")).unwrap();
    assert_eq!(loglog.lines().next().unwrap(), "index,prob,log_index,log_prob");
    assert_eq!(loglog.lines().count(), 1 + 8);
}

#[test]
fn sweeps_are_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    qprank(dir.path(), &["generate", "--n", "8", "--m", "2", "--seed", "2", "--out", "g.edges"]);
    let base = [
        "sweep", "--graph", "g.edges", "--grid", "2", "--steps", "30", "--window", "10",
    ];
    for (name, threads) in [("a.csv", None), ("b.csv", None), ("c.csv", Some("1"))] {
        let mut args: Vec<&str> = base.to_vec();
        if let Some(t) = threads {
            args.extend(["--threads", t]);
        }
        args.extend(["--out", name]);
        let out = qprank(dir.path(), &args);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());
    assert_eq!(a, std::fs::read(dir.path().join("c.csv")).unwrap());
}

#[test]
fn usage_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    qprank(dir.path(), &["generate", "--n", "6", "--m", "2", "--seed", "1", "--out", "g.edges"]);
    let cases: Vec<Vec<&str>> = vec![
        vec!["rank", "--graph", "g.edges", "--alpha", "1.5"],
        vec!["rank", "--graph", "g.edges", "--no-such-flag"],
        vec!["rank", "--graph", "g.edges", "--theta1", "1", "--theta1-pi", "0.5"],
        vec!["rank", "--graph", "g.edges", "--scheme", "general-four"],
        vec!["rank", "--graph", "g.edges", "--theta1p", "1.0"],
        vec!["rank", "--graph", "g.edges", "--steps", "5", "--window", "10"],
        vec!["rank", "--graph", "g.edges", "--scheme", "bogus"],
        vec!["sweep", "--graph", "g.edges", "--scheme", "general-four", "--out", "s.csv"],
        vec!["sweep", "--graph", "g.edges", "--grid", "1", "--out", "s.csv"],
        vec!["generate", "--n", "2", "--m", "2", "--seed", "0"],
    ];
    for args in cases {
        let out = qprank(dir.path(), &args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty(), "args {args:?} printed no error");
    }
}

#[test]
fn runtime_errors_exit_with_code_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = qprank(dir.path(), &["rank", "--classical", "--graph", "missing.edges"]);
    assert_eq!(out.status.code(), Some(1));

    std::fs::write(dir.path().join("bad.edges"), "0 1\n0 1\n").unwrap();
    let out = qprank(dir.path(), &["rank", "--classical", "--graph", "bad.edges"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let out = qprank(dir.path(), &["cluster", "--sweep", "missing.csv", "--out", "l.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn general_four_rank_accepts_primed_phases() {
    let dir = tempfile::tempdir().unwrap();
    qprank(dir.path(), &["generate", "--n", "6", "--m", "2", "--seed", "8", "--out", "g.edges"]);
    let out = qprank(
        dir.path(),
        &[
            "rank", "--graph", "g.edges", "--scheme", "general-four",
            "--theta1-pi", "0.5", "--theta2-pi", "1.5", "--theta1p-pi", "1", "--theta2p-pi", "1",
            "--steps", "40", "--window", "10",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("theta1p:"), "primed phases echoed");
    assert!(text.lines().any(|l| l.starts_with("entanglement:")));
}
