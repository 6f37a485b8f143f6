//! End-to-end subcommand tests against the built binary: pipeline
//! contracts, determinism, output schemas, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn netsmooth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netsmooth"))
        .args(args)
        .env_remove("NBS_THREADS")
        .output()
        .expect("spawn netsmooth")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_matrix(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .expect("read output")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split(',').map(|t| t.parse().unwrap()).collect())
        .collect()
}

#[test]
fn simulate_then_estimate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let adj = dir.path().join("a.csv");
    let phat = dir.path().join("phat.csv");
    assert_ok(&netsmooth(&[
        "simulate",
        "--graphon",
        "2",
        "--n",
        "50",
        "--seed",
        "1",
        "--adj-out",
        adj.to_str().unwrap(),
    ]));
    assert_ok(&netsmooth(&[
        "estimate",
        "--method",
        "nbs",
        "--in",
        adj.to_str().unwrap(),
        "--out",
        phat.to_str().unwrap(),
    ]));
    let m = read_matrix(&phat);
    assert_eq!(m.len(), 50);
    for (i, row) in m.iter().enumerate() {
        assert_eq!(row.len(), 50);
        for (j, &v) in row.iter().enumerate() {
            assert!((0.0..=1.0).contains(&v), "entry ({i},{j}) = {v}");
            assert_eq!(v, m[j][i], "asymmetry at ({i},{j})");
        }
    }
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for (name, seed) in [("a1.csv", "7"), ("a2.csv", "7"), ("a3.csv", "8")] {
        let path = dir.path().join(name);
        assert_ok(&netsmooth(&[
            "simulate",
            "--graphon",
            "3",
            "--n",
            "40",
            "--seed",
            seed,
            "--adj-out",
            path.to_str().unwrap(),
        ]));
        runs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(runs[0], runs[1], "same seed must reproduce bytes");
    assert_ne!(runs[0], runs[2], "different seed should differ");
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let adj = dir.path().join("a.csv");
    assert_ok(&netsmooth(&[
        "simulate",
        "--graphon",
        "1",
        "--n",
        "60",
        "--seed",
        "2",
        "--adj-out",
        adj.to_str().unwrap(),
    ]));
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(format!("phat{threads}.csv"));
        assert_ok(&netsmooth(&[
            "estimate",
            "--threads",
            threads,
            "--method",
            "nbs",
            "--in",
            adj.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]));
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn nbs_threads_env_var_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let adj = dir.path().join("a.csv");
    assert_ok(&netsmooth(&[
        "simulate",
        "--graphon",
        "2",
        "--n",
        "30",
        "--seed",
        "5",
        "--adj-out",
        adj.to_str().unwrap(),
    ]));
    let out = dir.path().join("phat.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_netsmooth"))
        .args([
            "estimate",
            "--method",
            "nbs",
            "--in",
            adj.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .env("NBS_THREADS", "1")
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn bench_writes_the_documented_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    assert_ok(&netsmooth(&[
        "bench",
        "--graphons",
        "2",
        "--n",
        "40",
        "--reps",
        "2",
        "--methods",
        "nbs,svtk,sbm-oracle",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "method,graphon,n,reps,C,rmse_mean,rmse_se,mae_mean,mae_se,twoinf_mean,twoinf_se"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert_eq!(row.len(), 11);
        assert_eq!(row[1], "2");
        assert_eq!(row[2], "40");
        assert_eq!(row[3], "2");
        for v in &row[5..] {
            let parsed: f64 = v.parse().unwrap();
            assert!(parsed.is_finite() && parsed >= 0.0);
        }
    }
    assert_eq!(rows[0][0], "nbs");
    assert_eq!(rows[0][4], "1");
    assert_eq!(rows[1][0], "svtk");
    assert_eq!(rows[1][4], "", "C column only applies to nbs");
    assert_eq!(rows[2][0], "sbm-oracle");
}

#[test]
fn bench_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for name in ["b1.csv", "b2.csv"] {
        let out = dir.path().join(name);
        assert_ok(&netsmooth(&[
            "bench",
            "--graphons",
            "4",
            "--n",
            "30",
            "--reps",
            "3",
            "--methods",
            "usvt,sas",
            "--seed",
            "9",
            "--out",
            out.to_str().unwrap(),
        ]));
        runs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn sweep_emits_one_row_per_constant() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    assert_ok(&netsmooth(&[
        "sweep",
        "--graphon",
        "2",
        "--n",
        "40",
        "--C-grid",
        "0.5,1,2",
        "--reps",
        "2",
        "--seed",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "C,mse_mean");
    assert_eq!(lines.len(), 4);
    for (line, expect_c) in lines[1..].iter().zip(["0.5", "1", "2"]) {
        let (c, mse) = line.split_once(',').unwrap();
        assert_eq!(c, expect_c);
        let mse: f64 = mse.parse().unwrap();
        assert!(mse > 0.0 && mse < 1.0);
    }
}

#[test]
fn linkpred_nbs_beats_jaccard_on_graphon_1() {
    let dir = tempfile::tempdir().unwrap();
    let adj = dir.path().join("a.csv");
    assert_ok(&netsmooth(&[
        "simulate",
        "--graphon",
        "1",
        "--n",
        "300",
        "--seed",
        "1",
        "--adj-out",
        adj.to_str().unwrap(),
    ]));
    let roc = dir.path().join("roc.csv");
    let out = netsmooth(&[
        "linkpred",
        "--in",
        adj.to_str().unwrap(),
        "--p",
        "0.1",
        "--methods",
        "nbs,jaccard",
        "--seed",
        "1",
        "--roc-out",
        roc.to_str().unwrap(),
    ]);
    assert_ok(&out);

    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut auc = std::collections::HashMap::new();
    for line in stdout.lines() {
        let parts: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(parts[0], "auc");
        auc.insert(parts[1].to_string(), parts[2].parse::<f64>().unwrap());
    }
    assert!(auc["nbs"] > auc["jaccard"], "got {auc:?}");

    for method in ["nbs", "jaccard"] {
        let path = dir.path().join(format!("roc.{method}.csv"));
        let text = std::fs::read_to_string(&path).expect("per-method roc file");
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,fpr,tpr");
        let mut last = None;
        for line in lines {
            if let Some(rest) = line.strip_prefix("# auc=") {
                let auc_file: f64 = rest.parse().unwrap();
                assert_eq!(auc_file, auc[method], "summary matches stdout");
                continue;
            }
            let cols: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
            assert_eq!(cols.len(), 3);
            if let Some((pf, pt)) = last {
                assert!(cols[1] >= pf && cols[2] >= pt, "rates must be monotone");
            }
            last = Some((cols[1], cols[2]));
        }
        assert_eq!(last, Some((1.0, 1.0)), "curve must close at (1,1)");
    }
}

#[test]
fn linkpred_single_method_uses_the_exact_path() {
    let dir = tempfile::tempdir().unwrap();
    let adj = dir.path().join("a.csv");
    assert_ok(&netsmooth(&[
        "simulate", "--graphon", "2", "--n", "60", "--seed", "6", "--adj-out",
        adj.to_str().unwrap(),
    ]));
    let roc = dir.path().join("roc.csv");
    assert_ok(&netsmooth(&[
        "linkpred",
        "--in",
        adj.to_str().unwrap(),
        "--p",
        "0.2",
        "--methods",
        "jaccard",
        "--seed",
        "2",
        "--roc-out",
        roc.to_str().unwrap(),
    ]));
    assert!(roc.exists());
    assert!(!dir.path().join("roc.jaccard.csv").exists());
}

#[test]
fn estimate_reads_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.txt");
    // Two 4-cliques joined by one edge, one-indexed, with a self-loop.
    let mut text = String::new();
    for i in 1..=4 {
        for j in (i + 1)..=4 {
            text.push_str(&format!("{i} {j}\n{} {}\n", i + 4, j + 4));
        }
    }
    text.push_str("4 5\n2 2\n");
    std::fs::write(&edges, text).unwrap();
    let out = dir.path().join("phat.csv");
    let result = netsmooth(&[
        "estimate",
        "--method",
        "sbm-spectral",
        "--K",
        "2",
        "--in",
        edges.to_str().unwrap(),
        "--format",
        "edgelist",
        "--indexing",
        "one",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_ok(&result);
    let stderr = String::from_utf8(result.stderr).unwrap();
    assert!(stderr.contains("1 self-loop"), "stderr: {stderr}");
    let m = read_matrix(&out);
    assert_eq!(m.len(), 8);
    // The two cliques are dense inside and nearly empty across.
    assert!(m[0][1] > 0.9 && m[5][6] > 0.9);
    assert!(m[0][7] < 0.2);
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let adj = dir.path().join("a.csv");
    assert_ok(&netsmooth(&[
        "simulate", "--graphon", "2", "--n", "20", "--seed", "1", "--adj-out",
        adj.to_str().unwrap(),
    ]));
    let out = dir.path().join("o.csv");
    let cases: Vec<Vec<&str>> = vec![
        // Unknown method, listing valid identifiers.
        vec!["estimate", "--method", "nope", "--in", adj.to_str().unwrap(), "--out", out.to_str().unwrap()],
        // Unknown graphon.
        vec!["simulate", "--graphon", "9", "--n", "20", "--seed", "1", "--adj-out", out.to_str().unwrap()],
        // Graphon 1 needs at least one block.
        vec!["simulate", "--graphon", "1", "--n", "2", "--seed", "1", "--adj-out", out.to_str().unwrap()],
        // Missing required flag.
        vec!["simulate", "--graphon", "2", "--n", "20", "--seed", "1"],
        // Unknown subcommand.
        vec!["frobnicate"],
        // Masking probability out of range.
        vec!["linkpred", "--in", adj.to_str().unwrap(), "--p", "1.5", "--methods", "jaccard", "--seed", "1", "--roc-out", out.to_str().unwrap()],
        // Nonpositive bandwidth constant.
        vec!["estimate", "--method", "nbs", "--C", "-1", "--in", adj.to_str().unwrap(), "--out", out.to_str().unwrap()],
        // Nonpositive sweep grid entry.
        vec!["sweep", "--graphon", "2", "--n", "20", "--C-grid", "1,-2", "--reps", "1", "--seed", "1", "--out", out.to_str().unwrap()],
        // Oracle method without a simulation.
        vec!["estimate", "--method", "sbm-oracle", "--in", adj.to_str().unwrap(), "--out", out.to_str().unwrap()],
        // Unknown score method.
        vec!["linkpred", "--in", adj.to_str().unwrap(), "--p", "0.1", "--methods", "adamic", "--seed", "1", "--roc-out", out.to_str().unwrap()],
    ];
    for args in &cases {
        let result = netsmooth(args);
        assert_eq!(exit_code(&result), 1, "args {args:?}");
    }

    let unknown = netsmooth(&[
        "estimate", "--method", "nope", "--in", adj.to_str().unwrap(), "--out",
        out.to_str().unwrap(),
    ]);
    let stderr = String::from_utf8(unknown.stderr).unwrap();
    for id in ["nbs", "usvt", "svtk", "sas", "sas-svd", "sbm-spectral"] {
        assert!(stderr.contains(id), "missing {id} in: {stderr}");
    }
}

#[test]
fn data_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");

    let missing = dir.path().join("missing.csv");
    let ragged = dir.path().join("ragged.csv");
    std::fs::write(&ragged, "0,1\n0\n").unwrap();
    let nonbinary = dir.path().join("nonbinary.csv");
    std::fs::write(&nonbinary, "0,0.5\n0.5,0\n").unwrap();
    let negative = dir.path().join("neg.txt");
    std::fs::write(&negative, "0 -2\n").unwrap();
    let badmodel = dir.path().join("bm.json");
    std::fs::write(&badmodel, r#"{"B": [[2.0]]}"#).unwrap();
    let bm_arg = format!("blockmodel:{}", badmodel.display());

    let cases: Vec<Vec<&str>> = vec![
        vec!["estimate", "--method", "nbs", "--in", missing.to_str().unwrap(), "--out", out.to_str().unwrap()],
        vec!["estimate", "--method", "nbs", "--in", ragged.to_str().unwrap(), "--out", out.to_str().unwrap()],
        vec!["estimate", "--method", "nbs", "--in", nonbinary.to_str().unwrap(), "--out", out.to_str().unwrap()],
        vec!["estimate", "--method", "nbs", "--format", "edgelist", "--in", negative.to_str().unwrap(), "--out", out.to_str().unwrap()],
        vec!["simulate", "--graphon", &bm_arg, "--n", "20", "--seed", "1", "--adj-out", out.to_str().unwrap()],
    ];
    for args in &cases {
        let result = netsmooth(args);
        assert_eq!(exit_code(&result), 2, "args {args:?}");
    }
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(exit_code(&netsmooth(&["--help"])), 0);
    assert_eq!(exit_code(&netsmooth(&["--version"])), 0);
    assert_eq!(exit_code(&netsmooth(&["estimate", "--help"])), 0);
}

#[test]
fn simulate_blockmodel_file_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let bm = dir.path().join("bm.json");
    std::fs::write(&bm, r#"{"B": [[0.9, 0.05], [0.05, 0.9]]}"#).unwrap();
    let adj = dir.path().join("a.csv");
    let arg = format!("blockmodel:{}", bm.display());
    assert_ok(&netsmooth(&[
        "simulate", "--graphon", &arg, "--n", "30", "--seed", "2", "--adj-out",
        adj.to_str().unwrap(),
    ]));
    let m = read_matrix(&adj);
    assert_eq!(m.len(), 30);
    let edges: f64 = m.iter().flatten().sum();
    assert!(edges > 0.0, "a dense 2-block model should produce edges");
}
