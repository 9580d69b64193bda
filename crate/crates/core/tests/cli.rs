use std::path::Path;
use std::process::{Command, Output};

fn arbmatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arbmatch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_order_oracle_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let stream = dir.path().join("s.txt");

    let o = arbmatch(&[
        "generate",
        "--kind",
        "union-forests",
        "--n",
        "60",
        "--c",
        "2",
        "--seed",
        "4",
        "-o",
        p(&graph),
    ]);
    assert!(o.status.success(), "{o:?}");
    let text = std::fs::read_to_string(&graph).unwrap();
    assert!(text.starts_with("n 60\n# c 2\n"));

    let o = arbmatch(&[
        "order",
        "--graph",
        p(&graph),
        "--policy",
        "centers-first",
        "-o",
        p(&stream),
    ]);
    assert!(o.status.success(), "{o:?}");

    let o = arbmatch(&[
        "oracle",
        "--stream",
        p(&stream),
        "--mu",
        "5",
        "--alpha",
        "12",
    ]);
    assert!(o.status.success(), "{o:?}");
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let m_star = report["m_star"].as_u64().unwrap();
    assert!(m_star > 0);
    assert!(report["e_alpha"].as_u64().is_some());
    assert!(2 * report["greedy"].as_u64().unwrap() >= m_star);

    let o = arbmatch(&[
        "estimate",
        "--stream",
        p(&stream),
        "--algorithm",
        "logspace",
        "--epsilon",
        "0.2",
        "--seed",
        "1",
    ]);
    assert!(o.status.success(), "{o:?}");
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    let est: serde_json::Value = serde_json::from_str(&out).unwrap();
    let v = est["outcome"]["Value"].as_f64().unwrap();
    assert!(v >= m_star as f64);

    let o = arbmatch(&[
        "estimate",
        "--stream",
        p(&stream),
        "--algorithm",
        "alg2",
        "--mu",
        "5",
    ]);
    assert!(o.status.success(), "{o:?}");
}

#[test]
fn dynamic_order_and_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let stream = dir.path().join("s.txt");
    assert!(arbmatch(&[
        "generate",
        "--kind",
        "random-tree",
        "--n",
        "40",
        "-o",
        p(&graph)
    ])
    .status
    .success());
    let o = arbmatch(&[
        "order",
        "--graph",
        p(&graph),
        "--policy",
        "uniform-random",
        "--seed",
        "2",
        "--delete-fraction",
        "0.5",
        "-o",
        p(&stream),
    ]);
    assert!(o.status.success(), "{o:?}");
    assert!(std::fs::read_to_string(&stream).unwrap().contains("\n- "));
    let o = arbmatch(&[
        "estimate",
        "--stream",
        p(&stream),
        "--algorithm",
        "dynamic",
        "--mu",
        "3",
        "--epsilon",
        "0.5",
    ]);
    assert!(o.status.success(), "{o:?}");
    // Insert-only estimators refuse the stream.
    let o = arbmatch(&[
        "estimate",
        "--stream",
        p(&stream),
        "--algorithm",
        "alg4",
        "--alpha",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_lemmas_reports() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("t.txt");
    assert!(arbmatch(&[
        "generate",
        "--kind",
        "random-tree",
        "--n",
        "50",
        "--seed",
        "3",
        "-o",
        p(&graph)
    ])
    .status
    .success());
    let o = arbmatch(&[
        "check-lemmas",
        "--graph",
        p(&graph),
        "--mu",
        "3",
        "--orderings",
        "20",
    ]);
    assert!(o.status.success(), "{o:?}");
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["first_violation"].is_null());
    let tree = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "tree-e1-sandwich")
        .unwrap();
    assert_eq!(tree["evaluated"], 20);

    // mu must exceed 2c
    let o = arbmatch(&["check-lemmas", "--graph", p(&graph), "--mu", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn experiment_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &config,
        format!(
            "# small batch\ngenerator = random-tree\nn = 30\nalgorithm = alg1\nmu = 3\np = 0.5\ntrials = 5\nseed = 10\noutput = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let o = arbmatch(&["experiment", p(&config)]);
    assert!(o.status.success(), "{o:?}");
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "seed,value,m_star,ratio,space_peak,fail,ms");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("10,"));
    let summary: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(summary["trials"], 5);
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(arbmatch(&["estimate"]).status.code(), Some(2));
    assert_eq!(arbmatch(&["frobnicate"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "n 3\n+ 0 1\n- 1 2\n").unwrap();
    let o = arbmatch(&["estimate", "--stream", p(&bad), "--algorithm", "greedy"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let cfg = dir.path().join("bad.cfg");
    std::fs::write(
        &cfg,
        "generator = union-forests\nn = 20\nc = 2\nalgorithm = alg2\nmu = 4\n",
    )
    .unwrap();
    assert_eq!(arbmatch(&["experiment", p(&cfg)]).status.code(), Some(2));
}
