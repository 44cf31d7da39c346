use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use subgraph_ebtc::communicability::read_scores_csv;
use subgraph_ebtc::experiments::{ExperimentReport, SUMMARY_HEADER};
use subgraph_ebtc::graph::{clique, write_edge_list, GraphGenSpec};
use subgraph_ebtc::identify::embed;
use tempfile::TempDir;

fn ebtc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ebtc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn edge_lines(text: &str) -> usize {
    text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).count()
}

#[test]
fn generate_empty_er() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.txt");
    let o = ebtc(&["generate", "--model", "er", "--nodes", "100", "--avg-degree", "0", "--out", path_str(&out)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("n=100 E=0 density=0.000000"));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with('#'));
    assert!(text.contains("# nodes: 100"));
    assert_eq!(edge_lines(&text), 0);
}

#[test]
fn generate_is_byte_identical_for_fixed_seed() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = ebtc(&["generate", "--model", "ba", "--nodes", "300", "--m", "3", "--seed", "17", "--out", path_str(&out)]);
        assert!(o.status.success());
        fs::read(out).unwrap()
    };
    assert_eq!(run("a.txt"), run("b.txt"));
}

#[test]
fn generate_small_world_edge_count() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("sw.txt");
    let o = ebtc(&["generate", "--model", "sw", "--nodes", "1024", "--k", "40", "--beta", "0.1", "--out", path_str(&out)]);
    assert!(o.status.success());
    assert_eq!(edge_lines(&fs::read_to_string(out).unwrap()), 20480);
}

#[test]
fn bad_flags_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.txt");
    let out = path_str(&out);
    for args in [
        vec!["generate", "--model", "er", "--nodes", "100", "--out", out],
        vec!["generate", "--model", "zz", "--nodes", "100", "--out", out],
        vec!["generate", "--model", "sw", "--nodes", "100", "--k", "3", "--out", out],
        vec!["generate", "--model", "er", "--nodes", "100", "--avg-degree", "1"],
        vec!["generate", "--model", "er", "--nodes", "ten", "--avg-degree", "1", "--out", out],
    ] {
        let o = ebtc(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn ebtc_closed_forms() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "# nodes: 3\n").unwrap();
    let csv = dir.path().join("empty.csv");
    assert!(ebtc(&["ebtc", "--graph", path_str(&empty), "--out", path_str(&csv)]).status.success());
    assert_eq!(read_scores_csv(fs::read(&csv).unwrap().as_slice()).unwrap(), vec![1.0; 3]);

    let k3 = dir.path().join("k3.txt");
    fs::write(&k3, "0 1\n1 2\n0 2\n").unwrap();
    let o = ebtc(&["ebtc", "--graph", path_str(&k3), "--out", path_str(&csv)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("threshold="));
    let scores = read_scores_csv(fs::read(&csv).unwrap().as_slice()).unwrap();
    assert_eq!(scores.len(), 3);
    for s in scores {
        assert!((s - 2f64.exp()).abs() < 1e-8);
    }
}

#[test]
fn ebtc_unreadable_graph_is_runtime_error() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.txt");
    let csv = dir.path().join("out.csv");
    assert_eq!(ebtc(&["ebtc", "--graph", path_str(&missing), "--out", path_str(&csv)]).status.code(), Some(1));
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0 1\n2 2\n").unwrap();
    let o = ebtc(&["ebtc", "--graph", path_str(&bad), "--out", path_str(&csv)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

fn threshold_of(o: &Output) -> f64 {
    let text = stdout(o);
    let field = text.split_whitespace().find_map(|w| w.strip_prefix("threshold=")).unwrap();
    field.parse().unwrap()
}

#[test]
fn ebtc_threshold_separates_clique_in_dense_er() {
    let dir = TempDir::new().unwrap();
    let target = clique(20).unwrap();
    let mut recovered = 0.0;
    let seeds = 20;
    for seed in 0..seeds {
        let bg = GraphGenSpec::erdos_renyi(1024, 39.0, 500 + seed).generate().unwrap();
        let (g, emb) = embed(&bg, &target, 900 + seed).unwrap();
        let graph = dir.path().join(format!("g{seed}.txt"));
        write_edge_list(&g, fs::File::create(&graph).unwrap()).unwrap();
        let csv = dir.path().join(format!("s{seed}.csv"));
        let o = ebtc(&["ebtc", "--graph", path_str(&graph), "--out", path_str(&csv), "--top", "20"]);
        assert!(o.status.success());
        let threshold = threshold_of(&o);
        let scores = read_scores_csv(fs::read(&csv).unwrap().as_slice()).unwrap();
        let above = emb.image().iter().filter(|&&v| scores[v] >= threshold).count();
        recovered += above as f64 / 20.0;
    }
    let mean = recovered / seeds as f64;
    assert!(mean >= 0.85, "mean fraction above threshold {mean}");
}

const TRIVIAL: &str = r#"
model = "er"
nodes = 20
avg_degree = 0.0
target = "clique"
target_nodes = 20
num_backgrounds = 1
runs = 1
"#;

const SMALL_SPARSE: &str = r#"
name = "small"
model = "er"
nodes = 400
avg_degree = 2.0
target = "sparse"
num_backgrounds = 5
runs = 6
base_seed = 3
"#;

fn read_report(path: &Path) -> ExperimentReport {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn experiment_target_only_background_is_perfect() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("trivial.toml");
    fs::write(&cfg, TRIVIAL).unwrap();
    let out = dir.path().join("out");
    let o = ebtc(&["experiment", path_str(&cfg), "--out-dir", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_report(&out.join("trivial.json"));
    assert_eq!(report.summary.mean_rate, 1.0);
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(lines.next(), Some(SUMMARY_HEADER));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "er");
    assert_eq!(row[5], "1.000000");
    assert_eq!(row[9], "ebtc");
}

#[test]
fn experiment_config_errors_list_keys() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "model = \"er\"\nnodes = 100\nm = 4\nflavour = 1\n").unwrap();
    let o = ebtc(&["experiment", path_str(&cfg), "--out-dir", path_str(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    for key in ["`m`", "`flavour`", "`avg_degree`", "`target`", "`num_backgrounds`"] {
        assert!(err.contains(key), "{key} not in {err}");
    }
}

#[test]
fn jobs_do_not_change_results() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("small.toml");
    fs::write(&cfg, SMALL_SPARSE).unwrap();
    let mut reports = Vec::new();
    for jobs in ["1", "2", "4"] {
        let out = dir.path().join(format!("out{jobs}"));
        let o = ebtc(&["experiment", path_str(&cfg), "--out-dir", path_str(&out), "--jobs", jobs, "--runs", "8"]);
        assert!(o.status.success());
        reports.push(read_report(&out.join("small.json")).without_timings());
    }
    assert_eq!(reports[0].runs.len(), 8);
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0], reports[2]);
}

#[test]
fn summary_rows_append() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("small.toml");
    fs::write(&cfg, SMALL_SPARSE).unwrap();
    let out = dir.path().join("out");
    for _ in 0..2 {
        assert!(ebtc(&["experiment", path_str(&cfg), "--out-dir", path_str(&out)]).status.success());
    }
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], SUMMARY_HEADER);
    // everything except the trailing secs/method columns repeats
    let strip = |l: &str| l.rsplitn(3, ',').nth(2).unwrap().to_string();
    assert_eq!(strip(lines[1]), strip(lines[2]));
}

#[test]
fn baseline_runs_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("base.toml");
    fs::write(
        &cfg,
        "model = \"er\"\nnodes = 200\navg_degree = 4.0\ntarget = \"clique\"\ntarget_nodes = 12\nnum_backgrounds = 1\nruns = 3\nr = 4\ncoeffs = [1.0]\n",
    )
    .unwrap();
    let mut reports = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("out{i}"));
        let o = ebtc(&["baseline", path_str(&cfg), "--out-dir", path_str(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
        assert!(summary.lines().nth(1).unwrap().ends_with(",modularity"));
        reports.push(read_report(&out.join("base.modularity.json")).without_timings());
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0].dimensions, Some(4));
}
