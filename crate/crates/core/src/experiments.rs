//! Experiment files, reports and the operations behind the `ebtc` binary.
//!
//! Experiment configs are flat TOML tables:
//!
//! | key | type | notes |
//! |-----|------|-------|
//! | `name` | string | optional; names the report file (defaults to the config file stem) |
//! | `model` | `"er"`, `"ba"`, `"sw"` | required |
//! | `nodes` | integer | required |
//! | `avg_degree` | float | required for `er` |
//! | `m` | integer | required for `ba` |
//! | `ring_k` | integer | required for `sw` |
//! | `beta` | float | `sw` only, default 0.1 |
//! | `target` | `"sparse"`, `"clique"` | required |
//! | `target_nodes` | integer | `clique` only, default 20 |
//! | `target_seed` | integer | `sparse` only, default 0 |
//! | `num_backgrounds` | integer | required |
//! | `k` | integer | candidate-set size, default: target size |
//! | `runs` | integer | default 20 |
//! | `base_seed` | integer | default 0 |
//! | `krylov_m`, `krylov_tol`, `krylov_max_restarts` | | Krylov settings, defaults 30, 1e-8, 4 |
//! | `r` | integer | modularity baseline only, default 10 |
//! | `coeffs` | float array | modularity baseline only, one per background, default uniform |

use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::baseline::{run_baseline, BaselineConfig, FilterCoeffs, DEFAULT_DIMENSIONS};
use crate::communicability::{write_scores_csv, ScoreKind, ScoreVector};
use crate::error::{Error, Result};
use crate::expm::{expm_action, KrylovParams};
use crate::graph::{
    canonical_sparse_target, clique, density, read_edge_list, write_edge_list_with_header, GraphGenSpec, Model,
    SPARSE_TARGET_NODES,
};
use crate::identify::{run_pipeline_with_jobs, summarize, top_k_scores, ExperimentConfig, PhaseTimings, RateSummary, RunResult};

/// Rewiring probability used when an SW spec does not give one.
pub const DEFAULT_BETA: f64 = 0.1;
pub const DEFAULT_RUNS: usize = 20;
/// Header of the summary CSV.
pub const SUMMARY_HEADER: &str = "model,n,avg_deg,N,runs,mean_rate,std,perfect_frac,secs,method";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ebtc,
    Modularity,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Ebtc => "ebtc",
            Method::Modularity => "modularity",
        })
    }
}

/// Builds a generator spec from command-line style options.
pub fn spec_from_flags(
    model: &str,
    nodes: usize,
    avg_degree: Option<f64>,
    m: Option<usize>,
    k: Option<usize>,
    beta: Option<f64>,
    seed: u64,
) -> Result<GraphGenSpec> {
    let mut problems = Vec::new();
    let mut reject = |flag: &str, given: bool| {
        if given {
            problems.push(format!("--{flag} does not apply to model {model}"));
        }
    };
    let spec = match model {
        "er" => {
            reject("m", m.is_some());
            reject("k", k.is_some());
            reject("beta", beta.is_some());
            avg_degree.map(|d| GraphGenSpec::erdos_renyi(nodes, d, seed))
        }
        "ba" => {
            reject("avg-degree", avg_degree.is_some());
            reject("k", k.is_some());
            reject("beta", beta.is_some());
            m.map(|m| GraphGenSpec::barabasi_albert(nodes, m, seed))
        }
        "sw" => {
            reject("avg-degree", avg_degree.is_some());
            reject("m", m.is_some());
            k.map(|k| GraphGenSpec::watts_strogatz(nodes, k, beta.unwrap_or(DEFAULT_BETA), seed))
        }
        other => {
            problems.push(format!("unknown model {other:?} (expected er, ba or sw)"));
            None
        }
    };
    if spec.is_none() && matches!(model, "er" | "ba" | "sw") {
        let flag = match model {
            "er" => "--avg-degree",
            "ba" => "--m",
            _ => "--k",
        };
        problems.push(format!("model {model} requires {flag}"));
    }
    if !problems.is_empty() {
        return Err(Error::Config(problems));
    }
    let spec = spec.expect("checked above");
    spec.validate().map_err(|e| Error::Config(vec![e.to_string()]))?;
    Ok(spec)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenerateSummary {
    pub nodes: usize,
    pub edges: usize,
    pub density: f64,
}

/// Generates a background and writes it as an edge list.
pub fn generate_to_file(spec: &GraphGenSpec, out: &Path) -> Result<GenerateSummary> {
    let g = spec.generate()?;
    let mut header = vec!["generated by ebtc".to_string(), format!("model: {}", spec.model.short_name())];
    match spec.model {
        Model::ErdosRenyi { avg_degree } => header.push(format!("avg_degree: {avg_degree}")),
        Model::BarabasiAlbert { m } => header.push(format!("m: {m}")),
        Model::WattsStrogatz { k, beta } => {
            header.push(format!("k: {k}"));
            header.push(format!("beta: {beta}"));
        }
    }
    header.push(format!("seed: {}", spec.seed));
    write_edge_list_with_header(&g, BufWriter::new(File::create(out)?), &header)?;
    Ok(GenerateSummary {
        nodes: g.node_count(),
        edges: g.edge_count(),
        density: density(&g)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EbtcSummary {
    pub nodes: usize,
    /// Candidate-set size used for the threshold (clamped to the node count).
    pub k: usize,
    /// The `k`-th largest score; candidates are those at or above it.
    pub threshold: f64,
    pub est_error: f64,
}

/// Total communicability of an edge-list graph, written as `node,score` CSV.
pub fn ebtc_to_file(graph: &Path, out: &Path, params: &KrylovParams, k: usize) -> Result<EbtcSummary> {
    let g = read_edge_list(BufReader::new(File::open(graph)?))?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::param("graph has no nodes"));
    }
    let result = expm_action(&g, &vec![1.0; n], params)?;
    let est_error = result.est_error;
    let scores = ScoreVector::new(result.value, ScoreKind::TotalCommunicability, 1)?;
    write_scores_csv(&scores, BufWriter::new(File::create(out)?))?;
    let k = k.clamp(1, n);
    let top = top_k_scores(scores.scores(), k)?;
    let threshold = scores.scores()[top[k - 1]];
    Ok(EbtcSummary { nodes: n, k, threshold, est_error })
}

/// A parsed experiment file.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentFile {
    pub name: Option<String>,
    pub experiment: ExperimentConfig,
    pub dimensions: usize,
    pub coeffs: Option<FilterCoeffs>,
}

impl ExperimentFile {
    pub fn baseline(&self) -> BaselineConfig {
        BaselineConfig {
            experiment: self.experiment.clone(),
            dimensions: self.dimensions,
            coeffs: self.coeffs.clone(),
        }
    }
}

struct Keys<'a> {
    table: &'a Table,
    used: Vec<&'static str>,
    problems: Vec<String>,
}

impl<'a> Keys<'a> {
    fn get(&mut self, key: &'static str) -> Option<&'a Value> {
        self.used.push(key);
        self.table.get(key)
    }

    fn string(&mut self, key: &'static str) -> Option<String> {
        match self.get(key)? {
            Value::String(s) => Some(s.clone()),
            _ => {
                self.problems.push(format!("`{key}` must be a string"));
                None
            }
        }
    }

    fn int(&mut self, key: &'static str) -> Option<u64> {
        match self.get(key)? {
            Value::Integer(i) if *i >= 0 => Some(*i as u64),
            _ => {
                self.problems.push(format!("`{key}` must be a non-negative integer"));
                None
            }
        }
    }

    fn usize(&mut self, key: &'static str) -> Option<usize> {
        self.int(key).map(|v| v as usize)
    }

    fn float(&mut self, key: &'static str) -> Option<f64> {
        match self.get(key)? {
            Value::Float(f) => Some(*f),
            Value::Integer(i) => Some(*i as f64),
            _ => {
                self.problems.push(format!("`{key}` must be a number"));
                None
            }
        }
    }

    fn floats(&mut self, key: &'static str) -> Option<Vec<f64>> {
        let Value::Array(items) = self.get(key)? else {
            self.problems.push(format!("`{key}` must be an array of numbers"));
            return None;
        };
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            match item {
                Value::Float(f) => out.push(*f),
                Value::Integer(i) => out.push(*i as f64),
                _ => {
                    self.problems.push(format!("`{key}` must be an array of numbers"));
                    return None;
                }
            }
        }
        Some(out)
    }

    fn required<T>(&mut self, key: &'static str, value: Option<T>) -> Option<T> {
        if value.is_none() && !self.table.contains_key(key) {
            self.problems.push(format!("missing required key `{key}`"));
        }
        value
    }

    fn forbid(&mut self, key: &'static str, why: &str) {
        self.used.push(key);
        if self.table.contains_key(key) {
            self.problems.push(format!("`{key}` does not apply {why}"));
        }
    }
}

/// Parses and validates an experiment file, listing every offending key.
pub fn parse_experiment_config(text: &str, method: Method) -> Result<ExperimentFile> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Config(vec![e.message().to_string()]))?;
    let mut keys = Keys { table: &table, used: Vec::new(), problems: Vec::new() };

    let name = keys.string("name");
    let model = keys.string("model");
    let model = keys.required("model", model);
    let nodes = keys.usize("nodes");
    let nodes = keys.required("nodes", nodes);

    let background_model = match model.as_deref() {
        Some("er") => {
            keys.forbid("m", "to model er");
            keys.forbid("ring_k", "to model er");
            keys.forbid("beta", "to model er");
            let d = keys.float("avg_degree");
            keys.required("avg_degree", d).map(|avg_degree| Model::ErdosRenyi { avg_degree })
        }
        Some("ba") => {
            keys.forbid("avg_degree", "to model ba");
            keys.forbid("ring_k", "to model ba");
            keys.forbid("beta", "to model ba");
            let m = keys.usize("m");
            keys.required("m", m).map(|m| Model::BarabasiAlbert { m })
        }
        Some("sw") => {
            keys.forbid("avg_degree", "to model sw");
            keys.forbid("m", "to model sw");
            let k = keys.usize("ring_k");
            let beta = keys.float("beta").unwrap_or(DEFAULT_BETA);
            keys.required("ring_k", k).map(|k| Model::WattsStrogatz { k, beta })
        }
        Some(other) => {
            keys.problems.push(format!("`model` must be er, ba or sw, got {other:?}"));
            for k in ["avg_degree", "m", "ring_k", "beta"] {
                keys.used.push(k);
            }
            None
        }
        None => {
            for k in ["avg_degree", "m", "ring_k", "beta"] {
                keys.used.push(k);
            }
            None
        }
    };

    let target_kind = keys.string("target");
    let target_kind = keys.required("target", target_kind);
    let target = match target_kind.as_deref() {
        Some("sparse") => {
            keys.forbid("target_nodes", "to the sparse target (fixed at 20 nodes)");
            let seed = keys.int("target_seed").unwrap_or(0);
            Some(canonical_sparse_target(seed))
        }
        Some("clique") => {
            keys.forbid("target_seed", "to a clique target");
            let t = keys.usize("target_nodes").unwrap_or(SPARSE_TARGET_NODES);
            match clique(t) {
                Ok(c) => Some(c),
                Err(e) => {
                    keys.problems.push(format!("`target_nodes`: {e}"));
                    None
                }
            }
        }
        Some(other) => {
            keys.problems.push(format!("`target` must be sparse or clique, got {other:?}"));
            keys.used.extend(["target_nodes", "target_seed"]);
            None
        }
        None => {
            keys.used.extend(["target_nodes", "target_seed"]);
            None
        }
    };

    let num_backgrounds = keys.usize("num_backgrounds");
    let num_backgrounds = keys.required("num_backgrounds", num_backgrounds);
    let k = keys.usize("k");
    let runs = keys.usize("runs").unwrap_or(DEFAULT_RUNS);
    let base_seed = keys.int("base_seed").unwrap_or(0);
    let defaults = KrylovParams::default();
    let krylov = KrylovParams {
        m: keys.usize("krylov_m").unwrap_or(defaults.m),
        tol: keys.float("krylov_tol").unwrap_or(defaults.tol),
        max_restarts: keys.usize("krylov_max_restarts").unwrap_or(defaults.max_restarts),
    };

    let (dimensions, coeffs) = match method {
        Method::Modularity => {
            let r = keys.usize("r").unwrap_or(DEFAULT_DIMENSIONS);
            let coeffs = keys.floats("coeffs").and_then(|c| match FilterCoeffs::new(c) {
                Ok(c) => Some(c),
                Err(e) => {
                    keys.problems.push(format!("`coeffs`: {e}"));
                    None
                }
            });
            (r, coeffs)
        }
        Method::Ebtc => {
            keys.forbid("r", "to the EBTC method");
            keys.forbid("coeffs", "to the EBTC method");
            (DEFAULT_DIMENSIONS, None)
        }
    };

    let mut unknown: Vec<&String> = table.keys().filter(|k| !keys.used.contains(&k.as_str())).collect();
    unknown.sort();
    for key in unknown {
        keys.problems.push(format!("unknown key `{key}`"));
    }
    if !keys.problems.is_empty() {
        return Err(Error::Config(keys.problems));
    }

    let (Some(model), Some(n), Some(target), Some(num_backgrounds)) = (background_model, nodes, target, num_backgrounds)
    else {
        return Err(Error::Config(vec!["incomplete configuration".into()]));
    };
    let experiment = ExperimentConfig {
        background: GraphGenSpec { model, n, seed: base_seed },
        target,
        num_backgrounds,
        k,
        runs,
        base_seed,
        krylov,
    };
    let file = ExperimentFile { name, experiment, dimensions, coeffs };
    let check = match method {
        Method::Ebtc => file.experiment.validate(),
        Method::Modularity => file.baseline().validate(),
    };
    check.map_err(|e| Error::Config(vec![e.to_string()]))?;
    Ok(file)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportTimings {
    pub generation_secs: f64,
    pub ebtc_secs: f64,
    pub selection_secs: f64,
    pub total_secs: f64,
}

/// Everything one experiment produced. Serialized as JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub method: Method,
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dimensions: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coeffs: Option<Vec<f64>>,
    pub summary: RateSummary,
    /// Wall time, summed over worker threads per phase; `total_secs` is elapsed.
    pub timings: ReportTimings,
    pub runs: Vec<RunResult>,
}

impl ExperimentReport {
    fn new(name: String, method: Method, file: &ExperimentFile, runs: Vec<RunResult>, phases: PhaseTimings, total: f64) -> Self {
        let (dimensions, coeffs) = match method {
            Method::Ebtc => (None, None),
            Method::Modularity => (
                Some(file.dimensions),
                Some(file.baseline().coefficients().map(Vec::from).unwrap_or_default()),
            ),
        };
        Self {
            name,
            method,
            config: file.experiment.clone(),
            dimensions,
            coeffs,
            summary: summarize(&runs),
            timings: ReportTimings {
                generation_secs: phases.generation,
                ebtc_secs: phases.ebtc,
                selection_secs: phases.selection,
                total_secs: total,
            },
            runs,
        }
    }

    /// One row matching [`SUMMARY_HEADER`].
    pub fn summary_row(&self) -> String {
        let cfg = &self.config;
        format!(
            "{},{},{:.4},{},{},{:.6},{:.6},{:.6},{:.3},{}",
            cfg.background.model.short_name(),
            cfg.background.n,
            self.summary.mean_background_degree,
            cfg.num_backgrounds,
            self.summary.runs,
            self.summary.mean_rate,
            self.summary.std_rate,
            self.summary.perfect_fraction,
            self.timings.total_secs,
            self.method,
        )
    }

    /// Copy with wall-clock fields zeroed, for comparing reruns.
    pub fn without_timings(&self) -> Self {
        Self { timings: ReportTimings::default(), ..self.clone() }
    }
}

/// Runs an already-parsed experiment with the given method.
pub fn run_experiment(file: &ExperimentFile, name: &str, method: Method, jobs: usize) -> Result<ExperimentReport> {
    let start = Instant::now();
    let (runs, phases) = match method {
        Method::Ebtc => run_pipeline_with_jobs(&file.experiment, jobs)?,
        Method::Modularity => run_baseline(&file.baseline(), jobs)?,
    };
    Ok(ExperimentReport::new(name.to_string(), method, file, runs, phases, start.elapsed().as_secs_f64()))
}

/// Reads a config file, runs it, writes `<name>.json` into `out_dir`, and
/// appends a row to `out_dir/summary.csv`.
pub fn run_experiment_file(
    config: &Path,
    out_dir: &Path,
    method: Method,
    jobs: usize,
    runs_override: Option<usize>,
) -> Result<ExperimentReport> {
    let text = fs::read_to_string(config)?;
    let mut file = parse_experiment_config(&text, method)?;
    if let Some(runs) = runs_override {
        if runs == 0 {
            return Err(Error::Config(vec!["--runs must be at least 1".into()]));
        }
        file.experiment.runs = runs;
    }
    let name = file.name.clone().unwrap_or_else(|| {
        config
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "experiment".into())
    });
    let report = run_experiment(&file, &name, method, jobs)?;

    fs::create_dir_all(out_dir)?;
    let suffix = match method {
        Method::Ebtc => "",
        Method::Modularity => ".modularity",
    };
    let report_path = out_dir.join(format!("{name}{suffix}.json"));
    let mut w = BufWriter::new(File::create(report_path)?);
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    append_summary(&out_dir.join("summary.csv"), &report)?;
    Ok(report)
}

/// Appends a summary row, writing the header first if the file is new.
pub fn append_summary(path: &Path, report: &ExperimentReport) -> Result<()> {
    let fresh = !path.exists() || fs::metadata(path)?.len() == 0;
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(f, "{SUMMARY_HEADER}")?;
    }
    writeln!(f, "{}", report.summary_row())?;
    Ok(())
}
