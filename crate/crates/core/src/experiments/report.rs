use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use super::confound::ConfoundParams;
use super::protocols::{BasicCell, LokoReport, SweepResult};
use crate::error::{Error, Result};
use crate::ingest::TweetRecord;
use crate::models::ConfusionMatrix2;
use crate::scalar::Scalar;

/// Hex SHA-256 over the canonical NDJSON form of `records`, in order.
pub fn corpus_hash(records: &[TweetRecord]) -> String {
    let mut h = Sha256::new();
    for r in records {
        h.update(r.to_ndjson_line().as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

/// Hex SHA-256 of raw bytes, used for input files.
pub fn bytes_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Everything needed to rerun an experiment; contains no timestamps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    /// Extra command inputs (file paths, confound parameters).
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
    pub corpus_hashes: BTreeMap<String, String>,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: impl Into<String>, config: &ExperimentConfig) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            seed: config.seed,
            config: config.clone(),
            inputs: BTreeMap::new(),
            corpus_hashes: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }
}

/// A CSV table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(name: impl Into<String>, header: impl IntoIterator<Item = S>) -> Self {
        Table {
            name: name.into(),
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = row.iter().map(|c| csv_escape(c)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

fn csv_escape(c: &str) -> String {
    if c.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// Two-column whitespace-separated data for plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl PlotData {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (x, y) in &self.points {
            s.push_str(&format!("{x} {y}\n"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub manifest: Manifest,
    pub tables: Vec<Table>,
    pub plots: Vec<PlotData>,
    /// Extra JSON documents keyed by file stem.
    pub json: Vec<(String, serde_json::Value)>,
    /// Other files, written verbatim under their names.
    pub files: Vec<(String, Vec<u8>)>,
}

impl Report {
    pub fn new(manifest: Manifest) -> Self {
        Report {
            manifest,
            tables: Vec::new(),
            plots: Vec::new(),
            json: Vec::new(),
            files: Vec::new(),
        }
    }
}

fn write(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `<name>.csv`, `<name>.dat`, `<name>.json`, the raw files and
/// `manifest.json` into `dir`.
pub fn emit_report(report: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut manifest = report.manifest.clone();
    manifest.outputs.clear();
    let mut written = Vec::new();
    for t in &report.tables {
        let name = format!("{}.csv", t.name);
        write(&dir.join(&name), t.to_csv().as_bytes())?;
        manifest.outputs.push(name);
    }
    for p in &report.plots {
        let name = format!("{}.dat", p.name);
        write(&dir.join(&name), p.to_text().as_bytes())?;
        manifest.outputs.push(name);
    }
    for (stem, v) in &report.json {
        let name = format!("{stem}.json");
        let text = serde_json::to_string_pretty(v).map_err(|e| Error::Invariant(e.to_string()))?;
        write(&dir.join(&name), format!("{text}\n").as_bytes())?;
        manifest.outputs.push(name);
    }
    for (name, bytes) in &report.files {
        write(&dir.join(name), bytes)?;
        manifest.outputs.push(name.clone());
    }
    for name in &manifest.outputs {
        written.push(dir.join(name));
    }
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Invariant(e.to_string()))?;
    let path = dir.join("manifest.json");
    write(&path, format!("{text}\n").as_bytes())?;
    written.push(path);
    Ok(written)
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| Error::Config(format!("bad manifest: {e}")))?;
    m.config.validate()?;
    Ok(m)
}

pub const CONFUSION_HEADER: [&str; 8] = [
    "classifier",
    "scheme",
    "true_class",
    "n",
    "pred_control",
    "pred_topic",
    "rate_control",
    "rate_topic",
];

/// Two rows, control first.
pub fn confusion_rows(classifier: &str, scheme: &str, m: &ConfusionMatrix2) -> Vec<Vec<String>> {
    let rates = m.rates();
    [0usize, 1]
        .into_iter()
        .map(|r| {
            vec![
                classifier.to_string(),
                scheme.to_string(),
                if r == 0 { "control" } else { "topic" }.to_string(),
                (m.counts[r][0] + m.counts[r][1]).to_string(),
                m.counts[r][0].to_string(),
                m.counts[r][1].to_string(),
                rates[r][0].to_string(),
                rates[r][1].to_string(),
            ]
        })
        .collect()
}

pub fn basic_table(cells: &[BasicCell]) -> Table {
    let mut t = Table::new("classification", CONFUSION_HEADER);
    for c in cells {
        t.rows.extend(confusion_rows(c.classifier.as_str(), c.scheme.as_str(), &c.confusion));
    }
    t
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

pub fn loko_table(r: &LokoReport) -> Table {
    let mut t = Table::new(
        "loko",
        [
            "keyword",
            "n_train_topic",
            "n_heldout",
            "acc_control_test",
            "acc_topic_test",
            "acc_heldout_keyword",
        ],
    );
    t.push(["(all)".to_string(), String::new(), String::new(), r.baseline_control.to_string(), r.baseline_topic.to_string(), String::new()]);
    for row in &r.rows {
        t.push([
            row.keyword.clone(),
            row.n_train_topic.to_string(),
            row.n_heldout.to_string(),
            row.acc_control_test.to_string(),
            row.acc_topic_test.to_string(),
            opt(row.acc_heldout_keyword),
        ]);
    }
    t
}

pub fn sweep_tables<F: Scalar>(r: &SweepResult<F>) -> (Table, Table) {
    let mut s = Table::new(
        "lasso_sweep",
        ["lambda", "nnz", "rate_control", "rate_topic", "iterations", "violation", "objective"],
    );
    let mut top = Table::new("lasso_top_terms", ["lambda", "rank", "term", "weight"]);
    for (p, terms) in r.points.iter().zip(&r.top_terms) {
        let rates = p.confusion.rates();
        s.push([
            p.lambda.to_string(),
            p.nnz.to_string(),
            rates[0][0].to_string(),
            rates[1][1].to_string(),
            p.diagnostics.iterations.to_string(),
            p.diagnostics.violation.to_string(),
            p.diagnostics.final_objective.to_string(),
        ]);
        for (i, (term, w)) in terms.iter().enumerate() {
            top.push([p.lambda.to_string(), (i + 1).to_string(), term.clone(), w.to_string()]);
        }
    }
    (s, top)
}

pub fn confound_table(p: &ConfoundParams, formula: f64, simulated: Option<(u64, f64)>) -> Table {
    let mut t = Table::new("confound", ["p_m", "p_n", "rho_m", "apparent_specificity", "draws", "simulated"]);
    t.push([
        p.p_m.to_string(),
        p.p_n.to_string(),
        p.rho_m.to_string(),
        formula.to_string(),
        simulated.map_or_else(String::new, |s| s.0.to_string()),
        opt(simulated.map(|s| s.1)),
    ]);
    t
}
