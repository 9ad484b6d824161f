use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{IdfWeighting, Scheme, VocabPolicy};
use crate::ingest::KeywordSet;
use crate::models::EventModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    #[default]
    NaiveBayes,
    Logreg,
    Lasso,
}

impl ClassifierKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::NaiveBayes => "naive_bayes",
            ClassifierKind::Logreg => "logreg",
            ClassifierKind::Lasso => "lasso",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive_bayes" | "nb" => Ok(ClassifierKind::NaiveBayes),
            "logreg" | "lr" => Ok(ClassifierKind::Logreg),
            "lasso" => Ok(ClassifierKind::Lasso),
            _ => Err(Error::Config(format!("unknown classifier `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// Seeded uniform shuffle of each corpus.
    #[default]
    Random,
    /// Earliest tweets train; records without a timestamp sort last.
    Chronological,
}

impl FromStr for SplitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(SplitMode::Random),
            "chronological" => Ok(SplitMode::Chronological),
            _ => Err(Error::Config(format!("unknown split mode `{s}`"))),
        }
    }
}

pub const DEFAULT_KEYWORDS: [&str; 4] = ["autism", "adhd", "asperger", "aspie"];

/// Everything an experiment depends on besides the corpora themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub split_fraction: f64,
    pub split_mode: SplitMode,
    pub keywords: KeywordSet,
    pub vocab_policy: VocabPolicy,
    pub vocab_size: usize,
    pub scheme: Scheme,
    pub idf_weighting: IdfWeighting,
    pub classifier: ClassifierKind,
    pub nb_alpha: f64,
    pub nb_event_model: EventModel,
    pub c: f64,
    pub lambda: f64,
    pub lambdas: Vec<f64>,
    pub tol: f64,
    pub max_passes: usize,
    pub fit_bias: bool,
    pub topic_path: Option<PathBuf>,
    pub control_path: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 42,
            split_fraction: 0.5,
            split_mode: SplitMode::Random,
            keywords: KeywordSet::new(DEFAULT_KEYWORDS).expect("default keywords are valid"),
            vocab_policy: VocabPolicy::FreqOverall,
            vocab_size: 1500,
            scheme: Scheme::Count,
            idf_weighting: IdfWeighting::Log,
            classifier: ClassifierKind::NaiveBayes,
            nb_alpha: 1.0,
            nb_event_model: EventModel::Multinomial,
            c: 1.0,
            lambda: 1e-3,
            lambdas: vec![1e-5, 1e-4, 1e-3, 1e-2],
            tol: 1e-8,
            max_passes: 100_000,
            fit_bias: true,
            topic_path: None,
            control_path: None,
            out_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return bad(format!("split_fraction must lie in (0, 1), got {}", self.split_fraction));
        }
        if self.vocab_size == 0 {
            return bad("vocab_size must be at least 1".into());
        }
        if !(self.nb_alpha > 0.0 && self.nb_alpha.is_finite()) {
            return bad(format!("nb_alpha must be positive, got {}", self.nb_alpha));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return bad(format!("c must be positive, got {}", self.c));
        }
        if let Some(l) = std::iter::once(&self.lambda)
            .chain(&self.lambdas)
            .find(|l| !(**l > 0.0 && l.is_finite()))
        {
            return bad(format!("lambda values must be positive, got {l}"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_passes == 0 {
            return bad("max_passes must be at least 1".into());
        }
        if self.keywords.is_empty() {
            return bad("keyword set is empty".into());
        }
        Ok(())
    }

    /// Parses a TOML key-value file; missing keys keep their defaults.
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }
}
