use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::config::{ClassifierKind, ExperimentConfig};
use super::pipeline::{CorpusPair, ExpDoc, FittedPipeline};
use super::split::split_train_test;
use crate::error::{Error, Result};
use crate::features::Scheme;
use crate::ingest::{KeywordSet, Label};
use crate::models::{lasso_sweep, top_coefficients, ConfusionMatrix2, SolverOptions, SweepPoint};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasicCell {
    pub classifier: ClassifierKind,
    pub scheme: Scheme,
    pub confusion: ConfusionMatrix2,
}

/// Naive Bayes and L2 logistic regression under each of the three representations.
pub fn run_basic_classification<F: Scalar>(pair: &CorpusPair, cfg: &ExperimentConfig) -> Result<Vec<BasicCell>> {
    cfg.validate()?;
    let (train, test) = split_train_test(pair, cfg.split_fraction, cfg.seed, cfg.split_mode)?;
    let mut cells = Vec::new();
    for classifier in [ClassifierKind::NaiveBayes, ClassifierKind::Logreg] {
        for scheme in Scheme::ALL {
            let cfg = ExperimentConfig {
                classifier,
                scheme,
                ..cfg.clone()
            };
            let fitted = FittedPipeline::<F>::fit(&train, &cfg.keywords, &cfg)?;
            cells.push(BasicCell {
                classifier,
                scheme,
                confusion: fitted.evaluate(&test.topic, &test.control)?,
            });
        }
    }
    Ok(cells)
}

/// Topic corpus against a second condition's corpus used as control.
/// Both keyword sets are stripped before featurization.
pub fn run_condition_experiment<F: Scalar>(
    topic: &[ExpDoc],
    other: &[ExpDoc],
    other_keywords: &KeywordSet,
    cfg: &ExperimentConfig,
) -> Result<ConfusionMatrix2> {
    cfg.validate()?;
    let mut all: Vec<String> = cfg.keywords.keywords().to_vec();
    all.extend(other_keywords.keywords().iter().cloned());
    let strip = KeywordSet::new(all)?;
    let pair = CorpusPair {
        topic: topic.to_vec(),
        control: other.to_vec(),
    };
    let (train, test) = split_train_test(&pair, cfg.split_fraction, cfg.seed, cfg.split_mode)?;
    FittedPipeline::<F>::fit(&train, &strip, cfg)?.evaluate(&test.topic, &test.control)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LokoRow {
    pub keyword: String,
    pub n_train_topic: usize,
    pub n_heldout: usize,
    pub acc_control_test: f64,
    pub acc_topic_test: f64,
    /// `None` when no tweet matches this keyword alone.
    pub acc_heldout_keyword: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LokoReport {
    pub baseline_control: f64,
    pub baseline_topic: f64,
    pub rows: Vec<LokoRow>,
}

fn accuracy(m: &ConfusionMatrix2, l: Label) -> Result<f64> {
    m.class_accuracy(l)
        .ok_or(Error::EmptyInput("evaluation split has no examples of one class"))
}

/// Leave-one-keyword-out: for each keyword `k`, train on training topic
/// tweets matched by another keyword (plus all training control tweets), then
/// score the test split and every topic tweet matched by `k` alone.
pub fn run_loko<F: Scalar>(pair: &CorpusPair, cfg: &ExperimentConfig) -> Result<LokoReport> {
    cfg.validate()?;
    let ks = &cfg.keywords;
    if ks.len() < 2 {
        return Err(Error::Config("leave-one-keyword-out needs at least two keywords".into()));
    }
    if let Some(d) = pair.topic.iter().chain(&pair.control).find(|d| d.hits.len() != ks.len()) {
        return Err(Error::schema("hits", format!("document {} has hits for a different keyword set", d.id)));
    }
    let (train, test) = split_train_test(pair, cfg.split_fraction, cfg.seed, cfg.split_mode)?;
    let base = FittedPipeline::<F>::fit(&train, ks, cfg)?.evaluate(&test.topic, &test.control)?;
    let mut rows = Vec::with_capacity(ks.len());
    for (k, keyword) in ks.keywords().iter().enumerate() {
        let sub = CorpusPair {
            topic: train
                .topic
                .iter()
                .filter(|d| d.hits.iter().enumerate().any(|(i, h)| *h && i != k))
                .cloned()
                .collect(),
            control: train.control.clone(),
        };
        let heldout: Vec<ExpDoc> = pair.topic.iter().filter(|d| d.only_hit(k)).cloned().collect();
        let used: HashSet<&str> = sub.topic.iter().chain(&sub.control).map(|d| d.id.as_str()).collect();
        if let Some(d) = heldout.iter().find(|d| used.contains(d.id.as_str())) {
            return Err(Error::Invariant(format!("held-out tweet {} was used for training", d.id)));
        }
        if sub.topic.is_empty() {
            return Err(Error::DegenerateTraining("no training topic tweets once a keyword is left out"));
        }
        let fitted = FittedPipeline::<F>::fit(&sub, ks, cfg)?;
        let m = fitted.evaluate(&test.topic, &test.control)?;
        let acc_heldout_keyword = if heldout.is_empty() {
            None
        } else {
            Some(accuracy(&fitted.evaluate(&heldout, &[])?, Label::Topic)?)
        };
        rows.push(LokoRow {
            keyword: keyword.clone(),
            n_train_topic: sub.topic.len(),
            n_heldout: heldout.len(),
            acc_control_test: accuracy(&m, Label::Control)?,
            acc_topic_test: accuracy(&m, Label::Topic)?,
            acc_heldout_keyword,
        });
    }
    Ok(LokoReport {
        baseline_control: accuracy(&base, Label::Control)?,
        baseline_topic: accuracy(&base, Label::Topic)?,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SweepResult<F: Scalar> {
    pub points: Vec<SweepPoint<F>>,
    /// Largest-magnitude weights per lambda, in grid order.
    pub top_terms: Vec<Vec<(String, F)>>,
}

/// L1 fits over `cfg.lambdas` on one split, with the top `top_k` terms of each.
pub fn run_lasso_sweep<F: Scalar>(pair: &CorpusPair, cfg: &ExperimentConfig, top_k: usize) -> Result<SweepResult<F>> {
    cfg.validate()?;
    let (train, test) = split_train_test(pair, cfg.split_fraction, cfg.seed, cfg.split_mode)?;
    // The NB fit is discarded; it only carries the shared vocabulary and idf.
    let nb_cfg = ExperimentConfig {
        classifier: ClassifierKind::NaiveBayes,
        ..cfg.clone()
    };
    let base = FittedPipeline::<F>::fit(&train, &cfg.keywords, &nb_cfg)?;
    let test_ds = base.dataset(&test.topic, &test.control)?;
    let opts = SolverOptions {
        tol: F::lit(cfg.tol),
        max_passes: cfg.max_passes,
        fit_bias: cfg.fit_bias,
    };
    let lambdas: Vec<F> = cfg.lambdas.iter().map(|&l| F::lit(l)).collect();
    let fits = lasso_sweep(&base.train, &test_ds, &lambdas, F::lit(cfg.c), &opts)?;
    let mut points = Vec::new();
    let mut top_terms = Vec::new();
    for (p, m) in fits {
        top_terms.push(top_coefficients(&m, &base.vocab, top_k)?);
        points.push(p);
    }
    Ok(SweepResult { points, top_terms })
}
