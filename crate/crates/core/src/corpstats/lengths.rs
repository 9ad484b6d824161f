use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ttest::{mean, t_test, variance, TTestKind, TTestResult};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::textprep::TokenDoc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LengthSummary<F: Scalar> {
    /// Token count to number of documents with that count.
    pub histogram: BTreeMap<usize, u64>,
    /// Mean of ln(length) over documents with at least one token.
    pub log_mean: Option<F>,
    /// Sample standard deviation of ln(length); needs two non-empty documents.
    pub log_sd: Option<F>,
}

fn log_lengths<F: Scalar>(docs: &[TokenDoc]) -> Vec<F> {
    docs.iter()
        .filter(|d| !d.is_empty())
        .map(|d| F::from_usize_lossy(d.len()).ln())
        .collect()
}

pub fn length_summary<F: Scalar>(docs: &[TokenDoc]) -> LengthSummary<F> {
    let mut histogram = BTreeMap::new();
    for d in docs {
        *histogram.entry(d.len()).or_insert(0) += 1;
    }
    let logs = log_lengths::<F>(docs);
    let log_mean = (!logs.is_empty()).then(|| mean(&logs));
    let log_sd = (logs.len() >= 2).then(|| variance(&logs, mean(&logs)).sqrt());
    LengthSummary {
        histogram,
        log_mean,
        log_sd,
    }
}

/// Two-sample t-test on per-document ln(token count); empty documents are skipped.
pub fn length_t_test<F: Scalar>(a: &[TokenDoc], b: &[TokenDoc], kind: TTestKind) -> Result<TTestResult<F>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("length t-test needs two non-empty corpora"));
    }
    t_test(&log_lengths::<F>(a), &log_lengths::<F>(b), kind)
}
