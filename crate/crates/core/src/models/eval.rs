use serde::{Deserialize, Serialize};

use super::linear::{train_linear, LinearModel, Regularization, SolverOptions};
use super::nb::NbModel;
use crate::error::{Diagnostics, Error, Result};
use crate::features::{LabeledDataset, SparseVector, Vocabulary};
use crate::ingest::Label;
use crate::scalar::Scalar;

/// Any trained classifier, serialized with a `kind` tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "kind", rename_all = "snake_case")]
pub enum TrainedModel<F: Scalar> {
    NaiveBayes(NbModel<F>),
    Linear(LinearModel<F>),
}

impl<F: Scalar> TrainedModel<F> {
    pub fn predict(&self, x: &SparseVector<F>) -> Result<(Label, F)> {
        match self {
            TrainedModel::NaiveBayes(m) => m.predict(x),
            TrainedModel::Linear(m) => m.predict(x),
        }
    }

    pub fn vocab_hash(&self) -> &str {
        match self {
            TrainedModel::NaiveBayes(m) => &m.vocab_hash,
            TrainedModel::Linear(m) => &m.vocab_hash,
        }
    }
}

impl<F: Scalar> From<NbModel<F>> for TrainedModel<F> {
    fn from(m: NbModel<F>) -> Self {
        TrainedModel::NaiveBayes(m)
    }
}

impl<F: Scalar> From<LinearModel<F>> for TrainedModel<F> {
    fn from(m: LinearModel<F>) -> Self {
        TrainedModel::Linear(m)
    }
}

/// Rows are the true class, columns the prediction; control comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix2 {
    pub counts: [[u64; 2]; 2],
}

impl ConfusionMatrix2 {
    pub fn record(&mut self, truth: Label, predicted: Label) {
        self.counts[truth.index()][predicted.index()] += 1;
    }

    pub fn from_pairs<I: IntoIterator<Item = (Label, Label)>>(pairs: I) -> Self {
        let mut m = ConfusionMatrix2::default();
        for (t, p) in pairs {
            m.record(t, p);
        }
        m
    }

    pub fn row_total(&self, truth: Label) -> u64 {
        self.counts[truth.index()].iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.row_total(Label::Control) + self.row_total(Label::Topic)
    }

    /// Row-normalized rates; a row with no examples is all zeros.
    pub fn rates(&self) -> [[f64; 2]; 2] {
        self.counts.map(|row| {
            let n = row[0] + row[1];
            if n == 0 {
                [0.0, 0.0]
            } else {
                row.map(|c| c as f64 / n as f64)
            }
        })
    }

    /// Fraction of `truth` examples predicted as `truth`, or `None` for an empty row.
    pub fn class_accuracy(&self, truth: Label) -> Option<f64> {
        let n = self.row_total(truth);
        (n > 0).then(|| self.counts[truth.index()][truth.index()] as f64 / n as f64)
    }

    pub fn accuracy(&self) -> Option<f64> {
        let n = self.total();
        (n > 0).then(|| (self.counts[0][0] + self.counts[1][1]) as f64 / n as f64)
    }
}

fn check_vocab<F: Scalar>(model_hash: &str, ds: &LabeledDataset<F>) -> Result<()> {
    let data = ds.vocab.hash();
    if data != model_hash {
        return Err(Error::VocabMismatch {
            model: model_hash.to_string(),
            data,
        });
    }
    Ok(())
}

pub fn evaluate<F: Scalar>(model: &TrainedModel<F>, test: &LabeledDataset<F>) -> Result<ConfusionMatrix2> {
    if test.is_empty() {
        return Err(Error::EmptyInput("evaluation needs a non-empty test set"));
    }
    check_vocab(model.vocab_hash(), test)?;
    let mut m = ConfusionMatrix2::default();
    for (x, &truth) in test.vectors.iter().zip(&test.labels) {
        m.record(truth, model.predict(x)?.0);
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SweepPoint<F: Scalar> {
    pub lambda: F,
    pub nnz: usize,
    pub confusion: ConfusionMatrix2,
    pub diagnostics: Diagnostics,
}

/// One L1 fit per `lambda`, each evaluated on `test`.
pub fn lasso_sweep<F: Scalar>(
    train: &LabeledDataset<F>,
    test: &LabeledDataset<F>,
    lambdas: &[F],
    c: F,
    opts: &SolverOptions<F>,
) -> Result<Vec<(SweepPoint<F>, LinearModel<F>)>> {
    lambdas
        .iter()
        .map(|&lambda| {
            let m = train_linear(train, Regularization::L1 { c, lambda }, opts)?;
            let model = TrainedModel::Linear(m);
            let confusion = evaluate(&model, test)?;
            let TrainedModel::Linear(m) = model else { unreachable!() };
            Ok((
                SweepPoint {
                    lambda,
                    nnz: m.nnz,
                    confusion,
                    diagnostics: m.diagnostics,
                },
                m,
            ))
        })
        .collect()
}

/// The `k` largest-magnitude weights with their terms, sign preserved.
/// Equal magnitudes are ordered by term.
pub fn top_coefficients<F: Scalar>(model: &LinearModel<F>, vocab: &Vocabulary, k: usize) -> Result<Vec<(String, F)>> {
    if vocab.len() != model.weights.len() {
        return Err(Error::VocabMismatch {
            model: format!("{} weights", model.weights.len()),
            data: format!("{} terms", vocab.len()),
        });
    }
    let mut out: Vec<(String, F)> = vocab
        .terms()
        .iter()
        .zip(&model.weights)
        .filter(|(_, w)| **w != F::zero())
        .map(|(t, &w)| (t.clone(), w))
        .collect();
    out.sort_by(|a, b| {
        b.1.abs()
            .partial_cmp(&a.1.abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.0.cmp(&b.0))
    });
    out.truncate(k);
    Ok(out)
}
