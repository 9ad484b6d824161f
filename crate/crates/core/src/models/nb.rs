use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{LabeledDataset, SparseVector};
use crate::ingest::Label;
use crate::scalar::{log_add_exp, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventModel {
    /// Term counts (vector values) are draws from a per-class term distribution.
    #[default]
    Multinomial,
    /// Each vocabulary term is independently present or absent.
    Bernoulli,
}

impl fmt::Display for EventModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventModel::Multinomial => "multinomial",
            EventModel::Bernoulli => "bernoulli",
        })
    }
}

impl FromStr for EventModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multinomial" => Ok(EventModel::Multinomial),
            "bernoulli" => Ok(EventModel::Bernoulli),
            _ => Err(Error::Config(format!("unknown naive Bayes event model `{s}`"))),
        }
    }
}

/// Naive Bayes over a fixed vocabulary. Class index 0 is control, 1 is topic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct NbModel<F: Scalar> {
    pub log_prior: [F; 2],
    /// `ln Pr(term | class)`; for the Bernoulli model, the presence probability.
    pub log_likelihood: [Vec<F>; 2],
    pub alpha: F,
    pub event_model: EventModel,
    pub vocab_hash: String,
}

pub fn train_nb<F: Scalar>(ds: &LabeledDataset<F>, alpha: F) -> Result<NbModel<F>> {
    train_nb_with(ds, alpha, EventModel::Multinomial)
}

pub fn train_nb_with<F: Scalar>(ds: &LabeledDataset<F>, alpha: F, event_model: EventModel) -> Result<NbModel<F>> {
    if !alpha.is_finite() || alpha <= F::zero() {
        return Err(Error::Config(format!("smoothing alpha must be positive, got {alpha}")));
    }
    if ds.labels.len() != ds.vectors.len() {
        return Err(Error::schema("labels", "vector and label counts differ"));
    }
    let n_class = ds.class_counts();
    if n_class[0] == 0 || n_class[1] == 0 {
        return Err(Error::DegenerateTraining("naive Bayes needs both classes"));
    }
    let dim = ds.dim();
    let mut mass = [vec![F::zero(); dim], vec![F::zero(); dim]];
    for (x, l) in ds.vectors.iter().zip(&ds.labels) {
        x.check_dim(dim)?;
        let row = &mut mass[l.index()];
        for &(i, v) in &x.entries {
            row[i] += match event_model {
                EventModel::Multinomial => v,
                EventModel::Bernoulli => F::one(),
            };
        }
    }
    let n = F::from_usize_lossy(ds.len());
    let log_prior = [0, 1].map(|c| (F::from_usize_lossy(n_class[c]) / n).ln());
    let v = F::from_usize_lossy(dim);
    let log_likelihood = [0, 1].map(|c| {
        let denom = match event_model {
            EventModel::Multinomial => mass[c].iter().copied().sum::<F>() + alpha * v,
            EventModel::Bernoulli => F::from_usize_lossy(n_class[c]) + alpha + alpha,
        };
        let ln_denom = denom.ln();
        mass[c].iter().map(|&m| (m + alpha).ln() - ln_denom).collect()
    });
    Ok(NbModel {
        log_prior,
        log_likelihood,
        alpha,
        event_model,
        vocab_hash: ds.vocab.hash(),
    })
}

impl<F: Scalar> NbModel<F> {
    pub fn dim(&self) -> usize {
        self.log_likelihood[0].len()
    }

    /// `ln Pr(y) + ln Pr(x | y)` up to a class-independent constant.
    pub fn joint_log_scores(&self, x: &SparseVector<F>) -> Result<[F; 2]> {
        x.check_dim(self.dim())?;
        let mut out = self.log_prior;
        for (c, score) in out.iter_mut().enumerate() {
            let ll = &self.log_likelihood[c];
            match self.event_model {
                EventModel::Multinomial => {
                    for &(i, v) in &x.entries {
                        *score += v * ll[i];
                    }
                }
                EventModel::Bernoulli => {
                    let ln_absent = |l: F| (-l.exp()).ln_1p();
                    *score += ll.iter().map(|&l| ln_absent(l)).sum::<F>();
                    for &(i, _) in &x.entries {
                        *score += ll[i] - ln_absent(ll[i]);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[Pr(control | x), Pr(topic | x)]`.
    pub fn posterior(&self, x: &SparseVector<F>) -> Result<[F; 2]> {
        let s = self.joint_log_scores(x)?;
        let z = log_add_exp(s[0], s[1]);
        Ok([(s[0] - z).exp(), (s[1] - z).exp()])
    }

    /// Label and log-odds of topic over control; a zero score predicts control.
    pub fn predict(&self, x: &SparseVector<F>) -> Result<(Label, F)> {
        let s = self.joint_log_scores(x)?;
        let score = s[1] - s[0];
        Ok((if score > F::zero() { Label::Topic } else { Label::Control }, score))
    }
}
