use std::sync::Arc;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::config::{ClassifierKind, ExperimentConfig};
use crate::error::{Error, Result};
use crate::features::{build_vocabulary, featurize_corpus, featurize_with_idf, IdfTable, LabeledDataset, Vocabulary};
use crate::ingest::{KeywordSet, Label, TweetRecord};
use crate::models::{
    evaluate, train_linear, train_nb_with, ConfusionMatrix2, Regularization, SolverOptions, TrainedModel,
};
use crate::scalar::Scalar;
use crate::textprep::{preprocess, KeywordFilter, PipelineConfig, TokenDoc};

/// A preprocessed tweet plus which bootstrap keywords it contained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpDoc {
    pub id: String,
    /// Preprocessed tokens, keywords not yet removed.
    pub tokens: Vec<String>,
    pub created_at: Option<DateTime<Utc>>,
    /// `hits[i]` is true when keyword `i` of the experiment's set matched.
    pub hits: Vec<bool>,
}

impl ExpDoc {
    pub fn from_record(rec: &TweetRecord, cfg: &PipelineConfig, ks: &KeywordSet) -> Self {
        ExpDoc {
            id: rec.id.clone(),
            tokens: preprocess(rec, cfg).tokens,
            created_at: rec.created_at,
            hits: ks.matched_in_text(&rec.text),
        }
    }

    /// Keyword hits recovered from tokens when the raw text is gone.
    pub fn from_tokens(doc: TokenDoc, ks: &KeywordSet) -> Self {
        let filter = KeywordFilter::new(ks);
        let mut hits = vec![false; ks.len()];
        for t in &doc.tokens {
            if let Some(i) = filter.match_index(t) {
                hits[i] = true;
            }
        }
        ExpDoc {
            id: doc.tweet_id,
            tokens: doc.tokens,
            created_at: None,
            hits,
        }
    }

    /// True when keyword `k` matched and no other did.
    pub fn only_hit(&self, k: usize) -> bool {
        self.hits.get(k).copied().unwrap_or(false) && self.hits.iter().filter(|h| **h).count() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CorpusPair {
    pub topic: Vec<ExpDoc>,
    pub control: Vec<ExpDoc>,
}

impl CorpusPair {
    pub fn from_records(topic: &[TweetRecord], control: &[TweetRecord], cfg: &PipelineConfig, ks: &KeywordSet) -> Self {
        CorpusPair {
            topic: topic.iter().map(|r| ExpDoc::from_record(r, cfg, ks)).collect(),
            control: control.iter().map(|r| ExpDoc::from_record(r, cfg, ks)).collect(),
        }
    }
}

/// Drops every token matching a keyword; other tokens keep their order.
pub fn strip_keywords(doc: &TokenDoc, filter: &KeywordFilter) -> TokenDoc {
    TokenDoc::new(
        doc.tweet_id.clone(),
        doc.tokens.iter().filter(|t| !filter.matches(t)).cloned().collect(),
    )
}

fn stripped(docs: &[ExpDoc], filter: &KeywordFilter) -> Vec<TokenDoc> {
    docs.iter()
        .map(|d| TokenDoc::new(d.id.clone(), d.tokens.iter().filter(|t| !filter.matches(t)).cloned().collect()))
        .collect()
}

fn labelled(topic: &[ExpDoc], control: &[ExpDoc], filter: &KeywordFilter) -> (Vec<TokenDoc>, Vec<Label>) {
    let mut docs = stripped(topic, filter);
    docs.extend(stripped(control, filter));
    let mut labels = vec![Label::Topic; topic.len()];
    labels.extend(vec![Label::Control; control.len()]);
    (docs, labels)
}

pub fn train_classifier<F: Scalar>(ds: &LabeledDataset<F>, cfg: &ExperimentConfig) -> Result<TrainedModel<F>> {
    let opts = SolverOptions {
        tol: F::lit(cfg.tol),
        max_passes: cfg.max_passes,
        fit_bias: cfg.fit_bias,
    };
    let c = F::lit(cfg.c);
    Ok(match cfg.classifier {
        ClassifierKind::NaiveBayes => train_nb_with(ds, F::lit(cfg.nb_alpha), cfg.nb_event_model)?.into(),
        ClassifierKind::Logreg => train_linear(ds, Regularization::L2 { c }, &opts)?.into(),
        ClassifierKind::Lasso => train_linear(
            ds,
            Regularization::L1 {
                c,
                lambda: F::lit(cfg.lambda),
            },
            &opts,
        )?
        .into(),
    })
}

/// Vocabulary, training document frequencies and model from one training pair.
#[derive(Debug, Clone)]
pub struct FittedPipeline<F: Scalar> {
    pub vocab: Arc<Vocabulary>,
    pub idf: IdfTable,
    pub model: TrainedModel<F>,
    pub train: LabeledDataset<F>,
    filter: KeywordFilter,
}

impl<F: Scalar> FittedPipeline<F> {
    /// Strips `strip`, builds the vocabulary on the training pair, featurizes and trains.
    pub fn fit(train: &CorpusPair, strip: &KeywordSet, cfg: &ExperimentConfig) -> Result<Self> {
        let filter = KeywordFilter::new(strip);
        let topic = stripped(&train.topic, &filter);
        let control = stripped(&train.control, &filter);
        let vocab = Arc::new(build_vocabulary(&topic, &control, cfg.vocab_policy, cfg.vocab_size, strip)?);
        if let Some(t) = vocab.terms().iter().find(|t| filter.matches(t)) {
            return Err(Error::Invariant(format!("keyword-matching term `{t}` in vocabulary")));
        }
        let (docs, labels) = labelled(&train.topic, &train.control, &filter);
        let ds = featurize_corpus(&docs, &labels, vocab.clone(), cfg.scheme, cfg.idf_weighting)?;
        let model = train_classifier(&ds, cfg)?;
        Ok(FittedPipeline {
            idf: ds.idf.clone().expect("featurize_corpus sets idf"),
            vocab,
            model,
            train: ds,
            filter,
        })
    }

    /// Featurizes with the training vocabulary and document frequencies.
    pub fn dataset(&self, topic: &[ExpDoc], control: &[ExpDoc]) -> Result<LabeledDataset<F>> {
        let (docs, labels) = labelled(topic, control, &self.filter);
        featurize_with_idf(&docs, &labels, self.vocab.clone(), self.train.scheme, self.idf.clone())
    }

    pub fn evaluate(&self, topic: &[ExpDoc], control: &[ExpDoc]) -> Result<ConfusionMatrix2> {
        evaluate(&self.model, &self.dataset(topic, control)?)
    }
}
