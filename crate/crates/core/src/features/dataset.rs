use std::sync::Arc;

use super::vector::{vectorize, IdfTable, IdfWeighting, Scheme, SparseVector};
use super::vocab::Vocabulary;
use crate::error::{Error, Result};
use crate::ingest::Label;
use crate::scalar::Scalar;
use crate::textprep::TokenDoc;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset<F: Scalar> {
    pub vectors: Vec<SparseVector<F>>,
    pub labels: Vec<Label>,
    pub vocab: Arc<Vocabulary>,
    pub scheme: Scheme,
    /// Document frequencies the vectors were weighted with; `None` after parsing from text.
    pub idf: Option<IdfTable>,
}

impl<F: Scalar> LabeledDataset<F> {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vocab.len()
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let mut c = [0, 0];
        for l in &self.labels {
            c[l.index()] += 1;
        }
        c
    }

    /// One `label idx:val ...` line per vector, label as `+1` or `-1`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (x, l) in self.vectors.iter().zip(&self.labels) {
            s.push_str(if l.sign() > 0 { "+1" } else { "-1" });
            if !x.entries.is_empty() {
                s.push(' ');
                s.push_str(&x.to_text());
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str, vocab: Arc<Vocabulary>, scheme: Scheme) -> Result<Self> {
        let mut vectors = Vec::new();
        let mut labels = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (label, rest) = line.trim().split_once(' ').unwrap_or((line.trim(), ""));
            let label = match label {
                "+1" | "1" => Label::Topic,
                "-1" => Label::Control,
                other => return Err(Error::schema("label", format!("expected +1 or -1, got `{other}`"))),
            };
            let x = SparseVector::parse(rest, scheme)?;
            x.check_dim(vocab.len())?;
            vectors.push(x);
            labels.push(label);
        }
        Ok(LabeledDataset {
            vectors,
            labels,
            vocab,
            scheme,
            idf: None,
        })
    }
}

/// Training-side featurization: document frequencies come from `docs`.
pub fn featurize_corpus<F: Scalar>(
    docs: &[TokenDoc],
    labels: &[Label],
    vocab: Arc<Vocabulary>,
    scheme: Scheme,
    weighting: IdfWeighting,
) -> Result<LabeledDataset<F>> {
    let idf = IdfTable::compute(docs, &vocab, weighting);
    featurize_with_idf(docs, labels, vocab, scheme, idf)
}

/// Test-side featurization reusing a training `idf`.
pub fn featurize_with_idf<F: Scalar>(
    docs: &[TokenDoc],
    labels: &[Label],
    vocab: Arc<Vocabulary>,
    scheme: Scheme,
    idf: IdfTable,
) -> Result<LabeledDataset<F>> {
    if docs.len() != labels.len() {
        return Err(Error::schema(
            "labels",
            format!("{} documents but {} labels", docs.len(), labels.len()),
        ));
    }
    if idf.df.len() != vocab.len() {
        return Err(Error::schema("idf", "table size differs from vocabulary size"));
    }
    let vectors = docs
        .iter()
        .map(|d| vectorize(d, &vocab, scheme, Some(&idf)))
        .collect::<Result<_>>()?;
    Ok(LabeledDataset {
        vectors,
        labels: labels.to_vec(),
        vocab,
        scheme,
        idf: Some(idf),
    })
}
