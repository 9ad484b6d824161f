use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::vocab::Vocabulary;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::textprep::TokenDoc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Binary,
    #[default]
    Count,
    Tfidf,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Binary, Scheme::Count, Scheme::Tfidf];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Binary => "binary",
            Scheme::Count => "count",
            Scheme::Tfidf => "tfidf",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown feature scheme `{s}`")))
    }
}

/// How document frequency turns into a term weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdfWeighting {
    /// `ln(N / df)`
    #[default]
    Log,
    /// `1 / df`
    Literal,
}

impl FromStr for IdfWeighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" => Ok(IdfWeighting::Log),
            "literal" => Ok(IdfWeighting::Literal),
            _ => Err(Error::Config(format!("unknown idf weighting `{s}`"))),
        }
    }
}

/// Document frequencies over a training corpus, indexed like the vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdfTable {
    pub n_docs: u64,
    pub df: Vec<u64>,
    pub weighting: IdfWeighting,
}

impl IdfTable {
    pub fn compute(docs: &[TokenDoc], vocab: &Vocabulary, weighting: IdfWeighting) -> Self {
        let mut df = vec![0u64; vocab.len()];
        let mut seen = vec![usize::MAX; vocab.len()];
        for (d, doc) in docs.iter().enumerate() {
            for t in &doc.tokens {
                if let Some(i) = vocab.index_of(t) {
                    if seen[i] != d {
                        seen[i] = d;
                        df[i] += 1;
                    }
                }
            }
        }
        IdfTable {
            n_docs: docs.len() as u64,
            df,
            weighting,
        }
    }

    /// Zero for terms absent from the training corpus.
    pub fn weight<F: Scalar>(&self, i: usize) -> F {
        let df = self.df.get(i).copied().unwrap_or(0);
        if df == 0 {
            return F::zero();
        }
        let df = F::from_u64(df).unwrap();
        match self.weighting {
            IdfWeighting::Log => (F::from_u64(self.n_docs).unwrap() / df).ln(),
            IdfWeighting::Literal => df.recip(),
        }
    }
}

/// Sparse feature vector with strictly increasing indices and nonzero values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SparseVector<F: Scalar> {
    pub scheme: Scheme,
    pub entries: Vec<(usize, F)>,
}

impl<F: Scalar> SparseVector<F> {
    pub fn new(scheme: Scheme, entries: Vec<(usize, F)>) -> Self {
        SparseVector { scheme, entries }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn dot(&self, w: &[F]) -> Result<F> {
        let mut s = F::zero();
        for &(i, v) in &self.entries {
            let wi = w.get(i).ok_or(Error::DimensionMismatch { index: i, dim: w.len() })?;
            s += *wi * v;
        }
        Ok(s)
    }

    /// Highest index + 1, or 0 when empty.
    pub fn min_dim(&self) -> usize {
        self.entries.last().map_or(0, |e| e.0 + 1)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.entries.last() {
            Some(&(i, _)) if i >= dim => Err(Error::DimensionMismatch { index: i, dim }),
            _ => Ok(()),
        }
    }

    /// `idx:val idx:val ...`
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(|(i, v)| format!("{i}:{v}")).collect();
        parts.join(" ")
    }

    pub fn parse(text: &str, scheme: Scheme) -> Result<Self> {
        let mut entries = Vec::new();
        for part in text.split_whitespace() {
            let bad = || Error::schema("vector", format!("bad entry `{part}`"));
            let (i, v) = part.split_once(':').ok_or_else(bad)?;
            let i: usize = i.parse().map_err(|_| bad())?;
            let v: f64 = v.parse().map_err(|_| bad())?;
            if let Some(&(last, _)) = entries.last() {
                if i <= last {
                    return Err(Error::schema("vector", "indices must be strictly increasing"));
                }
            }
            entries.push((i, F::lit(v)));
        }
        Ok(SparseVector { scheme, entries })
    }
}

/// Out-of-vocabulary tokens are ignored; tf-idf entries with zero weight are dropped.
pub fn vectorize<F: Scalar>(
    doc: &TokenDoc,
    vocab: &Vocabulary,
    scheme: Scheme,
    idf: Option<&IdfTable>,
) -> Result<SparseVector<F>> {
    if scheme == Scheme::Tfidf && idf.is_none() {
        return Err(Error::Config("tf-idf features need a document-frequency table".into()));
    }
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for t in &doc.tokens {
        if let Some(i) = vocab.index_of(t) {
            *counts.entry(i).or_default() += 1;
        }
    }
    let entries = counts
        .into_iter()
        .filter_map(|(i, c)| {
            let v = match scheme {
                Scheme::Binary => F::one(),
                Scheme::Count => F::from_u64(c).unwrap(),
                Scheme::Tfidf => F::from_u64(c).unwrap() * idf.expect("checked above").weight::<F>(i),
            };
            (v > F::zero()).then_some((i, v))
        })
        .collect();
    Ok(SparseVector { scheme, entries })
}
