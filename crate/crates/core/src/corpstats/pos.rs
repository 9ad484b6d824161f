use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::ttest::{mean, t_test, variance, TTestKind, TTestResult};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tags of the ARK Twitter part-of-speech tagger.
pub const ARK_TAGS: &[&str] = &[
    "N", "O", "^", "S", "Z", "V", "L", "M", "A", "R", "!", "D", "P", "&", "T", "X", "Y", "#", "@", "~", "U",
    "E", "$", ",", "G",
];

/// Noun tag in [`ARK_TAGS`].
pub const ARK_NOUN: &str = "N";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tagset {
    pub name: String,
    pub tags: BTreeSet<String>,
}

impl Tagset {
    pub fn new<I, S>(name: impl Into<String>, tags: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tags: BTreeSet<String> = tags.into_iter().map(Into::into).collect();
        if tags.is_empty() {
            return Err(Error::schema("tagset", "no tags declared"));
        }
        if let Some(t) = tags.iter().find(|t| t.is_empty() || t.chars().any(char::is_whitespace)) {
            return Err(Error::schema("tagset", format!("invalid tag {t:?}")));
        }
        Ok(Tagset { name: name.into(), tags })
    }

    pub fn ark() -> Self {
        Self::new("ark", ARK_TAGS.iter().copied()).expect("static tagset")
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.tags.contains(tag)
    }

    fn check(&self, tag: &str) -> Result<()> {
        if self.contains(tag) {
            Ok(())
        } else {
            Err(Error::schema("tag", format!("{tag:?} is not in tagset {}", self.name)))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosAnnotatedDoc {
    pub tweet_id: String,
    /// (token, tag) pairs in text order.
    pub tagged: Vec<(String, String)>,
}

impl PosAnnotatedDoc {
    pub fn len(&self) -> usize {
        self.tagged.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tagged.is_empty()
    }

    pub fn tag_count(&self, tag: &str) -> usize {
        self.tagged.iter().filter(|(_, t)| t == tag).count()
    }
}

/// Tagged documents that all use one tagset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosCorpus {
    pub tagset: Tagset,
    pub docs: Vec<PosAnnotatedDoc>,
}

impl PosCorpus {
    pub fn new(tagset: Tagset, docs: Vec<PosAnnotatedDoc>) -> Result<Self> {
        for d in &docs {
            for (_, tag) in &d.tagged {
                tagset.check(tag)?;
            }
        }
        Ok(PosCorpus { tagset, docs })
    }

    /// Reads `tweet_id<TAB>token<TAB>tag` lines with a blank line between tweets.
    pub fn read<R: BufRead>(reader: R, tagset: Tagset) -> Result<Self> {
        let mut docs: Vec<PosAnnotatedDoc> = Vec::new();
        let mut current: Option<PosAnnotatedDoc> = None;
        let mut offset = 0usize;
        for line in reader.lines() {
            let line = line.map_err(|e| Error::Parse {
                offset,
                message: e.to_string(),
            })?;
            let start = offset;
            offset += line.len() + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                docs.extend(current.take());
                continue;
            }
            let mut parts = line.split('\t');
            let (Some(id), Some(token), Some(tag), None) = (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(Error::Parse {
                    offset: start,
                    message: "expected tweet_id<TAB>token<TAB>tag".into(),
                });
            };
            tagset.check(tag).map_err(|e| Error::Parse {
                offset: start,
                message: e.to_string(),
            })?;
            match &mut current {
                Some(doc) if doc.tweet_id == id => doc.tagged.push((token.to_string(), tag.to_string())),
                _ => {
                    docs.extend(current.take());
                    current = Some(PosAnnotatedDoc {
                        tweet_id: id.to_string(),
                        tagged: vec![(token.to_string(), tag.to_string())],
                    });
                }
            }
        }
        docs.extend(current);
        Ok(PosCorpus { tagset, docs })
    }
}

/// Per-document share of tokens carrying `tag`; empty documents are skipped.
pub fn pos_proportions<F: Scalar>(corpus: &PosCorpus, tag: &str) -> Result<Vec<F>> {
    corpus.tagset.check(tag)?;
    Ok(corpus
        .docs
        .iter()
        .filter(|d| !d.is_empty())
        .map(|d| F::from_usize_lossy(d.tag_count(tag)) / F::from_usize_lossy(d.len()))
        .collect())
}

pub fn pos_t_test<F: Scalar>(a: &PosCorpus, b: &PosCorpus, tag: &str, kind: TTestKind) -> Result<TTestResult<F>> {
    if a.tagset != b.tagset {
        return Err(Error::schema(
            "tagset",
            format!("groups use different tagsets ({} vs {})", a.tagset.name, b.tagset.name),
        ));
    }
    t_test(&pos_proportions::<F>(a, tag)?, &pos_proportions::<F>(b, tag)?, kind)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LengthBin<F: Scalar> {
    pub length: usize,
    pub n: usize,
    pub mean: F,
    /// Sample standard deviation; zero when `n == 1`.
    pub sd: F,
    /// `sd / sqrt(n)`.
    pub se: F,
}

/// Mean tag proportion grouped by document length.
pub fn pos_length_profile<F: Scalar>(corpus: &PosCorpus, tag: &str) -> Result<Vec<LengthBin<F>>> {
    corpus.tagset.check(tag)?;
    let mut bins: BTreeMap<usize, Vec<F>> = BTreeMap::new();
    for d in corpus.docs.iter().filter(|d| !d.is_empty()) {
        let p = F::from_usize_lossy(d.tag_count(tag)) / F::from_usize_lossy(d.len());
        bins.entry(d.len()).or_default().push(p);
    }
    Ok(bins
        .into_iter()
        .map(|(length, xs)| {
            let m = mean(&xs);
            let sd = if xs.len() > 1 { variance(&xs, m).sqrt() } else { F::zero() };
            let n = xs.len();
            LengthBin {
                length,
                n,
                mean: m,
                sd,
                se: sd / F::from_usize_lossy(n).sqrt(),
            }
        })
        .collect())
}
