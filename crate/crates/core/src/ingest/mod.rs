//! Tweet records, keyword bootstrapping and corpus metadata counts.
//!
//! Records arrive as newline-delimited JSON. A [`KeywordSet`] splits them
//! into a topic corpus (any token starts with a keyword) and a control corpus
//! (everything else).

mod keywords;
mod record;
mod source;
mod stats;

pub use keywords::{matches_keywords, KeywordSet};
pub use record::{parse_record, Geo, ReadOptions, RecordReader, TweetRecord};
pub use source::open_source;
pub use stats::{corpus_stats, CorpusStats};

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which side of the keyword split a corpus (or an example) belongs to.
///
/// The numeric convention follows the classifiers: topic is `+1`, control `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Control,
    Topic,
}

impl Label {
    pub fn sign(self) -> i8 {
        match self {
            Label::Topic => 1,
            Label::Control => -1,
        }
    }

    pub fn from_sign(s: i8) -> Option<Label> {
        match s {
            1 => Some(Label::Topic),
            -1 => Some(Label::Control),
            _ => None,
        }
    }

    /// Row/column position in a confusion matrix: control first.
    pub fn index(self) -> usize {
        match self {
            Label::Control => 0,
            Label::Topic => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Control => "control",
            Label::Topic => "topic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledCorpus {
    pub records: Vec<TweetRecord>,
    pub label: Label,
    pub provenance: String,
}

impl LabeledCorpus {
    /// Builds a corpus, rejecting duplicate record ids.
    pub fn new(records: Vec<TweetRecord>, label: Label, provenance: impl Into<String>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(records.len());
        for r in &records {
            if !seen.insert(r.id.as_str()) {
                return Err(Error::DuplicateId(r.id.clone()));
            }
        }
        Ok(LabeledCorpus {
            records,
            label,
            provenance: provenance.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Partitions `records` into (topic, control) by [`matches_keywords`].
///
/// Input order is preserved inside each corpus. A repeated id anywhere in the
/// stream is rejected.
pub fn split_corpus<I>(records: I, ks: &KeywordSet) -> Result<(LabeledCorpus, LabeledCorpus)>
where
    I: IntoIterator<Item = TweetRecord>,
{
    let mut seen = HashSet::new();
    let mut topic = Vec::new();
    let mut control = Vec::new();
    for rec in records {
        if !seen.insert(rec.id.clone()) {
            return Err(Error::DuplicateId(rec.id));
        }
        if ks.matches_text(&rec.text) {
            topic.push(rec);
        } else {
            control.push(rec);
        }
    }
    let provenance = format!("keyword split on {{{}}}", ks.keywords().join(","));
    Ok((
        LabeledCorpus {
            records: topic,
            label: Label::Topic,
            provenance: provenance.clone(),
        },
        LabeledCorpus {
            records: control,
            label: Label::Control,
            provenance,
        },
    ))
}
