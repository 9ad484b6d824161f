use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{KeywordSet, TweetRecord};
use crate::textprep::{KeywordFilter, TokenDoc};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub term: String,
    pub count: u64,
    /// 1-based.
    pub rank: usize,
}

/// Terms ordered by descending count; equal counts ordered by term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankFrequencyTable {
    pub entries: Vec<RankEntry>,
}

pub(crate) fn count_terms<'a, I>(tokens: I) -> HashMap<String, u64>
where
    I: IntoIterator<Item = &'a String>,
{
    let mut counts: HashMap<String, u64> = HashMap::new();
    for t in tokens {
        if let Some(c) = counts.get_mut(t.as_str()) {
            *c += 1;
        } else {
            counts.insert(t.clone(), 1);
        }
    }
    counts
}

/// Sorts by count descending then term ascending.
pub(crate) fn sorted_counts(counts: HashMap<String, u64>) -> Vec<(String, u64)> {
    let mut v: Vec<(String, u64)> = counts.into_iter().filter(|(_, c)| *c > 0).collect();
    v.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v
}

impl RankFrequencyTable {
    pub fn from_docs(docs: &[TokenDoc]) -> Result<Self> {
        let counts = count_terms(docs.iter().flat_map(|d| d.tokens.iter()));
        if counts.is_empty() {
            return Err(Error::EmptyInput("rank-frequency table needs at least one token"));
        }
        Ok(Self::from_counts(counts))
    }

    /// Zero counts are dropped.
    pub fn from_counts<I: IntoIterator<Item = (String, u64)>>(counts: I) -> Self {
        let mut merged: HashMap<String, u64> = HashMap::new();
        for (t, c) in counts {
            *merged.entry(t).or_default() += c;
        }
        let entries = sorted_counts(merged)
            .into_iter()
            .enumerate()
            .map(|(i, (term, count))| RankEntry {
                term,
                count,
                rank: i + 1,
            })
            .collect();
        RankFrequencyTable { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum()
    }
}

/// The `top_k` most frequent terms, skipping keyword matches.
pub fn term_table(docs: &[TokenDoc], top_k: usize, exclude: &KeywordFilter) -> Vec<(String, u64)> {
    let counts = count_terms(
        docs.iter()
            .flat_map(|d| d.tokens.iter())
            .filter(|t| !exclude.matches(t)),
    );
    let mut v = sorted_counts(counts);
    v.truncate(top_k);
    v
}

/// Hashtag occurrence counts, skipping tags prefixed by a keyword.
pub fn hashtag_table(records: &[TweetRecord], top_k: usize, exclude: &KeywordSet) -> Vec<(String, u64)> {
    let counts = count_terms(
        records
            .iter()
            .flat_map(|r| r.hashtags.iter())
            .filter(|h| !exclude.matches_token(h)),
    );
    let mut v = sorted_counts(counts);
    v.truncate(top_k);
    v
}
