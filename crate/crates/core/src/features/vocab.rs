use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpstats::{count_terms, sorted_counts, DiscriminativenessTable};
use crate::error::{Error, Result};
use crate::ingest::KeywordSet;
use crate::textprep::{KeywordFilter, TokenDoc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VocabPolicy {
    #[default]
    FreqOverall,
    FreqTopic,
    FreqControl,
    DiscTopic,
    DiscControl,
    Union,
    Intersection,
}

impl VocabPolicy {
    pub const ALL: [VocabPolicy; 7] = [
        VocabPolicy::FreqOverall,
        VocabPolicy::FreqTopic,
        VocabPolicy::FreqControl,
        VocabPolicy::DiscTopic,
        VocabPolicy::DiscControl,
        VocabPolicy::Union,
        VocabPolicy::Intersection,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VocabPolicy::FreqOverall => "freq_overall",
            VocabPolicy::FreqTopic => "freq_topic",
            VocabPolicy::FreqControl => "freq_control",
            VocabPolicy::DiscTopic => "disc_topic",
            VocabPolicy::DiscControl => "disc_control",
            VocabPolicy::Union => "union",
            VocabPolicy::Intersection => "intersection",
        }
    }
}

impl fmt::Display for VocabPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VocabPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VocabPolicy::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown vocabulary policy `{s}`")))
    }
}

/// Ordered feature terms; position in `terms` is the feature index.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "VocabularyRepr", into = "VocabularyRepr")]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    policy: VocabPolicy,
    excluded: KeywordSet,
    truncated: bool,
}

#[derive(Serialize, Deserialize)]
struct VocabularyRepr {
    terms: Vec<String>,
    policy: VocabPolicy,
    excluded: KeywordSet,
    truncated: bool,
}

impl TryFrom<VocabularyRepr> for Vocabulary {
    type Error = Error;

    fn try_from(r: VocabularyRepr) -> Result<Self> {
        let mut v = Vocabulary::from_terms(r.terms, r.policy, r.excluded)?;
        v.truncated = r.truncated;
        Ok(v)
    }
}

impl From<Vocabulary> for VocabularyRepr {
    fn from(v: Vocabulary) -> Self {
        VocabularyRepr {
            terms: v.terms,
            policy: v.policy,
            excluded: v.excluded,
            truncated: v.truncated,
        }
    }
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.policy == other.policy && self.excluded == other.excluded
    }
}

impl Vocabulary {
    /// Rejects duplicates, empty terms and terms matching `excluded`.
    pub fn from_terms(terms: Vec<String>, policy: VocabPolicy, excluded: KeywordSet) -> Result<Self> {
        let filter = KeywordFilter::new(&excluded);
        let mut index = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if t.is_empty() || t.chars().any(char::is_whitespace) {
                return Err(Error::schema("vocabulary", format!("invalid term {t:?}")));
            }
            if filter.matches(t) {
                return Err(Error::schema("vocabulary", format!("term `{t}` matches an excluded keyword")));
            }
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::schema("vocabulary", format!("duplicate term `{t}`")));
            }
        }
        Ok(Vocabulary {
            terms,
            index,
            policy,
            excluded,
            truncated: false,
        })
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, i: usize) -> Option<&str> {
        self.terms.get(i).map(String::as_str)
    }

    pub fn policy(&self) -> VocabPolicy {
        self.policy
    }

    pub fn excluded(&self) -> &KeywordSet {
        &self.excluded
    }

    /// True when fewer terms were available than requested.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// One term per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for t in &self.terms {
            s.push_str(t);
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str, policy: VocabPolicy, excluded: KeywordSet) -> Result<Self> {
        let terms = text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect();
        Self::from_terms(terms, policy, excluded)
    }

    /// Hex SHA-256 of the ordered term list.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

/// Term counts with excluded terms removed.
fn filtered_counts(docs: &[TokenDoc], filter: &KeywordFilter) -> HashMap<String, u64> {
    count_terms(docs.iter().flat_map(|d| d.tokens.iter()).filter(|t| !filter.matches(t)))
}

fn top(counts: &HashMap<String, u64>, k: usize) -> Vec<String> {
    sorted_counts(counts.clone()).into_iter().take(k).map(|(t, _)| t).collect()
}

/// Re-ranks `terms` by combined count, descending, then term.
fn rerank(mut terms: Vec<String>, combined: &HashMap<String, u64>) -> Vec<String> {
    terms.sort_by(|a, b| {
        let (ca, cb) = (combined.get(a).unwrap_or(&0), combined.get(b).unwrap_or(&0));
        cb.cmp(ca).then_with(|| a.cmp(b))
    });
    terms
}

/// Builds a vocabulary of at most `size` terms after removing every token
/// that matches `excluded`.
///
/// * `union`: the top ⌈size/2⌉ topic terms and top ⌊size/2⌋ control terms,
///   topped up from the overall frequency list when they overlap.
/// * `intersection`: terms in both the topic and the control top-`size` lists.
///
/// Both combined policies are ordered by combined frequency.
pub fn build_vocabulary(
    topic_docs: &[TokenDoc],
    control_docs: &[TokenDoc],
    policy: VocabPolicy,
    size: usize,
    excluded: &KeywordSet,
) -> Result<Vocabulary> {
    if size == 0 {
        return Err(Error::Config("vocabulary size must be at least 1".into()));
    }
    let filter = KeywordFilter::new(excluded);
    let topic = filtered_counts(topic_docs, &filter);
    let control = filtered_counts(control_docs, &filter);
    let mut combined = topic.clone();
    for (t, c) in &control {
        *combined.entry(t.clone()).or_default() += c;
    }
    let need = |m: &HashMap<String, u64>, what: &'static str| {
        if m.is_empty() {
            Err(Error::EmptyInput(what))
        } else {
            Ok(())
        }
    };

    let terms = match policy {
        VocabPolicy::FreqOverall => {
            need(&combined, "no terms in either corpus")?;
            top(&combined, size)
        }
        VocabPolicy::FreqTopic => {
            need(&topic, "no terms in the topic corpus")?;
            top(&topic, size)
        }
        VocabPolicy::FreqControl => {
            need(&control, "no terms in the control corpus")?;
            top(&control, size)
        }
        VocabPolicy::DiscTopic | VocabPolicy::DiscControl => {
            need(&combined, "no terms in either corpus")?;
            let table = DiscriminativenessTable::<f64>::from_counts(topic, control, 1.0);
            let want_topic = policy == VocabPolicy::DiscTopic;
            table
                .ranked()
                .into_iter()
                .filter(|s| if want_topic { s.log_ratio > 0.0 } else { s.log_ratio < 0.0 })
                .take(size)
                .map(|s| s.term)
                .collect()
        }
        VocabPolicy::Union => {
            need(&topic, "no terms in the topic corpus")?;
            need(&control, "no terms in the control corpus")?;
            let mut seen = HashSet::new();
            let mut terms: Vec<String> = top(&topic, size.div_ceil(2))
                .into_iter()
                .chain(top(&control, size / 2))
                .filter(|t| seen.insert(t.clone()))
                .collect();
            if terms.len() < size {
                for (t, _) in sorted_counts(combined.clone()) {
                    if terms.len() == size {
                        break;
                    }
                    if seen.insert(t.clone()) {
                        terms.push(t);
                    }
                }
            }
            rerank(terms, &combined)
        }
        VocabPolicy::Intersection => {
            need(&topic, "no terms in the topic corpus")?;
            need(&control, "no terms in the control corpus")?;
            let in_control: HashSet<String> = top(&control, size).into_iter().collect();
            let terms = top(&topic, size).into_iter().filter(|t| in_control.contains(t)).collect();
            rerank(terms, &combined)
        }
    };
    let truncated = terms.len() < size;
    let mut v = Vocabulary::from_terms(terms, policy, excluded.clone())?;
    v.truncated = truncated;
    Ok(v)
}
