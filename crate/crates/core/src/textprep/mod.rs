//! Tweet text preprocessing: normalization, stop-word removal, placeholder
//! tokens for URLs and mentions, and stemming.

mod normalize;
mod porter;
pub mod stopwords;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

pub use normalize::normalize_with;
pub use porter::porter_stem;

use crate::error::{Error, Result};
use crate::ingest::{KeywordSet, TweetRecord};

/// The preprocessed term sequence of one tweet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenDoc {
    pub tweet_id: String,
    pub tokens: Vec<String>,
}

impl TokenDoc {
    pub fn new(tweet_id: impl Into<String>, tokens: Vec<String>) -> Self {
        TokenDoc {
            tweet_id: tweet_id.into(),
            tokens,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// `id<TAB>tok tok tok`
    pub fn to_line(&self) -> String {
        format!("{}\t{}", self.tweet_id, self.tokens.join(" "))
    }

    pub fn from_line(line: &str) -> Result<Self> {
        let (id, rest) = line
            .split_once('\t')
            .ok_or_else(|| Error::schema("token_doc", "expected `id<TAB>tokens`"))?;
        if id.is_empty() {
            return Err(Error::schema("tweet_id", "empty"));
        }
        Ok(TokenDoc::new(id, rest.split_whitespace().map(str::to_string).collect()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    pub stopwords: HashSet<String>,
    pub min_token_len: usize,
    pub url_token: String,
    pub mention_token: String,
    pub stem_enabled: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            stopwords: stopwords::ENGLISH.iter().map(|s| s.to_string()).collect(),
            min_token_len: 2,
            url_token: "url".into(),
            mention_token: "atus".into(),
            stem_enabled: true,
        }
    }
}

fn is_valid_token(t: &str) -> bool {
    !t.is_empty() && t.chars().all(|c| c.is_alphanumeric() && !c.is_uppercase())
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_token_len == 0 {
            return Err(Error::Config("min_token_len must be at least 1".into()));
        }
        for (name, tok) in [("url_token", &self.url_token), ("mention_token", &self.mention_token)] {
            if !is_valid_token(tok) {
                return Err(Error::Config(format!("{name} `{tok}` is not a valid token")));
            }
        }
        Ok(())
    }

    /// Replaces the stop-word list with one word per line (`#` comments allowed).
    pub fn with_stopword_text(mut self, text: &str) -> Self {
        self.stopwords = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim().to_lowercase())
            .filter(|l| !l.is_empty())
            .collect();
        self
    }
}

/// Irregular forms mapped straight to their lemma. Lemmas map to themselves
/// so the stemmer leaves them alone.
const LEMMAS: &[(&str, &str)] = &[
    ("children", "child"),
    ("men", "man"),
    ("women", "woman"),
    ("mice", "mouse"),
    ("mouse", "mouse"),
    ("feet", "foot"),
    ("teeth", "tooth"),
    ("geese", "goose"),
    ("goose", "goose"),
    ("oxen", "ox"),
    ("using", "use"),
    ("used", "use"),
    ("uses", "use"),
    ("use", "use"),
];

fn lemma(term: &str) -> Option<&'static str> {
    LEMMAS.iter().find(|(w, _)| *w == term).map(|(_, l)| *l)
}

/// Maps irregular forms through the lemma table, otherwise applies one
/// pass of Porter.
pub fn stem(term: &str) -> String {
    match lemma(term) {
        Some(l) => l.to_string(),
        None => porter_stem(term),
    }
}

/// Lowercases, decodes entities, replaces URLs with `url` and mentions with
/// `atus`, strips `#`, punctuation and emoticons, splits hyphenated words.
pub fn normalize(text: &str) -> String {
    normalize_with(text, "url", "atus")
}

fn is_digits(t: &str) -> bool {
    t.chars().all(|c| c.is_ascii_digit())
}

fn is_stemmable(t: &str) -> bool {
    t.bytes().all(|b| b.is_ascii_lowercase())
}

impl PipelineConfig {
    fn keep(&self, t: &str) -> bool {
        !self.stopwords.contains(t) && (is_digits(t) || t.chars().count() >= self.min_token_len)
    }

    /// Token list for raw text.
    pub fn tokens(&self, text: &str) -> Vec<String> {
        let normalized = normalize_with(text, &self.url_token, &self.mention_token);
        normalized
            .split_whitespace()
            .filter(|t| self.keep(t))
            .filter_map(|t| {
                if t == self.url_token || t == self.mention_token {
                    return Some(t.to_string());
                }
                let s = if self.stem_enabled && is_stemmable(t) { stem(t) } else { t.to_string() };
                // A stem can land on a stop word or fall under the length limit.
                self.keep(&s).then_some(s)
            })
            .collect()
    }
}

pub fn preprocess(rec: &TweetRecord, cfg: &PipelineConfig) -> TokenDoc {
    TokenDoc::new(rec.id.clone(), cfg.tokens(&rec.text))
}

/// Keyword matching on preprocessed tokens: a token matches when a keyword is
/// its prefix or when it equals the keyword's own stem (`asperger` stems to
/// `asperg`, so a plain prefix test would miss `aspergers`).
#[derive(Debug, Clone)]
pub struct KeywordFilter {
    keywords: KeywordSet,
    stems: Vec<String>,
}

impl KeywordFilter {
    pub fn new(keywords: &KeywordSet) -> Self {
        KeywordFilter {
            keywords: keywords.clone(),
            stems: keywords.keywords().iter().map(|k| stem(k)).collect(),
        }
    }

    pub fn keywords(&self) -> &KeywordSet {
        &self.keywords
    }

    /// Index of the matching keyword.
    pub fn match_index(&self, token: &str) -> Option<usize> {
        self.keywords
            .match_token(token)
            .or_else(|| self.stems.iter().position(|s| s == token))
    }

    pub fn matches(&self, token: &str) -> bool {
        self.match_index(token).is_some()
    }
}
