use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bootstrap keywords. A token matches when a keyword is a prefix of it, so
/// `autism` also catches `autismawareness` and `autistic` does not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct KeywordSet {
    keywords: Vec<String>,
}

impl KeywordSet {
    pub fn new<I, S>(keywords: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let keywords: Vec<String> = keywords.into_iter().map(|k| k.as_ref().to_string()).collect();
        for k in &keywords {
            if k.is_empty() {
                return Err(Error::KeywordSet("empty keyword".into()));
            }
            if !k.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit()) {
                return Err(Error::KeywordSet(format!(
                    "keyword `{k}` must be lowercase alphanumeric"
                )));
            }
        }
        for (i, a) in keywords.iter().enumerate() {
            for b in &keywords[i + 1..] {
                if a == b {
                    return Err(Error::KeywordSet(format!("duplicate keyword `{a}`")));
                }
                if a.starts_with(b.as_str()) || b.starts_with(a.as_str()) {
                    return Err(Error::KeywordSet(format!(
                        "keywords `{a}` and `{b}` overlap by prefix"
                    )));
                }
            }
        }
        Ok(KeywordSet { keywords })
    }

    /// Parses a comma-separated list such as `autism,adhd,asperger,aspie`.
    pub fn parse_list(s: &str) -> Result<Self> {
        Self::new(s.split(',').map(str::trim).filter(|k| !k.is_empty()))
    }

    pub fn empty() -> Self {
        KeywordSet { keywords: Vec::new() }
    }

    pub fn keywords(&self) -> &[String] {
        &self.keywords
    }

    pub fn len(&self) -> usize {
        self.keywords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keywords.is_empty()
    }

    /// The set with one keyword removed.
    pub fn without(&self, keyword: &str) -> KeywordSet {
        KeywordSet {
            keywords: self.keywords.iter().filter(|k| *k != keyword).cloned().collect(),
        }
    }

    /// Index of the keyword that prefixes `token`, if any.
    pub fn match_token(&self, token: &str) -> Option<usize> {
        self.keywords.iter().position(|k| token.starts_with(k.as_str()))
    }

    pub fn matches_token(&self, token: &str) -> bool {
        self.match_token(token).is_some()
    }

    pub fn matches_text(&self, text: &str) -> bool {
        !self.is_empty() && match_tokens(text).any(|t| self.matches_token(&t))
    }

    /// Flags, per keyword, whether it matches somewhere in `text`.
    pub fn matched_in_text(&self, text: &str) -> Vec<bool> {
        let mut hit = vec![false; self.keywords.len()];
        for tok in match_tokens(text) {
            for (i, k) in self.keywords.iter().enumerate() {
                if tok.starts_with(k.as_str()) {
                    hit[i] = true;
                }
            }
        }
        hit
    }
}

impl TryFrom<Vec<String>> for KeywordSet {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        KeywordSet::new(v)
    }
}

impl From<KeywordSet> for Vec<String> {
    fn from(ks: KeywordSet) -> Self {
        ks.keywords
    }
}

fn is_url_token(tok: &str) -> bool {
    let lower = tok.trim_start_matches(|c: char| !c.is_alphanumeric()).to_ascii_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

/// Maximal `[a-z0-9]` runs of the lowercased text, URLs excluded.
fn match_tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split_whitespace()
        .filter(|t| !is_url_token(t))
        .flat_map(|t| {
            let lower = t.to_lowercase();
            lower
                .split(|c: char| !(c.is_ascii_lowercase() || c.is_ascii_digit()))
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect::<Vec<_>>()
        })
}

/// True iff some token of `text` starts with a keyword of `ks`.
pub fn matches_keywords(text: &str, ks: &KeywordSet) -> bool {
    ks.matches_text(text)
}
