use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::rank::count_terms;
use crate::error::{Error, Result};
use crate::ingest::Label;
use crate::scalar::Scalar;
use crate::textprep::TokenDoc;

/// Smoothed term counts of two corpora over their shared vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DiscriminativenessTable<F: Scalar> {
    topic: HashMap<String, u64>,
    control: HashMap<String, u64>,
    topic_total: u64,
    control_total: u64,
    vocab_size: usize,
    alpha: F,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TermScore<F: Scalar> {
    pub term: String,
    pub topic_count: u64,
    pub control_count: u64,
    /// ln(p(term|topic) / p(term|control)); positive favours topic.
    pub log_ratio: F,
}

impl<F: Scalar> DiscriminativenessTable<F> {
    pub fn new(topic_docs: &[TokenDoc], control_docs: &[TokenDoc]) -> Self {
        Self::with_alpha(topic_docs, control_docs, F::one())
    }

    pub fn with_alpha(topic_docs: &[TokenDoc], control_docs: &[TokenDoc], alpha: F) -> Self {
        let topic = count_terms(topic_docs.iter().flat_map(|d| d.tokens.iter()));
        let control = count_terms(control_docs.iter().flat_map(|d| d.tokens.iter()));
        Self::from_counts(topic, control, alpha)
    }

    pub fn from_counts(topic: HashMap<String, u64>, control: HashMap<String, u64>, alpha: F) -> Self {
        let vocab_size = topic.keys().chain(control.keys()).collect::<BTreeSet<_>>().len();
        DiscriminativenessTable {
            topic_total: topic.values().sum(),
            control_total: control.values().sum(),
            topic,
            control,
            vocab_size,
            alpha,
        }
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn count(&self, label: Label, term: &str) -> u64 {
        let m = match label {
            Label::Topic => &self.topic,
            Label::Control => &self.control,
        };
        m.get(term).copied().unwrap_or(0)
    }

    pub fn contains(&self, term: &str) -> bool {
        self.topic.contains_key(term) || self.control.contains_key(term)
    }

    fn smoothed(&self, count: u64, total: u64) -> F {
        let v = F::from_usize_lossy(self.vocab_size);
        (F::from_u64(count).unwrap() + self.alpha) / (F::from_u64(total).unwrap() + self.alpha * v)
    }

    /// Signed ln likelihood ratio, topic over control.
    pub fn log_ratio(&self, term: &str) -> Result<F> {
        if !self.contains(term) {
            return Err(Error::NotInVocabulary(term.to_string()));
        }
        let pt = self.smoothed(self.count(Label::Topic, term), self.topic_total);
        let pc = self.smoothed(self.count(Label::Control, term), self.control_total);
        Ok(pt.ln() - pc.ln())
    }

    /// `|ln(p(term|topic) / p(term|control))|`.
    pub fn score(&self, term: &str) -> Result<F> {
        self.log_ratio(term).map(F::abs)
    }

    /// Every vocabulary term, ordered by descending |score| then term.
    pub fn ranked(&self) -> Vec<TermScore<F>> {
        let terms: BTreeSet<&String> = self.topic.keys().chain(self.control.keys()).collect();
        let mut out: Vec<TermScore<F>> = terms
            .into_iter()
            .map(|t| TermScore {
                term: t.clone(),
                topic_count: self.count(Label::Topic, t),
                control_count: self.count(Label::Control, t),
                log_ratio: self.log_ratio(t).expect("term from vocabulary"),
            })
            .collect();
        out.sort_by(|a, b| {
            b.log_ratio
                .abs()
                .partial_cmp(&a.log_ratio.abs())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.term.cmp(&b.term))
        });
        out
    }
}

/// Convenience wrapper with α = 1.
pub fn discriminativeness<F: Scalar>(topic_docs: &[TokenDoc], control_docs: &[TokenDoc], term: &str) -> Result<F> {
    DiscriminativenessTable::<F>::new(topic_docs, control_docs).score(term)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(s: &str) -> TokenDoc {
        TokenDoc::new("d", s.split_whitespace().map(str::to_string).collect())
    }

    fn repeat(pairs: &[(&str, usize)]) -> TokenDoc {
        let mut toks = Vec::new();
        for &(t, n) in pairs {
            toks.extend(std::iter::repeat_n(t.to_string(), n));
        }
        TokenDoc::new("d", toks)
    }

    #[test]
    fn hand_computed_ratio() {
        let topic = [repeat(&[("x", 9), ("y", 1)])];
        let control = [repeat(&[("x", 1), ("y", 9)])];
        let s: f64 = discriminativeness(&topic, &control, "x").unwrap();
        assert!((s - 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn equal_relative_frequency_is_zero() {
        let s: f64 = discriminativeness(&[doc("a b")], &[doc("a b a b")], "a").unwrap();
        assert!(s.abs() < 1e-15);
    }

    #[test]
    fn symmetric_under_swap() {
        let (a, b) = ([doc("a a b c")], [doc("b c c d")]);
        for t in ["a", "b", "c", "d"] {
            let x: f64 = discriminativeness(&a, &b, t).unwrap();
            let y: f64 = discriminativeness(&b, &a, t).unwrap();
            assert_eq!(x, y);
            assert!(x >= 0.0);
        }
    }

    #[test]
    fn unknown_term() {
        assert!(matches!(
            discriminativeness::<f64>(&[doc("a")], &[doc("b")], "zzz"),
            Err(Error::NotInVocabulary(_))
        ));
    }

    #[test]
    fn ranked_order() {
        let t = DiscriminativenessTable::<f64>::new(&[doc("a a a b")], &[doc("b c")]);
        let r = t.ranked();
        assert_eq!(r.len(), 3);
        assert_eq!(r[0].term, "a");
        assert!(r.windows(2).all(|w| w[0].log_ratio.abs() >= w[1].log_ratio.abs()));
    }
}
