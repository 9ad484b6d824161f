//! Seeded synthetic corpora shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tweetmine::corpstats::{PosAnnotatedDoc, PosCorpus, RankFrequencyTable, Tagset};
use tweetmine::features::{LabeledDataset, Scheme, SparseVector, VocabPolicy, Vocabulary};
use tweetmine::ingest::{KeywordSet, Label, TweetRecord};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Words built from consonant-vowel pairs whose first consonant comes from
/// `initials`, sampled with Zipfian weights `1 / rank`.
pub struct Lexicon {
    pub words: Vec<String>,
    cdf: Vec<f64>,
}

const VOWELS: &[u8] = b"aeiou";
const CONSONANTS: &[u8] = b"bdfgklmnprstvz";

impl Lexicon {
    pub fn new(initials: &str, size: usize, seed: u64) -> Self {
        let mut r = rng(seed);
        let mut words = Vec::with_capacity(size);
        let mut seen = std::collections::HashSet::new();
        let initials = initials.as_bytes();
        while words.len() < size {
            let mut w = String::new();
            w.push(initials[r.gen_range(0..initials.len())] as char);
            w.push(VOWELS[r.gen_range(0..VOWELS.len())] as char);
            for _ in 0..2 {
                w.push(CONSONANTS[r.gen_range(0..CONSONANTS.len())] as char);
                w.push(VOWELS[r.gen_range(0..VOWELS.len())] as char);
            }
            if seen.insert(w.clone()) {
                words.push(w);
            }
        }
        let mut cdf = Vec::with_capacity(size);
        let mut acc = 0.0;
        for i in 0..size {
            acc += 1.0 / (i + 1) as f64;
            cdf.push(acc);
        }
        for c in &mut cdf {
            *c /= acc;
        }
        Lexicon { words, cdf }
    }

    pub fn sample<R: Rng>(&self, r: &mut R) -> &str {
        let u: f64 = r.gen();
        let i = self.cdf.partition_point(|&c| c < u).min(self.words.len() - 1);
        &self.words[i]
    }
}

/// Topic words start with b/d/f/g/k, control words with l/m/n/p/r, shared
/// words with s/t/v/z, so the three vocabularies are disjoint.
pub struct TopicModel {
    pub topic: Lexicon,
    pub control: Lexicon,
    pub shared: Lexicon,
}

impl TopicModel {
    pub fn new(seed: u64) -> Self {
        TopicModel {
            topic: Lexicon::new("bdfgk", 400, seed ^ 0x1),
            control: Lexicon::new("lmnpr", 400, seed ^ 0x2),
            shared: Lexicon::new("stvz", 150, seed ^ 0x3),
        }
    }

    /// 6 to 14 words, about 70% from `own` and the rest shared.
    pub fn body<R: Rng>(&self, own: &Lexicon, r: &mut R) -> Vec<String> {
        let n = r.gen_range(6..=14);
        (0..n)
            .map(|_| {
                if r.gen_bool(0.7) {
                    own.sample(r).to_string()
                } else {
                    self.shared.sample(r).to_string()
                }
            })
            .collect()
    }
}

fn keyword_form<R: Rng>(k: &str, r: &mut R) -> String {
    match r.gen_range(0..4) {
        0 => k.to_string(),
        1 => format!("#{k}"),
        2 => format!("{}{}", k.to_uppercase(), "!"),
        _ => format!("{k}awareness"),
    }
}

fn insert_at<R: Rng>(words: &mut Vec<String>, w: String, r: &mut R) {
    let at = r.gen_range(0..=words.len());
    words.insert(at, w);
}

/// `n` tweets, half topic (each carrying one of `keywords`), half control,
/// shuffled together.
pub fn two_topic_records(n: usize, keywords: &[&str], seed: u64) -> Vec<TweetRecord> {
    let model = TopicModel::new(seed);
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let topic = i % 2 == 0;
        let mut words = model.body(if topic { &model.topic } else { &model.control }, &mut r);
        if topic {
            let k = keywords[r.gen_range(0..keywords.len())];
            let form = keyword_form(k, &mut r);
            insert_at(&mut words, form, &mut r);
        }
        out.push(TweetRecord::new(format!("t{i:06}"), &words.join(" ")).unwrap());
    }
    out.shuffle(&mut r);
    out
}

/// Two conditions with their own lexicons and keyword sets.
pub fn condition_records(n_each: usize, seed: u64) -> (Vec<TweetRecord>, Vec<TweetRecord>) {
    let model = TopicModel::new(seed);
    let mut r = rng(seed);
    let mut make = |lex: &Lexicon, kws: &[&str], tag: &str| -> Vec<TweetRecord> {
        (0..n_each)
            .map(|i| {
                let mut words = model.body(lex, &mut r);
                let k = kws[r.gen_range(0..kws.len())];
                let form = keyword_form(k, &mut r);
                insert_at(&mut words, form, &mut r);
                TweetRecord::new(format!("{tag}{i:06}"), &words.join(" ")).unwrap()
            })
            .collect()
    };
    let a = make(&model.topic, &["autism", "adhd", "asperger", "aspie"], "a");
    let b = make(&model.control, &["alzheimer", "dementia"], "b");
    (a, b)
}

/// Topic tweets over four keywords where tweets whose first keyword is
/// `polysemous` draw their words from the control lexicon half of the time.
/// Roughly one topic tweet in ten carries a second keyword.
pub fn loko_records(n_topic: usize, n_control: usize, keywords: &[&str], polysemous: &str, seed: u64) -> Vec<TweetRecord> {
    let model = TopicModel::new(seed);
    let mut r = rng(seed);
    let mut out = Vec::new();
    for i in 0..n_topic {
        let k = keywords[r.gen_range(0..keywords.len())];
        let control_like = k == polysemous && r.gen_bool(0.5);
        let mut words = model.body(if control_like { &model.control } else { &model.topic }, &mut r);
        let form = keyword_form(k, &mut r);
        insert_at(&mut words, form, &mut r);
        if r.gen_bool(0.1) {
            let k2 = keywords[r.gen_range(0..keywords.len())];
            if k2 != k {
                let form = keyword_form(k2, &mut r);
                insert_at(&mut words, form, &mut r);
            }
        }
        out.push(TweetRecord::new(format!("k{i:06}"), &words.join(" ")).unwrap());
    }
    for i in 0..n_control {
        let words = model.body(&model.control, &mut r);
        out.push(TweetRecord::new(format!("c{i:06}"), &words.join(" ")).unwrap());
    }
    out.shuffle(&mut r);
    out
}

/// Rank-frequency table of `n` draws from `p(r) ∝ r^exponent`, r = 1..=vocab.
pub fn power_law_sample(n: usize, vocab: usize, exponent: f64, seed: u64) -> RankFrequencyTable {
    let mut cdf = Vec::with_capacity(vocab);
    let mut acc = 0.0;
    for r in 1..=vocab {
        acc += (r as f64).powf(exponent);
        cdf.push(acc);
    }
    let mut counts = vec![0u64; vocab];
    let mut g = rng(seed);
    for _ in 0..n {
        let u = g.gen::<f64>() * acc;
        counts[cdf.partition_point(|&c| c < u).min(vocab - 1)] += 1;
    }
    RankFrequencyTable::from_counts(counts.into_iter().enumerate().map(|(i, c)| (format!("w{i:05}"), c)))
}

/// Tagged documents where each token is a noun with probability `noun_rate`.
pub fn pos_group(n: usize, noun_rate: f64, prefix: &str, seed: u64) -> PosCorpus {
    let mut g = rng(seed);
    let others = ["V", "A", "R", "D", "P", "O"];
    let docs = (0..n)
        .map(|i| {
            let len = g.gen_range(5..=20);
            let tagged = (0..len)
                .map(|j| {
                    let tag = if g.gen_bool(noun_rate) {
                        "N"
                    } else {
                        others[g.gen_range(0..others.len())]
                    };
                    (format!("w{j}"), tag.to_string())
                })
                .collect();
            PosAnnotatedDoc {
                tweet_id: format!("{prefix}{i}"),
                tagged,
            }
        })
        .collect();
    PosCorpus::new(Tagset::ark(), docs).unwrap()
}

pub fn vocab_of(dim: usize) -> Arc<Vocabulary> {
    Arc::new(
        Vocabulary::from_terms((0..dim).map(|i| format!("t{i}")).collect(), VocabPolicy::FreqOverall, KeywordSet::empty())
            .unwrap(),
    )
}

/// Dense rows to a dataset over a synthetic vocabulary; zeros are dropped.
pub fn dataset_from_dense(rows: &[Vec<f64>], labels: &[Label], scheme: Scheme) -> LabeledDataset<f64> {
    let dim = rows.first().map_or(0, Vec::len);
    LabeledDataset {
        vectors: rows
            .iter()
            .map(|r| {
                SparseVector::new(
                    scheme,
                    r.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, &v)| (i, v)).collect(),
                )
            })
            .collect(),
        labels: labels.to_vec(),
        vocab: vocab_of(dim),
        scheme,
        idf: None,
    }
}

/// Labels drawn from a logistic model with sparse true weights, so the data
/// are not separable.
pub fn noisy_logistic(n: usize, dim: usize, seed: u64) -> LabeledDataset<f64> {
    let mut g = rng(seed);
    let w: Vec<f64> = (0..dim)
        .map(|i| if i % 3 == 0 { g.gen_range(-2.0..2.0) } else { 0.0 })
        .collect();
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = (0..dim)
            .map(|_| if g.gen_bool(0.3) { g.gen_range(1..=3) as f64 } else { 0.0 })
            .collect();
        let z: f64 = x.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() - 0.5;
        let p = 1.0 / (1.0 + (-z).exp());
        labels.push(if g.gen_bool(p) { Label::Topic } else { Label::Control });
        rows.push(x);
    }
    dataset_from_dense(&rows, &labels, Scheme::Count)
}
