use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::SplitMode;
use super::pipeline::{CorpusPair, ExpDoc};
use crate::error::{Error, Result};

/// Seeded generator for stream `stream` of an experiment.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Indices of the training part of `docs`, in ascending order.
fn train_indices(docs: &[ExpDoc], fraction: f64, rng: &mut ChaCha8Rng, mode: SplitMode) -> Vec<usize> {
    let n = docs.len();
    let n_train = (fraction * n as f64).round() as usize;
    let mut order: Vec<usize> = (0..n).collect();
    match mode {
        SplitMode::Random => order.shuffle(rng),
        SplitMode::Chronological => {
            order.sort_by_key(|&i| (docs[i].created_at.is_none(), docs[i].created_at, i));
        }
    }
    let mut train: Vec<usize> = order[..n_train].to_vec();
    train.sort_unstable();
    train
}

fn split_one(docs: &[ExpDoc], fraction: f64, rng: &mut ChaCha8Rng, mode: SplitMode) -> (Vec<ExpDoc>, Vec<ExpDoc>) {
    let train = train_indices(docs, fraction, rng, mode);
    let mut in_train = vec![false; docs.len()];
    for &i in &train {
        in_train[i] = true;
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (d, t) in docs.iter().zip(in_train) {
        if t {
            a.push(d.clone());
        } else {
            b.push(d.clone());
        }
    }
    (a, b)
}

/// Splits each corpus separately: `round(fraction * n)` documents train,
/// the rest test. Original order is kept inside each part.
pub fn split_train_test(pair: &CorpusPair, fraction: f64, seed: u64, mode: SplitMode) -> Result<(CorpusPair, CorpusPair)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Config(format!("split fraction must lie in (0, 1), got {fraction}")));
    }
    if pair.topic.is_empty() || pair.control.is_empty() {
        return Err(Error::EmptyInput("both corpora must be non-empty to split"));
    }
    let (tt, te) = split_one(&pair.topic, fraction, &mut rng_for(seed, 1), mode);
    let (ct, ce) = split_one(&pair.control, fraction, &mut rng_for(seed, 2), mode);
    Ok((
        CorpusPair {
            topic: tt,
            control: ct,
        },
        CorpusPair {
            topic: te,
            control: ce,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{TimeZone, Utc};
    use std::collections::HashSet;

    fn docs(prefix: &str, n: usize) -> Vec<ExpDoc> {
        (0..n)
            .map(|i| ExpDoc {
                id: format!("{prefix}{i}"),
                tokens: vec![],
                created_at: Some(Utc.timestamp_opt(1_000_000 - i as i64, 0).unwrap()),
                hits: vec![],
            })
            .collect()
    }

    fn ids(d: &[ExpDoc]) -> Vec<&str> {
        d.iter().map(|d| d.id.as_str()).collect()
    }

    #[test]
    fn halves_exactly_and_partitions() {
        let pair = CorpusPair {
            topic: docs("t", 100),
            control: docs("c", 100),
        };
        let (tr, te) = split_train_test(&pair, 0.5, 1, SplitMode::Random).unwrap();
        assert_eq!((tr.topic.len(), te.topic.len(), tr.control.len(), te.control.len()), (50, 50, 50, 50));
        let all: HashSet<&str> = ids(&tr.topic).into_iter().chain(ids(&te.topic)).collect();
        assert_eq!(all.len(), 100);
    }

    #[test]
    fn seeds() {
        let pair = CorpusPair {
            topic: docs("t", 20),
            control: docs("c", 20),
        };
        let a = split_train_test(&pair, 0.5, 9, SplitMode::Random).unwrap();
        let b = split_train_test(&pair, 0.5, 9, SplitMode::Random).unwrap();
        let c = split_train_test(&pair, 0.5, 10, SplitMode::Random).unwrap();
        assert_eq!(ids(&a.0.topic), ids(&b.0.topic));
        assert_ne!(ids(&a.0.topic), ids(&c.0.topic));
    }

    #[test]
    fn chronological_takes_earliest() {
        let pair = CorpusPair {
            topic: docs("t", 4),
            control: docs("c", 4),
        };
        let (tr, _) = split_train_test(&pair, 0.5, 0, SplitMode::Chronological).unwrap();
        assert_eq!(ids(&tr.topic), ["t2", "t3"]);
    }

    #[test]
    fn rejects_bad_fraction_and_empty() {
        let pair = CorpusPair {
            topic: docs("t", 4),
            control: vec![],
        };
        assert!(matches!(split_train_test(&pair, 0.5, 0, SplitMode::Random), Err(Error::EmptyInput(_))));
        assert!(matches!(split_train_test(&pair, 1.0, 0, SplitMode::Random), Err(Error::Config(_))));
    }
}
