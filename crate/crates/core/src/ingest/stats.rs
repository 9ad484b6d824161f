use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::TweetRecord;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub n_total: usize,
    pub n_original: usize,
    pub n_retweets: usize,
    pub n_with_hashtags: usize,
    pub n_geo: usize,
    pub n_with_urls: usize,
    pub n_replies: usize,
    pub n_with_mentions: usize,
    pub n_unique_users: usize,
}

/// Exact metadata counts. Users are distinct non-empty author ids.
pub fn corpus_stats(records: &[TweetRecord]) -> CorpusStats {
    let mut s = CorpusStats::default();
    let mut users = HashSet::new();
    for r in records {
        s.n_total += 1;
        if r.is_retweet {
            s.n_retweets += 1;
        } else {
            s.n_original += 1;
        }
        s.n_with_hashtags += usize::from(!r.hashtags.is_empty());
        s.n_geo += usize::from(r.geo.is_some());
        s.n_with_urls += usize::from(!r.urls.is_empty());
        s.n_replies += usize::from(r.in_reply_to.is_some());
        s.n_with_mentions += usize::from(!r.mentions.is_empty());
        if let Some(a) = &r.author_id {
            users.insert(a.as_str());
        }
    }
    s.n_unique_users = users.len();
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_records() {
        let mut recs: Vec<TweetRecord> = ["a #x", "b #y", "c", "d"]
            .iter()
            .enumerate()
            .map(|(i, t)| TweetRecord::new(i.to_string(), t).unwrap())
            .collect();
        recs[3].is_retweet = true;
        let s = corpus_stats(&recs);
        assert_eq!(s.n_total, 4);
        assert_eq!(s.n_retweets, 1);
        assert_eq!(s.n_original, 3);
        assert_eq!(s.n_with_hashtags, 2);
        assert_eq!(s.n_unique_users, 0);
    }

    #[test]
    fn empty_corpus_is_all_zero() {
        assert_eq!(corpus_stats(&[]), CorpusStats::default());
    }
}
