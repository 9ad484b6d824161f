mod common;

use std::collections::{BTreeSet, HashSet};
use std::io::Cursor;

use rand::seq::SliceRandom;
use rand::Rng;
use tweetmine::ingest::{
    corpus_stats, matches_keywords, parse_record, split_corpus, Geo, KeywordSet, Label, ReadOptions, RecordReader,
    TweetRecord,
};

const KEYWORDS: [&str; 4] = ["autism", "adhd", "asperger", "aspie"];

fn random_record(g: &mut impl Rng, i: usize) -> TweetRecord {
    let words = ["autism", "Autistic", "#ADHDlife", "aspies", "adh", "d", "hello", "@asperger", "cats", "asp", "http://autism.org"];
    let n = g.gen_range(1..8);
    let text: Vec<&str> = (0..n).map(|_| *words.choose(g).unwrap()).collect();
    let mut r = TweetRecord::new(format!("id{i}"), &text.join(" ")).unwrap();
    r.is_retweet = g.gen_bool(0.3);
    r.author_id = g.gen_bool(0.9).then(|| format!("u{}", g.gen_range(0..50)));
    r.geo = g.gen_bool(0.1).then(|| Geo::new(g.gen_range(-90.0..90.0), g.gen_range(-180.0..180.0)).unwrap());
    r.in_reply_to = g.gen_bool(0.2).then(|| format!("id{}", g.gen_range(0..i + 1)));
    r.lang = g.gen_bool(0.5).then(|| "en".to_string());
    r
}

#[test]
fn thousand_records_round_trip() {
    let mut g = common::rng(1);
    let recs: Vec<TweetRecord> = (0..1000).map(|i| random_record(&mut g, i)).collect();
    let file: String = recs.iter().map(|r| r.to_ndjson_line() + "\n").collect();
    let back: Vec<TweetRecord> = RecordReader::new(Cursor::new(file.as_bytes()), ReadOptions { english_only: false })
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(back.len(), recs.len());
    for (a, b) in back.iter().zip(&recs) {
        assert_eq!(a, b);
    }
    let again: String = back.iter().map(|r| r.to_ndjson_line() + "\n").collect();
    assert_eq!(again, file);
}

#[test]
fn parse_extracts_entities() {
    let r = parse_record(r#"{"id":"1","text":"hi #a @b http://x"}"#).unwrap();
    assert_eq!(r.hashtags, ["a"]);
    assert_eq!(r.mentions, ["b"]);
    assert_eq!(r.urls, ["http://x"]);
    let e = parse_record(r#"{"id":"1"}"#).unwrap_err();
    assert!(e.to_string().contains("text"), "{e}");
}

#[test]
fn split_agrees_with_per_record_scan() {
    let ks = KeywordSet::new(KEYWORDS).unwrap();
    let mut g = common::rng(2);
    let recs: Vec<TweetRecord> = (0..10_000).map(|i| random_record(&mut g, i)).collect();
    let (topic, control) = split_corpus(recs.clone(), &ks).unwrap();
    assert_eq!(topic.label, Label::Topic);
    assert_eq!(control.label, Label::Control);
    assert_eq!(topic.len() + control.len(), recs.len());
    let want_topic: Vec<&str> = recs.iter().filter(|r| matches_keywords(&r.text, &ks)).map(|r| r.id.as_str()).collect();
    let want_control: Vec<&str> = recs.iter().filter(|r| !matches_keywords(&r.text, &ks)).map(|r| r.id.as_str()).collect();
    assert_eq!(topic.records.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(), want_topic);
    assert_eq!(control.records.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(), want_control);
    assert!(!want_topic.is_empty() && !want_control.is_empty());
}

#[test]
fn keyword_examples() {
    let ks = KeywordSet::new(KEYWORDS).unwrap();
    assert!(matches_keywords("Autism awareness month", &ks));
    assert!(matches_keywords("#autismawareness rocks", &ks));
    assert!(!matches_keywords("my adh d is", &ks));
}

#[test]
fn stats_match_second_pass_tally() {
    let mut g = common::rng(3);
    let recs: Vec<TweetRecord> = (0..1000).map(|i| random_record(&mut g, i)).collect();
    let s = corpus_stats(&recs);
    let count = |f: &dyn Fn(&TweetRecord) -> bool| recs.iter().filter(|r| f(r)).count();
    assert_eq!(s.n_total, recs.len());
    assert_eq!(s.n_original, count(&|r| !r.is_retweet));
    assert_eq!(s.n_retweets, count(&|r| r.is_retweet));
    assert_eq!(s.n_with_hashtags, count(&|r| !r.hashtags.is_empty()));
    assert_eq!(s.n_geo, count(&|r| r.geo.is_some()));
    assert_eq!(s.n_with_urls, count(&|r| !r.urls.is_empty()));
    assert_eq!(s.n_replies, count(&|r| r.in_reply_to.is_some()));
    assert_eq!(s.n_with_mentions, count(&|r| !r.mentions.is_empty()));
    let users: BTreeSet<&str> = recs.iter().filter_map(|r| r.author_id.as_deref()).collect();
    assert_eq!(s.n_unique_users, users.len());
    assert_eq!(s.n_original + s.n_retweets, s.n_total);
}

#[test]
fn duplicate_ids_are_rejected_with_the_id() {
    let ks = KeywordSet::new(KEYWORDS).unwrap();
    let recs = vec![
        TweetRecord::new("7", "autism").unwrap(),
        TweetRecord::new("8", "hello").unwrap(),
        TweetRecord::new("7", "again").unwrap(),
    ];
    let e = split_corpus(recs, &ks).unwrap_err();
    assert!(e.to_string().contains('7'), "{e}");
}

#[test]
fn topic_and_control_are_disjoint() {
    let ks = KeywordSet::new(KEYWORDS).unwrap();
    let mut g = common::rng(4);
    let recs: Vec<TweetRecord> = (0..500).map(|i| random_record(&mut g, i)).collect();
    let (t, c) = split_corpus(recs, &ks).unwrap();
    let ids: HashSet<&str> = t.records.iter().map(|r| r.id.as_str()).collect();
    assert!(c.records.iter().all(|r| !ids.contains(r.id.as_str())));
}
