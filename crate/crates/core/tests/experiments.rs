mod common;

use std::collections::HashSet;

use chrono::{TimeZone, Utc};
use tweetmine::experiments::{
    apparent_specificity, corpus_hash, emit_report, read_manifest, run_basic_classification, run_condition_experiment,
    run_loko, simulate_specificity, split_train_test, strip_keywords, ConfoundParams, CorpusPair, ExpDoc,
    ExperimentConfig, FittedPipeline, Manifest, Report, SplitMode,
};
use tweetmine::ingest::{split_corpus, KeywordSet, Label, TweetRecord};
use tweetmine::textprep::{KeywordFilter, PipelineConfig, TokenDoc};
use tweetmine::ErrorClass;

const KEYWORDS: [&str; 4] = ["autism", "adhd", "asperger", "aspie"];

fn ks() -> KeywordSet {
    KeywordSet::new(KEYWORDS).unwrap()
}

fn pair_from(records: Vec<TweetRecord>) -> CorpusPair {
    let (t, c) = split_corpus(records, &ks()).unwrap();
    CorpusPair::from_records(&t.records, &c.records, &PipelineConfig::default(), &ks())
}

fn numbered(n: usize, prefix: &str) -> Vec<ExpDoc> {
    (0..n)
        .map(|i| ExpDoc::from_tokens(TokenDoc::new(format!("{prefix}{i}"), vec![format!("w{i}")]), &ks()))
        .collect()
}

fn ids(docs: &[ExpDoc]) -> Vec<&str> {
    docs.iter().map(|d| d.id.as_str()).collect()
}

#[test]
fn half_split_is_exact_disjoint_and_exhaustive() {
    let pair = CorpusPair { topic: numbered(100, "t"), control: numbered(100, "c") };
    let (train, test) = split_train_test(&pair, 0.5, 42, SplitMode::Random).unwrap();
    for (tr, te, all) in [(&train.topic, &test.topic, &pair.topic), (&train.control, &test.control, &pair.control)] {
        assert_eq!((tr.len(), te.len()), (50, 50));
        let a: HashSet<&str> = ids(tr).into_iter().collect();
        let b: HashSet<&str> = ids(te).into_iter().collect();
        assert!(a.is_disjoint(&b));
        assert_eq!(a.len() + b.len(), all.len());
    }
}

#[test]
fn seeds_control_the_split() {
    let pair = CorpusPair { topic: numbered(40, "t"), control: numbered(40, "c") };
    let (a, _) = split_train_test(&pair, 0.5, 1, SplitMode::Random).unwrap();
    let (b, _) = split_train_test(&pair, 0.5, 1, SplitMode::Random).unwrap();
    assert_eq!(ids(&a.topic), ids(&b.topic));
    assert_eq!(ids(&a.control), ids(&b.control));
    let (c, _) = split_train_test(&pair, 0.5, 2, SplitMode::Random).unwrap();
    assert_ne!(ids(&a.topic), ids(&c.topic));
    assert_ne!(ids(&a.control), ids(&c.control));
}

#[test]
fn chronological_split_trains_on_the_past() {
    let mut docs = numbered(30, "t");
    for (i, d) in docs.iter_mut().enumerate() {
        d.created_at = Some(Utc.timestamp_opt(1_400_000_000 + ((i * 7919) % 30) as i64 * 60, 0).unwrap());
    }
    let pair = CorpusPair { topic: docs.clone(), control: docs };
    let (train, test) = split_train_test(&pair, 0.5, 0, SplitMode::Chronological).unwrap();
    let latest = train.topic.iter().map(|d| d.created_at).max().unwrap();
    assert!(test.topic.iter().all(|d| d.created_at > latest));
}

#[test]
fn bad_split_fraction_is_configuration_error() {
    let pair = CorpusPair { topic: numbered(4, "t"), control: numbered(4, "c") };
    for f in [0.0, 1.0, -0.5] {
        assert_eq!(split_train_test(&pair, f, 0, SplitMode::Random).unwrap_err().class(), ErrorClass::Configuration);
    }
}

#[test]
fn strip_examples() {
    let f = KeywordFilter::new(&ks());
    let raw = PipelineConfig { stem_enabled: false, ..PipelineConfig::default() };
    let d = TokenDoc::new("1", raw.tokens("it is the adhd, oops!"));
    assert_eq!(strip_keywords(&d, &f).tokens, ["oops"]);
    let d = TokenDoc::new("2", vec!["autismawareness".into(), "day".into()]);
    assert_eq!(strip_keywords(&d, &f).tokens, ["day"]);
    let d = TokenDoc::new("3", vec!["sunni".into(), "day".into()]);
    assert_eq!(strip_keywords(&d, &f), d);
}

#[test]
fn fitted_vocabulary_has_no_keyword_terms() {
    let pair = pair_from(common::two_topic_records(600, &KEYWORDS, 3));
    let cfg = ExperimentConfig { vocab_size: 5000, ..ExperimentConfig::default() };
    let f = KeywordFilter::new(&ks());
    let fit = FittedPipeline::<f64>::fit(&pair, &ks(), &cfg).unwrap();
    assert!(fit.vocab.terms().iter().all(|t| !f.matches(t)));
    assert!(pair.topic.iter().any(|d| d.tokens.iter().any(|t| f.matches(t))));
}

#[test]
fn empty_test_set_is_an_error() {
    let pair = pair_from(common::two_topic_records(200, &KEYWORDS, 4));
    let fit = FittedPipeline::<f64>::fit(&pair, &ks(), &ExperimentConfig::default()).unwrap();
    assert!(fit.evaluate(&[], &[]).is_err());
}

#[test]
fn basic_grid_has_six_cells() {
    let pair = pair_from(common::two_topic_records(400, &KEYWORDS, 5));
    let cells = run_basic_classification::<f64>(&pair, &ExperimentConfig::default()).unwrap();
    assert_eq!(cells.len(), 6);
    for c in &cells {
        assert_eq!(c.confusion.total(), 200);
    }
}

#[test]
fn identical_corpora_classify_at_chance() {
    // Both classes come from the same generator, with no shared documents.
    let (a, _) = common::condition_records(6000, 6);
    let cfg = PipelineConfig::default();
    let docs: Vec<ExpDoc> = a.iter().map(|r| ExpDoc::from_record(r, &cfg, &ks())).collect();
    let (topic, control) = docs.split_at(3000);
    let m = run_condition_experiment::<f64>(topic, control, &KeywordSet::empty(), &ExperimentConfig::default()).unwrap();
    let acc = m.accuracy().unwrap();
    assert!((acc - 0.5).abs() <= 0.05, "accuracy {acc}");
}

#[test]
fn confound_limits_and_linearity() {
    for (pm, pn) in [(0.9, 0.8), (0.3, 0.6), (0.5, 0.5)] {
        let at = |rho: f64| apparent_specificity(&ConfoundParams::new(pm, pn, rho).unwrap()).unwrap();
        assert_eq!(at(0.0), pn);
        let (y0, y1, y2) = (at(0.2), at(0.5), at(0.8));
        assert!(((y1 - y0) / 0.3 - (y2 - y1) / 0.3).abs() < 1e-12);
        assert!(((y1 - y0) / 0.3 - (1.0 - pm - pn)).abs() < 1e-12);
    }
    for rho in [0.0, 0.3, 1.0] {
        let v = apparent_specificity(&ConfoundParams::new(0.25, 0.75, rho).unwrap()).unwrap();
        assert!((v - 0.75).abs() < 1e-15);
    }
    assert!(matches!(ConfoundParams::new(1.2, 0.5, 0.5), Err(tweetmine::Error::Domain(_))));
    let p = ConfoundParams::new(0.7, 0.6, 0.3).unwrap();
    let s = simulate_specificity(&p, 200_000, 1).unwrap();
    assert!((s - apparent_specificity(&p).unwrap()).abs() < 5e-3);
    assert_eq!(simulate_specificity(&p, 1000, 9).unwrap(), simulate_specificity(&p, 1000, 9).unwrap());
}

#[test]
fn symmetric_keywords_give_matching_rows() {
    let kw = ["autism", "adhd"];
    let mut g = common::rng(7);
    let model = common::TopicModel::new(7);
    let mut recs = Vec::new();
    for i in 0..1500 {
        let body = model.body(&model.topic, &mut g).join(" ");
        recs.push(TweetRecord::new(format!("a{i}"), &format!("autism {body}")).unwrap());
        recs.push(TweetRecord::new(format!("b{i}"), &format!("adhd {body}")).unwrap());
        let ctrl = model.body(&model.control, &mut g).join(" ");
        recs.push(TweetRecord::new(format!("c{i}"), &ctrl).unwrap());
    }
    let k = KeywordSet::new(kw).unwrap();
    let (t, c) = split_corpus(recs, &k).unwrap();
    let pair = CorpusPair::from_records(&t.records, &c.records, &PipelineConfig::default(), &k);
    let cfg = ExperimentConfig { keywords: k.clone(), ..ExperimentConfig::default() };
    let r = run_loko::<f64>(&pair, &cfg).unwrap();
    assert_eq!(r.rows.len(), 2);
    let (a, b) = (&r.rows[0], &r.rows[1]);
    assert!((a.acc_heldout_keyword.unwrap() - b.acc_heldout_keyword.unwrap()).abs() <= 0.03);
    assert!((a.acc_topic_test - b.acc_topic_test).abs() <= 0.03);
    assert!((a.acc_control_test - b.acc_control_test).abs() <= 0.03);
}

#[test]
fn unmatched_keyword_reports_null() {
    let recs = common::two_topic_records(400, &["autism", "adhd"], 8);
    let kw = ["autism", "adhd", "aspie"];
    let k = KeywordSet::new(kw).unwrap();
    let (t, c) = split_corpus(recs, &k).unwrap();
    let pair = CorpusPair::from_records(&t.records, &c.records, &PipelineConfig::default(), &k);
    let cfg = ExperimentConfig { keywords: k.clone(), ..ExperimentConfig::default() };
    let r = run_loko::<f64>(&pair, &cfg).unwrap();
    let aspie = r.rows.iter().find(|row| row.keyword == "aspie").unwrap();
    assert_eq!(aspie.acc_heldout_keyword, None);
}

#[test]
fn report_with_no_results_is_manifest_only() {
    let dir = tempdir();
    let paths = emit_report(&Report::new(Manifest::new("none", &ExperimentConfig::default())), &dir).unwrap();
    assert_eq!(paths.len(), 1);
    assert!(paths[0].ends_with("manifest.json"));
    let m = read_manifest(&paths[0]).unwrap();
    assert_eq!(m.config, ExperimentConfig::default());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unwritable_report_path_is_io_error() {
    let file = tempdir().join("blocker");
    std::fs::create_dir_all(file.parent().unwrap()).unwrap();
    std::fs::write(&file, "x").unwrap();
    let e = emit_report(&Report::new(Manifest::new("x", &ExperimentConfig::default())), &file.join("sub")).unwrap_err();
    assert!(matches!(e, tweetmine::Error::Io { .. }), "{e:?}");
    std::fs::remove_dir_all(file.parent().unwrap()).unwrap();
}

#[test]
fn corpus_hash_tracks_content() {
    let mut recs = common::two_topic_records(50, &KEYWORDS, 9);
    let h = corpus_hash(&recs);
    assert_eq!(h, corpus_hash(&recs));
    recs[17].text.push('!');
    assert_ne!(h, corpus_hash(&recs));
}

#[test]
fn config_round_trips_through_toml() {
    let cfg = ExperimentConfig { seed: 7, vocab_size: 99, lambdas: vec![0.5, 2.0], ..ExperimentConfig::default() };
    let back = ExperimentConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
    assert_eq!(back, cfg);
    let e = ExperimentConfig::from_toml_str("split_fraction = 1.5").unwrap_err();
    assert_eq!(e.class(), ErrorClass::Configuration);
    let e = ExperimentConfig::from_toml_str("no_such_key = 1").unwrap_err();
    assert_eq!(e.class(), ErrorClass::Configuration);
}

#[test]
fn labels_follow_corpus() {
    let pair = pair_from(common::two_topic_records(100, &KEYWORDS, 10));
    let fit = FittedPipeline::<f64>::fit(&pair, &ks(), &ExperimentConfig::default()).unwrap();
    assert_eq!(fit.train.class_counts(), [pair.control.len(), pair.topic.len()]);
    assert!(fit.train.labels[..pair.topic.len()].iter().all(|l| *l == Label::Topic));
}

fn tempdir() -> std::path::PathBuf {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static N: AtomicUsize = AtomicUsize::new(0);
    std::env::temp_dir().join(format!("tweetmine-exp-{}-{}", std::process::id(), N.fetch_add(1, Ordering::Relaxed)))
}
