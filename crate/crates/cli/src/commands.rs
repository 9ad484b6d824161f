//! One function per subcommand. Each builds a report from a [`Ctx`].

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;
use tweetmine::corpstats::{
    default_fractions, hashtag_table, length_summary, length_t_test, log_points, pos_length_profile, pos_t_test,
    term_table, zipf_fit, DiscriminativenessTable, PosCorpus, RankFrequencyTable, TTestKind, TTestResult, Tagset,
};
use tweetmine::experiments::{
    basic_table, confound_table, confusion_rows, corpus_hash, loko_table, run_basic_classification,
    run_condition_experiment, run_lasso_sweep, run_loko, simulate_specificity, split_train_test, strip_keywords,
    sweep_tables, ClassifierKind, ConfoundParams, ExpDoc, ExperimentConfig, FittedPipeline, Manifest, PlotData,
    Report, Table, CONFUSION_HEADER,
};
use tweetmine::experiments::apparent_specificity;
use tweetmine::features::{build_vocabulary, featurize_with_idf, IdfTable, Vocabulary};
use tweetmine::ingest::{corpus_stats, split_corpus, CorpusStats, KeywordSet, Label};
use tweetmine::models::{evaluate as evaluate_model, top_coefficients, TrainedModel};
use tweetmine::textprep::{preprocess, KeywordFilter, PipelineConfig, TokenDoc};
use tweetmine::{Error, Result};

use crate::ctx::{records_from_bytes, Ctx};

pub const COMMANDS: [&str; 13] = [
    "ingest",
    "prep",
    "zipf",
    "lengths",
    "freq",
    "hashtags",
    "pos-stats",
    "vocab",
    "train",
    "evaluate",
    "lasso-sweep",
    "loko",
    "confound",
];

/// Everything `evaluate --model` needs from a `train` run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub config: ExperimentConfig,
    pub vocabulary: Vocabulary,
    pub idf: IdfTable,
    pub model: TrainedModel<f64>,
}

pub fn execute(ctx: &mut Ctx) -> Result<Report> {
    let mut report = match ctx.command.as_str() {
        "ingest" => ingest(ctx),
        "prep" => prep(ctx),
        "zipf" => zipf(ctx),
        "lengths" => lengths(ctx),
        "freq" => freq(ctx),
        "hashtags" => hashtags(ctx),
        "pos-stats" => pos_stats(ctx),
        "vocab" => vocab(ctx),
        "train" => train(ctx),
        "evaluate" => evaluate(ctx),
        "lasso-sweep" => lasso_sweep(ctx),
        "loko" => loko(ctx),
        "confound" => confound(ctx),
        other => Err(Error::Config(format!("unknown command `{other}`"))),
    }?;
    report.manifest.inputs = ctx.inputs.clone();
    report.manifest.corpus_hashes = ctx.hashes.clone();
    Ok(report)
}

fn new_report(ctx: &Ctx) -> Report {
    Report::new(Manifest::new(ctx.command.clone(), &ctx.config))
}

fn token_docs(docs: &[ExpDoc]) -> Vec<TokenDoc> {
    docs.iter().map(|d| TokenDoc::new(d.id.clone(), d.tokens.clone())).collect()
}

fn t_kind(ctx: &Ctx) -> TTestKind {
    if ctx.flag("student") {
        TTestKind::Student
    } else {
        TTestKind::Welch
    }
}

fn stats_row(label: &str, s: &CorpusStats) -> Vec<String> {
    [
        label.to_string(),
        s.n_total.to_string(),
        s.n_original.to_string(),
        s.n_retweets.to_string(),
        s.n_with_hashtags.to_string(),
        s.n_geo.to_string(),
        s.n_with_urls.to_string(),
        s.n_replies.to_string(),
        s.n_with_mentions.to_string(),
        s.n_unique_users.to_string(),
    ]
    .to_vec()
}

fn ndjson(records: &[tweetmine::ingest::TweetRecord]) -> Vec<u8> {
    records.iter().flat_map(|r| (r.to_ndjson_line() + "\n").into_bytes()).collect()
}

fn ingest(ctx: &mut Ctx) -> Result<Report> {
    let spec = ctx.require("in")?.to_string();
    let bytes = ctx.read_source(&spec)?;
    let (records, dropped) = records_from_bytes(&bytes, !ctx.flag("all-languages"))?;
    let (topic, control) = split_corpus(records, &ctx.config.keywords)?;
    let mut report = new_report(ctx);
    let mut t = Table::new(
        "corpus_stats",
        [
            "corpus",
            "n_total",
            "n_original",
            "n_retweets",
            "n_with_hashtags",
            "n_geo",
            "n_with_urls",
            "n_replies",
            "n_with_mentions",
            "n_unique_users",
        ],
    );
    t.rows.push(stats_row("topic", &corpus_stats(&topic.records)));
    t.rows.push(stats_row("control", &corpus_stats(&control.records)));
    report.tables.push(t);
    report.json.push((
        "ingest".into(),
        json!({
            "dropped_non_english": dropped,
            "topic_hash": corpus_hash(&topic.records),
            "control_hash": corpus_hash(&control.records),
        }),
    ));
    report.files.push(("topic.ndjson".into(), ndjson(&topic.records)));
    report.files.push(("control.ndjson".into(), ndjson(&control.records)));
    Ok(report)
}

fn prep(ctx: &mut Ctx) -> Result<Report> {
    let mut cfg = PipelineConfig::default();
    if let Some(path) = ctx.get("stopwords").map(str::to_string) {
        let text = String::from_utf8_lossy(&ctx.read(Path::new(&path))?).into_owned();
        cfg = cfg.with_stopword_text(&text);
    }
    cfg.min_token_len = ctx.parse_or("min-len", cfg.min_token_len)?;
    cfg.stem_enabled = !ctx.flag("no-stem");
    cfg.validate()?;
    let (topic, control) = ctx.load_records()?;
    let mut report = new_report(ctx);
    let mut t = Table::new("prep_summary", ["corpus", "docs", "tokens", "empty_docs"]);
    for (name, recs) in [("topic", &topic), ("control", &control)] {
        let docs: Vec<TokenDoc> = recs.iter().map(|r| preprocess(r, &cfg)).collect();
        let tokens: usize = docs.iter().map(TokenDoc::len).sum();
        let empty = docs.iter().filter(|d| d.is_empty()).count();
        t.push([name.to_string(), docs.len().to_string(), tokens.to_string(), empty.to_string()]);
        let text: String = docs.iter().map(|d| d.to_line() + "\n").collect();
        report.files.push((format!("{name}.tok"), text.into_bytes()));
    }
    report.tables.push(t);
    Ok(report)
}

fn zipf(ctx: &mut Ctx) -> Result<Report> {
    let keywords = ctx.config.keywords.clone();
    let pair = ctx.load_corpora(&keywords)?;
    let which = ctx.get("corpus").unwrap_or("all").to_string();
    let docs: Vec<TokenDoc> = match which.as_str() {
        "topic" => token_docs(&pair.topic),
        "control" => token_docs(&pair.control),
        "all" => token_docs(&pair.topic).into_iter().chain(token_docs(&pair.control)).collect(),
        other => return Err(Error::Config(format!("--corpus must be topic, control or all, got `{other}`"))),
    };
    let table = RankFrequencyTable::from_docs(&docs)?;
    let fit = zipf_fit::<f64>(&table, &default_fractions())?;
    let mut report = new_report(ctx);
    let mut windows = Table::new("zipf_windows", ["fraction", "r", "abs_r"]);
    for w in &fit.pearson_by_window {
        windows.push([w.fraction, w.r, w.r.abs()]);
    }
    let mut rf = Table::new("rank_frequency", ["rank", "term", "count"]);
    for e in &table.entries {
        rf.push([e.rank.to_string(), e.term.clone(), e.count.to_string()]);
    }
    report.tables.extend([windows, rf]);
    report.plots.push(PlotData {
        name: "zipf_points".into(),
        points: log_points::<f64>(&table),
    });
    report.json.push(("zipf".into(), serde_json::to_value(&fit).map_err(json_err)?));
    Ok(report)
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Invariant(e.to_string())
}

fn ttest_json(r: &TTestResult<f64>, kind: TTestKind) -> serde_json::Value {
    json!({ "kind": kind, "t": r.t, "df": r.df, "p": r.p, "mean_a": r.mean_a, "mean_b": r.mean_b })
}

fn lengths(ctx: &mut Ctx) -> Result<Report> {
    let keywords = ctx.config.keywords.clone();
    let pair = ctx.load_corpora(&keywords)?;
    let (topic, control) = (token_docs(&pair.topic), token_docs(&pair.control));
    let (st, sc) = (length_summary::<f64>(&topic), length_summary::<f64>(&control));
    let mut report = new_report(ctx);
    let lens: BTreeSet<usize> = st.histogram.keys().chain(sc.histogram.keys()).copied().collect();
    let mut hist = Table::new("length_histogram", ["length", "topic", "control"]);
    for l in lens {
        let get = |s: &tweetmine::corpstats::LengthSummary<f64>| s.histogram.get(&l).copied().unwrap_or(0);
        hist.push([l as u64, get(&st), get(&sc)]);
    }
    let mut summary = Table::new("length_summary", ["corpus", "docs", "log_mean", "log_sd"]);
    for (name, docs, s) in [("topic", &topic, &st), ("control", &control, &sc)] {
        let f = |x: Option<f64>| x.map_or_else(String::new, |v| v.to_string());
        summary.push([name.to_string(), docs.len().to_string(), f(s.log_mean), f(s.log_sd)]);
    }
    report.tables.extend([hist, summary]);
    let kind = t_kind(ctx);
    let r = length_t_test::<f64>(&topic, &control, kind)?;
    report.json.push(("length_ttest".into(), ttest_json(&r, kind)));
    Ok(report)
}

fn count_table(name: &str, rows: &[(String, u64)]) -> Table {
    let mut t = Table::new(name, ["rank", "term", "count"]);
    for (i, (term, n)) in rows.iter().enumerate() {
        t.push([(i + 1).to_string(), term.clone(), n.to_string()]);
    }
    t
}

fn freq(ctx: &mut Ctx) -> Result<Report> {
    let keywords = ctx.config.keywords.clone();
    let pair = ctx.load_corpora(&keywords)?;
    let top: usize = ctx.parse_or("top", 100)?;
    let filter = KeywordFilter::new(&keywords);
    let (topic, control) = (token_docs(&pair.topic), token_docs(&pair.control));
    let all: Vec<TokenDoc> = topic.iter().chain(&control).cloned().collect();
    let mut report = new_report(ctx);
    report.tables.push(count_table("freq_topic", &term_table(&topic, top, &filter)));
    report.tables.push(count_table("freq_control", &term_table(&control, top, &filter)));
    report.tables.push(count_table("freq_overall", &term_table(&all, top, &filter)));
    let strip = |docs: &[TokenDoc]| -> Vec<TokenDoc> { docs.iter().map(|d| strip_keywords(d, &filter)).collect() };
    let disc = DiscriminativenessTable::<f64>::new(&strip(&topic), &strip(&control));
    let mut t = Table::new("discriminative", ["rank", "term", "topic_count", "control_count", "log_ratio"]);
    for (i, s) in disc.ranked().into_iter().take(top).enumerate() {
        t.push([
            (i + 1).to_string(),
            s.term,
            s.topic_count.to_string(),
            s.control_count.to_string(),
            s.log_ratio.to_string(),
        ]);
    }
    report.tables.push(t);
    Ok(report)
}

fn hashtags(ctx: &mut Ctx) -> Result<Report> {
    let (topic, control) = ctx.load_records()?;
    let top: usize = ctx.parse_or("top", 100)?;
    let mut report = new_report(ctx);
    let ks = &ctx.config.keywords;
    report.tables.push(count_table("hashtags_topic", &hashtag_table(&topic, top, ks)));
    report.tables.push(count_table("hashtags_control", &hashtag_table(&control, top, ks)));
    Ok(report)
}

fn pos_stats(ctx: &mut Ctx) -> Result<Report> {
    let (pa, pb) = (ctx.require("a")?.to_string(), ctx.require("b")?.to_string());
    let a = PosCorpus::read(ctx.read(Path::new(&pa))?.as_slice(), Tagset::ark())?;
    let b = PosCorpus::read(ctx.read(Path::new(&pb))?.as_slice(), Tagset::ark())?;
    let tags: Vec<String> = ctx.get("tags").unwrap_or("N").split(',').map(|s| s.trim().to_string()).collect();
    let kind = t_kind(ctx);
    let mut report = new_report(ctx);
    let mut tt = Table::new("pos_ttest", ["tag", "kind", "t", "df", "p", "mean_a", "mean_b"]);
    let mut prof = Table::new("pos_profile", ["group", "tag", "length", "n", "mean", "sd", "se"]);
    for tag in &tags {
        if !a.tagset.contains(tag) {
            return Err(Error::Config(format!("tag `{tag}` is not in the {} tagset", a.tagset.name)));
        }
        let r = pos_t_test::<f64>(&a, &b, tag, kind)?;
        tt.push([
            tag.clone(),
            format!("{kind:?}").to_lowercase(),
            r.t.to_string(),
            r.df.to_string(),
            r.p.to_string(),
            r.mean_a.to_string(),
            r.mean_b.to_string(),
        ]);
        for (group, c) in [("a", &a), ("b", &b)] {
            for bin in pos_length_profile::<f64>(c, tag)? {
                prof.push([
                    group.to_string(),
                    tag.clone(),
                    bin.length.to_string(),
                    bin.n.to_string(),
                    bin.mean.to_string(),
                    bin.sd.to_string(),
                    bin.se.to_string(),
                ]);
            }
        }
    }
    report.tables.extend([tt, prof]);
    Ok(report)
}

fn vocab(ctx: &mut Ctx) -> Result<Report> {
    let keywords = ctx.config.keywords.clone();
    let pair = ctx.load_corpora(&keywords)?;
    let cfg = &ctx.config;
    let v = build_vocabulary(
        &token_docs(&pair.topic),
        &token_docs(&pair.control),
        cfg.vocab_policy,
        cfg.vocab_size,
        &cfg.keywords,
    )?;
    let mut report = new_report(ctx);
    report.json.push((
        "vocab_info".into(),
        json!({ "policy": v.policy(), "size": v.len(), "truncated": v.truncated(), "hash": v.hash() }),
    ));
    report.files.push(("vocab.txt".into(), v.to_text().into_bytes()));
    Ok(report)
}

fn confusion_table(name: &str, classifier: ClassifierKind, cfg: &ExperimentConfig, m: &tweetmine::models::ConfusionMatrix2) -> Table {
    let mut t = Table::new(name, CONFUSION_HEADER);
    t.rows.extend(confusion_rows(classifier.as_str(), cfg.scheme.as_str(), m));
    t
}

fn train(ctx: &mut Ctx) -> Result<Report> {
    let keywords = ctx.config.keywords.clone();
    let pair = ctx.load_corpora(&keywords)?;
    let cfg = ctx.config.clone();
    let (train, test) = split_train_test(&pair, cfg.split_fraction, cfg.seed, cfg.split_mode)?;
    let fitted = FittedPipeline::<f64>::fit(&train, &cfg.keywords, &cfg)?;
    let m = fitted.evaluate(&test.topic, &test.control)?;
    let mut report = new_report(ctx);
    report.tables.push(confusion_table("confusion", cfg.classifier, &cfg, &m));
    if let TrainedModel::Linear(lm) = &fitted.model {
        let mut t = Table::new("top_terms", ["rank", "term", "weight"]);
        for (i, (term, w)) in top_coefficients(lm, &fitted.vocab, 20)?.into_iter().enumerate() {
            t.push([(i + 1).to_string(), term, w.to_string()]);
        }
        report.tables.push(t);
        report.json.push(("diagnostics".into(), serde_json::to_value(lm.diagnostics).map_err(json_err)?));
    }
    let artifact = ModelArtifact {
        config: cfg,
        vocabulary: (*fitted.vocab).clone(),
        idf: fitted.idf.clone(),
        model: fitted.model.clone(),
    };
    let text = serde_json::to_string_pretty(&artifact).map_err(json_err)?;
    report.files.push(("model.json".into(), format!("{text}\n").into_bytes()));
    report.files.push(("vocab.txt".into(), fitted.vocab.to_text().into_bytes()));
    Ok(report)
}

fn evaluate(ctx: &mut Ctx) -> Result<Report> {
    if let Some(path) = ctx.get("model").map(str::to_string) {
        return evaluate_artifact(ctx, Path::new(&path));
    }
    let keywords = ctx.config.keywords.clone();
    let pair = ctx.load_corpora(&keywords)?;
    if let Some(dir) = ctx.get("condition").map(str::to_string) {
        let other_ks = KeywordSet::parse_list(ctx.require("condition-keywords")?)?;
        let mut other_ctx = Ctx::new("evaluate", [("in".to_string(), dir)].into(), ctx.config.clone());
        let other = other_ctx.load_corpora(&other_ks)?;
        ctx.hashes.extend(other_ctx.hashes);
        let m = run_condition_experiment::<f64>(&pair.topic, &other.topic, &other_ks, &ctx.config)?;
        let mut report = new_report(ctx);
        report.tables.push(confusion_table("condition", ctx.config.classifier, &ctx.config, &m));
        return Ok(report);
    }
    let cells = run_basic_classification::<f64>(&pair, &ctx.config)?;
    let mut report = new_report(ctx);
    report.tables.push(basic_table(&cells));
    Ok(report)
}

/// Scores a saved model on the test half of `--in` (split as in training),
/// or on every document with `--all`.
fn evaluate_artifact(ctx: &mut Ctx, path: &Path) -> Result<Report> {
    let bytes = ctx.read(path)?;
    let art: ModelArtifact = serde_json::from_slice(&bytes).map_err(|e| Error::schema("model", e.to_string()))?;
    let keywords = art.vocabulary.excluded().clone();
    let pair = ctx.load_corpora(&keywords)?;
    let eval_pair = if ctx.flag("all") {
        pair
    } else {
        let c = &art.config;
        split_train_test(&pair, c.split_fraction, c.seed, c.split_mode)?.1
    };
    let filter = KeywordFilter::new(&keywords);
    let mut docs: Vec<TokenDoc> = Vec::new();
    let mut labels = Vec::new();
    for (set, label) in [(&eval_pair.topic, Label::Topic), (&eval_pair.control, Label::Control)] {
        for d in token_docs(set) {
            docs.push(strip_keywords(&d, &filter));
            labels.push(label);
        }
    }
    let ds = featurize_with_idf::<f64>(&docs, &labels, Arc::new(art.vocabulary.clone()), art.config.scheme, art.idf.clone())?;
    let m = evaluate_model(&art.model, &ds)?;
    let mut report = new_report(ctx);
    report.tables.push(confusion_table("confusion", art.config.classifier, &art.config, &m));
    Ok(report)
}

fn lasso_sweep(ctx: &mut Ctx) -> Result<Report> {
    let keywords = ctx.config.keywords.clone();
    let pair = ctx.load_corpora(&keywords)?;
    let top: usize = ctx.parse_or("top", 20)?;
    let r = run_lasso_sweep::<f64>(&pair, &ctx.config, top)?;
    let (s, t) = sweep_tables(&r);
    let mut report = new_report(ctx);
    report.tables.extend([s, t]);
    Ok(report)
}

fn loko(ctx: &mut Ctx) -> Result<Report> {
    let keywords = ctx.config.keywords.clone();
    let pair = ctx.load_corpora(&keywords)?;
    let r = run_loko::<f64>(&pair, &ctx.config)?;
    let mut report = new_report(ctx);
    report.tables.push(loko_table(&r));
    Ok(report)
}

fn confound(ctx: &mut Ctx) -> Result<Report> {
    let num = |k: &str| -> Result<f64> {
        ctx.require(k)?.parse().map_err(|_| Error::Config(format!("--{k} must be a number")))
    };
    let p = ConfoundParams::new(num("p-m")?, num("p-n")?, num("rho-m")?)?;
    let draws: u64 = ctx.parse_or("draws", 1_000_000)?;
    let formula = apparent_specificity(&p)?;
    let sim = if draws > 0 {
        Some((draws, simulate_specificity(&p, draws, ctx.config.seed)?))
    } else {
        None
    };
    let mut report = new_report(ctx);
    report.tables.push(confound_table(&p, formula, sim));
    Ok(report)
}
