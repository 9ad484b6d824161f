mod commands;
mod ctx;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tweetmine::experiments::{emit_report, read_manifest, ClassifierKind, ExperimentConfig, SplitMode};
use tweetmine::features::{Scheme, VocabPolicy};
use tweetmine::ingest::KeywordSet;
use tweetmine::{Error, ErrorClass, Result};

use crate::ctx::Ctx;

#[derive(Parser)]
#[command(name = "tweetmine", version, about = "Keyword-bootstrapped tweet corpus analysis")]
struct Cli {
    /// Seed for splits and simulations.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// TOML experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Overrides for configuration keys.
#[derive(Args, Default)]
struct Overrides {
    /// Comma-separated bootstrap keywords.
    #[arg(long)]
    keywords: Option<String>,
    #[arg(long)]
    policy: Option<String>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    classifier: Option<String>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    split_fraction: Option<f64>,
    #[arg(long)]
    split_mode: Option<String>,
}

/// Directory holding topic/control `.ndjson` or `.tok` files.
#[derive(Args)]
struct DataIn {
    #[arg(long = "in")]
    input: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Read NDJSON tweets, split into topic and control, report counts.
    Ingest {
        /// File, `-` for stdin, or tcp://host:port.
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        all_languages: bool,
        #[command(flatten)]
        o: Overrides,
    },
    /// Tokenize topic.ndjson and control.ndjson into .tok files.
    Prep {
        #[command(flatten)]
        d: DataIn,
        #[arg(long)]
        stopwords: Option<String>,
        #[arg(long)]
        min_len: Option<usize>,
        #[arg(long)]
        no_stem: bool,
    },
    /// Rank-frequency table and log-log fit.
    Zipf {
        #[command(flatten)]
        d: DataIn,
        /// topic, control or all.
        #[arg(long, default_value = "all")]
        corpus: String,
    },
    /// Length histograms and a t-test on log lengths.
    Lengths {
        #[command(flatten)]
        d: DataIn,
        #[arg(long)]
        student: bool,
    },
    /// Frequent and discriminative terms.
    Freq {
        #[command(flatten)]
        d: DataIn,
        #[arg(long, default_value_t = 100)]
        top: usize,
        #[command(flatten)]
        o: Overrides,
    },
    /// Frequent hashtags.
    Hashtags {
        #[command(flatten)]
        d: DataIn,
        #[arg(long, default_value_t = 100)]
        top: usize,
        #[command(flatten)]
        o: Overrides,
    },
    /// Part-of-speech proportions of two tagged corpora.
    PosStats {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Comma-separated tags.
        #[arg(long, default_value = "N")]
        tags: String,
        #[arg(long)]
        student: bool,
    },
    /// Build a vocabulary.
    Vocab {
        #[command(flatten)]
        d: DataIn,
        #[command(flatten)]
        o: Overrides,
    },
    /// Train one classifier and save it.
    Train {
        #[command(flatten)]
        d: DataIn,
        #[command(flatten)]
        o: Overrides,
    },
    /// Score a saved model, run the condition experiment, or the full grid.
    Evaluate {
        #[command(flatten)]
        d: DataIn,
        #[arg(long)]
        model: Option<String>,
        /// Score every document instead of the test split.
        #[arg(long)]
        all: bool,
        /// Directory of a second condition used as control.
        #[arg(long)]
        condition: Option<String>,
        #[arg(long)]
        condition_keywords: Option<String>,
        #[command(flatten)]
        o: Overrides,
    },
    /// L1 logistic regression over the lambda grid.
    LassoSweep {
        #[command(flatten)]
        d: DataIn,
        #[arg(long, default_value_t = 20)]
        top: usize,
        #[command(flatten)]
        o: Overrides,
    },
    /// Leave-one-keyword-out.
    Loko {
        #[command(flatten)]
        d: DataIn,
        #[command(flatten)]
        o: Overrides,
    },
    /// Apparent specificity under a confounding condition.
    Confound {
        #[arg(long)]
        p_m: f64,
        #[arg(long)]
        p_n: f64,
        #[arg(long)]
        rho_m: f64,
        #[arg(long, default_value_t = 1_000_000)]
        draws: u64,
    },
    /// Rerun the command recorded in a manifest and compare outputs.
    Report {
        #[arg(long)]
        manifest: PathBuf,
    },
}

fn parse<T: std::str::FromStr<Err = Error>>(v: &Option<String>) -> Result<Option<T>> {
    v.as_deref().map(str::parse).transpose()
}

fn apply(o: &Overrides, cfg: &mut ExperimentConfig) -> Result<()> {
    if let Some(k) = &o.keywords {
        cfg.keywords = KeywordSet::parse_list(k)?;
    }
    if let Some(p) = parse::<VocabPolicy>(&o.policy)? {
        cfg.vocab_policy = p;
    }
    if let Some(s) = parse::<Scheme>(&o.scheme)? {
        cfg.scheme = s;
    }
    if let Some(c) = parse::<ClassifierKind>(&o.classifier)? {
        cfg.classifier = c;
    }
    if let Some(m) = parse::<SplitMode>(&o.split_mode)? {
        cfg.split_mode = m;
    }
    cfg.vocab_size = o.size.unwrap_or(cfg.vocab_size);
    cfg.c = o.c.unwrap_or(cfg.c);
    cfg.lambda = o.lambda.unwrap_or(cfg.lambda);
    cfg.split_fraction = o.split_fraction.unwrap_or(cfg.split_fraction);
    Ok(())
}

fn put(inputs: &mut BTreeMap<String, String>, key: &str, v: Option<impl ToString>) {
    if let Some(v) = v {
        inputs.insert(key.to_string(), v.to_string());
    }
}

fn put_flag(inputs: &mut BTreeMap<String, String>, key: &str, on: bool) {
    put(inputs, key, on.then_some("true"));
}

/// Command name and string inputs; config overrides are applied to `cfg`.
fn describe(cmd: &Command, cfg: &mut ExperimentConfig) -> Result<(&'static str, BTreeMap<String, String>)> {
    let mut m = BTreeMap::new();
    let data = |m: &mut BTreeMap<String, String>, d: &DataIn| put(m, "in", d.input.as_ref());
    let name = match cmd {
        Command::Ingest { input, all_languages, o } => {
            apply(o, cfg)?;
            put(&mut m, "in", Some(input));
            put_flag(&mut m, "all-languages", *all_languages);
            "ingest"
        }
        Command::Prep { d, stopwords, min_len, no_stem } => {
            data(&mut m, d);
            put(&mut m, "stopwords", stopwords.as_ref());
            put(&mut m, "min-len", *min_len);
            put_flag(&mut m, "no-stem", *no_stem);
            "prep"
        }
        Command::Zipf { d, corpus } => {
            data(&mut m, d);
            put(&mut m, "corpus", Some(corpus));
            "zipf"
        }
        Command::Lengths { d, student } => {
            data(&mut m, d);
            put_flag(&mut m, "student", *student);
            "lengths"
        }
        Command::Freq { d, top, o } => {
            apply(o, cfg)?;
            data(&mut m, d);
            put(&mut m, "top", Some(top));
            "freq"
        }
        Command::Hashtags { d, top, o } => {
            apply(o, cfg)?;
            data(&mut m, d);
            put(&mut m, "top", Some(top));
            "hashtags"
        }
        Command::PosStats { a, b, tags, student } => {
            put(&mut m, "a", Some(a));
            put(&mut m, "b", Some(b));
            put(&mut m, "tags", Some(tags));
            put_flag(&mut m, "student", *student);
            "pos-stats"
        }
        Command::Vocab { d, o } => {
            apply(o, cfg)?;
            data(&mut m, d);
            "vocab"
        }
        Command::Train { d, o } => {
            apply(o, cfg)?;
            data(&mut m, d);
            "train"
        }
        Command::Evaluate { d, model, all, condition, condition_keywords, o } => {
            apply(o, cfg)?;
            data(&mut m, d);
            put(&mut m, "model", model.as_ref());
            put_flag(&mut m, "all", *all);
            put(&mut m, "condition", condition.as_ref());
            put(&mut m, "condition-keywords", condition_keywords.as_ref());
            "evaluate"
        }
        Command::LassoSweep { d, top, o } => {
            apply(o, cfg)?;
            data(&mut m, d);
            put(&mut m, "top", Some(top));
            "lasso-sweep"
        }
        Command::Loko { d, o } => {
            apply(o, cfg)?;
            data(&mut m, d);
            "loko"
        }
        Command::Confound { p_m, p_n, rho_m, draws } => {
            put(&mut m, "p-m", Some(p_m));
            put(&mut m, "p-n", Some(p_n));
            put(&mut m, "rho-m", Some(rho_m));
            put(&mut m, "draws", Some(draws));
            "confound"
        }
        Command::Report { .. } => "report",
    };
    Ok((name, m))
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    match path {
        None => Ok(ExperimentConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            ExperimentConfig::from_toml_str(&text)
        }
    }
}

fn run_ctx(mut ctx: Ctx, out: &Path) -> Result<Vec<PathBuf>> {
    ctx.config.validate()?;
    let report = commands::execute(&mut ctx)?;
    emit_report(&report, out)
}

/// Replays a manifest into `out` and compares every output with the file
/// next to the manifest. Returns the names that differ.
fn replay(manifest_path: &Path, out: &Path) -> Result<Vec<String>> {
    let m = read_manifest(manifest_path)?;
    if !commands::COMMANDS.contains(&m.command.as_str()) {
        return Err(Error::schema("command", format!("unknown command `{}`", m.command)));
    }
    let src = manifest_path.parent().unwrap_or(Path::new("."));
    if fs::canonicalize(src).ok() == fs::canonicalize(out).ok() {
        return Err(Error::Config("--out must differ from the manifest's directory".into()));
    }
    let mut ctx = Ctx::new(&m.command, m.inputs.clone(), m.config.clone());
    let report = commands::execute(&mut ctx)?;
    for (path, hash) in &m.corpus_hashes {
        match ctx.hashes.get(path) {
            Some(h) if h == hash => {}
            _ => return Err(Error::schema("corpus_hashes", format!("input `{path}` changed since the recorded run"))),
        }
    }
    emit_report(&report, out)?;
    let mut differs = Vec::new();
    for name in &m.outputs {
        let old = fs::read(src.join(name)).map_err(|e| Error::io(src.join(name), e))?;
        let new = fs::read(out.join(name)).map_err(|e| Error::io(out.join(name), e))?;
        let same = old == new;
        println!("{} {name}", if same { "same" } else { "differs" });
        if !same {
            differs.push(name.clone());
        }
    }
    Ok(differs)
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = load_config(cli.config.as_deref())?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    if let Command::Report { manifest } = &cli.command {
        let differs = replay(manifest, &out)?;
        if !differs.is_empty() {
            return Err(Error::Invariant(format!("outputs differ: {}", differs.join(", "))));
        }
        return Ok(());
    }
    let (name, inputs) = describe(&cli.command, &mut cfg)?;
    for p in run_ctx(Ctx::new(name, inputs, cfg), &out)? {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e.class() {
                ErrorClass::Configuration => ExitCode::from(2),
                ErrorClass::Data => ExitCode::from(3),
            }
        }
    }
}
