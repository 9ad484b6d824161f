//! Inputs of one command invocation and the files it reads.

use std::collections::BTreeMap;
use std::fs;
use std::io::{Cursor, Read};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use tweetmine::experiments::{bytes_hash, CorpusPair, ExpDoc, ExperimentConfig, SplitMode};
use tweetmine::ingest::{open_source, KeywordSet, ReadOptions, RecordReader, TweetRecord};
use tweetmine::textprep::{PipelineConfig, TokenDoc};
use tweetmine::{Error, Result};

/// A command name, its string inputs and the effective configuration.
/// Everything a rerun needs.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub config: ExperimentConfig,
    /// Hashes of every input read, keyed by the path as given.
    pub hashes: BTreeMap<String, String>,
}

impl Ctx {
    pub fn new(command: &str, inputs: BTreeMap<String, String>, config: ExperimentConfig) -> Self {
        Ctx {
            command: command.to_string(),
            inputs,
            config,
            hashes: BTreeMap::new(),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.inputs.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::Config(format!("missing --{key}")))
    }

    pub fn flag(&self, key: &str) -> bool {
        self.get(key) == Some("true")
    }

    pub fn parse_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::Config(format!("invalid value `{v}` for --{key}"))),
        }
    }

    /// Reads a whole file and records its hash.
    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        self.hashes.insert(path.display().to_string(), bytes_hash(&bytes));
        Ok(bytes)
    }

    /// Reads a file, `-` for stdin or `tcp://host:port`, recording the hash.
    pub fn read_source(&mut self, spec: &str) -> Result<Vec<u8>> {
        if spec == "-" || spec.starts_with("tcp://") {
            let mut bytes = Vec::new();
            open_source(spec)?.read_to_end(&mut bytes).map_err(|e| Error::io(spec, e))?;
            self.hashes.insert(spec.to_string(), bytes_hash(&bytes));
            Ok(bytes)
        } else {
            self.read(Path::new(spec))
        }
    }

    pub fn read_records(&mut self, path: &Path, english_only: bool) -> Result<Vec<TweetRecord>> {
        let bytes = self.read(path)?;
        records_from_bytes(&bytes, english_only).map(|(r, _)| r)
    }

    pub fn read_token_docs(&mut self, path: &Path) -> Result<Vec<TokenDoc>> {
        let bytes = self.read(path)?;
        let text = String::from_utf8(bytes).map_err(|e| Error::schema(path.display().to_string(), e.to_string()))?;
        text.lines().filter(|l| !l.is_empty()).map(TokenDoc::from_line).collect()
    }

    fn data_paths(&self, stem: &str, ext: &str) -> Result<PathBuf> {
        if let Some(dir) = self.get("in") {
            return Ok(Path::new(dir).join(format!("{stem}.{ext}")));
        }
        let p = match stem {
            "topic" => &self.config.topic_path,
            _ => &self.config.control_path,
        };
        p.clone()
            .ok_or_else(|| Error::Config("no input: pass --in DIR or set topic_path and control_path".into()))
    }

    /// Loads the corpus pair from `--in DIR` or the configured paths.
    /// Token files are preferred; NDJSON is preprocessed with default
    /// settings. A chronological split needs NDJSON for the timestamps.
    pub fn load_corpora(&mut self, keywords: &KeywordSet) -> Result<CorpusPair> {
        let need_time = self.config.split_mode == SplitMode::Chronological;
        let (tt, ct) = (self.data_paths("topic", "tok")?, self.data_paths("control", "tok")?);
        let configured_tok = self.get("in").is_none() && tt.extension().is_some_and(|e| e == "tok");
        if !need_time && (configured_tok || (self.get("in").is_some() && tt.exists() && ct.exists())) {
            let topic = self.read_token_docs(&tt)?;
            let control = self.read_token_docs(&ct)?;
            return Ok(CorpusPair {
                topic: topic.into_iter().map(|d| ExpDoc::from_tokens(d, keywords)).collect(),
                control: control.into_iter().map(|d| ExpDoc::from_tokens(d, keywords)).collect(),
            });
        }
        let (topic, control) = self.load_records()?;
        Ok(CorpusPair::from_records(&topic, &control, &PipelineConfig::default(), keywords))
    }

    pub fn load_records(&mut self) -> Result<(Vec<TweetRecord>, Vec<TweetRecord>)> {
        let (tp, cp) = (self.data_paths("topic", "ndjson")?, self.data_paths("control", "ndjson")?);
        Ok((self.read_records(&tp, false)?, self.read_records(&cp, false)?))
    }
}

/// Parses NDJSON; returns the records and the number dropped by language.
pub fn records_from_bytes(bytes: &[u8], english_only: bool) -> Result<(Vec<TweetRecord>, usize)> {
    let mut reader = RecordReader::new(Cursor::new(bytes), ReadOptions { english_only });
    let records = reader.by_ref().collect::<Result<Vec<_>>>()?;
    Ok((records, reader.dropped_lang))
}
