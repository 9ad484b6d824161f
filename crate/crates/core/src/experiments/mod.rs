//! Experimental protocols: seeded splits, keyword stripping, the
//! classification grid, condition-vs-condition runs, leave-one-keyword-out,
//! the confound calculator and report output.

mod config;
mod confound;
mod pipeline;
mod protocols;
mod report;
mod split;

pub use config::{ClassifierKind, ExperimentConfig, SplitMode, DEFAULT_KEYWORDS};
pub use confound::{apparent_specificity, simulate_specificity, ConfoundParams};
pub use pipeline::{strip_keywords, train_classifier, CorpusPair, ExpDoc, FittedPipeline};
pub use protocols::{
    run_basic_classification, run_condition_experiment, run_lasso_sweep, run_loko, BasicCell, LokoReport, LokoRow,
    SweepResult,
};
pub use report::{
    basic_table, bytes_hash, confound_table, confusion_rows, corpus_hash, emit_report, loko_table, read_manifest, sweep_tables,
    Manifest, PlotData, Report, Table, CONFUSION_HEADER,
};
pub use split::{rng_for, split_train_test};
