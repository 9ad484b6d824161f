//! Rank-frequency, length, discriminativeness and part-of-speech statistics.

mod discrim;
mod lengths;
mod pos;
mod rank;
pub mod special;
mod ttest;
mod zipf;

pub use discrim::{discriminativeness, DiscriminativenessTable, TermScore};
pub use lengths::{length_summary, length_t_test, LengthSummary};
pub use pos::{
    pos_length_profile, pos_proportions, pos_t_test, LengthBin, PosAnnotatedDoc, PosCorpus, Tagset, ARK_NOUN,
    ARK_TAGS,
};
pub use rank::{hashtag_table, term_table, RankEntry, RankFrequencyTable};
pub(crate) use rank::{count_terms, sorted_counts};
pub use ttest::{t_test, TTestKind, TTestResult};
pub use zipf::{
    default_fractions, log_points, pearson, window, windowed_pearson, zipf_fit, WindowR, ZipfFit, FIT_WINDOW,
};
