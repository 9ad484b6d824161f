//! Keyword-bootstrapped tweet corpus analytics.
//!
//! Tweets are split into a topic corpus and a control corpus by keyword
//! prefix matching, preprocessed into stemmed terms, summarized statistically
//! and turned into bag-of-terms features for naive Bayes and logistic
//! regression classifiers.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix it to `f64`.

pub mod corpstats;
pub mod error;
pub mod experiments;
pub mod features;
pub mod ingest;
pub mod models;
pub mod scalar;
pub mod textprep;

pub use error::{Diagnostics, Error, ErrorClass, Result};
pub use scalar::Scalar;

pub type SparseVector64 = features::SparseVector<f64>;
pub type LabeledDataset64 = features::LabeledDataset<f64>;
pub type NbModel64 = models::NbModel<f64>;
pub type LinearModel64 = models::LinearModel<f64>;
pub type TrainedModel64 = models::TrainedModel<f64>;
pub type TTestResult64 = corpstats::TTestResult<f64>;
pub type ZipfFit64 = corpstats::ZipfFit<f64>;
pub type LengthSummary64 = corpstats::LengthSummary<f64>;
