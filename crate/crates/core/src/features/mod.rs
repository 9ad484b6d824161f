//! Vocabulary policies and sparse tweet representations.

mod dataset;
mod vector;
mod vocab;

pub use dataset::{featurize_corpus, featurize_with_idf, LabeledDataset};
pub use vector::{vectorize, IdfTable, IdfWeighting, Scheme, SparseVector};
pub use vocab::{build_vocabulary, VocabPolicy, Vocabulary};
