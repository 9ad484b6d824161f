//! Naive Bayes, L2 and L1 logistic regression, and evaluation.

mod eval;
mod linear;
mod nb;

pub use eval::{evaluate, lasso_sweep, top_coefficients, ConfusionMatrix2, SweepPoint, TrainedModel};
pub use linear::{
    kkt_violation, train_lasso, train_linear, train_logreg, LinearModel, LogisticObjective, Regularization,
    SolverOptions,
};
pub use nb::{train_nb, train_nb_with, EventModel, NbModel};
