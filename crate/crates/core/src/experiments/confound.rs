use rand::Rng;
use serde::{Deserialize, Serialize};

use super::split::rng_for;
use crate::error::{Error, Result};

/// A condition-vs-other classifier applied to a topic-vs-control task.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfoundParams {
    /// Accuracy on condition-related tweets.
    pub p_m: f64,
    /// Accuracy on unrelated tweets.
    pub p_n: f64,
    /// Share of control tweets that are condition-related.
    pub rho_m: f64,
}

impl ConfoundParams {
    pub fn new(p_m: f64, p_n: f64, rho_m: f64) -> Result<Self> {
        let p = ConfoundParams { p_m, p_n, rho_m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p_m", self.p_m), ("p_n", self.p_n), ("rho_m", self.rho_m)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("{name} = {v} is not a probability")));
            }
        }
        Ok(())
    }
}

/// Control-class accuracy: `p_n + (1 - p_m - p_n) * rho_m`.
pub fn apparent_specificity(p: &ConfoundParams) -> Result<f64> {
    p.validate()?;
    Ok(p.p_n + (1.0 - p.p_m - p.p_n) * p.rho_m)
}

/// Monte-Carlo estimate of the same quantity: draw a control tweet
/// (condition-related with probability `rho_m`), then the classifier's
/// verdict, and count how often the verdict is "control".
pub fn simulate_specificity(p: &ConfoundParams, draws: u64, seed: u64) -> Result<f64> {
    p.validate()?;
    if draws == 0 {
        return Err(Error::Domain("need at least one draw".into()));
    }
    let mut rng = rng_for(seed, 7);
    let mut negatives = 0u64;
    for _ in 0..draws {
        let medical = rng.gen::<f64>() < p.rho_m;
        let correct_rate = if medical { p.p_m } else { p.p_n };
        let correct = rng.gen::<f64>() < correct_rate;
        // A medical control tweet counts as control only when misclassified.
        if correct != medical {
            negatives += 1;
        }
    }
    Ok(negatives as f64 / draws as f64)
}
