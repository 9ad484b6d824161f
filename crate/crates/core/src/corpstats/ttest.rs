use serde::{Deserialize, Serialize};

use super::special::student_t_two_sided;
use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Scalar};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TTestKind {
    /// Unequal variances, Welch–Satterthwaite degrees of freedom.
    #[default]
    Welch,
    /// Pooled variance.
    Student,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TTestResult<F: Scalar> {
    pub t: F,
    pub df: F,
    /// Two-sided.
    pub p: F,
    pub mean_a: F,
    pub mean_b: F,
}

pub(crate) fn mean<F: Scalar>(xs: &[F]) -> F {
    pairwise_sum(xs) / F::from_usize_lossy(xs.len())
}

/// Unbiased sample variance (two-pass).
pub(crate) fn variance<F: Scalar>(xs: &[F], m: F) -> F {
    let sq: Vec<F> = xs.iter().map(|&x| (x - m) * (x - m)).collect();
    pairwise_sum(&sq) / F::from_usize_lossy(xs.len() - 1)
}

/// Two-sample t-test, two-sided.
pub fn t_test<F: Scalar>(a: &[F], b: &[F], kind: TTestKind) -> Result<TTestResult<F>> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "t-test needs at least 2 observations per group (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    let (na, nb) = (F::from_usize_lossy(a.len()), F::from_usize_lossy(b.len()));
    let (ma, mb) = (mean(a), mean(b));
    let (va, vb) = (variance(a, ma), variance(b, mb));
    if va == F::zero() && vb == F::zero() {
        return Err(Error::ZeroVariance);
    }
    let one = F::one();
    let (t, df) = match kind {
        TTestKind::Welch => {
            let (sa, sb) = (va / na, vb / nb);
            let se2 = sa + sb;
            let df = se2 * se2 / (sa * sa / (na - one) + sb * sb / (nb - one));
            ((ma - mb) / se2.sqrt(), df)
        }
        TTestKind::Student => {
            let df = na + nb - F::lit(2.0);
            let pooled = ((na - one) * va + (nb - one) * vb) / df;
            ((ma - mb) / (pooled * (one / na + one / nb)).sqrt(), df)
        }
    };
    Ok(TTestResult {
        t,
        df,
        p: student_t_two_sided(t, df),
        mean_a: ma,
        mean_b: mb,
    })
}
