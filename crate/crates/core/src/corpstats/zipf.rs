use serde::{Deserialize, Serialize};

use super::rank::RankFrequencyTable;
use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Scalar};

/// `(ln rank, ln count)` for every table entry, in rank order.
pub fn log_points<F: Scalar>(table: &RankFrequencyTable) -> Vec<(F, F)> {
    table
        .entries
        .iter()
        .map(|e| {
            (
                F::from_usize_lossy(e.rank).ln(),
                F::from_u64(e.count).expect("count representable").ln(),
            )
        })
        .collect()
}

fn check_fraction<F: Scalar>(fraction: F) -> Result<()> {
    if !(fraction > F::zero() && fraction <= F::one()) {
        return Err(Error::Domain(format!("window fraction {fraction} not in (0, 1]")));
    }
    Ok(())
}

/// Points whose ln-rank lies in the window of width `fraction * ln V`
/// centred on `ln V / 2` (bounds inclusive).
pub fn window<F: Scalar>(points: &[(F, F)], fraction: F) -> Result<Vec<(F, F)>> {
    check_fraction(fraction)?;
    let Some(&(max_x, _)) = points.last() else {
        return Ok(Vec::new());
    };
    let half = F::lit(0.5);
    let centre = max_x * half;
    let half_width = fraction * max_x * half;
    let slack = F::epsilon() * F::lit(16.0) * (F::one() + max_x);
    let (lo, hi) = (centre - half_width - slack, centre + half_width + slack);
    Ok(points.iter().copied().filter(|&(x, _)| x >= lo && x <= hi).collect())
}

/// Pearson's r over paired samples.
pub fn pearson<F: Scalar>(points: &[(F, F)]) -> Result<F> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 points for a correlation, got {}",
            points.len()
        )));
    }
    let n = F::from_usize_lossy(points.len());
    let xs: Vec<F> = points.iter().map(|p| p.0).collect();
    let ys: Vec<F> = points.iter().map(|p| p.1).collect();
    let (mx, my) = (pairwise_sum(&xs) / n, pairwise_sum(&ys) / n);
    let sxy: Vec<F> = points.iter().map(|&(x, y)| (x - mx) * (y - my)).collect();
    let sxx: Vec<F> = xs.iter().map(|&x| (x - mx) * (x - mx)).collect();
    let syy: Vec<F> = ys.iter().map(|&y| (y - my) * (y - my)).collect();
    let (sxy, sxx, syy) = (pairwise_sum(&sxy), pairwise_sum(&sxx), pairwise_sum(&syy));
    if sxx == F::zero() || syy == F::zero() {
        return Err(Error::UndefinedCorrelation);
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(r.max(-F::one()).min(F::one()))
}

/// Pearson's r of (ln rank, ln count) inside the centred ln-rank window.
pub fn windowed_pearson<F: Scalar>(table: &RankFrequencyTable, fraction: F) -> Result<F> {
    pearson(&window(&log_points(table), fraction)?)
}

/// Least-squares line `y = slope * x + intercept`.
fn least_squares<F: Scalar>(points: &[(F, F)]) -> Result<(F, F)> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 points to fit, got {}",
            points.len()
        )));
    }
    let n = F::from_usize_lossy(points.len());
    let xs: Vec<F> = points.iter().map(|p| p.0).collect();
    let ys: Vec<F> = points.iter().map(|p| p.1).collect();
    let (mx, my) = (pairwise_sum(&xs) / n, pairwise_sum(&ys) / n);
    let sxy: Vec<F> = points.iter().map(|&(x, y)| (x - mx) * (y - my)).collect();
    let sxx: Vec<F> = xs.iter().map(|&x| (x - mx) * (x - mx)).collect();
    let sxx = pairwise_sum(&sxx);
    if sxx == F::zero() {
        return Err(Error::UndefinedCorrelation);
    }
    let slope = pairwise_sum(&sxy) / sxx;
    Ok((slope, my - slope * mx))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct WindowR<F: Scalar> {
    pub fraction: F,
    pub r: F,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ZipfFit<F: Scalar> {
    /// Slope of ln count on ln rank; negative for Zipfian decay.
    pub exponent: F,
    pub intercept: F,
    /// Ordered as requested.
    pub pearson_by_window: Vec<WindowR<F>>,
}

/// Fraction of the ln-rank range used for the exponent fit.
pub const FIT_WINDOW: f64 = 0.6;

/// Exponent from the central 60% ln-rank window plus r at each requested width.
pub fn zipf_fit<F: Scalar>(table: &RankFrequencyTable, fractions: &[F]) -> Result<ZipfFit<F>> {
    let points = log_points::<F>(table);
    let (exponent, intercept) = least_squares(&window(&points, F::lit(FIT_WINDOW))?)?;
    let pearson_by_window = fractions
        .iter()
        .map(|&fraction| {
            Ok(WindowR {
                fraction,
                r: pearson(&window(&points, fraction)?)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ZipfFit {
        exponent,
        intercept,
        pearson_by_window,
    })
}

/// `{0.2, 0.3, ..., 1.0}`.
pub fn default_fractions<F: Scalar>() -> Vec<F> {
    (2..=10).map(|i| F::from_usize_lossy(i) / F::lit(10.0)).collect()
}
