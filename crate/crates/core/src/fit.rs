//! Power-law slope of a binned clustering spectrum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triangles::BinnedSpectrum;

/// Least-squares fit of `ln mean_c` against `ln mean_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    /// Standard error of the slope from the residual variance; zero for an
    /// exact fit.
    pub std_err: f64,
    pub intercept: f64,
    pub bins_used: usize,
}

pub const MIN_FIT_BINS: usize = 3;

/// Fits over bins whose mean degree lies in `[k_lo, k_hi]` and whose mean
/// clustering is positive.
pub fn fit_slope(binned: &BinnedSpectrum, k_lo: f64, k_hi: f64) -> Result<SlopeFit> {
    let points: Vec<(f64, f64)> = binned
        .bins
        .iter()
        .filter(|b| b.mean_k >= k_lo && b.mean_k <= k_hi && b.mean_c > 0.0)
        .map(|b| (b.mean_k.ln(), b.mean_c.ln()))
        .collect();
    if points.len() < MIN_FIT_BINS {
        return Err(Error::TooFewBins {
            required: MIN_FIT_BINS,
            found: points.len(),
        });
    }
    let m = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if !(sxx > 0.0) {
        return Err(Error::invalid("bins", "all bins share one mean degree"));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ssr: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(SlopeFit {
        slope,
        std_err: (ssr / (m - 2.0) / sxx).sqrt(),
        intercept,
        bins_used: points.len(),
    })
}
