//! Hidden-variable (rank-1 inhomogeneous) random graphs.
//!
//! Every pair `{i, j}` is present independently with probability
//! `kernel(w_i w_j / (mu n))`. Unlike the erased configuration model the edge
//! indicators are independent, which is the contrast the comparison targets.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{generate_replica, sample_degrees, ModelParams, Replica, SimpleGraph, ZipfSampler};
use crate::rng::{tagged_stream, StreamTag};
use crate::triangles::{log_bin, ClusteringSpectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// `min(x, 1)`.
    TruncatedProduct,
    /// `1 - e^{-x}`.
    #[default]
    Exponential,
}

impl Kernel {
    #[inline]
    pub fn prob(self, x: f64) -> f64 {
        match self {
            Kernel::TruncatedProduct => x.min(1.0),
            Kernel::Exponential => -(-x).exp_m1(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WeightsSource {
    /// Fresh i.i.d. draws from the degree law.
    FreshPowerlaw,
    /// The sampled degrees of the matching configuration-model replica.
    #[default]
    ReuseDegrees,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HvmParams {
    pub kernel: Kernel,
    pub weights_source: WeightsSource,
    pub base: ModelParams,
}

impl HvmParams {
    pub fn new(base: ModelParams) -> Self {
        HvmParams {
            kernel: Kernel::default(),
            weights_source: WeightsSource::default(),
            base,
        }
    }
}

/// Samples a hidden-variable graph with normalization `mu n`, where `n` is the
/// number of weights and `mu` comes from `p.base`.
///
/// Vertices are visited in order of decreasing weight, so for a fixed `u` the
/// pair probability is non-increasing along the candidate list. Candidates are
/// skipped geometrically at the current probability and accepted with the
/// ratio of the true to the proposal probability, which costs
/// `O(n + edges)` in expectation.
pub fn generate_hvm<R: Rng + ?Sized>(weights: &[f64], p: &HvmParams, rng: &mut R) -> Result<SimpleGraph> {
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return Err(Error::invalid("weights", format!("weight {w} is not positive and finite")));
    }
    let n = weights.len();
    if n > u32::MAX as usize {
        return Err(Error::invalid("weights", "vertex ids are 32-bit"));
    }
    let norm = p.base.mu() * n as f64;
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| weights[b as usize].total_cmp(&weights[a as usize]).then(a.cmp(&b)));
    let w: Vec<f64> = order.iter().map(|&i| weights[i as usize]).collect();

    let mut edges = Vec::new();
    for u in 0..n.saturating_sub(1) {
        let mut v = u + 1;
        let mut prob = p.kernel.prob(w[u] * w[v] / norm);
        while v < n && prob > 0.0 {
            if prob < 1.0 {
                let r: f64 = rng.random();
                // P(skip >= s) = (1 - prob)^s
                let skip = ((1.0 - r).ln() / (-prob).ln_1p()).floor();
                if skip >= (n - v) as f64 {
                    break;
                }
                v += skip as usize;
            }
            let q = p.kernel.prob(w[u] * w[v] / norm);
            let r: f64 = rng.random();
            if r * prob < q {
                edges.push((order[u], order[v]));
            }
            prob = q;
            v += 1;
        }
    }
    SimpleGraph::from_edges(n, edges)
}

/// Weights for replica `index` according to `p.weights_source`.
pub fn hvm_weights(p: &HvmParams, sampler: &ZipfSampler, ecm: &Replica) -> Result<Vec<f64>> {
    Ok(match p.weights_source {
        WeightsSource::ReuseDegrees => ecm.degrees.degrees().iter().map(|&d| d as f64).collect(),
        WeightsSource::FreshPowerlaw => {
            let mut rng = tagged_stream(p.base.seed(), ecm.index, StreamTag::Auxiliary(0));
            sample_degrees(&p.base, sampler, &mut rng)?
                .degrees()
                .iter()
                .map(|&d| d as f64)
                .collect()
        }
    })
}

/// An ECM replica together with the hidden-variable graph built from it.
pub fn generate_pair(p: &HvmParams, sampler: &ZipfSampler, index: u64) -> Result<(Replica, SimpleGraph)> {
    let ecm = generate_replica(&p.base, sampler, index)?;
    let weights = hvm_weights(p, sampler, &ecm)?;
    let mut rng = tagged_stream(p.base.seed(), index, StreamTag::HiddenVariable);
    let hvm = generate_hvm(&weights, p, &mut rng)?;
    Ok((ecm, hvm))
}

/// Binned ratio of two spectra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub k_lo: f64,
    pub k_hi: f64,
    pub mean_k: f64,
    pub ecm_c: f64,
    pub hvm_c: f64,
    /// `ecm_c / hvm_c`.
    pub ratio: f64,
    /// Ratio error from the two bin standard errors in quadrature.
    pub std_err: f64,
    pub ecm_vertices: u64,
    pub hvm_vertices: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumComparison {
    pub rows: Vec<ComparisonRow>,
    /// Bins present in only one spectrum or with zero clustering in either.
    pub omitted: usize,
}

pub fn compare_spectra(ecm: &ClusteringSpectrum, hvm: &ClusteringSpectrum, base: f64) -> Result<SpectrumComparison> {
    let a = log_bin(ecm, base)?;
    let b = log_bin(hvm, base)?;
    let mut joined: BTreeMap<i64, (Option<_>, Option<_>)> = BTreeMap::new();
    for bin in a.bins {
        joined.entry(bin.index).or_insert((None, None)).0 = Some(bin);
    }
    for bin in b.bins {
        joined.entry(bin.index).or_insert((None, None)).1 = Some(bin);
    }
    let mut rows = Vec::new();
    let mut omitted = 0;
    for (_, pair) in joined {
        match pair {
            (Some(e), Some(h)) if e.mean_c > 0.0 && h.mean_c > 0.0 => {
                let ratio = e.mean_c / h.mean_c;
                let rel = ((e.std_err / e.mean_c).powi(2) + (h.std_err / h.mean_c).powi(2)).sqrt();
                let nv = (e.vertices + h.vertices) as f64;
                rows.push(ComparisonRow {
                    k_lo: e.k_lo,
                    k_hi: e.k_hi,
                    mean_k: (e.mean_k * e.vertices as f64 + h.mean_k * h.vertices as f64) / nv,
                    ecm_c: e.mean_c,
                    hvm_c: h.mean_c,
                    ratio,
                    std_err: ratio * rel,
                    ecm_vertices: e.vertices,
                    hvm_vertices: h.vertices,
                });
            }
            _ => omitted += 1,
        }
    }
    Ok(SpectrumComparison { rows, omitted })
}
