//! Triangle counting and the degree-resolved clustering spectrum `c(k)`.
//!
//! Triangles are enumerated once each by orienting every edge from the
//! endpoint with the smaller `(degree, id)` towards the larger one and
//! intersecting out-neighborhoods. Out-degrees are then bounded by
//! `O(sqrt(m))`, which keeps hub-heavy power-law graphs cheap.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DegreeSequence, MultiGraph, SimpleGraph};

/// Degree used to group vertices in the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DegreeBasis {
    /// Degree in the erased simple graph.
    #[default]
    Erased,
    /// Sampled degree before erasure.
    Original,
}

/// Degree-ordered out-adjacency with per-edge weights.
struct Oriented {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<u64>,
}

impl Oriented {
    /// `edges` lists each undirected edge once; `degree` ranks the endpoints.
    fn new<I>(n: usize, degree: &[u64], edges: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, u64)> + Clone,
    {
        let lower = |a: u32, b: u32| (degree[a as usize], a) < (degree[b as usize], b);
        let mut offsets = vec![0usize; n + 1];
        for (a, b, _) in edges.clone() {
            let src = if lower(a, b) { a } else { b };
            offsets[src as usize + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let mut cursor = offsets.clone();
        let m = offsets[n];
        let mut targets = vec![0u32; m];
        let mut weights = vec![0u64; m];
        for (a, b, w) in edges {
            let (src, dst) = if lower(a, b) { (a, b) } else { (b, a) };
            let slot = cursor[src as usize];
            targets[slot] = dst;
            weights[slot] = w;
            cursor[src as usize] += 1;
        }
        let mut oriented = Oriented {
            offsets,
            targets,
            weights,
        };
        oriented.sort_rows();
        oriented
    }

    fn sort_rows(&mut self) {
        for v in 0..self.offsets.len() - 1 {
            let range = self.offsets[v]..self.offsets[v + 1];
            let t = &self.targets[range.clone()];
            if t.windows(2).all(|w| w[0] < w[1]) {
                continue;
            }
            let mut row: Vec<(u32, u64)> = t
                .iter()
                .copied()
                .zip(self.weights[range.clone()].iter().copied())
                .collect();
            row.sort_unstable();
            for (i, (t, w)) in row.into_iter().enumerate() {
                self.targets[range.start + i] = t;
                self.weights[range.start + i] = w;
            }
        }
    }

    fn row(&self, v: usize) -> (&[u32], &[u64]) {
        let r = self.offsets[v]..self.offsets[v + 1];
        (&self.targets[r.clone()], &self.weights[r])
    }

    /// Calls `visit(u, v, w, x_uv, x_uw, x_vw)` once per triangle.
    fn for_each_triangle<F>(&self, mut visit: F)
    where
        F: FnMut(u32, u32, u32, u64, u64, u64),
    {
        let n = self.offsets.len() - 1;
        for u in 0..n {
            let (out_u, w_u) = self.row(u);
            for (i, &v) in out_u.iter().enumerate() {
                let x_uv = w_u[i];
                let (out_v, w_v) = self.row(v as usize);
                let (mut p, mut q) = (0, 0);
                while p < out_u.len() && q < out_v.len() {
                    match out_u[p].cmp(&out_v[q]) {
                        std::cmp::Ordering::Less => p += 1,
                        std::cmp::Ordering::Greater => q += 1,
                        std::cmp::Ordering::Equal => {
                            visit(u as u32, v, out_u[p], x_uv, w_u[p], w_v[q]);
                            p += 1;
                            q += 1;
                        }
                    }
                }
            }
        }
    }
}

fn oriented_simple(g: &SimpleGraph) -> Oriented {
    let degree = g.erased_degrees();
    Oriented::new(g.n(), &degree, g.edges().map(|(a, b)| (a, b, 1)))
}

/// Calls `visit(a, b, c)` once for every triangle of `g`.
pub fn for_each_triangle<F>(g: &SimpleGraph, mut visit: F)
where
    F: FnMut(u32, u32, u32),
{
    oriented_simple(g).for_each_triangle(|a, b, c, _, _, _| visit(a, b, c));
}

/// Number of triangles containing each vertex.
pub fn triangles_per_vertex(g: &SimpleGraph) -> Vec<u64> {
    let mut counts = vec![0u64; g.n()];
    for_each_triangle(g, |a, b, c| {
        counts[a as usize] += 1;
        counts[b as usize] += 1;
        counts[c as usize] += 1;
    });
    counts
}

/// Number of distinct triangles (vertex perspective).
pub fn count_triangles(g: &SimpleGraph) -> u64 {
    let mut total = 0;
    for_each_triangle(g, |_, _, _| total += 1);
    total
}

/// `sum_{i<j<k} X_ij X_jk X_ik` over the multigraph; self-loops never enter.
pub fn count_triangles_edge_perspective(mg: &MultiGraph) -> u64 {
    // rank by number of distinct neighbors so the orientation bound holds
    let mut distinct = vec![0u64; mg.n()];
    for &(a, b, _) in mg.edges() {
        distinct[a as usize] += 1;
        distinct[b as usize] += 1;
    }
    let oriented = Oriented::new(
        mg.n(),
        &distinct,
        mg.edges().iter().map(|&(a, b, m)| (a, b, m as u64)),
    );
    let mut total = 0u64;
    oriented.for_each_triangle(|_, _, _, x, y, z| total += x * y * z);
    total
}

/// Spectrum entry for one degree `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub k: u64,
    /// Number of vertices with degree `k`.
    pub n_k: u64,
    /// Triangle incidences `sum_{deg(w) = k} triangles(w)`.
    pub delta_k: u64,
    /// `2 delta_k / (n_k k (k-1))`.
    pub c_k: f64,
    /// Sum of squared local coefficients over the `n_k` vertices, kept so that
    /// pooled and binned means carry a standard error.
    pub c_sq_sum: f64,
}

impl SpectrumEntry {
    fn new(k: u64, n_k: u64, delta_k: u64, c_sq_sum: f64) -> Self {
        let c_k = 2.0 * delta_k as f64 / (n_k as f64 * k as f64 * (k - 1) as f64);
        SpectrumEntry {
            k,
            n_k,
            delta_k,
            c_k,
            c_sq_sum,
        }
    }
}

/// Local clustering spectrum `k -> (N_k, Delta_k, c(k))` for `k >= 2`.
///
/// Degrees without vertices, and `k < 2`, have no entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringSpectrum {
    entries: BTreeMap<u64, SpectrumEntry>,
    n: usize,
    basis: DegreeBasis,
}

impl ClusteringSpectrum {
    /// Builds the spectrum from per-vertex degrees and triangle counts.
    pub fn from_counts(degrees: &[u64], triangles: &[u64], basis: DegreeBasis) -> Self {
        assert_eq!(degrees.len(), triangles.len());
        let mut acc: BTreeMap<u64, (u64, u64, f64)> = BTreeMap::new();
        for (&k, &t) in degrees.iter().zip(triangles) {
            if k < 2 {
                continue;
            }
            let local = 2.0 * t as f64 / (k as f64 * (k - 1) as f64);
            let e = acc.entry(k).or_insert((0, 0, 0.0));
            e.0 += 1;
            e.1 += t;
            e.2 += local * local;
        }
        ClusteringSpectrum {
            entries: acc
                .into_iter()
                .map(|(k, (n_k, delta, sq))| (k, SpectrumEntry::new(k, n_k, delta, sq)))
                .collect(),
            n: degrees.len(),
            basis,
        }
    }

    /// Merges spectra of several replicas by summing counts per `k`.
    pub fn pool<'a, I>(spectra: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a ClusteringSpectrum>,
    {
        let mut iter = spectra.into_iter();
        let first = iter.next()?;
        let mut acc: BTreeMap<u64, (u64, u64, f64)> = first
            .entries
            .values()
            .map(|e| (e.k, (e.n_k, e.delta_k, e.c_sq_sum)))
            .collect();
        for s in iter {
            for e in s.entries.values() {
                let slot = acc.entry(e.k).or_insert((0, 0, 0.0));
                slot.0 += e.n_k;
                slot.1 += e.delta_k;
                slot.2 += e.c_sq_sum;
            }
        }
        Some(ClusteringSpectrum {
            entries: acc
                .into_iter()
                .map(|(k, (n_k, delta, sq))| (k, SpectrumEntry::new(k, n_k, delta, sq)))
                .collect(),
            n: first.n,
            basis: first.basis,
        })
    }

    pub fn get(&self, k: u64) -> Option<&SpectrumEntry> {
        self.entries.get(&k)
    }

    /// Entries in increasing `k`.
    pub fn entries(&self) -> impl Iterator<Item = &SpectrumEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> DegreeBasis {
        self.basis
    }

    pub fn max_k(&self) -> Option<u64> {
        self.entries.keys().next_back().copied()
    }
}

/// Computes `c(k)` with vertices grouped by the requested degree basis.
/// `degrees` must be supplied for [`DegreeBasis::Original`].
pub fn clustering_spectrum(
    g: &SimpleGraph,
    basis: DegreeBasis,
    degrees: Option<&DegreeSequence>,
) -> Result<ClusteringSpectrum> {
    let triangles = triangles_per_vertex(g);
    let grouping = match basis {
        DegreeBasis::Erased => g.erased_degrees(),
        DegreeBasis::Original => {
            let d = degrees.ok_or(Error::MissingDegreeSequence)?;
            if d.len() != g.n() {
                return Err(Error::invalid("degrees", "degree sequence and graph differ in size"));
            }
            d.degrees().to_vec()
        }
    };
    Ok(ClusteringSpectrum::from_counts(&grouping, &triangles, basis))
}

/// Global clustering `6 T / sum_v deg(v)(deg(v) - 1)`.
pub fn global_clustering(g: &SimpleGraph) -> Result<f64> {
    let wedges: u64 = g
        .erased_degrees()
        .iter()
        .map(|&d| d * d.saturating_sub(1))
        .sum();
    if wedges == 0 {
        return Err(Error::NoWedges);
    }
    Ok(6.0 * count_triangles(g) as f64 / wedges as f64)
}

/// One logarithmic bin of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    /// Bin index `m`, covering `[2 base^m, 2 base^{m+1})`.
    pub index: i64,
    pub k_lo: f64,
    pub k_hi: f64,
    /// `N_k`-weighted mean degree.
    pub mean_k: f64,
    /// `N_k`-weighted mean of `c(k)`.
    pub mean_c: f64,
    /// Vertices in the bin.
    pub vertices: u64,
    /// Standard error of `mean_c` across vertices; NaN for a single vertex.
    pub std_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinnedSpectrum {
    pub bins: Vec<Bin>,
    pub base: f64,
}

pub const DEFAULT_BIN_BASE: f64 = 1.3;

/// Bin index of degree `k` for bins `[2 base^m, 2 base^{m+1})`.
pub fn bin_index(k: u64, base: f64) -> i64 {
    let k = k as f64;
    let mut m = ((k / 2.0).ln() / base.ln()).floor() as i64;
    while 2.0 * base.powi(m as i32 + 1) <= k {
        m += 1;
    }
    while 2.0 * base.powi(m as i32) > k {
        m -= 1;
    }
    m
}

/// Geometric binning; only non-empty bins are emitted.
pub fn log_bin(spec: &ClusteringSpectrum, base: f64) -> Result<BinnedSpectrum> {
    if !(base > 1.0) || !base.is_finite() {
        return Err(Error::invalid("base", format!("bin ratio {base} must exceed 1")));
    }
    // (vertices, sum k * N_k, sum c_k * N_k, sum of squares)
    let mut acc: BTreeMap<i64, (u64, f64, f64, f64)> = BTreeMap::new();
    for e in spec.entries() {
        let slot = acc.entry(bin_index(e.k, base)).or_insert((0, 0.0, 0.0, 0.0));
        slot.0 += e.n_k;
        slot.1 += e.k as f64 * e.n_k as f64;
        slot.2 += e.c_k * e.n_k as f64;
        slot.3 += e.c_sq_sum;
    }
    let bins = acc
        .into_iter()
        .map(|(m, (count, ksum, csum, sq))| {
            let nv = count as f64;
            let mean_c = csum / nv;
            let std_err = if count > 1 {
                let var = ((sq - nv * mean_c * mean_c) / (nv - 1.0)).max(0.0);
                (var / nv).sqrt()
            } else {
                f64::NAN
            };
            Bin {
                index: m,
                k_lo: 2.0 * base.powi(m as i32),
                k_hi: 2.0 * base.powi(m as i32 + 1),
                mean_k: ksum / nv,
                mean_c,
                vertices: count,
                std_err,
            }
        })
        .collect();
    Ok(BinnedSpectrum { bins, base })
}
