//! Power-law degree sampling, the configuration multigraph and its erasure.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::asymptotics::constant_a;
use crate::error::{Error, Result};
use crate::special::{zeta, zeta_tail};

/// Parameters of one configuration-model experiment.
///
/// Degrees follow the pure Zipf law `P(D = k) = k^{-tau} / zeta(tau)` on
/// `k >= 1`, so `C = 1/zeta(tau)` and `mu = zeta(tau - 1)/zeta(tau)` are exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    tau: f64,
    n: usize,
    seed: u64,
    c_norm: f64,
    mu: f64,
    a_const: f64,
}

impl ModelParams {
    pub fn new(tau: f64, n: usize, seed: u64) -> Result<Self> {
        if !(tau > 2.0 && tau < 3.0) {
            return Err(Error::invalid("tau", format!("{tau} is outside the open interval (2, 3)")));
        }
        if n == 0 {
            return Err(Error::invalid("n", "vertex count must be positive"));
        }
        if n > u32::MAX as usize {
            return Err(Error::invalid("n", "vertex ids are 32-bit"));
        }
        let z = zeta(tau);
        Ok(ModelParams {
            tau,
            n,
            seed,
            c_norm: 1.0 / z,
            mu: zeta(tau - 1.0) / z,
            a_const: constant_a(tau)?,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    /// Normalization `C` of the degree law.
    pub fn c_norm(&self) -> f64 {
        self.c_norm
    }
    /// Mean degree `E[D]`.
    pub fn mu(&self) -> f64 {
        self.mu
    }
    /// `A = -Gamma(2 - tau)`.
    pub fn a_const(&self) -> f64 {
        self.a_const
    }

    pub fn with_seed(self, seed: u64) -> Self {
        ModelParams { seed, ..self }
    }

    pub fn with_n(self, n: usize) -> Result<Self> {
        ModelParams::new(self.tau, n, self.seed)
    }
}

/// Upper end of the exact cumulative table; larger degrees are drawn from the
/// analytic tail.
pub const DEFAULT_TABLE_LEN: usize = 1 << 20;

/// Inverse-CDF sampler for `P(D = k) = k^{-tau} / zeta(tau)`.
///
/// The survival function `P(D > k)` is tabulated for `k <= table_len`; beyond
/// that the midpoint approximation `(k + 1/2)^{1-tau} / ((tau-1) zeta(tau))`
/// is inverted in closed form. Cheap to clone: the table is shared.
#[derive(Debug, Clone)]
pub struct ZipfSampler {
    tau: f64,
    zeta_tau: f64,
    survival: Arc<[f64]>,
}

impl ZipfSampler {
    pub fn new(tau: f64) -> Result<Self> {
        Self::with_table_len(tau, DEFAULT_TABLE_LEN)
    }

    pub fn with_table_len(tau: f64, table_len: usize) -> Result<Self> {
        if !(tau > 1.0) || !tau.is_finite() {
            return Err(Error::invalid("tau", "Zipf law needs a finite exponent above 1"));
        }
        if table_len == 0 {
            return Err(Error::invalid("table_len", "table must hold at least k = 1"));
        }
        let zeta_tau = zeta(tau);
        let mut survival = vec![0.0; table_len + 1];
        // accumulate from the top so that small tail masses keep full precision
        let mut tail = zeta_tail(tau, table_len as u64 + 1);
        survival[table_len] = tail / zeta_tau;
        for k in (1..=table_len).rev() {
            tail += (k as f64).powf(-tau);
            survival[k - 1] = tail / zeta_tau;
        }
        survival[0] = 1.0;
        Ok(ZipfSampler {
            tau,
            zeta_tau,
            survival: survival.into(),
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn table_len(&self) -> usize {
        self.survival.len() - 1
    }

    /// `P(D = k)`.
    pub fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            0.0
        } else {
            (k as f64).powf(-self.tau) / self.zeta_tau
        }
    }

    /// `P(D > k)`, exact inside the table.
    pub fn survival(&self, k: u64) -> f64 {
        match self.survival.get(k as usize) {
            Some(&s) => s,
            None => zeta_tail(self.tau, k + 1) / self.zeta_tau,
        }
    }

    /// Smallest `k >= 1` with `P(D > k) < v`, for `v` in `(0, 1]`.
    pub fn quantile(&self, v: f64) -> u64 {
        let len = self.table_len();
        if v > self.survival[len] {
            // survival is decreasing; count the k in 1..=len with S(k) >= v
            1 + self.survival[1..].partition_point(|&s| s >= v) as u64
        } else {
            let x = (v * (self.tau - 1.0) * self.zeta_tau).powf(-1.0 / (self.tau - 1.0));
            let k = (x - 0.5).floor() + 1.0;
            if k >= u64::MAX as f64 {
                u64::MAX
            } else {
                (k as u64).max(len as u64 + 1)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        // 1 - U lies in (0, 1]
        let v = 1.0 - rng.random::<f64>();
        self.quantile(v)
    }
}

/// Degrees of the `n` vertices with the bookkeeping needed by the matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    degrees: Vec<u64>,
    parity_fixed: bool,
    l_n: u64,
    d_max: u64,
}

impl DegreeSequence {
    /// Validates the degrees and, if their sum is odd, adds one half-edge to
    /// the last vertex.
    pub fn new(mut degrees: Vec<u64>) -> Result<Self> {
        if degrees.iter().any(|&d| d == 0) {
            return Err(Error::invalid("degrees", "every degree must be at least 1"));
        }
        let mut l_n: u64 = degrees.iter().sum();
        let parity_fixed = l_n % 2 == 1;
        if parity_fixed {
            *degrees.last_mut().expect("odd sum implies a vertex") += 1;
            l_n += 1;
        }
        let d_max = degrees.iter().copied().max().unwrap_or(0);
        Ok(DegreeSequence {
            degrees,
            parity_fixed,
            l_n,
            d_max,
        })
    }

    /// Wraps degrees as given, without the parity fix and without requiring
    /// positive entries. The total may be odd, in which case
    /// [`pair_half_edges`] refuses it.
    pub fn raw(degrees: Vec<u64>) -> Self {
        let l_n = degrees.iter().sum();
        let d_max = degrees.iter().copied().max().unwrap_or(0);
        DegreeSequence {
            degrees,
            parity_fixed: false,
            l_n,
            d_max,
        }
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }
    pub fn degree(&self, v: usize) -> u64 {
        self.degrees[v]
    }
    pub fn len(&self) -> usize {
        self.degrees.len()
    }
    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }
    pub fn parity_fixed(&self) -> bool {
        self.parity_fixed
    }
    /// Total number of half-edges `L_n`.
    pub fn l_n(&self) -> u64 {
        self.l_n
    }
    pub fn d_max(&self) -> u64 {
        self.d_max
    }
}

/// Draws `n` i.i.d. degrees and applies the parity fix.
pub fn sample_degrees<R: Rng + ?Sized>(
    params: &ModelParams,
    sampler: &ZipfSampler,
    rng: &mut R,
) -> Result<DegreeSequence> {
    if sampler.tau() != params.tau() {
        return Err(Error::invalid("sampler", "sampler exponent differs from the model's tau"));
    }
    let degrees = (0..params.n()).map(|_| sampler.sample(rng)).collect();
    DegreeSequence::new(degrees)
}

/// Outcome of the configuration model: edge multiplicities and self-loops.
///
/// Multiplicities are kept as a sorted run-length list of vertex pairs
/// `(i, j)` with `i < j`, looked up by binary search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(u32, u32, u32)>,
    self_loops: Vec<u32>,
    degrees: DegreeSequence,
}

impl MultiGraph {
    /// Builds a multigraph from a list of (possibly repeated) vertex pairs.
    /// A pair `(v, v)` is a self-loop. Degrees are derived from the pairs.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut keys = Vec::new();
        let mut self_loops = vec![0u32; n];
        let mut degrees = vec![0u64; n];
        for (u, v) in pairs {
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid("edge", format!("({u}, {v}) has an endpoint outside 0..{n}")));
            }
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
            if u == v {
                self_loops[u as usize] += 1;
            } else {
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                keys.push(((a as u64) << 32) | b as u64);
            }
        }
        Ok(Self::assemble(n, keys, self_loops, DegreeSequence::raw(degrees)))
    }

    fn assemble(n: usize, mut keys: Vec<u64>, self_loops: Vec<u32>, degrees: DegreeSequence) -> Self {
        keys.sort_unstable();
        let mut edges: Vec<(u32, u32, u32)> = Vec::with_capacity(keys.len());
        for key in keys {
            let (a, b) = ((key >> 32) as u32, key as u32);
            match edges.last_mut() {
                Some(last) if last.0 == a && last.1 == b => last.2 += 1,
                _ => edges.push((a, b, 1)),
            }
        }
        MultiGraph {
            n,
            edges,
            self_loops,
            degrees,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Distinct non-loop vertex pairs with their multiplicity, sorted.
    pub fn edges(&self) -> &[(u32, u32, u32)] {
        &self.edges
    }

    pub fn multiplicity(&self, u: u32, v: u32) -> u32 {
        if u == v {
            return 0;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges
            .binary_search_by(|&(x, y, _)| (x, y).cmp(&(a, b)))
            .map(|i| self.edges[i].2)
            .unwrap_or(0)
    }

    pub fn self_loops(&self, v: u32) -> u32 {
        self.self_loops[v as usize]
    }

    pub fn total_self_loops(&self) -> u64 {
        self.self_loops.iter().map(|&s| s as u64).sum()
    }

    /// Number of edges counted with multiplicity, self-loops included.
    pub fn total_edges(&self) -> u64 {
        self.edges.iter().map(|e| e.2 as u64).sum::<u64>() + self.total_self_loops()
    }

    pub fn degrees(&self) -> &DegreeSequence {
        &self.degrees
    }

    /// True when there are no self-loops and no multi-edges.
    pub fn is_simple(&self) -> bool {
        self.self_loops.iter().all(|&s| s == 0) && self.edges.iter().all(|e| e.2 == 1)
    }

    /// `sum_{u != v} X_uv + 2 * loops(v)` for every vertex.
    pub fn half_edge_counts(&self) -> Vec<u64> {
        let mut counts: Vec<u64> = self.self_loops.iter().map(|&s| 2 * s as u64).collect();
        for &(a, b, m) in &self.edges {
            counts[a as usize] += m as u64;
            counts[b as usize] += m as u64;
        }
        counts
    }
}

/// Uniform random perfect matching of the half-edges.
///
/// The half-edge array is shuffled with Fisher–Yates and consecutive entries
/// are paired, which makes all `(L_n - 1)!!` matchings equally likely.
pub fn pair_half_edges<R: Rng + ?Sized>(degs: &DegreeSequence, rng: &mut R) -> Result<MultiGraph> {
    if degs.l_n() % 2 == 1 {
        return Err(Error::OddHalfEdges(degs.l_n()));
    }
    let n = degs.len();
    if n > u32::MAX as usize {
        return Err(Error::invalid("n", "vertex ids are 32-bit"));
    }
    let mut stubs: Vec<u32> = Vec::with_capacity(degs.l_n() as usize);
    for (v, &d) in degs.degrees().iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v as u32, d as usize));
    }
    stubs.shuffle(rng);

    let mut keys = Vec::with_capacity(stubs.len() / 2);
    let mut self_loops = vec![0u32; n];
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v {
            self_loops[u as usize] += 1;
        } else {
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            keys.push(((a as u64) << 32) | b as u64);
        }
    }
    Ok(MultiGraph::assemble(n, keys, self_loops, degs.clone()))
}

/// Simple undirected graph in compressed sparse row form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl SimpleGraph {
    /// Builds a simple graph, dropping self-loops and merging duplicates in
    /// either orientation.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut keys = Vec::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid("edge", format!("({u}, {v}) has an endpoint outside 0..{n}")));
            }
            if u != v {
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                keys.push(((a as u64) << 32) | b as u64);
            }
        }
        keys.sort_unstable();
        keys.dedup();
        Ok(Self::from_sorted_pairs(
            n,
            keys.iter().map(|&k| ((k >> 32) as u32, k as u32)),
        ))
    }

    /// `pairs` must be strictly increasing `(a, b)` with `a < b`.
    fn from_sorted_pairs<I>(n: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32)> + Clone,
    {
        let mut offsets = vec![0usize; n + 1];
        for (a, b) in pairs.clone() {
            offsets[a as usize + 1] += 1;
            offsets[b as usize + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; offsets[n]];
        for (a, b) in pairs {
            neighbors[cursor[a as usize]] = b;
            cursor[a as usize] += 1;
            neighbors[cursor[b as usize]] = a;
            cursor[b as usize] += 1;
        }
        SimpleGraph { offsets, neighbors }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Erased degrees `D^er_v` of all vertices.
    pub fn erased_degrees(&self) -> Vec<u64> {
        self.offsets.windows(2).map(|w| (w[1] - w[0]) as u64).collect()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        if u as usize >= self.n() || v as usize >= self.n() {
            return false;
        }
        let (small, other) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(small).binary_search(&other).is_ok()
    }

    /// Every edge once, as `(u, v)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + Clone + '_ {
        (0..self.n() as u32).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }
}

/// Merges multi-edges and removes self-loops.
pub fn erase(mg: &MultiGraph) -> SimpleGraph {
    SimpleGraph::from_sorted_pairs(mg.n(), mg.edges().iter().map(|&(a, b, _)| (a, b)))
}

/// The event `|L_n - mu n| <= n^{1/(tau-1)}`.
pub fn jn_holds(degs: &DegreeSequence, params: &ModelParams) -> bool {
    let n = degs.len() as f64;
    let deviation = (degs.l_n() as f64 - params.mu() * n).abs();
    deviation <= n.powf(1.0 / (params.tau() - 1.0))
}

/// One configuration-model replica: sampled degrees and the matched multigraph.
#[derive(Debug, Clone)]
pub struct Replica {
    pub index: u64,
    pub degrees: DegreeSequence,
    pub multigraph: MultiGraph,
    pub erased: SimpleGraph,
}

/// Generates replica `index` of `params` on its own derived stream.
pub fn generate_replica(params: &ModelParams, sampler: &ZipfSampler, index: u64) -> Result<Replica> {
    let mut rng = crate::rng::replica_stream(params.seed(), index);
    let degrees = sample_degrees(params, sampler, &mut rng)?;
    let multigraph = pair_half_edges(&degrees, &mut rng)?;
    let erased = erase(&multigraph);
    Ok(Replica {
        index,
        degrees,
        multigraph,
        erased,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replica_stream;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn params_validation_and_constants() {
        assert!(ModelParams::new(2.0, 10, 1).is_err());
        assert!(ModelParams::new(3.0, 10, 1).is_err());
        assert!(ModelParams::new(f64::NAN, 10, 1).is_err());
        assert!(ModelParams::new(2.5, 0, 1).is_err());
        let p = ModelParams::new(2.5, 1000, 1).unwrap();
        assert_relative_eq!(p.c_norm(), 0.745_441_296_288_777, max_relative = 1e-12);
        assert_relative_eq!(p.mu(), 1.947_372_466_316_956, max_relative = 1e-12);
        assert_relative_eq!(p.a_const(), 2.0 * std::f64::consts::PI.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn sampler_table_and_tail_agree() {
        let s = ZipfSampler::with_table_len(2.5, 1000).unwrap();
        assert_relative_eq!(s.survival(0), 1.0);
        assert_relative_eq!(s.survival(1), 1.0 - s.pmf(1), max_relative = 1e-13);
        let total: f64 = (1..=1000).map(|k| s.pmf(k)).sum::<f64>() + s.survival(1000);
        assert_relative_eq!(total, 1.0, max_relative = 1e-13);
        // quantile inverts the survival function on both sides of the table end
        for k in [1u64, 2, 17, 999, 1000, 1001, 5000, 123_456] {
            let mid = 0.5 * (s.survival(k - 1) + s.survival(k));
            assert_eq!(s.quantile(mid), k, "k = {k}");
        }
        assert_eq!(s.quantile(1.0), 1);
    }

    #[test]
    fn degree_one_frequency() {
        // P(D = 1) = 1/zeta(2.5) = 0.745441...
        let params = ModelParams::new(2.5, 1_000_000, 3).unwrap();
        let sampler = ZipfSampler::new(2.5).unwrap();
        let degs = sample_degrees(&params, &sampler, &mut replica_stream(3, 0)).unwrap();
        let ones = degs.degrees().iter().filter(|&&d| d == 1).count() as f64;
        let n = 1e6_f64;
        let p = 0.745_441_296_288_777;
        let se = (p * (1.0 - p) / n).sqrt();
        assert!((ones / n - p).abs() < 3.0 * se, "freq {}", ones / n);
    }

    #[test]
    fn chi_square_goodness_of_fit() {
        let sampler = ZipfSampler::new(2.5).unwrap();
        let mut rng = replica_stream(11, 0);
        let draws = 1_000_000u64;
        let mut observed = [0u64; 21];
        for _ in 0..draws {
            let d = sampler.sample(&mut rng);
            observed[(d.min(21) - 1) as usize] += 1;
        }
        let mut stat = 0.0;
        for (i, &o) in observed.iter().enumerate() {
            let p = if i < 20 { sampler.pmf(i as u64 + 1) } else { sampler.survival(20) };
            let e = p * draws as f64;
            stat += (o as f64 - e).powi(2) / e;
        }
        // 0.999 quantile of chi-square with 20 degrees of freedom
        assert!(stat < 45.314_746_618_125_86, "chi-square statistic {stat}");
    }

    #[test]
    fn parity_fix_touches_last_vertex_only() {
        let d = DegreeSequence::new(vec![1, 2, 2]).unwrap();
        assert!(d.parity_fixed());
        assert_eq!(d.degrees(), &[1, 2, 3]);
        assert_eq!(d.l_n(), 6);
        let e = DegreeSequence::new(vec![1, 3]).unwrap();
        assert!(!e.parity_fixed());
        assert_eq!(e.degrees(), &[1, 3]);
        assert!(DegreeSequence::new(vec![1, 0]).is_err());
    }

    #[test]
    fn sampled_sequences_are_valid() {
        let params = ModelParams::new(2.2, 5001, 9).unwrap();
        let sampler = ZipfSampler::new(2.2).unwrap();
        for r in 0..5 {
            let degs = sample_degrees(&params, &sampler, &mut replica_stream(9, r)).unwrap();
            assert_eq!(degs.len(), 5001);
            assert!(degs.degrees().iter().all(|&d| d >= 1));
            assert_eq!(degs.l_n() % 2, 0);
            assert_eq!(degs.l_n(), degs.degrees().iter().sum::<u64>());
            assert_eq!(degs.d_max(), *degs.degrees().iter().max().unwrap());
        }
    }

    #[test]
    fn forced_matchings() {
        let mut rng = replica_stream(0, 0);
        let mg = pair_half_edges(&DegreeSequence::new(vec![1, 1]).unwrap(), &mut rng).unwrap();
        assert_eq!(mg.edges(), &[(0, 1, 1)]);
        assert_eq!(mg.total_self_loops(), 0);

        let mg = pair_half_edges(&DegreeSequence::new(vec![2]).unwrap(), &mut rng).unwrap();
        assert_eq!(mg.self_loops(0), 1);
        assert!(mg.edges().is_empty());

        // all three matchings of four half-edges give one loop at 0 plus {0, 1}
        for _ in 0..50 {
            let mg = pair_half_edges(&DegreeSequence::new(vec![3, 1]).unwrap(), &mut rng).unwrap();
            assert_eq!(mg.self_loops(0), 1);
            assert_eq!(mg.edges(), &[(0, 1, 1)]);
            let g = erase(&mg);
            assert_eq!(g.erased_degrees(), vec![1, 1]);
        }
    }

    #[test]
    fn odd_total_is_rejected() {
        let degs = DegreeSequence::raw(vec![1, 2]);
        let err = pair_half_edges(&degs, &mut replica_stream(0, 0)).unwrap_err();
        assert!(matches!(err, Error::OddHalfEdges(3)));
    }

    #[test]
    fn erasure_rules() {
        let mg = MultiGraph::from_edges(2, [(0, 0), (0, 1), (1, 0)]).unwrap();
        assert_eq!(mg.self_loops(0), 1);
        assert_eq!(mg.multiplicity(0, 1), 2);
        let g = erase(&mg);
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.erased_degrees(), vec![1, 1]);

        let simple = MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        assert!(simple.is_simple());
        let g = erase(&simple);
        let deg: Vec<u64> = simple.degrees().degrees().to_vec();
        assert_eq!(g.erased_degrees(), deg);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2), (2, 3)]);
    }

    #[test]
    fn jn_examples() {
        let params = ModelParams::new(2.5, 1000, 0).unwrap();
        let mut degs = vec![1u64; 1000];
        degs[0] += 947;
        let d = DegreeSequence::raw(degs);
        assert_eq!(d.l_n(), 1947);
        assert!(jn_holds(&d, &params));
        let degs = vec![3u64; 1000];
        assert!(!jn_holds(&DegreeSequence::raw(degs), &params));
    }

    #[test]
    fn replicas_are_deterministic() {
        let params = ModelParams::new(2.5, 2000, 42).unwrap();
        let sampler = ZipfSampler::new(2.5).unwrap();
        let a = generate_replica(&params, &sampler, 3).unwrap();
        let b = generate_replica(&params, &sampler, 3).unwrap();
        assert_eq!(a.degrees, b.degrees);
        assert_eq!(a.multigraph, b.multigraph);
        let c = generate_replica(&params, &sampler, 4).unwrap();
        assert_ne!(a.degrees, c.degrees);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matching_conserves_half_edges(
            degrees in prop::collection::vec(1u64..12, 1..60),
            seed in any::<u64>(),
        ) {
            let degs = DegreeSequence::new(degrees).unwrap();
            let mg = pair_half_edges(&degs, &mut replica_stream(seed, 0)).unwrap();
            let counts = mg.half_edge_counts();
            prop_assert_eq!(&counts[..], degs.degrees());
            prop_assert_eq!(2 * mg.total_edges(), degs.l_n());

            let g = erase(&mg);
            for (v, &d) in g.erased_degrees().iter().enumerate() {
                prop_assert!(d <= degs.degree(v));
                prop_assert!(!g.neighbors(v as u32).contains(&(v as u32)));
                prop_assert!(g.neighbors(v as u32).windows(2).all(|w| w[0] < w[1]));
                for &u in g.neighbors(v as u32) {
                    prop_assert!(g.has_edge(u, v as u32));
                    prop_assert!(mg.multiplicity(u, v as u32) >= 1);
                }
            }
        }
    }
}
