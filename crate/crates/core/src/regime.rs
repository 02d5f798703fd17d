//! Contributing-degree windows and the triangle decomposition they induce.
//!
//! For a focal vertex of erased degree `k`, most of its triangles close over
//! two vertices `u, v` whose sampled degrees sit in a narrow window:
//! `D_u D_v ~ mu n` when `k < sqrt(n)` and `D_u, D_v ~ mu n / k` when
//! `k > sqrt(n)`. [`RegimeWindow`] realizes that window for a tolerance
//! `epsilon`; [`decompose_triangles`] splits `Delta_k` into the in-window part
//! and the rest.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DegreeSequence, ModelParams, SimpleGraph};
use crate::num::Real;
use crate::triangles::for_each_triangle;

/// The three scaling ranges of `c(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RangeId {
    I,
    II,
    III,
}

impl fmt::Display for RangeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RangeId::I => "I",
            RangeId::II => "II",
            RangeId::III => "III",
        })
    }
}

/// Default constant `a` of the Range I/II boundary `a n^{(tau-2)/(tau-1)}`.
pub const DEFAULT_A_II: f64 = 1.0;

/// Classifies `k` for a graph on `n` vertices.
///
/// Range I is `k < a n^{(tau-2)/(tau-1)}`, Range III is `k > sqrt(n)`, and
/// both boundaries (including `k = floor(sqrt(n))`) belong to Range II.
pub fn classify(k: u64, n: u64, tau: f64, a_ii: f64) -> RangeId {
    let lower = a_ii * (n as f64).powf((tau - 2.0) / (tau - 1.0));
    if (k as f64) < lower {
        RangeId::I
    } else if (k as u128) * (k as u128) <= n as u128 {
        RangeId::II
    } else {
        RangeId::III
    }
}

/// Window `W_n^k(epsilon)` of degree pairs for focal degree `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeWindow {
    k: u64,
    n: u64,
    mu: f64,
    epsilon: f64,
    range_id: RangeId,
    a_ii: f64,
}

impl RegimeWindow {
    pub fn new(k: u64, n: u64, tau: f64, mu: f64, epsilon: f64, a_ii: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::invalid("epsilon", format!("{epsilon} is outside (0, 1)")));
        }
        if k == 0 || n == 0 {
            return Err(Error::invalid("k", "focal degree and size must be positive"));
        }
        if !(mu > 0.0) || !(a_ii > 0.0) {
            return Err(Error::invalid("mu", "mu and a must be positive"));
        }
        Ok(RegimeWindow {
            k,
            n,
            mu,
            epsilon,
            range_id: classify(k, n, tau, a_ii),
            a_ii,
        })
    }

    pub fn for_params(params: &ModelParams, k: u64, epsilon: f64) -> Result<Self> {
        Self::new(k, params.n() as u64, params.tau(), params.mu(), epsilon, DEFAULT_A_II)
    }

    pub fn k(&self) -> u64 {
        self.k
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn range_id(&self) -> RangeId {
        self.range_id
    }
    pub fn a_ii(&self) -> f64 {
        self.a_ii
    }

    /// Membership of the (original) degree pair `(d_u, d_v)`.
    pub fn contains(&self, d_u: u64, d_v: u64) -> bool {
        let mu_n = self.mu * self.n as f64;
        let eps = self.epsilon;
        let (du, dv) = (d_u as f64, d_v as f64);
        let product_ok = || {
            let p = du * dv;
            p >= eps * mu_n && p <= mu_n / eps
        };
        match self.range_id {
            RangeId::I => product_ok(),
            RangeId::II => {
                let cap = mu_n / (self.k as f64 * eps);
                product_ok() && du < cap && dv < cap
            }
            RangeId::III => {
                let center = mu_n / self.k as f64;
                let inside = |d: f64| d >= eps * center && d <= center / eps;
                inside(du) && inside(dv)
            }
        }
    }
}

/// `Delta_k` split into the part inside a window and the total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct TriangleDecomposition {
    pub delta_k_total: u64,
    pub delta_k_window: u64,
}

impl TriangleDecomposition {
    /// `delta_k_window / delta_k_total`, absent when there are no triangles.
    pub fn fraction(&self) -> Option<f64> {
        (self.delta_k_total > 0).then(|| self.delta_k_window as f64 / self.delta_k_total as f64)
    }

    pub fn complement(&self) -> u64 {
        self.delta_k_total - self.delta_k_window
    }

    pub fn merge(&mut self, other: &TriangleDecomposition) {
        self.delta_k_total += other.delta_k_total;
        self.delta_k_window += other.delta_k_window;
    }
}

/// Decomposes the triangles at vertices of erased degree `k`.
///
/// Focal vertices are selected by erased degree; membership of the other two
/// corners is decided on their sampled degrees.
pub fn decompose_triangles(
    g: &SimpleGraph,
    degs: &DegreeSequence,
    k: u64,
    window: &RegimeWindow,
) -> Result<TriangleDecomposition> {
    if degs.len() != g.n() {
        return Err(Error::invalid("degrees", "degree sequence and graph differ in size"));
    }
    let erased = g.erased_degrees();
    let d = degs.degrees();
    let mut out = TriangleDecomposition::default();
    let mut corner = |w: u32, u: u32, v: u32| {
        if erased[w as usize] == k {
            out.delta_k_total += 1;
            if window.contains(d[u as usize], d[v as usize]) {
                out.delta_k_window += 1;
            }
        }
    };
    for_each_triangle(g, |a, b, c| {
        corner(a, b, c);
        corner(b, a, c);
        corner(c, a, b);
    });
    Ok(out)
}

/// Decomposition for every erased degree `k >= 2` present in `g` and every
/// epsilon in the sweep, in one pass over the triangles.
///
/// Returns `k -> one decomposition per epsilon`, in sweep order.
pub fn decompose_all(
    g: &SimpleGraph,
    degs: &DegreeSequence,
    params: &ModelParams,
    epsilons: &[f64],
    a_ii: f64,
) -> Result<BTreeMap<u64, Vec<TriangleDecomposition>>> {
    if degs.len() != g.n() {
        return Err(Error::invalid("degrees", "degree sequence and graph differ in size"));
    }
    let erased = g.erased_degrees();
    let n = g.n() as u64;
    let mut windows: BTreeMap<u64, Vec<RegimeWindow>> = BTreeMap::new();
    for &k in &erased {
        if k >= 2 && !windows.contains_key(&k) {
            let ws = epsilons
                .iter()
                .map(|&e| RegimeWindow::new(k, n, params.tau(), params.mu(), e, a_ii))
                .collect::<Result<Vec<_>>>()?;
            windows.insert(k, ws);
        }
    }
    let mut out: BTreeMap<u64, Vec<TriangleDecomposition>> = windows
        .keys()
        .map(|&k| (k, vec![TriangleDecomposition::default(); epsilons.len()]))
        .collect();

    let d = degs.degrees();
    let mut corner = |w: u32, u: u32, v: u32| {
        let k = erased[w as usize];
        let ws = &windows[&k];
        let slots = out.get_mut(&k).expect("every erased degree >= 2 has a slot");
        for (slot, win) in slots.iter_mut().zip(ws) {
            slot.delta_k_total += 1;
            if win.contains(d[u as usize], d[v as usize]) {
                slot.delta_k_window += 1;
            }
        }
    };
    for_each_triangle(g, |a, b, c| {
        corner(a, b, c);
        corner(b, a, c);
        corner(c, a, b);
    });
    Ok(out)
}

/// Approximate probability that vertices with degrees `d_w, d_u, d_v` close a
/// triangle: `prod (1 - exp(-d_i d_j / L_n))` over the three pairs.
pub fn triangle_probability_estimate<T: Real>(d_w: u64, d_u: u64, d_v: u64, l_n: u64) -> Result<T> {
    if l_n == 0 {
        return Err(Error::invalid("l_n", "total degree must be positive"));
    }
    let l = T::count(l_n);
    let factor = |a: u64, b: u64| -((-(T::count(a) * T::count(b)) / l).exp_m1());
    Ok(factor(d_w, d_u) * factor(d_w, d_v) * factor(d_u, d_v))
}

/// Half-open degree interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreeInterval {
    pub lo: u64,
    pub hi: u64,
}

impl DegreeInterval {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo >= hi {
            return Err(Error::invalid("interval", format!("[{lo}, {hi}) is empty")));
        }
        Ok(DegreeInterval { lo, hi })
    }

    pub fn contains(&self, d: u64) -> bool {
        self.lo <= d && d < self.hi
    }

    fn overlaps(&self, other: &DegreeInterval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

/// Singletons up to `singletons`, then geometric intervals of ratio `ratio`
/// until `d_max` is covered.
pub fn default_intervals(singletons: u64, ratio: f64, d_max: u64) -> Vec<DegreeInterval> {
    let mut out = Vec::new();
    let mut lo = 1u64;
    while lo <= d_max {
        let hi = if lo <= singletons {
            lo + 1
        } else {
            ((lo as f64 * ratio).ceil() as u64).max(lo + 1)
        };
        out.push(DegreeInterval { lo, hi });
        lo = hi;
    }
    out
}

/// All unordered pairs of intervals, including each interval with itself.
pub fn all_cells(intervals: &[DegreeInterval]) -> Vec<(DegreeInterval, DegreeInterval)> {
    let mut cells = Vec::new();
    for (i, &a) in intervals.iter().enumerate() {
        for &b in &intervals[i..] {
            cells.push((a, b));
        }
    }
    cells
}

/// One row of the empirical connection-probability table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectionRow {
    pub cell_u: DegreeInterval,
    pub cell_v: DegreeInterval,
    /// Vertex pairs pooled over replicas.
    pub pairs: u64,
    pub adjacent: u64,
    pub empirical_p: f64,
    /// `1 - exp(-mean(d_u) mean(d_v) / mean(L_n))`.
    pub model_p: f64,
    pub std_err: f64,
    pub mean_du: f64,
    pub mean_dv: f64,
}

/// Running counts behind [`empirical_connection_probability`]; tallies of
/// separate replicas can be merged in any grouping.
///
/// Cells are pairs of half-open intervals on the sampled degrees; distinct
/// intervals must not overlap, and a cell listed twice is counted once.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionTally {
    intervals: Vec<DegreeInterval>,
    /// Cells in first-listed order with their interval indices.
    cells: Vec<(DegreeInterval, DegreeInterval, usize, usize)>,
    vertex_count: Vec<u64>,
    degree_sum: Vec<f64>,
    pairs: BTreeMap<(usize, usize), u64>,
    adjacent: BTreeMap<(usize, usize), u64>,
    l_sum: f64,
    replicas: u64,
}

impl ConnectionTally {
    pub fn new(cells: &[(DegreeInterval, DegreeInterval)]) -> Result<Self> {
        let mut intervals: Vec<DegreeInterval> = cells.iter().flat_map(|&(a, b)| [a, b]).collect();
        intervals.sort_unstable();
        intervals.dedup();
        for w in intervals.windows(2) {
            if w[0].overlaps(&w[1]) {
                return Err(Error::invalid(
                    "cells",
                    format!("intervals [{}, {}) and [{}, {}) overlap", w[0].lo, w[0].hi, w[1].lo, w[1].hi),
                ));
            }
        }
        let index = |iv: &DegreeInterval| intervals.binary_search(iv).expect("collected above");
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for &(a, b) in cells {
            let (i, j) = (index(&a), index(&b));
            if seen.insert((i.min(j), i.max(j))) {
                out.push((a, b, i.min(j), i.max(j)));
            }
        }
        let m = intervals.len();
        Ok(ConnectionTally {
            intervals,
            cells: out,
            vertex_count: vec![0; m],
            degree_sum: vec![0.0; m],
            pairs: BTreeMap::new(),
            adjacent: BTreeMap::new(),
            l_sum: 0.0,
            replicas: 0,
        })
    }

    fn locate(&self, d: u64) -> Option<usize> {
        let i = self.intervals.partition_point(|iv| iv.hi <= d);
        (i < self.intervals.len() && self.intervals[i].contains(d)).then_some(i)
    }

    /// Adds one replica: its erased graph and sampled degrees.
    pub fn add(&mut self, g: &SimpleGraph, degs: &DegreeSequence) -> Result<()> {
        if degs.len() != g.n() {
            return Err(Error::invalid("degrees", "degree sequence and graph differ in size"));
        }
        self.replicas += 1;
        self.l_sum += degs.l_n() as f64;
        let slot: Vec<Option<usize>> = degs.degrees().iter().map(|&d| self.locate(d)).collect();
        let mut local = vec![0u64; self.intervals.len()];
        for (v, s) in slot.iter().enumerate() {
            if let Some(i) = *s {
                local[i] += 1;
                self.degree_sum[i] += degs.degree(v) as f64;
            }
        }
        for &(_, _, i, j) in &self.cells {
            let pairs = if i == j {
                local[i] * local[i].saturating_sub(1) / 2
            } else {
                local[i] * local[j]
            };
            *self.pairs.entry((i, j)).or_insert(0) += pairs;
        }
        for (u, v) in g.edges() {
            if let (Some(i), Some(j)) = (slot[u as usize], slot[v as usize]) {
                let key = (i.min(j), i.max(j));
                if self.pairs.contains_key(&key) {
                    *self.adjacent.entry(key).or_insert(0) += 1;
                }
            }
        }
        for (i, c) in local.into_iter().enumerate() {
            self.vertex_count[i] += c;
        }
        Ok(())
    }

    /// Folds another tally over the same cells into this one.
    pub fn merge(&mut self, other: &ConnectionTally) -> Result<()> {
        if self.intervals != other.intervals || self.cells != other.cells {
            return Err(Error::invalid("cells", "tallies use different cells"));
        }
        self.replicas += other.replicas;
        self.l_sum += other.l_sum;
        for (a, b) in self.vertex_count.iter_mut().zip(&other.vertex_count) {
            *a += b;
        }
        for (a, b) in self.degree_sum.iter_mut().zip(&other.degree_sum) {
            *a += b;
        }
        for (k, v) in &other.pairs {
            *self.pairs.entry(*k).or_insert(0) += v;
        }
        for (k, v) in &other.adjacent {
            *self.adjacent.entry(*k).or_insert(0) += v;
        }
        Ok(())
    }

    pub fn replicas(&self) -> u64 {
        self.replicas
    }

    /// Rows for every cell with at least one pooled pair, in cell order.
    pub fn rows(&self) -> Vec<ConnectionRow> {
        if self.replicas == 0 {
            return Vec::new();
        }
        let mean_l = self.l_sum / self.replicas as f64;
        let mut rows = Vec::new();
        for &(a, b, i, j) in &self.cells {
            let pairs = self.pairs.get(&(i, j)).copied().unwrap_or(0);
            if pairs == 0 {
                continue;
            }
            let x = self.adjacent.get(&(i, j)).copied().unwrap_or(0);
            let p = x as f64 / pairs as f64;
            let p_se = if x == 0 || x == pairs {
                (x as f64 + 0.5) / (pairs as f64 + 1.0)
            } else {
                p
            };
            let (ia, ib) = if self.intervals[i] == a { (i, j) } else { (j, i) };
            let mean_du = self.degree_sum[ia] / self.vertex_count[ia] as f64;
            let mean_dv = self.degree_sum[ib] / self.vertex_count[ib] as f64;
            rows.push(ConnectionRow {
                cell_u: a,
                cell_v: b,
                pairs,
                adjacent: x,
                empirical_p: p,
                model_p: -(-(mean_du * mean_dv) / mean_l).exp_m1(),
                std_err: (p_se * (1.0 - p_se) / pairs as f64).sqrt(),
                mean_du,
                mean_dv,
            });
        }
        rows
    }
}

/// Fraction of vertex pairs, one endpoint from each degree cell, that are
/// adjacent after erasure, pooled over replicas.
///
/// `model_p` is `1 - exp(-mean(d_u) mean(d_v) / mean(L_n))` with means over
/// the pooled cell members and replicas. Cells without pairs are omitted. The
/// standard error is binomial, `sqrt(p (1 - p) / pairs)`, with `p` shrunk to
/// `(x + 1/2) / (pairs + 1)` when no or every pair is adjacent.
pub fn empirical_connection_probability(
    replicas: &[(&SimpleGraph, &DegreeSequence)],
    cells: &[(DegreeInterval, DegreeInterval)],
) -> Result<Vec<ConnectionRow>> {
    if replicas.is_empty() {
        return Err(Error::invalid("replicas", "need at least one replica"));
    }
    let mut tally = ConnectionTally::new(cells)?;
    for &(g, degs) in replicas {
        tally.add(g, degs)?;
    }
    Ok(tally.rows())
}

/// Exponents `alpha` of the contributing degrees `D_u = n^alpha` for a focal
/// degree `k = n^beta`, with epsilon-constants ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AlphaBand {
    /// `alpha` ranges over `[lo, hi]` and the partner exponent is `1 - alpha`.
    Product { lo: f64, hi: f64 },
    /// Both partners sit at `alpha`.
    Point { alpha: f64 },
}

impl AlphaBand {
    pub fn center(&self) -> f64 {
        match *self {
            AlphaBand::Product { lo, hi } => 0.5 * (lo + hi),
            AlphaBand::Point { alpha } => alpha,
        }
    }
}

pub fn contributing_alpha_band(beta: f64, tau: f64, epsilon: f64) -> Result<AlphaBand> {
    if !(tau > 2.0 && tau < 3.0) {
        return Err(Error::invalid("tau", format!("{tau} is outside (2, 3)")));
    }
    let top = 1.0 / (tau - 1.0);
    if !(beta >= 0.0 && beta < top) {
        return Err(Error::invalid("beta", format!("{beta} is outside [0, 1/(tau-1))")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid("epsilon", format!("{epsilon} is outside (0, 1)")));
    }
    if beta <= 0.5 {
        // D_u D_v ~ n with both exponents below 1/(tau-1); the Range II cap
        // D_u < n/k adds alpha <= 1 - beta (inactive in Range I)
        let hi = top.min(1.0 - beta);
        let lo = (1.0 - top).max(beta);
        Ok(AlphaBand::Product { lo, hi })
    } else {
        Ok(AlphaBand::Point { alpha: 1.0 - beta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{erase, generate_replica, ZipfSampler};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const MU_25: f64 = 1.947_372_466_316_956;

    #[test]
    fn classification_boundaries() {
        // n = 10^6, tau = 2.5: Range II is [100, 1000]
        assert_eq!(classify(99, 1_000_000, 2.5, 1.0), RangeId::I);
        assert_eq!(classify(100, 1_000_000, 2.5, 1.0), RangeId::II);
        assert_eq!(classify(1000, 1_000_000, 2.5, 1.0), RangeId::II);
        assert_eq!(classify(1001, 1_000_000, 2.5, 1.0), RangeId::III);
        // floor(sqrt(10)) = 3 is Range II
        assert_eq!(classify(3, 10, 2.5, 1.0), RangeId::II);
        assert_eq!(classify(4, 10, 2.5, 1.0), RangeId::III);
    }

    #[test]
    fn window_examples() {
        let w = RegimeWindow::new(10_000, 1_000_000, 2.5, MU_25, 0.1, 1.0).unwrap();
        assert_eq!(w.range_id(), RangeId::III);
        assert!(w.contains(500, 500));
        assert!(w.contains(20, 1947));
        assert!(!w.contains(19, 500));
        assert!(!w.contains(500, 1948));

        let w = RegimeWindow::new(5, 1_000_000, 2.5, MU_25, 0.1, 1.0).unwrap();
        assert_eq!(w.range_id(), RangeId::I);
        assert!(w.contains(1000, 1000));
        assert!(!w.contains(10, 10));

        let w = RegimeWindow::new(500, 1_000_000, 2.5, MU_25, 0.1, 1.0).unwrap();
        assert_eq!(w.range_id(), RangeId::II);
        // cap mu n / (k eps) = 38947
        assert!(w.contains(1000, 1000));
        assert!(!w.contains(40_000, 10));

        assert!(RegimeWindow::new(5, 100, 2.5, MU_25, 0.0, 1.0).is_err());
        assert!(RegimeWindow::new(5, 100, 2.5, MU_25, 1.0, 1.0).is_err());
    }

    #[test]
    fn triangle_probability_examples() {
        let p: f64 = triangle_probability_estimate(1, 1, 1, 1).unwrap();
        assert_relative_eq!(p, (1.0 - (-1.0f64).exp()).powi(3), max_relative = 1e-15);
        assert_relative_eq!(p, 0.252_580_457_827_2, max_relative = 1e-10);
        let tiny: f64 = triangle_probability_estimate(1, 1, 1, 1 << 60).unwrap();
        assert!(tiny < 1e-50);
        // one saturated factor
        let sat: f64 = triangle_probability_estimate(100, 100, 1, 250).unwrap();
        let rest = (1.0 - (-100.0f64 / 250.0).exp()).powi(2);
        assert!((sat - rest).abs() < 1e-15);
        assert!(triangle_probability_estimate::<f64>(1, 1, 1, 0).is_err());
        let single: f32 = triangle_probability_estimate(1, 1, 1, 1).unwrap();
        assert_relative_eq!(single, 0.252_580_46, max_relative = 1e-6);
    }

    #[test]
    fn c3_decomposition() {
        let g = SimpleGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let degs = DegreeSequence::new(vec![2, 2, 2]).unwrap();
        // window containing (2, 2): Range I at n = 3 needs 4 in [eps mu n, mu n / eps]
        let w = RegimeWindow::new(2, 3, 2.5, 4.0 / 3.0, 0.5, 0.001).unwrap();
        assert!(w.contains(2, 2));
        let d = decompose_triangles(&g, &degs, 2, &w).unwrap();
        assert_eq!(d.delta_k_total, 3);
        assert_eq!(d.delta_k_window, 3);
        assert_eq!(d.fraction(), Some(1.0));

        let none = decompose_triangles(&g, &degs, 7, &w).unwrap();
        assert_eq!(none.fraction(), None);
    }

    #[test]
    fn extreme_windows() {
        let params = ModelParams::new(2.5, 3000, 5).unwrap();
        let sampler = ZipfSampler::new(2.5).unwrap();
        let rep = generate_replica(&params, &sampler, 0).unwrap();
        let all = decompose_all(&rep.erased, &rep.degrees, &params, &[1e-9], 1.0).unwrap();
        let mut seen_any = false;
        for (k, d) in &all {
            if d[0].delta_k_total > 0 {
                seen_any = true;
                // k far above sqrt(n) makes the Range III window [1e-9 mu n/k, ...] cover everything
                assert_eq!(d[0].fraction(), Some(1.0), "k = {k}");
            }
        }
        assert!(seen_any);

        // a Range I window whose product band lies above any achievable D_u D_v
        let w = RegimeWindow::new(2, 3000, 2.5, 1e9, 0.5, 1.0).unwrap();
        let d = decompose_triangles(&rep.erased, &rep.degrees, 2, &w).unwrap();
        assert_eq!(d.delta_k_window, 0);
    }

    #[test]
    fn batch_matches_single() {
        let params = ModelParams::new(2.5, 5000, 8).unwrap();
        let sampler = ZipfSampler::new(2.5).unwrap();
        let rep = generate_replica(&params, &sampler, 1).unwrap();
        let eps = [0.5, 0.05];
        let all = decompose_all(&rep.erased, &rep.degrees, &params, &eps, 1.0).unwrap();
        for (&k, ds) in all.iter().take(12) {
            for (i, &e) in eps.iter().enumerate() {
                let w = RegimeWindow::for_params(&params, k, e).unwrap();
                let single = decompose_triangles(&rep.erased, &rep.degrees, k, &w).unwrap();
                assert_eq!(single, ds[i]);
            }
            assert!(ds[1].delta_k_window >= ds[0].delta_k_window);
        }
    }

    #[test]
    fn alpha_band_examples() {
        assert_eq!(contributing_alpha_band(0.6, 2.5, 0.1).unwrap(), AlphaBand::Point { alpha: 0.4 });
        match contributing_alpha_band(0.0, 2.5, 0.1).unwrap() {
            AlphaBand::Product { lo, hi } => {
                assert_relative_eq!(lo, 1.0 / 3.0, max_relative = 1e-12);
                assert_relative_eq!(hi, 2.0 / 3.0, max_relative = 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            contributing_alpha_band(0.5, 2.5, 0.1).unwrap(),
            AlphaBand::Product { lo: 0.5, hi: 0.5 }
        );
        let just_above = contributing_alpha_band(0.5 + 1e-12, 2.5, 0.1).unwrap();
        assert_relative_eq!(just_above.center(), 0.5, epsilon = 1e-11);
        assert!(contributing_alpha_band(2.0 / 3.0, 2.5, 0.1).is_err());
        assert!(contributing_alpha_band(-0.1, 2.5, 0.1).is_err());
    }

    #[test]
    fn connection_table_on_tiny_graph() {
        // path 0-1-2 with sampled degrees 1, 2, 1
        let g = SimpleGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let degs = DegreeSequence::new(vec![1, 2, 1]).unwrap();
        let one = DegreeInterval::new(1, 2).unwrap();
        let two = DegreeInterval::new(2, 3).unwrap();
        let rows = empirical_connection_probability(&[(&g, &degs)], &[(one, one), (one, two), (two, two)]).unwrap();
        // (two, two) has no pairs and is omitted
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].pairs, rows[0].adjacent), (1, 0));
        assert_eq!((rows[1].pairs, rows[1].adjacent), (2, 2));
        assert_relative_eq!(rows[1].model_p, 1.0 - (-0.5f64).exp());

        let overlapping = DegreeInterval::new(1, 3).unwrap();
        assert!(empirical_connection_probability(&[(&g, &degs)], &[(one, overlapping)]).is_err());
    }

    #[test]
    fn default_intervals_tile() {
        let iv = default_intervals(4, 1.5, 100);
        assert_eq!(iv[0], DegreeInterval { lo: 1, hi: 2 });
        assert_eq!(iv[3], DegreeInterval { lo: 4, hi: 5 });
        for w in iv.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
        }
        assert!(iv.last().unwrap().contains(100));
    }

    proptest! {
        #[test]
        fn window_monotone_in_epsilon(
            k in 1u64..100_000,
            du in 1u64..100_000,
            dv in 1u64..100_000,
            e1 in 0.001f64..0.999,
            e2 in 0.001f64..0.999,
        ) {
            let (small, large) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            let w_small = RegimeWindow::new(k, 1_000_000, 2.5, MU_25, small, 1.0).unwrap();
            let w_large = RegimeWindow::new(k, 1_000_000, 2.5, MU_25, large, 1.0).unwrap();
            if w_large.contains(du, dv) {
                prop_assert!(w_small.contains(du, dv));
            }
        }

        #[test]
        fn probability_estimate_bounded_and_monotone(
            dw in 1u64..10_000, du in 1u64..10_000, dv in 1u64..10_000, l in 1u64..10_000_000,
        ) {
            let p: f64 = triangle_probability_estimate(dw, du, dv, l).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
            let q: f64 = triangle_probability_estimate(dw + 1, du, dv, l).unwrap();
            let r: f64 = triangle_probability_estimate(dw, du + 1, dv, l).unwrap();
            let s: f64 = triangle_probability_estimate(dw, du, dv + 1, l).unwrap();
            prop_assert!(q >= p && r >= p && s >= p);
        }
    }

    #[test]
    fn decomposition_consistency_on_erased_graph() {
        let params = ModelParams::new(2.3, 4000, 2).unwrap();
        let sampler = ZipfSampler::new(2.3).unwrap();
        let rep = generate_replica(&params, &sampler, 0).unwrap();
        let g = erase(&rep.multigraph);
        let all = decompose_all(&g, &rep.degrees, &params, &[0.5, 0.2, 0.1, 0.05], 1.0).unwrap();
        let spec = crate::triangles::clustering_spectrum(&g, crate::DegreeBasis::Erased, None).unwrap();
        for (k, ds) in &all {
            let delta = spec.get(*k).unwrap().delta_k;
            for pair in ds.windows(2) {
                assert!(pair[1].delta_k_window >= pair[0].delta_k_window);
            }
            for d in ds {
                assert_eq!(d.delta_k_total, delta);
                assert_eq!(d.delta_k_window + d.complement(), d.delta_k_total);
            }
        }
    }
}
