//! Experiment configuration, replica orchestration and artifact emission.
//!
//! [`run`] writes one or two CSV files plus `manifest.json` into
//! `output_path`. CSV content is a pure function of the configuration: each
//! replica draws from its own derived stream and results are merged in
//! replica order, whatever the worker count.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::asymptotics::{ck_crossover, default_k_grid, f_scale, theory_curve, Constants};
use crate::error::{Error, Result};
use crate::fit::{fit_slope, SlopeFit};
use crate::hidden::{compare_spectra, generate_pair, HvmParams, Kernel, WeightsSource};
use crate::ingest::{ingest_edge_list, ParseMode};
use crate::model::{generate_replica, jn_holds, ModelParams, Replica, ZipfSampler};
use crate::quadrature::QuadratureSpec;
use crate::regime::{
    all_cells, classify, decompose_all, default_intervals, ConnectionTally, DegreeInterval, TriangleDecomposition,
};
use crate::triangles::{
    clustering_spectrum, global_clustering, log_bin, BinnedSpectrum, ClusteringSpectrum, DegreeBasis,
    DEFAULT_BIN_BASE,
};

/// Version tag of the CSV layouts below.
pub const SCHEMA_VERSION: u32 = 1;

pub const SPECTRUM_HEADER: &[&str] = &["k", "N_k", "delta_k", "c_k", "c_k_over_f", "range_id", "n", "tau", "replica"];
pub const BINNED_HEADER: &[&str] = &["k_lo", "k_hi", "mean_k", "mean_c", "std_err", "vertices"];
pub const REGIMES_HEADER: &[&str] = &["k", "epsilon", "delta_k_total", "delta_k_window", "fraction", "replica"];
pub const CROSSOVER_HEADER: &[&str] = &["B", "ck_over_n2mt_theory", "ck_over_n2mt_rangeII", "ck_over_n2mt_rangeIII"];
pub const THEORY_HEADER: &[&str] = &["k", "predicted_c", "range_id", "crossover", "n", "tau"];
pub const CONNECTION_HEADER: &[&str] = &["du_lo", "du_hi", "dv_lo", "dv_hi", "pairs", "empirical_p", "model_p", "std_err"];
pub const COMPARE_HEADER: &[&str] = &[
    "k_lo", "k_hi", "mean_k", "ecm_c", "hvm_c", "ratio", "std_err", "ecm_vertices", "hvm_vertices",
];
pub const INGEST_HEADER: &[&str] = &["k", "N_k", "delta_k", "c_k"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    #[default]
    Spectrum,
    Regimes,
    Crossover,
    Theory,
    CompareHvm,
    Ingest,
    ConnectionCheck,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Spectrum => "spectrum",
            ExperimentKind::Regimes => "regimes",
            ExperimentKind::Crossover => "crossover",
            ExperimentKind::Theory => "theory",
            ExperimentKind::CompareHvm => "compare_hvm",
            ExperimentKind::Ingest => "ingest",
            ExperimentKind::ConnectionCheck => "connection_check",
        }
    }
}

/// Everything that determines an experiment's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub tau: f64,
    pub n: usize,
    pub seed: u64,
    pub replicas: usize,
    pub epsilon_sweep: Vec<f64>,
    pub bin_base: f64,
    pub output_path: PathBuf,
    /// Also emit per-replica rows next to the pooled ones.
    pub emit_raw: bool,
    /// Worker threads; `None` uses all cores. Never affects output.
    pub workers: Option<usize>,
    pub basis: DegreeBasis,
    /// Constant `a` of the Range I/II boundary.
    pub a_ii: f64,
    /// Degrees for `theory`; defaults to a geometric grid over `[2, n^{1/(tau-1)}]`.
    pub k_grid: Option<Vec<u64>>,
    /// `B` values for `crossover`; defaults to 51 points over `[1e-3, 1e2]`.
    pub b_grid: Option<Vec<f64>>,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub kernel: Kernel,
    pub weights_source: WeightsSource,
    /// Edge list for `ingest`.
    pub input: Option<PathBuf>,
    pub parse_mode: ParseMode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::Spectrum,
            tau: 2.5,
            n: 10_000,
            seed: 0,
            replicas: 1,
            epsilon_sweep: vec![0.5, 0.2, 0.1, 0.05],
            bin_base: DEFAULT_BIN_BASE,
            output_path: PathBuf::from("out"),
            emit_raw: false,
            workers: None,
            basis: DegreeBasis::Erased,
            a_ii: 1.0,
            k_grid: None,
            b_grid: None,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            kernel: Kernel::Exponential,
            weights_source: WeightsSource::ReuseDegrees,
            input: None,
            parse_mode: ParseMode::Strict,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Checks every field the chosen experiment reads.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.replicas == 0 {
            return bad("replicas must be at least 1".into());
        }
        if let Some(e) = self.epsilon_sweep.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
            return bad(format!("epsilon {e} is outside (0, 1)"));
        }
        if self.epsilon_sweep.is_empty() && self.experiment == ExperimentKind::Regimes {
            return bad("epsilon_sweep is empty".into());
        }
        if !(self.bin_base > 1.0 && self.bin_base.is_finite()) {
            return bad(format!("bin_base {} must exceed 1", self.bin_base));
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        if !(self.a_ii > 0.0) {
            return bad(format!("a_ii {} must be positive", self.a_ii));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return bad("quadrature tolerances must be positive".into());
        }
        if let Some(b) = self.b_grid.iter().flatten().find(|b| !(**b > 0.0 && b.is_finite())) {
            return bad(format!("B = {b} must be positive"));
        }
        match self.experiment {
            ExperimentKind::Ingest => {
                if self.input.is_none() {
                    return bad("ingest needs an input edge list".into());
                }
            }
            _ => {
                ModelParams::new(self.tau, self.n, self.seed).map_err(|e| Error::Config(e.to_string()))?;
            }
        }
        if matches!(self.experiment, ExperimentKind::Theory | ExperimentKind::Crossover) && self.n < 2 {
            return bad("n must be at least 2".into());
        }
        Ok(())
    }

    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.tau, self.n, self.seed)
    }

    pub fn quadrature(&self) -> QuadratureSpec<f64> {
        QuadratureSpec {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            ..QuadratureSpec::default()
        }
    }
}

/// Per-replica diagnostics recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicaDiagnostics {
    pub replica: u64,
    pub l_n: u64,
    pub d_max: u64,
    pub parity_fixed: bool,
    pub jn_holds: bool,
    pub self_loops: u64,
    pub erased_edges: u64,
}

impl ReplicaDiagnostics {
    pub fn of(rep: &Replica, params: &ModelParams) -> Self {
        ReplicaDiagnostics {
            replica: rep.index,
            l_n: rep.degrees.l_n(),
            d_max: rep.degrees.d_max(),
            parity_fixed: rep.degrees.parity_fixed(),
            jn_holds: jn_holds(&rep.degrees, params),
            self_loops: rep.multigraph.total_self_loops(),
            erased_edges: rep.erased.num_edges() as u64,
        }
    }
}

/// One emitted file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    /// File name relative to the output directory.
    pub file: String,
    /// Data rows, header excluded.
    pub rows: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub schema_version: u32,
    pub experiment: ExperimentKind,
    pub config: ExperimentConfig,
    pub replicas: Vec<ReplicaDiagnostics>,
    pub outputs: Vec<OutputRecord>,
    /// Experiment-specific summary values.
    pub summary: serde_json::Value,
    pub wall_time_secs: f64,
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// Shortest round-trip rendering; NaN and missing values become empty fields.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        String::new()
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn write_csv(dir: &Path, file: &str, header: &[&str], rows: &[Vec<String>]) -> Result<OutputRecord> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    fs::write(dir.join(file), &bytes)?;
    Ok(OutputRecord {
        file: file.to_string(),
        rows: rows.len(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

fn binned_rows(b: &BinnedSpectrum) -> Vec<Vec<String>> {
    b.bins
        .iter()
        .map(|bin| {
            vec![
                fmt_f64(bin.k_lo),
                fmt_f64(bin.k_hi),
                fmt_f64(bin.mean_k),
                fmt_f64(bin.mean_c),
                fmt_f64(bin.std_err),
                bin.vertices.to_string(),
            ]
        })
        .collect()
}

fn pool_for(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Maps `f` over replica indices `0..replicas` on the pool, keeping order.
fn per_replica<T, F>(pool: &rayon::ThreadPool, replicas: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    pool.install(|| (0..replicas as u64).into_par_iter().map(f).collect())
}

/// Pooled slope fits over the Range III window `[3 sqrt(n), d_max/3]` and the
/// Range I window `[3, n^{1/3}/2]`, with `d_max` the largest degree present
/// in the pooled spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFits {
    pub range_iii_window: (f64, f64),
    pub range_iii: Option<SlopeFit>,
    pub range_i_window: (f64, f64),
    pub range_i: Option<SlopeFit>,
}

pub fn spectrum_fits(pooled: &ClusteringSpectrum, binned: &BinnedSpectrum, n: usize) -> SpectrumFits {
    let nf = n as f64;
    let d_max = pooled.max_k().unwrap_or(0) as f64;
    let iii = (3.0 * nf.sqrt(), d_max / 3.0);
    let one = (3.0, nf.cbrt() / 2.0);
    SpectrumFits {
        range_iii_window: iii,
        range_iii: fit_slope(binned, iii.0, iii.1).ok(),
        range_i_window: one,
        range_i: fit_slope(binned, one.0, one.1).ok(),
    }
}

/// Outcome of the `spectrum` experiment.
pub struct SpectrumRun {
    pub per_replica: Vec<ClusteringSpectrum>,
    pub pooled: ClusteringSpectrum,
    pub diagnostics: Vec<ReplicaDiagnostics>,
}

/// Generates the replicas of `params` and their clustering spectra.
pub fn simulate_spectra(
    params: &ModelParams,
    replicas: usize,
    basis: DegreeBasis,
    workers: Option<usize>,
) -> Result<SpectrumRun> {
    let sampler = ZipfSampler::new(params.tau())?;
    let pool = pool_for(workers)?;
    let results = per_replica(&pool, replicas, |r| {
        let rep = generate_replica(params, &sampler, r)?;
        let spec = clustering_spectrum(&rep.erased, basis, Some(&rep.degrees))?;
        Ok((ReplicaDiagnostics::of(&rep, params), spec))
    })?;
    let (diagnostics, per_replica): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let pooled = ClusteringSpectrum::pool(&per_replica).expect("at least one replica");
    Ok(SpectrumRun {
        per_replica,
        pooled,
        diagnostics,
    })
}

/// Regime decompositions of every replica: `(replica, k -> one per epsilon)`.
pub fn simulate_regimes(
    params: &ModelParams,
    replicas: usize,
    epsilons: &[f64],
    a_ii: f64,
    workers: Option<usize>,
) -> Result<Vec<(ReplicaDiagnostics, std::collections::BTreeMap<u64, Vec<TriangleDecomposition>>)>> {
    let sampler = ZipfSampler::new(params.tau())?;
    let pool = pool_for(workers)?;
    per_replica(&pool, replicas, |r| {
        let rep = generate_replica(params, &sampler, r)?;
        let d = decompose_all(&rep.erased, &rep.degrees, params, epsilons, a_ii)?;
        Ok((ReplicaDiagnostics::of(&rep, params), d))
    })
}

/// Degree cells used by `connection_check`: singletons up to 8, then ratio
/// 1.5, with the last interval open-ended.
pub fn connection_cells(n: usize) -> Vec<(DegreeInterval, DegreeInterval)> {
    let mut iv = default_intervals(8, 1.5, n.max(16) as u64);
    if let Some(last) = iv.last_mut() {
        last.hi = u64::MAX;
    }
    all_cells(&iv)
}

/// Pooled connection tally over all replicas.
pub fn simulate_connections(
    params: &ModelParams,
    replicas: usize,
    cells: &[(DegreeInterval, DegreeInterval)],
    workers: Option<usize>,
) -> Result<(Vec<ReplicaDiagnostics>, ConnectionTally)> {
    let sampler = ZipfSampler::new(params.tau())?;
    let pool = pool_for(workers)?;
    let parts = per_replica(&pool, replicas, |r| {
        let rep = generate_replica(params, &sampler, r)?;
        let mut t = ConnectionTally::new(cells)?;
        t.add(&rep.erased, &rep.degrees)?;
        Ok((ReplicaDiagnostics::of(&rep, params), t))
    })?;
    let mut total = ConnectionTally::new(cells)?;
    let mut diags = Vec::with_capacity(parts.len());
    for (d, t) in parts {
        total.merge(&t)?;
        diags.push(d);
    }
    Ok((diags, total))
}

/// Pooled ECM and HVM spectra built from the same replicas.
pub fn simulate_hvm_pairs(
    hvm: &HvmParams,
    replicas: usize,
    workers: Option<usize>,
) -> Result<(Vec<ReplicaDiagnostics>, ClusteringSpectrum, ClusteringSpectrum)> {
    let sampler = ZipfSampler::new(hvm.base.tau())?;
    let pool = pool_for(workers)?;
    let parts = per_replica(&pool, replicas, |r| {
        let (ecm, h) = generate_pair(hvm, &sampler, r)?;
        let se = clustering_spectrum(&ecm.erased, DegreeBasis::Erased, None)?;
        let sh = clustering_spectrum(&h, DegreeBasis::Erased, None)?;
        Ok((ReplicaDiagnostics::of(&ecm, &hvm.base), se, sh))
    })?;
    let diags = parts.iter().map(|p| p.0.clone()).collect();
    let ecm = ClusteringSpectrum::pool(parts.iter().map(|p| &p.1)).expect("at least one replica");
    let h = ClusteringSpectrum::pool(parts.iter().map(|p| &p.2)).expect("at least one replica");
    Ok((diags, ecm, h))
}

fn spectrum_rows(spec: &ClusteringSpectrum, params: &ModelParams, replica: i64, consts: &Constants<f64>) -> Vec<Vec<String>> {
    let n = params.n() as u64;
    spec.entries()
        .map(|e| {
            let over_f = f_scale(e.k, n, consts).ok().map(|f| e.c_k / f);
            vec![
                e.k.to_string(),
                e.n_k.to_string(),
                e.delta_k.to_string(),
                fmt_f64(e.c_k),
                fmt_opt(over_f),
                classify(e.k, n, params.tau(), crate::regime::DEFAULT_A_II).to_string(),
                n.to_string(),
                fmt_f64(params.tau()),
                replica.to_string(),
            ]
        })
        .collect()
}

struct Emitted {
    replicas: Vec<ReplicaDiagnostics>,
    outputs: Vec<OutputRecord>,
    summary: serde_json::Value,
}

/// Runs the configured experiment and writes its artifacts.
pub fn run(config: &ExperimentConfig) -> Result<RunManifest> {
    config.validate()?;
    let start = Instant::now();
    let dir = &config.output_path;
    fs::create_dir_all(dir)?;
    let emitted = match config.experiment {
        ExperimentKind::Spectrum => run_spectrum(config, dir)?,
        ExperimentKind::Regimes => run_regimes(config, dir)?,
        ExperimentKind::Crossover => run_crossover(config, dir)?,
        ExperimentKind::Theory => run_theory(config, dir)?,
        ExperimentKind::CompareHvm => run_compare_hvm(config, dir)?,
        ExperimentKind::Ingest => run_ingest(config, dir)?,
        ExperimentKind::ConnectionCheck => run_connection_check(config, dir)?,
    };
    let manifest = RunManifest {
        tool: "ecm".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema_version: SCHEMA_VERSION,
        experiment: config.experiment,
        config: config.clone(),
        replicas: emitted.replicas,
        outputs: emitted.outputs,
        summary: emitted.summary,
        wall_time_secs: start.elapsed().as_secs_f64(),
    };
    fs::write(dir.join(MANIFEST_FILE), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

fn run_spectrum(config: &ExperimentConfig, dir: &Path) -> Result<Emitted> {
    let params = config.params()?;
    let consts = Constants::from_params(&params);
    let sim = simulate_spectra(&params, config.replicas, config.basis, config.workers)?;
    let mut rows = spectrum_rows(&sim.pooled, &params, -1, &consts);
    if config.emit_raw {
        for (r, s) in sim.per_replica.iter().enumerate() {
            rows.extend(spectrum_rows(s, &params, r as i64, &consts));
        }
    }
    let binned = log_bin(&sim.pooled, config.bin_base)?;
    let fits = spectrum_fits(&sim.pooled, &binned, params.n());
    let outputs = vec![
        write_csv(dir, "spectrum.csv", SPECTRUM_HEADER, &rows)?,
        write_csv(dir, "spectrum_binned.csv", BINNED_HEADER, &binned_rows(&binned))?,
    ];
    Ok(Emitted {
        replicas: sim.diagnostics,
        outputs,
        summary: json!({ "fits": fits }),
    })
}

fn run_regimes(config: &ExperimentConfig, dir: &Path) -> Result<Emitted> {
    let params = config.params()?;
    let eps = &config.epsilon_sweep;
    let parts = simulate_regimes(&params, config.replicas, eps, config.a_ii, config.workers)?;
    let mut pooled: std::collections::BTreeMap<u64, Vec<TriangleDecomposition>> = Default::default();
    for (_, d) in &parts {
        for (k, ds) in d {
            let slot = pooled.entry(*k).or_insert_with(|| vec![TriangleDecomposition::default(); eps.len()]);
            for (s, x) in slot.iter_mut().zip(ds) {
                s.merge(x);
            }
        }
    }
    let push = |rows: &mut Vec<Vec<String>>, k: u64, ds: &[TriangleDecomposition], replica: i64| {
        for (e, d) in eps.iter().zip(ds) {
            rows.push(vec![
                k.to_string(),
                fmt_f64(*e),
                d.delta_k_total.to_string(),
                d.delta_k_window.to_string(),
                fmt_opt(d.fraction()),
                replica.to_string(),
            ]);
        }
    };
    let mut rows = Vec::new();
    for (k, ds) in &pooled {
        push(&mut rows, *k, ds, -1);
    }
    for (r, (_, d)) in parts.iter().enumerate() {
        for (k, ds) in d {
            push(&mut rows, *k, ds, r as i64);
        }
    }
    let outputs = vec![write_csv(dir, "regimes.csv", REGIMES_HEADER, &rows)?];
    Ok(Emitted {
        replicas: parts.into_iter().map(|p| p.0).collect(),
        outputs,
        summary: json!({}),
    })
}

/// Default `B` grid: ten points per decade over `[1e-3, 1e2]`.
pub fn default_b_grid() -> Vec<f64> {
    (0..=50).map(|i| 10f64.powf(-3.0 + i as f64 / 10.0)).collect()
}

fn run_crossover(config: &ExperimentConfig, dir: &Path) -> Result<Emitted> {
    let consts = Constants::<f64>::new(config.tau)?;
    let spec = config.quadrature();
    let grid = config.b_grid.clone().unwrap_or_else(default_b_grid);
    let pool = pool_for(config.workers)?;
    let values: Vec<Result<(f64, f64)>> = pool.install(|| {
        grid.par_iter()
            .map(|&b| ck_crossover(b, &consts, &spec).map(|e| (e.value, e.abs_err)))
            .collect()
    });
    let mut rows = Vec::with_capacity(grid.len());
    let mut max_err: f64 = 0.0;
    for (&b, v) in grid.iter().zip(values) {
        let (value, err) = v?;
        max_err = max_err.max(err);
        rows.push(vec![
            fmt_f64(b),
            fmt_f64(value),
            if b < 1.0 { fmt_f64(consts.range_ii_line(b)) } else { String::new() },
            if b >= 1.0 { fmt_f64(consts.range_iii_line(b)) } else { String::new() },
        ]);
    }
    let outputs = vec![write_csv(dir, "crossover.csv", CROSSOVER_HEADER, &rows)?];
    Ok(Emitted {
        replicas: Vec::new(),
        outputs,
        summary: json!({ "max_abs_err": max_err, "constants": consts }),
    })
}

fn run_theory(config: &ExperimentConfig, dir: &Path) -> Result<Emitted> {
    let consts = Constants::<f64>::new(config.tau)?;
    let n = config.n as u64;
    let grid = config.k_grid.clone().unwrap_or_else(|| default_k_grid(n, config.tau, 20));
    let curve = theory_curve(n, &grid, &consts, &config.quadrature(), config.a_ii)?;
    let rows: Vec<Vec<String>> = curve
        .points
        .iter()
        .map(|p| {
            vec![
                p.k.to_string(),
                fmt_f64(p.predicted_c),
                p.range_id.to_string(),
                p.crossover.to_string(),
                n.to_string(),
                fmt_f64(config.tau),
            ]
        })
        .collect();
    let outputs = vec![write_csv(dir, "theory.csv", THEORY_HEADER, &rows)?];
    Ok(Emitted {
        replicas: Vec::new(),
        outputs,
        summary: json!({ "constants": consts }),
    })
}

fn run_compare_hvm(config: &ExperimentConfig, dir: &Path) -> Result<Emitted> {
    let hvm = HvmParams {
        kernel: config.kernel,
        weights_source: config.weights_source,
        base: config.params()?,
    };
    let (diags, ecm, h) = simulate_hvm_pairs(&hvm, config.replicas, config.workers)?;
    let cmp = compare_spectra(&ecm, &h, config.bin_base)?;
    let rows: Vec<Vec<String>> = cmp
        .rows
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.k_lo),
                fmt_f64(r.k_hi),
                fmt_f64(r.mean_k),
                fmt_f64(r.ecm_c),
                fmt_f64(r.hvm_c),
                fmt_f64(r.ratio),
                fmt_f64(r.std_err),
                r.ecm_vertices.to_string(),
                r.hvm_vertices.to_string(),
            ]
        })
        .collect();
    let outputs = vec![write_csv(dir, "compare_hvm.csv", COMPARE_HEADER, &rows)?];
    Ok(Emitted {
        replicas: diags,
        outputs,
        summary: json!({ "omitted_bins": cmp.omitted }),
    })
}

fn run_connection_check(config: &ExperimentConfig, dir: &Path) -> Result<Emitted> {
    let params = config.params()?;
    let cells = connection_cells(params.n());
    let (diags, tally) = simulate_connections(&params, config.replicas, &cells, config.workers)?;
    let rows: Vec<Vec<String>> = tally
        .rows()
        .iter()
        .map(|r| {
            let hi = |h: u64| if h == u64::MAX { String::new() } else { h.to_string() };
            vec![
                r.cell_u.lo.to_string(),
                hi(r.cell_u.hi),
                r.cell_v.lo.to_string(),
                hi(r.cell_v.hi),
                r.pairs.to_string(),
                fmt_f64(r.empirical_p),
                fmt_f64(r.model_p),
                fmt_f64(r.std_err),
            ]
        })
        .collect();
    let outputs = vec![write_csv(dir, "connection_check.csv", CONNECTION_HEADER, &rows)?];
    Ok(Emitted {
        replicas: diags,
        outputs,
        summary: json!({}),
    })
}

fn run_ingest(config: &ExperimentConfig, dir: &Path) -> Result<Emitted> {
    let input = config.input.as_ref().expect("validated");
    let g = ingest_edge_list(input, config.parse_mode)?;
    let spec = clustering_spectrum(&g.graph, DegreeBasis::Erased, None)?;
    let rows: Vec<Vec<String>> = spec
        .entries()
        .map(|e| vec![e.k.to_string(), e.n_k.to_string(), e.delta_k.to_string(), fmt_f64(e.c_k)])
        .collect();
    let binned = log_bin(&spec, config.bin_base)?;
    let outputs = vec![
        write_csv(dir, "ingest.csv", INGEST_HEADER, &rows)?,
        write_csv(dir, "ingest_binned.csv", BINNED_HEADER, &binned_rows(&binned))?,
    ];
    Ok(Emitted {
        replicas: Vec::new(),
        outputs,
        summary: json!({
            "vertices": g.graph.n(),
            "edges": g.graph.num_edges(),
            "global_clustering": global_clustering(&g.graph).ok(),
            "provenance": g.provenance,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(kind: ExperimentKind, dir: &Path) -> ExperimentConfig {
        ExperimentConfig {
            experiment: kind,
            n: 2000,
            replicas: 2,
            seed: 7,
            output_path: dir.to_path_buf(),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn validation() {
        let dir = Path::new("unused");
        let mut c = config(ExperimentKind::Spectrum, dir);
        assert!(c.validate().is_ok());
        c.replicas = 0;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = config(ExperimentKind::Spectrum, dir);
        c.epsilon_sweep = vec![0.5, 1.0];
        assert!(c.validate().is_err());
        let mut c = config(ExperimentKind::Spectrum, dir);
        c.tau = 3.0;
        assert!(c.validate().is_err());
        let mut c = config(ExperimentKind::Spectrum, dir);
        c.bin_base = 1.0;
        assert!(c.validate().is_err());
        assert!(config(ExperimentKind::Ingest, dir).validate().is_err());
    }

    #[test]
    fn config_json_round_trip_and_defaults() {
        let c: ExperimentConfig = serde_json::from_str(r#"{"experiment":"compare_hvm","n":500}"#).unwrap();
        assert_eq!(c.experiment, ExperimentKind::CompareHvm);
        assert_eq!(c.n, 500);
        assert_eq!(c.tau, 2.5);
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"nn":5}"#).is_err());
    }

    #[test]
    fn spectrum_run_writes_manifest_with_hashes() {
        let dir = tempfile::tempdir().unwrap();
        let m = run(&config(ExperimentKind::Spectrum, dir.path())).unwrap();
        assert_eq!(m.outputs.len(), 2);
        assert_eq!(m.replicas.len(), 2);
        for o in &m.outputs {
            let bytes = fs::read(dir.path().join(&o.file)).unwrap();
            assert_eq!(hex::encode(Sha256::digest(&bytes)), o.sha256);
            let lines = bytes.iter().filter(|&&b| b == b'\n').count();
            assert_eq!(lines, o.rows + 1);
        }
        let text = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
        assert!(text.starts_with("k,N_k,delta_k,c_k,c_k_over_f,range_id,n,tau,replica\n"));
        assert!(text.lines().skip(1).all(|l| l.ends_with(",-1")));
        let manifest: RunManifest =
            serde_json::from_str(&fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap()).unwrap();
        assert_eq!(manifest.outputs, m.outputs);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let mut ca = config(ExperimentKind::Regimes, a.path());
        ca.workers = Some(1);
        ca.replicas = 3;
        let mut cb = ca.clone();
        cb.output_path = b.path().to_path_buf();
        cb.workers = Some(3);
        let ma = run(&ca).unwrap();
        let mb = run(&cb).unwrap();
        assert_eq!(ma.outputs, mb.outputs);
    }

    #[test]
    fn theory_ignores_the_seed() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let mut ca = config(ExperimentKind::Theory, a.path());
        ca.k_grid = Some(vec![2, 10, 40, 45, 100, 158]);
        let mut cb = ca.clone();
        cb.seed = 12345;
        cb.output_path = b.path().to_path_buf();
        assert_eq!(run(&ca).unwrap().outputs, run(&cb).unwrap().outputs);
    }

    #[test]
    fn every_experiment_runs() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("edges.txt");
        fs::write(&input, "# toy\n1 2\n2 3\n3 1\n3 4\n").unwrap();
        for kind in [
            ExperimentKind::Spectrum,
            ExperimentKind::Regimes,
            ExperimentKind::Crossover,
            ExperimentKind::Theory,
            ExperimentKind::CompareHvm,
            ExperimentKind::Ingest,
            ExperimentKind::ConnectionCheck,
        ] {
            let out = dir.path().join(kind.name());
            let mut c = config(kind, &out);
            c.input = Some(input.clone());
            c.b_grid = Some(vec![0.1, 1.0, 10.0]);
            let m = run(&c).unwrap();
            assert!(!m.outputs.is_empty(), "{kind:?}");
            assert!(m.outputs.iter().all(|o| o.rows > 0), "{kind:?}");
        }
    }

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_f64(0.5), "0.5");
        assert_eq!(fmt_f64(1.0), "1.0");
        assert_eq!(fmt_f64(1e-20), "1e-20");
        assert_eq!(fmt_f64(f64::NAN), "");
    }
}
