//! Monte Carlo campaigns over one ensemble, with per-trial persistence.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};

use super::stats::EmpiricalCdf;
use crate::ensembles::{draw, EnsembleSpec};
use crate::error::{Error, Result};
use crate::limitlaws::curve::csv_err;
use crate::phase::{self, PhaseQuantities, Regime};
use crate::spectra::{eigenvalues, rescale};

pub const MIN_TRIALS: usize = 100;
pub const MAX_K_TOP: usize = 8;
/// Trials computed between two flushes of the results file.
pub const CHUNK: usize = 64;

pub const RESULTS_FILE: &str = "results.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub spec: EnsembleSpec,
    pub trials: usize,
    pub k_top: usize,
    #[serde(default)]
    pub regime_override: Option<Regime>,
    /// Directory receiving `results.csv` and `manifest.json`.
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    pub workers: usize,
}

impl ExperimentPlan {
    pub fn new(spec: EnsembleSpec, trials: usize, k_top: usize) -> Self {
        ExperimentPlan { spec, trials, k_top, regime_override: None, output_path: None, workers: 1 }
    }

    pub fn with_output(mut self, dir: impl Into<PathBuf>) -> Self {
        self.output_path = Some(dir.into());
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_regime(mut self, regime: Regime) -> Self {
        self.regime_override = Some(regime);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.trials < MIN_TRIALS {
            return Err(Error::InvalidSpec(format!("trials = {} < {MIN_TRIALS}", self.trials)));
        }
        if self.k_top == 0 || self.k_top > MAX_K_TOP || self.k_top > self.spec.n {
            return Err(Error::InvalidSpec(format!(
                "k_top = {} outside 1..={}",
                self.k_top,
                MAX_K_TOP.min(self.spec.n)
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidSpec("workers must be positive".into()));
        }
        Ok(())
    }

    pub fn regime(&self) -> Regime {
        self.regime_override.unwrap_or_else(|| phase::classify(&self.spec).leading)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: u64,
    pub lambdas: Vec<f64>,
    pub xi: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub spikelab: String,
    pub results_format: u32,
}

impl Default for Versions {
    fn default() -> Self {
        Versions { spikelab: env!("CARGO_PKG_VERSION").into(), results_format: 1 }
    }
}

/// Everything persisted about a campaign except the per-trial rows. The
/// worker count is left out so outputs do not depend on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: EnsembleSpec,
    pub trials: usize,
    pub k_top: usize,
    pub regime_override: Option<Regime>,
    pub regime: Regime,
    pub phase: PhaseQuantities,
    pub seed: u64,
    pub versions: Versions,
    pub completed_trials: usize,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub manifest: Manifest,
    pub rows: Vec<TrialResult>,
}

impl ExperimentResult {
    pub fn regime(&self) -> Regime {
        self.manifest.regime
    }

    /// λ_{i+1} over all trials.
    pub fn lambda_column(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.lambdas[i]).collect()
    }

    /// ξ_{i+1} over all trials.
    pub fn xi_column(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.xi[i]).collect()
    }

    /// Empirical CDF of ξ_i for every top index i.
    pub fn cdfs(&self) -> Result<Vec<EmpiricalCdf>> {
        (0..self.manifest.k_top).map(|i| EmpiricalCdf::new(self.xi_column(i))).collect()
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut w = ResultsWriter::create(dir, self.manifest.k_top)?;
        w.append(&self.rows)?;
        write_manifest(dir, &self.manifest)
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let manifest: Manifest = serde_json::from_reader(File::open(dir.join(MANIFEST_FILE))?)?;
        let k = manifest.k_top;
        let mut rd = csv::Reader::from_path(dir.join(RESULTS_FILE)).map_err(csv_err)?;
        let mut rows = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(csv_err)?;
            if rec.len() != 1 + 2 * k {
                return Err(Error::Config(format!("results row has {} fields, expected {}", rec.len(), 1 + 2 * k)));
            }
            let num = |i: usize| -> Result<f64> {
                rec[i].parse().map_err(|_| Error::Config(format!("bad number `{}`", &rec[i])))
            };
            let trial = rec[0].parse().map_err(|_| Error::Config(format!("bad trial `{}`", &rec[0])))?;
            let lambdas = (1..=k).map(num).collect::<Result<_>>()?;
            let xi = (k + 1..=2 * k).map(num).collect::<Result<_>>()?;
            rows.push(TrialResult { trial, lambdas, xi });
        }
        Ok(ExperimentResult { manifest, rows })
    }
}

fn write_manifest(dir: &Path, m: &Manifest) -> Result<()> {
    let tmp = dir.join(format!("{MANIFEST_FILE}.tmp"));
    let mut f = BufWriter::new(File::create(&tmp)?);
    serde_json::to_writer_pretty(&mut f, m)?;
    f.write_all(b"\n")?;
    f.flush()?;
    drop(f);
    fs::rename(tmp, dir.join(MANIFEST_FILE))?;
    Ok(())
}

struct ResultsWriter {
    inner: csv::Writer<File>,
}

impl ResultsWriter {
    fn create(dir: &Path, k: usize) -> Result<Self> {
        let mut inner = csv::Writer::from_path(dir.join(RESULTS_FILE)).map_err(csv_err)?;
        let mut header = vec!["trial".to_string()];
        header.extend((1..=k).map(|i| format!("lambda_{i}")));
        header.extend((1..=k).map(|i| format!("xi_{i}")));
        inner.write_record(&header).map_err(csv_err)?;
        inner.flush()?;
        Ok(ResultsWriter { inner })
    }

    fn append(&mut self, rows: &[TrialResult]) -> Result<()> {
        for r in rows {
            // shortest round-trip formatting keeps reloads bit-exact
            let mut rec = vec![r.trial.to_string()];
            rec.extend(r.lambdas.iter().chain(&r.xi).map(|x| x.to_string()));
            self.inner.write_record(&rec).map_err(csv_err)?;
        }
        self.inner.flush()?;
        Ok(())
    }
}

/// One trial: draw, diagonalize, rescale the top `k_top` eigenvalues.
pub fn run_trial(spec: &EnsembleSpec, regime: Regime, k_top: usize, trial: u64) -> Result<TrialResult> {
    let sample = eigenvalues(&draw(spec, trial)?)?;
    let xi = rescale(&sample, spec, regime, k_top)?.xi;
    Ok(TrialResult { trial, lambdas: sample.lambdas[..k_top].to_vec(), xi })
}

pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    run_experiment_until(plan, &AtomicBool::new(false))
}

/// Runs the plan until done or until `stop` is raised. Completed chunks are
/// flushed to disk as they finish, so an interrupted campaign leaves a
/// consistent prefix and a manifest marked incomplete.
pub fn run_experiment_until(plan: &ExperimentPlan, stop: &AtomicBool) -> Result<ExperimentResult> {
    plan.validate()?;
    let regime = plan.regime();
    let mut manifest = Manifest {
        spec: plan.spec.clone(),
        trials: plan.trials,
        k_top: plan.k_top,
        regime_override: plan.regime_override,
        regime,
        phase: phase::phase_quantities(&plan.spec),
        seed: plan.spec.seed,
        versions: Versions::default(),
        completed_trials: 0,
        complete: false,
    };
    let mut writer = match &plan.output_path {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            write_manifest(dir, &manifest)?;
            Some(ResultsWriter::create(dir, plan.k_top)?)
        }
        None => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;

    let mut rows = Vec::with_capacity(plan.trials);
    let mut start = 0;
    while start < plan.trials && !stop.load(Ordering::Relaxed) {
        let end = (start + CHUNK).min(plan.trials);
        let chunk: Vec<TrialResult> = pool.install(|| {
            (start as u64..end as u64)
                .into_par_iter()
                .map(|t| run_trial(&plan.spec, regime, plan.k_top, t))
                .collect::<Result<_>>()
        })?;
        if let Some(w) = writer.as_mut() {
            w.append(&chunk)?;
        }
        rows.extend(chunk);
        start = end;
    }
    manifest.completed_trials = rows.len();
    manifest.complete = rows.len() == plan.trials;
    if let Some(dir) = &plan.output_path {
        write_manifest(dir, &manifest)?;
    }
    Ok(ExperimentResult { manifest, rows })
}
