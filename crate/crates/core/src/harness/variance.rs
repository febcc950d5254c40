//! Fluctuations of Tr (V/scale)^{s_N} across sizes and entry laws.

use serde::{Deserialize, Serialize};

use super::experiment::ExperimentPlan;
use crate::ensembles::{EntryLaw, LawKind};
use crate::error::Result;
use crate::momentlab::{moment_scale, path_length, trace_power_samples};
use crate::rng::derive_seed;

pub const VARIANCE_SIZES: [usize; 3] = [50, 100, 200];
/// Largest log-log slope of the variance in n still read as "no growth".
pub const TREND_SLOPE_MAX: f64 = 0.25;
/// Largest standardized variance gap between entry laws.
pub const Z_MAX: f64 = 4.0;
pub const LAWS: [LawKind; 2] = [LawKind::Gaussian, LawKind::ThreePointMatch];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceRow {
    pub n: usize,
    pub p: usize,
    pub law: LawKind,
    pub power: usize,
    pub scale: f64,
    pub variance: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub rows: Vec<VarianceRow>,
    /// Least-squares slope of ln Var against ln n, per law in `LAWS` order.
    pub slopes: Vec<f64>,
    /// Standardized Gaussian minus three-point variance gap per size.
    pub z_gaps: Vec<f64>,
    pub bounded: bool,
    pub universal: bool,
}

/// Sample variance and its standard error √((m₄ − v²)/T).
pub fn variance_with_se(xs: &[f64]) -> (f64, f64) {
    let t = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / t;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0);
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / t;
    (var, ((m4 - var * var).max(0.0) / t).sqrt())
}

pub fn loglog_slope(ns: &[usize], ys: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ls: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ls.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ls).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn variance_check(plan: &ExperimentPlan, c: f64) -> Result<VarianceReport> {
    variance_check_sizes(plan, c, &VARIANCE_SIZES)
}

/// Var Tr (V/scale)^{s_N} for each size, keeping γ_N, spikes, field and σ of
/// the plan, under Gaussian and three-point entries with independent seeds.
pub fn variance_check_sizes(plan: &ExperimentPlan, c: f64, sizes: &[usize]) -> Result<VarianceReport> {
    plan.validate()?;
    let gamma = plan.spec.gamma_n();
    let mut rows = Vec::new();
    for &n in sizes {
        let p = (n as f64 * gamma).round() as usize;
        for (li, &law) in LAWS.iter().enumerate() {
            let mut spec = plan.spec.clone();
            spec.n = n;
            spec.p = p;
            spec.entry_law = EntryLaw::new(law, plan.spec.sigma())?;
            spec.seed = derive_seed(plan.spec.seed, (n * LAWS.len() + li) as u64);
            let power = path_length(&spec, c);
            let scale = moment_scale(&spec);
            let xs = trace_power_samples(&spec, power, scale, plan.trials)?;
            let (variance, std_error) = variance_with_se(&xs);
            rows.push(VarianceRow { n, p, law, power, scale, variance, std_error });
        }
    }
    let slopes: Vec<f64> = LAWS
        .iter()
        .map(|&law| {
            let v: Vec<f64> = rows.iter().filter(|r| r.law == law).map(|r| r.variance).collect();
            loglog_slope(sizes, &v)
        })
        .collect();
    let z_gaps: Vec<f64> = rows
        .chunks(LAWS.len())
        .map(|pair| {
            (pair[0].variance - pair[1].variance) / (pair[0].std_error.powi(2) + pair[1].std_error.powi(2)).sqrt()
        })
        .collect();
    let bounded = slopes.iter().all(|&s| s < TREND_SLOPE_MAX);
    let universal = z_gaps.iter().all(|z| z.abs() < Z_MAX);
    Ok(VarianceReport { rows, slopes, z_gaps, bounded, universal })
}
