//! Empirical CDFs and Kolmogorov–Smirnov distances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limitlaws::DistributionCurve;

pub const MIN_KS_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCdf {
    sorted_samples: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::Domain { what: "sample", value: f64::NAN, domain: "not NaN" });
        }
        samples.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { sorted_samples: samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted_samples
    }

    pub fn len(&self) -> usize {
        self.sorted_samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted_samples.is_empty()
    }

    /// #{samples ≤ x} / n.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted_samples.partition_point(|&s| s <= x) as f64 / self.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.sorted_samples.iter().sum::<f64>() / self.len() as f64
    }

    /// Unbiased sample standard deviation.
    pub fn sd(&self) -> f64 {
        let m = self.mean();
        let ss: f64 = self.sorted_samples.iter().map(|x| (x - m).powi(2)).sum();
        (ss / (self.len() as f64 - 1.0)).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub distance: f64,
    pub n_samples: usize,
    pub p_value: f64,
}

/// Q_KS(λ) = 2 Σ_{j≥1} (−1)^{j−1} e^{−2j²λ²}.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value of a KS distance with effective sample size `n_eff`,
/// with the usual small-sample correction of the argument.
pub fn kolmogorov_pvalue(distance: f64, n_eff: f64) -> f64 {
    let r = n_eff.sqrt();
    kolmogorov_survival((r + 0.12 + 0.11 / r) * distance)
}

fn need_samples(n: usize) -> Result<()> {
    if n < MIN_KS_SAMPLES {
        return Err(Error::Domain { what: "samples", value: n as f64, domain: ">= 100" });
    }
    Ok(())
}

/// sup |F̂ − F| checked on both sides of every jump.
pub fn ks_distance<F: Fn(f64) -> f64>(emp: &EmpiricalCdf, cdf: F) -> Result<KsResult> {
    need_samples(emp.len())?;
    let xs = emp.samples();
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        // ties form one jump
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[i] {
            j += 1;
        }
        let f = cdf(xs[i]);
        d = d.max((f - i as f64 / n).abs()).max(((j + 1) as f64 / n - f).abs());
        i = j + 1;
    }
    Ok(KsResult { distance: d, n_samples: xs.len(), p_value: kolmogorov_pvalue(d, n) })
}

pub fn ks_against_curve(emp: &EmpiricalCdf, curve: &DistributionCurve) -> Result<KsResult> {
    ks_distance(emp, |x| curve.eval(x))
}

/// Two-sample distance sup |F̂_a − F̂_b|.
pub fn ks_two_sample(a: &EmpiricalCdf, b: &EmpiricalCdf) -> Result<KsResult> {
    need_samples(a.len().min(b.len()))?;
    let (xa, xb) = (a.samples(), b.samples());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let n_eff = na * nb / (na + nb);
    Ok(KsResult { distance: d, n_samples: xa.len() + xb.len(), p_value: kolmogorov_pvalue(d, n_eff) })
}
