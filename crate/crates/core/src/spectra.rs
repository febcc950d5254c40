//! Eigenvalues of a draw and the regime-specific rescalings.

use faer::{c64, MatRef, Side};
use serde::{Deserialize, Serialize};

use crate::ensembles::{EnsembleSpec, Field, MatrixDraw};
use crate::error::{Error, Result};
use crate::phase::{self, Regime};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenSample {
    /// Descending.
    pub lambdas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescaledSample {
    pub regime: Regime,
    pub xi: Vec<f64>,
}

fn descending(mut v: Vec<f64>) -> EigenSample {
    v.sort_by(|a, b| b.total_cmp(a));
    EigenSample { lambdas: v }
}

pub fn eigenvalues_real(v: MatRef<'_, f64>) -> Result<EigenSample> {
    let ev = v.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::Convergence)?;
    Ok(descending(ev))
}

pub fn eigenvalues_hermitian(v: MatRef<'_, c64>) -> Result<EigenSample> {
    let ev = v.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::Convergence)?;
    Ok(descending(ev))
}

/// All eigenvalues of `draw.v`, descending.
pub fn eigenvalues(draw: &MatrixDraw) -> Result<EigenSample> {
    match draw {
        MatrixDraw::Real { v, .. } => eigenvalues_real(v.as_ref()),
        MatrixDraw::Complex { v, .. } => eigenvalues_hermitian(v.as_ref()),
    }
}

/// Maps the top `k_top` eigenvalues to ξ_i for the given regime, with
/// finite-N constants built from γ_N = p/n.
pub fn rescale(sample: &EigenSample, spec: &EnsembleSpec, regime: Regime, k_top: usize) -> Result<RescaledSample> {
    if k_top > sample.lambdas.len() {
        return Err(Error::Dimension(format!("k_top = {k_top} exceeds {} eigenvalues", sample.lambdas.len())));
    }
    let n = spec.n as f64;
    let gamma = spec.gamma_n();
    let sigma = spec.sigma();
    let top = &sample.lambdas[..k_top];
    let xi = match regime {
        Regime::Supercritical => {
            let pi = spec.leading_spike().ok_or_else(|| Error::Regime("supercritical scaling needs a spike".into()))?;
            let sp = phase::sigma_of_spike(pi, sigma, gamma)
                .filter(|s| *s > 0.0)
                .ok_or_else(|| Error::Regime(format!("sigma(pi) is not real and positive for pi = {pi}")))?;
            let t = phase::tau(pi, sigma, gamma);
            let denom = match spec.field {
                Field::Complex => sp,
                Field::Real => 2f64.sqrt() * sp,
            };
            top.iter().map(|l| n.sqrt() * (l - t) / denom).collect()
        }
        Regime::Critical | Regime::Subcritical => {
            let rho = phase::rho_n(sigma, gamma);
            let sn = phase::sigma_n(sigma, gamma);
            top.iter().map(|l| n.powf(2.0 / 3.0) * (l - rho) / sn).collect()
        }
    };
    Ok(RescaledSample { regime, xi })
}
