//! Phase-transition constants, the Marchenko–Pastur law and regime
//! classification.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::ensembles::EnsembleSpec;
use crate::limitlaws::quadrature::adaptive_simpson;

/// Default tie tolerance (relative) when comparing a spike to `w_c`.
pub const DEFAULT_TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Supercritical,
    Critical,
    Subcritical,
}

impl std::str::FromStr for Regime {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "supercritical" => Ok(Regime::Supercritical),
            "critical" => Ok(Regime::Critical),
            "subcritical" => Ok(Regime::Subcritical),
            other => Err(crate::Error::Config(format!("unknown regime `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictedLaw {
    GaussianGk,
    BbpFk,
    TracyWidom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseQuantities {
    pub gamma: f64,
    pub u_plus: f64,
    pub u_minus: f64,
    pub w_c: f64,
    pub tau: Option<f64>,
    pub sigma_pi: Option<f64>,
    pub rho_n: f64,
    pub sigma_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regimes: Vec<Regime>,
    /// Regime of π₁ (subcritical when white).
    pub leading: Regime,
    pub multiplicity: usize,
    pub law: PredictedLaw,
}

pub fn u_plus(sigma: f64, gamma: f64) -> f64 {
    sigma * sigma * (1.0 + gamma.powf(-0.5)).powi(2)
}

pub fn u_minus(sigma: f64, gamma: f64) -> f64 {
    sigma * sigma * (1.0 - gamma.powf(-0.5)).powi(2)
}

/// w_c = 1 + γ^{-1/2}.
pub fn critical_spike(gamma: f64) -> f64 {
    1.0 + gamma.powf(-0.5)
}

/// The critical spike `1 + sqrt(n/p)`, exact whenever `n/p` is a perfect square ratio.
pub fn critical_spike_for(n: usize, p: usize) -> f64 {
    1.0 + (n as f64 / p as f64).sqrt()
}

/// τ(π) = σ²π(1 + γ^{-1}/(π − 1)).
pub fn tau(pi: f64, sigma: f64, gamma: f64) -> f64 {
    sigma * sigma * pi * (1.0 + 1.0 / (gamma * (pi - 1.0)))
}

/// σ(π) = σ²π√(1 − γ^{-1}/(π − 1)²), real only for π ≥ w_c.
pub fn sigma_of_spike(pi: f64, sigma: f64, gamma: f64) -> Option<f64> {
    let inner = 1.0 - 1.0 / (gamma * (pi - 1.0) * (pi - 1.0));
    if inner < 0.0 {
        // a spike equal to w_c up to rounding
        if inner > -1e-12 {
            return Some(0.0);
        }
        return None;
    }
    Some(sigma * sigma * pi * inner.sqrt())
}

/// ρ_N = σ²(1 + γ_N^{-1/2})².
pub fn rho_n(sigma: f64, gamma_n: f64) -> f64 {
    u_plus(sigma, gamma_n)
}

/// σ_N = γ_N^{-1/2} σ² (1 + γ_N^{-1/2})^{4/3}.
pub fn sigma_n(sigma: f64, gamma_n: f64) -> f64 {
    let g = gamma_n.powf(-0.5);
    g * sigma * sigma * (1.0 + g).powf(4.0 / 3.0)
}

pub fn phase_quantities(spec: &EnsembleSpec) -> PhaseQuantities {
    let gamma = spec.gamma_n();
    let sigma = spec.sigma();
    let (tau_v, sigma_pi) = match spec.leading_spike() {
        Some(pi) => (Some(tau(pi, sigma, gamma)), sigma_of_spike(pi, sigma, gamma)),
        None => (None, None),
    };
    PhaseQuantities {
        gamma,
        u_plus: u_plus(sigma, gamma),
        u_minus: u_minus(sigma, gamma),
        w_c: critical_spike(gamma),
        tau: tau_v,
        sigma_pi,
        rho_n: rho_n(sigma, gamma),
        sigma_n: sigma_n(sigma, gamma),
    }
}

fn regime_of(pi: f64, w_c: f64, tol: f64) -> Regime {
    if (pi - w_c).abs() <= tol * w_c {
        Regime::Critical
    } else if pi > w_c {
        Regime::Supercritical
    } else {
        Regime::Subcritical
    }
}

pub fn classify(spec: &EnsembleSpec) -> RegimeReport {
    classify_with_tolerance(spec, DEFAULT_TIE_TOL)
}

pub fn classify_with_tolerance(spec: &EnsembleSpec, tol: f64) -> RegimeReport {
    let w_c = critical_spike(spec.gamma_n());
    let regimes: Vec<Regime> = spec.spikes.iter().map(|&pi| regime_of(pi, w_c, tol)).collect();
    let Some(&pi1) = spec.spikes.first() else {
        return RegimeReport { regimes, leading: Regime::Subcritical, multiplicity: 0, law: PredictedLaw::TracyWidom };
    };
    let multiplicity = spec.spikes.iter().take_while(|&&pi| (pi - pi1).abs() <= tol * pi1).count();
    let leading = regimes[0];
    let law = match leading {
        Regime::Supercritical => PredictedLaw::GaussianGk,
        Regime::Critical => PredictedLaw::BbpFk,
        Regime::Subcritical => PredictedLaw::TracyWidom,
    };
    RegimeReport { regimes, leading, multiplicity, law }
}

/// Almost-sure limit of λ₁.
pub fn as_limit(spec: &EnsembleSpec) -> f64 {
    let gamma = spec.gamma_n();
    let sigma = spec.sigma();
    match spec.leading_spike() {
        Some(pi) if classify(spec).leading == Regime::Supercritical => tau(pi, sigma, gamma),
        _ => u_plus(sigma, gamma),
    }
}

pub fn mp_density(x: f64, sigma: f64, gamma: f64) -> f64 {
    let (lo, hi) = (u_minus(sigma, gamma), u_plus(sigma, gamma));
    if x <= lo || x >= hi || x <= 0.0 {
        return 0.0;
    }
    gamma / (2.0 * std::f64::consts::PI * x * sigma * sigma) * ((hi - x) * (x - lo)).sqrt()
}

/// Marchenko–Pastur CDF.
///
/// With `x = u₋ + 2r sin²(φ/2)`, `r = (u₊ − u₋)/2`, the square-root endpoint
/// behaviour disappears and the integrand is smooth in φ.
pub fn mp_cdf(x: f64, sigma: f64, gamma: f64) -> f64 {
    let (lo, hi) = (u_minus(sigma, gamma), u_plus(sigma, gamma));
    if x <= lo {
        return 0.0;
    }
    if x >= hi {
        return 1.0;
    }
    let r = 0.5 * (hi - lo);
    let phi = 2.0 * ((x - lo) / (2.0 * r)).sqrt().min(1.0).asin();
    let c = gamma * r * r / (2.0 * std::f64::consts::PI * sigma * sigma);
    let f = |t: f64| {
        let s = (0.5 * t).sin();
        let denom = lo + 2.0 * r * s * s;
        if denom <= 0.0 {
            // γ = 1: the 1/x pole cancels against sin²φ at φ = 0
            return c * 4.0 * (0.5 * t).cos().powi(2) / (2.0 * r);
        }
        c * t.sin().powi(2) / denom
    };
    adaptive_simpson(f, 0.0, phi, 1e-13).clamp(0.0, 1.0)
}

/// Exact rational versions of the edge formulas, for `g = γ^{-1/2}` rational.
pub mod exact {
    use super::*;

    pub fn u_plus(sigma2: &BigRational, g: &BigRational) -> BigRational {
        let one = BigRational::one();
        sigma2 * (&one + g) * (&one + g)
    }

    pub fn critical_spike(g: &BigRational) -> BigRational {
        BigRational::one() + g
    }

    pub fn tau(pi: &BigRational, sigma2: &BigRational, g: &BigRational) -> BigRational {
        let one = BigRational::one();
        sigma2 * pi * (&one + g * g / (pi - &one))
    }

    /// σ(π)², which is rational even when σ(π) is not.
    pub fn sigma_of_spike_sq(pi: &BigRational, sigma2: &BigRational, g: &BigRational) -> BigRational {
        let one = BigRational::one();
        let d = pi - &one;
        let inner = &one - g * g / (&d * &d);
        if inner < BigRational::zero() {
            return -BigRational::one();
        }
        sigma2 * sigma2 * pi * pi * inner
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{EntryLaw, Field};
    use approx::assert_relative_eq;

    fn spec(n: usize, p: usize, spikes: Vec<f64>) -> EnsembleSpec {
        EnsembleSpec::white(n, p, Field::Complex, EntryLaw::gaussian(1.0), 0).with_spikes(spikes)
    }

    #[test]
    fn square_case_constants() {
        let q = phase_quantities(&spec(10, 10, vec![3.0]));
        assert_relative_eq!(q.u_plus, 4.0);
        assert_relative_eq!(q.u_minus, 0.0);
        assert_relative_eq!(q.w_c, 2.0);
        assert_relative_eq!(q.tau.unwrap(), 4.5);
        assert_relative_eq!(q.sigma_pi.unwrap(), 3.0 * 3f64.sqrt() / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn at_critical_spike() {
        let q = phase_quantities(&spec(10, 10, vec![2.0]));
        assert_relative_eq!(q.tau.unwrap(), 4.0);
        assert_eq!(q.sigma_pi, Some(0.0));
    }

    #[test]
    fn white_has_no_spike_quantities() {
        let q = phase_quantities(&spec(10, 20, vec![]));
        assert!(q.tau.is_none() && q.sigma_pi.is_none());
    }

    #[test]
    fn classification() {
        let r = classify(&spec(10, 10, vec![3.0]));
        assert_eq!((r.leading, r.multiplicity, r.law), (Regime::Supercritical, 1, PredictedLaw::GaussianGk));
        let r = classify(&spec(10, 10, vec![2.0]));
        assert_eq!((r.leading, r.law), (Regime::Critical, PredictedLaw::BbpFk));
        let r = classify(&spec(10, 40, vec![1.2]));
        assert_eq!((r.leading, r.law), (Regime::Subcritical, PredictedLaw::TracyWidom));
        let r = classify(&spec(10, 10, vec![3.0, 3.0, 1.5]));
        assert_eq!(r.multiplicity, 2);
        assert_eq!(r.regimes[2], Regime::Subcritical);
        let r = classify(&spec(200, 800, vec![critical_spike_for(200, 800)]));
        assert_eq!(r.leading, Regime::Critical);
    }

    #[test]
    fn almost_sure_limits() {
        assert_relative_eq!(as_limit(&spec(10, 10, vec![3.0])), 4.5);
        assert_relative_eq!(as_limit(&spec(10, 10, vec![1.5])), 4.0);
        assert_relative_eq!(as_limit(&spec(10, 10, vec![])), 4.0);
    }

    #[test]
    fn mp_cdf_endpoints_and_mass() {
        for &(sigma, gamma) in &[(1.0, 1.0), (1.0, 2.0), (0.7, 4.0)] {
            let lo = u_minus(sigma, gamma);
            let hi = u_plus(sigma, gamma);
            assert_eq!(mp_cdf(lo, sigma, gamma), 0.0);
            assert_eq!(mp_cdf(hi, sigma, gamma), 1.0);
            let almost = mp_cdf(hi * (1.0 - 1e-15), sigma, gamma);
            assert!((almost - 1.0).abs() < 1e-8, "{almost}");
        }
    }

    #[test]
    fn mp_cdf_matches_direct_quadrature() {
        // midpoint rule on the raw density, far from the endpoints
        let (sigma, gamma) = (1.0, 2.0);
        let (a, b) = (1.0, 2.0);
        let m = 200_000;
        let h = (b - a) / m as f64;
        let direct: f64 = (0..m).map(|i| mp_density(a + (i as f64 + 0.5) * h, sigma, gamma) * h).sum();
        let via_cdf = mp_cdf(b, sigma, gamma) - mp_cdf(a, sigma, gamma);
        assert!((direct - via_cdf).abs() < 1e-9);
    }

    #[test]
    fn exact_edge_identity() {
        use num_bigint::BigInt;
        let one = BigRational::one();
        // γ = 1 and γ = 4
        for g in [one.clone(), BigRational::new(BigInt::from(1), BigInt::from(2))] {
            for sigma2 in [one.clone(), BigRational::new(BigInt::from(9), BigInt::from(4))] {
                let wc = exact::critical_spike(&g);
                assert_eq!(exact::tau(&wc, &sigma2, &g), exact::u_plus(&sigma2, &g));
                assert!(exact::sigma_of_spike_sq(&wc, &sigma2, &g).is_zero());
            }
        }
    }
}
