//! Monte Carlo reference for the k-spike Gaussian limit: eigenvalues of a
//! small GUE or GOE matrix.

use faer::{c64, Mat};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::ensembles::Field;
use crate::error::{Error, Result};
use crate::rng::trial_rng;
use crate::spectra::{eigenvalues_hermitian, eigenvalues_real};

/// `n_trials` draws of all k eigenvalues (descending) of a k×k GUE (complex)
/// or GOE (real) matrix. Diagonal entries are N(0,1). Off-diagonal entries
/// have E|h|² = 1 in the complex case and variance 1/2 in the real case,
/// matching the √2 normalization of the real rescaling.
pub fn gk_reference_sample(k: usize, n_trials: usize, field: Field, seed: u64) -> Result<Vec<Vec<f64>>> {
    if !(1..=8).contains(&k) {
        return Err(Error::Domain { what: "k", value: k as f64, domain: "1..=8" });
    }
    (0..n_trials)
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let mut g = || -> f64 { rng.sample(StandardNormal) };
            let h = std::f64::consts::FRAC_1_SQRT_2;
            match field {
                Field::Complex => {
                    let mut m = Mat::<c64>::zeros(k, k);
                    for i in 0..k {
                        m[(i, i)] = c64::new(g(), 0.0);
                        for j in i + 1..k {
                            let z = c64::new(h * g(), h * g());
                            m[(i, j)] = z;
                            m[(j, i)] = z.conj();
                        }
                    }
                    eigenvalues_hermitian(m.as_ref()).map(|e| e.lambdas)
                }
                Field::Real => {
                    let mut m = Mat::<f64>::zeros(k, k);
                    for i in 0..k {
                        m[(i, i)] = g();
                        for j in i + 1..k {
                            let z = h * g();
                            m[(i, j)] = z;
                            m[(j, i)] = z;
                        }
                    }
                    eigenvalues_real(m.as_ref()).map(|e| e.lambdas)
                }
            }
        })
        .collect()
}
