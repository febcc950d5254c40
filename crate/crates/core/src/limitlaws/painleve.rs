//! Tracy–Widom F₁ and F₂ through the Hastings–McLeod solution of Painlevé II.
//!
//! Starting from q ≈ Ai at s = 8 the system
//! `q'' = s q + 2q³, I' = −q², U' = −I, J' = −q`
//! is integrated leftwards with an adaptive Dormand–Prince 5(4) scheme, where
//! `I = ∫_s^∞ q²`, `U = ∫_s^∞ (t − s) q²`, `J = ∫_s^∞ q`. Then
//! `F₂ = exp(−U)` and `F₁ = exp(−(U + J)/2)`.

use super::airy::airy_pair;
use super::quadrature::GaussLegendre;
use crate::error::{Error, Result};

const S0: f64 = 8.0;
const RTOL: f64 = 1e-12;
const ATOL: f64 = 1e-30;

type State = [f64; 5];

fn rhs(s: f64, y: &State) -> State {
    let q = y[0];
    [y[1], s * q + 2.0 * q * q * q, -q * q, -y[2], -q]
}

fn initial_state() -> State {
    let (q, qp) = airy_pair(S0);
    let gl = GaussLegendre::new(20);
    let i0 = gl.integrate_composite(S0, 30.0, 22, |t| airy_pair(t).0.powi(2));
    let u0 = gl.integrate_composite(S0, 30.0, 22, |t| (t - S0) * airy_pair(t).0.powi(2));
    let j0 = gl.integrate_composite(S0, 30.0, 22, |t| airy_pair(t).0);
    [q, qp, i0, u0, j0]
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// One Dormand–Prince step; returns the 5th-order state and the error norm.
fn dopri_step(s: f64, y: &State, h: f64) -> (State, f64) {
    let mut k = [[0.0; 5]; 7];
    for stage in 0..7 {
        let mut yi = *y;
        for (j, kj) in k.iter().enumerate().take(stage) {
            for d in 0..5 {
                yi[d] += h * A[stage][j] * kj[d];
            }
        }
        k[stage] = rhs(s + C[stage] * h, &yi);
    }
    // the last row of A is the 5th-order weight vector
    let mut y5 = *y;
    let mut err = 0.0;
    for d in 0..5 {
        let (mut hi, mut lo) = (0.0, 0.0);
        for st in 0..7 {
            let b5 = if st < 6 { A[6][st] } else { 0.0 };
            hi += b5 * k[st][d];
            lo += B4[st] * k[st][d];
        }
        y5[d] += h * hi;
        let sc = ATOL + RTOL * y[d].abs().max(y5[d].abs());
        err += (h * (hi - lo) / sc).powi(2);
    }
    (y5, (err / 5.0).sqrt())
}

/// Integrates from s = 8 down through `targets` (any order) and returns the
/// state at each of them.
fn solve_at(targets: &[f64]) -> Result<Vec<State>> {
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by(|&a, &b| targets[b].total_cmp(&targets[a]));
    let mut out = vec![[0.0; 5]; targets.len()];
    let mut s = S0;
    let mut y = initial_state();
    let mut h: f64 = -1e-3;
    for idx in order {
        let target = targets[idx];
        if target >= S0 {
            return Err(Error::Domain { what: "s", value: target, domain: "(-inf, 8)" });
        }
        while s > target {
            let step = if s + h < target { target - s } else { h };
            if step.abs() < 1e-14 * s.abs().max(1.0) && s - target > 1e-14 * s.abs().max(1.0) {
                return Err(Error::Ode { at: s });
            }
            let (y_new, err) = dopri_step(s, &y, step);
            if err <= 1.0 {
                s = if step == target - s { target } else { s + step };
                y = y_new;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = step * factor;
            if !h.is_finite() || y.iter().any(|v| !v.is_finite()) {
                return Err(Error::Ode { at: s });
            }
            if h.abs() < 1e-14 * s.abs().max(1.0) {
                return Err(Error::Ode { at: s });
            }
        }
        out[idx] = y;
    }
    Ok(out)
}

fn check(x: f64) -> Result<()> {
    if !(-10.0..=6.0).contains(&x) {
        return Err(Error::Domain { what: "x", value: x, domain: "[-10, 6]" });
    }
    Ok(())
}

/// `(F₁(x), F₂(x))` at every point of `xs`.
pub fn tw_cdfs(xs: &[f64]) -> Result<Vec<(f64, f64)>> {
    for &x in xs {
        check(x)?;
    }
    let states = solve_at(xs)?;
    Ok(states
        .iter()
        .map(|y| {
            let f2 = (-y[3]).exp();
            let f1 = (-(y[3] + y[4]) / 2.0).exp();
            (f1.clamp(0.0, 1.0), f2.clamp(0.0, 1.0))
        })
        .collect())
}

/// F_GOE(x).
pub fn tw_goe_cdf(x: f64) -> Result<f64> {
    Ok(tw_cdfs(&[x])?[0].0)
}

/// F_GUE(x) along the Painlevé route, for cross-validation.
pub fn tw_gue_cdf_painleve(x: f64) -> Result<f64> {
    Ok(tw_cdfs(&[x])?[0].1)
}

/// The Hastings–McLeod q at the given points.
pub fn hastings_mcleod(xs: &[f64]) -> Result<Vec<f64>> {
    Ok(solve_at(xs)?.iter().map(|y| y[0]).collect())
}
