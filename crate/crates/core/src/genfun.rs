//! Exact power series for the path generating functions G, G̃, F, K, H and
//! the coefficients a_n they produce.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::str::FromStr;

use crate::dyck::{narayana_ext, returns_table};
use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 400;

/// A power series in z truncated after `coeffs.len() - 1`, tagged with the
/// parameters it was built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub coeffs: Vec<BigRational>,
    pub pi1: BigRational,
    pub gamma: BigRational,
}

impl Series {
    pub fn from_coeffs(coeffs: Vec<BigRational>, pi1: BigRational, gamma: BigRational) -> Self {
        Series { coeffs, pi1, gamma }
    }

    /// Highest coefficient index kept.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    fn like(&self, coeffs: Vec<BigRational>) -> Series {
        Series { coeffs, pi1: self.pi1.clone(), gamma: self.gamma.clone() }
    }

    pub fn constant(&self, c: BigRational) -> Series {
        let mut v = vec![BigRational::zero(); self.coeffs.len()];
        v[0] = c;
        self.like(v)
    }

    pub fn add(&self, other: &Series) -> Series {
        let n = self.coeffs.len().min(other.coeffs.len());
        self.like((0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect())
    }

    pub fn sub(&self, other: &Series) -> Series {
        let n = self.coeffs.len().min(other.coeffs.len());
        self.like((0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Series {
        self.like(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Series) -> Series {
        let n = self.coeffs.len().min(other.coeffs.len());
        self.like((0..n).map(|k| cauchy(&self.coeffs, &other.coeffs, k)).collect())
    }

    /// Multiplication by z, keeping the truncation order.
    pub fn shift(&self) -> Series {
        let mut v = Vec::with_capacity(self.coeffs.len());
        v.push(BigRational::zero());
        v.extend(self.coeffs[..self.order()].iter().cloned());
        self.like(v)
    }

    /// d/dz; the result is known one order less.
    pub fn derivative(&self) -> Series {
        let v: Vec<BigRational> =
            (1..self.coeffs.len()).map(|i| &self.coeffs[i] * BigRational::from_integer(BigInt::from(i))).collect();
        self.like(if v.is_empty() { vec![BigRational::zero()] } else { v })
    }

    /// self / other for a divisor with nonzero constant term.
    pub fn div(&self, other: &Series) -> Result<Series> {
        let d0 = &other.coeffs[0];
        if d0.is_zero() {
            return Err(Error::Domain { what: "divisor constant term", value: 0.0, domain: "nonzero" });
        }
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut q: Vec<BigRational> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for j in 0..k {
                acc -= &q[j] * &other.coeffs[k - j];
            }
            q.push(acc / d0);
        }
        Ok(self.like(q))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

fn cauchy(a: &[BigRational], b: &[BigRational], k: usize) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 0..=k {
        acc += &a[i] * &b[k - i];
    }
    acc
}

fn check_order(n_max: usize) -> Result<()> {
    if n_max > MAX_ORDER {
        return Err(Error::Domain { what: "n_max", value: n_max as f64, domain: "n_max <= 400" });
    }
    Ok(())
}

/// G and G̃ together, from G̃ = 1 + zGG̃ and G = 1 + γ⁻¹zG̃G.
fn g_pair(gamma: &BigRational, n_max: usize) -> (Vec<BigRational>, Vec<BigRational>) {
    let inv = gamma.recip();
    let mut g = vec![BigRational::one()];
    let mut gt = vec![BigRational::one()];
    for n in 1..=n_max {
        let prod = cauchy(&g, &gt, n - 1);
        g.push(&inv * &prod);
        gt.push(prod);
    }
    (g, gt)
}

/// Σ_x γ^{−o_x} zⁿ over Dyck paths.
pub fn series_g(gamma: &BigRational, n_max: usize) -> Result<Series> {
    check_order(n_max)?;
    Ok(Series::from_coeffs(g_pair(gamma, n_max).0, BigRational::one(), gamma.clone()))
}

/// Σ_x γ^{−e_x} zⁿ over Dyck paths.
pub fn series_g_tilde(gamma: &BigRational, n_max: usize) -> Result<Series> {
    check_order(n_max)?;
    Ok(Series::from_coeffs(g_pair(gamma, n_max).1, BigRational::one(), gamma.clone()))
}

/// F = π₁ + π₁zGF.
pub fn series_f(pi1: &BigRational, gamma: &BigRational, n_max: usize) -> Result<Series> {
    check_order(n_max)?;
    let (g, _) = g_pair(gamma, n_max);
    let mut f = vec![pi1.clone()];
    for n in 1..=n_max {
        let c = pi1 * cauchy(&g, &f, n - 1);
        f.push(c);
    }
    Ok(Series::from_coeffs(f, pi1.clone(), gamma.clone()))
}

/// K = z (zG)′, so K_n = n G_{n−1}.
pub fn series_k(gamma: &BigRational, n_max: usize) -> Result<Series> {
    check_order(n_max)?;
    let (g, _) = g_pair(gamma, n_max);
    let k = (0..=n_max)
        .map(|n| if n == 0 { BigRational::zero() } else { &g[n - 1] * BigRational::from_integer(n.into()) })
        .collect();
    Ok(Series::from_coeffs(k, BigRational::one(), gamma.clone()))
}

/// H = F K.
pub fn series_h(pi1: &BigRational, gamma: &BigRational, n_max: usize) -> Result<Series> {
    Ok(series_f(pi1, gamma, n_max)?.mul(&series_k(gamma, n_max)?))
}

/// U = zG expanded from its algebraic equation
/// U(U − 1) = z((1 − γ⁻¹)U − 1), i.e. U = z + U² − (1 − γ⁻¹) z U.
pub fn series_u_algebraic(gamma: &BigRational, n_max: usize) -> Result<Series> {
    check_order(n_max)?;
    let c = BigRational::one() - gamma.recip();
    let mut u = vec![BigRational::zero()];
    for n in 1..=n_max {
        let pu = u_padded(&u, n);
        let mut v = cauchy(&pu, &pu, n) - &c * &u[n - 1];
        if n == 1 {
            v += BigRational::one();
        }
        u.push(v);
    }
    Ok(Series::from_coeffs(u, BigRational::one(), gamma.clone()))
}

// u with a zero placeholder at index n so the Cauchy sum can read it; it
// only ever multiplies u[0] = 0.
fn u_padded(u: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut v = u.to_vec();
    v.resize(n + 1, BigRational::zero());
    v
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesCoeffs {
    /// a_0..a_{n_max}, with a_0 = 0.
    pub a: Vec<BigRational>,
    /// σ^{2n} a_n.
    pub a_prime: Vec<f64>,
    pub sigma: f64,
}

pub fn coeffs_a(pi1: &BigRational, gamma: &BigRational, sigma: f64, n_max: usize) -> Result<SeriesCoeffs> {
    let a = series_h(pi1, gamma, n_max)?.coeffs;
    let s2 = sigma * sigma;
    let a_prime = a.iter().enumerate().map(|(n, x)| (ln_rational(x) + n as f64 * s2.ln()).exp()).collect();
    Ok(SeriesCoeffs { a, a_prime, sigma })
}

/// The quadruple sum over first-cluster length s₁, its odd marked instants
/// k₁, the number s of spike weights and total odd marked instants k.
/// The remaining path carries s − 1 returns to zero (the final one
/// included); the empty remainder is the single term with s = 1.
pub fn a_direct_sum(pi1: &BigRational, gamma: &BigRational, n: usize) -> BigRational {
    let mut total = BigRational::zero();
    let tables: Vec<Vec<Vec<BigUint>>> = (0..n).map(returns_table).collect();
    let count = |len: usize, k: usize, m: usize| -> BigUint {
        tables[len].get(k).and_then(|row| row.get(m)).cloned().unwrap_or_default()
    };
    for s1 in 1..=n {
        let rest = n - s1;
        for k1 in 1..=n {
            let head = BigUint::from(s1) * narayana_ext(s1 - 1, s1 - k1.min(s1));
            if k1 > s1 || head.is_zero() {
                continue;
            }
            for s in 1..=rest + 1 {
                for k in (k1 + s - 1)..=(k1 + rest) {
                    let c = count(rest, k - k1, s - 1);
                    if c.is_zero() {
                        continue;
                    }
                    let w = pi1.pow(s as i32) * gamma.pow(k as i32 - n as i32);
                    total += BigRational::from_integer(BigInt::from(&head * c)) * w;
                }
            }
        }
    }
    total
}

/// ln |x| for a nonzero rational of any size; −∞ for zero.
pub fn ln_rational(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_bigint(&x.numer().abs()) - ln_bigint(&x.denom().abs())
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_f64().expect("fits after shift");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Mean of a′_{n+1}/a′_n over the last `window` ratios.
pub fn growth_rate(c: &SeriesCoeffs, window: usize) -> Result<f64> {
    let n_max = c.a.len() - 1;
    if window == 0 || n_max < 2 * window {
        return Err(Error::Domain { what: "window", value: window as f64, domain: "1 <= window <= n_max/2" });
    }
    let s2 = c.sigma * c.sigma;
    let sum: f64 = (n_max - window..n_max).map(|n| s2 * ratio(&c.a[n + 1], &c.a[n])).sum();
    Ok(sum / window as f64)
}

fn ratio(num: &BigRational, den: &BigRational) -> f64 {
    (ln_rational(num) - ln_rational(den)).exp()
}

/// √n a′_n / baseⁿ for n = 1..=n_max, the normalization of the sub-critical
/// growth.
pub fn normalized_sequence(c: &SeriesCoeffs, base: f64) -> Vec<f64> {
    let s2 = c.sigma * c.sigma;
    (1..c.a.len())
        .map(|n| {
            let n_f = n as f64;
            (0.5 * n_f.ln() + ln_rational(&c.a[n]) + n_f * (s2 / base).ln()).exp()
        })
        .collect()
}

/// CSV rows `n,a_num,a_den,a_prime,ratio`; ratio is a′_n/a′_{n−1}.
pub fn write_coeffs_csv<W: Write>(c: &SeriesCoeffs, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let err = crate::limitlaws::curve::csv_err;
    wr.write_record(["n", "a_num", "a_den", "a_prime", "ratio"]).map_err(err)?;
    let s2 = c.sigma * c.sigma;
    for n in 1..c.a.len() {
        let r = if c.a[n - 1].is_zero() {
            String::new()
        } else {
            crate::limitlaws::curve::sig10(s2 * ratio(&c.a[n], &c.a[n - 1]))
        };
        wr.write_record([
            n.to_string(),
            c.a[n].numer().to_string(),
            c.a[n].denom().to_string(),
            crate::limitlaws::curve::sig10(c.a_prime[n]),
            r,
        ])
        .map_err(err)?;
    }
    wr.flush()?;
    Ok(())
}

/// Parses `3`, `3/2` or a finite decimal such as `1.25` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidSpec(format!("not a rational number: {s:?}"));
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = BigInt::from_str(&format!("{int}{frac}")).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(digits, den));
    }
    BigRational::from_str(s).map_err(|_| bad())
}
