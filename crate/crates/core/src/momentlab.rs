//! Exact and Monte Carlo moments E[Tr V_N^s].
//!
//! The exact routes only handle tiny instances: the path expansion runs over
//! N^s p^s index tuples and the assignment oracle over every value of X.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

use crate::dyck::{binomial, one_edges, path_stats, EdgePath};
use crate::ensembles::{draw, EnsembleSpec, Field, LawKind};
use crate::error::{Error, Result};
use crate::genfun::parse_rational;
use crate::phase::{self, Regime};
use crate::spectra::eigenvalues;

pub const MAX_N: usize = 3;
pub const MAX_P: usize = 4;
pub const MAX_POWER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MomentMethod {
    ExactEnumeration,
    /// The path expansion with Gaussian moments of the same variance,
    /// whatever the entry law of the spec.
    SymbolicGaussian,
    MonteCarlo {
        trials: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRequest {
    pub spec: EnsembleSpec,
    pub power: usize,
    pub method: MomentMethod,
}

/// An exact rational that serializes as `"num/den"`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Exact(pub BigRational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Exact).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MomentValue {
    Exact { value: Exact, approx: f64 },
    Estimate { mean: f64, std_error: f64, trials: usize },
}

impl MomentValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            MomentValue::Exact { approx, .. } => *approx,
            MomentValue::Estimate { mean, .. } => *mean,
        }
    }
}

/// Contribution of all index tuples whose edge path has `one_edges` edges
/// with bottom vertex 1 and whose trajectory has `k` odd marked instants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathTerm {
    pub one_edges: usize,
    pub k: usize,
    pub paths: u64,
    pub value: Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub method: MomentMethod,
    pub power: usize,
    pub value: MomentValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path_terms: Option<Vec<PathTerm>>,
}

/// The rational a float was written as: its shortest round-trip decimal.
pub fn decimal_rational(x: f64) -> Result<BigRational> {
    parse_rational(&format!("{x}"))
}

/// Gaussian rationals re + i·im.
#[derive(Clone, Debug, PartialEq)]
struct GaussQ {
    re: BigRational,
    im: BigRational,
}

impl GaussQ {
    fn zero() -> Self {
        GaussQ { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn real(re: BigRational) -> Self {
        GaussQ { re, im: BigRational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussQ) -> GaussQ {
        GaussQ { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn add(&mut self, o: &GaussQ) {
        self.re += &o.re;
        self.im += &o.im;
    }

    /// c · iᵉ
    fn unit_power(c: BigRational, e: usize) -> GaussQ {
        match e % 4 {
            0 => GaussQ::real(c),
            1 => GaussQ { re: BigRational::zero(), im: c },
            2 => GaussQ::real(-c),
            _ => GaussQ { re: BigRational::zero(), im: -c },
        }
    }
}

/// E[R^j] for one real part of variance v.
fn part_moment(kind: LawKind, v: &BigRational, j: usize) -> BigRational {
    if j % 2 == 1 {
        return BigRational::zero();
    }
    let m = j / 2;
    if m == 0 {
        return BigRational::one();
    }
    match kind {
        LawKind::Gaussian => {
            let dfact: BigInt = (1..m).map(|i| BigInt::from(2 * i + 1)).product();
            BigRational::from_integer(dfact) * v.pow(m as i32)
        }
        // ±√(3v) with probability 1/6 each
        LawKind::ThreePointMatch => {
            (BigRational::from_integer(3.into()) * v).pow(m as i32) / BigRational::from_integer(3.into())
        }
        LawKind::Rademacher => v.pow(m as i32),
    }
}

/// E[X^a conj(X)^b] for one entry.
fn entry_moment(kind: LawKind, field: Field, v: &BigRational, a: usize, b: usize) -> GaussQ {
    match field {
        Field::Real => GaussQ::real(part_moment(kind, v, a + b)),
        Field::Complex => {
            let mut acc = GaussQ::zero();
            for c in 0..=a {
                for d in 0..=b {
                    let (re_pow, im_pow) = (c + d, a - c + b - d);
                    if re_pow % 2 == 1 || im_pow % 2 == 1 {
                        continue;
                    }
                    let coef = BigRational::from_integer(BigInt::from(
                        binomial(a as u64, c as u64) * binomial(b as u64, d as u64),
                    )) * part_moment(kind, v, re_pow)
                        * part_moment(kind, v, im_pow);
                    // (iI)^{a−c} (−iI)^{b−d} carries i^{(a−c) + 3(b−d)}
                    acc.add(&GaussQ::unit_power(coef, (a - c) + 3 * (b - d)));
                }
            }
            acc
        }
    }
}

struct ExactSetup {
    kind: LawKind,
    field: Field,
    part_var: BigRational,
    diag: Vec<BigRational>,
}

fn exact_setup(spec: &EnsembleSpec, power: usize, kind: LawKind) -> Result<ExactSetup> {
    spec.validate()?;
    if spec.n > MAX_N || spec.p > MAX_P || power == 0 || power > MAX_POWER {
        return Err(Error::Domain {
            what: "instance size",
            value: (spec.n * spec.p * power) as f64,
            domain: "n <= 3, p <= 4, 1 <= s <= 4",
        });
    }
    let s2 = decimal_rational(spec.sigma())?.pow(2);
    let part_var = match spec.field {
        Field::Real => s2,
        Field::Complex => s2 / BigRational::from_integer(2.into()),
    };
    let diag = spec.population_diagonal().into_iter().map(decimal_rational).collect::<Result<_>>()?;
    Ok(ExactSetup { kind, field: spec.field, part_var, diag })
}

fn digits(mut idx: usize, base: usize, len: usize) -> Vec<usize> {
    let mut d = vec![0; len];
    for slot in d.iter_mut() {
        *slot = idx % base;
        idx /= base;
    }
    d
}

/// E of Π_q Y_{i_q j_{q+1}} conj(Y_{i_{q+1} j_{q+1}}) with Y = Σ^{1/2} X,
/// zero-based indices.
fn tuple_weight(bottom: &[usize], top: &[usize], setup: &ExactSetup) -> GaussQ {
    let s = bottom.len();
    let mut mult: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for q in 0..s {
        mult.entry((bottom[q], top[q])).or_default().0 += 1;
        mult.entry((bottom[(q + 1) % s], top[q])).or_default().1 += 1;
    }
    let mut w = GaussQ::real(bottom.iter().map(|&i| setup.diag[i].clone()).product());
    for &(a, b) in mult.values() {
        w = w.mul(&entry_moment(setup.kind, setup.field, &setup.part_var, a, b));
        if w.is_zero() {
            break;
        }
    }
    w
}

/// Contribution of one edge path (labels from 1) to E[Tr V^s], under the
/// spec's entry law.
pub fn path_contribution(spec: &EnsembleSpec, path: &EdgePath) -> Result<BigRational> {
    let s = path.len();
    let setup = exact_setup(spec, s, spec.entry_law.kind)?;
    let bottom: Vec<usize> = path.bottom.iter().map(|&i| i as usize - 1).collect();
    let top: Vec<usize> = path.top.iter().map(|&j| j as usize - 1).collect();
    if bottom.iter().any(|&i| i >= spec.n) || top.iter().any(|&j| j >= spec.p) {
        return Err(Error::Structure("path labels exceed the matrix dimensions".into()));
    }
    let w = tuple_weight(&bottom, &top, &setup);
    if !w.im.is_zero() {
        return Err(Error::Structure("imaginary path contribution".into()));
    }
    Ok(w.re / BigRational::from_integer(BigInt::from(spec.p)).pow(s as i32))
}

/// Path expansion of E[Tr V^s] broken down by (#1-edges, k).
fn path_expansion(spec: &EnsembleSpec, s: usize, setup: &ExactSetup) -> Result<(BigRational, Vec<PathTerm>)> {
    let (n, p) = (spec.n, spec.p);
    let tuples = n.pow(s as u32) * p.pow(s as u32);
    let partial = (0..tuples)
        .into_par_iter()
        .fold(BTreeMap::<(usize, usize), (u64, GaussQ)>::new, |mut acc, idx| {
            let bottom = digits(idx % n.pow(s as u32), n, s);
            let top = digits(idx / n.pow(s as u32), p, s);
            let w = tuple_weight(&bottom, &top, setup);
            if w.is_zero() {
                return acc;
            }
            let path = EdgePath {
                bottom: bottom.iter().map(|&i| i as u32 + 1).collect(),
                top: top.iter().map(|&j| j as u32 + 1).collect(),
            };
            // symmetric laws kill every odd edge multiplicity
            let traj = path.trajectory().expect("nonzero terms come from even paths");
            let key = (one_edges(&path, 1).len(), path_stats(&traj).o_x);
            let slot = acc.entry(key).or_insert_with(|| (0, GaussQ::zero()));
            slot.0 += 1;
            slot.1.add(&w);
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (key, (c, v)) in b {
                let slot = a.entry(key).or_insert_with(|| (0, GaussQ::zero()));
                slot.0 += c;
                slot.1.add(&v);
            }
            a
        });
    let norm = BigRational::from_integer(BigInt::from(p)).pow(s as i32);
    let mut total = BigRational::zero();
    let mut terms = Vec::new();
    for ((one, k), (paths, v)) in partial {
        if !v.im.is_zero() {
            return Err(Error::Structure(format!("imaginary path term {} at ({one}, {k})", v.im)));
        }
        let value = v.re / &norm;
        total += &value;
        terms.push(PathTerm { one_edges: one, k, paths, value: Exact(value) });
    }
    Ok((total, terms))
}

/// E[Tr V^s] by summing over every value of X with its probability, using
/// integer arithmetic in Z[i] on the unit-scaled support.
pub fn enumerate_assignments(spec: &EnsembleSpec, power: usize) -> Result<BigRational> {
    let kind = spec.entry_law.kind;
    if !spec.entry_law.is_finitely_supported() {
        return Err(Error::Support(kind.name().into()));
    }
    let setup = exact_setup(spec, power, kind)?;
    let (n, p) = (spec.n, spec.p);
    // support of a unit-scaled part with integer weights
    let (support, weights, wsum): (Vec<i128>, Vec<i128>, i128) = match kind {
        LawKind::ThreePointMatch => (vec![-1, 0, 1], vec![1, 4, 1], 6),
        _ => (vec![-1, 1], vec![1, 1], 2),
    };
    let parts_per_entry = if spec.field == Field::Complex { 2 } else { 1 };
    let parts = n * p * parts_per_entry;
    let total_assign = support.len().pow(parts as u32);

    // Σ as integers over a common denominator
    let den = setup.diag.iter().fold(BigInt::one(), |l, d| num_integer::Integer::lcm(&l, d.denom()));
    let diag_int: Vec<i128> = setup
        .diag
        .iter()
        .map(|d| (d * BigRational::from_integer(den.clone())).to_integer().to_i128())
        .collect::<Option<_>>()
        .ok_or(Error::Domain { what: "spike denominator", value: 0.0, domain: "fits in i128" })?;

    let sum: Complex<i128> = (0..total_assign)
        .into_par_iter()
        .map(|idx| {
            let d = digits(idx, support.len(), parts);
            let weight: i128 = d.iter().map(|&v| weights[v]).product();
            let y: Vec<Complex<i128>> = (0..n * p)
                .map(|e| {
                    let re = support[d[e * parts_per_entry]];
                    let im = if parts_per_entry == 2 { support[d[e * 2 + 1]] } else { 0 };
                    Complex::new(re, im)
                })
                .collect();
            // B = Y Y* Σ
            let mut b = vec![Complex::new(0i128, 0); n * n];
            for i in 0..n {
                for k in 0..n {
                    let mut acc = Complex::new(0i128, 0);
                    for j in 0..p {
                        acc += y[i * p + j] * y[k * p + j].conj();
                    }
                    b[i * n + k] = acc * diag_int[k];
                }
            }
            let mut m = b.clone();
            for _ in 1..power {
                let mut next = vec![Complex::new(0i128, 0); n * n];
                for i in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            next[i * n + k] += m[i * n + l] * b[l * n + k];
                        }
                    }
                }
                m = next;
            }
            let tr: Complex<i128> = (0..n).map(|i| m[i * n + i]).sum();
            tr * weight
        })
        .sum();
    if sum.im != 0 {
        return Err(Error::Structure("imaginary trace expectation".into()));
    }
    // unit part → actual part: a² = 3v (three-point) or v (rademacher)
    let a2 = match kind {
        LawKind::ThreePointMatch => BigRational::from_integer(3.into()) * &setup.part_var,
        _ => setup.part_var.clone(),
    };
    let int = |x: i128| BigRational::from_integer(BigInt::from(x));
    let pow = |x: BigRational, e: usize| x.pow(e as i32);
    Ok(int(sum.re) * pow(a2, power)
        / (pow(int(wsum), parts) * pow(BigRational::from_integer(den), power) * pow(int(p as i128), power)))
}

/// Exact or Monte Carlo E[Tr V^s] per the request's method.
pub fn exact_trace_moment(req: &MomentRequest) -> Result<MomentReport> {
    let spec = &req.spec;
    let kind = match req.method {
        MomentMethod::ExactEnumeration => {
            if !spec.entry_law.is_finitely_supported() {
                return Err(Error::Support(spec.entry_law.kind.name().into()));
            }
            spec.entry_law.kind
        }
        MomentMethod::SymbolicGaussian => LawKind::Gaussian,
        MomentMethod::MonteCarlo { trials } => {
            let xs = trace_power_samples(spec, req.power, 1.0, trials)?;
            let (mean, std_error) = mean_and_se(&xs);
            return Ok(MomentReport {
                method: req.method,
                power: req.power,
                value: MomentValue::Estimate { mean, std_error, trials },
                path_terms: None,
            });
        }
    };
    let setup = exact_setup(spec, req.power, kind)?;
    let (total, terms) = path_expansion(spec, req.power, &setup)?;
    let approx = total.to_f64().unwrap_or(f64::NAN);
    Ok(MomentReport {
        method: req.method,
        power: req.power,
        value: MomentValue::Exact { value: Exact(total), approx },
        path_terms: Some(terms),
    })
}

/// Tr (V/scale)^s for trials 0..trials of `spec`, in trial order.
pub fn trace_power_samples(spec: &EnsembleSpec, power: usize, scale: f64, trials: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let ev = eigenvalues(&draw(spec, t)?)?;
            Ok(ev.lambdas.iter().map(|l| (l / scale).powi(power as i32)).sum())
        })
        .collect()
}

/// Sample mean and its standard error.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// τ(π₁) above the transition, u₊ otherwise.
pub fn moment_scale(spec: &EnsembleSpec) -> f64 {
    phase::as_limit(spec)
}

/// s_N = round(c √N) above the transition, round(c N^{2/3}) otherwise.
pub fn path_length(spec: &EnsembleSpec, c: f64) -> usize {
    let n = spec.n as f64;
    let s = match phase::classify(spec).leading {
        Regime::Supercritical => c * n.sqrt(),
        _ => c * n.powf(2.0 / 3.0),
    };
    (s.round() as usize).max(1)
}

/// exp((s²/2N)(σ(π₁)/τ(π₁))²), with √2 σ(π₁) for real entries.
pub fn predicted_normalized_moment(spec: &EnsembleSpec, s: usize) -> Result<f64> {
    let q = phase::phase_quantities(spec);
    let (Some(tau), Some(sp)) = (q.tau, q.sigma_pi) else {
        return Err(Error::Regime("needs a supercritical spike".into()));
    };
    if phase::classify(spec).leading != Regime::Supercritical {
        return Err(Error::Regime("needs a supercritical spike".into()));
    }
    let sp = match spec.field {
        Field::Complex => sp,
        Field::Real => 2f64.sqrt() * sp,
    };
    let s = s as f64;
    Ok((s * s / (2.0 * spec.n as f64) * (sp / tau).powi(2)).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub power: usize,
    pub scale: f64,
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// Monte Carlo E Tr (V/scale)^{s_N} with s_N from `path_length(spec, c)`.
pub fn bounded_moment_check(spec: &EnsembleSpec, c: f64, trials: usize) -> Result<MomentEstimate> {
    let power = path_length(spec, c);
    let scale = moment_scale(spec);
    let xs = trace_power_samples(spec, power, scale, trials)?;
    let (mean, std_error) = mean_and_se(&xs);
    Ok(MomentEstimate { power, scale, mean, std_error, trials })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub a: MomentEstimate,
    pub b: MomentEstimate,
    /// (m̂_a − m̂_b) / pooled standard error.
    pub z: f64,
}

/// Standardized difference of the normalized moments of two specs that
/// differ only in their entry law.
pub fn universality_gap(
    spec_a: &EnsembleSpec,
    spec_b: &EnsembleSpec,
    power: usize,
    trials: usize,
) -> Result<GapReport> {
    let same = spec_a.n == spec_b.n
        && spec_a.p == spec_b.p
        && spec_a.spikes == spec_b.spikes
        && spec_a.field == spec_b.field
        && spec_a.entry_law.sigma == spec_b.entry_law.sigma;
    if !same {
        return Err(Error::InvalidSpec("specs may differ only in the entry law".into()));
    }
    if phase::classify(spec_a).leading != Regime::Subcritical {
        for s in [spec_a, spec_b] {
            if !s.entry_law.matches_fourth_moment() {
                return Err(Error::Regime(format!(
                    "{} entries do not match the Gaussian fourth moment at or above the transition",
                    s.entry_law.kind.name()
                )));
            }
        }
    }
    let scale = moment_scale(spec_a);
    let est = |spec: &EnsembleSpec| -> Result<MomentEstimate> {
        let xs = trace_power_samples(spec, power, scale, trials)?;
        let (mean, std_error) = mean_and_se(&xs);
        Ok(MomentEstimate { power, scale, mean, std_error, trials })
    };
    let (a, b) = (est(spec_a)?, est(spec_b)?);
    let pooled = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
    let z = if pooled == 0.0 { 0.0 } else { (a.mean - b.mean) / pooled };
    Ok(GapReport { a, b, z })
}

impl PathTerm {
    pub fn is_positive(&self) -> bool {
        self.value.0.is_positive()
    }
}
