//! Entry laws and the spiked sample covariance matrix.

use faer::linalg::matmul::matmul;
use faer::{c64, Accum, Mat, Par};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{trial_rng, TrialRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    Gaussian,
    /// Values `{-a, 0, a}` with probabilities `{1/6, 2/3, 1/6}`.
    ThreePointMatch,
    Rademacher,
}

impl LawKind {
    pub fn name(self) -> &'static str {
        match self {
            LawKind::Gaussian => "gaussian",
            LawKind::ThreePointMatch => "three_point_match",
            LawKind::Rademacher => "rademacher",
        }
    }
}

impl std::str::FromStr for LawKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(LawKind::Gaussian),
            "three_point_match" | "three_point" => Ok(LawKind::ThreePointMatch),
            "rademacher" => Ok(LawKind::Rademacher),
            other => Err(Error::Config(format!("unknown entry law `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Real,
    Complex,
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(Error::Config(format!("unknown field `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryLaw {
    pub kind: LawKind,
    pub sigma: f64,
}

impl EntryLaw {
    pub fn new(kind: LawKind, sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidSpec(format!("sigma must be positive, got {sigma}")));
        }
        Ok(EntryLaw { kind, sigma })
    }

    pub fn gaussian(sigma: f64) -> Self {
        EntryLaw { kind: LawKind::Gaussian, sigma }
    }

    pub fn three_point(sigma: f64) -> Self {
        EntryLaw { kind: LawKind::ThreePointMatch, sigma }
    }

    pub fn rademacher(sigma: f64) -> Self {
        EntryLaw { kind: LawKind::Rademacher, sigma }
    }

    /// Whether the fourth moment matches the Gaussian one.
    pub fn matches_fourth_moment(&self) -> bool {
        !matches!(self.kind, LawKind::Rademacher)
    }

    pub fn is_finitely_supported(&self) -> bool {
        !matches!(self.kind, LawKind::Gaussian)
    }

    /// Variance of one real part: σ² for real entries, σ²/2 per part for complex ones.
    pub fn part_variance(&self, field: Field) -> f64 {
        match field {
            Field::Real => self.sigma * self.sigma,
            Field::Complex => self.sigma * self.sigma / 2.0,
        }
    }

    fn sample_part<R: Rng + ?Sized>(&self, s: f64, rng: &mut R) -> f64 {
        match self.kind {
            LawKind::Gaussian => {
                let z: f64 = rng.sample(StandardNormal);
                s * z
            }
            LawKind::ThreePointMatch => {
                let a = s * 3f64.sqrt();
                match rng.gen_range(0u32..6) {
                    0 => -a,
                    5 => a,
                    _ => 0.0,
                }
            }
            LawKind::Rademacher => {
                if rng.gen::<bool>() {
                    s
                } else {
                    -s
                }
            }
        }
    }
}

/// One entry `X_ij`; for the complex field the parts are independent.
pub fn sample_entry<R: Rng + ?Sized>(law: &EntryLaw, field: Field, rng: &mut R) -> c64 {
    let s = law.part_variance(field).sqrt();
    match field {
        Field::Real => c64::new(law.sample_part(s, rng), 0.0),
        Field::Complex => {
            let re = law.sample_part(s, rng);
            let im = law.sample_part(s, rng);
            c64::new(re, im)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n: usize,
    pub p: usize,
    /// π₁ ≥ … ≥ π_r > 1; empty for the white case.
    #[serde(default)]
    pub spikes: Vec<f64>,
    pub field: Field,
    pub entry_law: EntryLaw,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn white(n: usize, p: usize, field: Field, entry_law: EntryLaw, seed: u64) -> Self {
        EnsembleSpec { n, p, spikes: Vec::new(), field, entry_law, seed }
    }

    pub fn with_spikes(mut self, spikes: Vec<f64>) -> Self {
        self.spikes = spikes;
        self
    }

    pub fn with_law(mut self, entry_law: EntryLaw) -> Self {
        self.entry_law = entry_law;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("n must be positive".into()));
        }
        if self.p < self.n {
            return Err(Error::Dimension(format!("p = {} < n = {}", self.p, self.n)));
        }
        if self.spikes.len() > self.n {
            return Err(Error::InvalidSpec(format!("{} spikes for n = {}", self.spikes.len(), self.n)));
        }
        if self.spikes.iter().any(|&s| !(s.is_finite() && s > 1.0)) {
            return Err(Error::InvalidSpec("spikes must be finite and > 1".into()));
        }
        if self.spikes.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpec("spikes must be non-increasing".into()));
        }
        EntryLaw::new(self.entry_law.kind, self.entry_law.sigma)?;
        Ok(())
    }

    /// γ_N = p/n.
    pub fn gamma_n(&self) -> f64 {
        self.p as f64 / self.n as f64
    }

    pub fn sigma(&self) -> f64 {
        self.entry_law.sigma
    }

    pub fn leading_spike(&self) -> Option<f64> {
        self.spikes.first().copied()
    }

    /// Diagonal of Σ.
    pub fn population_diagonal(&self) -> Vec<f64> {
        let mut d = vec![1.0; self.n];
        d[..self.spikes.len()].copy_from_slice(&self.spikes);
        d
    }
}

/// The data matrix and the sample covariance built from it.
#[derive(Clone, Debug)]
pub enum MatrixDraw {
    Real { x: Mat<f64>, v: Mat<f64> },
    Complex { x: Mat<c64>, v: Mat<c64> },
}

impl MatrixDraw {
    pub fn dim(&self) -> usize {
        match self {
            MatrixDraw::Real { v, .. } => v.nrows(),
            MatrixDraw::Complex { v, .. } => v.nrows(),
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            MatrixDraw::Real { v, .. } => (0..v.nrows()).map(|i| v[(i, i)]).sum(),
            MatrixDraw::Complex { v, .. } => (0..v.nrows()).map(|i| v[(i, i)].re).sum(),
        }
    }
}

/// Draws trial `trial` of `spec` from its own random stream.
pub fn draw(spec: &EnsembleSpec, trial: u64) -> Result<MatrixDraw> {
    let mut rng = trial_rng(spec.seed, trial);
    build_matrix(spec, &mut rng)
}

/// `V = (1/p) Σ^{1/2} X X* Σ^{1/2}`, entries of X drawn row-major.
pub fn build_matrix(spec: &EnsembleSpec, rng: &mut TrialRng) -> Result<MatrixDraw> {
    spec.validate()?;
    let (n, p) = (spec.n, spec.p);
    let law = spec.entry_law;
    let scale: Vec<f64> = spec.population_diagonal().iter().map(|d| d.sqrt()).collect();
    let inv_p = 1.0 / p as f64;

    match spec.field {
        Field::Real => {
            let s = law.part_variance(Field::Real).sqrt();
            let mut x = Mat::<f64>::zeros(n, p);
            for i in 0..n {
                for j in 0..p {
                    x[(i, j)] = law.sample_part(s, rng);
                }
            }
            let y = Mat::from_fn(n, p, |i, j| scale[i] * x[(i, j)]);
            let mut v = Mat::<f64>::zeros(n, n);
            matmul(v.as_mut(), Accum::Replace, y.as_ref(), y.transpose(), inv_p, Par::Seq);
            for i in 0..n {
                for j in 0..i {
                    let m = 0.5 * (v[(i, j)] + v[(j, i)]);
                    v[(i, j)] = m;
                    v[(j, i)] = m;
                }
            }
            Ok(MatrixDraw::Real { x, v })
        }
        Field::Complex => {
            let s = law.part_variance(Field::Complex).sqrt();
            let mut x = Mat::<c64>::zeros(n, p);
            for i in 0..n {
                for j in 0..p {
                    let re = law.sample_part(s, rng);
                    let im = law.sample_part(s, rng);
                    x[(i, j)] = c64::new(re, im);
                }
            }
            let y = Mat::from_fn(n, p, |i, j| x[(i, j)] * scale[i]);
            let mut v = Mat::<c64>::zeros(n, n);
            matmul(v.as_mut(), Accum::Replace, y.as_ref(), y.adjoint(), c64::new(inv_p, 0.0), Par::Seq);
            for i in 0..n {
                v[(i, i)] = c64::new(v[(i, i)].re, 0.0);
                for j in 0..i {
                    let m = (v[(i, j)] + v[(j, i)].conj()) * 0.5;
                    v[(i, j)] = m;
                    v[(j, i)] = m.conj();
                }
            }
            Ok(MatrixDraw::Complex { x, v })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, p: usize, field: Field, law: EntryLaw) -> EnsembleSpec {
        EnsembleSpec::white(n, p, field, law, 11)
    }

    #[test]
    fn one_by_one_rademacher_is_one() {
        let s = spec(1, 1, Field::Real, EntryLaw::rademacher(1.0));
        for t in 0..10 {
            match draw(&s, t).unwrap() {
                MatrixDraw::Real { v, .. } => assert_eq!(v[(0, 0)], 1.0),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn p_below_n_is_rejected() {
        let s = spec(4, 3, Field::Real, EntryLaw::gaussian(1.0));
        assert!(matches!(draw(&s, 0), Err(Error::Dimension(_))));
    }

    #[test]
    fn bad_spikes_are_rejected() {
        let s = spec(4, 8, Field::Real, EntryLaw::gaussian(1.0)).with_spikes(vec![0.5]);
        assert!(s.validate().is_err());
        let s = spec(4, 8, Field::Real, EntryLaw::gaussian(1.0)).with_spikes(vec![2.0, 3.0]);
        assert!(s.validate().is_err());
    }

    #[test]
    fn three_point_values() {
        let law = EntryLaw::three_point(1.0);
        let mut rng = trial_rng(3, 0);
        let a = 3f64.sqrt();
        for _ in 0..1000 {
            let z = sample_entry(&law, Field::Real, &mut rng);
            assert!(z.re == 0.0 || z.re == a || z.re == -a);
            assert_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn complex_matrix_is_exactly_hermitian() {
        let s = spec(5, 9, Field::Complex, EntryLaw::gaussian(1.3)).with_spikes(vec![4.0, 2.0]);
        let MatrixDraw::Complex { v, .. } = draw(&s, 2).unwrap() else { unreachable!() };
        for i in 0..5 {
            assert_eq!(v[(i, i)].im, 0.0);
            for j in 0..5 {
                assert_eq!(v[(i, j)], v[(j, i)].conj());
            }
        }
    }

    #[test]
    fn draws_replay_bitwise() {
        let s = spec(6, 10, Field::Complex, EntryLaw::three_point(1.0));
        let (MatrixDraw::Complex { v: a, .. }, MatrixDraw::Complex { v: b, .. }) =
            (draw(&s, 5).unwrap(), draw(&s, 5).unwrap())
        else {
            unreachable!()
        };
        assert!(a == b);
    }

    #[test]
    fn spike_scales_first_row() {
        let white = spec(3, 4, Field::Real, EntryLaw::rademacher(1.0));
        let spiked = white.clone().with_spikes(vec![2.0]);
        let (MatrixDraw::Real { v: a, .. }, MatrixDraw::Real { v: b, .. }) =
            (draw(&white, 0).unwrap(), draw(&spiked, 0).unwrap())
        else {
            unreachable!()
        };
        assert!((b[(0, 0)] - 2.0 * a[(0, 0)]).abs() < 1e-14);
        assert!((b[(0, 1)] - 2f64.sqrt() * a[(0, 1)]).abs() < 1e-14);
        assert_eq!(b[(1, 2)], a[(1, 2)]);
    }
}
