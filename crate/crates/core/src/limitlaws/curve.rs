//! Tabulated distribution functions and their CSV form.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use std::io::{Read, Write};

use super::fredholm::{bbp_f1_cdf, tw_gue_cdf, FredholmConfig};
use super::painleve::tw_cdfs;
use super::quadrature::GaussLegendre;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitLaw {
    TracyWidomGue,
    TracyWidomGoe,
    BbpF1,
    StandardNormal,
}

impl std::str::FromStr for LimitLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tw_gue" | "gue" => Ok(LimitLaw::TracyWidomGue),
            "tw_goe" | "goe" => Ok(LimitLaw::TracyWidomGoe),
            "bbp_f1" | "f1" => Ok(LimitLaw::BbpF1),
            "normal" | "gaussian" => Ok(LimitLaw::StandardNormal),
            other => Err(Error::Config(format!("unknown limit law `{other}`"))),
        }
    }
}

impl LimitLaw {
    /// CDF values on `grid`.
    pub fn cdf_values(self, grid: &[f64], cfg: &FredholmConfig) -> Result<Vec<f64>> {
        match self {
            LimitLaw::TracyWidomGue => grid.iter().map(|&x| tw_gue_cdf(x, cfg)).collect(),
            LimitLaw::BbpF1 => grid.iter().map(|&x| bbp_f1_cdf(x, cfg)).collect(),
            LimitLaw::TracyWidomGoe => Ok(tw_cdfs(grid)?.into_iter().map(|p| p.0).collect()),
            LimitLaw::StandardNormal => {
                let n = Normal::new(0.0, 1.0).expect("unit normal");
                Ok(grid.iter().map(|&x| n.cdf(x)).collect())
            }
        }
    }

    pub fn tabulate(self, grid: &[f64], cfg: &FredholmConfig) -> Result<DistributionCurve> {
        DistributionCurve::new(grid.to_vec(), self.cdf_values(grid, cfg)?)
    }

    /// Mean and standard deviation, by quadrature of the CDF over [-10, 6].
    pub fn mean_sd(self, cfg: &FredholmConfig) -> Result<(f64, f64)> {
        let gl = GaussLegendre::new(12);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for p in 0..20 {
            let (x, w) = gl.on(-10.0 + 0.5 * p as f64, -9.5 + 0.5 * p as f64);
            left.extend(x.into_iter().zip(w));
        }
        for p in 0..12 {
            let (x, w) = gl.on(0.5 * p as f64, 0.5 + 0.5 * p as f64);
            right.extend(x.into_iter().zip(w));
        }
        let xs: Vec<f64> = left.iter().chain(&right).map(|p| p.0).collect();
        let f = self.cdf_values(&xs, cfg)?;
        let (fl, fr) = f.split_at(left.len());
        let mut mean = 0.0;
        let mut second = 0.0;
        for (&(x, w), &fx) in left.iter().zip(fl) {
            mean -= w * fx;
            second += w * 2.0 * x.abs() * fx;
        }
        for (&(x, w), &fx) in right.iter().zip(fr) {
            mean += w * (1.0 - fx);
            second += w * 2.0 * x * (1.0 - fx);
        }
        Ok((mean, (second - mean * mean).sqrt()))
    }
}

/// A CDF tabulated on an ascending grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionCurve {
    pub grid: Vec<f64>,
    pub cdf: Vec<f64>,
}

impl DistributionCurve {
    pub fn new(grid: Vec<f64>, cdf: Vec<f64>) -> Result<Self> {
        if grid.len() != cdf.len() || grid.len() < 2 {
            return Err(Error::Config("curve needs matching grid and cdf of length >= 2".into()));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("curve grid must be strictly ascending".into()));
        }
        Ok(DistributionCurve { grid, cdf })
    }

    /// Evenly spaced grid from `lo` to `hi` inclusive.
    pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
        let h = (hi - lo) / (points - 1) as f64;
        (0..points).map(|i| lo + h * i as f64).collect()
    }

    /// Linear interpolation; 0 left of the grid and 1 right of it.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.grid.len();
        if x < self.grid[0] {
            return 0.0;
        }
        if x >= self.grid[n - 1] {
            return 1.0;
        }
        let j = self.grid.partition_point(|&g| g <= x);
        let (x0, x1) = (self.grid[j - 1], self.grid[j]);
        let (y0, y1) = (self.cdf[j - 1], self.cdf[j]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Monotone, in [0, 1], and saturated at the ends to within `tail`.
    pub fn check_invariants(&self, tail: f64) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(format!("curve invariant violated: {m}")));
        if self.cdf.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return bad("value outside [0, 1]");
        }
        if self.cdf.windows(2).any(|w| w[1] < w[0]) {
            return bad("not nondecreasing");
        }
        if self.cdf[0] >= tail || self.cdf[self.cdf.len() - 1] <= 1.0 - tail {
            return bad("tails not saturated");
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["x", "cdf"]).map_err(csv_err)?;
        for (x, c) in self.grid.iter().zip(&self.cdf) {
            wr.write_record([sig10(*x), sig10(*c)]).map_err(csv_err)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut grid = Vec::new();
        let mut cdf = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(csv_err)?;
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::Config(format!("bad curve row {rec:?}")))
            };
            grid.push(parse(0)?);
            cdf.push(parse(1)?);
        }
        Self::new(grid, cdf)
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// A decimal rendering of `x` rounded to 10 significant digits.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.9e}").parse().expect("round trip");
    format!("{rounded}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(sig10(0.41322414250513195), "0.4132241425");
        assert_eq!(sig10(-1.7710868074), "-1.771086807");
        assert_eq!(sig10(2.0), "2");
    }

    #[test]
    fn csv_round_trip() {
        let c = DistributionCurve::new(vec![-1.0, 0.0, 1.5], vec![0.1, 0.5, 0.75]).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("x,cdf\n"));
        assert_eq!(DistributionCurve::read_csv(&buf[..]).unwrap(), c);
    }

    #[test]
    fn interpolation() {
        let c = DistributionCurve::new(vec![0.0, 1.0], vec![0.2, 0.4]).unwrap();
        assert_eq!(c.eval(-1.0), 0.0);
        assert!((c.eval(0.5) - 0.3).abs() < 1e-15);
        assert_eq!(c.eval(1.0), 1.0);
    }

    #[test]
    fn normal_curve_invariants() {
        let grid = DistributionCurve::uniform_grid(-8.0, 6.0, 141);
        let c = LimitLaw::StandardNormal.tabulate(&grid, &FredholmConfig::default()).unwrap();
        c.check_invariants(1e-4).unwrap();
    }

    #[test]
    fn normal_moments() {
        let (m, s) = LimitLaw::StandardNormal.mean_sd(&FredholmConfig::default()).unwrap();
        assert!(m.abs() < 1e-9 && (s - 1.0).abs() < 1e-9, "{m} {s}");
    }
}
