//! Plan files: flat TOML key-value pairs, every key optional so command
//! line flags can fill or override them.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use super::experiment::ExperimentPlan;
use crate::ensembles::{EnsembleSpec, EntryLaw, Field, LawKind};
use crate::error::{Error, Result};
use crate::phase::Regime;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanConfig {
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub spikes: Option<Vec<f64>>,
    pub field: Option<Field>,
    pub law: Option<LawKind>,
    pub sigma: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub k_top: Option<usize>,
    pub regime: Option<Regime>,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        PlanConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl PlanConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Fields set in `top` win.
    pub fn overridden_by(self, top: PlanConfig) -> PlanConfig {
        let base = self;
        overlay!(base, top, n, p, spikes, field, law, sigma, seed, trials, k_top, regime, output, workers)
    }

    pub fn spec(&self) -> Result<EnsembleSpec> {
        let missing = |k: &str| Error::Config(format!("missing `{k}`"));
        let law = EntryLaw::new(self.law.unwrap_or(LawKind::Gaussian), self.sigma.unwrap_or(1.0))?;
        let spec = EnsembleSpec {
            n: self.n.ok_or_else(|| missing("n"))?,
            p: self.p.ok_or_else(|| missing("p"))?,
            spikes: self.spikes.clone().unwrap_or_default(),
            field: self.field.unwrap_or(Field::Complex),
            entry_law: law,
            seed: self.seed.ok_or_else(|| missing("seed"))?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn plan(&self) -> Result<ExperimentPlan> {
        let plan = ExperimentPlan {
            spec: self.spec()?,
            trials: self.trials.unwrap_or(1000),
            k_top: self.k_top.unwrap_or(1),
            regime_override: self.regime,
            output_path: self.output.clone(),
            workers: self.workers.unwrap_or_else(default_workers),
        };
        plan.validate()?;
        Ok(plan)
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FILE: &str = r#"
n = 200
p = 400
spikes = [3.0, 1.5]
field = "real"
law = "three_point_match"
seed = 7
trials = 500
k_top = 2
output = "runs/a"
"#;

    #[test]
    fn parse_and_build() {
        let c = PlanConfig::from_toml(FILE).unwrap();
        let plan = c.plan().unwrap();
        assert_eq!(plan.spec.spikes, vec![3.0, 1.5]);
        assert_eq!(plan.spec.field, Field::Real);
        assert_eq!(plan.spec.entry_law.kind, LawKind::ThreePointMatch);
        assert_eq!(plan.trials, 500);
        assert_eq!(plan.output_path, Some(PathBuf::from("runs/a")));
    }

    #[test]
    fn flags_override_file() {
        let file = PlanConfig::from_toml(FILE).unwrap();
        let flags = PlanConfig { seed: Some(99), trials: Some(100), ..Default::default() };
        let c = file.overridden_by(flags);
        assert_eq!(c.seed, Some(99));
        assert_eq!(c.trials, Some(100));
        assert_eq!(c.n, Some(200));
    }

    #[test]
    fn toml_round_trip() {
        let c = PlanConfig::from_toml(FILE).unwrap();
        assert_eq!(PlanConfig::from_toml(&c.to_toml().unwrap()).unwrap(), c);
    }

    #[test]
    fn errors() {
        assert!(matches!(PlanConfig::from_toml("bogus = 1"), Err(Error::Config(_))));
        assert!(matches!(PlanConfig::from_toml("n = 4").unwrap().spec(), Err(Error::Config(_))));
    }
}
