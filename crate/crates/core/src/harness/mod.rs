//! Campaign orchestration, statistics, persistence and acceptance checks.

pub mod acceptance;
pub mod config;
pub mod experiment;
pub mod stats;
pub mod variance;

pub use acceptance::{run_criterion, AcceptanceOptions, CriterionOutcome, CRITERIA};
pub use config::PlanConfig;
pub use experiment::{run_experiment, run_experiment_until, ExperimentPlan, ExperimentResult, Manifest, TrialResult};
pub use stats::{kolmogorov_pvalue, ks_distance, ks_two_sample, EmpiricalCdf, KsResult};
pub use variance::{variance_check, VarianceReport};
