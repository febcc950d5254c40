use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use spikelab::dyck::{glue, EdgePath, PathCountTable};
use spikelab::ensembles::{Field, LawKind};
use spikelab::genfun::{coeffs_a, parse_rational, write_coeffs_csv};
use spikelab::harness::acceptance::{run_criterion, AcceptanceOptions, CRITERIA};
use spikelab::harness::stats::ks_against_curve;
use spikelab::harness::{run_experiment_until, PlanConfig};
use spikelab::limitlaws::{DistributionCurve, FredholmConfig, LimitLaw};
use spikelab::momentlab::{exact_trace_moment, MomentMethod, MomentRequest};
use spikelab::phase::{self, Regime};

#[derive(Parser)]
#[command(name = "spikelab", version, about = "Spiked sample covariance experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Phase-transition constants and predicted regime for a spec.
    Theory(SpecArgs),
    /// Monte Carlo campaign of the top rescaled eigenvalues.
    Simulate(SimulateArgs),
    /// Tabulate a limiting distribution function as CSV.
    Limitlaw(LimitlawArgs),
    /// Exact path counts, series coefficients and moments.
    #[command(subcommand)]
    Combinat(Combinat),
    /// Run acceptance criteria by number, or `all`.
    Verify(VerifyArgs),
}

#[derive(Args, Clone, Default)]
struct SpecArgs {
    /// Plan file (TOML); flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    /// Comma-separated, non-increasing.
    #[arg(long, value_delimiter = ',')]
    spikes: Option<Vec<f64>>,
    #[arg(long)]
    field: Option<Field>,
    #[arg(long)]
    law: Option<LawKind>,
    #[arg(long)]
    sigma: Option<f64>,
}

impl SpecArgs {
    fn config(&self, seed: Option<u64>) -> Result<PlanConfig> {
        let file = match &self.config {
            Some(path) => PlanConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
            None => PlanConfig::default(),
        };
        let flags = PlanConfig {
            n: self.n,
            p: self.p,
            spikes: self.spikes.clone(),
            field: self.field,
            law: self.law,
            sigma: self.sigma,
            seed,
            ..Default::default()
        };
        Ok(file.overridden_by(flags))
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    k_top: Option<usize>,
    /// Force the rescaling regime instead of classifying the spec.
    #[arg(long)]
    regime: Option<Regime>,
    /// Results directory (defaults to `runs/seed-<seed>`).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct LimitlawArgs {
    /// tw_gue, tw_goe, bbp_f1 or normal.
    #[arg(long)]
    law: LimitLaw,
    #[arg(long, default_value_t = -8.0, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    to: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long, default_value_t = 64)]
    quad_order: usize,
    /// CSV path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Combinat {
    /// Dyck path counts by odd marked instants and returns (n,k,m,count).
    Counts {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Coefficients a_n of H = F K with a'_n and successive ratios.
    Series {
        #[arg(long)]
        pi1: String,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exact or Monte Carlo E[Tr V^s] as JSON.
    Moment {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        power: usize,
        /// exact_enumeration, symbolic_gaussian or monte_carlo.
        #[arg(long, default_value = "exact_enumeration")]
        method: String,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Glue an edge path given by its bottom and top vertex sequences.
    Glue {
        #[arg(long, value_delimiter = ',')]
        bottom: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        top: Vec<u32>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Criterion number 1..=15, or `all`.
    criterion: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Save campaign results below this directory.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn theory(args: &SpecArgs) -> Result<()> {
    let spec = args.config(Some(0))?.spec()?;
    let out = serde_json::json!({
        "spec": spec,
        "phase": phase::phase_quantities(&spec),
        "regime": phase::classify(&spec),
        "as_limit": phase::as_limit(&spec),
    });
    print_json(&out)?;
    Ok(())
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let mut cfg = args.spec.config(Some(args.seed))?;
    cfg = cfg.overridden_by(PlanConfig {
        trials: args.trials,
        k_top: args.k_top,
        regime: args.regime,
        output: args.output.clone(),
        workers: args.workers,
        ..Default::default()
    });
    if cfg.output.is_none() {
        cfg.output = Some(PathBuf::from(format!("runs/seed-{}", args.seed)));
    }
    let plan = cfg.plan()?;
    let stop = Arc::new(AtomicBool::new(false));
    let flag = stop.clone();
    ctrlc::set_handler(move || flag.store(true, Ordering::Relaxed)).context("installing interrupt handler")?;

    let r = run_experiment_until(&plan, &stop)?;
    let dir = plan.output_path.as_ref().expect("output set above");
    eprintln!("{} of {} trials written to {}", r.manifest.completed_trials, plan.trials, dir.display());
    if !r.manifest.complete {
        bail!("interrupted; partial results kept");
    }
    let cdfs = r.cdfs()?;
    for (i, e) in cdfs.iter().enumerate() {
        println!("xi_{}: mean {:.6} sd {:.6}", i + 1, e.mean(), e.sd());
    }
    let reference = match (r.regime(), plan.spec.field) {
        (Regime::Supercritical, _) => Some(LimitLaw::StandardNormal),
        (Regime::Critical, Field::Complex) => Some(LimitLaw::BbpF1),
        (Regime::Critical, Field::Real) => None,
        (Regime::Subcritical, Field::Complex) => Some(LimitLaw::TracyWidomGue),
        (Regime::Subcritical, Field::Real) => Some(LimitLaw::TracyWidomGoe),
    };
    if let Some(law) = reference {
        let grid = DistributionCurve::uniform_grid(-10.0, 6.0, 1601);
        let ks = ks_against_curve(&cdfs[0], &law.tabulate(&grid, &FredholmConfig::default())?)?;
        println!("KS(xi_1, {law:?}) = {:.4} (p = {:.3})", ks.distance, ks.p_value);
    }
    Ok(())
}

fn limitlaw(args: &LimitlawArgs) -> Result<()> {
    if !(args.step > 0.0 && args.to > args.from) {
        bail!("need from < to and a positive step");
    }
    let points = ((args.to - args.from) / args.step).round() as usize + 1;
    let grid = DistributionCurve::uniform_grid(args.from, args.to, points);
    let cfg = FredholmConfig { quad_order: args.quad_order, ..Default::default() };
    let curve = args.law.tabulate(&grid, &cfg)?;
    curve.write_csv(sink(&args.output)?)?;
    Ok(())
}

fn combinat(cmd: &Combinat) -> Result<()> {
    match cmd {
        Combinat::Counts { n_max, output } => PathCountTable::build(*n_max).write_csv(sink(output)?)?,
        Combinat::Series { pi1, gamma, sigma, n_max, output } => {
            let c = coeffs_a(&parse_rational(pi1)?, &parse_rational(gamma)?, *sigma, *n_max)?;
            write_coeffs_csv(&c, sink(output)?)?;
        }
        Combinat::Moment { spec, power, method, trials, seed } => {
            let spec = spec.config(Some(*seed))?.spec()?;
            let method = match method.as_str() {
                "exact_enumeration" => MomentMethod::ExactEnumeration,
                "symbolic_gaussian" => MomentMethod::SymbolicGaussian,
                "monte_carlo" => MomentMethod::MonteCarlo { trials: *trials },
                other => bail!("unknown method `{other}`"),
            };
            let report = exact_trace_moment(&MomentRequest { spec, power: *power, method })?;
            print_json(&report)?;
        }
        Combinat::Glue { bottom, top } => {
            let g = glue(&EdgePath::new(bottom.clone(), top.clone())?)?;
            print_json(&g)?;
        }
    }
    Ok(())
}

/// Ok(true) when every requested criterion passed.
fn verify(args: &VerifyArgs) -> Result<bool> {
    let ids: Vec<u8> = if args.criterion == "all" {
        CRITERIA.iter().map(|c| c.0).collect()
    } else {
        vec![args.criterion.parse().with_context(|| format!("bad criterion `{}`", args.criterion))?]
    };
    let mut opts = AcceptanceOptions { output_dir: args.output.clone(), ..Default::default() };
    if let Some(s) = args.seed {
        opts.seed = s;
    }
    if let Some(w) = args.workers {
        opts.workers = w;
    }
    let mut all = true;
    for id in ids {
        let outcome = run_criterion(id, &opts)?;
        println!("{outcome}");
        all &= outcome.passed;
    }
    Ok(all)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Theory(a) => theory(a).map(|_| true),
        Command::Simulate(a) => simulate(a).map(|_| true),
        Command::Limitlaw(a) => limitlaw(a).map(|_| true),
        Command::Combinat(c) => combinat(c).map(|_| true),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
