mod commands;
mod config;
mod output;

use anticonc::mc::RandomStream;
use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use config::ExperimentConfig;
use output::Run;
use serde::Serialize;
use std::path::PathBuf;

/// Noisy random-circuit anticoncentration experiments.
#[derive(Parser, Debug)]
#[command(name = "anticonc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (JSON, schema 1).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed; overrides the config's seed. Defaults to 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Scaling-limit moments E[w^k], k = 1..kmax.
    Moments {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
    },
    /// Closed-form XEB and Δlog(1+xeb) on a log grid in x.
    XebCurve {
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 1e-3)]
        x_min: f64,
        #[arg(long, default_value_t = 100.0)]
        x_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Also write local slopes in the three regime windows.
        #[arg(long)]
        regimes: bool,
    },
    /// Transfer-matrix moments of an RMPS model against the scaling limit.
    RmpsExact,
    /// Monte Carlo overlaps of an RMPS or Haar model.
    RmpsSample,
    /// Replica-lattice XEB curves of the brickwall sweep.
    BrickwallAvg,
    /// Density-matrix simulation of brickwall circuits (N ≤ 10).
    BrickwallSim,
    /// Extract η, x̂ and τ from a brickwall-avg CSV.
    Fit {
        #[arg(long)]
        input: PathBuf,
    },
    /// Gram–Charlier prediction of the overlap density.
    PopPredict {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        eta_switch: Option<f64>,
        #[arg(long, default_value_t = 1e-3)]
        w_min: f64,
        #[arg(long, default_value_t = 20.0)]
        w_max: f64,
        #[arg(long, default_value_t = 400)]
        points: usize,
    },
    /// Sample a model and compare its histogram with the prediction.
    PopCompare,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Moments { .. } => "moments",
            Self::XebCurve { .. } => "xeb-curve",
            Self::RmpsExact => "rmps-exact",
            Self::RmpsSample => "rmps-sample",
            Self::BrickwallAvg => "brickwall-avg",
            Self::BrickwallSim => "brickwall-sim",
            Self::Fit { .. } => "fit",
            Self::PopPredict { .. } => "pop-predict",
            Self::PopCompare => "pop-compare",
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let threads = cli.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().context("configuring the thread pool")?;
    let config = cli.config.as_deref().map(ExperimentConfig::load).transpose()?;
    let seed = cli.seed.or(config.as_ref().and_then(|c| c.seed)).unwrap_or(0);
    let stream = RandomStream::new(seed, 0);
    let recorded = match (&config, &cli.command) {
        (Some(c), _) => serde_json::to_value(c)?,
        (None, cmd) => serde_json::to_value(cmd)?,
    };
    let mut run = Run::new(cli.out.clone(), cli.command.name(), seed, recorded);
    let need = || config.as_ref().context("this command needs --config <path>");
    match &cli.command {
        Command::Moments { x, eta, kmax } => commands::moments(&mut run, *x, *eta, *kmax)?,
        Command::XebCurve { eta, x_min, x_max, points, regimes } => {
            commands::xeb_curve_closed_form(&mut run, *eta, *x_min, *x_max, *points, *regimes)?
        }
        Command::RmpsExact => commands::rmps_exact(&mut run, need()?)?,
        Command::RmpsSample => commands::rmps_sample(&mut run, need()?, stream)?,
        Command::BrickwallAvg => commands::brickwall_avg(&mut run, need()?)?,
        Command::BrickwallSim => commands::brickwall_sim(&mut run, need()?, stream)?,
        Command::Fit { input } => commands::fit(&mut run, input)?,
        Command::PopPredict { x, eta, order, eta_switch, w_min, w_max, points } => {
            let mut options = config.as_ref().map(|c| c.pop).unwrap_or_default();
            options.order = order.unwrap_or(options.order);
            options.eta_switch = eta_switch.unwrap_or(options.eta_switch);
            let grid = commands::log_grid(*w_min, *w_max, *points)?;
            commands::pop_predict(&mut run, *x, *eta, &options, &grid)?
        }
        Command::PopCompare => commands::pop_compare(&mut run, need()?, stream)?,
    }
    for name in run.finish(threads)? {
        println!("{}", cli.out.join(name).display());
    }
    Ok(())
}
