//! `calibrate`: sweep a source parameter, granulate each sampled dataset
//! across the kernel-width grid, fit the entropy bridge, and report the best
//! width with its held-out error.
//!
//! Training dataset `i` uses seed `seed + i`; holdout repetition `j` uses
//! seed `seed + 100000 + j`.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use granulate_core::{
    euclidean, optimize_width, CalibrationInstance, ExponentialSource, GaussianSource,
    ParameterGrid,
};

use crate::commands::LmfStatArg;
use crate::io;

const HOLDOUT_SEED_OFFSET: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CalibrationSource {
    Gaussian,
    Exponential,
}

#[derive(Args)]
pub struct CalibrateArgs {
    /// Source family to sweep
    #[arg(long, value_enum)]
    source: CalibrationSource,
    /// Sweep start (default: 0.10 for gaussian sigma, 1.5 for exponential
    /// lambda)
    #[arg(long)]
    param_lo: Option<f64>,
    /// Sweep end (default: 0.55 / 2.4)
    #[arg(long)]
    param_hi: Option<f64>,
    /// Sweep increment (default: 0.05 / 0.1)
    #[arg(long)]
    param_step: Option<f64>,
    /// Elements per sampled dataset
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Base RNG seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Holdout parameter value (default: sweep midpoint)
    #[arg(long)]
    holdout: Option<f64>,
    /// Holdout repetitions
    #[arg(long, default_value_t = 10)]
    holdout_reps: usize,
    /// Kernel-width grid start
    #[arg(long, default_value_t = 0.01)]
    grid_lo: f64,
    /// Kernel-width grid end
    #[arg(long, default_value_t = 5.0)]
    grid_hi: f64,
    /// Kernel-width grid step
    #[arg(long, default_value_t = 0.01)]
    grid_step: f64,
    /// Lower-membership scale
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Lower-membership row statistic
    #[arg(long, value_enum, default_value_t = LmfStatArg::Mean)]
    lmf_stat: LmfStatArg,
    /// Calibration report path (JSON)
    #[arg(long)]
    out: PathBuf,
}

fn sweep_values(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let slack = hi + step * 1e-9;
    (0..)
        .map(|k| lo + k as f64 * step)
        .take_while(|v| *v <= slack)
        .collect()
}

fn instance(
    source: CalibrationSource,
    parameter: f64,
    n: usize,
    seed: u64,
) -> Result<CalibrationInstance> {
    let (dataset, entropy) = match source {
        CalibrationSource::Gaussian => {
            let src = GaussianSource::new(0.0, parameter, 1)?;
            (src.sample(n, seed)?, src.entropy()?)
        }
        CalibrationSource::Exponential => {
            let src = ExponentialSource::new(parameter)?;
            (src.sample(n, seed)?, src.entropy())
        }
    };
    Ok(CalibrationInstance::from_dataset(
        &dataset, euclidean, entropy,
    )?)
}

pub fn run(args: CalibrateArgs) -> Result<()> {
    let (default_lo, default_hi, default_step) = match args.source {
        CalibrationSource::Gaussian => (0.10, 0.55, 0.05),
        CalibrationSource::Exponential => (1.5, 2.4, 0.1),
    };
    let lo = args.param_lo.unwrap_or(default_lo);
    let hi = args.param_hi.unwrap_or(default_hi);
    let step = args.param_step.unwrap_or(default_step);
    if !(lo > 0.0 && hi >= lo && step > 0.0) {
        bail!("invalid parameter sweep [{lo}, {hi}] step {step}");
    }
    let sweep = sweep_values(lo, hi, step);
    if sweep.len() < 2 {
        bail!(
            "degenerate sweep: only {} parameter value(s) in [{lo}, {hi}]",
            sweep.len()
        );
    }
    if args.holdout_reps == 0 {
        bail!("holdout-reps must be at least 1");
    }

    let train = sweep
        .iter()
        .enumerate()
        .map(|(i, &parameter)| {
            instance(
                args.source,
                parameter,
                args.n,
                args.seed.wrapping_add(i as u64),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let holdout_parameter = args.holdout.unwrap_or((lo + hi) / 2.0);
    let holdout = (0..args.holdout_reps)
        .map(|j| {
            instance(
                args.source,
                holdout_parameter,
                args.n,
                args.seed.wrapping_add(HOLDOUT_SEED_OFFSET + j as u64),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let grid = ParameterGrid::new(args.grid_lo, args.grid_hi, args.grid_step)?;
    let report = optimize_width(&train, &holdout, &grid, args.beta, args.lmf_stat.into())?;

    io::write_atomic(
        &args.out,
        &format!("{}\n", serde_json::to_string_pretty(&report)?),
    )?;
    println!("best_width {:.8e}", report.best_width);
    println!("r_squared {:.8e}", report.r_squared);
    println!("epsilon {:.8e}", report.epsilon);
    Ok(())
}
