//! `sample`: repeated POVM draws and the empirical failure-probability
//! table.

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use schurtomo::states::{fidelity, trace_distance, DensityMatrix};
use schurtomo::tomography::{failure_bound, QubitEstimateSampler, SampleConfig};

use crate::common::{build_pool, stream_rng, CommonArgs};
use crate::output::{RunOutput, Table};

/// Draw tomography estimates of a fixed state and tabulate per-draw errors
/// (columns sample,lambda,infidelity,trace_distance) and the tail
/// comparison (columns delta,empirical,bound,stderr,holds).
#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    /// State dimension (2 for the exact sampler; 3-4 use the Metropolis
    /// chain).
    #[arg(long, default_value_t = 2)]
    pub d: usize,

    /// Rank of the randomly drawn input state (defaults to d). Ignored
    /// when --p is given.
    #[arg(long)]
    pub rank: Option<usize>,

    /// Use the diagonal qubit state diag(p, 1-p) instead of a random one.
    #[arg(long)]
    pub p: Option<f64>,

    /// Number of copies per estimate.
    #[arg(long)]
    pub n: usize,

    /// Number of independent estimates.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,

    /// Infidelity thresholds for the tail table; repeat to override.
    #[arg(long = "delta")]
    pub deltas: Vec<f64>,

    /// Angular grid for the d = 2 inverse-CDF sampler.
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

const STATE_STREAM: u64 = 0;
const TASK_STREAM_BASE: u64 = 1;

pub fn run(args: &SampleArgs) -> Result<()> {
    let deltas = if args.deltas.is_empty() {
        vec![0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5]
    } else {
        args.deltas.clone()
    };
    let rho = input_state(args)?;
    let r = rho.rank();
    let config = SampleConfig {
        grid_size: args.grid,
        ..SampleConfig::default()
    };
    let pool = build_pool(args.common.threads)?;
    let seed = args.common.seed;
    let results: Vec<(String, f64, f64)> = if args.d == 2 {
        let sampler = QubitEstimateSampler::new(&rho, args.n, &config)?;
        pool.install(|| {
            (0..args.samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = stream_rng(seed, TASK_STREAM_BASE + i as u64);
                    let outcome = sampler.draw(&mut rng)?;
                    Ok((
                        outcome.lambda.to_string(),
                        1.0 - fidelity(&rho, &outcome.estimate)?,
                        trace_distance(&rho, &outcome.estimate)?,
                    ))
                })
                .collect::<schurtomo::Result<Vec<_>>>()
        })?
    } else {
        pool.install(|| {
            (0..args.samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = stream_rng(seed, TASK_STREAM_BASE + i as u64);
                    let outcome =
                        schurtomo::tomography::sample_estimate(&rho, args.n, &mut rng, &config)?;
                    Ok((
                        outcome.lambda.to_string(),
                        1.0 - fidelity(&rho, &outcome.estimate)?,
                        trace_distance(&rho, &outcome.estimate)?,
                    ))
                })
                .collect::<schurtomo::Result<Vec<_>>>()
        })?
    };

    let mut out = RunOutput::new(&args.common.out, "sample", seed, args.common.threads, args)?;
    let mut estimates = Table::new(&["sample", "lambda", "infidelity", "trace_distance"]);
    for (i, (lambda, infid, tdist)) in results.iter().enumerate() {
        estimates.push(vec![
            i.into(),
            lambda.as_str().into(),
            (*infid).into(),
            (*tdist).into(),
        ]);
    }
    args.common.format.write(&mut out, "estimates", &estimates)?;

    let mut tails = Table::new(&["delta", "empirical", "bound", "stderr", "holds"]);
    for &delta in &deltas {
        let count = results.iter().filter(|(_, infid, _)| *infid >= delta).count();
        let empirical = count as f64 / args.samples as f64;
        let bound = failure_bound(args.n, args.d, r, delta);
        let stderr = (empirical * (1.0 - empirical) / args.samples as f64).sqrt();
        let holds = empirical <= bound + 3.0 * stderr;
        tails.push(vec![
            delta.into(),
            empirical.into(),
            bound.into(),
            stderr.into(),
            holds.into(),
        ]);
    }
    args.common.format.write(&mut out, "tails", &tails)?;

    let mean_infidelity =
        results.iter().map(|(_, infid, _)| infid).sum::<f64>() / args.samples as f64;
    let mut summary = Table::new(&["samples", "n", "d", "rank", "mean_infidelity"]);
    summary.push(vec![
        args.samples.into(),
        args.n.into(),
        args.d.into(),
        r.into(),
        mean_infidelity.into(),
    ]);
    args.common.format.write(&mut out, "summary", &summary)?;
    out.finish()
}

fn input_state(args: &SampleArgs) -> Result<DensityMatrix> {
    if let Some(p) = args.p {
        if args.d != 2 {
            bail!("--p requires --d 2");
        }
        if !(0.5..=1.0).contains(&p) {
            bail!("--p must lie in (1/2, 1]");
        }
        return DensityMatrix::from_diag(&[p, 1.0 - p]).context("building diagonal state");
    }
    let rank = args.rank.unwrap_or(args.d);
    let mut rng = stream_rng(args.common.seed, STATE_STREAM);
    Ok(schurtomo::states::random_state(args.d, rank, &mut rng)?)
}
