//! `conc`: the Z-variable law checks, projector-overlap tail comparisons,
//! and the Gaussian-domination MGF inequality.

use anyhow::Result;
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use schurtomo::concentration::{
    f_bound_check, gaussian_domination_from_draws, gaussian_square_sum, grid, overlap_statistic,
    projector_overlap_tail_from_draws, sample_z, z_cdf, TailSide, ZParams,
};
use schurtomo::special::{ks_distance, mean_and_stderr};

use crate::common::{build_pool, chunk_sizes, parse_grid, stream_rng, CommonArgs};
use crate::output::{RunOutput, Table};

/// Concentration suite: projector-overlap tails over a z grid (columns
/// z,side,empirical,bound,stderr,holds), Z-law moment and KS summaries,
/// the rate-function inequality sweep, and the Gaussian-domination MGF
/// rows (columns xi,lhs_closed,lhs_mc,lhs_stderr,rhs_mc,rhs_stderr,holds).
#[derive(Debug, Args, Serialize)]
pub struct ConcArgs {
    /// Ambient dimension for projector overlaps.
    #[arg(long, default_value_t = 4)]
    pub d: usize,

    /// Rank of the rotated projector.
    #[arg(long, default_value_t = 2)]
    pub p: usize,

    /// Rank of the fixed projector.
    #[arg(long, default_value_t = 2)]
    pub q: usize,

    /// Deviation grid lo:hi:step for the tail comparisons.
    #[arg(long = "z-grid", default_value = "0.25:2:0.25")]
    pub z_grid: String,

    /// Normalized exponent grid lo:hi:step for the MGF check (pole at 1;
    /// keep below 0.5 for finite Monte Carlo variance).
    #[arg(long = "xi-grid", default_value = "-1:0.4:0.35")]
    pub xi_grid: String,

    /// Z-variable parameters (n, m).
    #[arg(long = "zn", default_value_t = 10)]
    pub zn: usize,

    #[arg(long = "zm", default_value_t = 3)]
    pub zm: usize,

    /// Haar / Gaussian draws per comparison.
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

const CHUNK: usize = 1024;
const OVERLAP_STREAM_BASE: u64 = 1_000_000;
const Z_STREAM_BASE: u64 = 2_000_000;
const GAUSS_STREAM_BASE: u64 = 3_000_000;
const MGF_OVERLAP_STREAM_BASE: u64 = 4_000_000;

/// Fan a draw loop out over chunks with per-chunk RNG streams; the result
/// does not depend on the worker count.
fn chunked_draws(
    pool: &rayon::ThreadPool,
    seed: u64,
    stream_base: u64,
    total: usize,
    draw: impl Fn(&mut rand_chacha::ChaCha8Rng) -> f64 + Sync,
) -> Vec<f64> {
    let sizes = chunk_sizes(total, CHUNK);
    let chunks: Vec<Vec<f64>> = pool.install(|| {
        sizes
            .par_iter()
            .enumerate()
            .map(|(chunk_idx, &count)| {
                let mut rng = stream_rng(seed, stream_base + chunk_idx as u64);
                (0..count).map(|_| draw(&mut rng)).collect()
            })
            .collect()
    });
    // indexed collect keeps chunk order; concatenate sequentially
    chunks.into_iter().flatten().collect()
}

pub fn run(args: &ConcArgs) -> Result<()> {
    let zs = parse_grid(&args.z_grid)?;
    let xis = parse_grid(&args.xi_grid)?;
    let seed = args.common.seed;
    let pool = build_pool(args.common.threads)?;

    // projector-overlap tails
    let upper: Vec<f64> = zs.iter().copied().filter(|&z| z >= 0.0).collect();
    let lower: Vec<f64> = zs.iter().copied().filter(|&z| z > 0.0 && z < 1.0).collect();
    let overlaps = chunked_draws(&pool, seed, OVERLAP_STREAM_BASE, args.samples, |rng| {
        overlap_statistic(args.d, args.p, args.q, rng)
    });
    let rows = projector_overlap_tail_from_draws(args.p, args.q, overlaps, &upper, &lower)?;
    let mut tails = Table::new(&["z", "side", "empirical", "bound", "stderr", "holds"]);
    for row in &rows {
        tails.push(vec![
            row.z.into(),
            match row.side {
                TailSide::Upper => "upper".into(),
                TailSide::Lower => "lower".into(),
            },
            row.empirical.into(),
            row.bound.into(),
            row.stderr.into(),
            row.holds.into(),
        ]);
    }

    // Z-variable law
    let params = ZParams::new(args.zn, args.zm)?;
    let z_samples = chunked_draws(&pool, seed, Z_STREAM_BASE, args.samples, |rng| {
        sample_z(&params, rng)
    });
    let (mean, mean_stderr) = mean_and_stderr(&z_samples);
    let squares: Vec<f64> = z_samples.iter().map(|z| z * z).collect();
    let (second, second_stderr) = mean_and_stderr(&squares);
    let (m1, m2) = params.moments();
    let ks = ks_distance(&z_samples, |z| z_cdf(&params, z).unwrap());
    let mut z_table = Table::new(&["statistic", "value", "reference", "stderr", "holds"]);
    z_table.push(vec![
        "mean".into(),
        mean.into(),
        m1.into(),
        mean_stderr.into(),
        ((mean - m1).abs() <= 3.0 * mean_stderr).into(),
    ]);
    z_table.push(vec![
        "second_moment".into(),
        second.into(),
        m2.into(),
        second_stderr.into(),
        ((second - m2).abs() <= 3.0 * second_stderr).into(),
    ]);
    let ks_threshold = 0.01f64.max(3.0 / (args.samples as f64).sqrt());
    z_table.push(vec![
        "ks_distance".into(),
        ks.into(),
        ks_threshold.into(),
        "".into(),
        (ks < ks_threshold).into(),
    ]);

    // rate-function inequalities on a dense grid
    let rate = f_bound_check(&grid(-0.999, 8.0, 1e-3))?;
    z_table.push(vec![
        "rate_fn_worst_margin".into(),
        rate.worst_margin.into(),
        0.0.into(),
        "".into(),
        rate.holds.into(),
    ]);

    // Gaussian domination
    let gauss = chunked_draws(&pool, seed, GAUSS_STREAM_BASE, args.samples, |rng| {
        gaussian_square_sum(args.p * args.q, rng)
    });
    let mgf_overlaps = chunked_draws(&pool, seed, MGF_OVERLAP_STREAM_BASE, args.samples, |rng| {
        overlap_statistic(args.d, args.p, args.q, rng)
    });
    let mgf_rows = gaussian_domination_from_draws(args.p, args.q, &gauss, &mgf_overlaps, &xis)?;
    let mut mgf = Table::new(&[
        "xi",
        "lhs_closed",
        "lhs_mc",
        "lhs_stderr",
        "rhs_mc",
        "rhs_stderr",
        "holds",
    ]);
    for row in &mgf_rows {
        mgf.push(vec![
            row.xi.into(),
            row.lhs_closed.into(),
            row.lhs_mc.into(),
            row.lhs_stderr.into(),
            row.rhs_mc.into(),
            row.rhs_stderr.into(),
            row.holds.into(),
        ]);
    }

    let mut out = RunOutput::new(
        &args.common.out,
        "conc",
        args.common.seed,
        args.common.threads,
        args,
    )?;
    args.common.format.write(&mut out, "overlap_tails", &tails)?;
    args.common.format.write(&mut out, "z_law", &z_table)?;
    args.common.format.write(&mut out, "mgf", &mgf)?;
    out.finish()
}
