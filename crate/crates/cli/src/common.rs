//! Flags shared by every subcommand, plus the counter-based RNG streams
//! that make parallel runs reproducible: task k always draws from the
//! ChaCha stream (seed, k), regardless of which worker executes it.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::Format;

#[derive(Debug, Args, Serialize)]
pub struct CommonArgs {
    /// Master seed; together with the task index it determines every draw.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output directory for data files and the run manifest.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,

    /// Worker threads for Monte Carlo fan-out. Output bytes do not depend
    /// on this value.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,

    /// Format for tabular outputs (nets and manifests are always JSON).
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// RNG for one task of one run.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn build_pool(threads: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()?)
}

/// Parse "lo:hi:step" into an inclusive grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("grid spec must be lo:hi:step, got {spec:?}");
    }
    let lo: f64 = parts[0].parse()?;
    let hi: f64 = parts[1].parse()?;
    let step: f64 = parts[2].parse()?;
    if step <= 0.0 || hi < lo {
        bail!("grid spec {spec:?} is empty");
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| lo + i as f64 * step).collect())
}

/// Split a total count into contiguous chunks for ordered fan-out.
pub fn chunk_sizes(total: usize, chunk: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut left = total;
    while left > 0 {
        let take = left.min(chunk);
        out.push(take);
        left -= take;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0:2:0.5").unwrap();
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert!(parse_grid("1:0:0.5").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn chunking_covers_total() {
        assert_eq!(chunk_sizes(10, 4), vec![4, 4, 2]);
        assert_eq!(chunk_sizes(0, 4), Vec::<usize>::new());
    }

    #[test]
    fn streams_are_independent_and_stable() {
        use rand::Rng;
        let a: f64 = stream_rng(7, 1).gen();
        let b: f64 = stream_rng(7, 2).gen();
        let a2: f64 = stream_rng(7, 1).gen();
        assert_eq!(a, a2);
        assert_ne!(a, b);
    }
}
