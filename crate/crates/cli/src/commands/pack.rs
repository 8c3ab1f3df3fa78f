//! `pack`: greedy packing-net construction with JSON export of the kept
//! states.

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;

use schurtomo::packing::{greedy_pack, DistanceMetric, NetFamily};

use crate::common::{stream_rng, CommonArgs};
use crate::output::RunOutput;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    I,
    Ii,
    Iii,
    Omega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    /// Trace norm ||a - b||_1.
    Onenorm,
    /// Infidelity 1 - F(a, b).
    Infidelity,
}

/// Build a packing net by greedy rejection sampling and export it as JSON
/// (family parameters, seed, pairwise-separation certificate, and the
/// state matrices as [re, im] entry pairs).
#[derive(Debug, Args, Serialize)]
pub struct PackArgs {
    /// State family.
    #[arg(long, value_enum)]
    pub family: FamilyKind,

    /// Ambient dimension d.
    #[arg(long)]
    pub d: usize,

    /// Family rank parameter r (unused for kind ii, where r = d/2).
    #[arg(long, default_value_t = 1)]
    pub rank: usize,

    /// Family mixing parameter t (unused for kind iii, where t = 1).
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,

    /// Pairwise separation threshold in the chosen metric. Defaults to the
    /// family's guaranteed separation: t/4 for kind i, t/2 for ii, and
    /// 2*epsilon for iii.
    #[arg(long)]
    pub threshold: Option<f64>,

    /// Separation parameter for the kind-iii threshold (ignored when
    /// --threshold is given).
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,

    #[arg(long, value_enum, default_value_t = MetricKind::Onenorm)]
    pub metric: MetricKind,

    /// Candidate draw budget.
    #[arg(long = "max-draws", default_value_t = 10_000)]
    pub max_draws: usize,

    /// Stop once this many states are kept.
    #[arg(long = "max-states", default_value_t = 16)]
    pub max_states: usize,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

#[derive(Serialize)]
struct NetExport<'a> {
    family: &'a str,
    d: usize,
    rank: usize,
    t: f64,
    metric: &'a str,
    threshold: f64,
    seed: u64,
    draws_used: usize,
    states_kept: usize,
    verified_min_distance: f64,
    /// Each state as rows of [re, im] pairs.
    states: Vec<Vec<Vec<[f64; 2]>>>,
}

pub fn run(args: &PackArgs) -> Result<()> {
    let family = match args.family {
        FamilyKind::I => NetFamily::I {
            d: args.d,
            r: args.rank,
            t: args.t,
        },
        FamilyKind::Ii => NetFamily::II { d: args.d, t: args.t },
        FamilyKind::Iii => NetFamily::III {
            d: args.d,
            r: args.rank,
        },
        FamilyKind::Omega => NetFamily::Omega {
            d: args.d,
            r: args.rank,
            t: args.t,
        },
    };
    family.validate()?;
    let threshold = match args.threshold {
        Some(v) => v,
        None => match family {
            NetFamily::I { t, .. } => t / 4.0,
            NetFamily::II { t, .. } => t / 2.0,
            NetFamily::III { .. } => 2.0 * args.epsilon,
            NetFamily::Omega { .. } => {
                bail!("--threshold is required for the omega family")
            }
        },
    };
    let metric = match args.metric {
        MetricKind::Onenorm => DistanceMetric::OneNorm,
        MetricKind::Infidelity => DistanceMetric::Infidelity,
    };
    let mut rng = stream_rng(args.common.seed, 0);
    let net = greedy_pack(
        &family,
        threshold,
        metric,
        args.max_draws,
        args.max_states,
        &mut rng,
    )?;
    println!(
        "kept {} states in {} draws; verified min distance {}",
        net.len(),
        net.draws_used,
        net.verified_min_distance
    );

    let states: Vec<Vec<Vec<[f64; 2]>>> = net
        .states
        .iter()
        .map(|s| {
            (0..s.dim())
                .map(|i| {
                    (0..s.dim())
                        .map(|j| {
                            let z = s.matrix()[(i, j)];
                            [z.re, z.im]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let export = NetExport {
        family: match args.family {
            FamilyKind::I => "I",
            FamilyKind::Ii => "II",
            FamilyKind::Iii => "III",
            FamilyKind::Omega => "omega",
        },
        d: args.d,
        rank: family.rank(),
        t: args.t,
        metric: match args.metric {
            MetricKind::Onenorm => "one_norm",
            MetricKind::Infidelity => "infidelity",
        },
        threshold,
        seed: args.common.seed,
        draws_used: net.draws_used,
        states_kept: net.len(),
        verified_min_distance: net.verified_min_distance,
        states,
    };
    let mut out = RunOutput::new(
        &args.common.out,
        "pack",
        args.common.seed,
        args.common.threads,
        args,
    )?;
    out.add_json("net.json", &export)?;
    out.finish()
}
