//! `holevo`: analytic chi_0 values, Fano copy-count bounds, and Monte
//! Carlo Holevo estimates for the net families.

use anyhow::Result;
use clap::Args;
use serde::Serialize;

use schurtomo::packing::{
    chi0_analytic, holevo_chi, indep_chi_per_copy_mc, make_state, omega_chi_bound,
    sample_lower_bound_ln, Ensemble, NetFamily,
};
use schurtomo::states::haar_unitary;

use crate::common::{stream_rng, CommonArgs};
use crate::output::{RunOutput, Table};

/// Tabulate per-copy Holevo bounds, Fano copy-count lower bounds at the
/// guaranteed net cardinalities, a Monte Carlo chi of a sampled kind-II
/// ensemble, and the independent-measurement per-copy check (columns
/// quantity,value,reference,stderr,holds; empty cells where not
/// applicable).
#[derive(Debug, Args, Serialize)]
pub struct HolevoArgs {
    /// Ambient dimension (even values enable the kind-II rows).
    #[arg(long, default_value_t = 8)]
    pub d: usize,

    /// Rank parameter for the kind-I/III rows.
    #[arg(long, default_value_t = 1)]
    pub rank: usize,

    /// Mixing parameter t.
    #[arg(long, default_value_t = 0.3)]
    pub t: f64,

    /// Decoding failure probability in the Fano bound.
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,

    /// States in the Monte Carlo kind-II ensemble.
    #[arg(long = "ensemble-size", default_value_t = 200)]
    pub ensemble_size: usize,

    /// Rank-1 elements in the random POVM of the independent-measurement
    /// check.
    #[arg(long = "povm-size", default_value_t = 16)]
    pub povm_size: usize,

    /// Ensemble draws for the independent-measurement check.
    #[arg(long, default_value_t = 500)]
    pub samples: usize,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

const ENSEMBLE_STREAM_BASE: u64 = 10;
const INDEP_STREAM: u64 = 5000;

pub fn run(args: &HolevoArgs) -> Result<()> {
    let mut table = Table::new(&["quantity", "value", "reference", "stderr", "holds"]);
    let blank = || "".into();

    // analytic chi_0 and the matching Fano bounds at the guaranteed
    // net cardinalities: ln N >= dr/54 (I), d^2/32 (II)
    let family_i = NetFamily::I {
        d: args.d,
        r: args.rank,
        t: args.t,
    };
    if family_i.validate().is_ok() {
        let chi0 = chi0_analytic(&family_i)?;
        table.push(vec!["chi0_I".into(), chi0.into(), blank(), blank(), blank()]);
        if chi0 > 0.0 {
            let ln_n = (args.d * args.rank) as f64 / 54.0;
            if let Ok(fano) = sample_lower_bound_ln(ln_n, args.eta, chi0) {
                table.push(vec![
                    "fano_copies_I".into(),
                    fano.copies.into(),
                    ln_n.into(),
                    blank(),
                    (!fano.vacuous).into(),
                ]);
            }
        }
    }
    let family_ii = NetFamily::II { d: args.d, t: args.t };
    if family_ii.validate().is_ok() {
        let chi0 = chi0_analytic(&family_ii)?;
        table.push(vec![
            "chi0_II".into(),
            chi0.into(),
            (args.t * args.t).into(),
            blank(),
            (chi0 <= args.t * args.t).into(),
        ]);
        if chi0 > 0.0 {
            let ln_n = (args.d * args.d) as f64 / 32.0;
            if let Ok(fano) = sample_lower_bound_ln(ln_n, args.eta, chi0) {
                table.push(vec![
                    "fano_copies_II".into(),
                    fano.copies.into(),
                    ln_n.into(),
                    blank(),
                    (!fano.vacuous).into(),
                ]);
            }
        }
    }
    let family_iii = NetFamily::III {
        d: args.d,
        r: args.rank,
    };
    if family_iii.validate().is_ok() {
        let chi0 = chi0_analytic(&family_iii)?;
        table.push(vec![
            "chi0_III".into(),
            chi0.into(),
            (args.d as f64 / args.rank as f64).ln().into(),
            blank(),
            blank(),
        ]);
    }
    let omega = omega_chi_bound(args.t, args.rank, 1);
    table.push(vec![
        "omega_chi_per_copy_bound".into(),
        omega.value.into(),
        blank(),
        blank(),
        omega.in_validity_range.into(),
    ]);

    // Monte Carlo chi of a finite kind-II ensemble
    if family_ii.validate().is_ok() {
        let states: Vec<_> = (0..args.ensemble_size)
            .map(|i| {
                let mut rng = stream_rng(args.common.seed, ENSEMBLE_STREAM_BASE + i as u64);
                make_state(&family_ii, &haar_unitary(args.d, &mut rng))
            })
            .collect::<schurtomo::Result<_>>()?;
        let chi = holevo_chi(&Ensemble::uniform(states)?);
        table.push(vec![
            "chi_mc_II".into(),
            chi.into(),
            (args.t * args.t).into(),
            blank(),
            (chi <= args.t * args.t).into(),
        ]);
        let mut rng = stream_rng(args.common.seed, INDEP_STREAM);
        let indep = indep_chi_per_copy_mc(args.d, args.t, args.povm_size, args.samples, &mut rng)?;
        table.push(vec![
            "indep_chi_per_copy".into(),
            indep.estimate.into(),
            indep.bound.into(),
            indep.stderr.into(),
            indep.holds.into(),
        ]);
    }

    let mut out = RunOutput::new(
        &args.common.out,
        "holevo",
        args.common.seed,
        args.common.threads,
        args,
    )?;
    args.common.format.write(&mut out, "holevo", &table)?;
    out.finish()
}
