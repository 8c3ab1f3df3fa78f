//! `bounds`: exhaustive sweeps of the dimension, character, and PGM
//! inequalities over partitions.

use anyhow::Result;
use clap::Args;
use serde::Serialize;

use schurtomo::partitions::{
    check_dim_entropy_bound, dim_gl_irrep, dim_sn_irrep, enumerate_partitions,
};
use schurtomo::pgm::check_pgm_bound;
use schurtomo::schur::check_character_lower_bound;

use crate::common::CommonArgs;
use crate::output::{RunOutput, Table};

/// Sweep the partition bounds (columns
/// kind,n,lambda,lhs_ln,rhs_ln,margin,holds) and the exact Schur-Weyl
/// dimension identity (columns d,n,sum,expected,exact_match).
#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    /// Largest n in the partition sweeps.
    #[arg(long = "max-n", default_value_t = 40)]
    pub max_n: usize,

    /// Largest number of diagram rows (and d in the dimension identity).
    #[arg(long = "max-d", default_value_t = 4)]
    pub max_d: usize,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: &BoundsArgs) -> Result<()> {
    let mut out = RunOutput::new(
        &args.common.out,
        "bounds",
        args.common.seed,
        args.common.threads,
        args,
    )?;

    let mut dims = Table::new(&["d", "n", "sum", "expected", "exact_match"]);
    for d in 1..=args.max_d.min(4) {
        for n in 1..=args.max_n.min(20) {
            let total: u128 = enumerate_partitions(n, d)
                .iter()
                .map(|l| {
                    dim_gl_irrep(l, d).exact.unwrap_or(0) * dim_sn_irrep(l).exact.unwrap_or(0)
                })
                .sum();
            let expected = (d as u128).pow(n as u32);
            dims.push(vec![
                d.into(),
                n.into(),
                total.to_string().into(),
                expected.to_string().into(),
                (total == expected).into(),
            ]);
        }
    }
    args.common.format.write(&mut out, "dimension_identity", &dims)?;

    let mut table = Table::new(&["kind", "n", "lambda", "lhs_ln", "rhs_ln", "margin", "holds"]);
    for n in 1..=args.max_n {
        for lambda in enumerate_partitions(n, args.max_d) {
            let dim = check_dim_entropy_bound(&lambda);
            table.push(vec![
                "dim_entropy".into(),
                n.into(),
                lambda.to_string().into(),
                dim.ln_dim.into(),
                dim.n_entropy.into(),
                dim.margin.into(),
                dim.holds.into(),
            ]);
            let lower = check_character_lower_bound(&lambda);
            table.push(vec![
                "char_lower".into(),
                n.into(),
                lambda.to_string().into(),
                lower.lhs_ln.into(),
                lower.rhs_ln.into(),
                lower.margin.into(),
                lower.holds.into(),
            ]);
            let pgm = check_pgm_bound(&lambda, args.max_d)?;
            table.push(vec![
                "pgm".into(),
                n.into(),
                lambda.to_string().into(),
                pgm.lhs_ln.into(),
                pgm.rhs_ln.into(),
                pgm.margin.into(),
                pgm.holds.into(),
            ]);
        }
    }
    args.common.format.write(&mut out, "partition_bounds", &table)?;
    out.finish()
}
