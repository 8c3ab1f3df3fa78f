//! `oracle`: run the explicit tensor-space identity suite and report the
//! worst deviations.

use anyhow::{bail, Result};
use clap::Args;
use serde::Serialize;

use schurtomo::linalg::{hermitize, kron_power, max_abs_entry, trace_product, CMatrix};
use schurtomo::oracle::isotypic_projector;
use schurtomo::partitions::{dim_sn_irrep, enumerate_partitions};
use schurtomo::schur::{schur_eval, EvalPoint};
use schurtomo::states::random_state;

use crate::common::{stream_rng, CommonArgs};
use crate::output::{RunOutput, Table};

const TOLERANCE: f64 = 1e-10;

/// Verify, for every (d, n) in range, that the isotypic projectors are
/// idempotent, Hermitian, orthogonal, and complete, and that explicit
/// traces tr(Pi rho^(x)n) match dim P * s_lambda(spec rho) on random
/// states (columns
/// d,n,idempotence,hermiticity,orthogonality,completeness,measure,holds).
#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    /// Largest copy count (tensor dimension d^n stays within 243).
    #[arg(long = "max-n", default_value_t = 5)]
    pub max_n: usize,

    /// Largest local dimension.
    #[arg(long = "max-d", default_value_t = 3)]
    pub max_d: usize,

    /// Random states per (d, n) pair in the measure comparison.
    #[arg(long, default_value_t = 20)]
    pub states: usize,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: &OracleArgs) -> Result<()> {
    let mut table = Table::new(&[
        "d",
        "n",
        "idempotence",
        "hermiticity",
        "orthogonality",
        "completeness",
        "measure",
        "holds",
    ]);
    let mut all_ok = true;
    for d in 2..=args.max_d {
        for n in 1..=args.max_n {
            if d.pow(n as u32) > 243 {
                continue;
            }
            let total = d.pow(n as u32);
            let lambdas = enumerate_partitions(n, d);
            let projectors: Vec<CMatrix> = lambdas
                .iter()
                .map(|l| isotypic_projector(l, d, n))
                .collect::<schurtomo::Result<_>>()?;
            let mut idem: f64 = 0.0;
            let mut herm: f64 = 0.0;
            let mut sum = CMatrix::zeros(total, total);
            for proj in &projectors {
                idem = idem.max(max_abs_entry(&(proj * proj - proj)));
                herm = herm.max(max_abs_entry(&(proj - hermitize(proj))));
                sum += proj;
            }
            let complete = max_abs_entry(&(sum - CMatrix::identity(total, total)));
            let mut ortho: f64 = 0.0;
            for i in 0..projectors.len() {
                for j in (i + 1)..projectors.len() {
                    ortho = ortho.max(max_abs_entry(&(&projectors[i] * &projectors[j])));
                }
            }
            let mut measure: f64 = 0.0;
            for k in 0..args.states {
                // collision-free stream id per (d, n, k)
                let stream = (((d * 16 + n) as u64) << 32) | k as u64;
                let mut rng = stream_rng(args.common.seed, stream);
                let rank = 1 + (k % d);
                let rho = random_state(d, rank, &mut rng)?;
                let tensor = kron_power(rho.matrix(), n);
                let spectrum = EvalPoint::new(rho.spectrum_clipped())?;
                for (lambda, proj) in lambdas.iter().zip(&projectors) {
                    let explicit = trace_product(proj, &tensor).re;
                    let predicted =
                        dim_sn_irrep(lambda).as_f64() * schur_eval(lambda, &spectrum).to_f64();
                    measure = measure.max((explicit - predicted).abs());
                }
            }
            let holds = idem < TOLERANCE
                && herm < TOLERANCE
                && ortho < TOLERANCE
                && complete < TOLERANCE
                && measure < TOLERANCE;
            all_ok &= holds;
            println!(
                "oracle d={d} n={n}: idem {idem:.2e} herm {herm:.2e} ortho {ortho:.2e} \
                 complete {complete:.2e} measure {measure:.2e} -> {}",
                if holds { "PASS" } else { "FAIL" }
            );
            table.push(vec![
                d.into(),
                n.into(),
                idem.into(),
                herm.into(),
                ortho.into(),
                complete.into(),
                measure.into(),
                holds.into(),
            ]);
        }
    }
    let mut out = RunOutput::new(
        &args.common.out,
        "oracle",
        args.common.seed,
        args.common.threads,
        args,
    )?;
    args.common.format.write(&mut out, "oracle", &table)?;
    out.finish()?;
    if !all_ok {
        bail!("oracle identity suite found deviations above {TOLERANCE:e}");
    }
    Ok(())
}
