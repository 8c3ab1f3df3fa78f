//! `pdf`: exact measurement-outcome density curves for qubit inputs.

use anyhow::Result;
use clap::Args;
use serde::Serialize;

use schurtomo::tomography::{highest_density_width, qubit_outcome_curves};

use crate::common::CommonArgs;
use crate::output::{RunOutput, Table};

/// Emit the exact outcome PDFs of the collective POVM on n copies of
/// diag(p, 1-p), one CSV per n with columns
/// lambda_index,angle_rad,density,weight, plus a summary table of diagram
/// counts and 90% highest-density widths.
#[derive(Debug, Args, Serialize)]
pub struct PdfArgs {
    /// Larger eigenvalue of the qubit state, in (1/2, 1].
    #[arg(long, default_value_t = 0.7)]
    pub p: f64,

    /// Copy counts; repeat the flag for several curve sets.
    #[arg(long = "n", required = true)]
    pub n: Vec<usize>,

    /// Angular grid size over [0, pi].
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: &PdfArgs) -> Result<()> {
    let mut out = RunOutput::new(
        &args.common.out,
        "pdf",
        args.common.seed,
        args.common.threads,
        args,
    )?;
    let mut summary = Table::new(&["n", "diagrams", "weight_sum", "hpd90_width_rad"]);
    for &n in &args.n {
        let curves = qubit_outcome_curves(args.p, n, args.grid)?;
        let mut table = Table::new(&["lambda_index", "angle_rad", "density", "weight"]);
        for (idx, curve) in curves.iter().enumerate() {
            for (&angle, &density) in curve.angles.iter().zip(&curve.density) {
                table.push(vec![
                    idx.into(),
                    angle.into(),
                    density.into(),
                    curve.weight.into(),
                ]);
            }
        }
        args.common
            .format
            .write(&mut out, &format!("pdf_n{n}"), &table)?;
        let weight_sum: f64 = curves.iter().map(|c| c.weight).sum();
        summary.push(vec![
            n.into(),
            curves.len().into(),
            weight_sum.into(),
            highest_density_width(&curves, 0.9).into(),
        ]);
    }
    args.common.format.write(&mut out, "pdf_summary", &summary)?;
    out.finish()
}
