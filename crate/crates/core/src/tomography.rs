//! Simulation of the continuous tomography POVM: Schur-Weyl sampling of the
//! Young diagram, conditional sampling of the rotating unitary, the derived
//! estimate U lambda-bar U^dag, exact qubit outcome densities, and the
//! failure-probability tail check.
//!
//! For qubits the conditional law of U given lambda depends only on the
//! relative Bloch angle between the state's axis and the estimate's axis,
//! so it is sampled exactly by inverse CDF on a grid. For d >= 3 a
//! Metropolis chain over the unitary group is used instead, with
//! acceptance-rate diagnostics attached to each outcome.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::partitions::{dim_gl_irrep, dim_sn_irrep, enumerate_partitions, Partition};
use crate::schur::{schur_eval, schur_eval_d2, schur_eval_product, EvalPoint, LogScalar};
use crate::states::{fidelity, haar_unitary, DensityMatrix, UnitaryMatrix};

/// Enumeration caps for the Schur-Weyl distribution.
pub const SAMPLE_DIM_CAP: usize = 4;
pub const SAMPLE_COPIES_CAP: usize = 200;

/// Weight sums farther than this from 1 signal a Schur evaluation bug.
pub const WEIGHT_SUM_HARD_TOL: f64 = 1e-6;

/// Knobs for the conditional-unitary samplers.
#[derive(Debug, Clone)]
pub struct SampleConfig {
    /// Angular grid size for the d = 2 inverse-CDF path.
    pub grid_size: usize,
    /// Metropolis burn-in steps (d >= 3).
    pub burn_in: usize,
    /// Metropolis thinning between retained states.
    pub thinning: usize,
    /// Scale of the local geodesic proposal step.
    pub local_step: f64,
    /// Probability of a global Haar redraw proposal.
    pub global_prob: f64,
    /// Acceptance rates below this set the warning flag.
    pub min_acceptance: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            grid_size: 4096,
            burn_in: 1000,
            thinning: 10,
            local_step: 0.3,
            global_prob: 0.1,
            min_acceptance: 0.02,
        }
    }
}

/// One draw of the POVM: the sampled diagram, the rotating unitary, and the
/// estimate U lambda-bar U^dag whose spectrum is lambda/n by construction.
#[derive(Debug, Clone)]
pub struct TomographyOutcome {
    pub lambda: Partition,
    pub u: UnitaryMatrix,
    pub estimate: DensityMatrix,
    pub mcmc: Option<McmcDiagnostics>,
}

#[derive(Debug, Clone, Copy)]
pub struct McmcDiagnostics {
    pub acceptance_rate: f64,
    pub warn: bool,
}

/// The Schur-Weyl distribution Pr[lambda] = dim P_lambda s_lambda(spec rho)
/// over diagrams of n with at most d rows. Probabilities are renormalized
/// after validating that they sum to 1.
pub fn schur_weyl_distribution(rho: &DensityMatrix, n: usize) -> Result<Vec<(Partition, f64)>> {
    let d = rho.dim();
    if d > SAMPLE_DIM_CAP {
        return Err(Error::SizeCap {
            what: "schur-weyl sampling dimension",
            got: d,
            cap: SAMPLE_DIM_CAP,
        });
    }
    if n == 0 || n > SAMPLE_COPIES_CAP {
        return Err(Error::SizeCap {
            what: "schur-weyl sampling copies",
            got: n,
            cap: SAMPLE_COPIES_CAP,
        });
    }
    let spectrum = EvalPoint::new(rho.spectrum_clipped())?;
    let mut entries = Vec::new();
    let mut total = 0.0f64;
    for lambda in enumerate_partitions(n, d) {
        let ln_w = dim_sn_irrep(&lambda).ln + schur_eval(&lambda, &spectrum).ln_abs();
        let w = ln_w.exp();
        total += w;
        entries.push((lambda, w));
    }
    if (total - 1.0).abs() > WEIGHT_SUM_HARD_TOL {
        return Err(Error::Normalization {
            sum: total,
            tol: WEIGHT_SUM_HARD_TOL,
        });
    }
    for (_, w) in &mut entries {
        *w /= total;
    }
    Ok(entries)
}

/// Deviation |sum_lambda dim P_lambda s_lambda(spec rho) - 1| before any
/// renormalization.
pub fn schur_weyl_weight_deviation(rho: &DensityMatrix, n: usize) -> Result<f64> {
    let d = rho.dim();
    let spectrum = EvalPoint::new(rho.spectrum_clipped())?;
    let total: f64 = enumerate_partitions(n, d)
        .iter()
        .map(|lambda| (dim_sn_irrep(lambda).ln + schur_eval(lambda, &spectrum).ln_abs()).exp())
        .sum();
    Ok((total - 1.0).abs())
}

fn categorical_draw<'a>(entries: &'a [(Partition, f64)], rng: &mut impl Rng) -> &'a Partition {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (lambda, w) in entries {
        acc += w;
        if u < acc {
            return lambda;
        }
    }
    &entries.last().expect("non-empty distribution").0
}

/// Sample a Young diagram from the Schur-Weyl distribution of rho^(x)n.
pub fn schur_weyl_sample(rho: &DensityMatrix, n: usize, rng: &mut impl Rng) -> Result<Partition> {
    let entries = schur_weyl_distribution(rho, n)?;
    Ok(categorical_draw(&entries, rng).clone())
}

/// Outcome probability density of the POVM element at (lambda, U), per unit
/// Haar measure: (dim Q dim P / s_lambda(lambda-bar)) s_lambda(rho U
/// lambda-bar U^dag).
pub fn povm_density(
    rho: &DensityMatrix,
    lambda: &Partition,
    u: &UnitaryMatrix,
) -> Result<LogScalar> {
    let d = rho.dim();
    if lambda.rows() > d {
        return Err(Error::InvalidPartition(format!(
            "{lambda} has more than d = {d} rows"
        )));
    }
    if u.dim() != d {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: d,
        });
    }
    let estimate = rotated_estimate(lambda, u)?;
    let s_cross = schur_eval_product(lambda, rho, &estimate)?;
    let lambda_bar = EvalPoint::new(lambda.normalized(lambda.rows())?)?;
    let s_self = schur_eval(lambda, &lambda_bar);
    let prefactor = LogScalar::from_ln(dim_gl_irrep(lambda, d).ln + dim_sn_irrep(lambda).ln);
    Ok(prefactor.mul(&s_cross).div(&s_self))
}

/// U lambda-bar U^dag as a density matrix.
pub fn rotated_estimate(lambda: &Partition, u: &UnitaryMatrix) -> Result<DensityMatrix> {
    let d = u.dim();
    DensityMatrix::from_diag(&lambda.normalized(d)?)?.conjugated(u)
}

/// ln of the density upper bound (n+1)^{2dr} F^{2n} at one outcome.
pub fn povm_density_bound_ln(rho: &DensityMatrix, estimate: &DensityMatrix, n: usize) -> Result<f64> {
    let f = fidelity(rho, estimate)?;
    let d = rho.dim() as f64;
    let r = rho.rank() as f64;
    let ln_f = if f > 0.0 { f.ln() } else { f64::NEG_INFINITY };
    Ok(2.0 * d * r * ((n as f64) + 1.0).ln() + 2.0 * n as f64 * ln_f)
}

// ---------------------------------------------------------------------------
// d = 2: exact conditional sampling and outcome PDF curves
// ---------------------------------------------------------------------------

/// Eigenvalues of the product rho sigma-hat for qubit states with spectra
/// (p, 1-p) and (l1, l2) at relative Bloch angle theta, from the closed
/// forms for trace and determinant.
fn qubit_product_eigs(p: f64, l1: f64, l2: f64, theta: f64) -> (f64, f64) {
    let a = 2.0 * p - 1.0;
    let b = l1 - l2;
    let tr = 0.5 * (1.0 + a * b * theta.cos());
    let det = p * (1.0 - p) * l1 * l2;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    (0.5 * (tr + disc), 0.5 * (tr - disc))
}

/// ln s_lambda(rho sigma-hat(theta)) on a midpoint grid over [0, pi].
fn qubit_ln_s_table(p: f64, lambda: &Partition, grid_size: usize) -> Vec<f64> {
    let l1 = lambda.part(0) as f64 / lambda.n() as f64;
    let l2 = lambda.part(1) as f64 / lambda.n() as f64;
    let dt = std::f64::consts::PI / grid_size as f64;
    (0..grid_size)
        .map(|i| {
            let theta = (i as f64 + 0.5) * dt;
            let (x1, x2) = qubit_product_eigs(p, l1, l2, theta);
            schur_eval_d2(lambda, x1, x2).ln_abs()
        })
        .collect()
}

/// Measurement outcome density for one diagram, per unit Haar-angle
/// measure: flat in theta for a maximally mixed input. The conditional
/// normalization integral of density * sin(theta)/2 dtheta equals 1.
#[derive(Debug, Clone)]
pub struct OutcomePdfCurve {
    pub lambda: Partition,
    /// Marginal probability of this diagram.
    pub weight: f64,
    /// Midpoint angular grid over [0, pi].
    pub angles: Vec<f64>,
    /// Conditional density values per unit Haar measure.
    pub density: Vec<f64>,
}

impl OutcomePdfCurve {
    /// |integral of the conditional density - 1| under the grid quadrature.
    pub fn normalization_error(&self) -> f64 {
        let dt = std::f64::consts::PI / self.angles.len() as f64;
        let total: f64 = self
            .angles
            .iter()
            .zip(&self.density)
            .map(|(&th, &g)| g * 0.5 * th.sin() * dt)
            .sum();
        (total - 1.0).abs()
    }
}

/// Exact qubit outcome PDF for the diagram lambda on n copies of
/// diag(p, 1-p), p in (1/2, 1].
pub fn qubit_outcome_pdf(
    p: f64,
    n: usize,
    lambda: &Partition,
    grid_size: usize,
) -> Result<OutcomePdfCurve> {
    if !(0.5..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} outside (1/2, 1]"
        )));
    }
    if lambda.n() != n || lambda.rows() > 2 {
        return Err(Error::InvalidPartition(format!(
            "{lambda} is not a two-row diagram of {n}"
        )));
    }
    if grid_size < 8 {
        return Err(Error::InvalidParameter("grid too small".into()));
    }
    let weight = (dim_sn_irrep(lambda).ln + schur_eval_d2(lambda, p, 1.0 - p).ln_abs()).exp();
    let dt = std::f64::consts::PI / grid_size as f64;
    let angles: Vec<f64> = (0..grid_size).map(|i| (i as f64 + 0.5) * dt).collect();
    let ln_s = qubit_ln_s_table(p, lambda, grid_size);
    let shift = ln_s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = ln_s.iter().map(|&v| (v - shift).exp()).collect();
    let z: f64 = angles
        .iter()
        .zip(&raw)
        .map(|(&th, &g)| g * 0.5 * th.sin() * dt)
        .sum();
    let density: Vec<f64> = raw.iter().map(|&g| g / z).collect();
    Ok(OutcomePdfCurve {
        lambda: lambda.clone(),
        weight,
        angles,
        density,
    })
}

/// Curves for every diagram of n with at most two rows; weights sum to 1.
pub fn qubit_outcome_curves(p: f64, n: usize, grid_size: usize) -> Result<Vec<OutcomePdfCurve>> {
    enumerate_partitions(n, 2)
        .iter()
        .map(|lambda| qubit_outcome_pdf(p, n, lambda, grid_size))
        .collect()
}

/// Width (radians) of the smallest set of grid cells holding `mass` of the
/// lambda-marginalized angular distribution, ranked by probability mass per
/// radian.
pub fn highest_density_width(curves: &[OutcomePdfCurve], mass: f64) -> f64 {
    assert!(!curves.is_empty());
    let grid = curves[0].angles.len();
    let dt = std::f64::consts::PI / grid as f64;
    let mut cell_mass = vec![0.0f64; grid];
    for curve in curves {
        for (i, (&th, &g)) in curve.angles.iter().zip(&curve.density).enumerate() {
            cell_mass[i] += curve.weight * g * 0.5 * th.sin() * dt;
        }
    }
    let total: f64 = cell_mass.iter().sum();
    let mut order: Vec<usize> = (0..grid).collect();
    order.sort_by(|&a, &b| cell_mass[b].partial_cmp(&cell_mass[a]).unwrap());
    let mut acc = 0.0;
    let mut cells = 0;
    for &i in &order {
        acc += cell_mass[i];
        cells += 1;
        if acc >= mass * total {
            break;
        }
    }
    cells as f64 * dt
}

/// Reusable qubit estimator: the Schur-Weyl distribution and per-diagram
/// angular CDF tables are built once up front, so draws are cheap and the
/// sampler can be shared across threads.
pub struct QubitEstimateSampler {
    n: usize,
    /// Eigenbasis of rho.
    basis: CMatrix,
    distribution: Vec<(Partition, f64)>,
    /// Cumulative theta-mass tables, indexed like `distribution`.
    tables: Vec<Vec<f64>>,
}

impl QubitEstimateSampler {
    pub fn new(rho: &DensityMatrix, n: usize, config: &SampleConfig) -> Result<Self> {
        if rho.dim() != 2 {
            return Err(Error::InvalidParameter(
                "exact sampler requires d = 2".into(),
            ));
        }
        if config.grid_size < 8 {
            return Err(Error::InvalidParameter("grid too small".into()));
        }
        let distribution = schur_weyl_distribution(rho, n)?;
        let (values, basis) = crate::linalg::hermitian_eigen(rho.matrix());
        let p = values[0].clamp(0.0, 1.0);
        let grid = config.grid_size;
        let dt = std::f64::consts::PI / grid as f64;
        let tables = distribution
            .iter()
            .map(|(lambda, _)| {
                let ln_s = qubit_ln_s_table(p, lambda, grid);
                let shift = ln_s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let mut cum = Vec::with_capacity(grid);
                let mut acc = 0.0;
                for (i, &v) in ln_s.iter().enumerate() {
                    let theta = (i as f64 + 0.5) * dt;
                    acc += (v - shift).exp() * theta.sin();
                    cum.push(acc);
                }
                for v in &mut cum {
                    *v /= acc;
                }
                cum
            })
            .collect();
        Ok(Self {
            n,
            basis,
            distribution,
            tables,
        })
    }

    pub fn distribution(&self) -> &[(Partition, f64)] {
        &self.distribution
    }

    pub fn copies(&self) -> usize {
        self.n
    }

    /// Cumulative theta-mass table of the given diagram, if it is in the
    /// support.
    pub fn cumulative_table(&self, lambda: &Partition) -> Option<&[f64]> {
        self.distribution
            .iter()
            .position(|(l, _)| l == lambda)
            .map(|i| self.tables[i].as_slice())
    }

    pub fn draw(&self, rng: &mut impl Rng) -> Result<TomographyOutcome> {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut idx = self.distribution.len() - 1;
        for (i, (_, w)) in self.distribution.iter().enumerate() {
            acc += w;
            if u < acc {
                idx = i;
                break;
            }
        }
        let lambda = self.distribution[idx].0.clone();
        let cum = &self.tables[idx];
        let grid = cum.len();
        let dt = std::f64::consts::PI / grid as f64;
        let u: f64 = rng.gen();
        let idx = cum.partition_point(|&c| c < u);
        let idx = idx.min(grid - 1);
        let prev = if idx == 0 { 0.0 } else { cum[idx - 1] };
        let frac = if cum[idx] > prev {
            (u - prev) / (cum[idx] - prev)
        } else {
            0.5
        };
        let theta = (idx as f64 + frac) * dt;
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let rotation = qubit_rotation(theta, phi);
        let unitary = UnitaryMatrix::new(&self.basis * rotation)?;
        let estimate = rotated_estimate(&lambda, &unitary)?;
        Ok(TomographyOutcome {
            lambda,
            u: unitary,
            estimate,
            mcmc: None,
        })
    }
}

/// exp(-i phi sigma_z / 2) exp(-i theta sigma_y / 2): maps the z axis to
/// the Bloch direction (theta, phi).
fn qubit_rotation(theta: f64, phi: f64) -> CMatrix {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let em = Complex64::from_polar(1.0, -phi / 2.0);
    let ep = Complex64::from_polar(1.0, phi / 2.0);
    CMatrix::from_row_slice(
        2,
        2,
        &[
            em * c,
            -em * s,
            ep * s,
            ep * c,
        ],
    )
}

// ---------------------------------------------------------------------------
// d >= 3: Metropolis chain over the unitary group
// ---------------------------------------------------------------------------

fn gue_direction(d: usize, rng: &mut impl Rng) -> CMatrix {
    use rand_distr::StandardNormal;
    let raw = CMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    crate::linalg::hermitize(&raw)
}

fn unitary_exp_i(h: &CMatrix) -> CMatrix {
    // exp(iH) for Hermitian H via its eigendecomposition
    let (values, vectors) = crate::linalg::hermitian_eigen(h);
    let d = h.nrows();
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, v);
        for i in 0..d {
            scaled[(i, j)] *= phase;
        }
    }
    scaled * vectors.adjoint()
}

fn metropolis_estimate(
    rho: &DensityMatrix,
    lambda: &Partition,
    rng: &mut impl Rng,
    config: &SampleConfig,
) -> Result<TomographyOutcome> {
    let d = rho.dim();
    let ln_target = |u: &UnitaryMatrix| -> Result<f64> {
        let est = rotated_estimate(lambda, u)?;
        Ok(schur_eval_product(lambda, rho, &est)?.ln_abs())
    };
    let mut current = haar_unitary(d, rng);
    let mut current_ln = ln_target(&current)?;
    let mut accepted = 0usize;
    let steps = config.burn_in + config.thinning;
    for _ in 0..steps {
        let proposal = if rng.gen::<f64>() < config.global_prob {
            haar_unitary(d, rng)
        } else {
            let step = gue_direction(d, rng).scale(config.local_step / (d as f64).sqrt());
            UnitaryMatrix::new(unitary_exp_i(&step) * current.matrix())?
        };
        let proposal_ln = ln_target(&proposal)?;
        let log_ratio = proposal_ln - current_ln;
        let accept = if log_ratio >= 0.0 {
            true
        } else if proposal_ln == f64::NEG_INFINITY {
            false
        } else {
            rng.gen::<f64>().ln() < log_ratio
        };
        if accept {
            current = proposal;
            current_ln = proposal_ln;
            accepted += 1;
        }
    }
    let acceptance_rate = accepted as f64 / steps as f64;
    let estimate = rotated_estimate(lambda, &current)?;
    Ok(TomographyOutcome {
        lambda: lambda.clone(),
        u: current,
        estimate,
        mcmc: Some(McmcDiagnostics {
            acceptance_rate,
            warn: acceptance_rate < config.min_acceptance,
        }),
    })
}

/// One full POVM draw on rho^(x)n: lambda from the Schur-Weyl marginal,
/// then U from the conditional density proportional to
/// s_lambda(rho U lambda-bar U^dag).
pub fn sample_estimate(
    rho: &DensityMatrix,
    n: usize,
    rng: &mut impl Rng,
    config: &SampleConfig,
) -> Result<TomographyOutcome> {
    match rho.dim() {
        2 => QubitEstimateSampler::new(rho, n, config)?.draw(rng),
        3 | 4 => {
            let lambda = schur_weyl_sample(rho, n, rng)?;
            metropolis_estimate(rho, &lambda, rng, config)
        }
        d => Err(Error::SizeCap {
            what: "sample_estimate dimension",
            got: d,
            cap: 4,
        }),
    }
}

// ---------------------------------------------------------------------------
// failure probability tail
// ---------------------------------------------------------------------------

/// min(1, (n+1)^{3dr} e^{-2n delta}).
pub fn failure_bound(n: usize, d: usize, r: usize, delta: f64) -> f64 {
    let ln = 3.0 * (d * r) as f64 * ((n + 1) as f64).ln() - 2.0 * n as f64 * delta;
    ln.exp().min(1.0)
}

#[derive(Debug, Clone)]
pub struct TailRow {
    pub delta: f64,
    pub empirical: f64,
    pub bound: f64,
    pub stderr: f64,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct FailureReport {
    pub rows: Vec<TailRow>,
    pub mean_infidelity: f64,
    pub samples: usize,
}

/// Empirical Pr[F(rho-hat, rho) <= 1 - delta] over repeated POVM draws,
/// checked against the analytic tail bound within three binomial standard
/// errors.
pub fn failure_probability_report(
    rho: &DensityMatrix,
    n: usize,
    deltas: &[f64],
    samples: usize,
    rng: &mut impl Rng,
    config: &SampleConfig,
) -> Result<FailureReport> {
    assert!(samples >= 1);
    let d = rho.dim();
    let r = rho.rank();
    let mut infidelities = Vec::with_capacity(samples);
    if d == 2 {
        let sampler = QubitEstimateSampler::new(rho, n, config)?;
        for _ in 0..samples {
            let outcome = sampler.draw(rng)?;
            infidelities.push(1.0 - fidelity(rho, &outcome.estimate)?);
        }
    } else {
        for _ in 0..samples {
            let outcome = sample_estimate(rho, n, rng, config)?;
            infidelities.push(1.0 - fidelity(rho, &outcome.estimate)?);
        }
    }
    let mean_infidelity = infidelities.iter().sum::<f64>() / samples as f64;
    let rows = deltas
        .iter()
        .map(|&delta| {
            let count = infidelities.iter().filter(|&&inf| inf >= delta).count();
            let empirical = count as f64 / samples as f64;
            let bound = failure_bound(n, d, r, delta);
            let stderr = (empirical * (1.0 - empirical) / samples as f64).sqrt();
            TailRow {
                delta,
                empirical,
                bound,
                stderr,
                holds: empirical <= bound + 3.0 * stderr,
            }
        })
        .collect();
    Ok(FailureReport {
        rows,
        mean_infidelity,
        samples,
    })
}
