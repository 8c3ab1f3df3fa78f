//! Concentration-of-measure checks for Haar projector overlaps: the
//! Gaussian-ratio variable Z with its exact Beta law, the piecewise rate
//! function f(z) = z - ln(1+z), empirical tail comparisons, the
//! Gaussian-domination moment inequality, and the spectrum/eigenbasis
//! decoupling statistics of induced random states.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::special::{
    chi_square_independence, ln_gamma, mean_and_stderr, reg_inc_beta,
};
use crate::states::haar_unitary;

/// Parameters of Z_{n,m}: the normalized ratio of the first 2m of 2n
/// squared Gaussians.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZParams {
    pub n: usize,
    pub m: usize,
}

impl ZParams {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 || m > n {
            return Err(Error::InvalidParameter(format!(
                "Z parameters need 1 <= m <= n, got n = {n}, m = {m}"
            )));
        }
        Ok(Self { n, m })
    }

    /// Support is [0, n/m].
    pub fn upper_limit(&self) -> f64 {
        self.n as f64 / self.m as f64
    }

    /// Exact first and second moments (1, (1+1/m)/(1+1/n)).
    pub fn moments(&self) -> (f64, f64) {
        let m = self.m as f64;
        let n = self.n as f64;
        (1.0, (1.0 + 1.0 / m) / (1.0 + 1.0 / n))
    }
}

/// One draw of Z_{n,m} = (n/m) (x_1^2+..+x_{2m}^2)/(x_1^2+..+x_{2n}^2)
/// with variance-1/2 Gaussians. Identically 1 when m = n.
pub fn sample_z(params: &ZParams, rng: &mut impl Rng) -> f64 {
    let mut head = 0.0f64;
    for _ in 0..2 * params.m {
        let x: f64 = rng.sample(StandardNormal);
        head += 0.5 * x * x;
    }
    let mut tail = 0.0f64;
    for _ in 0..2 * (params.n - params.m) {
        let x: f64 = rng.sample(StandardNormal);
        tail += 0.5 * x * x;
    }
    params.upper_limit() * head / (head + tail)
}

/// Density of Z_{n,m} on [0, n/m]:
/// (m/n) Gamma(n)/(Gamma(n-m) Gamma(m)) (mz/n)^{m-1} (1-mz/n)^{n-m-1}.
/// The m = n point mass is rejected rather than silently special-cased.
pub fn z_pdf(params: &ZParams, z: f64) -> Result<f64> {
    if params.m == params.n {
        return Err(Error::DegenerateDistribution(
            "Z_{n,n} is a point mass at 1; no density exists".into(),
        ));
    }
    let (n, m) = (params.n as f64, params.m as f64);
    if z < 0.0 || z > params.upper_limit() {
        return Ok(0.0);
    }
    let u = (m * z / n).clamp(0.0, 1.0);
    let ln_norm = ln_gamma(n) - ln_gamma(n - m) - ln_gamma(m);
    Ok((m / n) * ln_norm.exp() * u.powf(m - 1.0) * (1.0 - u).powf(n - m - 1.0))
}

/// CDF of Z_{n,m}: the regularized incomplete beta I_{mz/n}(m, n-m).
pub fn z_cdf(params: &ZParams, z: f64) -> Result<f64> {
    if params.m == params.n {
        return Err(Error::DegenerateDistribution(
            "Z_{n,n} is a point mass at 1; use the exact value".into(),
        ));
    }
    if z <= 0.0 {
        return Ok(0.0);
    }
    if z >= params.upper_limit() {
        return Ok(1.0);
    }
    let u = params.m as f64 * z / params.n as f64;
    Ok(reg_inc_beta(
        params.m as f64,
        (params.n - params.m) as f64,
        u,
    ))
}

/// The large-deviation rate function z - ln(1+z).
pub fn overlap_rate(z: f64) -> f64 {
    assert!(z > -1.0, "rate function domain is (-1, inf)");
    z - z.ln_1p()
}

/// Verification of the piecewise bounds on f(z) = z - ln(1+z):
/// (1+z)/2 for z >= 5, (1-ln2) z^2 on (-1, 1], z^2/2 on (-1, 0].
#[derive(Debug, Clone, Copy)]
pub struct RateBoundReport {
    pub points_checked: usize,
    /// Most negative value of f(z) - bound(z) over the grid.
    pub worst_margin: f64,
    pub holds: bool,
}

pub fn f_bound_check(grid: &[f64]) -> Result<RateBoundReport> {
    const SLACK: f64 = 1e-12;
    let mut worst: f64 = f64::INFINITY;
    let mut checked = 0usize;
    for &z in grid {
        if z <= -1.0 {
            return Err(Error::InvalidParameter(format!(
                "grid point {z} outside (-1, inf)"
            )));
        }
        let f = overlap_rate(z);
        let mut bounds = Vec::new();
        if z >= 5.0 {
            bounds.push((1.0 + z) / 2.0);
        }
        if z <= 1.0 {
            bounds.push((1.0 - std::f64::consts::LN_2) * z * z);
        }
        if z <= 0.0 {
            bounds.push(z * z / 2.0);
        }
        for b in bounds {
            worst = worst.min(f - b);
            checked += 1;
        }
    }
    Ok(RateBoundReport {
        points_checked: checked,
        worst_margin: worst,
        holds: worst >= -SLACK,
    })
}

/// Uniform grid helper, inclusive of both ends up to step rounding.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && hi >= lo);
    let count = ((hi - lo) / step).round() as usize;
    (0..=count).map(|i| lo + i as f64 * step).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy)]
pub struct OverlapTailRow {
    pub z: f64,
    pub side: TailSide,
    pub empirical: f64,
    pub bound: f64,
    pub stderr: f64,
    pub holds: bool,
}

/// Empirical tails of (d/pq) tr(Q U P U^dag) over Haar draws against
/// exp(-pq f(+-z)), within three binomial standard errors.
pub fn projector_overlap_tail(
    d: usize,
    p: usize,
    q: usize,
    upper_z: &[f64],
    lower_z: &[f64],
    samples: usize,
    rng: &mut impl Rng,
) -> Result<Vec<OverlapTailRow>> {
    if p == 0 || q == 0 || p > d || q > d {
        return Err(Error::InvalidParameter(format!(
            "projector ranks must satisfy 1 <= p, q <= d, got p = {p}, q = {q}, d = {d}"
        )));
    }
    let draws: Vec<f64> = (0..samples)
        .map(|_| overlap_statistic(d, p, q, rng))
        .collect();
    projector_overlap_tail_from_draws(p, q, draws, upper_z, lower_z)
}

/// Tail comparison from externally generated overlap statistics, so
/// callers can fan the Haar draws out across workers.
pub fn projector_overlap_tail_from_draws(
    p: usize,
    q: usize,
    mut draws: Vec<f64>,
    upper_z: &[f64],
    lower_z: &[f64],
) -> Result<Vec<OverlapTailRow>> {
    let samples = draws.len();
    if samples == 0 {
        return Err(Error::InvalidParameter("no draws".into()));
    }
    draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tail_fraction = |threshold: f64, upper: bool| -> f64 {
        if upper {
            let idx = draws.partition_point(|&x| x < threshold);
            (samples - idx) as f64 / samples as f64
        } else {
            let idx = draws.partition_point(|&x| x <= threshold);
            idx as f64 / samples as f64
        }
    };
    let pq = (p * q) as f64;
    let mut rows = Vec::new();
    for &z in upper_z {
        if z < 0.0 {
            return Err(Error::InvalidParameter(
                "upper-tail z must be non-negative".into(),
            ));
        }
        // z = 0 gives the vacuous bound 1
        let empirical = tail_fraction(1.0 + z, true);
        let bound = (-pq * overlap_rate(z)).exp().min(1.0);
        let stderr = (empirical * (1.0 - empirical) / samples as f64).sqrt();
        rows.push(OverlapTailRow {
            z,
            side: TailSide::Upper,
            empirical,
            bound,
            stderr,
            holds: empirical <= bound + 3.0 * stderr,
        });
    }
    for &z in lower_z {
        if !(0.0 < z && z < 1.0) {
            return Err(Error::InvalidParameter("lower-tail z must lie in (0,1)".into()));
        }
        let empirical = tail_fraction(1.0 - z, false);
        let bound = (-pq * overlap_rate(-z)).exp().min(1.0);
        let stderr = (empirical * (1.0 - empirical) / samples as f64).sqrt();
        rows.push(OverlapTailRow {
            z,
            side: TailSide::Lower,
            empirical,
            bound,
            stderr,
            holds: empirical <= bound + 3.0 * stderr,
        });
    }
    Ok(rows)
}

/// (d/pq) tr(Q U P U^dag) for diagonal projectors onto the first q and p
/// coordinates: (d/pq) sum_{i<q, j<p} |U_ij|^2 at a fresh Haar unitary.
pub fn overlap_statistic(d: usize, p: usize, q: usize, rng: &mut impl Rng) -> f64 {
    let u = haar_unitary(d, rng);
    let mut acc = 0.0;
    for i in 0..q {
        for j in 0..p {
            acc += u.matrix()[(i, j)].norm_sqr();
        }
    }
    d as f64 / (p * q) as f64 * acc
}

#[derive(Debug, Clone, Copy)]
pub struct GaussianDominationRow {
    pub xi: f64,
    /// Closed form (1 - xi)^{-pq} of the Gaussian side.
    pub lhs_closed: f64,
    pub lhs_mc: f64,
    pub lhs_stderr: f64,
    pub rhs_mc: f64,
    pub rhs_stderr: f64,
    pub holds: bool,
}

/// Check E exp(xi sum x_i^2) >= E_U exp(xi d tr(Q U P U^dag)) on a grid of
/// normalized xi (pole at 1). Both sides are estimated by Monte Carlo; the
/// left side also comes in closed form.
pub fn gaussian_domination_check(
    d: usize,
    p: usize,
    q: usize,
    xis: &[f64],
    samples: usize,
    rng: &mut impl Rng,
) -> Result<Vec<GaussianDominationRow>> {
    if p == 0 || q == 0 || p > d || q > d {
        return Err(Error::InvalidParameter("invalid projector ranks".into()));
    }
    // reuse one set of draws across the xi grid
    let gaussian_sums: Vec<f64> = (0..samples)
        .map(|_| gaussian_square_sum(p * q, rng))
        .collect();
    let overlaps: Vec<f64> = (0..samples)
        .map(|_| overlap_statistic(d, p, q, rng))
        .collect();
    gaussian_domination_from_draws(p, q, &gaussian_sums, &overlaps, xis)
}

/// Sum of 2k squared variance-1/2 Gaussians.
pub fn gaussian_square_sum(k: usize, rng: &mut impl Rng) -> f64 {
    let mut acc = 0.0;
    for _ in 0..2 * k {
        let x: f64 = rng.sample(StandardNormal);
        acc += 0.5 * x * x;
    }
    acc
}

/// Domination check from externally generated draws.
pub fn gaussian_domination_from_draws(
    p: usize,
    q: usize,
    gaussian_sums: &[f64],
    overlaps: &[f64],
    xis: &[f64],
) -> Result<Vec<GaussianDominationRow>> {
    let pq = (p * q) as f64;
    for &xi in xis {
        if xi >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "normalized xi = {xi} at or beyond the MGF pole"
            )));
        }
    }
    let mut rows = Vec::new();
    for &xi in xis {
        let lhs_closed = (1.0 - xi).powf(-pq);
        let lhs_values: Vec<f64> = gaussian_sums.iter().map(|&s| (xi * s).exp()).collect();
        let rhs_values: Vec<f64> = overlaps.iter().map(|&z| (xi * pq * z).exp()).collect();
        let (lhs_mc, lhs_stderr) = mean_and_stderr(&lhs_values);
        let (rhs_mc, rhs_stderr) = mean_and_stderr(&rhs_values);
        rows.push(GaussianDominationRow {
            xi,
            lhs_closed,
            lhs_mc,
            lhs_stderr,
            rhs_mc,
            rhs_stderr,
            holds: lhs_closed >= rhs_mc - 3.0 * rhs_stderr,
        });
    }
    Ok(rows)
}

/// Statistics of rank-p states induced by partial trace of Haar-random
/// pure states, testing the spectrum/eigenbasis decoupling: the ensemble
/// mean is I/d, top-eigenvector components are Haar-flat, and the spectrum
/// histogram is independent of the eigenvector's preferred basis direction.
#[derive(Debug, Clone)]
pub struct InducedSymmetryReport {
    pub mean_state_max_sigmas: f64,
    pub eigvec_moment_max_sigmas: f64,
    /// Per-position mean of the randomly permuted nonzero spectrum vs 1/p.
    pub eigenvalue_moment_max_sigmas: f64,
    pub chi2_stat: f64,
    pub chi2_p_value: f64,
    pub holds: bool,
}

pub fn induced_state_symmetry_check(
    d: usize,
    p: usize,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<InducedSymmetryReport> {
    if p == 0 || p > d {
        return Err(Error::InvalidParameter(format!(
            "induced rank must satisfy 1 <= p <= d, got p = {p}, d = {d}"
        )));
    }
    if samples < 100 {
        return Err(Error::InvalidParameter("need at least 100 samples".into()));
    }
    let mut mean = CMatrix::zeros(d, d);
    let mut sq_dev = vec![0.0f64; d * d]; // accumulate |entry|^2 for variance
    let mut top_component_sum = vec![0.0f64; d];
    let mut top_component_sq = vec![0.0f64; d];
    let mut eig_pos_sum = vec![0.0f64; p];
    let mut eig_pos_sq = vec![0.0f64; p];
    let mut records = Vec::with_capacity(samples); // (argmax index, top eigenvalue)
    for _ in 0..samples {
        let state = induced_state(d, p, rng);
        mean += &state;
        for (k, z) in state.iter().enumerate() {
            sq_dev[k] += z.norm_sqr();
        }
        let (values, vectors) = hermitian_eigen(&state);
        let top = vectors.column(0);
        let mut best = 0usize;
        let mut best_mag = 0.0;
        for k in 0..d {
            let mag = top[k].norm_sqr();
            top_component_sum[k] += mag;
            top_component_sq[k] += mag * mag;
            if mag > best_mag {
                best_mag = mag;
                best = k;
            }
        }
        // randomly permuted nonzero spectrum: exchangeability forces every
        // position to average 1/p
        let mut spectrum: Vec<f64> = values.iter().take(p).map(|&v| v.max(0.0)).collect();
        for i in (1..p).rev() {
            spectrum.swap(i, rng.gen_range(0..=i));
        }
        for (k, &v) in spectrum.iter().enumerate() {
            eig_pos_sum[k] += v;
            eig_pos_sq[k] += v * v;
        }
        records.push((best, values[0]));
    }
    let nf = samples as f64;
    // (1) ensemble mean vs I/d, in per-entry standard errors
    let mut mean_sigmas = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let expected = if i == j { 1.0 / d as f64 } else { 0.0 };
            let avg = mean[(i, j)] / Complex64::new(nf, 0.0);
            let var = (sq_dev[j * d + i] / nf - avg.norm_sqr()).max(1e-300);
            let sigma = (var / nf).sqrt();
            let dev = (avg - Complex64::new(expected, 0.0)).norm();
            mean_sigmas = mean_sigmas.max(dev / sigma);
        }
    }
    // (2) top-eigenvector component magnitudes vs the Haar value 1/d
    let mut eig_sigmas = 0.0f64;
    for k in 0..d {
        let avg = top_component_sum[k] / nf;
        let var = (top_component_sq[k] / nf - avg * avg).max(1e-300);
        let sigma = (var / nf).sqrt();
        eig_sigmas = eig_sigmas.max((avg - 1.0 / d as f64).abs() / sigma);
    }
    // (2b) permuted eigenvalue positions vs 1/p
    let mut eigval_sigmas = 0.0f64;
    for k in 0..p {
        let avg = eig_pos_sum[k] / nf;
        let var = (eig_pos_sq[k] / nf - avg * avg).max(1e-300);
        let sigma = (var / nf).sqrt().max(1e-15);
        eigval_sigmas = eigval_sigmas.max((avg - 1.0 / p as f64).abs() / sigma);
    }
    // (3) independence of spectrum and preferred basis direction
    let mut sorted_vals: Vec<f64> = records.iter().map(|&(_, v)| v).collect();
    sorted_vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let quartile = |frac: f64| sorted_vals[((nf * frac) as usize).min(samples - 1)];
    let (q1, q2, q3) = (quartile(0.25), quartile(0.5), quartile(0.75));
    let mut table = vec![vec![0u64; 4]; d];
    for &(k, v) in &records {
        let bin = if v < q1 {
            0
        } else if v < q2 {
            1
        } else if v < q3 {
            2
        } else {
            3
        };
        table[k][bin] += 1;
    }
    let (chi2_stat, _, chi2_p_value) = chi_square_independence(&table);
    let holds =
        mean_sigmas < 4.0 && eig_sigmas < 4.0 && eigval_sigmas < 4.0 && chi2_p_value > 0.001;
    Ok(InducedSymmetryReport {
        mean_state_max_sigmas: mean_sigmas,
        eigvec_moment_max_sigmas: eig_sigmas,
        eigenvalue_moment_max_sigmas: eigval_sigmas,
        chi2_stat,
        chi2_p_value,
        holds,
    })
}

/// Reduced state of a Haar-random pure state on C^d (x) C^p: X X^dag for a
/// normalized d x p Gaussian amplitude matrix.
fn induced_state(d: usize, p: usize, rng: &mut impl Rng) -> CMatrix {
    let mut x = CMatrix::zeros(d, p);
    let mut norm_sq = 0.0;
    for i in 0..d {
        for j in 0..p {
            let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            norm_sq += z.norm_sqr();
            x[(i, j)] = z;
        }
    }
    let x = x.scale(1.0 / norm_sq.sqrt());
    &x * x.adjoint()
}
