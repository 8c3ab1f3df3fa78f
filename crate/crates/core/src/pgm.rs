//! The pretty-good-measurement variant over the unitarily invariant
//! ensemble with uniform-simplex spectra: Dirichlet moments of Schur
//! polynomials, the resulting density bound, and the Beta integral identity
//! the moments rest on.

use rand::Rng;

use crate::error::{Error, Result};
use crate::partitions::{
    dim_gl_irrep, dim_sn_irrep, enumerate_partitions, enumerate_weights, kostka, Partition,
    KOSTKA_CAP, LOG_SLACK,
};
use crate::schur::{schur_eval, schur_eval_product, EvalPoint, LogScalar};
use crate::special::{integrate_de_01, ln_factorial, ln_gamma, log_sum_exp, mean_and_stderr};
use crate::states::DensityMatrix;

/// ln of the simplex monomial integral f_d(e) = e_1! ... e_d! / (n+d-1)!
/// over the unnormalized d-simplex.
pub fn ln_simplex_monomial_integral(exponents: &[usize]) -> f64 {
    let d = exponents.len();
    let n: usize = exponents.iter().sum();
    exponents.iter().map(|&e| ln_factorial(e)).sum::<f64>() - ln_factorial(n + d - 1)
}

/// The analytic lower bound on E s_lambda over the uniform-spectrum
/// ensemble: the largest Schur monomial integrated against the Dirichlet
/// normalization, lambda_1! ... lambda_d! (d-1)! / (n+d-1)!.
pub fn expected_schur_lower_bound(lambda: &Partition, d: usize) -> Result<LogScalar> {
    let exponents = lambda.padded(d)?;
    let ln = ln_simplex_monomial_integral(&exponents) + ln_factorial(d - 1);
    Ok(LogScalar::from_ln(ln))
}

/// Exact E s_lambda over the uniform simplex, by integrating the Kostka
/// monomial expansion term by term. Available at tableau-enumeration scale
/// (n <= 12).
pub fn expected_schur_exact(lambda: &Partition, d: usize) -> Result<LogScalar> {
    let n = lambda.n();
    if n > KOSTKA_CAP {
        return Err(Error::SizeCap {
            what: "exact expected schur n",
            got: n,
            cap: KOSTKA_CAP,
        });
    }
    if lambda.rows() > d {
        return Ok(LogScalar::zero());
    }
    let ln_norm = ln_factorial(d - 1);
    let mut terms = Vec::new();
    for nu in enumerate_weights(n, d) {
        let k = kostka(lambda, &nu)?;
        if k == 0 {
            continue;
        }
        terms.push((k as f64).ln() + ln_simplex_monomial_integral(nu.counts()) + ln_norm);
    }
    Ok(LogScalar::from_ln(log_sum_exp(&terms)))
}

#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Uniform sample from the probability simplex (Dirichlet with unit
/// parameters), via normalized exponentials.
pub fn dirichlet_uniform_sample(d: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut out: Vec<f64> = (0..d)
        .map(|_| -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln())
        .collect();
    let total: f64 = out.iter().sum();
    for v in &mut out {
        *v /= total;
    }
    out
}

/// Monte Carlo estimate of E s_lambda over the uniform-spectrum ensemble.
pub fn expected_schur_mc(
    lambda: &Partition,
    d: usize,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<McEstimate> {
    assert!(samples >= 2);
    let values: Vec<f64> = (0..samples)
        .map(|_| {
            let point = EvalPoint::new(dirichlet_uniform_sample(d, rng)).expect("simplex point");
            schur_eval(lambda, &point).to_f64()
        })
        .collect();
    let (mean, stderr) = mean_and_stderr(&values);
    Ok(McEstimate {
        mean,
        stderr,
        samples,
    })
}

/// Report for e^{nH(lambda-bar)} E s_lambda >= (n+d)^{-d}, using the
/// analytic lower bound for the expectation.
#[derive(Debug, Clone)]
pub struct PgmBoundReport {
    pub lhs_ln: f64,
    pub rhs_ln: f64,
    pub margin: f64,
    pub holds: bool,
}

pub fn check_pgm_bound(lambda: &Partition, d: usize) -> Result<PgmBoundReport> {
    let n = lambda.n() as f64;
    let lhs_ln =
        n * lambda.entropy() + expected_schur_lower_bound(lambda, d)?.ln_abs();
    let rhs_ln = -(d as f64) * (n + d as f64).ln();
    let margin = lhs_ln - rhs_ln;
    Ok(PgmBoundReport {
        lhs_ln,
        rhs_ln,
        margin,
        holds: margin >= -LOG_SLACK,
    })
}

/// Which denominator stands in for E s_lambda in the PGM density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenominatorMode {
    /// The analytic lower bound; the summed density is then an upper bound.
    LowerBound,
    /// The exact Kostka-integral value (n <= 12).
    Exact,
}

/// PGM outcome density at sigma given rho^(x)n, per unit ensemble measure:
/// sum over admissible diagrams of dim Q dim P s_lambda(sigma rho) / E
/// s_lambda. With `LowerBound` denominators the result upper-bounds the
/// true density.
pub fn pgm_density(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    n: usize,
    mode: DenominatorMode,
) -> Result<LogScalar> {
    let d = rho.dim();
    if d != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: d,
            right: sigma.dim(),
        });
    }
    let mut terms = Vec::new();
    for lambda in enumerate_partitions(n, d) {
        let cross = schur_eval_product(&lambda, rho, sigma)?;
        if cross.is_zero() {
            continue;
        }
        let denom = match mode {
            DenominatorMode::LowerBound => expected_schur_lower_bound(&lambda, d)?,
            DenominatorMode::Exact => expected_schur_exact(&lambda, d)?,
        };
        terms.push(
            dim_gl_irrep(&lambda, d).ln + dim_sn_irrep(&lambda).ln + cross.ln_abs()
                - denom.ln_abs(),
        );
    }
    if terms.is_empty() {
        return Ok(LogScalar::zero());
    }
    Ok(LogScalar::from_ln(log_sum_exp(&terms)))
}

/// Quadrature vs closed form for the Beta integral
/// int_0^1 u^{a-1} (1-u)^{b-1} du = Gamma(a) Gamma(b) / Gamma(a+b).
#[derive(Debug, Clone, Copy)]
pub struct BetaIntegralReport {
    pub quadrature: f64,
    pub closed_form: f64,
    pub rel_error: f64,
    pub holds: bool,
}

/// Relative tolerance for the Beta integral identity.
pub const BETA_INTEGRAL_TOL: f64 = 1e-8;

pub fn beta_integral_check(a: f64, b: f64) -> Result<BetaIntegralReport> {
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "beta integral needs a, b > 0, got ({a}, {b})"
        )));
    }
    // Double-exponential quadrature absorbs the endpoint singularities
    // that appear for a, b < 1.
    let quadrature =
        integrate_de_01(|u, one_minus_u| u.powf(a - 1.0) * one_minus_u.powf(b - 1.0));
    let closed_form = (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp();
    let rel_error = (quadrature - closed_form).abs() / closed_form;
    Ok(BetaIntegralReport {
        quadrature,
        closed_form,
        rel_error,
        holds: rel_error < BETA_INTEGRAL_TOL,
    })
}
