//! Lower-bound apparatus: the packing-net state families, greedy
//! probabilistic net construction with exact post-hoc verification,
//! analytic trace-norm separation bounds, Holevo information, and the Fano
//! copy-count calculator.
//!
//! Distances here are in the trace norm ||.||_1, twice the trace distance;
//! conversions belong at the caller boundary, keeping one convention
//! internally.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::special::{binary_entropy, kl_divergence, mean_and_stderr};
use crate::states::{
    fidelity, haar_unitary, one_norm_distance, von_neumann_entropy, DensityMatrix, UnitaryMatrix,
};

/// The three packing-net state families plus the omega spiked family used
/// for the independent-measurement bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NetFamily {
    /// Rank-r states mixed across two r-blocks, rotated by U(d-r); needs
    /// 3r < d.
    I { d: usize, r: usize, t: f64 },
    /// Full-rank two-level states tau_{t,U} with r = d/2; needs even d.
    II { d: usize, t: f64 },
    /// tau at t = 1: maximally mixed on a rank-r subspace; needs 6r < d.
    III { d: usize, r: usize },
    /// Spiked states with top eigenvalue 1-t and t spread over r levels,
    /// rotated by U(d-1); needs r + 1 < d and t in (0,1).
    Omega { d: usize, r: usize, t: f64 },
}

impl NetFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NetFamily::I { d, r, t } => {
                if r == 0 || 3 * r >= d {
                    return Err(Error::InvalidFamily(format!(
                        "kind I needs 0 < 3r < d, got r = {r}, d = {d}"
                    )));
                }
                if !(0.0..=1.0).contains(&t) {
                    return Err(Error::InvalidFamily(format!("kind I needs t in [0,1], got {t}")));
                }
            }
            NetFamily::II { d, t } => {
                if d == 0 || d % 2 != 0 {
                    return Err(Error::InvalidFamily(format!("kind II needs even d, got {d}")));
                }
                if !(0.0..=1.0).contains(&t) {
                    return Err(Error::InvalidFamily(format!(
                        "kind II needs t in [0,1], got {t}"
                    )));
                }
            }
            NetFamily::III { d, r } => {
                if r == 0 || 6 * r >= d {
                    return Err(Error::InvalidFamily(format!(
                        "kind III needs 0 < 6r < d, got r = {r}, d = {d}"
                    )));
                }
            }
            NetFamily::Omega { d, r, t } => {
                if r == 0 || r + 1 >= d {
                    return Err(Error::InvalidFamily(format!(
                        "omega needs 0 < r + 1 < d, got r = {r}, d = {d}"
                    )));
                }
                if !(0.0 < t && t < 1.0) {
                    return Err(Error::InvalidFamily(format!(
                        "omega needs t in (0,1), got {t}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match *self {
            NetFamily::I { d, .. }
            | NetFamily::II { d, .. }
            | NetFamily::III { d, .. }
            | NetFamily::Omega { d, .. } => d,
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            NetFamily::I { r, .. } => r,
            NetFamily::II { d, .. } => d,
            NetFamily::III { r, .. } => r,
            NetFamily::Omega { r, .. } => r + 1,
        }
    }

    /// Dimension of the unitary parametrizing the family.
    pub fn unitary_dim(&self) -> usize {
        match *self {
            NetFamily::I { d, r, .. } => d - r,
            NetFamily::II { d, .. } => d,
            NetFamily::III { d, .. } => d,
            NetFamily::Omega { d, .. } => d - 1,
        }
    }

    fn tau_params(&self) -> Option<(usize, usize, f64)> {
        match *self {
            NetFamily::II { d, t } => Some((d, d / 2, t)),
            NetFamily::III { d, r } => Some((d, r, 1.0)),
            _ => None,
        }
    }
}

/// The family's state at the given unitary parameter.
pub fn make_state(family: &NetFamily, u: &UnitaryMatrix) -> Result<DensityMatrix> {
    family.validate()?;
    if u.dim() != family.unitary_dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: family.unitary_dim(),
        });
    }
    match *family {
        NetFamily::I { d, r, t } => {
            let alpha = (1.0 - t * t) / r as f64;
            let beta = t * (1.0 - t * t).sqrt() / r as f64;
            let gamma = t * t / r as f64;
            let mut base = CMatrix::zeros(d, d);
            for i in 0..r {
                base[(i, i)] = Complex64::new(alpha, 0.0);
                base[(i, r + i)] = Complex64::new(beta, 0.0);
                base[(r + i, i)] = Complex64::new(beta, 0.0);
                base[(r + i, r + i)] = Complex64::new(gamma, 0.0);
            }
            let embedded = embed_lower_right(u.matrix(), d, r);
            DensityMatrix::new(&embedded * base * embedded.adjoint())
        }
        NetFamily::II { .. } | NetFamily::III { .. } => {
            let (d, r, t) = family.tau_params().expect("tau family");
            let cols = u.matrix().columns(0, r).into_owned();
            let projector = &cols * cols.adjoint();
            let inside = (1.0 + t) / (2.0 * r as f64);
            let outside = (1.0 - t) / (2.0 * (d - r) as f64);
            let mat = CMatrix::identity(d, d).scale(outside)
                + projector.scale(inside - outside);
            DensityMatrix::new(mat)
        }
        NetFamily::Omega { d, r, t } => {
            let mut spectrum = vec![0.0f64; d];
            spectrum[0] = 1.0 - t;
            for s in spectrum.iter_mut().skip(1).take(r) {
                *s = t / r as f64;
            }
            let base = crate::linalg::diag_real(&spectrum);
            let embedded = embed_lower_right(u.matrix(), d, 1);
            DensityMatrix::new(&embedded * base * embedded.adjoint())
        }
    }
}

/// I_k (+) u, acting on the trailing coordinates.
fn embed_lower_right(u: &CMatrix, d: usize, k: usize) -> CMatrix {
    let m = u.nrows();
    assert_eq!(k + m, d);
    let mut out = CMatrix::identity(d, d);
    for i in 0..m {
        for j in 0..m {
            out[(k + i, k + j)] = u[(i, j)];
        }
    }
    out
}

/// Analytic lower bound on ||state(U) - state(I)||_1 in terms of the
/// lower-left block C of U (families I, II, III).
pub fn analytic_distance_lower_bound(family: &NetFamily, u: &UnitaryMatrix) -> Result<f64> {
    family.validate()?;
    if u.dim() != family.unitary_dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: family.unitary_dim(),
        });
    }
    match *family {
        NetFamily::I { d, r, t } => {
            // C is the (d-2r) x r lower-left block of U in U(d-r)
            let c = u.matrix().view((r, 0), (d - 2 * r, r));
            let gram: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            Ok(t * (1.0 - t * t).sqrt() / r as f64 * gram)
        }
        NetFamily::II { .. } | NetFamily::III { .. } => {
            let (d, r, t) = family.tau_params().expect("tau family");
            let c = u.matrix().view((r, 0), (d - r, r));
            let gram: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            Ok(((1.0 + t) / r as f64 - (1.0 - t) / (d - r) as f64) * gram)
        }
        NetFamily::Omega { .. } => Err(Error::InvalidFamily(
            "no analytic distance bound for the omega family".into(),
        )),
    }
}

/// Separation metric for packing nets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMetric {
    /// Trace norm ||a - b||_1.
    OneNorm,
    /// Infidelity 1 - F(a, b); sqrt of it is the Bures metric, so
    /// threshold-separated nets still decode uniquely.
    Infidelity,
}

impl DistanceMetric {
    pub fn evaluate(&self, a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
        match self {
            DistanceMetric::OneNorm => one_norm_distance(a, b),
            DistanceMetric::Infidelity => Ok(1.0 - fidelity(a, b)?),
        }
    }
}

/// A set of family states pairwise separated beyond the threshold in the
/// declared metric.
#[derive(Debug, Clone)]
pub struct PackingNet {
    pub family: NetFamily,
    pub states: Vec<DensityMatrix>,
    pub threshold: f64,
    pub metric: DistanceMetric,
    pub draws_used: usize,
    /// Smallest pairwise distance, re-measured exactly after construction.
    pub verified_min_distance: f64,
}

impl PackingNet {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Recompute the exact minimum pairwise distance.
    pub fn verify(&self) -> Result<f64> {
        let mut min = f64::INFINITY;
        for i in 0..self.states.len() {
            for j in (i + 1)..self.states.len() {
                min = min.min(self.metric.evaluate(&self.states[i], &self.states[j])?);
            }
        }
        Ok(min)
    }
}

/// Greedy first-draw-wins packing, mirroring the probabilistic existence
/// argument: draw Haar unitaries, keep a state iff it clears the threshold
/// against everything kept so far. Stops after `max_draws` proposals or
/// once `max_states` are kept.
pub fn greedy_pack(
    family: &NetFamily,
    threshold: f64,
    metric: DistanceMetric,
    max_draws: usize,
    max_states: usize,
    rng: &mut impl Rng,
) -> Result<PackingNet> {
    family.validate()?;
    let udim = family.unitary_dim();
    let mut states: Vec<DensityMatrix> = Vec::new();
    let mut draws_used = 0;
    for _ in 0..max_draws {
        if states.len() >= max_states {
            break;
        }
        draws_used += 1;
        let candidate = make_state(family, &haar_unitary(udim, rng))?;
        let mut clears = true;
        for kept in &states {
            if metric.evaluate(kept, &candidate)? <= threshold {
                clears = false;
                break;
            }
        }
        if clears {
            states.push(candidate);
        }
    }
    if states.is_empty() {
        return Err(Error::EmptyNet { threshold });
    }
    let mut net = PackingNet {
        family: *family,
        states,
        threshold,
        metric,
        draws_used,
        verified_min_distance: f64::INFINITY,
    };
    net.verified_min_distance = net.verify()?;
    if net.len() > 1 && net.verified_min_distance <= threshold {
        return Err(Error::InvalidParameter(format!(
            "post-hoc verification found pair at distance {} <= threshold {threshold}",
            net.verified_min_distance
        )));
    }
    Ok(net)
}

/// A finite ensemble of states with probabilities.
#[derive(Debug, Clone)]
pub struct Ensemble {
    items: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    pub fn new(items: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidParameter("empty ensemble".into()));
        }
        let dim = items[0].1.dim();
        if items.iter().any(|(_, s)| s.dim() != dim) {
            return Err(Error::InvalidParameter("mixed dimensions in ensemble".into()));
        }
        if items.iter().any(|(p, _)| *p < 0.0) {
            return Err(Error::InvalidParameter("negative probability".into()));
        }
        let total: f64 = items.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Normalization {
                sum: total,
                tol: 1e-12,
            });
        }
        Ok(Self { items })
    }

    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let p = 1.0 / states.len() as f64;
        Self::new(states.into_iter().map(|s| (p, s)).collect())
    }

    pub fn items(&self) -> &[(f64, DensityMatrix)] {
        &self.items
    }

    pub fn average_state(&self) -> DensityMatrix {
        let d = self.items[0].1.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (p, state) in &self.items {
            acc += state.matrix().scale(*p);
        }
        DensityMatrix::new(acc).expect("convex combination of states")
    }
}

/// Holevo information chi = S(avg) - sum_x p_x S(rho_x), in nats.
pub fn holevo_chi(ensemble: &Ensemble) -> f64 {
    let avg_entropy = von_neumann_entropy(&ensemble.average_state());
    let mean_entropy: f64 = ensemble
        .items()
        .iter()
        .map(|(p, s)| p * von_neumann_entropy(s))
        .sum();
    (avg_entropy - mean_entropy).max(0.0)
}

/// Per-copy Holevo upper bound of the Haar-averaged family ensemble.
pub fn chi0_analytic(family: &NetFamily) -> Result<f64> {
    family.validate()?;
    match *family {
        NetFamily::I { d, r, t } => {
            let t2 = t * t;
            Ok(binary_entropy(t2) + t2 * (((d - r) as f64) / r as f64).ln())
        }
        NetFamily::II { .. } | NetFamily::III { .. } => {
            let (d, r, t) = family.tau_params().expect("tau family");
            let (df, rf) = (d as f64, r as f64);
            Ok(0.5 * (df * df / (rf * (df - rf))).ln()
                + 0.5 * t * ((df - rf) / rf).ln()
                - binary_entropy((1.0 + t) / 2.0))
        }
        NetFamily::Omega { .. } => Err(Error::InvalidFamily(
            "per-copy chi_0 is not defined for the omega family; use omega_chi_bound".into(),
        )),
    }
}

/// Exact entropy of tau_{t,U}:
/// H2((1+t)/2) + (1+t)/2 ln r + (1-t)/2 ln(d-r).
pub fn tau_entropy_formula(d: usize, r: usize, t: f64) -> f64 {
    binary_entropy((1.0 + t) / 2.0)
        + (1.0 + t) / 2.0 * (r as f64).ln()
        + (1.0 - t) / 2.0 * ((d - r) as f64).ln()
}

/// Entropy of the Haar average of the kind-I family:
/// H2(t^2) + (1-t^2) ln r + t^2 ln(d-r).
pub fn kind_i_average_entropy_formula(d: usize, r: usize, t: f64) -> f64 {
    let t2 = t * t;
    binary_entropy(t2) + (1.0 - t2) * (r as f64).ln() + t2 * ((d - r) as f64).ln()
}

/// The Fano/Holevo copy-count lower bound ((1-eta) ln N - ln 2) / chi_0.
#[derive(Debug, Clone, Copy)]
pub struct FanoBound {
    pub copies: f64,
    /// True when the bound is non-positive and thus carries no information.
    pub vacuous: bool,
}

pub fn sample_lower_bound(net_size: u64, eta: f64, chi0: f64) -> Result<FanoBound> {
    if net_size < 2 {
        return Err(Error::InvalidParameter("net size must be >= 2".into()));
    }
    sample_lower_bound_ln((net_size as f64).ln(), eta, chi0)
}

/// Fano bound with the net cardinality given as ln N, for nets of
/// exponential size that are never materialized.
pub fn sample_lower_bound_ln(ln_net_size: f64, eta: f64, chi0: f64) -> Result<FanoBound> {
    if chi0 <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "chi_0 must be positive, got {chi0}"
        )));
    }
    if ln_net_size < std::f64::consts::LN_2 {
        return Err(Error::InvalidParameter("net size must be >= 2".into()));
    }
    if !(0.0 < eta && eta < 1.0) {
        return Err(Error::InvalidParameter(format!("eta = {eta} outside (0,1)")));
    }
    let copies = ((1.0 - eta) * ln_net_size - std::f64::consts::LN_2) / chi0;
    Ok(FanoBound {
        copies,
        vacuous: copies <= 0.0,
    })
}

/// Total Holevo bound 4 (n t^2 / r) ln(2/t) for the omega ensemble under
/// independent measurements; proven for t < 1/3 and d >= 3.
#[derive(Debug, Clone, Copy)]
pub struct OmegaChiBound {
    pub value: f64,
    pub in_validity_range: bool,
}

pub fn omega_chi_bound(t: f64, r: usize, n: usize) -> OmegaChiBound {
    OmegaChiBound {
        value: 4.0 * (n as f64 * t * t / r as f64) * (2.0 / t).ln(),
        in_validity_range: t > 0.0 && t < 1.0 / 3.0,
    }
}

/// Monte Carlo check of the per-copy Holevo bound t^2/(d+1) for a random
/// rank-1 POVM measuring the Haar kind-II ensemble.
#[derive(Debug, Clone, Copy)]
pub struct IndepChiReport {
    pub estimate: f64,
    pub stderr: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn indep_chi_per_copy_mc(
    d: usize,
    t: f64,
    povm_size: usize,
    ensemble_size: usize,
    rng: &mut impl Rng,
) -> Result<IndepChiReport> {
    if !d.is_multiple_of(2) {
        return Err(Error::InvalidParameter("kind II needs even d".into()));
    }
    if povm_size < 2 || ensemble_size < 2 {
        return Err(Error::InvalidParameter("POVM and ensemble need >= 2 items".into()));
    }
    let family = NetFamily::II { d, t };
    // povm_size - 1 weighted rank-1 elements scaled under the identity with
    // margin, completed by the remainder
    let vectors: Vec<Vec<Complex64>> = (0..povm_size - 1)
        .map(|_| random_unit_vector(d, rng))
        .collect();
    let mut sum = CMatrix::zeros(d, d);
    for a in &vectors {
        for i in 0..d {
            for j in 0..d {
                sum[(i, j)] += a[i] * a[j].conj();
            }
        }
    }
    let top = hermitian_eigenvalues(&sum)[0];
    let scale = 1.0 / (1.05 * top);
    let remainder = CMatrix::identity(d, d) - sum.scale(scale);
    if hermitian_eigenvalues(&remainder).last().copied().unwrap_or(0.0) < -1e-12 {
        return Err(Error::InvalidParameter(
            "POVM completion is not positive semidefinite".into(),
        ));
    }
    // the Haar-averaged state is exactly I/d, so the mixture outcome law is
    // known in closed form and per-state KL divergences are iid samples of
    // the ensemble Holevo information
    let mut reference: Vec<f64> = vectors.iter().map(|_| scale / d as f64).collect();
    reference.push(1.0 - scale * (povm_size - 1) as f64 / d as f64);
    let kls: Vec<f64> = (0..ensemble_size)
        .map(|_| -> Result<f64> {
            let state = make_state(&family, &haar_unitary(d, rng))?;
            let mut probs: Vec<f64> = vectors
                .iter()
                .map(|a| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..d {
                        for j in 0..d {
                            acc += a[i].conj() * state.matrix()[(i, j)] * a[j];
                        }
                    }
                    (scale * acc.re).max(0.0)
                })
                .collect();
            let used: f64 = probs.iter().sum();
            probs.push((1.0 - used).max(0.0));
            Ok(kl_divergence(&probs, &reference))
        })
        .collect::<Result<Vec<f64>>>()?;
    let (estimate, stderr) = mean_and_stderr(&kls);
    let bound = t * t / (d as f64 + 1.0);
    Ok(IndepChiReport {
        estimate,
        stderr,
        bound,
        holds: estimate <= bound + 3.0 * stderr,
    })
}

fn random_unit_vector(d: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    use rand_distr::StandardNormal;
    let mut v: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn family_validation() {
        assert!(NetFamily::I { d: 6, r: 1, t: 0.4 }.validate().is_ok());
        assert!(NetFamily::I { d: 6, r: 2, t: 0.4 }.validate().is_err());
        assert!(NetFamily::II { d: 8, t: 0.5 }.validate().is_ok());
        assert!(NetFamily::II { d: 7, t: 0.5 }.validate().is_err());
        assert!(NetFamily::III { d: 7, r: 1 }.validate().is_ok());
        assert!(NetFamily::III { d: 6, r: 1 }.validate().is_err());
        assert!(NetFamily::Omega { d: 4, r: 2, t: 0.3 }.validate().is_ok());
        assert!(NetFamily::Omega { d: 3, r: 2, t: 0.3 }.validate().is_err());
    }

    #[test]
    fn tau_state_at_identity() {
        let family = NetFamily::II { d: 4, t: 0.5 };
        let state = make_state(&family, &UnitaryMatrix::identity(4)).unwrap();
        let expected = [0.375, 0.375, 0.125, 0.125];
        for (i, &e) in expected.iter().enumerate() {
            assert!((state.matrix()[(i, i)].re - e).abs() < 1e-14);
        }
    }

    #[test]
    fn omega_state_at_identity() {
        let family = NetFamily::Omega { d: 4, r: 2, t: 0.3 };
        let state = make_state(&family, &UnitaryMatrix::identity(3)).unwrap();
        let expected = [0.7, 0.15, 0.15, 0.0];
        for (i, &e) in expected.iter().enumerate() {
            assert!((state.matrix()[(i, i)].re - e).abs() < 1e-14);
        }
        assert_eq!(state.rank(), 3);
    }

    #[test]
    fn kind_one_spectrum_is_uniform_rank_r() {
        let mut rng = StdRng::seed_from_u64(1);
        let family = NetFamily::I { d: 7, r: 2, t: 0.6 };
        let state = make_state(&family, &haar_unitary(5, &mut rng)).unwrap();
        assert_eq!(state.rank(), 2);
        for &v in state.spectrum().iter().take(2) {
            assert!((v - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn kind_three_is_maximally_mixed_on_subspace() {
        let mut rng = StdRng::seed_from_u64(2);
        let family = NetFamily::III { d: 7, r: 1 };
        let state = make_state(&family, &haar_unitary(7, &mut rng)).unwrap();
        assert_eq!(state.rank(), 1);
        assert!(von_neumann_entropy(&state).abs() < 1e-10);
        let family = NetFamily::Omega { d: 8, r: 3, t: 0.99 };
        // not a kind-III family, but near t = 1 entropy approaches ln r
        let state = make_state(&family, &haar_unitary(7, &mut rng)).unwrap();
        assert!(von_neumann_entropy(&state) < (3.0f64).ln() + 0.1);
    }

    #[test]
    fn analytic_bound_vanishes_for_block_diagonal() {
        let family = NetFamily::I { d: 6, r: 1, t: 0.4 };
        let u = UnitaryMatrix::identity(5);
        assert_eq!(analytic_distance_lower_bound(&family, &u).unwrap(), 0.0);
        let family = NetFamily::II { d: 4, t: 0.5 };
        let u = UnitaryMatrix::identity(4);
        assert_eq!(analytic_distance_lower_bound(&family, &u).unwrap(), 0.0);
    }

    #[test]
    fn analytic_bound_below_exact_distance() {
        let mut rng = StdRng::seed_from_u64(3);
        for family in [
            NetFamily::I { d: 6, r: 1, t: 0.4 },
            NetFamily::II { d: 6, t: 0.5 },
            NetFamily::III { d: 7, r: 1 },
        ] {
            let base = make_state(&family, &UnitaryMatrix::identity(family.unitary_dim())).unwrap();
            for _ in 0..50 {
                let u = haar_unitary(family.unitary_dim(), &mut rng);
                let state = make_state(&family, &u).unwrap();
                let exact = one_norm_distance(&base, &state).unwrap();
                let bound = analytic_distance_lower_bound(&family, &u).unwrap();
                assert!(
                    bound <= exact + 1e-9,
                    "{family:?}: bound {bound} vs exact {exact}"
                );
            }
        }
    }

    #[test]
    fn greedy_pack_trivial_and_modest_nets() {
        let mut rng = StdRng::seed_from_u64(4);
        let family = NetFamily::II { d: 4, t: 0.5 };
        // threshold beyond the family diameter: only the first state fits
        let net = greedy_pack(&family, 10.0, DistanceMetric::OneNorm, 50, 10, &mut rng).unwrap();
        assert_eq!(net.len(), 1);
        // modest threshold: several states within few draws
        let net = greedy_pack(&family, 0.25, DistanceMetric::OneNorm, 500, 8, &mut rng).unwrap();
        assert!(net.len() >= 5, "only {} states", net.len());
        assert!(net.verified_min_distance > 0.25);
        let reverified = net.verify().unwrap();
        assert_eq!(reverified, net.verified_min_distance);
    }

    #[test]
    fn greedy_pack_infidelity_metric() {
        let mut rng = StdRng::seed_from_u64(5);
        let family = NetFamily::Omega { d: 4, r: 1, t: 0.3 };
        let net = greedy_pack(&family, 0.05, DistanceMetric::Infidelity, 400, 6, &mut rng).unwrap();
        assert!(net.len() >= 3);
        for i in 0..net.len() {
            for j in (i + 1)..net.len() {
                let inf = 1.0 - fidelity(&net.states[i], &net.states[j]).unwrap();
                assert!(inf > 0.05);
            }
        }
    }

    #[test]
    fn holevo_information_cases() {
        // identical states: chi = 0
        let rho = DensityMatrix::maximally_mixed(3);
        let ens = Ensemble::uniform(vec![rho.clone(), rho.clone(), rho]).unwrap();
        assert!(holevo_chi(&ens) < 1e-12);
        // N orthogonal pure states, uniform: chi = ln N
        for n in [2usize, 4] {
            let states: Vec<DensityMatrix> = (0..n)
                .map(|i| {
                    let mut diag = vec![0.0; n];
                    diag[i] = 1.0;
                    DensityMatrix::from_diag(&diag).unwrap()
                })
                .collect();
            let ens = Ensemble::uniform(states).unwrap();
            assert!((holevo_chi(&ens) - (n as f64).ln()).abs() < 1e-9);
        }
        // two pure qubits at Bloch angle 2*pi/3: overlap 1/4, chi = H2(3/4)
        let theta: f64 = std::f64::consts::PI / 3.0;
        let psi = DensityMatrix::pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        let phi = DensityMatrix::pure(&[
            Complex64::new(theta.cos(), 0.0),
            Complex64::new(theta.sin(), 0.0),
        ])
        .unwrap();
        let ens = Ensemble::new(vec![(0.5, psi), (0.5, phi)]).unwrap();
        let expected = binary_entropy((1.0 + theta.cos()) / 2.0);
        assert!((holevo_chi(&ens) - expected).abs() < 1e-10);
        assert!((expected - 0.5623).abs() < 1e-4);
    }

    #[test]
    fn chi0_closed_forms() {
        // kind II simplifies to ln 2 - H2((1+t)/2) <= t^2
        let family = NetFamily::II { d: 8, t: 0.3 };
        let chi0 = chi0_analytic(&family).unwrap();
        let expected = std::f64::consts::LN_2 - binary_entropy(0.65);
        assert!((chi0 - expected).abs() < 1e-12);
        assert!((chi0 - 0.0458).abs() < 1e-3);
        assert!(chi0 <= 0.09);
        // kind III: ln(d/r)
        let family = NetFamily::III { d: 9, r: 1 };
        assert!((chi0_analytic(&family).unwrap() - 9.0f64.ln()).abs() < 1e-12);
        // kind I at t = 0: zero
        let family = NetFamily::I { d: 7, r: 2, t: 0.0 };
        assert!(chi0_analytic(&family).unwrap().abs() < 1e-12);
    }

    #[test]
    fn tau_entropy_matches_eigencomputation() {
        let mut rng = StdRng::seed_from_u64(6);
        for (d, t) in [(4usize, 0.5f64), (8, 0.3), (6, 0.9)] {
            let family = NetFamily::II { d, t };
            let state = make_state(&family, &haar_unitary(d, &mut rng)).unwrap();
            let direct = von_neumann_entropy(&state);
            let formula = tau_entropy_formula(d, d / 2, t);
            assert!((direct - formula).abs() < 1e-10, "d={d} t={t}");
        }
    }

    #[test]
    fn kind_i_average_entropy_against_mc() {
        let mut rng = StdRng::seed_from_u64(7);
        let (d, r, t) = (6usize, 1usize, 0.5f64);
        let family = NetFamily::I { d, r, t };
        let m = 4000;
        let mut acc = CMatrix::zeros(d, d);
        for _ in 0..m {
            acc += make_state(&family, &haar_unitary(d - r, &mut rng))
                .unwrap()
                .matrix();
        }
        let avg = DensityMatrix::new(acc.scale(1.0 / m as f64)).unwrap();
        let formula = kind_i_average_entropy_formula(d, r, t);
        // entropy of the empirical mean approaches the Schur-lemma value
        assert!(
            (von_neumann_entropy(&avg) - formula).abs() < 0.05,
            "{} vs {formula}",
            von_neumann_entropy(&avg)
        );
    }

    #[test]
    fn fano_bound_cases() {
        // ln N = d^2/32 = 2, chi0 = t^2, eta = 1/2, d = 8, t = 0.1:
        // (1 - ln 2)/0.01 ~ 30.7
        let bound = sample_lower_bound_ln(2.0, 0.5, 0.01).unwrap();
        assert!(!bound.vacuous);
        assert!((bound.copies - (1.0 - std::f64::consts::LN_2) / 0.01).abs() < 1e-9);
        assert!((bound.copies - 30.7).abs() < 0.05);
        // single-bit edge case is vacuous
        let bound = sample_lower_bound(2, 0.01, std::f64::consts::LN_2).unwrap();
        assert!(bound.vacuous);
        assert!(sample_lower_bound(10, 0.5, 0.0).is_err());
    }

    #[test]
    fn omega_bound_arithmetic() {
        let b = omega_chi_bound(0.1, 2, 100);
        assert!((b.value - 4.0 * 0.5 * 20.0f64.ln()).abs() < 1e-12);
        assert!((b.value - 5.99).abs() < 0.01);
        assert!(b.in_validity_range);
        let b = omega_chi_bound(0.3, 1, 10);
        assert!((b.value - 3.6 * (2.0f64 / 0.3).ln()).abs() < 1e-12);
        assert!((b.value - 6.83).abs() < 0.01);
        let b = omega_chi_bound(0.4, 1, 10);
        assert!(!b.in_validity_range);
    }

    #[test]
    fn indep_chi_zero_at_t_zero() {
        let mut rng = StdRng::seed_from_u64(8);
        let report = indep_chi_per_copy_mc(4, 0.0, 8, 50, &mut rng).unwrap();
        assert!(report.estimate.abs() < 1e-12);
        assert!(report.holds);
    }

    #[test]
    fn indep_chi_respects_bound() {
        let mut rng = StdRng::seed_from_u64(9);
        let report = indep_chi_per_copy_mc(4, 0.2, 16, 400, &mut rng).unwrap();
        assert!(
            report.holds,
            "estimate {} +- {} vs bound {}",
            report.estimate, report.stderr, report.bound
        );
        assert!(report.estimate >= 0.0);
    }
}
