//! Density matrices, the fidelity / trace-distance metrics, and seeded
//! sampling of Haar unitaries and random fixed-rank states.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, hermitian_violation, matrix_sqrt_psd, trace, unitarity_violation,
    CMatrix,
};

/// Tolerance for the Hermiticity check on density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Allowed negative dip of eigenvalues under floating-point noise.
pub const EIGENVALUE_TOL: f64 = 1e-10;
/// Tolerance for |tr(rho) - 1|.
pub const TRACE_TOL: f64 = 1e-10;
/// Tolerance for |U U^dag - I| on unitaries.
pub const UNITARY_TOL: f64 = 1e-10;
/// Eigenvalues above `RANK_REL_TOL * lambda_max` count toward the rank.
pub const RANK_REL_TOL: f64 = 1e-9;

/// Magnitudes of every invariant violation, reported even on success so
/// tolerance failures stay debuggable.
#[derive(Debug, Clone, Copy)]
pub struct ValidationReport {
    pub hermitian_violation: f64,
    pub min_eigenvalue: f64,
    pub trace_deviation: f64,
}

/// A d x d Hermitian, positive semidefinite, unit-trace matrix. The
/// spectrum is computed once at construction and cached, sorted descending.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: CMatrix,
    spectrum: Vec<f64>,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        Self::validate(&mat)?;
        let spectrum = hermitian_eigenvalues(&mat);
        Ok(Self { mat, spectrum })
    }

    /// Check the density-matrix invariants, returning the violation
    /// magnitudes when all pass.
    pub fn validate(mat: &CMatrix) -> Result<ValidationReport> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        // NaN compares false against every tolerance, so reject it up front
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "density matrix has non-finite entries".into(),
            ));
        }
        let herm = hermitian_violation(mat);
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                max_violation: herm,
            });
        }
        let trace_deviation = (trace(mat) - Complex64::new(1.0, 0.0)).norm();
        if trace_deviation > TRACE_TOL {
            return Err(Error::BadTrace {
                deviation: trace_deviation,
            });
        }
        let eigs = hermitian_eigenvalues(mat);
        let min_eigenvalue = eigs.last().copied().unwrap_or(0.0);
        if min_eigenvalue < -EIGENVALUE_TOL {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(ValidationReport {
            hermitian_violation: herm,
            min_eigenvalue,
            trace_deviation,
        })
    }

    pub fn from_diag(values: &[f64]) -> Result<Self> {
        Self::new(crate::linalg::diag_real(values))
    }

    /// Pure state |psi><psi| from an (unnormalized) state vector.
    pub fn pure(ket: &[Complex64]) -> Result<Self> {
        let norm_sq: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let d = ket.len();
        let mat = CMatrix::from_fn(d, d, |i, j| ket[i] * ket[j].conj() / norm_sq);
        Self::new(mat)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::from_diag(&vec![1.0 / d as f64; d]).expect("valid by construction")
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Eigenvalues sorted descending (may contain tolerated negative noise).
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Eigenvalues clipped at zero, for evaluation points and entropies.
    pub fn spectrum_clipped(&self) -> Vec<f64> {
        self.spectrum.iter().map(|&v| v.max(0.0)).collect()
    }

    /// Count of eigenvalues above RANK_REL_TOL times the largest.
    pub fn rank(&self) -> usize {
        let top = self.spectrum.first().copied().unwrap_or(0.0);
        if top <= 0.0 {
            return 0;
        }
        self.spectrum
            .iter()
            .filter(|&&v| v > RANK_REL_TOL * top)
            .count()
    }

    /// U rho U^dag.
    pub fn conjugated(&self, u: &UnitaryMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: u.dim(),
                right: self.dim(),
            });
        }
        Self::new(u.matrix() * &self.mat * u.matrix().adjoint())
    }
}

/// A matrix with U U^dag = I within tolerance.
#[derive(Debug, Clone)]
pub struct UnitaryMatrix {
    mat: CMatrix,
}

impl UnitaryMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "unitary matrix has non-finite entries".into(),
            ));
        }
        let violation = unitarity_violation(&mat);
        if violation > UNITARY_TOL {
            return Err(Error::NotUnitary {
                max_violation: violation,
            });
        }
        Ok(Self { mat })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            mat: CMatrix::identity(d, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

/// Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0, 1].
/// Computed as the nuclear norm of sqrt(rho) sqrt(sigma): singular values
/// are perfectly conditioned, unlike eigenvalues pushed through an outer
/// square root, so rank-deficient inputs stay accurate to ~1e-13.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let a = matrix_sqrt_psd(rho.matrix());
    let b = matrix_sqrt_psd(sigma.matrix());
    let f: f64 = crate::linalg::singular_values(&(a * b)).iter().sum();
    Ok(f.clamp(0.0, 1.0))
}

/// Trace distance T = ||rho - sigma||_1 / 2.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(0.5 * one_norm_distance(rho, sigma)?)
}

/// Trace-norm distance ||rho - sigma||_1 (twice the trace distance).
pub fn one_norm_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let diff = rho.matrix() - sigma.matrix();
    Ok(hermitian_eigenvalues(&diff).iter().map(|v| v.abs()).sum())
}

/// Both sides of 1 - F <= T <= sqrt(1 - F^2).
#[derive(Debug, Clone, Copy)]
pub struct FuchsVanDeGraafReport {
    pub one_minus_f: f64,
    pub trace_dist: f64,
    pub upper: f64,
    pub holds: bool,
}

/// Slack for the Fuchs-van de Graaf sandwich.
pub const FVG_SLACK: f64 = 1e-9;

pub fn check_fuchs_van_de_graaf(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<FuchsVanDeGraafReport> {
    let f = fidelity(rho, sigma)?;
    let t = trace_distance(rho, sigma)?;
    let one_minus_f = 1.0 - f;
    let upper = (1.0 - f * f).max(0.0).sqrt();
    let holds = one_minus_f <= t + FVG_SLACK && t <= upper + FVG_SLACK;
    Ok(FuchsVanDeGraafReport {
        one_minus_f,
        trace_dist: t,
        upper,
        holds,
    })
}

/// Von Neumann entropy in nats, with 0 ln 0 = 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    crate::special::shannon_entropy(&rho.spectrum_clipped())
}

fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the triangular
/// factor's diagonal phases absorbed into Q. Without the phase correction
/// the factorization is not Haar-distributed.
pub fn haar_unitary(d: usize, rng: &mut impl Rng) -> UnitaryMatrix {
    assert!(d >= 1, "haar_unitary requires d >= 1");
    let ginibre = CMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            rjj / rjj.norm()
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::new(q).expect("QR output is unitary")
}

/// Random density matrix of exact rank r: a uniform-simplex spectrum on r
/// levels, rotated by a Haar unitary. The distribution is unitarily
/// invariant.
pub fn random_state(d: usize, r: usize, rng: &mut impl Rng) -> Result<DensityMatrix> {
    if r == 0 || r > d {
        return Err(Error::InvalidParameter(format!(
            "rank {r} out of range for dimension {d}"
        )));
    }
    let mut spectrum: Vec<f64> = (0..r)
        .map(|_| -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln())
        .collect();
    let total: f64 = spectrum.iter().sum();
    for v in &mut spectrum {
        *v /= total;
    }
    spectrum.resize(d, 0.0);
    let u = haar_unitary(d, rng);
    DensityMatrix::from_diag(&spectrum)?.conjugated(&u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn fidelity_of_state_with_itself() {
        let mut rng = StdRng::seed_from_u64(1);
        for d in 2..=5 {
            let rho = random_state(d, d, &mut rng).unwrap();
            let f = fidelity(&rho, &rho).unwrap();
            assert!((f - 1.0).abs() < 1e-10, "d = {d}: {f}");
        }
    }

    #[test]
    fn fidelity_pure_vs_shifted_diagonal() {
        let rho = DensityMatrix::from_diag(&[1.0, 0.0]).unwrap();
        let sigma = DensityMatrix::from_diag(&[0.81, 0.19]).unwrap();
        let f = fidelity(&rho, &sigma).unwrap();
        assert!((f - 0.9).abs() < 1e-12);
        // infidelity 1 - sqrt(1 - eps) with eps = 0.19
        assert!((1.0 - f - (1.0 - 0.81f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn fidelity_commuting_is_bhattacharyya() {
        let rho = DensityMatrix::from_diag(&[0.5, 0.5]).unwrap();
        let sigma = DensityMatrix::from_diag(&[0.9, 0.1]).unwrap();
        let f = fidelity(&rho, &sigma).unwrap();
        let expected = (0.5f64 * 0.9).sqrt() + (0.5f64 * 0.1).sqrt();
        assert!((f - expected).abs() < 1e-12);
        assert!((f - 0.8944).abs() < 1e-4);
    }

    #[test]
    fn fidelity_is_symmetric_and_unitarily_invariant() {
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..20 {
            let rho = random_state(4, 2, &mut rng).unwrap();
            let sigma = random_state(4, 4, &mut rng).unwrap();
            let f1 = fidelity(&rho, &sigma).unwrap();
            let f2 = fidelity(&sigma, &rho).unwrap();
            assert!((f1 - f2).abs() < 1e-9);
            let u = haar_unitary(4, &mut rng);
            let f3 = fidelity(
                &rho.conjugated(&u).unwrap(),
                &sigma.conjugated(&u).unwrap(),
            )
            .unwrap();
            assert!((f1 - f3).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_distance_examples() {
        let rho = DensityMatrix::from_diag(&[1.0, 0.0]).unwrap();
        for eps in [0.05, 0.19, 0.4] {
            let sigma = DensityMatrix::from_diag(&[1.0 - eps, eps]).unwrap();
            let t = trace_distance(&rho, &sigma).unwrap();
            assert!((t - eps).abs() < 1e-12);
        }
        assert_eq!(trace_distance(&rho, &rho).unwrap(), 0.0);
    }

    #[test]
    fn trace_distance_unitary_invariance() {
        let mut rng = StdRng::seed_from_u64(3);
        let rho = random_state(3, 2, &mut rng).unwrap();
        let sigma = random_state(3, 3, &mut rng).unwrap();
        let t = trace_distance(&rho, &sigma).unwrap();
        let u = haar_unitary(3, &mut rng);
        let t2 = trace_distance(
            &rho.conjugated(&u).unwrap(),
            &sigma.conjugated(&u).unwrap(),
        )
        .unwrap();
        assert!((t - t2).abs() < 1e-10);
    }

    #[test]
    fn fuchs_van_de_graaf_cases() {
        let rho = DensityMatrix::from_diag(&[1.0, 0.0]).unwrap();
        let report = check_fuchs_van_de_graaf(&rho, &rho).unwrap();
        assert!(report.holds);
        assert!(report.one_minus_f.abs() < 1e-12 && report.trace_dist.abs() < 1e-12);

        let sigma = DensityMatrix::from_diag(&[0.81, 0.19]).unwrap();
        let report = check_fuchs_van_de_graaf(&rho, &sigma).unwrap();
        assert!(report.holds);
        assert!((report.one_minus_f - 0.1).abs() < 1e-12);
        assert!((report.trace_dist - 0.19).abs() < 1e-12);
        assert!((report.upper - 0.19f64.sqrt()).abs() < 1e-9);

        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..200 {
            use rand::Rng;
            let d = rng.gen_range(2..=6usize);
            let r1 = rng.gen_range(1..=d);
            let r2 = rng.gen_range(1..=d);
            let a = random_state(d, r1, &mut rng).unwrap();
            let b = random_state(d, r2, &mut rng).unwrap();
            assert!(check_fuchs_van_de_graaf(&a, &b).unwrap().holds);
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = StdRng::seed_from_u64(5);
        for d in 1..=8 {
            let u = haar_unitary(d, &mut rng);
            assert!(unitarity_violation(u.matrix()) < 1e-12, "d = {d}");
        }
    }

    #[test]
    fn haar_first_moment() {
        // E |U_ij|^2 = 1/d
        let mut rng = StdRng::seed_from_u64(6);
        let d = 3;
        let samples = 20_000;
        let mut acc = vec![0.0f64; d * d];
        for _ in 0..samples {
            let u = haar_unitary(d, &mut rng);
            for i in 0..d {
                for j in 0..d {
                    acc[i * d + j] += u.matrix()[(i, j)].norm_sqr();
                }
            }
        }
        // sd of |U11|^2 is about 1/d * sqrt((d-1)/(d+1)); allow 4 sigma
        let stderr = (1.0 / d as f64) * ((d as f64 - 1.0) / (d as f64 + 1.0)).sqrt()
            / (samples as f64).sqrt();
        for v in acc {
            let mean = v / samples as f64;
            assert!(
                (mean - 1.0 / d as f64).abs() < 4.0 * stderr,
                "mean = {mean}, stderr = {stderr}"
            );
        }
    }

    #[test]
    fn haar_top_entry_matches_gaussian_ratio_law() {
        // 2 |U_11|^2 for Haar U(2) has the law of the normalized
        // Gaussian-square ratio with (n, m) = (2, 1): uniform on [0, 2]
        let mut rng = StdRng::seed_from_u64(9);
        let params = crate::concentration::ZParams::new(2, 1).unwrap();
        let samples: Vec<f64> = (0..100_000)
            .map(|_| 2.0 * haar_unitary(2, &mut rng).matrix()[(0, 0)].norm_sqr())
            .collect();
        let ks = crate::special::ks_distance(&samples, |z| {
            crate::concentration::z_cdf(&params, z).unwrap()
        });
        assert!(ks < 0.02, "ks = {ks}");
    }

    #[test]
    fn random_state_rank_and_purity() {
        let mut rng = StdRng::seed_from_u64(7);
        let pure = random_state(4, 1, &mut rng).unwrap();
        assert_eq!(pure.rank(), 1);
        assert!((fidelity(&pure, &pure).unwrap() - 1.0).abs() < 1e-10);
        for _ in 0..1000 {
            let rho = random_state(6, 3, &mut rng).unwrap();
            assert_eq!(rho.rank(), 3);
        }
    }

    #[test]
    fn random_full_rank_states_average_to_identity() {
        let mut rng = StdRng::seed_from_u64(8);
        let d = 3;
        let samples = 3000;
        let mut acc = CMatrix::zeros(d, d);
        for _ in 0..samples {
            acc += random_state(d, d, &mut rng).unwrap().matrix();
        }
        acc /= Complex64::new(samples as f64, 0.0);
        let dev = crate::linalg::max_abs_entry(&(acc - CMatrix::identity(d, d).scale(1.0 / d as f64)));
        // entry fluctuations are O(1/(d sqrt(samples)))
        assert!(dev < 5.0 / (d as f64 * (samples as f64).sqrt()), "dev = {dev}");
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let not_herm = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5, 0.0),
                Complex64::new(0.3, 0.0),
                Complex64::new(0.1, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        );
        assert!(matches!(
            DensityMatrix::new(not_herm),
            Err(Error::NotHermitian { .. })
        ));
        let bad_trace = crate::linalg::diag_real(&[0.7, 0.7]);
        assert!(matches!(
            DensityMatrix::new(bad_trace),
            Err(Error::BadTrace { .. })
        ));
        let not_psd = crate::linalg::diag_real(&[1.2, -0.2]);
        assert!(matches!(
            DensityMatrix::new(not_psd),
            Err(Error::NotPsd { .. })
        ));
        let with_nan = crate::linalg::diag_real(&[f64::NAN, 1.0]);
        assert!(DensityMatrix::new(with_nan).is_err());
    }
}
