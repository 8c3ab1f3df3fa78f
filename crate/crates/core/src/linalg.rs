//! Dense complex linear algebra helpers shared by the state, oracle, and
//! net-construction modules. Everything here operates on small matrices
//! (at most d^n = 243 for the explicit Schur-Weyl oracle), so dense
//! eigendecompositions are the right tool throughout.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Force exact Hermiticity by averaging with the adjoint. Used to clean up
/// products that are Hermitian in exact arithmetic.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    let adj = m.adjoint();
    (m + adj).scale(0.5)
}

/// Largest entrywise deviation |m - m^dag|.
pub fn hermitian_violation(m: &CMatrix) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0f64, f64::max)
}

/// Largest entrywise deviation |u u^dag - I|.
pub fn unitarity_violation(u: &CMatrix) -> f64 {
    let prod = u * u.adjoint();
    let id = CMatrix::identity(u.nrows(), u.ncols());
    (prod - id).iter().map(|z| z.norm()).fold(0.0f64, f64::max)
}

/// Eigenvalues and eigenvectors of a Hermitian matrix, sorted by descending
/// eigenvalue. Columns of the returned matrix are the eigenvectors.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitize(m).symmetric_eigen();
    let d = m.nrows();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(d, d);
    for (new_col, &old_col) in order.iter().enumerate() {
        vectors.set_column(new_col, &eig.eigenvectors.column(old_col));
    }
    (values, vectors)
}

/// Eigenvalues only, sorted descending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = hermitize(m).symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    vals
}

/// Eigenvalues of exact zero modes come back as O(eps) noise; taking square
/// roots would amplify that to O(sqrt(eps)) = 1e-8. Anything below this
/// fraction of the top eigenvalue is therefore treated as an exact zero.
pub const SPECTRAL_ZERO_REL: f64 = 1e-13;

/// Principal square root of a Hermitian PSD matrix. Eigenvalues are clipped
/// at zero from below (so 1e-12-scale PSD violations cannot poison
/// downstream fidelities), and relative-scale zero modes are zeroed exactly.
pub fn matrix_sqrt_psd(m: &CMatrix) -> CMatrix {
    let top = hermitian_eigenvalues(m).first().copied().unwrap_or(0.0);
    let floor = SPECTRAL_ZERO_REL * top.max(0.0);
    apply_spectral(m, |x| if x <= floor { 0.0 } else { x.sqrt() })
}

/// Singular values, sorted descending.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    vals
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn apply_spectral(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let d = m.nrows();
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        let fv = f(v);
        for i in 0..d {
            scaled[(i, j)] *= Complex64::new(fv, 0.0);
        }
    }
    scaled * vectors.adjoint()
}

pub fn trace(m: &CMatrix) -> Complex64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

/// tr(A B) without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    assert_eq!(a.ncols(), b.nrows());
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Trace norm ||m||_1 of a Hermitian matrix: sum of |eigenvalues|.
pub fn trace_norm_hermitian(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).iter().map(|v| v.abs()).sum()
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0f64, f64::max)
}

/// Complex matrix from a real diagonal.
pub fn diag_real(values: &[f64]) -> CMatrix {
    let d = values.len();
    CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(values[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// n-fold Kronecker power.
pub fn kron_power(m: &CMatrix, n: usize) -> CMatrix {
    assert!(n >= 1);
    let mut acc = m.clone();
    for _ in 1..n {
        acc = acc.kronecker(m);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_hermitian() -> CMatrix {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.5, 0.25),
                Complex64::new(0.5, -0.25),
                Complex64::new(1.0, 0.0),
            ],
        );
        hermitize(&m)
    }

    #[test]
    fn eigen_reconstructs_matrix() {
        let m = sample_hermitian();
        let (values, vectors) = hermitian_eigen(&m);
        let rebuilt = &vectors * diag_real(&values) * vectors.adjoint();
        assert!(max_abs_entry(&(rebuilt - &m)) < 1e-12);
        assert!(values[0] >= values[1]);
    }

    #[test]
    fn sqrt_squares_back() {
        let m = sample_hermitian();
        // shift to make PSD
        let shifted = &m + CMatrix::identity(2, 2).scale(3.0);
        let root = matrix_sqrt_psd(&shifted);
        assert!(max_abs_entry(&(&root * &root - shifted)) < 1e-12);
    }

    #[test]
    fn trace_product_matches_full_product() {
        let a = sample_hermitian();
        let b = &a * &a;
        let direct = trace(&(&a * &b));
        let fast = trace_product(&a, &b);
        assert!((direct - fast).norm() < 1e-12);
    }

    #[test]
    fn kron_power_dimensions() {
        let m = CMatrix::identity(3, 3);
        let k = kron_power(&m, 4);
        assert_eq!(k.nrows(), 81);
        assert!(max_abs_entry(&(k - CMatrix::identity(81, 81))) < 1e-15);
    }
}
