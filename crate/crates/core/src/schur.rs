//! Schur polynomial evaluation and the character bounds built on it.
//!
//! Values routinely straddle hundreds of orders of magnitude (F^{2n}
//! underflows f64 around n = 400), so everything is carried as a sign plus
//! log-magnitude. Three evaluation backends cover complementary regimes:
//!
//! * an exact monomial sum over semistandard tableau weights (small n),
//! * the two-variable closed form (any n, d = 2),
//! * the bialternant determinant ratio, with a confluent (derivative-row)
//!   variant once eigenvalues cluster within relative gap 1e-6.
//!
//! The backends agree on overlapping domains and are cross-checked against
//! the explicit tensor-space oracle elsewhere in the crate.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::matrix_sqrt_psd;
use crate::partitions::{dim_gl_irrep, Partition};
use crate::special::{ln_binomial, log_add_exp};
use crate::states::{fidelity, DensityMatrix};

/// Relative eigenvalue gap below which bialternant evaluation switches to
/// confluent (derivative) rows. Vandermonde conditioning degrades as the
/// inverse gap, so near-coincident points must be merged.
pub const CLUSTER_GAP: f64 = 1e-6;

/// Normalized eigenvalues at or below this are treated as exact zeros and
/// removed from the variable set (rank deficiency must produce structural
/// zeros, not noise).
const ZERO_STRIP: f64 = 1e-13;

/// A scalar stored as sign and natural log of magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScalar {
    sign: i8,
    ln: f64,
}

impl LogScalar {
    pub fn zero() -> Self {
        Self {
            sign: 0,
            ln: f64::NEG_INFINITY,
        }
    }

    pub fn one() -> Self {
        Self { sign: 1, ln: 0.0 }
    }

    /// Positive value from its natural log.
    pub fn from_ln(ln: f64) -> Self {
        Self { sign: 1, ln }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::zero()
        } else {
            Self {
                sign: if v > 0.0 { 1 } else { -1 },
                ln: v.abs().ln(),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of |value|; -inf for zero.
    pub fn ln_abs(&self) -> f64 {
        self.ln
    }

    /// Linear-domain value; may overflow/underflow f64 by design.
    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * self.ln.exp()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::zero();
        }
        Self {
            sign: self.sign * other.sign,
            ln: self.ln + other.ln,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(other.sign != 0, "division by log-zero");
        if self.sign == 0 {
            return Self::zero();
        }
        Self {
            sign: self.sign * other.sign,
            ln: self.ln - other.ln,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.sign == 0 {
            return *other;
        }
        if other.sign == 0 {
            return *self;
        }
        if self.sign == other.sign {
            Self {
                sign: self.sign,
                ln: log_add_exp(self.ln, other.ln),
            }
        } else {
            // signed difference; exact cancellation yields zero
            let (big, small) = if self.ln >= other.ln {
                (self, other)
            } else {
                (other, self)
            };
            let diff = (small.ln - big.ln).exp();
            if diff >= 1.0 {
                return Self::zero();
            }
            Self {
                sign: big.sign,
                ln: big.ln + (1.0 - diff).ln(),
            }
        }
    }

    pub fn powi(&self, k: u32) -> Self {
        if k == 0 {
            return Self::one();
        }
        if self.sign == 0 {
            return Self::zero();
        }
        Self {
            sign: if self.sign < 0 && k % 2 == 1 { -1 } else { 1 },
            ln: self.ln * k as f64,
        }
    }
}

/// Non-negative evaluation point: eigenvalues of the argument matrix.
/// Entries below -1e-12 are rejected; small negatives are clipped to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalPoint {
    values: Vec<f64>,
}

impl EvalPoint {
    pub const CLIP_TOL: f64 = 1e-12;

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("empty evaluation point".into()));
        }
        let mut clipped = Vec::with_capacity(values.len());
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(
                    "evaluation point entry is not finite".into(),
                ));
            }
            if v < -Self::CLIP_TOL {
                return Err(Error::InvalidParameter(format!(
                    "evaluation point entry {v} below clip tolerance"
                )));
            }
            clipped.push(v.max(0.0));
        }
        Ok(Self { values: clipped })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Evaluate s_lambda at `x`, dispatching on the regime: two live variables
/// use the closed form, small n the exact tableau sum, everything else the
/// (confluent) bialternant ratio.
///
/// The point is first normalized and relative-scale zeros are stripped, so
/// rank deficiency produces exact structural zeros on every path.
pub fn schur_eval(lambda: &Partition, x: &EvalPoint) -> LogScalar {
    if lambda.rows() > x.len() {
        return LogScalar::zero();
    }
    let scale: f64 = x.values().iter().sum();
    if scale <= 0.0 {
        return LogScalar::zero();
    }
    let mut y: Vec<f64> = x.values().iter().map(|&v| v / scale).collect();
    y.sort_by(|a, b| b.partial_cmp(a).unwrap());
    y.retain(|&v| v > ZERO_STRIP);
    if lambda.rows() > y.len() {
        return LogScalar::zero();
    }
    let log_scale = lambda.n() as f64 * scale.ln();
    let inner = match y.len() {
        1 => LogScalar::from_ln(lambda.n() as f64 * y[0].ln()),
        2 => schur_eval_d2(lambda, y[0], y[1]),
        _ => {
            if lambda.n() <= crate::partitions::KOSTKA_CAP {
                schur_eval_ssyt(lambda, &EvalPoint { values: y })
            } else {
                schur_eval_bialternant(lambda, &EvalPoint { values: y })
            }
        }
    };
    LogScalar {
        sign: inner.sign,
        ln: inner.ln + log_scale,
    }
}

// ---------------------------------------------------------------------------
// backend (a): exact monomial sum over SSYT weights, n <= 12
// ---------------------------------------------------------------------------

type WeightTable = Arc<Vec<(Vec<usize>, f64)>>;

static WEIGHT_TABLES: OnceLock<Mutex<HashMap<(Partition, usize), WeightTable>>> = OnceLock::new();

/// All (weight, Kostka count) pairs of shape lambda with entries among d
/// labels, enumerated once and cached.
fn weight_table(lambda: &Partition, d: usize) -> WeightTable {
    let cache = WEIGHT_TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(lambda.clone(), d)) {
        return Arc::clone(t);
    }
    let shape = lambda.parts().to_vec();
    let rows = shape.len();
    let cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|i| (0..shape[i]).map(move |j| (i, j)))
        .collect();
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    let mut tableau: Vec<Vec<usize>> = shape.iter().map(|&w| vec![0; w]).collect();
    let mut weight = vec![0usize; d];
    fn fill(
        cell: usize,
        cells: &[(usize, usize)],
        d: usize,
        tableau: &mut Vec<Vec<usize>>,
        weight: &mut Vec<usize>,
        counts: &mut HashMap<Vec<usize>, u64>,
    ) {
        if cell == cells.len() {
            *counts.entry(weight.clone()).or_insert(0) += 1;
            return;
        }
        let (i, j) = cells[cell];
        let lo_row = if j > 0 { tableau[i][j - 1] } else { 0 };
        let lo_col = if i > 0 { tableau[i - 1][j] + 1 } else { 0 };
        for v in lo_row.max(lo_col)..d {
            tableau[i][j] = v;
            weight[v] += 1;
            fill(cell + 1, cells, d, tableau, weight, counts);
            weight[v] -= 1;
        }
    }
    fill(0, &cells, d, &mut tableau, &mut weight, &mut counts);
    let mut table: Vec<(Vec<usize>, f64)> =
        counts.into_iter().map(|(w, k)| (w, k as f64)).collect();
    table.sort_by(|a, b| a.0.cmp(&b.0)); // deterministic evaluation order
    let table = Arc::new(table);
    cache
        .lock()
        .unwrap()
        .insert((lambda.clone(), d), Arc::clone(&table));
    table
}

/// Exact sum s_lambda(x) = sum_nu K_{lambda,nu} x^nu.
pub fn schur_eval_ssyt(lambda: &Partition, x: &EvalPoint) -> LogScalar {
    if lambda.rows() > x.len() {
        return LogScalar::zero();
    }
    let scale: f64 = x.values().iter().sum();
    if scale <= 0.0 {
        return LogScalar::zero();
    }
    let y: Vec<f64> = x.values().iter().map(|&v| v / scale).collect();
    let table = weight_table(lambda, y.len());
    let mut sum = 0.0f64;
    for (weight, k) in table.iter() {
        let mut mono = *k;
        for (v, &w) in y.iter().zip(weight) {
            if w > 0 {
                mono *= v.powi(w as i32);
            }
        }
        sum += mono;
    }
    if sum <= 0.0 {
        return LogScalar::zero();
    }
    LogScalar::from_ln(lambda.n() as f64 * scale.ln() + sum.ln())
}

// ---------------------------------------------------------------------------
// backend (b): two-variable closed form, any n
// ---------------------------------------------------------------------------

/// s_{(a,b)}(x, y) = (x y)^b * sum_{j=0}^{a-b} x^j y^{a-b-j}.
pub fn schur_eval_d2(lambda: &Partition, x: f64, y: f64) -> LogScalar {
    assert!(lambda.rows() <= 2, "d = 2 closed form needs <= 2 rows");
    assert!(x >= 0.0 && y >= 0.0);
    let a = lambda.part(0);
    let b = lambda.part(1);
    let hi = x.max(y);
    let lo = x.min(y);
    if hi == 0.0 {
        return LogScalar::zero();
    }
    if b > 0 && lo == 0.0 {
        return LogScalar::zero();
    }
    let m = (a - b) as i32;
    let t = lo / hi;
    // geometric sum 1 + t + ... + t^m, summed directly near t = 1 where the
    // closed form cancels
    let sum = if t < 1.0 - 1e-6 {
        (1.0 - t.powi(m + 1)) / (1.0 - t)
    } else {
        let mut acc = 0.0;
        let mut term = 1.0;
        for _ in 0..=m {
            acc += term;
            term *= t;
        }
        acc
    };
    let mut ln = m as f64 * hi.ln() + sum.ln();
    if b > 0 {
        ln += b as f64 * (x.ln() + y.ln());
    }
    LogScalar::from_ln(ln)
}

// ---------------------------------------------------------------------------
// backend (c): (confluent) bialternant determinant ratio
// ---------------------------------------------------------------------------

/// s_lambda(x) = det[x_i^{lambda_j + K - j}] / det[x_i^{K - j}], evaluated
/// after normalizing and sorting x, stripping exact zeros, and merging
/// eigenvalue clusters into derivative rows.
pub fn schur_eval_bialternant(lambda: &Partition, x: &EvalPoint) -> LogScalar {
    if lambda.rows() > x.len() {
        return LogScalar::zero();
    }
    let scale: f64 = x.values().iter().sum();
    if scale <= 0.0 {
        return LogScalar::zero();
    }
    let mut y: Vec<f64> = x.values().iter().map(|&v| v / scale).collect();
    y.sort_by(|a, b| b.partial_cmp(a).unwrap());
    y.retain(|&v| v > ZERO_STRIP);
    let k = y.len();
    // a zero eigenvalue kills every monomial with a positive exponent in
    // that variable: s_lambda(x, 0) = s_lambda(x), or 0 if too many rows
    if lambda.rows() > k {
        return LogScalar::zero();
    }
    let log_scale = lambda.n() as f64 * scale.ln();

    // group near-coincident values (relative gap below CLUSTER_GAP)
    let mut clusters: Vec<(f64, usize)> = Vec::new(); // (mean value, multiplicity)
    let mut start = 0;
    for i in 0..k {
        if i + 1 == k || (y[start] - y[i + 1]) > CLUSTER_GAP * y[start] {
            let m = i + 1 - start;
            let mean = y[start..=i].iter().sum::<f64>() / m as f64;
            clusters.push((mean, m));
            start = i + 1;
        }
    }

    if clusters.len() == 1 {
        // fully degenerate point: s_lambda(v, ..., v) = dim Q_lambda * v^n
        let (v, _) = clusters[0];
        let dim = dim_gl_irrep(lambda, k);
        return LogScalar::from_ln(log_scale + dim.ln + lambda.n() as f64 * v.ln());
    }

    let numer_exps: Vec<usize> = (0..k).map(|j| lambda.part(j) + k - 1 - j).collect();
    let denom_exps: Vec<usize> = (0..k).map(|j| k - 1 - j).collect();
    let (sign_n, ln_n) = confluent_alternant_logdet(&clusters, &numer_exps);
    let (sign_d, ln_d) = confluent_alternant_logdet(&clusters, &denom_exps);
    assert!(
        sign_n * sign_d > 0,
        "bialternant determinants lost their sign: lambda = {lambda}, point = {:?}",
        x.values()
    );
    LogScalar::from_ln(log_scale + ln_n - ln_d)
}

/// log |det| and sign of the confluent alternant with the given column
/// exponents: for a cluster (v, m) the rows are the scaled derivatives
/// C(e_j, m) v^{e_j - m} for m = 0..multiplicity-1.
fn confluent_alternant_logdet(clusters: &[(f64, usize)], exps: &[usize]) -> (i8, f64) {
    let k = exps.len();
    let mut mat = vec![vec![0.0f64; k]; k];
    let mut row_scales = vec![0.0f64; k];
    let mut row = 0;
    for &(v, mult) in clusters {
        let ln_v = v.ln();
        for m in 0..mult {
            // log-domain entries, rescaled so each row's max is 1
            let ln_entries: Vec<f64> = exps
                .iter()
                .map(|&e| {
                    if e < m {
                        f64::NEG_INFINITY
                    } else {
                        ln_binomial(e, m) + (e - m) as f64 * ln_v
                    }
                })
                .collect();
            let row_max = ln_entries.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            row_scales[row] = row_max;
            for (j, &ln_e) in ln_entries.iter().enumerate() {
                mat[row][j] = if ln_e == f64::NEG_INFINITY {
                    0.0
                } else {
                    (ln_e - row_max).exp()
                };
            }
            row += 1;
        }
    }
    let (sign, ln_det) = lu_logdet(&mut mat);
    (sign, ln_det + row_scales.iter().sum::<f64>())
}

/// Log-determinant with sign via LU with partial pivoting.
fn lu_logdet(mat: &mut [Vec<f64>]) -> (i8, f64) {
    let k = mat.len();
    let mut sign = 1i8;
    let mut ln_det = 0.0f64;
    for col in 0..k {
        let pivot_row = (col..k)
            .max_by(|&a, &b| mat[a][col].abs().partial_cmp(&mat[b][col].abs()).unwrap())
            .unwrap();
        if mat[pivot_row][col] == 0.0 {
            return (0, f64::NEG_INFINITY);
        }
        if pivot_row != col {
            mat.swap(pivot_row, col);
            sign = -sign;
        }
        let pivot = mat[col][col];
        if pivot < 0.0 {
            sign = -sign;
        }
        ln_det += pivot.abs().ln();
        for r in (col + 1)..k {
            let factor = mat[r][col] / pivot;
            if factor != 0.0 {
                for c in col..k {
                    let sub = factor * mat[col][c];
                    mat[r][c] -= sub;
                }
            }
        }
    }
    (sign, ln_det)
}

// ---------------------------------------------------------------------------
// evaluation at matrix products and the character bounds
// ---------------------------------------------------------------------------

/// s_lambda(rho sigma), evaluated at the spectrum of the Hermitian PSD
/// matrix sqrt(rho) sigma sqrt(rho), which shares eigenvalues with rho
/// sigma. The eigenvalues are obtained as squared singular values of
/// sqrt(rho) sqrt(sigma), which keeps zero modes at noise-free scale.
pub fn schur_eval_product(
    lambda: &Partition,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<LogScalar> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let a = matrix_sqrt_psd(rho.matrix());
    let b = matrix_sqrt_psd(sigma.matrix());
    let eigs: Vec<f64> = crate::linalg::singular_values(&(a * b))
        .iter()
        .map(|&s| s * s)
        .collect();
    let point = EvalPoint::new(eigs)?;
    Ok(schur_eval(lambda, &point))
}

/// Report for s_lambda(rho sigma) <= dim Q_lambda e^{-2nH(lambda/n)} F^{2n}.
#[derive(Debug, Clone)]
pub struct CharacterBoundReport {
    /// ln s_lambda(rho sigma); -inf when the value vanishes.
    pub lhs_ln: f64,
    /// ln of the right-hand side.
    pub rhs_ln: f64,
    /// rhs_ln - lhs_ln; +inf when the left side is a structural zero.
    pub margin: f64,
    pub holds: bool,
    /// lambda has more rows than rank(rho), so the exact value must vanish.
    pub structural_zero_expected: bool,
    pub lhs_is_zero: bool,
}

/// Log-domain slack for the character upper bound.
pub const CHARACTER_BOUND_SLACK: f64 = 1e-9;

pub fn check_character_upper_bound(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    lambda: &Partition,
) -> Result<CharacterBoundReport> {
    let value = schur_eval_product(lambda, rho, sigma)?;
    let f = fidelity(rho, sigma)?;
    let n = lambda.n() as f64;
    let d = rho.dim();
    let ln_f = if f > 0.0 { f.ln() } else { f64::NEG_INFINITY };
    let rhs_ln = dim_gl_irrep(lambda, d).ln - 2.0 * n * lambda.entropy() + 2.0 * n * ln_f;
    let lhs_ln = value.ln_abs();
    let holds = value.is_zero() || lhs_ln <= rhs_ln + CHARACTER_BOUND_SLACK;
    Ok(CharacterBoundReport {
        lhs_ln,
        rhs_ln,
        margin: rhs_ln - lhs_ln,
        holds,
        structural_zero_expected: lambda.rows() > rho.rank(),
        lhs_is_zero: value.is_zero(),
    })
}

/// Report for s_lambda(lambda/n) >= e^{-n H(lambda/n)}.
#[derive(Debug, Clone)]
pub struct CharacterLowerBoundReport {
    pub lhs_ln: f64,
    pub rhs_ln: f64,
    /// lhs_ln - rhs_ln; non-negative when the bound holds.
    pub margin: f64,
    pub holds: bool,
}

pub fn check_character_lower_bound(lambda: &Partition) -> CharacterLowerBoundReport {
    let d = lambda.rows();
    let point = EvalPoint::new(lambda.normalized(d).expect("own rows")).expect("non-negative");
    let lhs_ln = schur_eval(lambda, &point).ln_abs();
    let rhs_ln = -(lambda.n() as f64) * lambda.entropy();
    let margin = lhs_ln - rhs_ln;
    CharacterLowerBoundReport {
        lhs_ln,
        rhs_ln,
        margin,
        holds: margin >= -crate::partitions::LOG_SLACK,
    }
}

/// ln of the dominant monomial x^lambda at a descending-sorted point; the
/// largest-term bound gives s_lambda(x) <= dim Q_lambda * x^lambda.
pub fn ln_dominant_monomial(lambda: &Partition, x: &EvalPoint) -> f64 {
    let mut sorted = x.values().to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut ln = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        let e = lambda.part(i);
        if e > 0 {
            if v == 0.0 {
                return f64::NEG_INFINITY;
            }
            ln += e as f64 * v.ln();
        }
    }
    ln
}
