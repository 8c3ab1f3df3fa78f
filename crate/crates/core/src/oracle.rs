//! Brute-force Schur-Weyl decomposition on the explicit d^n-dimensional
//! tensor space. Everything here is exhaustive and slow on purpose: the
//! isotypic projectors built from symmetric-group characters are the
//! independent ground truth against which Schur polynomial evaluation and
//! the sampling distributions are checked.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron_power, trace_product, CMatrix};
use crate::partitions::{dim_sn_irrep, enumerate_partitions, Partition};
use crate::schur::{schur_eval, EvalPoint};
use crate::states::DensityMatrix;

/// Largest explicit tensor-space dimension d^n the oracle will build.
pub const ORACLE_DIM_CAP: usize = 243;

/// Largest n for character evaluation.
pub const CHARACTER_CAP: usize = 8;

fn check_dim_cap(d: usize, n: usize) -> Result<usize> {
    let mut total: usize = 1;
    for _ in 0..n {
        total = total.saturating_mul(d);
        if total > ORACLE_DIM_CAP {
            return Err(Error::SizeCap {
                what: "oracle tensor dimension d^n",
                got: total,
                cap: ORACLE_DIM_CAP,
            });
        }
    }
    Ok(total)
}

/// All permutations of {0, .., n-1} in a deterministic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

/// Composition pi after tau: (pi . tau)(i) = pi(tau(i)).
pub fn compose(pi: &[usize], tau: &[usize]) -> Vec<usize> {
    tau.iter().map(|&t| pi[t]).collect()
}

/// Cycle type of a permutation, as a partition of n.
pub fn cycle_type(perm: &[usize]) -> Partition {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = perm[cur];
            len += 1;
        }
        cycles.push(len);
    }
    Partition::from_unsorted(cycles).expect("cycles are positive")
}

/// Order of the centralizer of the class with this cycle type:
/// prod_k k^{m_k} m_k!.
pub fn centralizer_order(class: &Partition) -> u64 {
    let mut mult: HashMap<usize, u64> = HashMap::new();
    for &part in class.parts() {
        *mult.entry(part).or_insert(0) += 1;
    }
    let mut z = 1u64;
    for (k, m) in mult {
        z *= (k as u64).pow(m as u32);
        for j in 1..=m {
            z *= j;
        }
    }
    z
}

/// The representing matrix P_pi on (C^d)^(x)n, mapping the tensor factor in
/// slot k to slot pi(k).
pub fn permutation_operator(perm: &[usize], d: usize, n: usize) -> Result<CMatrix> {
    if perm.len() != n {
        return Err(Error::InvalidParameter(format!(
            "permutation length {} != n = {n}",
            perm.len()
        )));
    }
    let total = check_dim_cap(d, n)?;
    let mut mat = CMatrix::zeros(total, total);
    let mut digits = vec![0usize; n];
    let mut moved = vec![0usize; n];
    for col in 0..total {
        decode(col, d, &mut digits);
        for k in 0..n {
            moved[perm[k]] = digits[k];
        }
        let row = encode(&moved, d);
        mat[(row, col)] = Complex64::new(1.0, 0.0);
    }
    Ok(mat)
}

fn encode(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &j| acc * d + j)
}

fn decode(mut index: usize, d: usize, digits: &mut [usize]) {
    for slot in digits.iter_mut().rev() {
        *slot = index % d;
        index /= d;
    }
}

/// Character of the S_n irrep lambda on the conjugacy class with the given
/// cycle type, by the Murnaghan-Nakayama border-strip recursion over beta
/// sets (first-column hook lengths).
pub fn sn_character(lambda: &Partition, class: &Partition) -> Result<i64> {
    let n = lambda.n();
    if n > CHARACTER_CAP {
        return Err(Error::SizeCap {
            what: "character n",
            got: n,
            cap: CHARACTER_CAP,
        });
    }
    if class.n() != n {
        return Err(Error::InvalidParameter(format!(
            "cycle type of {} does not match partition of {}",
            class.n(),
            n
        )));
    }
    let mut memo = HashMap::new();
    Ok(mn_recurse(
        lambda.parts().to_vec(),
        class.parts().to_vec(),
        &mut memo,
    ))
}

fn mn_recurse(
    parts: Vec<usize>,
    cycles: Vec<usize>,
    memo: &mut HashMap<(Vec<usize>, Vec<usize>), i64>,
) -> i64 {
    if cycles.is_empty() {
        return 1; // empty diagram, empty class
    }
    if parts.is_empty() {
        return 0;
    }
    if let Some(&v) = memo.get(&(parts.clone(), cycles.clone())) {
        return v;
    }
    let k = cycles[0];
    let rest: Vec<usize> = cycles[1..].to_vec();
    let l = parts.len();
    let beta: Vec<usize> = parts.iter().enumerate().map(|(i, &p)| p + (l - 1 - i)).collect();
    let mut total = 0i64;
    for i in 0..l {
        if beta[i] < k {
            continue;
        }
        let target = beta[i] - k;
        if beta.contains(&target) {
            continue;
        }
        // strip height = number of beta values jumped over
        let height = beta
            .iter()
            .filter(|&&b| b > target && b < beta[i])
            .count();
        let mut new_beta = beta.clone();
        new_beta[i] = target;
        new_beta.sort_unstable_by(|a, b| b.cmp(a));
        let mut new_parts: Vec<usize> = new_beta
            .iter()
            .enumerate()
            .map(|(j, &b)| b - (l - 1 - j))
            .collect();
        while new_parts.last() == Some(&0) {
            new_parts.pop();
        }
        let sign = if height % 2 == 0 { 1 } else { -1 };
        total += sign * mn_recurse(new_parts, rest.clone(), memo);
    }
    memo.insert((parts, cycles), total);
    total
}

/// The orthogonal projector onto the lambda-isotypic component of
/// (C^d)^(x)n, built by character projection:
/// Pi_lambda = (dim P_lambda / n!) sum_pi chi_lambda(pi) P_pi.
pub fn isotypic_projector(lambda: &Partition, d: usize, n: usize) -> Result<CMatrix> {
    if lambda.n() != n {
        return Err(Error::InvalidParameter(format!(
            "partition of {} does not match n = {n}",
            lambda.n()
        )));
    }
    let total = check_dim_cap(d, n)?;
    let dim_p = dim_sn_irrep(lambda).exact.expect("n <= 20") as f64;
    let mut factorial = 1.0f64;
    for k in 1..=n {
        factorial *= k as f64;
    }
    let mut mat = CMatrix::zeros(total, total);
    let mut digits = vec![0usize; n];
    let mut moved = vec![0usize; n];
    let mut char_cache: HashMap<Partition, i64> = HashMap::new();
    for perm in all_permutations(n) {
        let class = cycle_type(&perm);
        let chi = match char_cache.get(&class) {
            Some(&c) => c,
            None => {
                let c = sn_character(lambda, &class)?;
                char_cache.insert(class, c);
                c
            }
        };
        if chi == 0 {
            continue;
        }
        let weight = Complex64::new(chi as f64, 0.0);
        for col in 0..total {
            decode(col, d, &mut digits);
            for k in 0..n {
                moved[perm[k]] = digits[k];
            }
            let row = encode(&moved, d);
            mat[(row, col)] += weight;
        }
    }
    Ok(mat.scale(dim_p / factorial))
}

/// Per-diagram comparison of the explicit trace tr(Pi_lambda rho^(x)n)
/// against dim P_lambda * s_lambda(spec rho).
#[derive(Debug, Clone)]
pub struct SchurWeylMeasureReport {
    pub rows: Vec<MeasureRow>,
    pub max_abs_error: f64,
    /// Deviation of the explicit traces' sum from 1.
    pub completeness_error: f64,
}

#[derive(Debug, Clone)]
pub struct MeasureRow {
    pub lambda: Partition,
    pub explicit: f64,
    pub predicted: f64,
}

pub fn verify_schur_weyl_measure(rho: &DensityMatrix, n: usize) -> Result<SchurWeylMeasureReport> {
    let d = rho.dim();
    check_dim_cap(d, n)?;
    let tensor = kron_power(rho.matrix(), n);
    let spectrum = EvalPoint::new(rho.spectrum_clipped())?;
    let mut rows = Vec::new();
    let mut max_abs_error = 0.0f64;
    let mut total = 0.0f64;
    for lambda in enumerate_partitions(n, d) {
        let projector = isotypic_projector(&lambda, d, n)?;
        let explicit = trace_product(&projector, &tensor).re;
        let predicted = dim_sn_irrep(&lambda).as_f64() * schur_eval(&lambda, &spectrum).to_f64();
        max_abs_error = max_abs_error.max((explicit - predicted).abs());
        total += explicit;
        rows.push(MeasureRow {
            lambda,
            explicit,
            predicted,
        });
    }
    Ok(SchurWeylMeasureReport {
        rows,
        max_abs_error,
        completeness_error: (total - 1.0).abs(),
    })
}
