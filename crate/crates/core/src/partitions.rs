//! Young diagram combinatorics: partition enumeration, irrep dimensions of
//! the symmetric and general linear groups, majorization, Kostka numbers,
//! and the entropy bound on dim P_lambda.

use crate::error::{Error, Result};
use crate::special::ln_factorial;

/// A partition of n: positive, non-increasing parts. Zero parts are not
/// stored; pair with a dimension d to interpret as a d-row diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("zero part".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts not non-increasing: {parts:?}"
            )));
        }
        Ok(Self { parts })
    }

    /// Sorts the given positive parts into a valid partition.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Total n = sum of parts.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of (positive) rows.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Parts zero-padded to `d` rows. Errors if the diagram has more rows.
    pub fn padded(&self, d: usize) -> Result<Vec<usize>> {
        if self.rows() > d {
            return Err(Error::InvalidPartition(format!(
                "{:?} has {} rows, cannot pad to {}",
                self.parts,
                self.rows(),
                d
            )));
        }
        let mut out = self.parts.clone();
        out.resize(d, 0);
        Ok(out)
    }

    /// Normalized parts lambda/n, padded to `d` entries.
    pub fn normalized(&self, d: usize) -> Result<Vec<f64>> {
        let n = self.n() as f64;
        Ok(self.padded(d)?.iter().map(|&p| p as f64 / n).collect())
    }

    /// Shannon entropy H(lambda/n) in nats.
    pub fn entropy(&self) -> f64 {
        let n = self.n() as f64;
        self.parts
            .iter()
            .map(|&p| {
                let q = p as f64 / n;
                -q * q.ln()
            })
            .sum()
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Occupation counts of the d basis labels in a tableau; sums to n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    counts: Vec<usize>,
}

impl WeightVector {
    pub fn new(counts: Vec<usize>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// All partitions of n with at most `max_rows` rows, in lexicographically
/// decreasing order: (n), (n-1,1), ...
pub fn enumerate_partitions(n: usize, max_rows: usize) -> Vec<Partition> {
    assert!(n >= 1 && max_rows >= 1);
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn recurse(
        remaining: usize,
        max_part: usize,
        rows_left: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition {
                parts: current.clone(),
            });
            return;
        }
        if rows_left == 0 {
            return;
        }
        // the remaining rows must be able to absorb `remaining`
        let lo = remaining.div_ceil(rows_left);
        let hi = max_part.min(remaining);
        for p in (lo..=hi).rev() {
            current.push(p);
            recurse(remaining - p, p, rows_left - 1, current, out);
            current.pop();
        }
    }
    recurse(n, n, max_rows, &mut current, &mut out);
    out
}

/// An irrep dimension (or product of dimensions): exact u128 value when it
/// fits, always with its natural log for overflow-safe arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimValue {
    pub exact: Option<u128>,
    pub ln: f64,
}

impl DimValue {
    pub fn as_f64(&self) -> f64 {
        match self.exact {
            Some(v) => v as f64,
            None => self.ln.exp(),
        }
    }
}

/// Hook lengths of the diagram, row by row.
fn hook_lengths(lambda: &Partition) -> Vec<usize> {
    let parts = lambda.parts();
    let rows = parts.len();
    // column lengths (conjugate partition)
    let width = parts[0];
    let mut col_len = vec![0usize; width];
    for (j, c) in col_len.iter_mut().enumerate() {
        *c = parts.iter().filter(|&&p| p > j).count();
    }
    let mut hooks = Vec::with_capacity(lambda.n());
    for i in 0..rows {
        for j in 0..parts[i] {
            hooks.push(parts[i] - j + col_len[j] - i - 1);
        }
    }
    hooks
}

/// dim P_lambda, the dimension of the S_n irrep, by the hook length formula
/// n! / prod(hooks). Exact for n <= 20, log-domain always.
pub fn dim_sn_irrep(lambda: &Partition) -> DimValue {
    let n = lambda.n();
    let hooks = hook_lengths(lambda);
    let ln = ln_factorial(n) - hooks.iter().map(|&h| (h as f64).ln()).sum::<f64>();
    let exact = if n <= 20 {
        let mut num: u128 = 1;
        for k in 1..=n {
            num *= k as u128;
        }
        let mut den: u128 = 1;
        for &h in &hooks {
            den *= h as u128;
        }
        debug_assert_eq!(num % den, 0);
        Some(num / den)
    } else {
        None
    };
    DimValue { exact, ln }
}

/// dim Q_lambda, the dimension of the GL(d) (equivalently U(d)) irrep, by
/// the Weyl dimension formula prod_{i<j} (l_i - l_j + j - i)/(j - i).
/// Zero when the diagram has more than d rows.
pub fn dim_gl_irrep(lambda: &Partition, d: usize) -> DimValue {
    if lambda.rows() > d {
        return DimValue {
            exact: Some(0),
            ln: f64::NEG_INFINITY,
        };
    }
    let l = lambda.padded(d).expect("rows checked");
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    let mut num_overflow = false;
    let mut ln = 0.0f64;
    for i in 0..d {
        for j in (i + 1)..d {
            let top = (l[i] - l[j] + j - i) as u128;
            let bot = (j - i) as u128;
            ln += (top as f64).ln() - (bot as f64).ln();
            if let Some(v) = num.checked_mul(top) {
                num = v;
            } else {
                num_overflow = true;
            }
            den *= bot;
        }
    }
    let exact = if num_overflow {
        None
    } else {
        debug_assert_eq!(num % den, 0);
        Some(num / den)
    };
    DimValue { exact, ln }
}

/// Outcome of a majorization comparison, keeping the failure position so
/// mismatches stay diagnosable without raising an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MajorizationCheck {
    pub holds: bool,
    pub totals_match: bool,
    /// First prefix (0-based) where the sorted weights overtake lambda.
    pub first_violation: Option<usize>,
}

/// True iff the weight vector is majorized by lambda: every prefix of the
/// descending-sorted weights is dominated and totals agree. Unequal totals
/// yield false rather than an error.
pub fn majorizes(lambda: &Partition, nu: &WeightVector) -> bool {
    majorization_check(lambda, nu).holds
}

pub fn majorization_check(lambda: &Partition, nu: &WeightVector) -> MajorizationCheck {
    let totals_match = lambda.n() == nu.total();
    let mut sorted = nu.counts().to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut lam_prefix = 0usize;
    let mut nu_prefix = 0usize;
    let mut first_violation = None;
    for (i, &c) in sorted.iter().enumerate() {
        lam_prefix += lambda.part(i);
        nu_prefix += c;
        if nu_prefix > lam_prefix {
            first_violation = Some(i);
            break;
        }
    }
    MajorizationCheck {
        holds: totals_match && first_violation.is_none(),
        totals_match,
        first_violation,
    }
}

/// Enumeration cap for Kostka numbers; SSYT backtracking is exponential and
/// only needed at oracle scale.
pub const KOSTKA_CAP: usize = 12;

/// Kostka number K_{lambda,nu}: semistandard tableaux of shape lambda and
/// weight nu, by column-strict/row-weak backtracking.
pub fn kostka(lambda: &Partition, nu: &WeightVector) -> Result<u64> {
    let n = lambda.n();
    if n > KOSTKA_CAP {
        return Err(Error::SizeCap {
            what: "kostka n",
            got: n,
            cap: KOSTKA_CAP,
        });
    }
    if nu.total() != n {
        return Err(Error::InvalidParameter(format!(
            "weight total {} != partition total {}",
            nu.total(),
            n
        )));
    }
    if !majorizes(lambda, nu) {
        return Ok(0);
    }
    let mut count = 0u64;
    let mut remaining: Vec<isize> = nu.counts().iter().map(|&c| c as isize).collect();
    let shape = lambda.parts().to_vec();
    let rows = shape.len();
    // tableau[i][j] = entry (1-based label index stored 0-based)
    let mut tableau: Vec<Vec<usize>> = shape.iter().map(|&w| vec![0; w]).collect();
    fn fill(
        cell: usize,
        cells: &[(usize, usize)],
        tableau: &mut Vec<Vec<usize>>,
        remaining: &mut Vec<isize>,
        count: &mut u64,
    ) {
        if cell == cells.len() {
            *count += 1;
            return;
        }
        let (i, j) = cells[cell];
        let lo_row = if j > 0 { tableau[i][j - 1] } else { 0 };
        let lo_col = if i > 0 { tableau[i - 1][j] + 1 } else { 0 };
        let lo = lo_row.max(lo_col);
        for v in lo..remaining.len() {
            if remaining[v] == 0 {
                continue;
            }
            remaining[v] -= 1;
            tableau[i][j] = v;
            fill(cell + 1, cells, tableau, remaining, count);
            remaining[v] += 1;
        }
    }
    let cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|i| (0..shape[i]).map(move |j| (i, j)))
        .collect();
    fill(0, &cells, &mut tableau, &mut remaining, &mut count);
    Ok(count)
}

/// All weight vectors (compositions) of n into exactly d non-negative parts,
/// in lexicographic order.
pub fn enumerate_weights(n: usize, d: usize) -> Vec<WeightVector> {
    let mut out = Vec::new();
    let mut current = vec![0usize; d];
    fn recurse(pos: usize, remaining: usize, current: &mut Vec<usize>, out: &mut Vec<WeightVector>) {
        if pos == current.len() - 1 {
            current[pos] = remaining;
            out.push(WeightVector::new(current.clone()));
            return;
        }
        for v in 0..=remaining {
            current[pos] = v;
            recurse(pos + 1, remaining - v, current, out);
        }
    }
    recurse(0, n, &mut current, &mut out);
    out
}

/// Verification report for dim P_lambda <= exp(n H(lambda/n)).
#[derive(Debug, Clone)]
pub struct DimEntropyReport {
    pub ln_dim: f64,
    pub n_entropy: f64,
    /// n_entropy - ln_dim; non-negative when the bound holds.
    pub margin: f64,
    pub holds: bool,
}

/// Log-domain slack for exact inequalities checked in floating point.
pub const LOG_SLACK: f64 = 1e-12;

/// Check dim P_lambda <= e^{n H(lambda/n)}.
pub fn check_dim_entropy_bound(lambda: &Partition) -> DimEntropyReport {
    let ln_dim = dim_sn_irrep(lambda).ln;
    let n_entropy = lambda.n() as f64 * lambda.entropy();
    let margin = n_entropy - ln_dim;
    DimEntropyReport {
        ln_dim,
        n_entropy,
        margin,
        holds: margin >= -LOG_SLACK,
    }
}
