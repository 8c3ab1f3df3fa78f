//! Special functions and small statistics helpers shared across modules:
//! log-gamma, regularized incomplete beta/gamma, Gauss-Legendre quadrature,
//! entropies, and the test statistics (KS distance, chi-square) used by the
//! Monte Carlo verification routines.

use std::sync::OnceLock;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for x > 0 (Lanczos approximation,
/// ~1e-13 relative accuracy).
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires x > 0, got {x}");
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let pi = std::f64::consts::PI;
        return pi.ln() - (pi * x).sin().ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

static LN_FACTORIALS: OnceLock<Vec<f64>> = OnceLock::new();

/// ln(n!) with a cached table for small n.
pub fn ln_factorial(n: usize) -> f64 {
    let table = LN_FACTORIALS.get_or_init(|| {
        let mut t = vec![0.0f64; 1025];
        let mut acc = 0.0;
        for (k, slot) in t.iter_mut().enumerate().skip(1) {
            acc += (k as f64).ln();
            *slot = acc;
        }
        t
    });
    if n < table.len() {
        table[n]
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// ln of the binomial coefficient C(n, k).
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "reg_inc_beta requires a, b > 0");
    assert!((0.0..=1.0).contains(&x), "reg_inc_beta requires x in [0,1]");
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    let ln_bt = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let bt = ln_bt.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        bt * beta_cf(a, b, x) / a
    } else {
        1.0 - bt * beta_cf(b, a, 1.0 - x) / b
    }
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-15;
    const FPMIN: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized lower incomplete gamma P(a, x).
pub fn reg_inc_gamma_lower(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // series representation
        let mut ap = a;
        let mut sum = 1.0 / a;
        let mut del = sum;
        for _ in 0..500 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        (sum.ln() - x + a * x.ln() - ln_gamma(a)).exp()
    } else {
        // continued fraction for Q(a, x)
        const FPMIN: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if c.abs() < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let q = (-x + a * x.ln() - ln_gamma(a)).exp() * h;
        1.0 - q
    }
}

/// Survival function of the chi-square distribution with `dof` degrees of
/// freedom, used as the p-value of one-sided chi-square tests.
pub fn chi_square_sf(stat: f64, dof: usize) -> f64 {
    if stat <= 0.0 {
        return 1.0;
    }
    1.0 - reg_inc_gamma_lower(dof as f64 / 2.0, stat / 2.0)
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j as f64 + 1.0) * z * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            pp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let z_old = z;
            z = z_old - p0 / pp;
            if (z - z_old).abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrate `f` over [lo, hi] with a fixed-order Gauss-Legendre rule.
pub fn integrate_gl(f: impl Fn(f64) -> f64, lo: f64, hi: f64, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Tanh-sinh (double-exponential) quadrature of f over (0, 1). The
/// integrand is called as f(u, 1-u) with both arguments computed stably, so
/// integrable endpoint singularities like u^{a-1} with a < 1 converge at
/// spectral rate.
pub fn integrate_de_01(f: impl Fn(f64, f64) -> f64) -> f64 {
    let h = 0.05f64;
    let n = 90i64; // |t| <= 4.5
    let mut acc = 0.0;
    for j in -n..=n {
        let t = j as f64 * h;
        let x = std::f64::consts::FRAC_PI_2 * t.sinh();
        // u = 1/(1+e^{-2x}), 1-u = 1/(1+e^{2x}), each accurate near its
        // own endpoint
        let u = 1.0 / (1.0 + (-2.0 * x).exp());
        let one_minus_u = 1.0 / (1.0 + (2.0 * x).exp());
        // du/dt = (pi/4) cosh(t) / cosh^2((pi/2) sinh t)
        let weight = h * std::f64::consts::FRAC_PI_4 * t.cosh()
            / (std::f64::consts::FRAC_PI_2 * t.sinh()).cosh().powi(2);
        if weight == 0.0 || u == 0.0 || one_minus_u == 0.0 {
            continue;
        }
        acc += weight * f(u, one_minus_u);
    }
    acc
}

/// Binary entropy in nats, with 0 ln 0 = 0.
pub fn binary_entropy(p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "binary_entropy domain");
    let term = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Shannon entropy in nats of a non-negative vector (assumed normalized),
/// with 0 ln 0 = 0. Small negative entries from floating-point noise are
/// treated as zero.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .map(|&p| if p > 0.0 { -p * p.ln() } else { 0.0 })
        .sum()
}

/// Kullback-Leibler divergence KL(p || q) in nats. Requires q_i > 0 wherever
/// p_i > 0.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    p.iter()
        .zip(q)
        .map(|(&pi, &qi)| if pi > 0.0 { pi * (pi / qi).ln() } else { 0.0 })
        .sum()
}

/// log(exp(a) + exp(b)) without overflow; handles -inf as exact zero mass.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Stable log of a sum of exponentials.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = values.iter().map(|&v| (v - hi).exp()).sum();
    hi + sum.ln()
}

/// Sample mean and standard error of the mean.
pub fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    assert!(n >= 2, "need at least 2 samples");
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|&x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    (mean, (var / n as f64).sqrt())
}

/// Two-sided Kolmogorov-Smirnov distance between an empirical sample and a
/// reference CDF. `samples` need not be sorted.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let c = cdf(x);
        let lo = i as f64 / n;
        let hi = (i as f64 + 1.0) / n;
        d = d.max((c - lo).abs()).max((hi - c).abs());
    }
    d
}

/// Pearson chi-square independence test on a contingency table
/// (rows x cols of counts). Returns (statistic, dof, p_value). Rows or
/// columns with zero marginals are dropped.
pub fn chi_square_independence(table: &[Vec<u64>]) -> (f64, usize, f64) {
    let row_tot: Vec<f64> = table.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let ncols = table[0].len();
    let col_tot: Vec<f64> = (0..ncols)
        .map(|j| table.iter().map(|r| r[j] as f64).sum())
        .collect();
    let total: f64 = row_tot.iter().sum();
    let live_rows: Vec<usize> = (0..table.len()).filter(|&i| row_tot[i] > 0.0).collect();
    let live_cols: Vec<usize> = (0..ncols).filter(|&j| col_tot[j] > 0.0).collect();
    let mut stat = 0.0;
    for &i in &live_rows {
        for &j in &live_cols {
            let expected = row_tot[i] * col_tot[j] / total;
            let diff = table[i][j] as f64 - expected;
            stat += diff * diff / expected;
        }
    }
    let dof = (live_rows.len() - 1) * (live_cols.len() - 1);
    let p = if dof == 0 { 1.0 } else { chi_square_sf(stat, dof) };
    (stat, dof, p)
}

/// Goodness-of-fit chi-square test of observed counts against expected
/// probabilities. Returns (statistic, dof, p_value).
pub fn chi_square_goodness_of_fit(observed: &[u64], expected_probs: &[f64]) -> (f64, usize, f64) {
    assert_eq!(observed.len(), expected_probs.len());
    let total: f64 = observed.iter().sum::<u64>() as f64;
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&obs, &p) in observed.iter().zip(expected_probs) {
        let exp = total * p;
        if exp > 0.0 {
            stat += (obs as f64 - exp).powi(2) / exp;
            cells += 1;
        }
    }
    let dof = cells.saturating_sub(1);
    let p = if dof == 0 { 1.0 } else { chi_square_sf(stat, dof) };
    (stat, dof, p)
}
