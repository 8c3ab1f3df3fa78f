//! Acceptance suite: each test exercises one release criterion end to end
//! at its stated tolerance and prints a PASS line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use schurtomo::concentration::{
    f_bound_check, gaussian_domination_check, grid, projector_overlap_tail, sample_z, z_cdf,
    z_pdf, ZParams,
};
use schurtomo::linalg::{hermitize, kron_power, max_abs_entry, trace_product, CMatrix};
use schurtomo::oracle::isotypic_projector;
use schurtomo::packing::{
    analytic_distance_lower_bound, chi0_analytic, greedy_pack, holevo_chi,
    indep_chi_per_copy_mc, make_state, tau_entropy_formula, DistanceMetric, Ensemble, NetFamily,
};
use schurtomo::partitions::{
    check_dim_entropy_bound, dim_gl_irrep, dim_sn_irrep, enumerate_partitions,
};
use schurtomo::pgm::{
    beta_integral_check, check_pgm_bound, expected_schur_exact, expected_schur_lower_bound,
    expected_schur_mc,
};
use schurtomo::schur::{check_character_lower_bound, check_character_upper_bound, schur_eval, EvalPoint};
use schurtomo::special::ks_distance;
use schurtomo::states::{
    fidelity, haar_unitary, one_norm_distance, von_neumann_entropy, DensityMatrix,
};
use schurtomo::tomography::{
    failure_probability_report, highest_density_width, qubit_outcome_curves,
    schur_weyl_weight_deviation, SampleConfig,
};

fn random_state(d: usize, r: usize, rng: &mut impl Rng) -> DensityMatrix {
    schurtomo::states::random_state(d, r, rng).expect("valid rank")
}

#[test]
fn criterion_01_oracle_equivalence() {
    let mut rng = StdRng::seed_from_u64(101);
    for d in 1..=3usize {
        for n in 1..=5usize {
            let total = d.pow(n as u32);
            let lambdas = enumerate_partitions(n, d);
            let projectors: Vec<CMatrix> = lambdas
                .iter()
                .map(|l| isotypic_projector(l, d, n).unwrap())
                .collect();
            let mut sum = CMatrix::zeros(total, total);
            for proj in &projectors {
                assert!(max_abs_entry(&(proj * proj - proj)) < 1e-10, "idempotence");
                assert!(max_abs_entry(&(proj - hermitize(proj))) < 1e-10);
                sum += proj;
            }
            assert!(
                max_abs_entry(&(sum - CMatrix::identity(total, total))) < 1e-10,
                "completeness d={d} n={n}"
            );
            for i in 0..projectors.len() {
                for j in (i + 1)..projectors.len() {
                    assert!(
                        max_abs_entry(&(&projectors[i] * &projectors[j])) < 1e-10,
                        "orthogonality d={d} n={n}"
                    );
                }
            }
            for _ in 0..20 {
                let r = rng.gen_range(1..=d);
                let rho = random_state(d, r, &mut rng);
                let tensor = kron_power(rho.matrix(), n);
                let spectrum = EvalPoint::new(rho.spectrum_clipped()).unwrap();
                for (lambda, proj) in lambdas.iter().zip(&projectors) {
                    let explicit = trace_product(proj, &tensor).re;
                    let predicted =
                        dim_sn_irrep(lambda).as_f64() * schur_eval(lambda, &spectrum).to_f64();
                    assert!(
                        (explicit - predicted).abs() < 1e-10,
                        "d={d} n={n} lambda={lambda}: {explicit} vs {predicted}"
                    );
                }
            }
        }
    }
    println!("ACCEPTANCE C1 oracle equivalence: PASS");
}

#[test]
fn criterion_02_dimension_identities() {
    // exact Schur-Weyl dimension identity
    for d in 1..=4usize {
        for n in 1..=20usize {
            let total: u128 = enumerate_partitions(n, d)
                .iter()
                .map(|l| {
                    dim_gl_irrep(l, d).exact.expect("in exact range")
                        * dim_sn_irrep(l).exact.expect("in exact range")
                })
                .sum();
            assert_eq!(total, (d as u128).pow(n as u32), "d={d} n={n}");
        }
    }
    // entropy bounds on every partition with n <= 60, up to 6 rows
    for n in 1..=60usize {
        for lambda in enumerate_partitions(n, 6) {
            let dim_report = check_dim_entropy_bound(&lambda);
            assert!(dim_report.holds, "dim bound failed at {lambda}: {dim_report:?}");
            let char_report = check_character_lower_bound(&lambda);
            assert!(
                char_report.holds,
                "character lower bound failed at {lambda}: {char_report:?}"
            );
        }
    }
    println!("ACCEPTANCE C2 dimension identities: PASS");
}

#[test]
fn criterion_03_character_bound_sweep() {
    let mut rng = StdRng::seed_from_u64(103);
    let mut structural_zero_cases = 0usize;
    for _ in 0..1000 {
        let d = rng.gen_range(2..=4usize);
        let r = rng.gen_range(1..=d);
        let n = rng.gen_range(1..=30usize);
        let rho = random_state(d, r, &mut rng);
        let sigma = random_state(d, rng.gen_range(1..=d), &mut rng);
        let lambdas = enumerate_partitions(n, d);
        let lambda = lambdas[rng.gen_range(0..lambdas.len())].clone();
        let report = check_character_upper_bound(&rho, &sigma, &lambda).unwrap();
        assert!(report.holds, "bound failed: {lambda} d={d} r={r}: {report:?}");
        if report.structural_zero_expected {
            structural_zero_cases += 1;
            assert!(
                report.lhs_is_zero,
                "expected structural zero at {lambda} with rank {r}"
            );
        }
    }
    assert!(structural_zero_cases > 50, "sweep never hit the vanishing case");
    println!("ACCEPTANCE C3 character bound sweep: PASS ({structural_zero_cases} structural zeros)");
}

#[test]
fn criterion_04_schur_weyl_normalization() {
    let mut rng = StdRng::seed_from_u64(104);
    for (d, n_max) in [(2usize, 60usize), (3, 30), (4, 20)] {
        for _ in 0..50 {
            let r = rng.gen_range(1..=d);
            let rho = random_state(d, r, &mut rng);
            let n = rng.gen_range(n_max / 2..=n_max);
            let deviation = schur_weyl_weight_deviation(&rho, n).unwrap();
            assert!(deviation < 1e-9, "d={d} n={n} r={r}: deviation {deviation:e}");
        }
    }
    println!("ACCEPTANCE C4 Schur-Weyl normalization: PASS");
}

#[test]
fn criterion_05_outcome_pdf_reproduction() {
    let grid_size = 4096;
    let mut widths = Vec::new();
    for n in [10usize, 100] {
        let curves = qubit_outcome_curves(0.7, n, grid_size).unwrap();
        let weight_sum: f64 = curves.iter().map(|c| c.weight).sum();
        assert!((weight_sum - 1.0).abs() < 1e-9, "n={n}: weights sum {weight_sum}");
        for curve in &curves {
            assert!(
                curve.normalization_error() < 1e-6,
                "n={n} lambda={}: {:e}",
                curve.lambda,
                curve.normalization_error()
            );
        }
        widths.push(highest_density_width(&curves, 0.9));
    }
    assert!(
        widths[1] <= 0.5 * widths[0],
        "90% HPD width {} at n=100 vs {} at n=10",
        widths[1],
        widths[0]
    );
    println!(
        "ACCEPTANCE C5 outcome PDF reproduction: PASS (widths {:.4} -> {:.4} rad)",
        widths[0], widths[1]
    );
}

#[test]
fn criterion_06_tomography_tail() {
    let mut rng = StdRng::seed_from_u64(106);
    let rho = DensityMatrix::from_diag(&[0.7, 0.3]).unwrap();
    let deltas = [0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5];
    let samples = 10_000;
    let config = SampleConfig::default();
    let mut means = Vec::new();
    for n in [10usize, 100] {
        let report =
            failure_probability_report(&rho, n, &deltas, samples, &mut rng, &config).unwrap();
        for row in &report.rows {
            assert!(
                row.empirical <= row.bound,
                "n={n} delta={}: empirical {} above bound {}",
                row.delta,
                row.empirical,
                row.bound
            );
        }
        means.push(report.mean_infidelity);
    }
    let ratio = means[0] / means[1];
    assert!(
        (5.0..=20.0).contains(&ratio),
        "mean infidelity ratio {ratio} outside [5, 20] ({} vs {})",
        means[0],
        means[1]
    );
    println!("ACCEPTANCE C6 tomography tail: PASS (infidelity ratio {ratio:.2})");
}

#[test]
fn criterion_07_pgm_bounds() {
    let mut rng = StdRng::seed_from_u64(107);
    // exact Dirichlet expectation vs Monte Carlo, and the analytic bound
    for d in 2..=3usize {
        for n in 1..=10usize {
            for lambda in enumerate_partitions(n, d) {
                let exact = expected_schur_exact(&lambda, d).unwrap().to_f64();
                let bound = expected_schur_lower_bound(&lambda, d).unwrap().to_f64();
                let mc = expected_schur_mc(&lambda, d, 100_000, &mut rng).unwrap();
                assert!(
                    (mc.mean - exact).abs() <= 0.03 * exact + 3.0 * mc.stderr,
                    "{lambda} d={d}: mc {} +- {} vs exact {exact}",
                    mc.mean,
                    mc.stderr
                );
                assert!(
                    bound <= mc.mean + 3.0 * mc.stderr,
                    "{lambda} d={d}: bound {bound} above mc {}",
                    mc.mean
                );
                assert!(bound <= exact * (1.0 + 1e-12));
            }
        }
    }
    // e^{nH} E s >= (n+d)^{-d} across the full sweep
    for d in 1..=4usize {
        for n in 1..=40usize {
            for lambda in enumerate_partitions(n, d) {
                let report = check_pgm_bound(&lambda, d).unwrap();
                assert!(report.holds, "{lambda} d={d}: {report:?}");
            }
        }
    }
    // Beta integral identity on a parameter grid
    for &a in &[0.5f64, 1.0, 2.0, 3.5, 7.0] {
        for &b in &[0.5f64, 1.0, 2.5, 5.0] {
            let report = beta_integral_check(a, b).unwrap();
            assert!(
                report.holds,
                "a={a} b={b}: rel error {:e}",
                report.rel_error
            );
        }
    }
    println!("ACCEPTANCE C7 PGM bounds: PASS");
}

#[test]
fn criterion_08_z_variable() {
    let mut rng = StdRng::seed_from_u64(108);
    for (n, m) in [(2usize, 1usize), (10, 3), (50, 10)] {
        let params = ZParams::new(n, m).unwrap();
        let samples: Vec<f64> = (0..100_000).map(|_| sample_z(&params, &mut rng)).collect();
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        assert!((mean - 1.0).abs() < 0.01, "({n},{m}): mean {mean}");
        let second = samples.iter().map(|z| z * z).sum::<f64>() / samples.len() as f64;
        let (_, expected_second) = params.moments();
        assert!(
            (second - expected_second).abs() < 0.02 * expected_second,
            "({n},{m}): second moment {second} vs {expected_second}"
        );
        let ks = ks_distance(&samples, |z| z_cdf(&params, z).unwrap());
        assert!(ks < 0.01, "({n},{m}): KS {ks}");
    }
    // the (2,1) law is uniform on [0, 2]
    let params = ZParams::new(2, 1).unwrap();
    for z in [0.1, 0.5, 1.0, 1.5, 1.9] {
        assert!((z_pdf(&params, z).unwrap() - 0.5).abs() < 1e-12);
        assert!((z_cdf(&params, z).unwrap() - z / 2.0).abs() < 1e-12);
    }
    println!("ACCEPTANCE C8 Z variable: PASS");
}

#[test]
fn criterion_09_concentration() {
    let mut rng = StdRng::seed_from_u64(1090);
    let upper = [0.25, 0.5, 1.0, 2.0];
    let lower = [0.25, 0.5, 0.75];
    for (d, p, q) in [(2usize, 1usize, 1usize), (4, 2, 2), (8, 2, 2)] {
        let rows =
            projector_overlap_tail(d, p, q, &upper, &lower, 100_000, &mut rng).unwrap();
        for row in &rows {
            assert!(row.holds, "(d,p,q)=({d},{p},{q}): {row:?}");
        }
    }
    // piecewise rate-function inequalities on a 1e-3 grid
    let report = f_bound_check(&grid(-0.999, 8.0, 1e-3)).unwrap();
    assert!(report.holds, "{report:?}");
    // closed-form MGF vs Gaussian Monte Carlo, and the domination itself
    for (d, p, q) in [(4usize, 1usize, 1usize), (4, 2, 2)] {
        let rows =
            gaussian_domination_check(d, p, q, &[-1.0, -0.25, 0.3, 0.45], 100_000, &mut rng)
                .unwrap();
        for row in &rows {
            assert!(row.holds, "(d,p,q)=({d},{p},{q}): {row:?}");
            assert!(
                (row.lhs_mc - row.lhs_closed).abs() <= 3.0 * row.lhs_stderr + 1e-12,
                "MGF mismatch at ({d},{p},{q}), xi={}: {row:?}",
                row.xi
            );
        }
    }
    println!("ACCEPTANCE C9 concentration: PASS");
}

#[test]
fn criterion_10_packing_nets() {
    let mut rng = StdRng::seed_from_u64(110);
    let configs = [
        (NetFamily::I { d: 6, r: 1, t: 0.4 }, 0.4 / 4.0),
        (NetFamily::II { d: 8, t: 0.5 }, 0.5 / 2.0),
    ];
    for (family, threshold) in configs {
        let net = greedy_pack(
            &family,
            threshold,
            DistanceMetric::OneNorm,
            10_000,
            10,
            &mut rng,
        )
        .unwrap();
        assert!(
            net.len() >= 10,
            "{family:?}: only {} states in {} draws",
            net.len(),
            net.draws_used
        );
        let verified = net.verify().unwrap();
        assert!(
            verified > threshold,
            "{family:?}: verified min distance {verified} <= {threshold}"
        );
        // analytic separation lower bound vs exact trace norm
        let base = make_state(
            &family,
            &schurtomo::states::UnitaryMatrix::identity(family.unitary_dim()),
        )
        .unwrap();
        for _ in 0..1000 {
            let u = haar_unitary(family.unitary_dim(), &mut rng);
            let state = make_state(&family, &u).unwrap();
            let exact = one_norm_distance(&base, &state).unwrap();
            let bound = analytic_distance_lower_bound(&family, &u).unwrap();
            assert!(
                bound <= exact + 1e-9,
                "{family:?}: bound {bound} above exact {exact}"
            );
        }
    }
    println!("ACCEPTANCE C10 packing nets: PASS");
}

#[test]
fn criterion_11_holevo() {
    let mut rng = StdRng::seed_from_u64(111);
    // identical states
    let rho = random_state(3, 2, &mut rng);
    let ens = Ensemble::uniform(vec![rho.clone(), rho.clone(), rho]).unwrap();
    assert!(holevo_chi(&ens) < 1e-10);
    // orthogonal pure states
    for n in [2usize, 5, 8] {
        let states: Vec<DensityMatrix> = (0..n)
            .map(|i| {
                let mut ket = vec![Complex64::new(0.0, 0.0); n];
                ket[i] = Complex64::new(1.0, 0.0);
                DensityMatrix::pure(&ket).unwrap()
            })
            .collect();
        let chi = holevo_chi(&Ensemble::uniform(states).unwrap());
        assert!((chi - (n as f64).ln()).abs() < 1e-9, "N={n}: chi {chi}");
    }
    // 200-state kind-II ensemble at d = 8, t = 0.3: chi_0 <= t^2 (+3 sigma
    // from a jackknife over ensemble members)
    let (d, t) = (8usize, 0.3f64);
    let family = NetFamily::II { d, t };
    let states: Vec<DensityMatrix> = (0..200)
        .map(|_| make_state(&family, &haar_unitary(d, &mut rng)).unwrap())
        .collect();
    let ensemble = Ensemble::uniform(states.clone()).unwrap();
    let chi = holevo_chi(&ensemble);
    let m = states.len();
    let jack: Vec<f64> = (0..m)
        .map(|leave| {
            let kept: Vec<DensityMatrix> = states
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != leave)
                .map(|(_, s)| s.clone())
                .collect();
            holevo_chi(&Ensemble::uniform(kept).unwrap())
        })
        .collect();
    let jack_mean = jack.iter().sum::<f64>() / m as f64;
    let sigma = ((m as f64 - 1.0) / m as f64
        * jack.iter().map(|x| (x - jack_mean).powi(2)).sum::<f64>())
    .sqrt();
    assert!(
        chi <= t * t + 3.0 * sigma,
        "chi {chi} vs t^2 = {} (sigma {sigma})",
        t * t
    );
    assert!(
        chi <= chi0_analytic(&family).unwrap() + 3.0 * sigma,
        "chi {chi} vs analytic chi0 {} (sigma {sigma})",
        chi0_analytic(&family).unwrap()
    );
    // tau entropy formula against direct eigencomputation
    for (d, t) in [(4usize, 0.5f64), (8, 0.3), (6, 0.8)] {
        let family = NetFamily::II { d, t };
        let state = make_state(&family, &haar_unitary(d, &mut rng)).unwrap();
        assert!(
            (von_neumann_entropy(&state) - tau_entropy_formula(d, d / 2, t)).abs() < 1e-10,
            "d={d} t={t}"
        );
    }
    // per-copy independent-measurement Holevo
    for d in [4usize, 8] {
        let report = indep_chi_per_copy_mc(d, 0.2, 16, 500, &mut rng).unwrap();
        assert!(
            report.holds,
            "d={d}: estimate {} +- {} vs bound {}",
            report.estimate, report.stderr, report.bound
        );
    }
    println!("ACCEPTANCE C11 Holevo: PASS");
}

// Fidelity / trace-distance groundwork used by several criteria above; kept
// here as a smoke check that the sandwich inequality survives at scale.
#[test]
fn fuchs_van_de_graaf_random_sweep() {
    let mut rng = StdRng::seed_from_u64(42);
    for _ in 0..10_000 {
        let d = rng.gen_range(2..=6usize);
        let a = random_state(d, rng.gen_range(1..=d), &mut rng);
        let b = random_state(d, rng.gen_range(1..=d), &mut rng);
        let report = schurtomo::states::check_fuchs_van_de_graaf(&a, &b).unwrap();
        assert!(report.holds, "{report:?}");
        let f = fidelity(&a, &b).unwrap();
        assert!((0.0..=1.0).contains(&f));
    }
}
