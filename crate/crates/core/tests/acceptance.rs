//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its worst observed error and elapsed time (run with `--nocapture` to see
//! them). Tolerances are pinned in the constants below.

use std::time::Instant;

use ncszego::christoffel::{
    christoffel_approx, christoffel_function, minimizer_q, quadratic_functional,
    random_admissible, LimitOutcome,
};
use ncszego::freemonoid::{shortlex_range, words_up_to_length, Word};
use ncszego::linalg::{min_eigenvalue, CMatrix};
use ncszego::moments::MomentFamily;
use ncszego::opuc;
use ncszego::orthopoly::gram_schmidt;
use ncszego::szego::szego_table;
use ncszego::tuple::MatrixTuple;
use ncszego::verblunsky::{extract, moments_from_polys, synthesize, VerblunskyFamily};
use ncszego::zeros::{self, SampleKind};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(name: &str, worst: f64, budget_s: f64, started: Instant) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("{name}: PASS (worst {worst:.3e}, {elapsed:.2}s)");
    assert!(
        elapsed < budget_s,
        "{name}: exceeded the {budget_s} s budget ({elapsed:.2} s)"
    );
}

/// The γ ≡ 0.5 family on every nonempty word up to the horizon.
fn half_family(d: u8, horizon: &Word) -> VerblunskyFamily {
    let entries = shortlex_range(horizon)
        .skip(1)
        .map(|w| (w, Complex64::new(0.5, 0.0)))
        .collect();
    VerblunskyFamily::new(d, horizon.clone(), entries).unwrap()
}

/// Deterministic random measures shared between the criteria that create
/// them and the axiom regression (criterion 8).
fn random_measure(d: u8, len: usize, max_modulus: f64, seed: u64) -> (VerblunskyFamily, MomentFamily) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let horizon = Word::sigma(len, d);
    let g = VerblunskyFamily::random(d, horizon.clone(), max_modulus, &mut rng);
    let m = moments_from_polys(&synthesize(&g, &horizon).unwrap()).unwrap();
    (g, m)
}

const ROUND_TRIP_SEED: u64 = 42;
const SZEGO_SEED: u64 = 501;
const CHRISTOFFEL_SEED: u64 = 77;
const ZEROS_SEED: u64 = 1009;

#[test]
fn criterion_1_free_measure_degeneracy() {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for d in 1..=3u8 {
        let horizon = Word::sigma(4, d);
        let m = MomentFamily::free(d, horizon.clone());

        // All Verblunsky coefficients vanish.
        let gamma = extract(&m, &horizon).unwrap().gamma;
        for word in shortlex_range(&horizon) {
            worst = worst.max(gamma.gamma(&word).unwrap().norm());
        }

        // Every multi-Toeplitz determinant is one.
        for word in shortlex_range(&horizon) {
            worst = worst.max((m.determinant(&word).unwrap() - 1.0).abs());
        }

        // Gram-Schmidt returns the monomials themselves.
        let family = gram_schmidt(&m, &horizon).unwrap();
        let n = family.len();
        worst = worst.max((family.coeff_matrix() - CMatrix::identity(n, n)).norm());

        // The whole table is one.
        let table = szego_table(&m, 4).unwrap();
        assert!(!table.truncated);
        for row in &table.rows {
            for v in [
                row.item_i, row.item_ii, row.item_iii, row.item_iv, row.item_v, row.item_vi,
                row.item_vii, row.item_viii, row.item_ix,
            ] {
                worst = worst.max((v - 1.0).abs());
            }
        }
    }
    assert!(worst <= 1e-12, "free-measure degeneracy error {worst:.3e}");
    report("criterion 1 (free-measure degeneracy, d=1..3, horizon 4)", worst, 1.0, started);
}

#[test]
fn criterion_2_favard_round_trip() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(ROUND_TRIP_SEED);
    let horizon = Word::sigma(4, 2);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let g = VerblunskyFamily::random(2, horizon.clone(), 0.9, &mut rng);
        let m = moments_from_polys(&synthesize(&g, &horizon).unwrap()).unwrap();
        let recovered = extract(&m, &horizon).unwrap().gamma;
        for word in shortlex_range(&horizon) {
            let err = (recovered.gamma(&word).unwrap() - g.gamma(&word).unwrap()).norm();
            assert!(err <= 1e-8, "trial {trial}, word {word}: gamma error {err:.3e}");
            worst = worst.max(err);
        }
        // Dual direction: moments → coefficients → moments.
        let m2 = moments_from_polys(&synthesize(&recovered, &horizon).unwrap()).unwrap();
        for word in shortlex_range(&horizon) {
            let err = (m2.moment(&word).unwrap() - m.moment(&word).unwrap()).norm();
            assert!(err <= 1e-8, "trial {trial}, word {word}: moment error {err:.3e}");
            worst = worst.max(err);
        }
    }
    report("criterion 2 (Favard round trip, d=2, sigma(4), 100 families)", worst, 30.0, started);
}

#[test]
fn criterion_3_finite_truncation_szego_identities() {
    let started = Instant::now();
    let mut worst_list = 0.0f64;
    let mut worst_cross = 0.0f64;
    for trial in 0..20 {
        let (g, m) = random_measure(2, 4, 0.8, SZEGO_SEED + trial);
        let table = szego_table(&m, 4).unwrap();
        assert!(!table.truncated);
        for row in &table.rows {
            assert!(row.res_first <= 1e-8, "trial {trial} n={}: first-list residual {:.3e}", row.n, row.res_first);
            assert!(row.res_second <= 1e-8, "trial {trial} n={}: second-list residual {:.3e}", row.n, row.res_second);
            worst_list = worst_list.max(row.res_first.max(row.res_second));

            // Cross-list partial-product identity: item_v equals item_iii
            // times the off-σ-line defect product.
            let mut off_line = 1.0f64;
            for word in shortlex_range(&Word::sigma(row.n, 2)) {
                if !word.letters().iter().all(|&l| l == 2) {
                    off_line *= 1.0 - g.gamma(&word).unwrap().norm_sqr();
                }
            }
            let dev = (row.item_v - row.item_iii * off_line).abs();
            assert!(dev <= 1e-9, "trial {trial} n={}: cross-list deviation {dev:.3e}", row.n);
            worst_cross = worst_cross.max(dev);
        }
    }
    report(
        "criterion 3 (finite-n Szego identities, 20 measures, d=2, n<=4)",
        worst_list.max(worst_cross),
        60.0,
        started,
    );
}

#[test]
fn criterion_4_univariate_classical_agreement() {
    let started = Instant::now();
    let density = opuc::bernstein_szego_density(0.5);

    // Order 8: pipeline extraction against the independent Toeplitz solve.
    let seq = opuc::quadrature_moments(&density, 8, 512).unwrap();
    let oracle = seq.levinson_verblunsky().unwrap();
    let m = seq.to_moment_family().unwrap();
    let pipeline = extract(&m, &Word::sigma(8, 1)).unwrap().gamma;
    let mut worst = 0.0f64;
    for (j, o) in oracle.iter().enumerate() {
        let p = pipeline.gamma(&Word::sigma(j + 1, 1)).unwrap();
        worst = worst.max((o - p).norm());
    }
    assert!(worst <= 1e-8, "oracle vs pipeline deviation {worst:.3e}");

    // Order 30: truncated defect product against exp(∫ log w dθ/2π).
    let seq30 = opuc::quadrature_moments(&density, 30, 512).unwrap();
    let m30 = seq30.to_moment_family().unwrap();
    let gamma30 = extract(&m30, &Word::sigma(30, 1)).unwrap().gamma;
    let product = gamma30.product_and_sum(&Word::sigma(30, 1)).unwrap().partial_product;
    let entropy = opuc::szego_integral(&density, 512);
    let dev = (product - entropy).abs();
    assert!(dev <= 1e-3, "Szego product vs entropy integral: {dev:.3e}");
    report(
        "criterion 4 (classical d=1 agreement, Bernstein-Szego a=0.5)",
        worst.max(dev),
        5.0,
        started,
    );
}

#[test]
fn criterion_5_christoffel_minimality_and_monotonicity() {
    let started = Instant::now();
    let (_, m) = random_measure(2, 5, 0.7, CHRISTOFFEL_SEED);
    let family = gram_schmidt(&m, &Word::sigma(5, 2)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(CHRISTOFFEL_SEED ^ 0xffff);
    let points = [
        MatrixTuple::scalar_zero(2),
        zeros::sample_tuple(SampleKind::Interior(0.8), 2, 2, CHRISTOFFEL_SEED),
    ];
    let mut worst = 0.0f64;

    // Loewner minimality over 200 random admissible polynomials.
    for trial in 0..200 {
        let a = &points[trial % 2];
        let n = 1 + trial % 3;
        let lambda = christoffel_approx(&family, n, a).unwrap();
        let q = random_admissible(2, n, a, &mut rng).unwrap();
        let value = quadratic_functional(&m, &q).unwrap();
        let gap = min_eigenvalue(&(&value - &lambda));
        assert!(gap >= -1e-8, "trial {trial}: functional below Lambda by {gap:.3e}");
        worst = worst.max((-gap).max(0.0));

        // The explicit minimiser attains the bound.
        let q_min = minimizer_q(&family, n, a).unwrap();
        let attained = quadratic_functional(&m, &q_min).unwrap();
        let dev = (&attained - &lambda).norm();
        assert!(dev <= 1e-9, "trial {trial}: minimiser misses Lambda by {dev:.3e}");
        worst = worst.max(dev);
    }

    // Monotone decrease along n ≤ 5.
    for a in &points {
        let mut prev: Option<CMatrix> = None;
        for n in 0..=5 {
            let lambda = christoffel_approx(&family, n, a).unwrap();
            if let Some(p) = &prev {
                let drop = min_eigenvalue(&(p - &lambda));
                assert!(drop >= -1e-10, "Lambda increased at n={n}: {drop:.3e}");
                worst = worst.max((-drop).max(0.0));
            }
            prev = Some(lambda);
        }
    }
    report(
        "criterion 5 (Christoffel minimality + monotonicity, 200 polynomials)",
        worst,
        60.0,
        started,
    );
}

#[test]
fn criterion_6_divergence_decay() {
    let started = Instant::now();
    let horizon = Word::sigma(4, 2);
    let g = half_family(2, &horizon);
    let m = moments_from_polys(&synthesize(&g, &horizon).unwrap()).unwrap();
    let limit = christoffel_function(&m, &MatrixTuple::scalar_zero(2), 1e-8, 4).unwrap();
    let mut worst = 0.0f64;
    let mut prev = f64::INFINITY;
    for (n, lambda) in limit.trace.iter().enumerate() {
        let expected = 0.75f64.powi((words_up_to_length(n, 2).unwrap() - 1) as i32);
        let value = lambda[(0, 0)].re;
        worst = worst.max((value - expected).abs());
        assert!(value < prev || n == 0, "Lambda_n(0) not strictly decreasing at n={n}");
        prev = value;
    }
    assert!(worst <= 1e-9, "decay profile error {worst:.3e}");
    assert_eq!(limit.outcome, LimitOutcome::DecayedToZero);
    report("criterion 6 (divergence decay, gamma=0.5 everywhere, d=2)", worst, 10.0, started);
}

#[test]
fn criterion_7_zeros_theorem_sweep() {
    let started = Instant::now();
    let mut worst_gap = 0.0f64;
    let mut worst_residual = 0.0f64;
    for d in 1..=2u8 {
        let horizon = Word::sigma(3, d);
        let mut rng = ChaCha8Rng::seed_from_u64(ZEROS_SEED + d as u64);
        let g = VerblunskyFamily::random(d, horizon.clone(), 0.7, &mut rng);
        let pair = synthesize(&g, &horizon).unwrap();
        for k in 1..=3usize {
            for n in 1..=3usize {
                for sample in 0..100u64 {
                    let seed = ZEROS_SEED ^ sample.wrapping_mul(0x9e3779b97f4a7c15);
                    let zi = zeros::sample_tuple(SampleKind::Interior(0.9), k, d, seed);
                    let mi = zeros::reverse_form(&pair, n, &zi).unwrap();
                    assert!(mi.min_eig > 0.0, "interior reverse form singular (d={d} k={k} n={n})");

                    let ze = zeros::sample_tuple(SampleKind::Exterior(1.5), k, d, seed);
                    let se = zeros::level_form(&pair, n, &ze).unwrap();
                    assert!(se.min_eig > 0.0, "exterior level form singular (d={d} k={k} n={n})");

                    let zb = zeros::sample_tuple(SampleKind::Boundary, k, d, seed);
                    let mb = zeros::reverse_form(&pair, n, &zb).unwrap();
                    let sb = zeros::level_form(&pair, n, &zb).unwrap();
                    let gap = (&mb.matrix - &sb.matrix).norm() / mb.matrix.norm();
                    assert!(gap <= 1e-8, "boundary gap {gap:.3e} (d={d} k={k} n={n})");
                    assert!(mb.min_eig > 0.0, "boundary form singular (d={d} k={k} n={n})");
                    worst_gap = worst_gap.max(gap);
                }
            }
        }
        // Summation-formula residual on 50 random (Z, W) pairs.
        for sample in 0..50u64 {
            let k = 1 + (sample as usize) % 3;
            let n = 1 + (sample as usize) % 3;
            let z = zeros::sample_tuple(SampleKind::Interior(0.9), k, d, 31 + sample);
            let w = zeros::sample_tuple(SampleKind::Exterior(1.5), k, d, 97 + sample);
            let res = zeros::summation_residual(&pair, n, &z, &w).unwrap();
            assert!(res <= 1e-8, "summation residual {res:.3e} (d={d} k={k} n={n})");
            worst_residual = worst_residual.max(res);
        }
    }
    report(
        "criterion 7 (zeros theorem sweep, 100 samples per class and cell)",
        worst_gap.max(worst_residual),
        120.0,
        started,
    );
}

#[test]
fn criterion_8_multi_toeplitz_axiom_regression() {
    let started = Instant::now();
    // The same kernels the other criteria materialise, rebuilt from the
    // same seeds, plus the free measures.
    let mut measures: Vec<MomentFamily> = Vec::new();
    for d in 1..=3u8 {
        measures.push(MomentFamily::free(d, Word::sigma(4, d)));
    }
    {
        let mut rng = ChaCha8Rng::seed_from_u64(ROUND_TRIP_SEED);
        let horizon = Word::sigma(4, 2);
        for _ in 0..10 {
            let g = VerblunskyFamily::random(2, horizon.clone(), 0.9, &mut rng);
            measures.push(moments_from_polys(&synthesize(&g, &horizon).unwrap()).unwrap());
        }
    }
    for trial in 0..20 {
        measures.push(random_measure(2, 4, 0.8, SZEGO_SEED + trial).1);
    }
    measures.push(random_measure(2, 5, 0.7, CHRISTOFFEL_SEED).1);
    measures.push(
        opuc::quadrature_moments(opuc::bernstein_szego_density(0.5), 8, 512)
            .unwrap()
            .to_moment_family()
            .unwrap(),
    );
    {
        let horizon = Word::sigma(4, 2);
        let g = half_family(2, &horizon);
        measures.push(moments_from_polys(&synthesize(&g, &horizon).unwrap()).unwrap());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for (i, m) in measures.iter().enumerate() {
        let reportx = m.axiom_spot_check(200, &mut rng).unwrap();
        assert_eq!(reportx.structural_zero_violations, 0, "measure {i}: structural zeros violated");
        assert!(reportx.orthogonal_pairs > 0 || m.alphabet() == 1);
        assert!(
            reportx.max_translation_dev <= 1e-12,
            "measure {i}: translation invariance dev {:.3e}",
            reportx.max_translation_dev
        );
        assert!(
            reportx.max_hermitian_dev <= 1e-12,
            "measure {i}: Hermitian symmetry dev {:.3e}",
            reportx.max_hermitian_dev
        );
        worst = worst.max(reportx.max_translation_dev.max(reportx.max_hermitian_dev));
    }
    report(
        "criterion 8 (multi-Toeplitz axiom regression on all suite kernels)",
        worst,
        10.0,
        started,
    );
}
