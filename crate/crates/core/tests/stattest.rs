use epitrack_core::stattest::special::{
    beta_inc, erfc, gamma_p, gamma_q, ln_gamma, normal_cdf, normal_quantile,
};
use epitrack_core::stattest::{
    chi_square_independence, f_test_variance, qq_points, welch_t_test, ContingencyTable,
    DegreesOfFreedom, Distribution, StatError,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor, StudentsT};

const ORACLE_TOL: f64 = 1e-10;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn normal_sample(seed: u64, n: usize, sd: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Normal::new(0.0, sd).unwrap();
    (0..n).map(|_| dist.sample(&mut rng)).collect()
}

#[test]
fn special_functions_match_reference_library() {
    for &x in &[0.1, 0.5, 1.0, 2.5, 7.3, 25.0, 120.0] {
        assert!(close(
            ln_gamma(x),
            statrs::function::gamma::ln_gamma(x),
            1e-10 * x.max(1.0)
        ));
    }
    for &a in &[0.5, 1.0, 3.0, 10.0, 40.0] {
        for &x in &[0.01, 0.5, 2.0, 9.0, 30.0, 60.0] {
            let want = statrs::function::gamma::gamma_lr(a, x);
            assert!(close(gamma_p(a, x), want, ORACLE_TOL), "P({a},{x})");
            assert!(close(gamma_q(a, x), 1.0 - want, ORACLE_TOL), "Q({a},{x})");
        }
    }
    for &(a, b) in &[
        (0.5, 0.5),
        (1.0, 3.0),
        (2.5, 7.0),
        (30.0, 2.0),
        (100.0, 150.0),
    ] {
        for &x in &[0.0, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0] {
            let want = statrs::function::beta::beta_reg(a, b, x);
            assert!(close(beta_inc(a, b, x), want, ORACLE_TOL), "I({a},{b},{x})");
        }
    }
    for &x in &[-3.0, -0.5, 0.0, 0.3, 1.7, 4.0] {
        assert!(close(erfc(x), statrs::function::erf::erfc(x), ORACLE_TOL));
    }
}

#[test]
fn cdfs_match_reference_library() {
    let xs = [-8.0, -2.5, -0.7, 0.0, 0.4, 1.0, 2.6657, 5.0, 13.0, 40.0];
    for df in [1.0, 2.5, 10.0, 30.0, 200.0] {
        let t = StudentsT::new(0.0, 1.0, df).unwrap();
        let chi = ChiSquared::new(df).unwrap();
        for &x in &xs {
            let ours = Distribution::StudentT { df }.cdf(x).unwrap();
            assert!(close(ours, t.cdf(x), ORACLE_TOL), "t({df}) at {x}");
            let ours = Distribution::ChiSquare { df }.cdf(x).unwrap();
            assert!(close(ours, chi.cdf(x), ORACLE_TOL), "chi2({df}) at {x}");
        }
    }
    for (d1, d2) in [(1.0, 1.0), (3.0, 12.0), (199.0, 199.0), (10.0, 2.0)] {
        let f = FisherSnedecor::new(d1, d2).unwrap();
        for &x in &xs {
            let ours = Distribution::F { df1: d1, df2: d2 }.cdf(x).unwrap();
            assert!(close(ours, f.cdf(x), ORACLE_TOL), "F({d1},{d2}) at {x}");
        }
    }
    let norm = statrs::distribution::Normal::new(0.0, 1.0).unwrap();
    for &x in &xs {
        assert!(close(normal_cdf(x), norm.cdf(x), ORACLE_TOL));
    }
}

#[test]
fn cdf_examples() {
    assert_eq!(Distribution::Normal.cdf(0.0).unwrap(), 0.5);
    let c = Distribution::ChiSquare { df: 1.0 }.cdf(2.6657).unwrap();
    assert!(close(c, 0.8975, 5e-5));
    assert!(matches!(
        Distribution::StudentT { df: 0.0 }.cdf(1.0),
        Err(StatError::InvalidParameter(_))
    ));
    assert!(Distribution::F {
        df1: 2.0,
        df2: -1.0
    }
    .cdf(1.0)
    .is_err());
}

#[test]
fn inverse_normal_round_trips() {
    for i in 1..1000 {
        let p = i as f64 / 1000.0;
        assert!(close(normal_cdf(normal_quantile(p)), p, 1e-14));
    }
    assert!(close(
        normal_quantile(1.0 / 6.0),
        -0.967_421_566_101_701,
        1e-12
    ));
}

#[test]
fn f_test_detects_doubled_spread() {
    let x = normal_sample(41, 200, 2.0);
    let y = normal_sample(42, 200, 1.0);
    let r = f_test_variance(&x, &y).unwrap();
    assert!((r.statistic - 4.0).abs() < 1.0, "F = {}", r.statistic);
    assert!(r.p_value < 0.001);
    assert_eq!(r.df, DegreesOfFreedom::Pair(199.0, 199.0));
    assert!(r.reject);
}

#[test]
fn f_test_of_identical_samples() {
    let x = normal_sample(43, 30, 1.0);
    let r = f_test_variance(&x, &x).unwrap();
    assert_eq!(r.statistic, 1.0);
    assert_eq!(r.p_value, 1.0);
    assert_eq!(
        f_test_variance(&[1.0, 1.0], &x),
        Err(StatError::ZeroVariance)
    );
}

#[test]
fn welch_of_identical_samples_and_errors() {
    let x = normal_sample(44, 25, 1.0);
    let r = welch_t_test(&x, &x).unwrap();
    assert_eq!(r.statistic, 0.0);
    assert_eq!(r.p_value, 1.0);
    assert!(welch_t_test(&[2.0, 2.0], &[3.0, 3.0]).is_err());
    assert!(matches!(
        welch_t_test(&[1.0], &x),
        Err(StatError::TooFewObservations { .. })
    ));
}

#[test]
fn welch_equal_means_with_inflated_points() {
    let x = [1.0, 2.0, 3.0, 4.0, 5.0, 20.0];
    let y = [7.0, 7.0, 7.0, 7.0, 7.0, 0.0];
    // both means are 35/6
    let r = welch_t_test(&x, &y).unwrap();
    assert!(r.statistic.abs() < 1e-12);
}

#[test]
fn chi_square_table_reproduction() {
    let t = ContingencyTable::new(vec![vec![299, 132], vec![213, 71]]).unwrap();
    let r = chi_square_independence(&t).unwrap();
    assert!((r.statistic - 2.6657).abs() <= 5e-4);
    assert!((r.p_value - 0.1025).abs() <= 5e-4);
    assert_eq!(r.df, DegreesOfFreedom::Single(1.0));
    assert!(!r.reject);
}

#[test]
fn chi_square_errors() {
    let t = ContingencyTable::new(vec![vec![0, 0], vec![3, 4]]).unwrap();
    assert_eq!(chi_square_independence(&t), Err(StatError::ZeroMarginal));
    assert_eq!(
        ContingencyTable::new(vec![vec![1, 2], vec![3]]),
        Err(StatError::RaggedTable)
    );
}

#[test]
fn qq_points_for_three_values() {
    let pts = qq_points(&[3.0, 1.0, 2.0]).unwrap();
    assert!(close(pts[0].theoretical, -0.967_421_566_101_701, 1e-9));
    assert_eq!(pts[1].theoretical, 0.0);
    assert!(close(pts[2].theoretical, 0.967_421_566_101_701, 1e-9));
    assert_eq!(pts[1].sample, 0.0);
    assert_eq!(qq_points(&[1.0, 1.0, 1.0]), Err(StatError::ZeroVariance));
}

#[test]
fn qq_slope_of_normal_sample() {
    let pts = qq_points(&normal_sample(45, 1000, 3.0)).unwrap();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.theoretical).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.sample).sum::<f64>() / n;
    let sxy: f64 = pts
        .iter()
        .map(|p| (p.theoretical - mx) * (p.sample - my))
        .sum();
    let sxx: f64 = pts.iter().map(|p| (p.theoretical - mx).powi(2)).sum();
    let slope = sxy / sxx;
    assert!((0.95..=1.05).contains(&slope), "slope {slope}");
}

fn brute_force_chi_square(counts: &[Vec<u64>]) -> f64 {
    let r = counts.len();
    let c = counts[0].len();
    let n: f64 = counts.iter().flatten().map(|&v| v as f64).sum();
    let mut stat = 0.0;
    for i in 0..r {
        for j in 0..c {
            let ri: f64 = (0..c).map(|k| counts[i][k] as f64).sum();
            let cj: f64 = (0..r).map(|k| counts[k][j] as f64).sum();
            let e = ri * cj / n;
            stat += (counts[i][j] as f64 - e).powi(2) / e;
        }
    }
    stat
}

fn table_strategy() -> impl Strategy<Value = Vec<Vec<u64>>> {
    (2usize..5, 2usize..5)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(1u64..500, c), r))
}

fn sample_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, 2..40).prop_filter("needs spread", |v| {
        v.iter().any(|x| (x - v[0]).abs() > 1e-6)
    })
}

proptest! {
    #[test]
    fn cdfs_monotone_and_bounded(df in 0.5f64..80.0, a in -30.0f64..30.0, b in -30.0f64..30.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for dist in [
            Distribution::Normal,
            Distribution::StudentT { df },
            Distribution::ChiSquare { df },
            Distribution::F { df1: df, df2: df + 1.0 },
        ] {
            let (cl, ch) = (dist.cdf(lo).unwrap(), dist.cdf(hi).unwrap());
            prop_assert!((0.0..=1.0).contains(&cl) && (0.0..=1.0).contains(&ch));
            prop_assert!(cl <= ch + 1e-15);
        }
        let t = Distribution::StudentT { df };
        prop_assert!((t.cdf(-a).unwrap() - (1.0 - t.cdf(a).unwrap())).abs() < 1e-12);
        prop_assert!((normal_cdf(-a) - (1.0 - normal_cdf(a))).abs() < 1e-12);
    }

    #[test]
    fn chi_square_matches_double_loop(counts in table_strategy()) {
        let t = ContingencyTable::new(counts.clone()).unwrap();
        let r = chi_square_independence(&t).unwrap();
        let want = brute_force_chi_square(&counts);
        prop_assert!((r.statistic - want).abs() <= 1e-12 * want.max(1.0));
        prop_assert_eq!(r.df, DegreesOfFreedom::Single(((counts.len() - 1) * (counts[0].len() - 1)) as f64));
    }

    #[test]
    fn chi_square_permutation_invariant(counts in table_strategy()) {
        let base = chi_square_independence(&ContingencyTable::new(counts.clone()).unwrap()).unwrap();
        let mut rows = counts.clone();
        rows.reverse();
        let by_rows = chi_square_independence(&ContingencyTable::new(rows).unwrap()).unwrap();
        let cols: Vec<Vec<u64>> = counts.iter().map(|r| r.iter().rev().copied().collect()).collect();
        let by_cols = chi_square_independence(&ContingencyTable::new(cols).unwrap()).unwrap();
        prop_assert!((base.statistic - by_rows.statistic).abs() <= 1e-10 * base.statistic.max(1.0));
        prop_assert!((base.statistic - by_cols.statistic).abs() <= 1e-10 * base.statistic.max(1.0));
    }

    #[test]
    fn proportional_rows_are_independent(row in prop::collection::vec(1u64..100, 2..6), k in 2u64..6) {
        let t = ContingencyTable::new(vec![row.clone(), row.iter().map(|v| v * k).collect()]).unwrap();
        let r = chi_square_independence(&t).unwrap();
        prop_assert!(r.statistic.abs() < 1e-9);
        prop_assert!((r.p_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn welch_antisymmetric(x in sample_strategy(), y in sample_strategy()) {
        let a = welch_t_test(&x, &y).unwrap();
        let b = welch_t_test(&y, &x).unwrap();
        prop_assert_eq!(a.statistic, -b.statistic);
        prop_assert_eq!(a.p_value, b.p_value);
        prop_assert_eq!(a.df, b.df);
        prop_assert_eq!(a.reject, a.p_value < a.alpha);
    }

    #[test]
    fn welch_df_collapses_for_equal_designs(x in sample_strategy(), shift in -50.0f64..50.0) {
        // shifted copy has the same n and the same variance
        let y: Vec<f64> = x.iter().map(|v| v + shift).collect();
        let r = welch_t_test(&x, &y).unwrap();
        let want = 2.0 * x.len() as f64 - 2.0;
        match r.df {
            DegreesOfFreedom::Single(df) => prop_assert!((df - want).abs() <= 1e-9 * want),
            other => prop_assert!(false, "unexpected df {:?}", other),
        }
    }

    #[test]
    fn f_test_reciprocal_and_two_sided(x in sample_strategy(), y in sample_strategy()) {
        let a = f_test_variance(&x, &y).unwrap();
        let b = f_test_variance(&y, &x).unwrap();
        prop_assert!((a.statistic * b.statistic - 1.0).abs() < 1e-12);
        prop_assert!((a.p_value - b.p_value).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&a.p_value));
    }

    #[test]
    fn reject_tracks_alpha(x in sample_strategy(), y in sample_strategy(), alpha in 0.001f64..0.5) {
        let r = welch_t_test(&x, &y).unwrap().with_alpha(alpha);
        prop_assert_eq!(r.reject, r.p_value < alpha);
    }
}
