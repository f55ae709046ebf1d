use mtkit::metrics::Metric;
use mtkit::stats::{
    descriptive, icc_two_way_absolute, t_test, wilcoxon, wilcoxon_matched_pairs, ScoreTable, StatsError, TTestMode,
    WilcoxonMethod,
};
use mtkit_oracles::stats as oracle;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn icc_fixture() -> Vec<Vec<f64>> {
    include_str!("fixtures/icc_4x3.txt")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn column_means_of_the_bundled_tables() {
    let (a, b) = (ScoreTable::pl_en(), ScoreTable::en_pl());
    let mean = |t: &ScoreTable, m| descriptive(&t.column(m)).unwrap().mean;
    assert!((mean(&a, Metric::Meteor) - 82.72).abs() <= 0.01);
    assert!((mean(&b, Metric::Meteor) - 78.97).abs() <= 0.01);
    assert!((mean(&b, Metric::Nist) - 67.58).abs() <= 0.02);
    assert!((mean(&a, Metric::Nist) - 70.58).abs() <= 0.10);
    assert!((mean(&a, Metric::Bleu) - 71.472142857142857).abs() < 1e-9);
}

#[test]
fn ter_difference_between_directions() {
    let r = t_test(
        &ScoreTable::pl_en().column(Metric::Ter),
        &ScoreTable::en_pl().column(Metric::Ter),
        TTestMode::UnpairedPooled,
        0.05,
    )
    .unwrap();
    assert!((r.effect - 2.50).abs() <= 0.01);
    assert_eq!(r.degrees_of_freedom, Some(27.0));
    assert!((r.statistic - 2.2558).abs() < 1e-4);
    assert!((r.p_value - 0.0324).abs() < 1e-4);
    assert!((r.standard_error.unwrap() - 1.1085).abs() < 1e-4);
    assert!(r.significant);
}

#[test]
fn wilcoxon_findings_per_direction() {
    for table in [ScoreTable::pl_en(), ScoreTable::en_pl()] {
        let bleu = table.column(Metric::Bleu);
        for m in [Metric::Nist, Metric::Meteor, Metric::Ter] {
            let other = table.column(m);
            let r = wilcoxon_matched_pairs(&bleu, &other, 0.05).unwrap();
            assert_eq!(r.test, "wilcoxon-exact");
            assert_eq!(r.significant, m != Metric::Ter, "{} bleu vs {m}: p = {}", table.name(), r.p_value);
            // the table has two decimals; rounding makes float ties exact for the oracle
            let diffs: Vec<f64> =
                bleu.iter().zip(&other).map(|(a, b)| ((a - b) * 100.0).round() / 100.0).filter(|d| *d != 0.0).collect();
            assert!((r.p_value - oracle::wilcoxon_exact_p(&diffs)).abs() < 1e-12);
        }
    }
}

#[test]
fn icc_fixture_matches_hand_anova() {
    let r = icc_two_way_absolute(&icc_fixture()).unwrap();
    assert!((r.ms_rows - 17.0 / 3.0).abs() < 1e-9);
    assert!((r.ms_columns - 31.0).abs() < 1e-9);
    assert!((r.ms_error - 2.0 / 3.0).abs() < 1e-9);
    assert!((r.icc_single - 20.0 / 119.0).abs() < 1e-9);
    assert!((r.icc_average - 20.0 / 53.0).abs() < 1e-9);
}

#[test]
fn icc_matches_sums_of_squares_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let n = rng.gen_range(2..8);
        let k = rng.gen_range(2..5);
        let m: Vec<Vec<f64>> = (0..n).map(|_| (0..k).map(|_| rng.gen_range(0.0..100.0)).collect()).collect();
        let r = icc_two_way_absolute(&m).unwrap();
        let (s, a) = oracle::icc_a(&m);
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * y.abs().max(1.0);
        assert!(close(r.icc_single, s) && close(r.icc_average, a), "{m:?}: {r:?} vs {s} {a}");
        if r.icc_single >= 0.0 {
            assert!(r.icc_average >= r.icc_single);
        }
    }
}

#[test]
fn exact_wilcoxon_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let n = rng.gen_range(5..13);
        // coarse values so that ties occur
        let x: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..8))).collect();
        let y: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..8))).collect();
        let diffs: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).filter(|d| *d != 0.0).collect();
        match wilcoxon(&x, &y, WilcoxonMethod::Exact, 0.05) {
            Ok(r) => assert!((r.p_value - oracle::wilcoxon_exact_p(&diffs)).abs() < 1e-12),
            Err(e) => assert_eq!(e, StatsError::TooFewPairs(diffs.len())),
        }
    }
}

#[test]
fn normal_approximation_is_close_at_twenty() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let x: Vec<f64> = (0..20).map(|_| rng.gen_range(0.0..10.0)).collect();
        let y: Vec<f64> = (0..20).map(|_| rng.gen_range(0.0..10.0)).collect();
        let e = wilcoxon(&x, &y, WilcoxonMethod::Exact, 0.05).unwrap().p_value;
        let n = wilcoxon(&x, &y, WilcoxonMethod::Normal, 0.05).unwrap().p_value;
        assert!((e - n).abs() < 0.02, "{e} vs {n}");
    }
}

#[test]
fn larger_samples_use_the_normal_approximation() {
    let x: Vec<f64> = (0..30).map(f64::from).collect();
    let y: Vec<f64> = (0..30).map(|i| f64::from(i) + if i % 3 == 0 { 0.5 } else { -0.25 }).collect();
    assert_eq!(wilcoxon_matched_pairs(&x, &y, 0.05).unwrap().test, "wilcoxon-normal");
}

fn sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..100.0, 6..15)
}

proptest! {
    #[test]
    fn wilcoxon_is_shift_invariant(x in sample(), shift in -50.0f64..50.0) {
        let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v + (i as f64 * 1.37) % 5.0 - 2.0).collect();
        let base = wilcoxon_matched_pairs(&x, &y, 0.05);
        let xs: Vec<f64> = x.iter().map(|v| v + shift).collect();
        let ys: Vec<f64> = y.iter().map(|v| v + shift).collect();
        let shifted = wilcoxon_matched_pairs(&xs, &ys, 0.05);
        match (base, shifted) {
            (Ok(a), Ok(b)) => prop_assert!((a.p_value - b.p_value).abs() < 1e-12),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn t_test_is_antisymmetric(x in sample(), y in sample()) {
        for mode in [TTestMode::UnpairedPooled, TTestMode::Paired] {
            let n = x.len().min(y.len());
            let (a, b) = if mode == TTestMode::Paired { (&x[..n], &y[..n]) } else { (&x[..], &y[..]) };
            let fwd = t_test(a, b, mode, 0.05).unwrap();
            let back = t_test(b, a, mode, 0.05).unwrap();
            prop_assert!((fwd.effect + back.effect).abs() < 1e-9);
            prop_assert!((fwd.p_value - back.p_value).abs() < 1e-12);
            prop_assert_eq!(fwd.significant, fwd.p_value < 0.05);
        }
    }

    #[test]
    fn mean_of_concatenation_is_weighted(x in sample(), y in sample()) {
        let (a, b) = (descriptive(&x).unwrap(), descriptive(&y).unwrap());
        let all: Vec<f64> = x.iter().chain(&y).copied().collect();
        let whole = descriptive(&all).unwrap();
        let weighted = (a.mean * a.n as f64 + b.mean * b.n as f64) / (a.n + b.n) as f64;
        prop_assert!((whole.mean - weighted).abs() < 1e-9);
    }
}
