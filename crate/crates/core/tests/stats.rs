use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use psi_audit::stats::{
    cohen_kappa, icc_absolute_agreement, median_iqr, normal_quantile, power_sample_size, precision_recall, Confusion2x2,
    RaterMatrix,
};

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).unwrap()
}

/// Fisher-z sample size with the quantiles taken from statrs.
fn oracle_n(r: f64, alpha: f64, power: f64) -> u64 {
    let n = std_normal();
    let z = n.inverse_cdf(1.0 - alpha / 2.0) + n.inverse_cdf(power);
    let c = r.atanh();
    ((z / c).powi(2) + 3.0).ceil() as u64
}

#[test]
fn sample_sizes() {
    assert_eq!(power_sample_size(0.30, 0.05, 0.80).unwrap(), 85);
    let n = power_sample_size(0.25, 0.05, 0.80).unwrap();
    assert!((118..=125).contains(&n), "{n}");
    for r in [0.1, 0.2, 0.3, 0.4, 0.5, 0.7] {
        for power in [0.8, 0.9, 0.95] {
            assert_eq!(power_sample_size(r, 0.05, power).unwrap(), oracle_n(r, 0.05, power), "r={r} power={power}");
        }
    }
    assert!(power_sample_size(0.0, 0.05, 0.8).is_err());
    assert!(power_sample_size(0.3, 1.5, 0.8).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn quantile_agrees_with_statrs(p in 1e-8..(1.0 - 1e-8)) {
        let ours = normal_quantile(p).unwrap();
        let theirs = std_normal().inverse_cdf(p);
        prop_assert!((ours - theirs).abs() <= 1e-8 * (1.0 + theirs.abs()), "p={} {} vs {}", p, ours, theirs);
    }

    #[test]
    fn kappa_is_bounded_and_symmetric(tp in 0u64..200, fp in 0u64..200, fn_ in 0u64..200, tn in 0u64..200) {
        let c = Confusion2x2::new(tp, fp, fn_, tn);
        if let Ok(k) = cohen_kappa(&c) {
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&k));
            prop_assert!((cohen_kappa(&c.swapped()).unwrap() - k).abs() < 1e-12);
            // direct observed/expected agreement as an oracle
            let n = c.total() as f64;
            let po = (tp + tn) as f64 / n;
            let pe = ((tp + fp) as f64 * (tp + fn_) as f64 + (fn_ + tn) as f64 * (fp + tn) as f64) / (n * n);
            prop_assert!((k - (po - pe) / (1.0 - pe)).abs() < 1e-9);
        }
    }
}

#[test]
fn kappa_worked_example() {
    // observed 0.85, expected 0.5
    let k = cohen_kappa(&Confusion2x2::new(40, 5, 10, 45)).unwrap();
    assert!((k - 0.70).abs() < 1e-12, "{k}");
}

#[test]
fn precision_and_recall() {
    let (p, r) = precision_recall(&Confusion2x2::new(30, 10, 20, 40));
    assert_eq!((p, r), (Some(0.75), Some(0.6)));
    assert_eq!(precision_recall(&Confusion2x2::new(0, 0, 0, 9)), (None, None));
}

#[test]
fn icc_matches_exact_rational_values() {
    // six subjects rated by four judges; exact ICC(2,1) is 184/635 (about 0.29)
    let judges = RaterMatrix::new(vec![
        vec![9.0, 2.0, 5.0, 8.0],
        vec![6.0, 1.0, 3.0, 2.0],
        vec![8.0, 4.0, 6.0, 8.0],
        vec![7.0, 1.0, 2.0, 6.0],
        vec![10.0, 5.0, 6.0, 9.0],
        vec![6.0, 2.0, 4.0, 7.0],
    ])
    .unwrap();
    assert!((icc_absolute_agreement(&judges).unwrap() - 184.0 / 635.0).abs() < 1e-12);

    let pairs = RaterMatrix::new(vec![
        vec![1.0, 2.0],
        vec![2.0, 3.0],
        vec![3.0, 3.0],
        vec![4.0, 5.0],
        vec![5.0, 5.0],
    ])
    .unwrap();
    assert!((icc_absolute_agreement(&pairs).unwrap() - 20.0 / 23.0).abs() < 1e-12);
    assert!(RaterMatrix::new(vec![vec![1.0, 2.0], vec![3.0]]).is_err());
}

#[test]
fn quartiles_interpolate() {
    let (m, q1, q3) = median_iqr(&[4.0, 1.0, 3.0, 2.0]).unwrap();
    assert_eq!((m, q1, q3), (2.5, 1.75, 3.25));
    assert_eq!(median_iqr(&[7.0]).unwrap(), (7.0, 7.0, 7.0));
    assert!(median_iqr(&[]).is_err());
    assert!(median_iqr(&[1.0, f64::NAN]).is_err());
}
