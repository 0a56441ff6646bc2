use proptest::prelude::*;

use scrnn::metrics::{aae, aed, angular_errors, mae, rescale};

proptest! {
    #[test]
    fn rescale_is_a_ring_distance(d in -1e4f64..1e4, k in -20i32..20) {
        let r = rescale(d);
        prop_assert!((0.0..=180.0).contains(&r));
        prop_assert!((rescale(-d) - r).abs() < 1e-9);
        prop_assert!((rescale(d + 360.0 * k as f64) - r).abs() < 1e-7);
    }

    #[test]
    fn mae_and_aae_lie_within_the_error_range(pairs in prop::collection::vec((0.0f64..360.0, 0.0f64..360.0), 1..50)) {
        let (dec, truth): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let errs = angular_errors(&dec, &truth).unwrap();
        let lo = errs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = errs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for v in [mae(&dec, &truth).unwrap(), aae(&dec, &truth).unwrap()] {
            prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
        }
    }

    #[test]
    fn aed_is_translation_invariant(
        pts in prop::collection::vec(((-100.0f64..100.0, -100.0f64..100.0), (-100.0f64..100.0, -100.0f64..100.0)), 1..40),
        shift in (-500.0f64..500.0, -500.0f64..500.0),
    ) {
        let dec: Vec<[f64; 2]> = pts.iter().map(|p| [p.0 .0, p.0 .1]).collect();
        let truth: Vec<[f64; 2]> = pts.iter().map(|p| [p.1 .0, p.1 .1]).collect();
        let mv = |v: &[[f64; 2]]| v.iter().map(|p| [p[0] + shift.0, p[1] + shift.1]).collect::<Vec<_>>();
        let a = aed(&dec, &truth).unwrap();
        prop_assert!((aed(&mv(&dec), &mv(&truth)).unwrap() - a).abs() < 1e-9);
    }
}

#[test]
fn even_length_median_averages_the_middle_pair() {
    assert_eq!(mae(&[10.0, 20.0, 30.0, 40.0], &[0.0; 4]).unwrap(), 25.0);
}
