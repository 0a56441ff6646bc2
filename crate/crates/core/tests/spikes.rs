use proptest::prelude::*;

use scrnn::spikes::{bin_spikes, binarize_rows, threshold_count, LabelStream, SpikeCountMatrix, SpikeDataset};

fn dataset(trains: Vec<Vec<f64>>, t_end: f64) -> SpikeDataset {
    let labels = LabelStream::Angles {
        times: vec![0.0, t_end],
        degrees: vec![0.0, 90.0],
    };
    SpikeDataset::new(trains, labels, 0.0, t_end).unwrap()
}

fn trains() -> impl Strategy<Value = (Vec<Vec<f64>>, f64)> {
    (1.0f64..20.0).prop_flat_map(|t_end| {
        let train = prop::collection::vec(0.0..=t_end, 0..40).prop_map(|mut v| {
            v.sort_by(f64::total_cmp);
            v
        });
        (prop::collection::vec(train, 1..6), Just(t_end))
    })
}

proptest! {
    #[test]
    fn binning_conserves_spikes((trains, t_end) in trains(), t_bin in 0.05f64..1.0) {
        prop_assume!(t_end >= t_bin);
        let d = dataset(trains.clone(), t_end);
        let a = bin_spikes(&d, t_bin).unwrap();
        for (i, train) in trains.iter().enumerate() {
            let binned: u64 = a.row(i).iter().map(|&c| u64::from(c)).sum();
            prop_assert_eq!(binned as usize + a.discarded()[i], train.len());
        }
        for j in 0..a.n_bins() {
            let (lo, hi) = a.bin_edges(j);
            let column: u32 = a.column(j).iter().sum();
            // bins are half-open, with edge snapping for representation error
            let inside = trains
                .iter()
                .flatten()
                .filter(|&&t| t >= lo - 1e-9 * t_bin && t < hi - 1e-9 * t_bin)
                .count();
            prop_assert_eq!(column as usize, inside);
        }
    }

    #[test]
    fn binarization_is_minimal(row in prop::collection::vec(0u32..30, 1..25), p in 0.01f64..=1.0) {
        let m = threshold_count(&row, p);
        let total: u64 = row.iter().map(|&c| u64::from(c)).sum();
        let mut sorted = row.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let top = |k: usize| sorted[..k].iter().map(|&c| u64::from(c)).sum::<u64>() as f64;
        if total == 0 {
            prop_assert_eq!(m, 0);
        } else {
            prop_assert!(top(m) >= p * total as f64 - 1e-9 * total as f64);
            for k in 0..m {
                prop_assert!(top(k) < p * total as f64 + 1e-9 * total as f64);
            }
        }
    }

    #[test]
    fn binarization_ignores_row_scale(rows in prop::collection::vec(prop::collection::vec(0u32..20, 12), 1..5), c in 1u32..9, p in 0.05f64..=1.0) {
        let a = SpikeCountMatrix::from_rows(&rows, 0.0, 0.1).unwrap();
        let scaled: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|&v| v * c).collect()).collect();
        let b = SpikeCountMatrix::from_rows(&scaled, 0.0, 0.1).unwrap();
        prop_assert_eq!(binarize_rows(&a, p).unwrap(), binarize_rows(&b, p).unwrap());
    }
}

#[test]
fn spikes_at_the_end_fall_in_the_discarded_partial_bin() {
    let d = dataset(vec![vec![0.0, 0.1, 0.95, 1.0]], 1.0);
    let a = bin_spikes(&d, 0.3).unwrap();
    assert_eq!(a.n_bins(), 3);
    assert_eq!(a.row(0), &[2, 0, 0]);
    assert_eq!(a.discarded(), &[2]);
}
