use std::f64::consts::PI;

use scrnn::spikes::{bin_labels, bin_spikes, LabelSeries, LabelStream};
use scrnn::synth::{simulate_grid_cells, simulate_hd, GridSimConfig, HdSimConfig};

/// Modified Bessel function of the first kind, order zero, by its power series.
fn bessel_i0(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= (x / 2.0) * (x / 2.0) / (k * k) as f64;
        sum += term;
    }
    sum
}

fn ring_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

#[test]
fn hd_population_rate_matches_expectation() {
    let cfg = HdSimConfig::default();
    let d = simulate_hd(&cfg).unwrap();
    // evenly spaced von Mises curves sum to a nearly heading-independent population rate
    let per_cell = cfg.peak_rate_hz * (-cfg.kappa).exp() * bessel_i0(cfg.kappa);
    let expected = per_cell * cfg.n_cells as f64;
    let observed = d.total_spikes() as f64 / cfg.duration_s;
    assert!(
        (observed / expected - 1.0).abs() < 0.05,
        "observed {observed:.2} Hz, expected {expected:.2} Hz"
    );
}

#[test]
fn grid_population_rate_matches_trajectory_expectation() {
    let cfg = GridSimConfig::default();
    let (d, cells) = simulate_grid_cells(&cfg).unwrap();
    let LabelStream::Positions { xy, .. } = d.labels() else {
        panic!("grid labels")
    };
    let mut expected = 0.0;
    for c in &cells {
        let mag = 4.0 * PI / (3f64.sqrt() * c.scale_cm);
        let rate = |p: &[f64; 2]| {
            let s: f64 = (0..3)
                .map(|i| {
                    let a = (c.orientation_deg - 30.0 + 60.0 * i as f64).to_radians();
                    (mag * (a.cos() * (p[0] - c.offset[0]) + a.sin() * (p[1] - c.offset[1]))).cos()
                })
                .sum();
            cfg.peak_rate_hz * (s / 3.0).max(0.0)
        };
        expected += xy.iter().map(rate).sum::<f64>() / xy.len() as f64;
    }
    let observed = d.total_spikes() as f64 / cfg.duration_s;
    assert!(
        (observed / expected - 1.0).abs() < 0.05,
        "observed {observed:.2} Hz, expected {expected:.2} Hz"
    );
}

#[test]
fn hd_bins_are_decodable_from_the_most_active_cell() {
    let cfg = HdSimConfig::default();
    let d = simulate_hd(&cfg).unwrap();
    let a = bin_spikes(&d, 0.1).unwrap();
    let LabelSeries::Angles(truth) = bin_labels(&d, 0.1).unwrap() else {
        panic!("hd labels")
    };
    let preferred = cfg.preferred_directions();
    // half-width at half-maximum of exp(kappa (cos d - 1))
    let hwhm = (1.0 + 0.5f64.ln() / cfg.kappa).acos().to_degrees();
    let (mut hits, mut total) = (0, 0);
    for (j, &angle) in truth.iter().enumerate() {
        let col = a.column(j);
        let peak = *col.iter().max().unwrap();
        if peak == 0 {
            continue;
        }
        let top = col.iter().position(|&c| c == peak).unwrap();
        total += 1;
        if ring_distance(preferred[top], angle) <= hwhm {
            hits += 1;
        }
    }
    assert!(hits * 5 >= total * 4, "{hits} of {total} bins within {hwhm:.1} deg");
}
