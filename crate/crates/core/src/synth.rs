//! Synthetic head-direction and grid-cell populations.
//!
//! Both simulators draw a behavioral trajectory sampled at the label rate,
//! then generate inhomogeneous Poisson spike trains by thinning a homogeneous
//! process at the peak rate. A single seeded RNG stream is consumed in a fixed
//! order, so a configuration always reproduces the same dataset.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spikes::{angle_diff, wrap_degrees, LabelStream, SpikeDataset};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HdSimConfig {
    pub n_cells: usize,
    pub peak_rate_hz: f64,
    /// Von Mises concentration of the tuning curves.
    pub kappa: f64,
    /// Preferred directions in degrees; evenly spaced when absent.
    pub preferred_deg: Option<Vec<f64>>,
    /// Standard deviation of the heading change per label sample.
    pub step_std_deg: f64,
    pub duration_s: f64,
    pub label_rate_hz: f64,
    pub seed: u64,
}

impl Default for HdSimConfig {
    fn default() -> Self {
        Self {
            n_cells: 30,
            peak_rate_hz: 20.0,
            kappa: 4.0,
            preferred_deg: None,
            step_std_deg: 3.0,
            duration_s: 600.0,
            label_rate_hz: 50.0,
            seed: 7,
        }
    }
}

impl HdSimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.peak_rate_hz >= 0.0) {
            return Err(Error::InvalidArgument("peak rate must be non-negative".into()));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::InvalidArgument("kappa must be positive".into()));
        }
        if !(self.duration_s > 0.0) || !(self.label_rate_hz > 0.0) {
            return Err(Error::InvalidArgument("duration and label rate must be positive".into()));
        }
        if !(self.step_std_deg >= 0.0) {
            return Err(Error::InvalidArgument("step std must be non-negative".into()));
        }
        if let Some(p) = &self.preferred_deg {
            if p.len() != self.n_cells {
                return Err(Error::DimensionMismatch {
                    what: "preferred directions",
                    expected: self.n_cells,
                    got: p.len(),
                });
            }
        }
        Ok(())
    }

    pub fn preferred_directions(&self) -> Vec<f64> {
        match &self.preferred_deg {
            Some(p) => p.iter().map(|&a| wrap_degrees(a)).collect(),
            None => (0..self.n_cells)
                .map(|i| 360.0 * i as f64 / self.n_cells as f64)
                .collect(),
        }
    }

    /// Firing rate of a cell preferring `preferred` when the head points at `theta`.
    pub fn rate(&self, theta: f64, preferred: f64) -> f64 {
        self.peak_rate_hz * (self.kappa * ((theta - preferred).to_radians().cos() - 1.0)).exp()
    }
}

/// Linear interpolation of a uniformly sampled trajectory at time `t`.
fn sample_index(t: f64, rate: f64, len: usize) -> (usize, usize, f64) {
    let x = t * rate;
    let lo = (x.floor() as usize).min(len - 1);
    let hi = (lo + 1).min(len - 1);
    let frac = if hi > lo { x - lo as f64 } else { 0.0 };
    (lo, hi, frac)
}

/// Event times of a Poisson process of rate `peak` on `[0, duration)`,
/// each kept with probability `accept(t)`.
fn thinned_poisson<R: Rng>(
    rng: &mut R,
    peak: f64,
    duration: f64,
    mut accept: impl FnMut(f64) -> f64,
) -> Vec<f64> {
    let mut out = Vec::new();
    if peak <= 0.0 {
        return out;
    }
    let gap = Exp::new(peak).expect("positive rate");
    let mut t = 0.0;
    loop {
        t += gap.sample(rng);
        if t >= duration {
            return out;
        }
        if rng.gen::<f64>() < accept(t) {
            out.push(t);
        }
    }
}

fn label_times(duration: f64, rate: f64) -> Vec<f64> {
    let n = (duration * rate).ceil() as usize;
    (0..n).map(|i| i as f64 / rate).filter(|&t| t < duration).collect()
}

pub fn simulate_hd(cfg: &HdSimConfig) -> Result<SpikeDataset> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let times = label_times(cfg.duration_s, cfg.label_rate_hz);
    let step = Normal::new(0.0, cfg.step_std_deg).expect("finite std");
    let mut theta = rng.gen::<f64>() * 360.0;
    let mut heading = Vec::with_capacity(times.len());
    for _ in &times {
        heading.push(theta);
        theta = wrap_degrees(theta + step.sample(&mut rng));
    }
    let at = |t: f64| {
        let (lo, hi, f) = sample_index(t, cfg.label_rate_hz, heading.len());
        heading[lo] + f * angle_diff(heading[lo], heading[hi])
    };
    let neurons = cfg
        .preferred_directions()
        .into_iter()
        .map(|pref| {
            thinned_poisson(&mut rng, cfg.peak_rate_hz, cfg.duration_s, |t| {
                cfg.rate(at(t), pref) / cfg.peak_rate_hz
            })
        })
        .collect();
    SpikeDataset::new(
        neurons,
        LabelStream::Angles {
            times,
            degrees: heading,
        },
        0.0,
        cfg.duration_s,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridModule {
    pub scale_cm: f64,
    pub orientation_deg: f64,
    pub n_cells: usize,
    /// Phase of each cell in lattice coordinates, inside the unit rhombus
    /// `[0, 1)^2`; drawn uniformly when absent.
    #[serde(default)]
    pub phases: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSimConfig {
    pub modules: Vec<GridModule>,
    /// Side length of the square arena `[0, arena_cm]^2`.
    pub arena_cm: f64,
    pub speed_cm_s: f64,
    /// Standard deviation of the heading change per label sample.
    pub turn_std_deg: f64,
    pub peak_rate_hz: f64,
    pub duration_s: f64,
    pub label_rate_hz: f64,
    /// Starting position; uniform in the arena when absent.
    pub start: Option<[f64; 2]>,
    pub seed: u64,
}

impl Default for GridSimConfig {
    fn default() -> Self {
        Self {
            modules: vec![
                GridModule {
                    scale_cm: 40.0,
                    orientation_deg: 0.0,
                    n_cells: 24,
                    phases: None,
                },
                GridModule {
                    scale_cm: 60.0,
                    orientation_deg: 20.0,
                    n_cells: 24,
                    phases: None,
                },
            ],
            arena_cm: 150.0,
            speed_cm_s: 20.0,
            turn_std_deg: 10.0,
            peak_rate_hz: 20.0,
            duration_s: 600.0,
            label_rate_hz: 50.0,
            start: None,
            seed: 7,
        }
    }
}

/// A single simulated grid cell with its resolved spatial offset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub module: usize,
    pub scale_cm: f64,
    pub orientation_deg: f64,
    pub offset: [f64; 2],
}

impl GridCell {
    fn wave_vectors(&self) -> [[f64; 2]; 3] {
        let mag = 4.0 * PI / (3f64.sqrt() * self.scale_cm);
        let mut k = [[0.0; 2]; 3];
        for (i, ki) in k.iter_mut().enumerate() {
            let a = (self.orientation_deg - 30.0 + 60.0 * i as f64).to_radians();
            *ki = [mag * a.cos(), mag * a.sin()];
        }
        k
    }

    /// Normalized rate in `[0, 1]`: rectified sum of three plane waves,
    /// equal to 1 on the lattice of field peaks.
    pub fn tuning(&self, pos: [f64; 2]) -> f64 {
        let dx = [pos[0] - self.offset[0], pos[1] - self.offset[1]];
        let s: f64 = self
            .wave_vectors()
            .iter()
            .map(|k| (k[0] * dx[0] + k[1] * dx[1]).cos())
            .sum();
        (s / 3.0).max(0.0)
    }

    /// Lattice basis vectors (length `scale_cm`, 60 degrees apart).
    pub fn basis(&self) -> [[f64; 2]; 2] {
        let a = self.orientation_deg.to_radians();
        let b = a + PI / 3.0;
        [
            [self.scale_cm * a.cos(), self.scale_cm * a.sin()],
            [self.scale_cm * b.cos(), self.scale_cm * b.sin()],
        ]
    }
}

impl GridSimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.modules.is_empty() {
            return Err(Error::Empty("grid modules"));
        }
        for (i, m) in self.modules.iter().enumerate() {
            if !(m.scale_cm > 0.0) {
                return Err(Error::InvalidArgument(format!("module {i}: scale must be positive")));
            }
            if self.modules[..i].iter().any(|o| o.scale_cm == m.scale_cm) {
                return Err(Error::InvalidArgument(format!(
                    "module {i}: scale {} repeats an earlier module",
                    m.scale_cm
                )));
            }
            if let Some(p) = &m.phases {
                if p.len() != m.n_cells {
                    return Err(Error::DimensionMismatch {
                        what: "grid phases",
                        expected: m.n_cells,
                        got: p.len(),
                    });
                }
                if p.iter().flatten().any(|&u| !(0.0..1.0).contains(&u)) {
                    return Err(Error::InvalidArgument(format!(
                        "module {i}: phases must lie in the unit rhombus"
                    )));
                }
            }
        }
        if !(self.arena_cm > 0.0) || !(self.duration_s > 0.0) || !(self.label_rate_hz > 0.0) {
            return Err(Error::InvalidArgument(
                "arena, duration and label rate must be positive".into(),
            ));
        }
        if !(self.speed_cm_s >= 0.0) || !(self.peak_rate_hz >= 0.0) || !(self.turn_std_deg >= 0.0) {
            return Err(Error::InvalidArgument(
                "speed, peak rate and turn std must be non-negative".into(),
            ));
        }
        if let Some(s) = self.start {
            if s.iter().any(|&v| !(0.0..=self.arena_cm).contains(&v)) {
                return Err(Error::InvalidArgument("start lies outside the arena".into()));
            }
        }
        Ok(())
    }
}

/// Reflects a coordinate into `[0, side]`; returns whether it bounced.
fn reflect(v: &mut f64, side: f64) -> bool {
    if *v < 0.0 {
        *v = -*v;
        true
    } else if *v > side {
        *v = 2.0 * side - *v;
        true
    } else {
        false
    }
}

/// Simulates the population and also returns the resolved cells.
pub fn simulate_grid_cells(cfg: &GridSimConfig) -> Result<(SpikeDataset, Vec<GridCell>)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cells = Vec::new();
    for (mi, m) in cfg.modules.iter().enumerate() {
        for c in 0..m.n_cells {
            let [u, v] = match &m.phases {
                Some(p) => p[c],
                None => [rng.gen::<f64>(), rng.gen::<f64>()],
            };
            let mut cell = GridCell {
                module: mi,
                scale_cm: m.scale_cm,
                orientation_deg: m.orientation_deg,
                offset: [0.0, 0.0],
            };
            let [a1, a2] = cell.basis();
            cell.offset = [u * a1[0] + v * a2[0], u * a1[1] + v * a2[1]];
            cells.push(cell);
        }
    }

    let times = label_times(cfg.duration_s, cfg.label_rate_hz);
    let dt = 1.0 / cfg.label_rate_hz;
    let turn = Normal::new(0.0, cfg.turn_std_deg.to_radians()).expect("finite std");
    let side = cfg.arena_cm;
    let mut pos = cfg
        .start
        .unwrap_or_else(|| [rng.gen::<f64>() * side, rng.gen::<f64>() * side]);
    let mut heading = rng.gen::<f64>() * 2.0 * PI;
    let mut path = Vec::with_capacity(times.len());
    for _ in &times {
        path.push(pos);
        heading += turn.sample(&mut rng);
        let step = cfg.speed_cm_s * dt;
        let mut next = [pos[0] + step * heading.cos(), pos[1] + step * heading.sin()];
        if reflect(&mut next[0], side) {
            heading = PI - heading;
        }
        if reflect(&mut next[1], side) {
            heading = -heading;
        }
        pos = [next[0].clamp(0.0, side), next[1].clamp(0.0, side)];
    }

    let at = |t: f64| {
        let (lo, hi, f) = sample_index(t, cfg.label_rate_hz, path.len());
        [
            path[lo][0] + f * (path[hi][0] - path[lo][0]),
            path[lo][1] + f * (path[hi][1] - path[lo][1]),
        ]
    };
    let neurons = cells
        .iter()
        .map(|cell| thinned_poisson(&mut rng, cfg.peak_rate_hz, cfg.duration_s, |t| cell.tuning(at(t))))
        .collect();
    let d = SpikeDataset::new(
        neurons,
        LabelStream::Positions { times, xy: path },
        0.0,
        cfg.duration_s,
    )?;
    Ok((d, cells))
}

pub fn simulate_grid(cfg: &GridSimConfig) -> Result<SpikeDataset> {
    simulate_grid_cells(cfg).map(|(d, _)| d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short_hd() -> HdSimConfig {
        HdSimConfig {
            duration_s: 60.0,
            ..HdSimConfig::default()
        }
    }

    #[test]
    fn hd_is_deterministic_and_sorted() {
        let a = simulate_hd(&short_hd()).unwrap();
        let b = simulate_hd(&short_hd()).unwrap();
        assert_eq!(a, b);
        for train in a.neurons() {
            assert!(train.windows(2).all(|w| w[0] <= w[1]));
            assert!(train.iter().all(|&t| (0.0..60.0).contains(&t)));
        }
        let c = simulate_hd(&HdSimConfig {
            seed: 8,
            ..short_hd()
        })
        .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_rate_is_silent() {
        let d = simulate_hd(&HdSimConfig {
            peak_rate_hz: 0.0,
            ..short_hd()
        })
        .unwrap();
        assert_eq!(d.total_spikes(), 0);
    }

    #[test]
    fn sharp_tuning_concentrates_spikes() {
        let cfg = HdSimConfig {
            kappa: 50.0,
            duration_s: 300.0,
            ..HdSimConfig::default()
        };
        let d = simulate_hd(&cfg).unwrap();
        let LabelStream::Angles { degrees, .. } = d.labels() else {
            panic!()
        };
        let prefs = cfg.preferred_directions();
        let mut offsets = Vec::new();
        for (train, &pref) in d.neurons().iter().zip(&prefs) {
            for &t in train {
                let (lo, hi, f) = sample_index(t, cfg.label_rate_hz, degrees.len());
                let theta = degrees[lo] + f * angle_diff(degrees[lo], degrees[hi]);
                offsets.push(angle_diff(pref, theta).abs());
            }
        }
        assert!(offsets.len() > 1000);
        let within = |w: f64| offsets.iter().filter(|&&o| o <= w).count() as f64 / offsets.len() as f64;
        // tuning-curve mass within +-w degrees, by midpoint quadrature
        let mass = |w: f64| {
            let n = 200_000;
            let h = 360.0 / n as f64;
            let (mut inside, mut all) = (0.0, 0.0);
            for i in 0..n {
                let x = -180.0 + (i as f64 + 0.5) * h;
                let r = (50.0 * (x.to_radians().cos() - 1.0)).exp();
                all += r;
                if x.abs() <= w {
                    inside += r;
                }
            }
            inside / all
        };
        assert!((within(20.0) - mass(20.0)).abs() < 0.005, "{} vs {}", within(20.0), mass(20.0));
        assert!(within(25.0) >= 0.99, "{}", within(25.0));
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(simulate_hd(&HdSimConfig {
            kappa: 0.0,
            ..short_hd()
        })
        .is_err());
        let mut g = GridSimConfig::default();
        g.modules[1].scale_cm = 40.0;
        assert!(simulate_grid(&g).is_err());
        let mut g = GridSimConfig::default();
        g.modules[0].phases = Some(vec![[1.5, 0.0]; 24]);
        assert!(simulate_grid(&g).is_err());
    }

    #[test]
    fn grid_trajectory_stays_in_arena() {
        let cfg = GridSimConfig {
            duration_s: 120.0,
            ..GridSimConfig::default()
        };
        let (d, cells) = simulate_grid_cells(&cfg).unwrap();
        assert_eq!(cells.len(), 48);
        assert_eq!(d.n_neurons(), 48);
        let LabelStream::Positions { xy, .. } = d.labels() else {
            panic!()
        };
        assert!(xy.iter().flatten().all(|&v| (0.0..=150.0).contains(&v)));
        assert_eq!(simulate_grid(&cfg).unwrap(), d);
    }

    #[test]
    fn grid_tuning_peaks_on_lattice() {
        let cell = GridCell {
            module: 0,
            scale_cm: 40.0,
            orientation_deg: 10.0,
            offset: [3.0, 4.0],
        };
        let [a1, a2] = cell.basis();
        for (m, n) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (2.0, -1.0)] {
            let p = [3.0 + m * a1[0] + n * a2[0], 4.0 + m * a1[1] + n * a2[1]];
            assert!((cell.tuning(p) - 1.0).abs() < 1e-12);
        }
        // halfway between neighbouring peaks the field is silent
        let mid = [3.0 + 0.5 * a1[0], 4.0 + 0.5 * a1[1]];
        assert!(cell.tuning(mid) < 1e-12);
    }
}
