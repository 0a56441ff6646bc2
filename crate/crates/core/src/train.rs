//! Training configuration, optimizer, training loop and random search.

use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{build_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::Activation;
use crate::metrics::ErrorReport;
use crate::model::{Arch, BinnedData, Decoded, Model, Split, TargetCodec};
use crate::spikes::{DataKind, LabelSeries, SpikeDataset};

/// Every key of the TOML config file; absent keys take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub arch: Arch,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub dropout: f64,
    /// Recurrent layers (rnn, scrnn, gnn) or hidden layers (ffnn).
    pub nn_layers: usize,
    pub hidden_size: usize,
    /// Hidden width of the ffnn.
    pub layer_width: usize,
    pub sc_layers: usize,
    pub filters: usize,
    pub degree: usize,
    pub k_max: usize,
    pub seq_len: usize,
    pub n_col: usize,
    pub p: f64,
    pub t_bin: f64,
    pub test_fraction: f64,
    pub train_fraction: f64,
    pub seed: u64,
    pub grad_clip: f64,
    pub sc_activation: Activation,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            arch: Arch::Scrnn,
            epochs: 50,
            batch_size: 8,
            learning_rate: 1e-3,
            dropout: 0.3,
            nn_layers: 1,
            hidden_size: 64,
            layer_width: 128,
            sc_layers: 2,
            filters: 2,
            degree: 1,
            k_max: 2,
            seq_len: 5,
            n_col: 1,
            p: 0.3,
            t_bin: 0.1,
            test_fraction: 0.25,
            train_fraction: 0.75,
            seed: 7,
            grad_clip: 5.0,
            sc_activation: Activation::Relu,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("batch_size", self.batch_size),
            ("nn_layers", self.nn_layers),
            ("hidden_size", self.hidden_size),
            ("layer_width", self.layer_width),
            ("sc_layers", self.sc_layers),
            ("filters", self.filters),
            ("degree", self.degree),
            ("k_max", self.k_max),
            ("seq_len", self.seq_len),
            ("n_col", self.n_col),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Validation(format!("{name} must be at least 1")));
        }
        let bad = |msg: String| Err(Error::Validation(msg));
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning_rate must be finite and >= 0, got {}", self.learning_rate));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return bad(format!("dropout must lie in [0, 1), got {}", self.dropout));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return bad(format!("p must lie in (0, 1], got {}", self.p));
        }
        if !(self.t_bin > 0.0 && self.t_bin.is_finite()) {
            return bad(format!("t_bin must be positive, got {}", self.t_bin));
        }
        if !(self.test_fraction > 0.0 && self.train_fraction > 0.0)
            || (self.test_fraction + self.train_fraction - 1.0).abs() > 1e-9
        {
            return bad(format!(
                "split fractions must be positive and sum to 1, got {} + {}",
                self.test_fraction, self.train_fraction
            ));
        }
        if !(self.grad_clip > 0.0) {
            return bad(format!("grad_clip must be positive, got {}", self.grad_clip));
        }
        if self.arch == Arch::Gnn && self.k_max != 1 {
            return bad("gnn requires k_max = 1".into());
        }
        Ok(())
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Hand-tuned settings for the synthetic datasets.
    pub fn preset(kind: DataKind, arch: Arch) -> Self {
        let base = Self {
            arch,
            k_max: if arch == Arch::Gnn { 1 } else { 2 },
            ..Self::default()
        };
        match (kind, arch) {
            (DataKind::Hd, Arch::Ffnn) => Self {
                nn_layers: 2,
                layer_width: 128,
                epochs: 100,
                batch_size: 32,
                learning_rate: 1e-3,
                dropout: 0.2,
                ..base
            },
            (DataKind::Hd, _) => Self {
                sc_layers: 2,
                filters: 2,
                degree: 1,
                seq_len: 5,
                hidden_size: 16,
                epochs: 15,
                ..base
            },
            (DataKind::Grid, Arch::Ffnn) => Self {
                nn_layers: 2,
                layer_width: 256,
                epochs: 50,
                batch_size: 16,
                learning_rate: 1e-3,
                dropout: 0.2,
                ..base
            },
            (DataKind::Grid, _) => Self {
                sc_layers: 1,
                filters: 3,
                degree: 1,
                seq_len: 5,
                epochs: 15,
                ..base
            },
        }
    }
}

/// Mean of squared componentwise differences.
pub fn mse_loss(pred: &[f64], target: &[f64]) -> Result<f64> {
    if pred.len() != target.len() {
        return Err(Error::DimensionMismatch {
            what: "loss operands",
            expected: target.len(),
            got: pred.len(),
        });
    }
    if pred.is_empty() {
        return Err(Error::Empty("loss operands"));
    }
    Ok(pred.iter().zip(target).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / pred.len() as f64)
}

/// Adam with bias correction.
#[derive(Debug, Clone)]
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    step: i32,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

impl Adam {
    pub fn new(model: &Model, lr: f64) -> Self {
        let shapes: Vec<Vec<f64>> = model.params().iter().map(|s| vec![0.0; s.len()]).collect();
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            m: shapes.clone(),
            v: shapes,
        }
    }

    pub fn steps(&self) -> i32 {
        self.step
    }

    pub fn update(&mut self, model: &mut Model, grad: &Model) {
        self.step += 1;
        let c1 = 1.0 - self.beta1.powi(self.step);
        let c2 = 1.0 - self.beta2.powi(self.step);
        for (((p, g), m), v) in model
            .params_mut()
            .into_iter()
            .zip(grad.params())
            .zip(&mut self.m)
            .zip(&mut self.v)
        {
            for i in 0..p.len() {
                m[i] = self.beta1 * m[i] + (1.0 - self.beta1) * g[i];
                v[i] = self.beta2 * v[i] + (1.0 - self.beta2) * g[i] * g[i];
                p[i] -= self.lr * (m[i] / c1) / ((v[i] / c2).sqrt() + self.eps);
            }
        }
    }
}

/// Scales `grad` so its global L2 norm is at most `max_norm`; returns the
/// norm before scaling.
pub fn clip_global_norm(grad: &mut Model, max_norm: f64) -> f64 {
    let norm = grad
        .params()
        .iter()
        .flat_map(|s| s.iter())
        .map(|g| g * g)
        .sum::<f64>()
        .sqrt();
    if norm > max_norm {
        let s = max_norm / norm;
        for p in grad.params_mut() {
            p.iter_mut().for_each(|g| *g *= s);
        }
    }
    norm
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Weights with the lowest validation loss seen, including the initial ones.
    pub model: Model,
    /// One record per epoch, starting at epoch 1.
    pub curve: Vec<EpochRecord>,
    pub initial_val_loss: f64,
    /// 0 when no epoch improved on the initial weights.
    pub best_epoch: usize,
    pub optimizer_steps: usize,
}

/// Targets of the given samples, in order.
pub fn targets(codec: &TargetCodec, labels: &LabelSeries, samples: &[usize]) -> Result<Vec<[f64; 2]>> {
    samples.iter().map(|&t| codec.encode(labels, t)).collect()
}

/// Mean per-sample loss without dropout.
pub fn evaluate_loss(model: &Model, data: &BinnedData, samples: &[usize], targets: &[[f64; 2]]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Empty("evaluation samples"));
    }
    let mut total = 0.0;
    for (&t, y) in samples.iter().zip(targets) {
        total += mse_loss(&model.predict(data, t)?, y)?;
    }
    Ok(total / samples.len() as f64)
}

/// Minibatch Adam on the training samples; validation loss after every epoch.
pub fn train(
    mut model: Model,
    data: &BinnedData,
    codec: &TargetCodec,
    train_samples: &[usize],
    val_samples: &[usize],
    cfg: &TrainConfig,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if train_samples.is_empty() {
        return Err(Error::Empty("training samples"));
    }
    let train_targets = targets(codec, data.labels(), train_samples)?;
    let val_targets = targets(codec, data.labels(), val_samples)?;
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    shuffle_rng.set_stream(1);
    let mut dropout_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    dropout_rng.set_stream(2);

    let initial_val_loss = evaluate_loss(&model, data, val_samples, &val_targets)?;
    let mut best = (initial_val_loss, 0usize, model.clone());
    let mut adam = Adam::new(&model, cfg.learning_rate);
    let mut grad = model.zeros_like();
    let mut order: Vec<usize> = (0..train_samples.len()).collect();
    let mut curve = Vec::with_capacity(cfg.epochs);

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut shuffle_rng);
        let mut epoch_loss = 0.0;
        for (b, batch) in order.chunks(cfg.batch_size).enumerate() {
            for p in grad.params_mut() {
                p.iter_mut().for_each(|g| *g = 0.0);
            }
            let scale = 1.0 / batch.len() as f64;
            let mut batch_loss = 0.0;
            for &i in batch {
                batch_loss += model.forward_backward(
                    data,
                    train_samples[i],
                    &train_targets[i],
                    scale,
                    cfg.dropout,
                    &mut grad,
                    &mut dropout_rng,
                )?;
            }
            if !batch_loss.is_finite() {
                return Err(Error::Diverged {
                    epoch,
                    batch: b,
                    loss: batch_loss * scale,
                });
            }
            epoch_loss += batch_loss;
            clip_global_norm(&mut grad, cfg.grad_clip);
            adam.update(&mut model, &grad);
        }
        let val_loss = evaluate_loss(&model, data, val_samples, &val_targets)?;
        if !val_loss.is_finite() {
            return Err(Error::Diverged {
                epoch,
                batch: usize::MAX,
                loss: val_loss,
            });
        }
        curve.push(EpochRecord {
            epoch,
            train_loss: epoch_loss / train_samples.len() as f64,
            val_loss,
        });
        if val_loss < best.0 {
            best = (val_loss, epoch, model.clone());
        }
    }
    Ok(TrainOutcome {
        model: best.2,
        curve,
        initial_val_loss,
        best_epoch: best.1,
        optimizer_steps: adam.steps() as usize,
    })
}

/// Decodes predictions over `samples` and scores them against the labels.
pub fn evaluate(model: &Model, data: &BinnedData, codec: &TargetCodec, samples: &[usize]) -> Result<ErrorReport> {
    if codec.kind() != data.kind() {
        return Err(Error::Validation(format!(
            "model decodes {} labels but the data holds {}",
            codec.kind(),
            data.kind()
        )));
    }
    let mut angles = (Vec::new(), Vec::new());
    let mut points = (Vec::new(), Vec::new());
    for &t in samples {
        match (codec.decode(&model.predict(data, t)?)?, data.labels()) {
            (Decoded::Angle(a), LabelSeries::Angles(truth)) => {
                angles.0.push(a);
                angles.1.push(truth[t]);
            }
            (Decoded::Position(q), LabelSeries::Positions(truth)) => {
                points.0.push(q);
                points.1.push(truth[t]);
            }
            _ => unreachable!("codec kind checked above"),
        }
    }
    match data.kind() {
        DataKind::Hd => ErrorReport::angles(samples, &angles.0, &angles.1),
        DataKind::Grid => ErrorReport::positions(samples, &points.0, &points.1),
    }
}

/// Everything derived from a recording before training.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub data: BinnedData,
    pub split: Split,
    pub codec: TargetCodec,
    /// Built from the training bins only; `None` for count-based models.
    pub complex: Option<Arc<SimplicialComplex>>,
}

pub fn prepare(dataset: &SpikeDataset, cfg: &TrainConfig) -> Result<Prepared> {
    cfg.validate()?;
    let data = BinnedData::from_dataset(dataset, cfg.t_bin, cfg.p)?;
    let split = data.split(cfg.test_fraction)?;
    let codec = TargetCodec::fit(data.labels(), split.train.clone())?;
    let complex = if cfg.arch.uses_complex() {
        Some(Arc::new(build_complex(data.binary(), cfg.k_max, split.train.clone())?))
    } else {
        None
    };
    Ok(Prepared {
        data,
        split,
        codec,
        complex,
    })
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: TrainConfig,
    pub prepared: Prepared,
    pub outcome: TrainOutcome,
    /// Scores on the held-out block.
    pub report: ErrorReport,
}

/// Bins, splits, builds, trains and scores one configuration.
pub fn fit(dataset: &SpikeDataset, cfg: &TrainConfig) -> Result<Experiment> {
    let prepared = prepare(dataset, cfg)?;
    let model = Model::new(cfg.arch, cfg, prepared.data.n_neurons(), prepared.complex.clone())?;
    let train_samples = model.samples(prepared.split.train.clone());
    let val_samples = model.samples(prepared.split.test.clone());
    let outcome = train(model, &prepared.data, &prepared.codec, &train_samples, &val_samples, cfg)?;
    let report = evaluate(&outcome.model, &prepared.data, &prepared.codec, &val_samples)?;
    Ok(Experiment {
        config: cfg.clone(),
        prepared,
        outcome,
        report,
    })
}

/// Candidate values per hyperparameter; absent keys keep the base config.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSpace {
    pub epochs: Option<Vec<usize>>,
    pub batch_size: Option<Vec<usize>>,
    pub learning_rate: Option<Vec<f64>>,
    pub dropout: Option<Vec<f64>>,
    pub nn_layers: Option<Vec<usize>>,
    pub hidden_size: Option<Vec<usize>>,
    pub layer_width: Option<Vec<usize>>,
    pub sc_layers: Option<Vec<usize>>,
    pub filters: Option<Vec<usize>>,
    pub degree: Option<Vec<usize>>,
}

fn pick<T: Copy, R: Rng>(list: &Option<Vec<T>>, slot: &mut T, rng: &mut R) {
    if let Some(l) = list {
        *slot = l[rng.gen_range(0..l.len())];
    }
}

impl SearchSpace {
    pub fn validate(&self) -> Result<()> {
        let lens = [
            ("epochs", self.epochs.as_ref().map(Vec::len)),
            ("batch_size", self.batch_size.as_ref().map(Vec::len)),
            ("learning_rate", self.learning_rate.as_ref().map(Vec::len)),
            ("dropout", self.dropout.as_ref().map(Vec::len)),
            ("nn_layers", self.nn_layers.as_ref().map(Vec::len)),
            ("hidden_size", self.hidden_size.as_ref().map(Vec::len)),
            ("layer_width", self.layer_width.as_ref().map(Vec::len)),
            ("sc_layers", self.sc_layers.as_ref().map(Vec::len)),
            ("filters", self.filters.as_ref().map(Vec::len)),
            ("degree", self.degree.as_ref().map(Vec::len)),
        ];
        if let Some((key, _)) = lens.iter().find(|(_, l)| *l == Some(0)) {
            return Err(Error::Validation(format!("search list for {key} is empty")));
        }
        if lens.iter().all(|(_, l)| l.is_none()) {
            return Err(Error::Empty("search space"));
        }
        Ok(())
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let space: Self = toml::from_str(s)?;
        space.validate()?;
        Ok(space)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Draws one configuration; keys are visited in declaration order.
    pub fn sample<R: Rng>(&self, base: &TrainConfig, rng: &mut R) -> TrainConfig {
        let mut c = base.clone();
        pick(&self.epochs, &mut c.epochs, rng);
        pick(&self.batch_size, &mut c.batch_size, rng);
        pick(&self.learning_rate, &mut c.learning_rate, rng);
        pick(&self.dropout, &mut c.dropout, rng);
        pick(&self.nn_layers, &mut c.nn_layers, rng);
        pick(&self.hidden_size, &mut c.hidden_size, rng);
        pick(&self.layer_width, &mut c.layer_width, rng);
        pick(&self.sc_layers, &mut c.sc_layers, rng);
        pick(&self.filters, &mut c.filters, rng);
        pick(&self.degree, &mut c.degree, rng);
        c
    }

    /// The published search lists for each task and architecture.
    pub fn table_s1(kind: DataKind, arch: Arch) -> Self {
        let u = |v: &[usize]| Some(v.to_vec());
        let f = |v: &[f64]| Some(v.to_vec());
        match (kind, arch) {
            (DataKind::Hd, Arch::Ffnn) => Self {
                epochs: u(&[25, 50, 100]),
                batch_size: u(&[8, 16, 32]),
                learning_rate: f(&[0.01, 0.001, 0.0001]),
                dropout: f(&[0.2, 0.3, 0.4]),
                nn_layers: u(&[2, 3, 4]),
                layer_width: u(&[64, 128, 256]),
                ..Self::default()
            },
            (DataKind::Hd, Arch::Rnn) => Self {
                epochs: u(&[25, 50, 100]),
                batch_size: u(&[8, 16, 32, 64]),
                learning_rate: f(&[0.01, 0.001, 0.0001, 0.00001]),
                dropout: f(&[0.2, 0.3, 0.4]),
                nn_layers: u(&[1, 2, 3]),
                hidden_size: u(&[50, 100, 200]),
                ..Self::default()
            },
            (DataKind::Hd, _) => Self {
                epochs: u(&[50, 100]),
                batch_size: u(&[8, 16, 32, 64]),
                learning_rate: f(&[0.001, 0.0001, 0.00001]),
                dropout: f(&[0.2, 0.3, 0.4]),
                nn_layers: u(&[1, 2, 3]),
                layer_width: u(&[32, 64, 128]),
                hidden_size: u(&[50, 100, 200]),
                degree: u(&[1, 2]),
                sc_layers: u(&[1, 2, 3, 4]),
                filters: u(&[1, 3, 5]),
            },
            (DataKind::Grid, Arch::Ffnn) => Self {
                epochs: u(&[50, 100]),
                batch_size: u(&[8, 16, 32]),
                learning_rate: f(&[0.001, 0.0001, 0.00001]),
                dropout: f(&[0.2, 0.3, 0.4]),
                nn_layers: u(&[2, 3, 4]),
                layer_width: u(&[128, 256, 512]),
                ..Self::default()
            },
            (DataKind::Grid, Arch::Rnn) => Self {
                epochs: u(&[25, 50, 100]),
                batch_size: u(&[8, 16, 32, 64]),
                learning_rate: f(&[0.001, 0.0001, 0.00001]),
                dropout: f(&[0.2, 0.3, 0.4, 0.5]),
                nn_layers: u(&[1, 2, 3]),
                hidden_size: u(&[100, 200, 400]),
                ..Self::default()
            },
            (DataKind::Grid, _) => Self {
                epochs: u(&[50, 100]),
                batch_size: u(&[8, 16]),
                learning_rate: f(&[0.001, 0.0001, 0.00001]),
                dropout: f(&[0.2, 0.3, 0.4]),
                nn_layers: u(&[1, 2, 3]),
                layer_width: u(&[32, 64, 128, 256]),
                hidden_size: u(&[50, 100, 200]),
                sc_layers: u(&[1, 2, 3]),
                filters: u(&[1, 3, 5]),
                degree: u(&[1, 2]),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub index: usize,
    pub config: TrainConfig,
    /// Held-out AAE (degrees) or AED; infinite when training diverged.
    pub metric: f64,
    pub val_loss: f64,
    pub diverged: bool,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    /// Trials ranked by metric, ties broken by trial index.
    pub leaderboard: Vec<Trial>,
}

impl SearchResult {
    pub fn best(&self) -> &Trial {
        &self.leaderboard[0]
    }
}

/// Samples `budget` configurations with `seed`, trains each (trial `i` uses
/// model seed `base.seed + i`) and ranks them by held-out error.
pub fn random_search(
    dataset: &SpikeDataset,
    base: &TrainConfig,
    space: &SearchSpace,
    budget: usize,
    seed: u64,
) -> Result<SearchResult> {
    if budget == 0 {
        return Err(Error::InvalidArgument("search budget must be at least 1".into()));
    }
    space.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut leaderboard = Vec::with_capacity(budget);
    for index in 0..budget {
        let mut config = space.sample(base, &mut rng);
        config.seed = base.seed.wrapping_add(index as u64);
        config.validate()?;
        let trial = match fit(dataset, &config) {
            Ok(e) => Trial {
                index,
                metric: e.report.headline(),
                val_loss: e.outcome.curve.iter().map(|r| r.val_loss).fold(e.outcome.initial_val_loss, f64::min),
                diverged: false,
                config,
            },
            Err(Error::Diverged { .. }) => Trial {
                index,
                config,
                metric: f64::INFINITY,
                val_loss: f64::INFINITY,
                diverged: true,
            },
            Err(e) => return Err(e),
        };
        leaderboard.push(trial);
    }
    leaderboard.sort_by(|a, b| a.metric.total_cmp(&b.metric).then(a.index.cmp(&b.index)));
    Ok(SearchResult { leaderboard })
}

/// Central finite differences of the single-sample loss for every
/// parameter, next to the analytic gradient: `(name, analytic, numeric)`.
pub fn finite_difference_check(
    model: &Model,
    data: &BinnedData,
    t: usize,
    target: &[f64],
    eps: f64,
) -> Result<Vec<(String, f64, f64)>> {
    let mut grad = model.zeros_like();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    model.forward_backward(data, t, target, 1.0, 0.0, &mut grad, &mut rng)?;
    let analytic: Vec<f64> = grad.params().concat();
    let names = model.param_names();
    let mut out = Vec::with_capacity(names.len());
    let mut probe = model.clone();
    let mut k = 0;
    for si in 0..model.params().len() {
        for j in 0..model.params()[si].len() {
            let orig = probe.params()[si][j];
            probe.params_mut()[si][j] = orig + eps;
            let up = mse_loss(&probe.predict(data, t)?, target)?;
            probe.params_mut()[si][j] = orig - eps;
            let down = mse_loss(&probe.predict(data, t)?, target)?;
            probe.params_mut()[si][j] = orig;
            out.push((names[k].clone(), analytic[k], (up - down) / (2.0 * eps)));
            k += 1;
        }
    }
    Ok(out)
}
