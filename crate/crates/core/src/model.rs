//! The full decoder and its baselines behind one interface.
//!
//! Every model maps a window of `seq_len` consecutive bins ending at bin `t`
//! to a 2-vector predicting the label of bin `t`:
//!
//! * `scrnn`: per bin, input cochains pass through the simplicial
//!   convolutional stack; the flattened outputs feed an Elman stack.
//! * `gnn`: the same network on a complex capped at dimension 1.
//! * `rnn`: an Elman stack on the raw per-bin count vectors.
//! * `ffnn`: a fully connected ReLU network on the flattened count window.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::ops::Range;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{cochain_from_bin, SimplicialComplex};
use crate::error::{Error, Result};
use crate::filters::{ScLayerStack, Signal};
use crate::linalg::{nonzero_indices, Matrix};
use crate::recurrent::RnnStack;
use crate::spikes::{
    bin_labels, bin_spikes, binarize_rows, BinaryMatrix, DataKind, LabelSeries, SpikeCountMatrix,
    SpikeDataset,
};
use crate::train::TrainConfig;

/// Dimension of every model output.
pub const OUTPUT_DIM: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arch {
    Scrnn,
    Ffnn,
    Rnn,
    Gnn,
}

impl Arch {
    pub fn uses_complex(self) -> bool {
        matches!(self, Arch::Scrnn | Arch::Gnn)
    }
}

impl FromStr for Arch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "scrnn" => Ok(Arch::Scrnn),
            "ffnn" => Ok(Arch::Ffnn),
            "rnn" => Ok(Arch::Rnn),
            "gnn" => Ok(Arch::Gnn),
            _ => Err(Error::Unknown {
                what: "architecture",
                value: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for Arch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arch::Scrnn => "scrnn",
            Arch::Ffnn => "ffnn",
            Arch::Rnn => "rnn",
            Arch::Gnn => "gnn",
        })
    }
}

/// Binned recording: counts, binarized activity and one label per bin.
#[derive(Debug, Clone)]
pub struct BinnedData {
    counts: SpikeCountMatrix,
    binary: BinaryMatrix,
    labels: LabelSeries,
    /// Count columns as floats, one vector per bin.
    columns: Vec<Vec<f64>>,
}

/// Chronological split: the held-out block comes first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub test: Range<usize>,
    pub train: Range<usize>,
}

impl BinnedData {
    pub fn from_dataset(d: &SpikeDataset, t_bin: f64, p: f64) -> Result<Self> {
        let counts = bin_spikes(d, t_bin)?;
        let binary = binarize_rows(&counts, p)?;
        let labels = bin_labels(d, t_bin)?;
        Self::from_parts(counts, binary, labels)
    }

    pub fn from_parts(counts: SpikeCountMatrix, binary: BinaryMatrix, labels: LabelSeries) -> Result<Self> {
        if binary.n_bins() != counts.n_bins() || binary.n_neurons() != counts.n_neurons() {
            return Err(Error::DimensionMismatch {
                what: "binary matrix bins",
                expected: counts.n_bins(),
                got: binary.n_bins(),
            });
        }
        if labels.len() != counts.n_bins() {
            return Err(Error::DimensionMismatch {
                what: "label bins",
                expected: counts.n_bins(),
                got: labels.len(),
            });
        }
        let columns = (0..counts.n_bins())
            .map(|j| counts.column(j).into_iter().map(f64::from).collect())
            .collect();
        Ok(Self {
            counts,
            binary,
            labels,
            columns,
        })
    }

    pub fn kind(&self) -> DataKind {
        self.labels.kind()
    }

    pub fn n_bins(&self) -> usize {
        self.counts.n_bins()
    }

    pub fn n_neurons(&self) -> usize {
        self.counts.n_neurons()
    }

    pub fn counts(&self) -> &SpikeCountMatrix {
        &self.counts
    }

    pub fn binary(&self) -> &BinaryMatrix {
        &self.binary
    }

    pub fn labels(&self) -> &LabelSeries {
        &self.labels
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    /// Holds out the first `ceil(test_fraction * n_bins)` bins.
    pub fn split(&self, test_fraction: f64) -> Result<Split> {
        if !(0.0..1.0).contains(&test_fraction) || test_fraction <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "test fraction must lie in (0, 1), got {test_fraction}"
            )));
        }
        let n = self.n_bins();
        let n_test = ((test_fraction * n as f64).ceil() as usize).min(n);
        if n_test == 0 || n_test == n {
            return Err(Error::InvalidArgument(format!(
                "{n} bins cannot be split with test fraction {test_fraction}"
            )));
        }
        Ok(Split {
            test: 0..n_test,
            train: n_test..n,
        })
    }
}

/// Target bins `t` whose window `t-seq_len+1..=t` and look-ahead columns
/// `t..t+n_col` all lie inside `segment`.
pub fn sample_indices(segment: Range<usize>, seq_len: usize, n_col: usize) -> Vec<usize> {
    let first = segment.start + seq_len.saturating_sub(1);
    let end = segment.end.saturating_sub(n_col.saturating_sub(1));
    (first..end.max(first)).collect()
}

/// Maps labels to 2-vector regression targets and back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TargetCodec {
    /// `(cos theta, sin theta)`.
    Angle,
    /// Positions scaled into `[0, 1]^2` by per-axis bounds.
    Position { min: [f64; 2], max: [f64; 2] },
}

impl TargetCodec {
    /// Angle codec for head direction; position bounds from the given bins.
    pub fn fit(labels: &LabelSeries, bins: Range<usize>) -> Result<Self> {
        match labels {
            LabelSeries::Angles(_) => Ok(TargetCodec::Angle),
            LabelSeries::Positions(p) => {
                let pts = p.get(bins).filter(|s| !s.is_empty()).ok_or(Error::Empty("label bins"))?;
                let mut min = [f64::INFINITY; 2];
                let mut max = [f64::NEG_INFINITY; 2];
                for q in pts {
                    for a in 0..2 {
                        min[a] = min[a].min(q[a]);
                        max[a] = max[a].max(q[a]);
                    }
                }
                for a in 0..2 {
                    if max[a] <= min[a] {
                        max[a] = min[a] + 1.0;
                    }
                }
                Ok(TargetCodec::Position { min, max })
            }
        }
    }

    pub fn kind(&self) -> DataKind {
        match self {
            TargetCodec::Angle => DataKind::Hd,
            TargetCodec::Position { .. } => DataKind::Grid,
        }
    }

    pub fn encode(&self, labels: &LabelSeries, t: usize) -> Result<[f64; 2]> {
        match (self, labels) {
            (TargetCodec::Angle, LabelSeries::Angles(a)) => Ok(encode_angle(a[t])),
            (TargetCodec::Position { min, max }, LabelSeries::Positions(p)) => {
                let q = p[t];
                Ok([0, 1].map(|i| (q[i] - min[i]) / (max[i] - min[i])))
            }
            _ => Err(Error::Validation("label kind does not match target codec".into())),
        }
    }

    /// Angle in degrees for head direction, position in data units for grid.
    pub fn decode(&self, y: &[f64]) -> Result<Decoded> {
        match self {
            TargetCodec::Angle => decode_angle(y).map(Decoded::Angle),
            TargetCodec::Position { min, max } => Ok(Decoded::Position(
                [0, 1].map(|i| min[i] + y[i] * (max[i] - min[i])),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decoded {
    Angle(f64),
    Position([f64; 2]),
}

pub fn encode_angle(deg: f64) -> [f64; 2] {
    let r = deg.to_radians();
    [r.cos(), r.sin()]
}

/// `atan2(y[1], y[0])` in degrees, mapped to `[0, 360)`.
pub fn decode_angle(y: &[f64]) -> Result<f64> {
    if y.len() != 2 {
        return Err(Error::DimensionMismatch {
            what: "angle vector",
            expected: 2,
            got: y.len(),
        });
    }
    if y[0] == 0.0 && y[1] == 0.0 {
        return Err(Error::UndefinedAngle);
    }
    let d = y[1].atan2(y[0]).to_degrees().rem_euclid(360.0);
    Ok(if d >= 360.0 { 0.0 } else { d })
}

/// Fully connected layer `W x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub w: Matrix,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FfnnModel {
    /// Hidden ReLU layers followed by the linear output layer.
    pub layers: Vec<Dense>,
    pub seq_len: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RnnModel {
    pub rnn: RnnStack,
    pub seq_len: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScrnnModel {
    pub complex: Arc<SimplicialComplex>,
    pub sc: ScLayerStack,
    pub rnn: RnnStack,
    pub seq_len: usize,
    pub n_col: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Net {
    Scrnn(ScrnnModel),
    Ffnn(FfnnModel),
    Rnn(RnnModel),
}

/// A decoder of any architecture; gradient buffers are zeroed copies.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    arch: Arch,
    net: Net,
}

fn uniform_fill<R: Rng>(s: &mut [f64], bound: f64, rng: &mut R) {
    s.iter_mut().for_each(|w| *w = rng.gen_range(-bound..=bound));
}

impl FfnnModel {
    fn new<R: Rng>(input: usize, width: usize, n_hidden: usize, seq_len: usize, rng: &mut R) -> Self {
        let mut layers = Vec::with_capacity(n_hidden + 1);
        let mut fan_in = input;
        for i in 0..=n_hidden {
            let out = if i == n_hidden { OUTPUT_DIM } else { width };
            let bound = 1.0 / (fan_in as f64).sqrt();
            let mut d = Dense {
                w: Matrix::zeros(out, fan_in),
                b: vec![0.0; out],
            };
            uniform_fill(d.w.as_mut_slice(), bound, rng);
            uniform_fill(&mut d.b, bound, rng);
            layers.push(d);
            fan_in = width;
        }
        Self { layers, seq_len }
    }

    fn input(&self, data: &BinnedData, t: usize) -> Vec<f64> {
        (t + 1 - self.seq_len..=t).flat_map(|j| data.column(j).iter().copied()).collect()
    }

    /// Activations of every layer; `masks` scales hidden outputs when training.
    fn forward_all<R: Rng>(&self, x: Vec<f64>, dropout: f64, rng: Option<&mut R>) -> (Vec<Vec<f64>>, Vec<Option<Vec<f64>>>) {
        let last = self.layers.len() - 1;
        let mut acts = vec![x];
        let mut masks = Vec::with_capacity(last);
        let mut rng = rng;
        for (i, layer) in self.layers.iter().enumerate() {
            let a = acts.last().expect("input present");
            let mut z = layer.b.clone();
            if i == 0 {
                layer.w.gemv_add_sparse(a, &nonzero_indices(a), &mut z);
            } else {
                layer.w.gemv_add(a, &mut z);
            }
            if i < last {
                z.iter_mut().for_each(|v| *v = v.max(0.0));
                let mask = match rng.as_deref_mut() {
                    Some(r) if dropout > 0.0 => {
                        let keep = 1.0 / (1.0 - dropout);
                        let m: Vec<f64> = z.iter().map(|_| if r.gen::<f64>() < dropout { 0.0 } else { keep }).collect();
                        z.iter_mut().zip(&m).for_each(|(v, k)| *v *= k);
                        Some(m)
                    }
                    _ => None,
                };
                masks.push(mask);
            }
            acts.push(z);
        }
        (acts, masks)
    }

    fn backward(&self, acts: &[Vec<f64>], masks: &[Option<Vec<f64>>], d_out: &[f64], grad: &mut FfnnModel) {
        let mut delta = d_out.to_vec();
        for i in (0..self.layers.len()).rev() {
            let input = &acts[i];
            let g = &mut grad.layers[i];
            if i == 0 {
                g.w.rank1_add_sparse(&delta, input, &nonzero_indices(input));
            } else {
                g.w.rank1_add(&delta, input);
            }
            g.b.iter_mut().zip(&delta).for_each(|(a, d)| *a += d);
            if i == 0 {
                break;
            }
            let mut prev = vec![0.0; input.len()];
            self.layers[i].w.gemv_t_add(&delta, &mut prev);
            // input of layer i is the (masked) ReLU output of layer i-1
            if let Some(m) = &masks[i - 1] {
                prev.iter_mut().zip(m).for_each(|(p, k)| *p *= k);
            }
            prev.iter_mut().zip(input).for_each(|(p, &a)| {
                if a <= 0.0 {
                    *p = 0.0
                }
            });
            delta = prev;
        }
    }
}

impl ScrnnModel {
    fn bin_input(&self, data: &BinnedData, j: usize) -> Result<Vec<Signal>> {
        Ok(cochain_from_bin(&self.complex, data.counts(), data.binary(), j, self.n_col)?
            .into_iter()
            .map(|c| c.into_columns())
            .collect())
    }
}

impl Model {
    /// Builds and seeds a model for `data` (used for the input widths).
    /// `complex` is required by the simplicial architectures; for `gnn` it
    /// must have dimension 1.
    pub fn new(arch: Arch, cfg: &TrainConfig, n_neurons: usize, complex: Option<Arc<SimplicialComplex>>) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let net = match arch {
            Arch::Scrnn | Arch::Gnn => {
                let complex = complex.ok_or_else(|| Error::InvalidArgument(format!("{arch} needs a complex")))?;
                let k = complex.max_dim();
                if arch == Arch::Gnn && k != 1 {
                    return Err(Error::Validation(format!("gnn needs a 1-dimensional complex, got {k}")));
                }
                if complex.n_vertices() != n_neurons {
                    return Err(Error::DimensionMismatch {
                        what: "complex vertices",
                        expected: n_neurons,
                        got: complex.n_vertices(),
                    });
                }
                let mut sc = ScLayerStack::new(cfg.sc_layers, cfg.filters, cfg.degree, k, cfg.sc_activation)?;
                sc.init_uniform(&mut rng);
                let mut rnn = RnnStack::new(complex.total_count(), cfg.hidden_size, cfg.nn_layers, OUTPUT_DIM)?;
                rnn.init_uniform(&mut rng);
                Net::Scrnn(ScrnnModel {
                    complex,
                    sc,
                    rnn,
                    seq_len: cfg.seq_len,
                    n_col: cfg.n_col,
                })
            }
            Arch::Rnn => {
                let mut rnn = RnnStack::new(n_neurons, cfg.hidden_size, cfg.nn_layers, OUTPUT_DIM)?;
                rnn.init_uniform(&mut rng);
                Net::Rnn(RnnModel {
                    rnn,
                    seq_len: cfg.seq_len,
                })
            }
            Arch::Ffnn => Net::Ffnn(FfnnModel::new(
                n_neurons * cfg.seq_len,
                cfg.layer_width,
                cfg.nn_layers,
                cfg.seq_len,
                &mut rng,
            )),
        };
        Ok(Self { arch, net })
    }

    pub fn arch(&self) -> Arch {
        self.arch
    }

    pub fn net(&self) -> &Net {
        &self.net
    }

    pub fn complex(&self) -> Option<&Arc<SimplicialComplex>> {
        match &self.net {
            Net::Scrnn(m) => Some(&m.complex),
            _ => None,
        }
    }

    pub fn seq_len(&self) -> usize {
        match &self.net {
            Net::Scrnn(m) => m.seq_len,
            Net::Ffnn(m) => m.seq_len,
            Net::Rnn(m) => m.seq_len,
        }
    }

    /// Look-ahead columns consumed past the target bin, plus one.
    pub fn n_col(&self) -> usize {
        match &self.net {
            Net::Scrnn(m) => m.n_col,
            _ => 1,
        }
    }

    pub fn samples(&self, segment: Range<usize>) -> Vec<usize> {
        sample_indices(segment, self.seq_len(), self.n_col())
    }

    pub fn zeros_like(&self) -> Self {
        let mut z = self.clone();
        for s in z.params_mut() {
            s.iter_mut().for_each(|w| *w = 0.0);
        }
        z
    }

    pub fn params(&self) -> Vec<&[f64]> {
        match &self.net {
            Net::Scrnn(m) => {
                let mut v = m.sc.weight_slices();
                v.extend(m.rnn.param_slices());
                v
            }
            Net::Rnn(m) => m.rnn.param_slices(),
            Net::Ffnn(m) => m.layers.iter().flat_map(|d| [d.w.as_slice(), d.b.as_slice()]).collect(),
        }
    }

    pub fn params_mut(&mut self) -> Vec<&mut [f64]> {
        match &mut self.net {
            Net::Scrnn(m) => {
                let mut v = m.sc.weight_slices_mut();
                v.extend(m.rnn.param_slices_mut());
                v
            }
            Net::Rnn(m) => m.rnn.param_slices_mut(),
            Net::Ffnn(m) => m
                .layers
                .iter_mut()
                .flat_map(|d| [d.w.as_mut_slice(), d.b.as_mut_slice()])
                .collect(),
        }
    }

    pub fn num_params(&self) -> usize {
        self.params().iter().map(|s| s.len()).sum()
    }

    /// One name per scalar, in `params` order.
    pub fn param_names(&self) -> Vec<String> {
        match &self.net {
            Net::Scrnn(m) => {
                let mut names: Vec<String> = m
                    .sc
                    .weight_keys()
                    .into_iter()
                    .map(|(l, f, k, t)| format!("sc/{l}/{f}/{k}/{t}"))
                    .collect();
                names.extend(m.rnn.param_names("rnn"));
                names
            }
            Net::Rnn(m) => m.rnn.param_names("rnn"),
            Net::Ffnn(m) => {
                let mut names = Vec::new();
                for (i, d) in m.layers.iter().enumerate() {
                    for r in 0..d.w.rows() {
                        names.extend((0..d.w.cols()).map(|c| format!("ffnn/{i}/w/{r}/{c}")));
                    }
                    names.extend((0..d.b.len()).map(|r| format!("ffnn/{i}/b/{r}")));
                }
                names
            }
        }
    }

    pub fn named_params(&self) -> Vec<(String, f64)> {
        self.param_names()
            .into_iter()
            .zip(self.params().into_iter().flatten().copied())
            .collect()
    }

    /// Overwrites every parameter from `(name, value)` pairs; the names must
    /// match this model's exactly.
    pub fn load_named(&mut self, values: &[(String, f64)]) -> Result<()> {
        let names = self.param_names();
        if values.len() != names.len() {
            return Err(Error::Checkpoint(format!(
                "expected {} weights, found {}",
                names.len(),
                values.len()
            )));
        }
        let lookup: HashMap<&str, f64> = values.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        let mut flat = Vec::with_capacity(names.len());
        for n in &names {
            flat.push(*lookup.get(n.as_str()).ok_or_else(|| Error::Checkpoint(format!("missing weight {n}")))?);
        }
        let mut it = flat.into_iter();
        for s in self.params_mut() {
            for w in s.iter_mut() {
                *w = it.next().expect("counted above");
            }
        }
        Ok(())
    }

    fn check_window(&self, data: &BinnedData, t: usize) -> Result<()> {
        let s = self.seq_len();
        if t + 1 < s || t + self.n_col() > data.n_bins() {
            return Err(Error::OutOfRange {
                what: "target bin",
                index: t,
                limit: data.n_bins(),
            });
        }
        let expected = match &self.net {
            Net::Scrnn(m) => m.complex.n_vertices(),
            Net::Rnn(m) => m.rnn.input_dim(),
            Net::Ffnn(m) => m.layers[0].w.cols() / s,
        };
        if data.n_neurons() != expected {
            return Err(Error::DimensionMismatch {
                what: "neuron count",
                expected,
                got: data.n_neurons(),
            });
        }
        Ok(())
    }

    /// Prediction for the window ending at bin `t`.
    pub fn predict(&self, data: &BinnedData, t: usize) -> Result<Vec<f64>> {
        self.check_window(data, t)?;
        let s = self.seq_len();
        match &self.net {
            Net::Scrnn(m) => {
                let seq = (t + 1 - s..=t)
                    .map(|j| m.sc.forward_signals(&m.complex, m.bin_input(data, j)?).map(|(z, _)| z))
                    .collect::<Result<Vec<_>>>()?;
                m.rnn.forward(&seq)
            }
            Net::Rnn(m) => {
                let seq: Vec<Vec<f64>> = (t + 1 - s..=t).map(|j| data.column(j).to_vec()).collect();
                m.rnn.forward(&seq)
            }
            Net::Ffnn(m) => {
                let (mut acts, _) = m.forward_all::<ChaCha8Rng>(m.input(data, t), 0.0, None);
                Ok(acts.pop().expect("output layer"))
            }
        }
    }

    /// Squared-error loss (mean over the output components) of one sample.
    /// Its gradient, multiplied by `scale`, is added into `grad`.
    pub fn forward_backward<R: Rng>(
        &self,
        data: &BinnedData,
        t: usize,
        target: &[f64],
        scale: f64,
        dropout: f64,
        grad: &mut Model,
        rng: &mut R,
    ) -> Result<f64> {
        self.check_window(data, t)?;
        let s = self.seq_len();
        let grad_of = |y: &[f64]| -> (f64, Vec<f64>) {
            let m = y.len() as f64;
            let loss = y.iter().zip(target).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / m;
            let d = y.iter().zip(target).map(|(a, b)| scale * 2.0 * (a - b) / m).collect();
            (loss, d)
        };
        match (&self.net, &mut grad.net) {
            (Net::Scrnn(m), Net::Scrnn(g)) => {
                let mut zs = Vec::with_capacity(s);
                let mut traces = Vec::with_capacity(s);
                for j in t + 1 - s..=t {
                    let (z, tr) = m.sc.forward_signals(&m.complex, m.bin_input(data, j)?)?;
                    zs.push(z);
                    traces.push(tr);
                }
                // ReLU outputs are sums of nonnegative terms: zero entries carry no gradient
                let keep: Option<Vec<Vec<usize>>> = m
                    .sc
                    .activation()
                    .gates_zeros()
                    .then(|| zs.iter().map(|z| nonzero_indices(z)).collect());
                let trace = m.rnn.forward_train(zs, dropout, rng)?;
                let (loss, d) = grad_of(trace.output());
                let dz = m
                    .rnn
                    .backward(&trace, &d, &mut g.rnn, Some(keep.as_deref()))
                    .expect("input gradient requested");
                for (tr, d) in traces.iter().zip(&dz) {
                    m.sc.backward(&m.complex, tr, d, &mut g.sc);
                }
                Ok(loss)
            }
            (Net::Rnn(m), Net::Rnn(g)) => {
                let seq: Vec<Vec<f64>> = (t + 1 - s..=t).map(|j| data.column(j).to_vec()).collect();
                let trace = m.rnn.forward_train(seq, dropout, rng)?;
                let (loss, d) = grad_of(trace.output());
                m.rnn.backward(&trace, &d, &mut g.rnn, None);
                Ok(loss)
            }
            (Net::Ffnn(m), Net::Ffnn(g)) => {
                let (acts, masks) = m.forward_all(m.input(data, t), dropout, Some(rng));
                let (loss, d) = grad_of(acts.last().expect("output layer"));
                m.backward(&acts, &masks, &d, g);
                Ok(loss)
            }
            _ => Err(Error::Validation("gradient buffer has a different architecture".into())),
        }
    }
}

/// Builds one of the comparison baselines. `gnn` caps `complex` at dimension 1.
pub fn build_baseline(
    arch: Arch,
    cfg: &TrainConfig,
    n_neurons: usize,
    complex: Option<&SimplicialComplex>,
) -> Result<Model> {
    match arch {
        Arch::Ffnn | Arch::Rnn => Model::new(arch, cfg, n_neurons, None),
        Arch::Gnn => {
            let c = complex.ok_or_else(|| Error::InvalidArgument("gnn needs a complex".into()))?;
            Model::new(arch, cfg, n_neurons, Some(Arc::new(truncate_complex(c, 1)?)))
        }
        Arch::Scrnn => Err(Error::InvalidArgument("scrnn is not a baseline".into())),
    }
}

/// The `max_dim`-skeleton of a complex.
pub fn truncate_complex(c: &SimplicialComplex, max_dim: usize) -> Result<SimplicialComplex> {
    let top = max_dim.min(c.max_dim());
    let sets: Vec<Vec<usize>> = c.simplices(top).iter().map(|s| s.vertices().to_vec()).collect();
    SimplicialComplex::from_simplices(c.n_vertices(), max_dim, sets)
}

pub const WEIGHTS_FILE: &str = "weights.json";
pub const COMPLEX_FILE: &str = "complex.json";
pub const CONFIG_FILE: &str = "config.toml";
pub const META_FILE: &str = "meta.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub arch: Arch,
    pub kind: DataKind,
    pub n_neurons: usize,
    pub codec: TargetCodec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct NamedWeight {
    key: String,
    value: f64,
}

/// A trained model with everything needed to decode new data.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub model: Model,
    pub config: TrainConfig,
    pub codec: TargetCodec,
    pub n_neurons: usize,
}

impl Checkpoint {
    /// Writes weights, config echo, metadata and (for simplicial models) the
    /// complex into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let weights: Vec<NamedWeight> = self
            .model
            .named_params()
            .into_iter()
            .map(|(key, value)| NamedWeight { key, value })
            .collect();
        fs::write(dir.join(WEIGHTS_FILE), serde_json::to_string_pretty(&weights)?)?;
        fs::write(dir.join(CONFIG_FILE), self.config.to_toml_string()?)?;
        let meta = CheckpointMeta {
            arch: self.model.arch(),
            kind: self.codec.kind(),
            n_neurons: self.n_neurons,
            codec: self.codec.clone(),
        };
        fs::write(dir.join(META_FILE), serde_json::to_string_pretty(&meta)?)?;
        if let Some(c) = self.model.complex() {
            fs::write(dir.join(COMPLEX_FILE), serde_json::to_string(&c.to_dump())?)?;
        }
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let config = TrainConfig::load(&dir.join(CONFIG_FILE))?;
        let meta: CheckpointMeta = serde_json::from_str(&fs::read_to_string(dir.join(META_FILE))?)?;
        if meta.arch != config.arch {
            return Err(Error::Checkpoint(format!(
                "metadata says {} but config says {}",
                meta.arch, config.arch
            )));
        }
        let complex = if meta.arch.uses_complex() {
            let dump = serde_json::from_str(&fs::read_to_string(dir.join(COMPLEX_FILE))?)?;
            Some(Arc::new(SimplicialComplex::from_dump(&dump)?))
        } else {
            None
        };
        let mut model = Model::new(meta.arch, &config, meta.n_neurons, complex)?;
        let weights: Vec<NamedWeight> = serde_json::from_str(&fs::read_to_string(dir.join(WEIGHTS_FILE))?)?;
        let pairs: Vec<(String, f64)> = weights.into_iter().map(|w| (w.key, w.value)).collect();
        model.load_named(&pairs)?;
        Ok(Self {
            model,
            config,
            codec: meta.codec,
            n_neurons: meta.n_neurons,
        })
    }
}
