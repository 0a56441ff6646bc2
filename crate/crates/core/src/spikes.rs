//! Spike ingestion, binning and row-wise binarization.
//!
//! Spike times are discretized into half-open bins `[left, right)` of width
//! `t_bin`; a trailing partial bin is dropped. Each row of the resulting count
//! matrix is then binarized independently by keeping the smallest set of
//! highest-count bins that carries at least a fraction `p` of the row's spikes.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// File name of the spike records inside a dataset directory.
pub const SPIKE_FILE: &str = "spikes.csv";
/// File name of the label records inside a dataset directory.
pub const LABEL_FILE: &str = "labels.csv";

/// Relative slack used when snapping a time onto a bin edge.
const EDGE_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataKind {
    /// Head direction: one angle per sample, in degrees.
    Hd,
    /// Grid cells: one (x, y) position per sample, in centimeters.
    Grid,
}

impl FromStr for DataKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hd" => Ok(DataKind::Hd),
            "grid" => Ok(DataKind::Grid),
            other => Err(Error::Unknown {
                what: "data kind",
                value: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for DataKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataKind::Hd => f.write_str("hd"),
            DataKind::Grid => f.write_str("grid"),
        }
    }
}

/// Time-stamped behavioral ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LabelStream {
    Angles { times: Vec<f64>, degrees: Vec<f64> },
    Positions { times: Vec<f64>, xy: Vec<[f64; 2]> },
}

impl LabelStream {
    pub fn kind(&self) -> DataKind {
        match self {
            LabelStream::Angles { .. } => DataKind::Hd,
            LabelStream::Positions { .. } => DataKind::Grid,
        }
    }

    pub fn times(&self) -> &[f64] {
        match self {
            LabelStream::Angles { times, .. } | LabelStream::Positions { times, .. } => times,
        }
    }

    pub fn len(&self) -> usize {
        self.times().len()
    }

    pub fn is_empty(&self) -> bool {
        self.times().is_empty()
    }
}

/// Spike trains of `N` simultaneously recorded neurons plus ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpikeDataset {
    neurons: Vec<Vec<f64>>,
    labels: LabelStream,
    t_start: f64,
    t_end: f64,
}

impl SpikeDataset {
    /// Validates and wraps raw spike trains. Angles are wrapped into `[0, 360)`.
    pub fn new(
        neurons: Vec<Vec<f64>>,
        mut labels: LabelStream,
        t_start: f64,
        t_end: f64,
    ) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) || t_end < t_start {
            return Err(Error::Validation(format!(
                "invalid recording span [{t_start}, {t_end}]"
            )));
        }
        for (i, train) in neurons.iter().enumerate() {
            for (s, &t) in train.iter().enumerate() {
                if !t.is_finite() || t < t_start || t > t_end {
                    return Err(Error::Validation(format!(
                        "neuron {i}: spike time {t} outside [{t_start}, {t_end}]"
                    )));
                }
                if s > 0 && t < train[s - 1] {
                    return Err(Error::Validation(format!(
                        "neuron {i}: spike times not ascending at {t}"
                    )));
                }
            }
        }
        let times = labels.times();
        for w in times.windows(2) {
            if !(w[1] >= w[0]) {
                return Err(Error::Validation(format!(
                    "label timestamps not ascending at {}",
                    w[1]
                )));
            }
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::Validation("non-finite label timestamp".into()));
        }
        match &mut labels {
            LabelStream::Angles { times, degrees } => {
                if times.len() != degrees.len() {
                    return Err(Error::DimensionMismatch {
                        what: "angle labels",
                        expected: times.len(),
                        got: degrees.len(),
                    });
                }
                for a in degrees.iter_mut() {
                    if !a.is_finite() {
                        return Err(Error::Validation("non-finite angle label".into()));
                    }
                    *a = wrap_degrees(*a);
                }
            }
            LabelStream::Positions { times, xy } => {
                if times.len() != xy.len() {
                    return Err(Error::DimensionMismatch {
                        what: "position labels",
                        expected: times.len(),
                        got: xy.len(),
                    });
                }
                if xy.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::Validation("non-finite position label".into()));
                }
            }
        }
        Ok(Self {
            neurons,
            labels,
            t_start,
            t_end,
        })
    }

    pub fn neurons(&self) -> &[Vec<f64>] {
        &self.neurons
    }

    pub fn n_neurons(&self) -> usize {
        self.neurons.len()
    }

    pub fn labels(&self) -> &LabelStream {
        &self.labels
    }

    pub fn kind(&self) -> DataKind {
        self.labels.kind()
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn total_spikes(&self) -> usize {
        self.neurons.iter().map(Vec::len).sum()
    }
}

/// Integer spike counts, neurons × bins, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpikeCountMatrix {
    n_neurons: usize,
    n_bins: usize,
    t_start: f64,
    t_bin: f64,
    counts: Vec<u32>,
    /// Spikes per neuron that fell into the dropped trailing partial bin.
    discarded: Vec<usize>,
}

impl SpikeCountMatrix {
    /// Builds a matrix directly from rows; used for fixtures and tests.
    pub fn from_rows(rows: &[Vec<u32>], t_start: f64, t_bin: f64) -> Result<Self> {
        let n_bins = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_bins) {
            return Err(Error::InvalidArgument("ragged count rows".into()));
        }
        Ok(Self {
            n_neurons: rows.len(),
            n_bins,
            t_start,
            t_bin,
            counts: rows.iter().flatten().copied().collect(),
            discarded: vec![0; rows.len()],
        })
    }

    pub fn n_neurons(&self) -> usize {
        self.n_neurons
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn t_bin(&self) -> f64 {
        self.t_bin
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    #[inline]
    pub fn get(&self, neuron: usize, bin: usize) -> u32 {
        self.counts[neuron * self.n_bins + bin]
    }

    pub fn row(&self, neuron: usize) -> &[u32] {
        &self.counts[neuron * self.n_bins..(neuron + 1) * self.n_bins]
    }

    pub fn column(&self, bin: usize) -> Vec<u32> {
        (0..self.n_neurons).map(|i| self.get(i, bin)).collect()
    }

    /// Left and right edge of bin `j`.
    pub fn bin_edges(&self, bin: usize) -> (f64, f64) {
        (
            self.t_start + bin as f64 * self.t_bin,
            self.t_start + (bin + 1) as f64 * self.t_bin,
        )
    }

    pub fn discarded(&self) -> &[usize] {
        &self.discarded
    }
}

/// Row-wise binarized spike counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryMatrix {
    n_neurons: usize,
    n_bins: usize,
    p: f64,
    bits: Vec<u8>,
}

impl BinaryMatrix {
    /// Builds a matrix from explicit 0/1 rows.
    pub fn from_rows(rows: &[Vec<u8>], p: f64) -> Result<Self> {
        let n_bins = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_bins) {
            return Err(Error::InvalidArgument("ragged binary rows".into()));
        }
        if rows.iter().flatten().any(|&b| b > 1) {
            return Err(Error::InvalidArgument("binary entries must be 0 or 1".into()));
        }
        Ok(Self {
            n_neurons: rows.len(),
            n_bins,
            p,
            bits: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn n_neurons(&self) -> usize {
        self.n_neurons
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn get(&self, neuron: usize, bin: usize) -> bool {
        self.bits[neuron * self.n_bins + bin] != 0
    }

    pub fn row(&self, neuron: usize) -> &[u8] {
        &self.bits[neuron * self.n_bins..(neuron + 1) * self.n_bins]
    }

    /// Ascending indices of the neurons active in bin `j`.
    pub fn active(&self, bin: usize) -> Vec<usize> {
        (0..self.n_neurons).filter(|&i| self.get(i, bin)).collect()
    }
}

/// One ground-truth label per time bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LabelSeries {
    Angles(Vec<f64>),
    Positions(Vec<[f64; 2]>),
}

impl LabelSeries {
    pub fn len(&self) -> usize {
        match self {
            LabelSeries::Angles(a) => a.len(),
            LabelSeries::Positions(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> DataKind {
        match self {
            LabelSeries::Angles(_) => DataKind::Hd,
            LabelSeries::Positions(_) => DataKind::Grid,
        }
    }
}

pub fn wrap_degrees(a: f64) -> f64 {
    let w = a.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

/// Floor of `x`, except that values within `EDGE_SNAP` of an integer snap to it.
fn snapped_floor(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= EDGE_SNAP * r.abs().max(1.0) {
        r
    } else {
        x.floor()
    }
}

fn bin_count(t_start: f64, t_end: f64, t_bin: f64) -> usize {
    snapped_floor((t_end - t_start) / t_bin).max(0.0) as usize
}

fn bin_of(t: f64, t_start: f64, t_bin: f64) -> usize {
    snapped_floor((t - t_start) / t_bin).max(0.0) as usize
}

/// Counts every neuron's spikes per bin. Spikes in the trailing partial bin
/// (including any spike exactly at `t_end`) are dropped and reported.
pub fn bin_spikes(d: &SpikeDataset, t_bin: f64) -> Result<SpikeCountMatrix> {
    if !(t_bin > 0.0) || !t_bin.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "bin width must be positive, got {t_bin}"
        )));
    }
    if d.t_end - d.t_start < t_bin {
        return Err(Error::InvalidArgument(format!(
            "recording span {} shorter than one bin of {t_bin}",
            d.t_end - d.t_start
        )));
    }
    let n_bins = bin_count(d.t_start, d.t_end, t_bin);
    let n = d.n_neurons();
    let mut counts = vec![0u32; n * n_bins];
    let mut discarded = vec![0usize; n];
    for (i, train) in d.neurons.iter().enumerate() {
        for &t in train {
            let j = bin_of(t, d.t_start, t_bin);
            if j < n_bins {
                counts[i * n_bins + j] += 1;
            } else {
                discarded[i] += 1;
            }
        }
    }
    Ok(SpikeCountMatrix {
        n_neurons: n,
        n_bins,
        t_start: d.t_start,
        t_bin,
        counts,
        discarded,
    })
}

/// Bin order used for thresholding: count descending, then bin index ascending.
pub fn threshold_order(row: &[u32]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b)));
    order
}

/// Minimal number of highest-count bins whose summed count reaches `p` of the
/// row total. Returns 0 for a silent row.
pub fn threshold_count(row: &[u32], p: f64) -> usize {
    let total: u64 = row.iter().map(|&c| c as u64).sum();
    if total == 0 {
        return 0;
    }
    let mut sorted: Vec<u32> = row.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut cum = 0u64;
    for (m, &c) in sorted.iter().enumerate() {
        cum += c as u64;
        // the ratio form keeps the test exactly invariant under row scaling
        if cum as f64 / total as f64 >= p {
            return m + 1;
        }
    }
    row.len()
}

pub fn binarize_rows(a: &SpikeCountMatrix, p: f64) -> Result<BinaryMatrix> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "retained fraction p must lie in (0, 1], got {p}"
        )));
    }
    let mut bits = vec![0u8; a.n_neurons * a.n_bins];
    for i in 0..a.n_neurons {
        let row = a.row(i);
        let m = threshold_count(row, p);
        let out = &mut bits[i * a.n_bins..(i + 1) * a.n_bins];
        for &j in threshold_order(row).iter().take(m) {
            out[j] = 1;
        }
    }
    Ok(BinaryMatrix {
        n_neurons: a.n_neurons,
        n_bins: a.n_bins,
        p,
        bits,
    })
}

/// Signed shortest-arc difference `to - from`, in `[-180, 180)`.
pub fn angle_diff(from: f64, to: f64) -> f64 {
    (to - from + 180.0).rem_euclid(360.0) - 180.0
}

/// Circular mean in degrees, wrapped into `[0, 360)`.
pub fn circular_mean(degrees: &[f64]) -> f64 {
    let (s, c) = degrees.iter().fold((0.0, 0.0), |(s, c), a| {
        let r = a.to_radians();
        (s + r.sin(), c + r.cos())
    });
    wrap_degrees(s.atan2(c).to_degrees())
}

/// Position of `t` relative to the samples: `(lo, hi, frac)` such that the
/// interpolated value is `v[lo] + frac * (v[hi] - v[lo])`. Clamps outside the
/// sampled range.
fn bracket(times: &[f64], t: f64) -> (usize, usize, f64) {
    let last = times.len() - 1;
    let hi = times.partition_point(|&s| s <= t);
    if hi == 0 {
        return (0, 0, 0.0);
    }
    if hi > last {
        return (last, last, 0.0);
    }
    let lo = hi - 1;
    let span = times[hi] - times[lo];
    let frac = if span > 0.0 { (t - times[lo]) / span } else { 0.0 };
    (lo, hi, frac)
}

/// Per-bin labels: circular mean for angles, arithmetic mean for positions.
/// Bins without any sample are filled by interpolating at the bin center.
pub fn bin_labels(d: &SpikeDataset, t_bin: f64) -> Result<LabelSeries> {
    if !(t_bin > 0.0) || !t_bin.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "bin width must be positive, got {t_bin}"
        )));
    }
    if d.labels.is_empty() {
        return Err(Error::Empty("label stream"));
    }
    let n_bins = bin_count(d.t_start, d.t_end, t_bin);
    let times = d.labels.times();
    // sample index ranges per bin
    let mut ranges = vec![(0usize, 0usize); n_bins];
    let mut s = times.partition_point(|&t| t < d.t_start);
    for (j, range) in ranges.iter_mut().enumerate() {
        let begin = s;
        while s < times.len() && bin_of(times[s], d.t_start, t_bin) == j {
            s += 1;
        }
        *range = (begin, s);
    }
    let center = |j: usize| d.t_start + (j as f64 + 0.5) * t_bin;
    match &d.labels {
        LabelStream::Angles { degrees, .. } => Ok(LabelSeries::Angles(
            ranges
                .iter()
                .enumerate()
                .map(|(j, &(b, e))| {
                    if e > b {
                        circular_mean(&degrees[b..e])
                    } else {
                        let (lo, hi, f) = bracket(times, center(j));
                        wrap_degrees(degrees[lo] + f * angle_diff(degrees[lo], degrees[hi]))
                    }
                })
                .collect(),
        )),
        LabelStream::Positions { xy, .. } => Ok(LabelSeries::Positions(
            ranges
                .iter()
                .enumerate()
                .map(|(j, &(b, e))| {
                    if e > b {
                        let n = (e - b) as f64;
                        let (sx, sy) = xy[b..e]
                            .iter()
                            .fold((0.0, 0.0), |(sx, sy), p| (sx + p[0], sy + p[1]));
                        [sx / n, sy / n]
                    } else {
                        let (lo, hi, f) = bracket(times, center(j));
                        [
                            xy[lo][0] + f * (xy[hi][0] - xy[lo][0]),
                            xy[lo][1] + f * (xy[hi][1] - xy[lo][1]),
                        ]
                    }
                })
                .collect(),
        )),
    }
}

struct Metadata {
    neurons: Option<usize>,
    t_start: Option<f64>,
    t_end: Option<f64>,
}

fn parse_metadata(line: &str, meta: &mut Metadata) {
    for token in line.trim_start_matches('#').split_whitespace() {
        if let Some((k, v)) = token.split_once('=') {
            match k {
                "neurons" => meta.neurons = v.parse().ok(),
                "t_start" => meta.t_start = v.parse().ok(),
                "t_end" => meta.t_end = v.parse().ok(),
                _ => {}
            }
        }
    }
}

/// Splits a CSV text into numeric records, skipping blank lines, `#` comments
/// and an optional header (a first record whose first field is not numeric).
fn numeric_records(
    path: &Path,
    text: &str,
    width: usize,
    meta: &mut Metadata,
) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut out = Vec::new();
    let mut first = true;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            parse_metadata(line, meta);
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if first {
            first = false;
            if fields[0].parse::<f64>().is_err() {
                continue;
            }
        }
        let err = |msg: String| Error::Parse {
            path: path.display().to_string(),
            line: ln + 1,
            msg,
        };
        if fields.len() != width {
            return Err(err(format!("expected {width} fields, found {}", fields.len())));
        }
        let values = fields
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| err(format!("bad number {f:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        out.push((ln + 1, values));
    }
    Ok(out)
}

/// Reads a spike file (`neuron_id,spike_time_s`) and a label file
/// (`time_s,angle_deg` or `time_s,x_cm,y_cm`).
///
/// The recording span and neuron count are taken from a
/// `# neurons=N t_start=S t_end=E` comment when present; otherwise the span is
/// the label time range and the neuron count is the largest id plus one.
pub fn load_spike_dataset(
    spike_path: &Path,
    label_path: &Path,
    kind: DataKind,
) -> Result<SpikeDataset> {
    let mut meta = Metadata {
        neurons: None,
        t_start: None,
        t_end: None,
    };
    let spike_text = fs::read_to_string(spike_path)?;
    let spike_rows = numeric_records(spike_path, &spike_text, 2, &mut meta)?;
    let label_text = fs::read_to_string(label_path)?;
    let width = match kind {
        DataKind::Hd => 2,
        DataKind::Grid => 3,
    };
    let label_rows = numeric_records(label_path, &label_text, width, &mut meta)?;

    let times: Vec<f64> = label_rows.iter().map(|(_, v)| v[0]).collect();
    let labels = match kind {
        DataKind::Hd => LabelStream::Angles {
            times,
            degrees: label_rows.iter().map(|(_, v)| v[1]).collect(),
        },
        DataKind::Grid => LabelStream::Positions {
            times,
            xy: label_rows.iter().map(|(_, v)| [v[1], v[2]]).collect(),
        },
    };

    let mut neurons: Vec<Vec<f64>> = Vec::new();
    for (line, v) in &spike_rows {
        let id = v[0];
        if id < 0.0 || id.fract() != 0.0 {
            return Err(Error::Parse {
                path: spike_path.display().to_string(),
                line: *line,
                msg: format!("neuron id must be a non-negative integer, got {id}"),
            });
        }
        let id = id as usize;
        if id >= neurons.len() {
            neurons.resize(id + 1, Vec::new());
        }
        neurons[id].push(v[1]);
    }
    if let Some(n) = meta.neurons {
        if n < neurons.len() {
            return Err(Error::Validation(format!(
                "declared {n} neurons but found id {}",
                neurons.len() - 1
            )));
        }
        neurons.resize(n, Vec::new());
    }
    let (t_start, t_end) = match (meta.t_start, meta.t_end) {
        (Some(s), Some(e)) => (s, e),
        _ => {
            let t = labels.times();
            if t.is_empty() {
                return Err(Error::Empty("label stream"));
            }
            (t[0], t[t.len() - 1])
        }
    };
    SpikeDataset::new(neurons, labels, t_start, t_end)
}

/// Infers the label kind from the field count of the first record line.
pub fn detect_label_kind(label_path: &Path) -> Result<DataKind> {
    let text = fs::read_to_string(label_path)?;
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or(Error::Empty("label file"))?;
    match line.split(',').count() {
        2 => Ok(DataKind::Hd),
        3 => Ok(DataKind::Grid),
        n => Err(Error::Parse {
            path: label_path.display().to_string(),
            line: 1,
            msg: format!("expected 2 (angle) or 3 (position) fields, found {n}"),
        }),
    }
}

/// Loads `spikes.csv` + `labels.csv` from a dataset directory.
pub fn load_dataset_dir(dir: &Path, kind: DataKind) -> Result<SpikeDataset> {
    load_spike_dataset(&dir.join(SPIKE_FILE), &dir.join(LABEL_FILE), kind)
}

/// Writes the dataset as `spikes.csv` + `labels.csv` into `dir`.
pub fn write_dataset_dir(d: &SpikeDataset, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut records: Vec<(f64, usize)> = d
        .neurons
        .iter()
        .enumerate()
        .flat_map(|(i, train)| train.iter().map(move |&t| (t, i)))
        .collect();
    records.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut s = Vec::with_capacity(records.len() * 16);
    writeln!(
        s,
        "# neurons={} t_start={} t_end={}",
        d.n_neurons(),
        d.t_start,
        d.t_end
    )?;
    writeln!(s, "neuron_id,spike_time_s")?;
    for (t, i) in records {
        writeln!(s, "{i},{t}")?;
    }
    fs::write(dir.join(SPIKE_FILE), s)?;

    let mut l = Vec::new();
    match &d.labels {
        LabelStream::Angles { times, degrees } => {
            writeln!(l, "time_s,angle_deg")?;
            for (t, a) in times.iter().zip(degrees) {
                writeln!(l, "{t},{a}")?;
            }
        }
        LabelStream::Positions { times, xy } => {
            writeln!(l, "time_s,x_cm,y_cm")?;
            for (t, p) in times.iter().zip(xy) {
                writeln!(l, "{t},{},{}", p[0], p[1])?;
            }
        }
    }
    fs::write(dir.join(LABEL_FILE), l)?;
    Ok(())
}
