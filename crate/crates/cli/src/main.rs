//! `scrnn`: simulate spike data, train and evaluate decoders, search hyperparameters.

mod manifest;
mod plot;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use scrnn::metrics::ErrorReport;
use scrnn::model::{Arch, BinnedData, Checkpoint};
use scrnn::spikes::{detect_label_kind, load_dataset_dir, write_dataset_dir, DataKind, SpikeDataset, LABEL_FILE};
use scrnn::synth::{simulate_grid, simulate_hd, GridSimConfig, HdSimConfig};
use scrnn::train::{evaluate, fit, random_search, SearchSpace, TrainConfig};

use manifest::Manifest;
use plot::{Line, Panel};

#[derive(Parser)]
#[command(name = "scrnn", version = env!("CARGO_PKG_VERSION"), about = "Simplicial convolutional recurrent decoding of spike trains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Hd,
    Grid,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArchArg {
    Scrnn,
    Ffnn,
    Rnn,
    Gnn,
}

impl From<ArchArg> for Arch {
    fn from(a: ArchArg) -> Self {
        match a {
            ArchArg::Scrnn => Arch::Scrnn,
            ArchArg::Ffnn => Arch::Ffnn,
            ArchArg::Rnn => Arch::Rnn,
            ArchArg::Gnn => Arch::Gnn,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Span {
    Test,
    Train,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic head-direction or grid-cell dataset.
    Simulate {
        kind: Kind,
        /// TOML simulator settings; missing keys take defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a decoder and write its checkpoint and loss curve.
    Train {
        /// Dataset directory holding spikes.csv and labels.csv.
        #[arg(long)]
        data: PathBuf,
        /// TOML training config; when absent, the preset for the data kind and arch.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the architecture from the config.
        #[arg(long, value_enum)]
        arch: Option<ArchArg>,
        /// Overrides the seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode a dataset with a checkpoint and score it.
    Eval {
        /// Directory written by `train`.
        #[arg(long)]
        checkpoint: PathBuf,
        /// Dataset directory holding spikes.csv and labels.csv.
        #[arg(long)]
        data: PathBuf,
        /// Bins to score: the held-out block, the training block, or everything.
        #[arg(long, value_enum, default_value = "test")]
        span: Span,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
    /// Seeded random hyperparameter search.
    Search {
        /// Dataset directory holding spikes.csv and labels.csv.
        #[arg(long)]
        data: PathBuf,
        /// TOML lists of candidate values; defaults to the published lists.
        #[arg(long)]
        space: Option<PathBuf>,
        /// Number of sampled configurations to train.
        #[arg(long)]
        budget: usize,
        /// Base config for keys the space does not list.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the architecture from the config.
        #[arg(long, value_enum)]
        arch: Option<ArchArg>,
        /// Seed for sampling configurations.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().collect();
    match run(cli.command, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command, args: &[String]) -> Result<()> {
    let start = Instant::now();
    match command {
        Command::Simulate { kind, config, seed, out } => simulate(kind, config, seed, &out, args, start),
        Command::Train {
            data,
            config,
            arch,
            seed,
            out,
        } => train(&data, config, arch, seed, &out, args, start),
        Command::Eval {
            checkpoint,
            data,
            span,
            out,
        } => eval(&checkpoint, &data, span, &out, args, start),
        Command::Search {
            data,
            space,
            budget,
            config,
            arch,
            seed,
            out,
        } => search(&data, space, budget, config, arch, seed, &out, args, start),
    }
}

fn read_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_data(dir: &Path) -> Result<SpikeDataset> {
    let kind = detect_label_kind(&dir.join(LABEL_FILE)).with_context(|| format!("reading labels in {}", dir.display()))?;
    load_dataset_dir(dir, kind).with_context(|| format!("loading dataset {}", dir.display()))
}

fn simulate(kind: Kind, config: Option<PathBuf>, seed: Option<u64>, out: &Path, args: &[String], start: Instant) -> Result<()> {
    let (dataset, echo, seed) = match kind {
        Kind::Hd => {
            let mut cfg: HdSimConfig = config.as_deref().map(read_toml).transpose()?.unwrap_or_default();
            if let Some(s) = seed {
                cfg.seed = s;
            }
            (simulate_hd(&cfg)?, serde_json::to_value(&cfg)?, cfg.seed)
        }
        Kind::Grid => {
            let mut cfg: GridSimConfig = config.as_deref().map(read_toml).transpose()?.unwrap_or_default();
            if let Some(s) = seed {
                cfg.seed = s;
            }
            (simulate_grid(&cfg)?, serde_json::to_value(&cfg)?, cfg.seed)
        }
    };
    write_dataset_dir(&dataset, out)?;
    println!(
        "{} neurons, {} spikes, {:.1} s -> {}",
        dataset.n_neurons(),
        dataset.total_spikes(),
        dataset.t_end() - dataset.t_start(),
        out.display()
    );
    Manifest::new("simulate", args, echo, Some(seed), config.into_iter().collect(), start)
        .outputs(out, &["spikes.csv", "labels.csv"])
        .write(out)
}

fn train_config(path: Option<&Path>, kind: DataKind, arch: Option<ArchArg>, seed: Option<u64>) -> Result<TrainConfig> {
    let mut cfg = match path {
        Some(p) => TrainConfig::load(p).with_context(|| format!("loading config {}", p.display()))?,
        None => TrainConfig::preset(kind, arch.map(Arch::from).unwrap_or(Arch::Scrnn)),
    };
    if let Some(a) = arch {
        cfg.arch = a.into();
        if cfg.arch == Arch::Gnn {
            cfg.k_max = 1;
        }
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Serialize)]
struct CurveRow {
    epoch: usize,
    train_loss: f64,
    val_loss: f64,
}

fn train(
    data: &Path,
    config: Option<PathBuf>,
    arch: Option<ArchArg>,
    seed: Option<u64>,
    out: &Path,
    args: &[String],
    start: Instant,
) -> Result<()> {
    let dataset = load_data(data)?;
    let cfg = train_config(config.as_deref(), dataset.kind(), arch, seed)?;
    let exp = fit(&dataset, &cfg)?;
    let checkpoint = Checkpoint {
        model: exp.outcome.model.clone(),
        config: cfg.clone(),
        codec: exp.prepared.codec.clone(),
        n_neurons: dataset.n_neurons(),
    };
    checkpoint.save(out)?;
    let mut w = csv::Writer::from_path(out.join("loss_curve.csv"))?;
    if exp.outcome.curve.is_empty() {
        w.write_record(["epoch", "train_loss", "val_loss"])?;
    }
    for r in &exp.outcome.curve {
        w.serialize(CurveRow {
            epoch: r.epoch,
            train_loss: r.train_loss,
            val_loss: r.val_loss,
        })?;
    }
    w.flush()?;
    fs::write(out.join("report.json"), exp.report.summary_json()?)?;
    check_finite(&exp.report)?;
    println!(
        "{} trained for {} epochs (best epoch {}), held-out {}",
        cfg.arch,
        cfg.epochs,
        exp.outcome.best_epoch,
        describe(&exp.report)
    );
    let mut inputs = vec![data.to_path_buf()];
    inputs.extend(config);
    Manifest::new("train", args, serde_json::to_value(&cfg)?, Some(cfg.seed), inputs, start)
        .outputs(
            out,
            &["weights.json", "config.toml", "meta.json", "loss_curve.csv", "report.json"],
        )
        .outputs_if(out, "complex.json", cfg.arch.uses_complex())
        .extra("initial_val_loss", exp.outcome.initial_val_loss)
        .extra("best_epoch", exp.outcome.best_epoch)
        .write(out)
}

fn describe(r: &ErrorReport) -> String {
    match r {
        ErrorReport::Hd { mae_deg, aae_deg, .. } => format!("MAE {mae_deg:.3} deg, AAE {aae_deg:.3} deg"),
        ErrorReport::Grid { aed_cm, .. } => format!("AED {aed_cm:.3} cm"),
    }
}

fn check_finite(r: &ErrorReport) -> Result<()> {
    let ok = match r {
        ErrorReport::Hd { mae_deg, aae_deg, .. } => mae_deg.is_finite() && aae_deg.is_finite(),
        ErrorReport::Grid { aed_cm, .. } => aed_cm.is_finite(),
    };
    if !ok {
        bail!("summary metric is not finite");
    }
    Ok(())
}

fn eval(checkpoint: &Path, data: &Path, span: Span, out: &Path, args: &[String], start: Instant) -> Result<()> {
    let ck = Checkpoint::load(checkpoint).with_context(|| format!("loading checkpoint {}", checkpoint.display()))?;
    let dataset = load_data(data)?;
    if dataset.kind() != ck.codec.kind() {
        bail!(
            "checkpoint decodes {} but {} holds {} labels",
            ck.codec.kind(),
            data.display(),
            dataset.kind()
        );
    }
    let binned = BinnedData::from_dataset(&dataset, ck.config.t_bin, ck.config.p)?;
    let split = binned.split(ck.config.test_fraction)?;
    let segment = match span {
        Span::Test => split.test,
        Span::Train => split.train,
        Span::All => 0..binned.n_bins(),
    };
    let samples = ck.model.samples(segment);
    let report = evaluate(&ck.model, &binned, &ck.codec, &samples)?;
    fs::create_dir_all(out)?;
    fs::write(out.join("predictions.csv"), report.to_csv())?;
    fs::write(out.join("report.json"), report.summary_json()?)?;
    fs::write(out.join("plot.svg"), render_report(&report, ck.config.t_bin))?;
    check_finite(&report)?;
    println!("{} bins: {}", report.n_bins(), describe(&report));
    let echo = serde_json::json!({
        "checkpoint": checkpoint,
        "span": match span { Span::Test => "test", Span::Train => "train", Span::All => "all" },
        "train_config": ck.config,
    });
    Manifest::new(
        "eval",
        args,
        echo,
        None,
        vec![checkpoint.to_path_buf(), data.to_path_buf()],
        start,
    )
    .outputs(out, &["predictions.csv", "report.json", "plot.svg"])
    .write(out)
}

fn render_report(report: &ErrorReport, t_bin: f64) -> String {
    let time = |bin: usize| bin as f64 * t_bin;
    let panels = match report {
        ErrorReport::Hd { rows, .. } => vec![Panel {
            title: "Head direction".into(),
            y_label: "angle (deg)",
            lines: vec![
                Line {
                    label: "true",
                    color: "black",
                    points: rows.iter().map(|r| (time(r.bin), r.true_deg)).collect(),
                },
                Line {
                    label: "decoded",
                    color: "#d62728",
                    points: rows.iter().map(|r| (time(r.bin), r.decoded_deg)).collect(),
                },
            ],
        }],
        ErrorReport::Grid { rows, .. } => {
            let axis = |title: &str, y_label: &'static str, t: fn(&scrnn::metrics::PositionRow) -> f64, d: fn(&scrnn::metrics::PositionRow) -> f64| Panel {
                title: title.into(),
                y_label,
                lines: vec![
                    Line {
                        label: "true",
                        color: "black",
                        points: rows.iter().map(|r| (time(r.bin), t(r))).collect(),
                    },
                    Line {
                        label: "decoded",
                        color: "#d62728",
                        points: rows.iter().map(|r| (time(r.bin), d(r))).collect(),
                    },
                ],
            };
            vec![
                axis("x position", "x (cm)", |r| r.true_x, |r| r.decoded_x),
                axis("y position", "y (cm)", |r| r.true_y, |r| r.decoded_y),
                Panel {
                    title: "Euclidean error".into(),
                    y_label: "error (cm)",
                    lines: vec![Line {
                        label: "error",
                        color: "#1f77b4",
                        points: rows.iter().map(|r| (time(r.bin), r.error_cm)).collect(),
                    }],
                },
            ]
        }
    };
    plot::render(&panels, "time (s)")
}

#[derive(Serialize)]
struct LeaderboardRow {
    rank: usize,
    trial: usize,
    metric: f64,
    val_loss: f64,
    diverged: bool,
    epochs: usize,
    batch_size: usize,
    learning_rate: f64,
    dropout: f64,
    nn_layers: usize,
    hidden_size: usize,
    layer_width: usize,
    sc_layers: usize,
    filters: usize,
    degree: usize,
    seed: u64,
}

#[allow(clippy::too_many_arguments)]
fn search(
    data: &Path,
    space: Option<PathBuf>,
    budget: usize,
    config: Option<PathBuf>,
    arch: Option<ArchArg>,
    seed: u64,
    out: &Path,
    args: &[String],
    start: Instant,
) -> Result<()> {
    let dataset = load_data(data)?;
    let base = train_config(config.as_deref(), dataset.kind(), arch, None)?;
    let space = match &space {
        Some(p) => SearchSpace::load(p).with_context(|| format!("loading search space {}", p.display()))?,
        None => SearchSpace::table_s1(dataset.kind(), base.arch),
    };
    let result = random_search(&dataset, &base, &space, budget, seed)?;
    fs::create_dir_all(out)?;
    let mut w = csv::Writer::from_path(out.join("leaderboard.csv"))?;
    for (rank, t) in result.leaderboard.iter().enumerate() {
        let c = &t.config;
        w.serialize(LeaderboardRow {
            rank: rank + 1,
            trial: t.index,
            metric: t.metric,
            val_loss: t.val_loss,
            diverged: t.diverged,
            epochs: c.epochs,
            batch_size: c.batch_size,
            learning_rate: c.learning_rate,
            dropout: c.dropout,
            nn_layers: c.nn_layers,
            hidden_size: c.hidden_size,
            layer_width: c.layer_width,
            sc_layers: c.sc_layers,
            filters: c.filters,
            degree: c.degree,
            seed: c.seed,
        })?;
    }
    w.flush()?;
    let best = result.best();
    fs::write(out.join("best_config.toml"), best.config.to_toml_string()?)?;
    if !best.metric.is_finite() {
        bail!("every trial diverged");
    }
    println!("best of {budget}: trial {} with metric {:.3}", best.index, best.metric);
    let echo = serde_json::json!({ "base": base, "space": space, "budget": budget });
    let mut inputs = vec![data.to_path_buf()];
    inputs.extend(config);
    Manifest::new("search", args, echo, Some(seed), inputs, start)
        .outputs(out, &["leaderboard.csv", "best_config.toml"])
        .write(out)
}
