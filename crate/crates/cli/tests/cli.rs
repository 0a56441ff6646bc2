use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn scrnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scrnn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = scrnn(args);
    assert!(
        out.status.success(),
        "{args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_train_eval_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("hd");
    let sim_cfg = tmp.path().join("sim.toml");
    fs::write(&sim_cfg, "duration_s = 60.0\nn_cells = 12\n").unwrap();
    ok(&["simulate", "hd", "--config", s(&sim_cfg), "--seed", "3", "--out", s(&data)]);
    assert!(data.join("spikes.csv").exists() && data.join("labels.csv").exists());
    let m = manifest(&data);
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["seed"], 3);
    assert!(m["version"].as_str().unwrap().starts_with("v0.1.0-"));
    assert!(m["duration_s"].as_f64().unwrap() >= 0.0);

    let train_cfg = tmp.path().join("train.toml");
    fs::write(
        &train_cfg,
        "epochs = 2\nhidden_size = 8\nsc_layers = 1\nfilters = 1\nseq_len = 3\n",
    )
    .unwrap();
    let ck = tmp.path().join("ck");
    ok(&["train", "--data", s(&data), "--config", s(&train_cfg), "--out", s(&ck)]);
    for f in ["weights.json", "complex.json", "config.toml", "meta.json", "loss_curve.csv", "manifest.json"] {
        assert!(ck.join(f).exists(), "missing {f}");
    }
    let curve = fs::read_to_string(ck.join("loss_curve.csv")).unwrap();
    assert_eq!(curve.lines().next().unwrap(), "epoch,train_loss,val_loss");
    assert_eq!(curve.lines().count(), 3);

    let ev = tmp.path().join("ev");
    ok(&["eval", "--checkpoint", s(&ck), "--data", s(&data), "--out", s(&ev)]);
    let report: Value = serde_json::from_str(&fs::read_to_string(ev.join("report.json")).unwrap()).unwrap();
    let aae = report["aae_deg"].as_f64().unwrap();
    assert!(aae.is_finite() && (0.0..=180.0).contains(&aae));
    let svg = fs::read_to_string(ev.join("plot.svg")).unwrap();
    assert!(svg.contains("<polyline"));
    let preds = fs::read_to_string(ev.join("predictions.csv")).unwrap();
    assert!(preds.contains("# n_bins,"));

    // evaluating twice gives byte-identical predictions
    let ev2 = tmp.path().join("ev2");
    ok(&["eval", "--checkpoint", s(&ck), "--data", s(&data), "--out", s(&ev2)]);
    assert_eq!(preds, fs::read_to_string(ev2.join("predictions.csv")).unwrap());

    ok(&["eval", "--checkpoint", s(&ck), "--data", s(&data), "--span", "all", "--out", s(&ev2)]);
    let all: Value = serde_json::from_str(&fs::read_to_string(ev2.join("report.json")).unwrap()).unwrap();
    assert!(all["n_bins"].as_u64().unwrap() > report["n_bins"].as_u64().unwrap());
}

#[test]
fn eval_rejects_kind_mismatch() {
    let tmp = tempfile::tempdir().unwrap();
    let hd = tmp.path().join("hd");
    let grid = tmp.path().join("grid");
    let short = tmp.path().join("short.toml");
    fs::write(&short, "duration_s = 40.0\n").unwrap();
    ok(&["simulate", "hd", "--config", s(&short), "--out", s(&hd)]);
    ok(&["simulate", "grid", "--config", s(&short), "--out", s(&grid)]);
    let cfg = tmp.path().join("train.toml");
    fs::write(&cfg, "arch = \"ffnn\"\nepochs = 1\nlayer_width = 8\n").unwrap();
    let ck = tmp.path().join("ck");
    ok(&["train", "--data", s(&hd), "--config", s(&cfg), "--out", s(&ck)]);
    let out = scrnn(&["eval", "--checkpoint", s(&ck), "--data", s(&grid), "--out", s(&tmp.path().join("ev"))]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("hd"));
}

#[test]
fn search_writes_leaderboard_and_best_config() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("hd");
    let short = tmp.path().join("short.toml");
    fs::write(&short, "duration_s = 40.0\nn_cells = 10\n").unwrap();
    ok(&["simulate", "hd", "--config", s(&short), "--out", s(&data)]);
    let base = tmp.path().join("base.toml");
    fs::write(&base, "arch = \"rnn\"\nepochs = 1\n").unwrap();
    let space = tmp.path().join("space.toml");
    fs::write(&space, "hidden_size = [4, 8]\nlearning_rate = [0.001, 0.01]\n").unwrap();
    let out = tmp.path().join("search");
    ok(&[
        "search", "--data", s(&data), "--config", s(&base), "--space", s(&space), "--budget", "3", "--seed", "2", "--out",
        s(&out),
    ]);
    let board = fs::read_to_string(out.join("leaderboard.csv")).unwrap();
    assert_eq!(board.lines().count(), 4);
    assert!(board.starts_with("rank,trial,metric"));
    let best = fs::read_to_string(out.join("best_config.toml")).unwrap();
    assert!(best.contains("arch = \"rnn\""));
    assert_eq!(manifest(&out)["command"], "search");
}

#[test]
fn bad_input_exits_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    let out = scrnn(&["train", "--data", s(&tmp.path().join("missing")), "--out", s(tmp.path())]);
    assert!(!out.status.success());
    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, "no_such_key = 1\n").unwrap();
    let out = scrnn(&["simulate", "hd", "--config", s(&cfg), "--out", s(&tmp.path().join("x"))]);
    assert!(!out.status.success());
}

#[test]
fn simulate_is_byte_reproducible_and_rejects_unknown_kinds() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("short.toml");
    fs::write(&cfg, "duration_s = 30.0\n").unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("nested/b"));
    for dir in [&a, &b] {
        ok(&["simulate", "grid", "--config", s(&cfg), "--seed", "7", "--out", s(dir)]);
    }
    for f in ["spikes.csv", "labels.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
    }
    let out = scrnn(&["simulate", "place", "--out", s(&tmp.path().join("c"))]);
    assert!(!out.status.success());
}

#[test]
fn gnn_checkpoint_has_no_triangles_and_zero_epochs_give_an_empty_curve() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("hd");
    let short = tmp.path().join("short.toml");
    fs::write(&short, "duration_s = 40.0\n").unwrap();
    ok(&["simulate", "hd", "--config", s(&short), "--out", s(&data)]);
    let cfg = tmp.path().join("train.toml");
    fs::write(&cfg, "epochs = 0\nhidden_size = 8\n").unwrap();
    let ck = tmp.path().join("ck");
    ok(&["train", "--data", s(&data), "--config", s(&cfg), "--arch", "gnn", "--out", s(&ck)]);
    let dump: Value = serde_json::from_str(&fs::read_to_string(ck.join("complex.json")).unwrap()).unwrap();
    assert_eq!(dump["max_dim"], 1);
    assert_eq!(dump["simplices"].as_array().unwrap().len(), 2);
    let curve = fs::read_to_string(ck.join("loss_curve.csv")).unwrap();
    assert_eq!(curve.trim(), "epoch,train_loss,val_loss");
}

#[test]
fn best_search_config_retrains_unchanged() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("hd");
    let short = tmp.path().join("short.toml");
    fs::write(&short, "duration_s = 40.0\nn_cells = 10\n").unwrap();
    ok(&["simulate", "hd", "--config", s(&short), "--out", s(&data)]);
    let base = tmp.path().join("base.toml");
    fs::write(&base, "arch = \"ffnn\"\nepochs = 2\n").unwrap();
    let space = tmp.path().join("space.toml");
    fs::write(&space, "layer_width = [8, 16]\n").unwrap();
    let out = tmp.path().join("search");
    ok(&[
        "search", "--data", s(&data), "--config", s(&base), "--space", s(&space), "--budget", "2", "--seed", "4", "--out",
        s(&out),
    ]);
    let board = fs::read_to_string(out.join("leaderboard.csv")).unwrap();
    let best_metric: f64 = board.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    let ck = tmp.path().join("ck");
    ok(&["train", "--data", s(&data), "--config", s(&out.join("best_config.toml")), "--out", s(&ck)]);
    let report: Value = serde_json::from_str(&fs::read_to_string(ck.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["aae_deg"].as_f64().unwrap(), best_metric);
}
