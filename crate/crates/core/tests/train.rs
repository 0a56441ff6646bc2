use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scrnn::model::{Arch, Model};
use scrnn::spikes::DataKind;
use scrnn::synth::{simulate_hd, HdSimConfig};
use scrnn::train::{fit, mse_loss, prepare, random_search, train, SearchSpace, TrainConfig};

fn fixture(seconds: f64) -> scrnn::spikes::SpikeDataset {
    simulate_hd(&HdSimConfig {
        duration_s: seconds,
        ..HdSimConfig::default()
    })
    .unwrap()
}

fn small(arch: Arch) -> TrainConfig {
    TrainConfig {
        epochs: 2,
        hidden_size: 8,
        sc_layers: 1,
        filters: 1,
        layer_width: 16,
        ..TrainConfig::preset(DataKind::Hd, arch)
    }
}

#[test]
fn batch_loss_is_the_mean_of_sample_losses() {
    let a = mse_loss(&[1.0, 0.0], &[0.0, 0.0]).unwrap();
    let b = mse_loss(&[0.0, 0.0], &[0.0, 0.0]).unwrap();
    assert_eq!((a + b) / 2.0, 0.25);
}

#[test]
fn zero_loss_sample_has_zero_gradient() {
    let d = fixture(30.0);
    let cfg = small(Arch::Scrnn);
    let p = prepare(&d, &cfg).unwrap();
    let model = Model::new(Arch::Scrnn, &cfg, d.n_neurons(), p.complex.clone()).unwrap();
    let t = model.samples(p.split.train.clone())[3];
    let target = model.predict(&p.data, t).unwrap();
    let mut grad = model.zeros_like();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let loss = model
        .forward_backward(&p.data, t, &target, 1.0, 0.0, &mut grad, &mut rng)
        .unwrap();
    assert_eq!(loss, 0.0);
    assert!(grad.params().iter().all(|s| s.iter().all(|&g| g == 0.0)));
}

#[test]
fn zero_learning_rate_leaves_weights_and_loss_flat() {
    let d = fixture(30.0);
    let cfg = TrainConfig {
        learning_rate: 0.0,
        dropout: 0.0,
        ..small(Arch::Rnn)
    };
    let p = prepare(&d, &cfg).unwrap();
    let model = Model::new(Arch::Rnn, &cfg, d.n_neurons(), None).unwrap();
    let before = model.named_params();
    let tr = model.samples(p.split.train.clone());
    let va = model.samples(p.split.test.clone());
    let out = train(model, &p.data, &p.codec, &tr, &va, &cfg).unwrap();
    assert_eq!(out.model.named_params(), before);
    assert!(out.curve.iter().all(|r| r.val_loss == out.initial_val_loss));
}

#[test]
fn one_epoch_of_one_batch_takes_one_step() {
    let d = fixture(30.0);
    let mut cfg = TrainConfig {
        epochs: 1,
        ..small(Arch::Ffnn)
    };
    let p = prepare(&d, &cfg).unwrap();
    let model = Model::new(Arch::Ffnn, &cfg, d.n_neurons(), None).unwrap();
    let tr = model.samples(p.split.train.clone());
    cfg.batch_size = tr.len();
    let va = model.samples(p.split.test.clone());
    let out = train(model, &p.data, &p.codec, &tr, &va, &cfg).unwrap();
    assert_eq!(out.optimizer_steps, 1);
    assert_eq!(out.curve.len(), 1);
}

#[test]
fn zero_epochs_keep_the_initial_weights() {
    let d = fixture(30.0);
    let cfg = TrainConfig {
        epochs: 0,
        ..small(Arch::Scrnn)
    };
    let e = fit(&d, &cfg).unwrap();
    let fresh = Model::new(Arch::Scrnn, &cfg, d.n_neurons(), e.prepared.complex.clone()).unwrap();
    assert!(e.outcome.curve.is_empty());
    assert_eq!(e.outcome.model.named_params(), fresh.named_params());
}

#[test]
fn identical_seeds_give_bitwise_identical_curves() {
    let d = fixture(60.0);
    let cfg = small(Arch::Scrnn);
    let a = fit(&d, &cfg).unwrap();
    let b = fit(&d, &cfg).unwrap();
    let bits = |e: &scrnn::train::Experiment| {
        e.outcome
            .curve
            .iter()
            .flat_map(|r| [r.train_loss.to_bits(), r.val_loss.to_bits()])
            .collect::<Vec<_>>()
    };
    assert_eq!(bits(&a), bits(&b));
    assert_eq!(a.outcome.model.named_params(), b.outcome.model.named_params());
    let c = fit(&d, &TrainConfig { seed: 8, ..cfg }).unwrap();
    assert_ne!(bits(&a), bits(&c));
}

#[test]
fn scrnn_halves_validation_loss_on_the_fixture() {
    let d = fixture(120.0);
    let cfg = TrainConfig {
        epochs: 50,
        ..TrainConfig::preset(DataKind::Hd, Arch::Scrnn)
    };
    let e = fit(&d, &cfg).unwrap();
    let best = e.outcome.curve.iter().map(|r| r.val_loss).fold(f64::INFINITY, f64::min);
    assert!(
        best <= 0.5 * e.outcome.initial_val_loss,
        "initial {} best {best}",
        e.outcome.initial_val_loss
    );
}

#[test]
fn search_is_reproducible_and_budget_one_returns_its_sample() {
    let d = fixture(30.0);
    let base = small(Arch::Rnn);
    let space = SearchSpace::from_toml_str("hidden_size = [4, 8, 12]\nlearning_rate = [0.001, 0.01]\n").unwrap();
    let a = random_search(&d, &base, &space, 3, 11).unwrap();
    let b = random_search(&d, &base, &space, 3, 11).unwrap();
    let key = |r: &scrnn::train::SearchResult| {
        r.leaderboard
            .iter()
            .map(|t| (t.index, t.config.hidden_size, t.metric.to_bits()))
            .collect::<Vec<_>>()
    };
    assert_eq!(key(&a), key(&b));
    assert!(a.leaderboard.windows(2).all(|w| w[0].metric <= w[1].metric));
    for t in &a.leaderboard {
        assert!([4, 8, 12].contains(&t.config.hidden_size));
    }
    let one = random_search(&d, &base, &space, 1, 5).unwrap();
    assert_eq!(one.leaderboard.len(), 1);
    assert_eq!(one.best().index, 0);
    assert!(random_search(&d, &base, &SearchSpace::default(), 1, 5).is_err());
}
