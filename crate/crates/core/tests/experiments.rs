use std::time::Instant;

use egfc::corpus::{ingest_corpus, FeatureCorpus};
use egfc::eval::{multi_channel_experiment, normalized_stream, rank_corpus, single_channel_experiment};
use egfc::features::{Band, BandStat};
use egfc::ranking::{band_class_correlation, Hemisphere};
use egfc::synthetic::write_demo_corpus;
use egfc::{run_stream, Granule, HyperParams, Label, RuleBase, RunConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn demo(window: f64) -> FeatureCorpus {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_demo_corpus(dir.path(), 2, 120.0, 17).unwrap();
    let (_, segs) = ingest_corpus(&manifest).unwrap();
    FeatureCorpus::from_segments(&segs, &Default::default(), window).unwrap()
}

fn cfg() -> RunConfig {
    RunConfig {
        window_seconds: 2.0,
        leave_out: 10,
        ..RunConfig::default()
    }
}

#[test]
fn informative_channels_beat_noise_channels() {
    let corpus = demo(2.0);
    let cfg = cfg();
    let run = |channels: &[&str]| {
        let cols: Vec<usize> = (0..corpus.layout.dim())
            .filter(|&f| channels.contains(&corpus.layout.info(f).channel))
            .collect();
        let stream = normalized_stream(&corpus, &cols, &cfg).unwrap();
        let mut m = RuleBase::new(cols.len(), cfg.model).unwrap();
        run_stream(&mut m, &stream, cfg.label_delay).unwrap().accuracy
    };
    let signal = run(&["O1", "O2"]);
    let noise = run(&["Af3", "Af4"]);
    assert!(signal > 0.9, "{signal}");
    assert!(noise < 0.45, "{noise}");
}

#[test]
fn ranking_puts_signal_features_first_and_pruning_keeps_accuracy() {
    let corpus = demo(2.0);
    let cfg = cfg();
    let cols: Vec<usize> = (0..corpus.layout.dim()).collect();
    let ranking = rank_corpus(&corpus, &cols, &cfg).unwrap();
    for s in ranking.iter().take(5) {
        let ch = corpus.layout.info(s.feature).channel;
        assert!(ch == "O1" || ch == "O2", "{}", corpus.layout.name(s.feature));
    }
    let table = multi_channel_experiment(&corpus, &ranking, &cfg).unwrap();
    assert_eq!(
        table.rows.iter().map(|r| r.features).collect::<Vec<_>>(),
        [40, 30, 20, 10]
    );
    // the first round drops mostly noise columns and costs nothing
    let (full, pruned) = (table.rows[0].accuracy, table.rows[1].accuracy);
    assert!(pruned >= full - 0.02, "{pruned} vs {full}");
    // the smallest subset is all signal and still far above chance
    assert!(table.subsets[3]
        .iter()
        .all(|&f| corpus.layout.info(f).channel.starts_with('O')));
    assert!(table.rows[3].accuracy > 0.8, "{}", table.rows[3].accuracy);
    // fewer features, fewer rules
    for w in table.rows.windows(2) {
        assert!(w[1].c_avg < w[0].c_avg);
    }
}

#[test]
fn single_channel_rows_match_independent_runs() {
    let corpus = demo(2.0);
    let parallel = single_channel_experiment(&corpus, &cfg()).unwrap();
    let serial = single_channel_experiment(
        &corpus,
        &RunConfig {
            parallel: false,
            ..cfg()
        },
    )
    .unwrap();
    assert_eq!(parallel.rows.len(), 4);
    for (c, (p, s)) in parallel.rows.iter().zip(&serial.rows).enumerate() {
        assert_eq!(p.channel, corpus.layout.channels[c]);
        assert_eq!((p.accuracy, p.c_avg), (s.accuracy, s.c_avg));

        let cols: Vec<usize> = (10 * c..10 * c + 10).collect();
        let stream = normalized_stream(&corpus, &cols, &cfg()).unwrap();
        let mut m = RuleBase::new(10, HyperParams::default()).unwrap();
        let r = run_stream(&mut m, &stream, cfg().label_delay).unwrap();
        assert_eq!((p.accuracy, p.c_avg), (r.accuracy, r.c_avg));
    }
    let hemis: Vec<Hemisphere> = parallel.rows.iter().map(|r| r.hemisphere).collect();
    assert_eq!(
        hemis,
        [Hemisphere::Left, Hemisphere::Right, Hemisphere::Left, Hemisphere::Right]
    );
    let (la, lc) = parallel.left_average.unwrap();
    assert!((la - (parallel.rows[0].accuracy + parallel.rows[2].accuracy) / 2.0).abs() < 1e-15);
    assert!((lc - (parallel.rows[0].c_avg + parallel.rows[2].c_avg) / 2.0).abs() < 1e-15);
}

#[test]
fn channel_subset_and_missing_channels() {
    let corpus = demo(2.0);
    let cfg = RunConfig {
        channels: Some(vec!["o2".into(), "Cz".into()]),
        ..cfg()
    };
    let t = single_channel_experiment(&corpus, &cfg).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.rows[0].channel, "O2");
    assert_eq!(t.missing, ["Cz"]);
    assert!(t.left_average.is_none());
}

#[test]
fn band_summary_finds_the_class_rhythms() {
    let corpus = demo(2.0);
    let bands = band_class_correlation(&corpus.features(), &corpus.labels(), &corpus.layout, BandStat::Max).unwrap();
    assert_eq!(bands.len(), 5);
    let gamma = bands.iter().find(|b| b.band == Band::Gamma).unwrap();
    for b in bands.iter().filter(|b| b.band != Band::Gamma) {
        assert!(b.global > gamma.global, "{} vs gamma", b.band);
        assert!((b.global - b.left - b.right).abs() < 1e-12);
    }
}

#[test]
fn processed_csv_round_trip_preserves_runs() {
    let corpus = demo(2.0);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("f.csv");
    corpus.write_csv(&p).unwrap();
    let back = FeatureCorpus::read_csv(&p).unwrap();
    assert_eq!(back, corpus);
    let a = single_channel_experiment(&corpus, &cfg()).unwrap();
    let b = single_channel_experiment(&back, &cfg()).unwrap();
    assert_eq!(
        a.rows.iter().map(|r| r.accuracy).collect::<Vec<_>>(),
        b.rows.iter().map(|r| r.accuracy).collect::<Vec<_>>()
    );
}

fn classify_ns(rules: usize, dims: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(rules as u64);
    let mut m = RuleBase::new(dims, HyperParams::default()).unwrap();
    for k in 0..rules {
        let x: Vec<f64> = (0..dims).map(|_| rng.gen()).collect();
        m.push_granule(Granule::new(&x, Some(Label(1 + k as u32 % 4))).unwrap())
            .unwrap();
    }
    let probes: Vec<Vec<f64>> = (0..300).map(|_| (0..dims).map(|_| rng.gen()).collect()).collect();
    // best of several passes to shed scheduler noise
    (0..5)
        .map(|_| {
            let t0 = Instant::now();
            for x in &probes {
                std::hint::black_box(m.classify(x).unwrap());
            }
            t0.elapsed().as_nanos() as f64 / probes.len() as f64
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn classify_cost_grows_with_rule_count() {
    let small = classify_ns(8, 64);
    let large = classify_ns(64, 64);
    // eight times the rules; demand clearly super-constant growth
    assert!(large > 3.0 * small, "8 rules {small} ns, 64 rules {large} ns");
}

#[test]
fn empty_rule_base_abstains() {
    let m = RuleBase::new(140, HyperParams::default()).unwrap();
    let e = m.classify(&vec![0.5; 140]).unwrap();
    assert_eq!(e.label, None);
    assert_eq!(e.winning_rule, None);
}
