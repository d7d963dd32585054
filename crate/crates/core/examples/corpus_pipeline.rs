// Raw CSV corpus to reports: ingest, window, extract, rank, then the
// single-channel and leave-n-out multi-channel experiments.

use egfc::corpus::{ingest_corpus, FeatureCorpus};
use egfc::eval::{multi_channel_experiment, rank_corpus, single_channel_experiment};
use egfc::ranking::band_class_correlation;
use egfc::report::{write_multi_channel_csv, write_single_channel_csv};
use egfc::synthetic::write_demo_corpus;
use egfc::RunConfig;

fn main() -> egfc::Result<()> {
    let dir = std::env::temp_dir().join(format!("egfc-corpus-{}", std::process::id()));
    let manifest = write_demo_corpus(&dir, 3, 120.0, 42)?;
    let (m, segments) = ingest_corpus(&manifest)?;
    println!("{} recordings over channels {:?}", segments.len(), m.channels);

    let cfg = RunConfig {
        window_seconds: 2.0,
        leave_out: 10,
        ..RunConfig::default()
    };
    let corpus = FeatureCorpus::from_segments(&segments, &cfg.extractor, cfg.window_seconds)?;
    println!("{} samples x {} features", corpus.len(), corpus.layout.dim());

    for b in band_class_correlation(&corpus.features(), &corpus.labels(), &corpus.layout, cfg.band_stat)? {
        println!(
            "{:<6} global {:.3}  left {:.3}  right {:.3}",
            b.band, b.global, b.left, b.right
        );
    }

    let single = single_channel_experiment(&corpus, &cfg)?;
    for r in &single.rows {
        println!("{:<4} acc {:.3}  c_avg {:.2}", r.channel, r.accuracy, r.c_avg);
    }

    let cols: Vec<usize> = (0..corpus.layout.dim()).collect();
    let ranking = rank_corpus(&corpus, &cols, &cfg)?;
    println!(
        "top features: {:?}",
        ranking
            .iter()
            .take(5)
            .map(|s| corpus.layout.name(s.feature))
            .collect::<Vec<_>>()
    );
    let multi = multi_channel_experiment(&corpus, &ranking, &cfg)?;
    for r in &multi.rows {
        println!(
            "{:>3} features  acc {:.3}  c_avg {:.2}  {:.3} ms/sample",
            r.features, r.accuracy, r.c_avg, r.ms_per_sample
        );
    }

    write_single_channel_csv(&dir.join("single_channel.csv"), &single)?;
    let table = dir.join("multi_channel.csv");
    write_multi_channel_csv(&table, &multi)?;
    print!(
        "{}",
        std::fs::read_to_string(&table).map_err(|e| egfc::Error::io(&table, e))?
    );
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}
