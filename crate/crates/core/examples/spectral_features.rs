// Band features of a 10 s window holding a 10 Hz rhythm plus slow drift and
// noise.

use std::f64::consts::PI;

use egfc::features::{magnitude_spectrum, FeatureExtractor, RawWindow, Recording};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> egfc::Result<()> {
    let fs = 128.0;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let noise = Normal::new(0.0, 0.3).unwrap();
    let signal: Vec<f64> = (0..1280)
        .map(|t| {
            let t = t as f64 / fs;
            (2.0 * PI * 10.0 * t).sin() + 0.5 * (2.0 * PI * 2.0 * t).sin() + noise.sample(&mut rng)
        })
        .collect();

    let spectrum = magnitude_spectrum(&RawWindow::new("O1", signal.clone(), fs)?)?;
    let (peak_k, peak) = spectrum
        .magnitudes
        .iter()
        .enumerate()
        .skip(1)
        .fold((0, 0.0), |acc, (k, &m)| if m > acc.1 { (k, m) } else { acc });
    println!(
        "bin width {} Hz, peak {:.1} at {} Hz",
        spectrum.bin_hz,
        peak,
        spectrum.frequency(peak_k)
    );

    let rec = Recording::new(fs, vec!["O1".into()], vec![signal])?;
    let extractor = FeatureExtractor::default();
    let feats = extractor.extract_recording(&rec, 10.0)?;
    let layout = extractor.layout(vec!["O1".into()]);
    for (name, v) in layout.names().iter().zip(&feats[0]) {
        println!("{name:<14} {v:>10.3}");
    }
    Ok(())
}
