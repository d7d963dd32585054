//! The `egfc` command line.
//!
//! Exit status: 0 on success, 1 when a run fails or a synthetic check does not
//! pass, 2 on usage errors (unknown flags, bad config values).

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::RunConfig;
use crate::corpus::{ingest_corpus, FeatureCorpus};
use crate::error::Error;
use crate::eval::{
    created_unlabeled, multi_channel_experiment, normalized_stream, rank_corpus, run_stream, single_channel_experiment,
    EvalReport, LabelDelay,
};
use crate::granule::{Granule, Label};
use crate::ranking::band_class_correlation;
use crate::report::{
    write_band_csv, write_eval_csv, write_multi_channel_csv, write_ranking_csv, write_single_channel_csv,
    write_trace_csv, RunResult, Summary,
};
use crate::rule_base::{HyperParams, InactivityHorizon, RuleBase};
use crate::synthetic::{generate_synthetic, Preset, SyntheticSpec};

/// `println!` that exits quietly when stdout is closed (e.g. piped into
/// `head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if let Err(e) = writeln!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(EXIT_OK);
            }
        }
    }};
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Window length beyond which single-channel runs are known to fall below
/// the random baseline on the games corpus.
const LONG_WINDOW_SECONDS: f64 = 300.0;

#[derive(Debug, Parser)]
#[command(
    name = "egfc",
    version,
    about = "Evolving Gaussian fuzzy classifier for EEG and synthetic streams"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// TOML run configuration; flags below override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Directory for reports.
    #[arg(
        long,
        global = true,
        env = "EGFC_OUT_DIR",
        default_value = "egfc-out",
        value_name = "DIR"
    )]
    pub out_dir: PathBuf,
    /// Initial activation threshold.
    #[arg(long, global = true)]
    pub rho0: Option<f64>,
    /// Merge distance threshold.
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Inactivity horizon in steps, or `inf`.
    #[arg(long, global = true)]
    pub hr: Option<InactivityHorizon>,
    /// Steps between an estimate and its label, or `never`.
    #[arg(long, global = true)]
    pub label_delay: Option<LabelDelay>,
    /// Fraction of labels revealed to the learner.
    #[arg(long, global = true)]
    pub label_visibility: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Window length in seconds.
    #[arg(long, global = true)]
    pub window: Option<f64>,
    /// Run experiments one after another instead of in parallel.
    #[arg(long, global = true)]
    pub serial: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Window a raw corpus and write the processed-sample CSV.
    Extract {
        /// Corpus manifest (TOML).
        manifest: PathBuf,
        /// Output CSV (default: <out-dir>/features.csv).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rank features by class relevance minus redundancy.
    Rank {
        /// Processed-sample CSV or corpus manifest.
        input: PathBuf,
    },
    /// One model per channel over its 10 band features.
    RunSingle {
        /// Processed-sample CSV or corpus manifest.
        input: PathBuf,
    },
    /// One model per leave-n-out feature subset.
    RunMulti {
        /// Processed-sample CSV or corpus manifest.
        input: PathBuf,
    },
    /// Run synthetic streams and check them against expected outcomes.
    Synth {
        /// separable4, semi20, drift, shuffled, or all.
        #[arg(long, default_value = "separable4")]
        preset: String,
        /// Custom stream spec (TOML); replaces --preset and skips checks.
        #[arg(long, value_name = "FILE")]
        spec: Option<PathBuf>,
    },
    /// Measure per-sample classify + learn latency.
    Bench {
        /// Processed-sample CSV or corpus manifest; synthetic data when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 140)]
        dims: usize,
        #[arg(long, default_value_t = 3360)]
        samples: usize,
        /// Also time classification against rule bases of these sizes.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64")]
        rule_counts: Vec<usize>,
    },
    /// Print a saved rule base.
    Inspect {
        /// Rule-base snapshot (JSON).
        snapshot: PathBuf,
        /// Dump the full snapshot as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Run(e.into())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn build_config(g: &GlobalOpts) -> CliResult<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p).map_err(|e| Failure::Usage(e.to_string()))?,
        None => RunConfig::default(),
    };
    if let Some(v) = g.rho0 {
        cfg.model.rho0 = v;
    }
    if let Some(v) = g.delta {
        cfg.model.delta = v;
    }
    if let Some(v) = g.hr {
        cfg.model.h_r = v;
    }
    if let Some(v) = g.label_delay {
        cfg.label_delay = v;
    }
    if let Some(v) = g.label_visibility {
        cfg.label_visibility = v;
    }
    if let Some(v) = g.seed {
        cfg.seed = v;
    }
    if let Some(v) = g.window {
        cfg.window_seconds = v;
    }
    if g.serial {
        cfg.parallel = false;
    }
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(cfg)
}

fn out_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn is_manifest(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"))
}

/// Loads features from a processed CSV, or ingests and extracts a manifest.
/// Returns the corpus and the seconds spent.
fn load_features(input: &Path, cfg: &mut RunConfig, window_flag: bool) -> CliResult<(FeatureCorpus, f64)> {
    let t0 = Instant::now();
    let corpus = if is_manifest(input) {
        let (_, segments) = ingest_corpus(input)?;
        FeatureCorpus::from_segments(&segments, &cfg.extractor, cfg.window_seconds)?
    } else {
        let corpus = FeatureCorpus::read_csv(input)?;
        if window_flag && corpus.window_seconds != cfg.window_seconds {
            return Err(Failure::Usage(format!(
                "--window {} does not match the {} s windows in {}; re-run extract",
                cfg.window_seconds,
                corpus.window_seconds,
                input.display()
            )));
        }
        cfg.window_seconds = corpus.window_seconds;
        corpus
    };
    if corpus.is_empty() {
        return Err(Failure::Run(Error::InvalidParameter(format!(
            "{} yields no samples at {} s windows",
            input.display(),
            cfg.window_seconds
        ))));
    }
    Ok((corpus, t0.elapsed().as_secs_f64()))
}

fn feature_columns(corpus: &FeatureCorpus, cfg: &RunConfig) -> CliResult<Vec<usize>> {
    let names = corpus.layout.names();
    match &cfg.features {
        None => Ok((0..names.len()).collect()),
        Some(wanted) => wanted
            .iter()
            .map(|w| {
                names
                    .iter()
                    .position(|n| n.eq_ignore_ascii_case(w))
                    .ok_or_else(|| Failure::Usage(format!("unknown feature {w:?}")))
            })
            .collect(),
    }
}

fn write_report_files(dir: &Path, prefix: &str, report: &EvalReport) -> CliResult<()> {
    write_eval_csv(&out_path(dir, &format!("{prefix}steps.csv")), report)?;
    write_trace_csv(
        &out_path(dir, &format!("{prefix}trace.csv")),
        &report.structural_trace(),
    )?;
    Ok(())
}

fn write_model(path: &Path, model: &RuleBase) -> CliResult<()> {
    std::fs::write(path, model.to_json()?).map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn execute(cli: Cli) -> CliResult<i32> {
    let mut cfg = build_config(&cli.global)?;
    let dir = cli.global.out_dir.clone();
    if !matches!(cli.command, Command::Inspect { .. }) {
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }
    let window_flag = cli.global.window.is_some();
    match cli.command {
        Command::Extract { manifest, output } => {
            let (corpus, secs) = load_features(&manifest, &mut cfg, window_flag)?;
            let path = output.unwrap_or_else(|| out_path(&dir, "features.csv"));
            corpus.write_csv(&path)?;
            out!(
                "wrote {} samples x {} features to {}",
                corpus.len(),
                corpus.layout.dim(),
                path.display()
            );
            let mut s = Summary::new("extract", &cfg);
            s.preprocessing_seconds = secs;
            s.results = json!({ "samples": corpus.len(), "features": corpus.layout.dim(), "output": path });
            s.write(&out_path(&dir, "summary.json"))?;
        }
        Command::Rank { input } => {
            let (corpus, secs) = load_features(&input, &mut cfg, window_flag)?;
            let cols = feature_columns(&corpus, &cfg)?;
            let ranking = rank_corpus(&corpus, &cols, &cfg)?;
            write_ranking_csv(&out_path(&dir, "ranking.csv"), &ranking, &corpus.layout)?;
            let bands = band_class_correlation(&corpus.features(), &corpus.labels(), &corpus.layout, cfg.band_stat)?;
            write_band_csv(&out_path(&dir, "bands.csv"), &bands)?;
            out!("rank  feature               relevance  redundancy      score");
            for s in ranking.iter().take(10) {
                out!(
                    "{:>4}  {:<20} {:>10.4} {:>11.4} {:>10.4}",
                    s.rank,
                    corpus.layout.name(s.feature),
                    s.relevance,
                    s.redundancy,
                    s.score
                );
            }
            let mut s = Summary::new("rank", &cfg);
            s.preprocessing_seconds = secs;
            s.results = json!({
                "top": ranking.iter().take(10).map(|s| corpus.layout.name(s.feature)).collect::<Vec<_>>(),
                "bands": bands,
            });
            s.write(&out_path(&dir, "summary.json"))?;
        }
        Command::RunSingle { input } => {
            let mut warnings = Vec::new();
            if cfg.window_seconds >= LONG_WINDOW_SECONDS {
                let w = format!(
                    "{} s windows leave very few samples per stream; on the games EEG corpus 5-minute \
                     windows give single-channel accuracy below the 0.25 random baseline",
                    cfg.window_seconds
                );
                eprintln!("warning: {w}");
                warnings.push(w);
            }
            let (corpus, secs) = load_features(&input, &mut cfg, window_flag)?;
            let table = single_channel_experiment(&corpus, &cfg)?;
            for m in &table.missing {
                let w = format!("channel {m:?} not in corpus");
                eprintln!("warning: {w}");
                warnings.push(w);
            }
            write_single_channel_csv(&out_path(&dir, "single_channel.csv"), &table)?;
            out!("channel  accuracy   c_avg  cpu_s");
            for r in &table.rows {
                out!(
                    "{:<7} {:>9.4} {:>7.2} {:>6.3}",
                    r.channel,
                    r.accuracy,
                    r.c_avg,
                    r.cpu_seconds
                );
            }
            for (side, avg) in [("left", table.left_average), ("right", table.right_average)] {
                if let Some((a, c)) = avg {
                    out!("{side:<7} {a:>9.4} {c:>7.2}");
                }
            }
            let mut s = Summary::new("run-single", &cfg);
            s.preprocessing_seconds = secs;
            s.classifier_seconds = table.rows.iter().map(|r| r.cpu_seconds).sum();
            s.results = serde_json::to_value(&table)?;
            s.warnings = warnings;
            s.write(&out_path(&dir, "summary.json"))?;
        }
        Command::RunMulti { input } => {
            let (corpus, secs) = load_features(&input, &mut cfg, window_flag)?;
            let cols = feature_columns(&corpus, &cfg)?;
            let ranking = rank_corpus(&corpus, &cols, &cfg)?;
            write_ranking_csv(&out_path(&dir, "ranking.csv"), &ranking, &corpus.layout)?;
            let table = multi_channel_experiment(&corpus, &ranking, &cfg)?;
            write_multi_channel_csv(&out_path(&dir, "multi_channel.csv"), &table)?;
            out!("features  accuracy   c_avg  cpu_s");
            for r in &table.rows {
                out!(
                    "{:>8} {:>9.4} {:>7.2} {:>6.3}",
                    r.features,
                    r.accuracy,
                    r.c_avg,
                    r.cpu_seconds
                );
            }
            let mut best_json = serde_json::Value::Null;
            if let Some(b) = table.best() {
                write_report_files(&dir, "best_", &table.reports[b])?;
                write_model(&out_path(&dir, "best_model.json"), &table.models[b])?;
                best_json = json!({
                    "subset": table.subsets[b].iter().map(|&f| corpus.layout.name(f)).collect::<Vec<_>>(),
                    "result": RunResult::of(&table.reports[b]),
                });
            }
            let mut s = Summary::new("run-multi", &cfg);
            s.preprocessing_seconds = secs;
            s.classifier_seconds = table.rows.iter().map(|r| r.cpu_seconds).sum();
            s.results = json!({ "rows": table.rows, "best": best_json });
            s.write(&out_path(&dir, "summary.json"))?;
        }
        Command::Synth { preset, spec } => return synth(&dir, &cfg, &preset, spec.as_deref()),
        Command::Bench {
            input,
            dims,
            samples,
            rule_counts,
        } => bench(
            &dir,
            &mut cfg,
            input.as_deref(),
            dims,
            samples,
            &rule_counts,
            window_flag,
        )?,
        Command::Inspect { snapshot, json } => {
            let text = std::fs::read_to_string(&snapshot).map_err(|e| Error::io(&snapshot, e))?;
            let model = RuleBase::from_json(&text)?;
            if json {
                out!("{}", serde_json::to_string_pretty(&model)?);
            } else {
                print_model(&model);
            }
        }
    }
    Ok(EXIT_OK)
}

fn print_model(model: &RuleBase) {
    let p = model.params();
    out!(
        "dim {}  rules {}  step {}  rho {:.6}  (rho0 {}, delta {}, h_r {})",
        model.dim(),
        model.len(),
        model.step(),
        model.rho(),
        p.rho0,
        p.delta,
        p.h_r
    );
    out!("   id  label  updates  inactive  mean_sigma");
    for g in model.granules() {
        out!(
            "{:>5}  {:>5}  {:>7}  {:>8}  {:>10.6}",
            g.id(),
            g.label().map_or("-".to_string(), |l| l.to_string()),
            g.update_count(),
            g.inactivity(),
            mean_sigma(g)
        );
    }
}

fn mean_sigma(g: &Granule) -> f64 {
    g.memberships().iter().map(|m| m.sigma).sum::<f64>() / g.dim() as f64
}

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn run_spec(spec: &SyntheticSpec, cfg: &RunConfig) -> CliResult<(EvalReport, RuleBase)> {
    let stream = generate_synthetic(spec)?;
    let mut model = RuleBase::new(spec.dims(), cfg.model)?;
    let report = run_stream(&mut model, &stream, cfg.label_delay)?;
    Ok((report, model))
}

fn preset_checks(preset: Preset, cfg: &RunConfig, report: &EvalReport, model: &RuleBase) -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    match preset {
        Preset::Separable4 => {
            out.push(check(
                "accuracy >= 0.90",
                report.accuracy >= 0.90,
                format!("{:.4}", report.accuracy),
            ));
            out.push(check(
                "c_avg <= 20",
                report.c_avg <= 20.0,
                format!("{:.2}", report.c_avg),
            ));
        }
        Preset::SemiSupervised => {
            let (full, _) = run_spec(&Preset::Separable4.spec(cfg.seed), cfg)?;
            let gap = (full.accuracy - report.accuracy).abs();
            out.push(check(
                "within 10 pp of fully labeled",
                gap <= 0.10,
                format!("{:.4} vs {:.4}", report.accuracy, full.accuracy),
            ));
            let born = created_unlabeled(report);
            let survivors: Vec<_> = model.granules().iter().filter(|g| born.contains(&g.id())).collect();
            let unlabeled = survivors.iter().filter(|g| g.label().is_none()).count();
            out.push(check(
                "granules created unlabeled end labeled",
                unlabeled == 0,
                format!("{} of {} still unlabeled", unlabeled, survivors.len()),
            ));
        }
        Preset::Drift => {
            let deletions = report
                .events()
                .filter(|(h, e)| (1001..=1400).contains(h) && e.kind() == "delete")
                .count();
            out.push(check(
                "deletion in (1000, 1400]",
                deletions > 0,
                format!("{deletions} deletions"),
            ));
            let n = report.len() as u64;
            let tail = report.window_accuracy(n.saturating_sub(499)..=n);
            out.push(check("final-500 accuracy >= 0.85", tail >= 0.85, format!("{tail:.4}")));
        }
        Preset::ShuffledLabels => {
            out.push(check(
                "accuracy in 0.25 +/- 0.03",
                (report.accuracy - 0.25).abs() <= 0.03,
                format!("{:.4}", report.accuracy),
            ));
        }
    }
    let rec_ok = (report.accuracy - report.batch_accuracy()).abs() <= 1e-12
        && (report.c_avg - report.batch_c_avg()).abs() <= 1e-12;
    out.push(check("recursive metrics match batch", rec_ok, String::new()));
    Ok(out)
}

fn synth(dir: &Path, cfg: &RunConfig, preset: &str, spec: Option<&Path>) -> CliResult<i32> {
    let mut summary = Summary::new("synth", cfg);
    if let Some(path) = spec {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let spec: SyntheticSpec =
            toml::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        let (report, model) = run_spec(&spec, cfg)?;
        write_report_files(dir, "", &report)?;
        write_model(&out_path(dir, "model.json"), &model)?;
        out!(
            "accuracy {:.4}  c_avg {:.2}  rules {}",
            report.accuracy,
            report.c_avg,
            model.len()
        );
        summary.classifier_seconds = report.classifier_time.as_secs_f64();
        summary.results = json!({ "spec": spec, "result": RunResult::of(&report) });
        summary.write(&out_path(dir, "summary.json"))?;
        return Ok(EXIT_OK);
    }

    let presets: Vec<Preset> = if preset == "all" {
        Preset::ALL.to_vec()
    } else {
        vec![Preset::parse(preset).ok_or_else(|| {
            Failure::Usage(format!(
                "unknown preset {preset:?} (expected separable4, semi20, drift, shuffled or all)"
            ))
        })?]
    };

    let mut all_passed = true;
    let mut results = serde_json::Map::new();
    for p in presets {
        let (report, model) = run_spec(&p.spec(cfg.seed), cfg)?;
        let prefix = format!("{}_", p.name());
        write_report_files(dir, &prefix, &report)?;
        write_model(&out_path(dir, &format!("{prefix}model.json")), &model)?;
        summary.classifier_seconds += report.classifier_time.as_secs_f64();
        out!(
            "{}: accuracy {:.4}  c_avg {:.2}  rules {}",
            p.name(),
            report.accuracy,
            report.c_avg,
            model.len()
        );
        let checks = preset_checks(p, cfg, &report, &model)?;
        for c in &checks {
            all_passed &= c.passed;
            out!("  {} {} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        results.insert(
            p.name().to_string(),
            json!({
                "result": RunResult::of(&report),
                "checks": checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect::<Vec<_>>(),
            }),
        );
    }
    summary.results = serde_json::Value::Object(results);
    summary.write(&out_path(dir, "summary.json"))?;
    Ok(if all_passed { EXIT_OK } else { EXIT_FAILURE })
}

/// Mean nanoseconds per `classify` against a rule base of `rules` random
/// labeled granules.
fn classify_cost(dims: usize, rules: usize, probes: usize, seed: u64) -> CliResult<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..dims).map(|_| rng.gen()).collect() };
    let mut model = RuleBase::new(dims, HyperParams::default())?;
    for k in 0..rules {
        model.push_granule(Granule::new(&point(&mut rng), Some(Label(1 + k as u32 % 4)))?)?;
    }
    let xs: Vec<Vec<f64>> = (0..probes).map(|_| point(&mut rng)).collect();
    let t0 = Instant::now();
    for x in &xs {
        std::hint::black_box(model.classify(x)?);
    }
    Ok(t0.elapsed().as_nanos() as f64 / probes as f64)
}

fn bench(
    dir: &Path,
    cfg: &mut RunConfig,
    input: Option<&Path>,
    dims: usize,
    samples: usize,
    rule_counts: &[usize],
    window_flag: bool,
) -> CliResult<()> {
    if dims == 0 || samples == 0 {
        return Err(Failure::Usage("--dims and --samples must be positive".into()));
    }
    let stream = match input {
        Some(p) => {
            let (corpus, _) = load_features(p, cfg, window_flag)?;
            let cols = feature_columns(&corpus, cfg)?;
            normalized_stream(&corpus, &cols, cfg)?
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let centers: Vec<Vec<f64>> = (0..4)
                .map(|_| (0..dims).map(|_| rng.gen_range(0.2..0.8)).collect())
                .collect();
            let spec = SyntheticSpec {
                centers,
                dispersions: vec![0.05; 4],
                samples_per_class: samples.div_ceil(4),
                order: Default::default(),
                drift: Vec::new(),
                label_visibility: cfg.label_visibility,
                shuffle_labels: false,
                seed: cfg.seed,
            };
            let mut s = generate_synthetic(&spec)?;
            s.truncate(samples);
            s
        }
    };
    let dim = stream.first().map_or(dims, |s| s.features.len());
    let mut model = RuleBase::new(dim, cfg.model)?;
    let report = run_stream(&mut model, &stream, cfg.label_delay)?;
    let lat = report.latency();
    out!(
        "{} samples x {} dims: mean {:.4} ms  p50 {:.4} ms  p99 {:.4} ms  max {:.4} ms  c_avg {:.2}",
        lat.samples,
        dim,
        lat.mean_ms,
        lat.p50_ms,
        lat.p99_ms,
        lat.max_ms,
        report.c_avg
    );

    let mut scaling = Vec::new();
    out!("rules  classify_ns");
    for &c in rule_counts {
        let ns = classify_cost(dim, c, 2000, cfg.seed)?;
        out!("{c:>5}  {ns:>11.0}");
        scaling.push(json!({ "rules": c, "classify_ns": ns }));
    }
    write_eval_csv(&out_path(dir, "bench_steps.csv"), &report)?;
    let mut s = Summary::new("bench", cfg);
    s.classifier_seconds = report.classifier_time.as_secs_f64();
    s.results = json!({ "dims": dim, "latency": lat, "c_avg": report.c_avg, "scaling": scaling });
    s.write(&out_path(dir, "summary.json"))?;
    Ok(())
}
