// Train-after-test run over four well-separated synthetic classes.

use egfc::eval::replay_rule_count;
use egfc::synthetic::{generate_synthetic, Preset};
use egfc::{run_stream, HyperParams, LabelDelay, RuleBase};

fn main() -> egfc::Result<()> {
    let stream = generate_synthetic(&Preset::Separable4.spec(7))?;
    let mut model = RuleBase::new(10, HyperParams::default())?;
    let report = run_stream(&mut model, &stream, LabelDelay::Immediate)?;

    for h in [1, 10, 100, 500, 2000] {
        let r = &report.records[h - 1];
        println!(
            "h = {:>4}  acc = {:.4}  rules = {}  rho = {:.4}",
            r.h,
            r.accuracy,
            r.rules,
            r.rho.unwrap_or(0.0)
        );
    }
    println!("final accuracy {:.4}, c_avg {:.2}", report.accuracy, report.c_avg);

    let trace = report.structural_trace();
    let changes = trace.iter().filter(|r| r.event != "none").count();
    println!(
        "{changes} structural events; replayed rule count = {}",
        replay_rule_count(&trace, 0)
    );

    let lat = report.latency();
    println!("latency mean {:.4} ms, p99 {:.4} ms", lat.mean_ms, lat.p99_ms);
    Ok(())
}
