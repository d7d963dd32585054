// Cluster centers jump by +0.3 at h = 1000; stale granules expire after h_r
// idle steps.

use egfc::synthetic::{generate_synthetic, Preset};
use egfc::{run_stream, HyperParams, InactivityHorizon, LabelDelay, RuleBase};

fn main() -> egfc::Result<()> {
    let stream = generate_synthetic(&Preset::Drift.spec(7))?;
    for h_r in [InactivityHorizon::Steps(200), InactivityHorizon::Infinite] {
        let params = HyperParams {
            h_r,
            ..HyperParams::default()
        };
        let mut model = RuleBase::new(10, params)?;
        let report = run_stream(&mut model, &stream, LabelDelay::Immediate)?;
        println!("h_r = {h_r}");
        for (h, e) in report.events().filter(|(_, e)| e.kind() != "label") {
            println!("  h = {h:>4}  {}", e.kind());
        }
        println!(
            "  accuracy 901..1000 {:.3}  1001..1100 {:.3}  1501..2000 {:.3}  final rules {}",
            report.window_accuracy(901..=1000),
            report.window_accuracy(1001..=1100),
            report.window_accuracy(1501..=2000),
            model.len()
        );
    }
    Ok(())
}
