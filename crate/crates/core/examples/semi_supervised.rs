// Hidden and delayed labels: unlabeled granules pick up a class later.

use egfc::eval::created_unlabeled;
use egfc::synthetic::{generate_synthetic, Preset};
use egfc::{run_stream, HyperParams, LabelDelay, RuleBase, RuleEvent};

fn main() -> egfc::Result<()> {
    let full = generate_synthetic(&Preset::Separable4.spec(11))?;
    let partial = generate_synthetic(&Preset::SemiSupervised.spec(11))?;
    let visible = partial.iter().filter(|s| s.label_visible).count();
    println!("{visible} of {} labels visible", partial.len());

    for (name, stream, delay) in [
        ("all labels, immediate", &full, LabelDelay::Immediate),
        ("all labels, 25-step delay", &full, LabelDelay::Steps(25)),
        ("20% labels, immediate", &partial, LabelDelay::Immediate),
        ("20% labels, 25-step delay", &partial, LabelDelay::Steps(25)),
    ] {
        let mut model = RuleBase::new(10, HyperParams::default())?;
        let report = run_stream(&mut model, stream, delay)?;
        let born = created_unlabeled(&report);
        let labeled_later = report
            .events()
            .filter(|(_, e)| matches!(e, RuleEvent::Labeled { id, .. } if born.contains(id)))
            .count();
        println!(
            "{name:<28} acc {:.4}  c_avg {:.2}  created unlabeled {}  labeled later {}",
            report.accuracy,
            report.c_avg,
            born.len(),
            labeled_later
        );
    }
    Ok(())
}
