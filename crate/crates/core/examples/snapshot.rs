// Save a trained rule base as JSON, restore it, and check both copies agree.

use egfc::synthetic::{generate_synthetic, Preset};
use egfc::{run_stream, HyperParams, LabelDelay, RuleBase};

fn main() -> egfc::Result<()> {
    let stream = generate_synthetic(&Preset::Separable4.spec(5))?;
    let (train, test) = stream.split_at(1500);
    let mut model = RuleBase::new(10, HyperParams::default())?;
    run_stream(&mut model, train, LabelDelay::Immediate)?;

    let path = std::env::temp_dir().join(format!("egfc-snapshot-{}.json", std::process::id()));
    std::fs::write(&path, model.to_json()?).map_err(|e| egfc::Error::io(&path, e))?;
    let text = std::fs::read_to_string(&path).map_err(|e| egfc::Error::io(&path, e))?;
    let restored = RuleBase::from_json(&text)?;
    std::fs::remove_file(&path).ok();

    assert_eq!(restored, model);
    assert_eq!(restored.fingerprint(), model.fingerprint());
    let mut agree = 0;
    for s in test {
        if model.classify(&s.features)?.label == restored.classify(&s.features)?.label {
            agree += 1;
        }
    }
    println!(
        "{} rules, {} bytes of JSON, {agree}/{} test predictions agree",
        model.len(),
        text.len(),
        test.len()
    );
    for g in restored.granules() {
        println!(
            "  granule {} label {:?} updates {}",
            g.id(),
            g.label().map(|l| l.0),
            g.update_count()
        );
    }
    Ok(())
}
