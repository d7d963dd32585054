// Relevance-minus-redundancy ranking on a toy matrix: two informative
// features, one near-copy of the first, and three noise columns.

use egfc::ranking::{leave_n_out_schedule, rank_features, spearman};
use egfc::Label;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> egfc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut samples = Vec::new();
    let mut labels = Vec::new();
    for h in 0..400 {
        let class = (h % 4) as u32 + 1;
        let a = class as f64 + rng.gen_range(-0.8..0.8);
        let b = -(class as f64) + rng.gen_range(-1.5..1.5);
        let copy = a + rng.gen_range(-0.05..0.05);
        samples.push(vec![a, b, copy, rng.gen(), rng.gen(), rng.gen()]);
        labels.push(Label(class));
    }
    let names = [
        "informative_a",
        "informative_b",
        "copy_of_a",
        "noise_1",
        "noise_2",
        "noise_3",
    ];

    let col = |j: usize| samples.iter().map(|s: &Vec<f64>| s[j]).collect::<Vec<_>>();
    println!("spearman(a, copy) = {:.4}", spearman(&col(0), &col(2))?);

    let ranking = rank_features(&samples, &labels)?;
    println!("rank  feature         relevance  redundancy  score");
    for s in &ranking {
        println!(
            "{:>4}  {:<14} {:>10.4} {:>11.4} {:>6.3}",
            s.rank, names[s.feature], s.relevance, s.redundancy, s.score
        );
    }
    for subset in leave_n_out_schedule(&ranking, 2, 6, 1)? {
        println!("{:?}", subset.iter().map(|&j| names[j]).collect::<Vec<_>>());
    }
    Ok(())
}
