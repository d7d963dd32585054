// A single granule: membership, recursive updates, and merging two granules.

use egfc::granule::{granule_distance, merge_pair, merged_parameters, SIGMA_MAX, SIGMA_MIN};
use egfc::{GaussianMembership, Granule, Label};

fn main() -> egfc::Result<()> {
    let m = GaussianMembership::new(0.5, 0.1)?;
    println!(
        "degree at mu: {:.4}, one sigma away: {:.4}",
        m.degree(0.5)?,
        m.degree(0.6)?
    );

    let mut g = Granule::new(&[0.2, 0.8], Some(Label(1)))?;
    println!(
        "new granule sigma = {:.6} (bounds {:.6}..{:.6})",
        g.memberships()[0].sigma,
        SIGMA_MIN,
        SIGMA_MAX
    );

    for x in [[0.22, 0.79], [0.18, 0.83], [0.21, 0.80]] {
        let raw = g.absorb_sample_raw(&x)?;
        println!(
            "absorbed {:?}: mu = ({:.4}, {:.4})  raw sigma_1 = {:.6}  clamped = {:.6}",
            x,
            g.memberships()[0].mu,
            g.memberships()[1].mu,
            raw[0],
            g.memberships()[0].sigma
        );
    }
    println!("activation at (0.2, 0.8): {:.4}", g.activation(&[0.2, 0.8])?);
    println!("activation at (0.6, 0.8): {:.4}", g.activation(&[0.6, 0.8])?);

    let a = Granule::from_parts(vec![GaussianMembership::new(0.40, 0.10)?], Some(Label(2)), 3, 0)?;
    let b = Granule::from_parts(vec![GaussianMembership::new(0.50, 0.12)?], Some(Label(2)), 5, 4)?;
    println!("distance = {:.6}", granule_distance(&a, &b)?);
    let (mu, sigma) = merged_parameters(&a, &b)?[0];
    println!("merged before clamping: mu = {mu:.6}, sigma = {sigma:.6}");
    let merged = merge_pair(&a, &b)?;
    println!(
        "merged granule: sigma = {:.6}, update_count = {}",
        merged.memberships()[0].sigma,
        merged.update_count()
    );
    Ok(())
}
