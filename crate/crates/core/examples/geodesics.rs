//! Exponential and logarithm maps, and the midpoint of a geodesic.

use grasscrit::{complete_frame, exp, geodesic_point, grassmann_distance, log, random_plane};

pub fn run_example() -> grasscrit::Result<()> {
    let e = complete_frame(&random_plane(6, 2, 10)?);
    let f = random_plane(6, 2, 11)?;

    let a = log(&e, &f)?;
    let back = exp(&e, &a)?;
    let delta = grassmann_distance(e.plane(), &f)?;
    println!("|log_E(F)| = {:.15}, delta(E, F) = {delta:.15}", a.norm());
    println!("delta(exp_E(log_E(F)), F) = {:.2e}", grassmann_distance(&back, &f)?);

    let mid = geodesic_point(&e, &a, 0.5)?;
    let (d1, d2) = (grassmann_distance(e.plane(), &mid)?, grassmann_distance(&mid, &f)?);
    println!("midpoint splits the distance as {d1:.12} + {d2:.12}");
    assert!((d1 - d2).abs() < 1e-10 && (d1 + d2 - delta).abs() < 1e-10);
    Ok(())
}

#[allow(dead_code)]
fn main() -> grasscrit::Result<()> {
    run_example()
}
