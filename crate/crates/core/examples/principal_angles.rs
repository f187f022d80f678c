//! Principal angles, distance and Plücker coordinates of random planes.

use grasscrit::grassmann::{plucker_coords, principal_angles};
use grasscrit::{grassmann_distance, random_plane};

pub fn run_example() -> grasscrit::Result<()> {
    let e = random_plane(5, 2, 1)?;
    let f = random_plane(5, 2, 2)?;
    let angles = principal_angles(&e, &f)?;
    let delta = grassmann_distance(&e, &f)?;
    println!("angles between E and F in G(2,5): {angles:?}");
    println!("distance: {delta:.12}");
    assert!((delta - angles.iter().map(|t| t * t).sum::<f64>().sqrt()).abs() < 1e-14);

    let coords = plucker_coords(&e);
    println!("Plücker coordinates of E ({} of them): {:?}", coords.coords.len(), coords.coords);
    assert_eq!(coords.coords.len(), 10);
    Ok(())
}

#[allow(dead_code)]
fn main() -> grasscrit::Result<()> {
    run_example()
}
