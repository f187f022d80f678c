//! Nearest and farthest points of a simple Schubert variety.

use grasscrit::grassmann::principal_angles;
use grasscrit::schubert::{ey_schubert_critical_points, global_max, global_min, SchubertVariety};
use grasscrit::{random_plane, Tolerances};

pub fn run_example() -> grasscrit::Result<()> {
    let tol = Tolerances::default();
    let w = random_plane(7, 3, 1)?;
    let l = random_plane(7, 3, 2)?;
    let omega = SchubertVariety::new(&w, 1)?;
    println!("angles between L and W: {:?}", principal_angles(&l, &w)?);

    for rec in ey_schubert_critical_points(&omega, &l, &tol)? {
        println!("critical point {:?}: value {:.12}, normality residual {:.1e}", rec.index_set, rec.value, rec.normality_residual);
    }
    let (min, _) = global_min(&omega, &l, &tol)?;
    let (max, _) = global_max(&omega, &l, 5, &tol)?;
    println!("global min {min:.12}, global max {max:.12}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> grasscrit::Result<()> {
    run_example()
}
