//! All critical points of the distance from a matrix to the rank-r matrices.

use grasscrit::lowrank::{ey_critical_set, svd};
use nalgebra::DMatrix;

pub fn run_example() -> grasscrit::Result<()> {
    let a = DMatrix::from_row_slice(4, 3, &[3.0, 1.0, 0.5, -1.0, 2.0, 0.0, 0.25, 0.0, 1.5, 1.0, -0.5, 0.75]);
    let sigma = svd(&a).sigma;
    println!("singular values: {sigma:?}");
    let points = ey_critical_set(&a, 2, 1e-10)?;
    for p in &points {
        println!("keep {:?}: distance {:.12}", p.index_set, p.distance);
    }
    assert_eq!(points.len(), 3);
    assert!((points[0].distance - sigma[2]).abs() < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() -> grasscrit::Result<()> {
    run_example()
}
