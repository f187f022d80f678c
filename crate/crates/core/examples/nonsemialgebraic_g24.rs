//! The product-of-spheres model of the oriented Grassmannian G~(2,4): its
//! distance, the transcendental critical-point equation and the determinant
//! factorization behind it.

use grasscrit::critical::{g24_critical_residual, g24_det_identity_check, g24_distance, g24_scan};

pub fn run_example() -> grasscrit::Result<()> {
    let (x, y) = ([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
    println!("distance between (x, y) and (y, x): {:.12}", g24_distance(&x, &y, &y, &x)?);

    let id = g24_det_identity_check(&x, &y, 2.0)?;
    println!("det(M^T M) = {:.12}, factored form = {:.12}", id.lhs, id.rhs);

    println!("residual at y1 = 0, beta = 1: {:.12}", g24_critical_residual(0.0, 1.0)?);
    for row in g24_scan(&[0.5, 1.0, 2.0], 0.999, 2001)? {
        println!("beta {}: residual in [{:.4}, {:.4}] over {} points, roots {:?}", row.beta, row.min, row.max, row.samples, row.roots);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> grasscrit::Result<()> {
    run_example()
}
