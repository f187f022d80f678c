//! Critical points of the distance to a plane on hypersurfaces given in
//! Plücker coordinates, and the sampled distance complexity.

use grasscrit::critical::{find_critical_points, gdc_estimate, PluckerPolynomial, PluckerTerm};
use grasscrit::{complete_frame, make_plane};
use nalgebra::DMatrix;

pub fn run_example() -> grasscrit::Result<()> {
    // Two perpendicular lines in the plane, seen as points of G(1,2).
    let phi = 0.3f64;
    let (c, s) = (phi.cos(), phi.sin());
    let lines = PluckerPolynomial::new(
        2,
        1,
        vec![
            PluckerTerm { idx: vec![0, 0], coef: -c * s },
            PluckerTerm { idx: vec![0, 1], coef: c * c - s * s },
            PluckerTerm { idx: vec![1, 1], coef: c * s },
        ],
    )?;
    let l = complete_frame(&make_plane(&DMatrix::from_column_slice(2, 1, &[1.0, 0.0]), 1e-12)?);
    let found = find_critical_points(&lines, &l, 8, 1, 1e-10)?;
    for cp in &found.points {
        println!("G(1,2): critical value {:.12} (certificate {:.1e})", cp.value, cp.certificate);
    }

    // A linear section of G(2,4).
    let section = PluckerPolynomial::new(4, 2, (0..6).map(|i| PluckerTerm { idx: vec![i], coef: [0.3, -1.1, 0.7, 0.2, 0.9, -0.4][i] }).collect())?;
    let report = gdc_estimate(&section, 3, 64, 4, 1e-10)?;
    println!("linear section of G(2,4): counts {:?}, max {}", report.counts(), report.max_count);
    Ok(())
}

#[allow(dead_code)]
fn main() -> grasscrit::Result<()> {
    run_example()
}
