//! Cut-locus strata and the dimension of the subdifferential at cut points.

use std::f64::consts::FRAC_PI_2;

use grasscrit::complete_frame;
use grasscrit::cutlocus::{cut_stratum, sample_orthogonal_group, subdiff_affine_dimension, subdiff_generators};
use grasscrit::schubert::plane_at_angles;

pub fn run_example() -> grasscrit::Result<()> {
    for (n, angles) in [(4, vec![0.4, FRAC_PI_2]), (5, vec![FRAC_PI_2, FRAC_PI_2])] {
        let (l, s) = plane_at_angles(n, &angles)?;
        let j = cut_stratum(&l, &s, 1e-9)?.j;
        let w = sample_orthogonal_group(j, 12, 7);
        let set = subdiff_generators(&l, &complete_frame(&s), &w, 1e-9)?;
        let dim = subdiff_affine_dimension(&set, 1e-8)?;
        println!("G(2,{n}), angles {angles:?}: stratum j = {j}, {} generators, affine dimension {dim}", set.generators.len());
        assert_eq!(dim, j * j);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> grasscrit::Result<()> {
    run_example()
}
