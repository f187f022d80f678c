//! The metric pulled back through the rescaled exponential chart approaches
//! the flat metric as the scale shrinks.

use grasscrit::grassmann::pullback_metric_error;
use grasscrit::{complete_frame, random_plane};

pub fn run_example() -> grasscrit::Result<()> {
    let w = complete_frame(&random_plane(5, 2, 3)?);
    let mut previous = f64::INFINITY;
    for eps in [0.2, 0.1, 0.05, 0.01] {
        let err = pullback_metric_error(&w, eps, 20, 1)?;
        println!("eps = {eps:<5}: max relative metric error {err:.3e}");
        assert!(err < previous);
        previous = err;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> grasscrit::Result<()> {
    run_example()
}
