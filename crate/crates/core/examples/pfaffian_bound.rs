//! The explicit (and very large) bound on the number of critical points.

use grasscrit::critical::pfaffian_bound;

pub fn run_example() -> grasscrit::Result<()> {
    for (k, n, d) in [(1, 2, 2), (2, 4, 1), (2, 4, 3), (3, 8, 2)] {
        let b = pfaffian_bound(k, n, d, 1.0)?;
        println!("G({k},{n}), degree {d}: c2 = {}, log10 c1 = {:.6}, log10 bound = {:.6}", b.c2, b.log10_c1, b.log10_bound);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> grasscrit::Result<()> {
    run_example()
}
