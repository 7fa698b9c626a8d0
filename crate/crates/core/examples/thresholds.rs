//! Print the Schmidt-number threshold ladder for a range of dimensions.
//!
//! `cargo run --example thresholds`

use schmidt_bench::benchmark::{informational_limits, threshold_ladder};

fn main() -> schmidt_bench::Result<()> {
    for d in [2, 3, 4, 8] {
        println!("d = {d}");
        for (k, f) in threshold_ladder(d)? {
            let (uniform, process) = informational_limits(d, k)?;
            println!("  k = {k}: F(k) = {f:.6}  uniform {uniform:.6}  process {process:.6}");
        }
    }
    Ok(())
}
