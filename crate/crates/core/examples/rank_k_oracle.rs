//! Numerically confirm the rank-k ceilings and the measure-and-prepare limit.
//!
//! `cargo run --release --example rank_k_oracle`

use schmidt_bench::oracle::{max_correlation_rank_k, max_entangled_fraction_rank_k, max_fidelity_mp_scheme};
use schmidt_bench::OptimizerConfig;

fn main() -> schmidt_bench::Result<()> {
    let cfg = OptimizerConfig::default();
    for d in 2..=4 {
        for k in 1..=d {
            let ef = max_entangled_fraction_rank_k(d, k, &cfg)?;
            let corr = max_correlation_rank_k(d, k, &cfg)?;
            println!(
                "d = {d} k = {k}: entangled fraction {:.8} (k/d = {:.8}), correlation {:.8} (1 + k/d = {:.8})",
                ef.value,
                k as f64 / d as f64,
                corr.value,
                1.0 + k as f64 / d as f64
            );
        }
        let (f, scheme) = max_fidelity_mp_scheme(d, &cfg)?;
        println!("d = {d}: best measure-and-prepare F = {f:.8} with {} outcomes", scheme.preparations.len());
    }
    Ok(())
}
