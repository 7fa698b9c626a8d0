//! Write a channel to JSON, read it back and evaluate it.
//!
//! `cargo run --example channel_files`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schmidt_bench::benchmark::{certify_with_tolerance, fidelity_direct, GateTask, SIMULATION_TOL};
use schmidt_bench::channels::random_channel;
use schmidt_bench::{Mode, QuantumChannel};

fn main() -> schmidt_bench::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let channel = random_channel(2, 2, &mut rng)?;
    let path = std::env::temp_dir().join("schmidt-bench-example-channel.json");
    channel.save(&path)?;
    println!("wrote {}", path.display());

    let loaded = QuantumChannel::load(&path)?;
    let report = fidelity_direct(&loaded, &GateTask::identity(2, Mode::Qudit)?)?;
    let cert = certify_with_tolerance(2, report.f_avg, SIMULATION_TOL)?;
    println!("F = {:.6}, Kraus-rank bound {}", report.f_avg, loaded.schmidt_number_upper_bound()?);
    println!("{}", cert.conclusion());
    std::fs::remove_file(&path)?;
    Ok(())
}
