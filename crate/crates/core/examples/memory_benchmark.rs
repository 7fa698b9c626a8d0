//! Benchmark a handful of qutrit memories and certify their Schmidt numbers.
//!
//! `cargo run --example memory_benchmark`

use schmidt_bench::benchmark::{certify_with_tolerance, fidelity_direct, fidelity_via_choi, GateTask, SIMULATION_TOL};
use schmidt_bench::channels::{dephasing, depolarizing, eb_measure_prepare, saturating_channel};
use schmidt_bench::{Mode, QuantumChannel};

fn main() -> schmidt_bench::Result<()> {
    let d = 3;
    let task = GateTask::identity(d, Mode::Qudit)?;
    let zoo: Vec<(&str, QuantumChannel)> = vec![
        ("identity", QuantumChannel::identity(d)),
        ("measure-and-prepare", eb_measure_prepare(d)?),
        ("saturating k=2", saturating_channel(d, 2)?),
        ("depolarizing p=0.2", depolarizing(d, 0.2)?),
        ("dephasing p=0.5", dephasing(d, 0.5)?),
    ];
    for (name, channel) in &zoo {
        let report = fidelity_direct(channel, &task)?;
        let via_choi = fidelity_via_choi(channel, &task)?;
        let cert = certify_with_tolerance(d, report.f_avg, SIMULATION_TOL)?;
        println!(
            "{name:<22} F_Z {:.4}  F_X {:.4}  F {:.4} (Choi {:.4})  Schmidt number >= {}",
            report.f_z, report.f_x, report.f_avg, via_choi, cert.certified_schmidt_number
        );
    }
    Ok(())
}
