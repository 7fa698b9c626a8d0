//! Two-qubit CNOT benchmarked with product Z and X bases under white noise.
//!
//! `cargo run --example cnot_gate`

use schmidt_bench::benchmark::{certify_with_tolerance, fidelity_direct, GateTask, SIMULATION_TOL};
use schmidt_bench::channels::{cnot, depolarizing};
use schmidt_bench::QuantumChannel;

fn main() -> schmidt_bench::Result<()> {
    let task = GateTask::cnot();
    let gate = QuantumChannel::unitary(cnot())?;
    for p in [0.0, 0.05, 0.1, 0.2, 0.4] {
        let noisy = QuantumChannel::compose(&depolarizing(4, p)?, &gate)?;
        let report = fidelity_direct(&noisy, &task)?;
        let cert = certify_with_tolerance(4, report.f_avg, SIMULATION_TOL)?;
        println!("p = {p:.2}  F = {:.4}  {}", report.f_avg, cert.conclusion());
    }
    Ok(())
}
