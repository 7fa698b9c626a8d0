//! Certify a Schmidt number from measured per-state fidelities.
//!
//! `cargo run --example certify_measured`

use schmidt_bench::benchmark::MeasuredData;

fn main() -> schmidt_bench::Result<()> {
    let data = r#"{
        "d": 4,
        "mode": "qubits",
        "z_fidelities": [0.93, 0.91, 0.92, 0.90],
        "x_fidelities": [0.86, 0.88, 0.85, 0.87]
    }"#;
    let cert = MeasuredData::from_json_str(data)?.certify()?;
    println!("{}", serde_json::to_string_pretty(&cert)?);
    println!("{}", cert.conclusion());
    Ok(())
}
