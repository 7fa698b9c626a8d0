//! Schmidt-number benchmarks for quantum memories and gates.
//!
//! A channel that keeps `k`-level coherence intact can reach a two-basis
//! average fidelity (computational basis plus its Fourier transform) of at
//! most `(1 + k/d)/2`. Measuring that one number with `2d` input states is
//! therefore enough to certify a lower bound on the channel's Schmidt number.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, eigensystems,
//!   Schmidt decomposition.
//! * [`states`]: Z and X bases, clock/shift operators, Bell states and the
//!   correlation operator, plus multi-qubit product versions.
//! * [`channels`]: Kraus channels, Choi states, and the standard channel zoo.
//! * [`benchmark`]: fidelities by direct simulation and via the Choi state,
//!   thresholds, and certificates.
//! * [`oracle`]: random-restart maximizers that confirm the analytic
//!   ceilings numerically.
//! * [`cli`]: the `schmidt-bench` command.
//!
//! ```
//! use schmidt_bench::{benchmark, channels, states::Mode};
//!
//! let channel = channels::depolarizing(4, 0.1).unwrap();
//! let task = benchmark::GateTask::identity(4, Mode::Qudit).unwrap();
//! let report = benchmark::fidelity_direct(&channel, &task).unwrap();
//! let cert = benchmark::certify(4, report.f_avg).unwrap();
//! assert_eq!(cert.certified_schmidt_number, 4);
//! ```

pub mod benchmark;
pub mod channels;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod states;

pub use benchmark::{Certificate, FidelityReport, GateTask};
pub use channels::{ChoiMatrix, DensityState, QuantumChannel};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Ket};
pub use oracle::OptimizerConfig;
pub use states::{Basis, BasisLabel, Mode};
