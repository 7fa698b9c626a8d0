//! Two-basis average fidelity and the Schmidt-number threshold ladder.
//!
//! For a channel `E` on a `d`-level system the benchmark feeds the `d`
//! computational states and the `d` Fourier states, measures the fidelity of
//! each output with its target, and averages:
//!
//! ```text
//! F_Z = (1/d) sum_j <j'| E(|j><j|) |j'>
//! F_X = (1/d) sum_j <j̄'| E(|j̄><j̄|) |j̄'>
//! F   = (F_Z + F_X) / 2
//! ```
//!
//! No channel whose Choi state has Schmidt number at most `k` can push `F`
//! above `F(k) = (1 + k/d) / 2`, so a fidelity strictly above `F(k)`
//! certifies Schmidt number at least `k + 1`.
//!
//! [`fidelity_direct`] simulates the `2d` input states one by one;
//! [`fidelity_via_choi`] evaluates `tr[J C] / 2` with the correlation
//! operator `C`. The two share no code beyond the channel itself, which makes
//! them a useful cross-check.

use serde::{Deserialize, Serialize};

use crate::channels::{QuantumChannel, STATE_TOL};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{correlation_for, qubit_count, two_bases, Basis, BasisLabel, Mode};

/// Which map the channel is supposed to implement.
#[derive(Clone, Debug)]
pub struct GateTask {
    d: usize,
    target: Option<ComplexMatrix>,
    mode: Mode,
}

impl GateTask {
    /// Quantum memory task: every state should come back unchanged.
    pub fn identity(d: usize, mode: Mode) -> Result<Self> {
        check_mode(d, mode)?;
        Ok(Self { d, target: None, mode })
    }

    /// Gate task with targets `U |psi>`.
    pub fn with_target(target: ComplexMatrix, mode: Mode) -> Result<Self> {
        if !target.is_square() {
            return Err(Error::Dimension("target unitary must be square".into()));
        }
        let residual = target.unitarity_residual();
        if residual > STATE_TOL {
            return Err(Error::NotUnitary { residual });
        }
        let d = target.rows();
        check_mode(d, mode)?;
        Ok(Self { d, target: Some(target), mode })
    }

    /// Two-qubit CNOT on product bases.
    pub fn cnot() -> Self {
        Self { d: 4, target: Some(crate::channels::cnot()), mode: Mode::Qubits }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn target(&self) -> Option<&ComplexMatrix> {
        self.target.as_ref()
    }

    fn check_channel(&self, channel: &QuantumChannel) -> Result<()> {
        if channel.d_in() != self.d || channel.d_out() != self.d {
            return Err(Error::Dimension(format!(
                "task is {}-dimensional but channel maps {} -> {}",
                self.d,
                channel.d_in(),
                channel.d_out()
            )));
        }
        Ok(())
    }

    /// `U^dagger o E`, which turns the gate task into a memory task.
    fn undo_target(&self, channel: &QuantumChannel) -> Result<QuantumChannel> {
        match &self.target {
            None => Ok(channel.clone()),
            Some(u) => channel.followed_by_unitary(&u.dagger()),
        }
    }
}

fn check_mode(d: usize, mode: Mode) -> Result<()> {
    match mode {
        Mode::Qudit if d < 2 => Err(Error::InvalidParameter(format!("dimension must be at least 2, got {d}"))),
        Mode::Qudit => Ok(()),
        Mode::Qubits => qubit_count(d).map(|_| ()),
    }
}

/// Average fidelities on the two bases with the per-state breakdown.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub d: usize,
    pub f_z: f64,
    pub f_x: f64,
    pub f_avg: f64,
    pub per_state: Vec<(BasisLabel, f64)>,
}

/// Simulates each of the `2d` inputs and compares with its target.
pub fn fidelity_direct(channel: &QuantumChannel, task: &GateTask) -> Result<FidelityReport> {
    task.check_channel(channel)?;
    let d = task.d;
    let mut per_state = Vec::with_capacity(2 * d);
    for (label, psi) in two_bases(d, task.mode)? {
        let out = channel.apply_pure(&psi)?;
        let target = match &task.target {
            Some(u) => u.apply(&psi),
            None => psi,
        };
        // round-off can leave a perfect overlap a few ulps above 1
        per_state.push((label, out.fidelity_with(&target).clamp(0.0, 1.0)));
    }
    let mean = |kind: Basis| {
        per_state.iter().filter(|(l, _)| l.kind == kind).map(|(_, f)| f).sum::<f64>() / d as f64
    };
    let f_z = mean(Basis::Z);
    let f_x = mean(Basis::X);
    Ok(FidelityReport { d, f_z, f_x, f_avg: (f_z + f_x) / 2.0, per_state })
}

/// `tr[J C] / 2` with `J` the Choi state of `U^dagger o E`.
pub fn fidelity_via_choi(channel: &QuantumChannel, task: &GateTask) -> Result<f64> {
    task.check_channel(channel)?;
    let choi = task.undo_target(channel)?.choi()?;
    let correlation = correlation_for(task.d, task.mode)?;
    Ok((0.5 * choi.expectation(&correlation)).clamp(0.0, 1.0))
}

/// `<Phi_00| J |Phi_00>` for `J` the Choi state of `U^dagger o E`, i.e. the
/// process fidelity with the target.
pub fn process_fidelity(channel: &QuantumChannel, task: &GateTask) -> Result<f64> {
    task.check_channel(channel)?;
    Ok(task.undo_target(channel)?.choi()?.entangled_fraction())
}

/// Lower bound `2 F - 1` on the process fidelity implied by the two-basis
/// average `F`, clamped at zero. Follows from `C <= I + Phi_00`.
pub fn process_fidelity_lower_bound(report: &FidelityReport) -> f64 {
    (2.0 * report.f_avg - 1.0).max(0.0)
}

fn check_k(d: usize, k: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {d}")));
    }
    if k == 0 || k > d {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= d, got k = {k}, d = {d}")));
    }
    Ok(())
}

/// `F(k) = (1 + k/d) / 2`, computed as `(d + k) / 2d` with one rounding.
pub fn schmidt_threshold(d: usize, k: usize) -> Result<f64> {
    check_k(d, k)?;
    Ok((d + k) as f64 / (2 * d) as f64)
}

/// `(k, F(k))` for `k = 1, ..., d-1`.
pub fn threshold_ladder(d: usize) -> Result<Vec<(usize, f64)>> {
    (1..d).map(|k| schmidt_threshold(d, k).map(|f| (k, f))).collect()
}

/// Fidelity limits for the uniform (Haar) average fidelity and for the process
/// fidelity at Schmidt number `k`: `((1 + k)/(1 + d), k/d)`.
///
/// Reported for reference only; nothing in the certification path uses them.
pub fn informational_limits(d: usize, k: usize) -> Result<(f64, f64)> {
    check_k(d, k)?;
    Ok(((1 + k) as f64 / (1 + d) as f64, k as f64 / d as f64))
}

/// Certified lower bound on a channel's Schmidt number.
///
/// The certificate is one-sided: `certified_schmidt_number = s` means no
/// channel of Schmidt number below `s` reproduces the measured fidelity. The
/// true Schmidt number may be larger.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub d: usize,
    #[serde(rename = "f_avg")]
    pub measured_f: f64,
    pub thresholds: Vec<(usize, f64)>,
    pub certified_schmidt_number: usize,
    /// `measured_f - F(s-1)` when `s > 1`, otherwise `measured_f - F(1)`.
    pub margin: f64,
}

impl Certificate {
    /// At least one threshold was strictly exceeded.
    pub fn is_entanglement_preserving(&self) -> bool {
        self.certified_schmidt_number >= 2
    }

    /// Plain-language reading of the certificate.
    pub fn conclusion(&self) -> String {
        let s = self.certified_schmidt_number;
        if s < 2 {
            return "no certification: compatible with a classical MP scheme".into();
        }
        let mut parts = vec!["outperforms any classical MP scheme".to_string()];
        if s > 2 {
            parts.push(format!("outperforms any channel of Schmidt number {}", s - 1));
        }
        if s == self.d {
            parts.push("full-dimensional coherence".into());
        } else {
            parts.push(format!(
                "does not ensure outperforming the channels of Schmidt number {s}"
            ));
        }
        parts.join("; ")
    }
}

/// Clearance required of simulated fidelities, which carry rounding error of
/// a few ulps and would otherwise clear a threshold they only touch.
pub const SIMULATION_TOL: f64 = 1e-12;

/// Converts a measured two-basis average fidelity into a certificate. A
/// threshold only counts when strictly exceeded.
pub fn certify(d: usize, measured_f: f64) -> Result<Certificate> {
    certify_with_tolerance(d, measured_f, 0.0)
}

/// Like [`certify`], but a threshold `F(k)` only counts when
/// `measured_f > F(k) + tol`. Use [`SIMULATION_TOL`] for computed fidelities.
pub fn certify_with_tolerance(d: usize, measured_f: f64, tol: f64) -> Result<Certificate> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {d}")));
    }
    if !(0.0..=1.0).contains(&measured_f) {
        return Err(Error::InvalidParameter(format!("fidelity {measured_f} outside [0, 1]")));
    }
    let thresholds = threshold_ladder(d)?;
    let cleared = thresholds.iter().filter(|(_, f)| measured_f > *f + tol).map(|(k, _)| *k).max();
    let (certified, margin) = match cleared {
        Some(k) => (k + 1, measured_f - thresholds[k - 1].1),
        None => (1, measured_f - thresholds[0].1),
    };
    Ok(Certificate { d, measured_f, thresholds, certified_schmidt_number: certified, margin })
}

/// Averages per-state fidelities (`d` Z labels and `d` X labels, each
/// exactly once) and certifies the result.
pub fn certify_from_counts(d: usize, per_state: &[(BasisLabel, f64)]) -> Result<Certificate> {
    certify(d, average_per_state(d, per_state)?)
}

fn average_per_state(d: usize, per_state: &[(BasisLabel, f64)]) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {d}")));
    }
    let mut seen = vec![[false; 2]; d];
    let mut sums = [0.0f64; 2];
    for (label, f) in per_state {
        if label.index >= d {
            return Err(Error::IndexOutOfRange { index: label.index, bound: d });
        }
        if !(0.0..=1.0).contains(f) {
            return Err(Error::Data(format!("fidelity {f} for {label} outside [0, 1]")));
        }
        let slot = match label.kind {
            Basis::Z => 0,
            Basis::X => 1,
        };
        if std::mem::replace(&mut seen[label.index][slot], true) {
            return Err(Error::Data(format!("duplicate entry for {label}")));
        }
        sums[slot] += f;
    }
    if let Some(j) = seen.iter().position(|s| !s[0]) {
        return Err(Error::Data(format!("missing entry for Z{j}")));
    }
    if let Some(j) = seen.iter().position(|s| !s[1]) {
        return Err(Error::Data(format!("missing entry for X{j}")));
    }
    Ok((sums[0] / d as f64 + sums[1] / d as f64) / 2.0)
}

/// Measured-data input format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasuredData {
    PerState {
        d: usize,
        #[serde(default)]
        mode: Mode,
        z_fidelities: Vec<f64>,
        x_fidelities: Vec<f64>,
    },
    Average {
        d: usize,
        f_avg: f64,
    },
}

impl MeasuredData {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(s)?;
        let has = |key: &str| value.get(key).is_some();
        // untagged enums only report "did not match any variant", so pick the
        // variant by its keys to surface the real field error
        if has("z_fidelities") || has("x_fidelities") {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct PerState {
                d: usize,
                #[serde(default)]
                mode: Mode,
                z_fidelities: Vec<f64>,
                x_fidelities: Vec<f64>,
            }
            let p: PerState = serde_json::from_str(s)?;
            Ok(Self::PerState { d: p.d, mode: p.mode, z_fidelities: p.z_fidelities, x_fidelities: p.x_fidelities })
        } else {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct Average {
                d: usize,
                f_avg: f64,
            }
            let a: Average = serde_json::from_str(s)?;
            Ok(Self::Average { d: a.d, f_avg: a.f_avg })
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::PerState { d, .. } | Self::Average { d, .. } => *d,
        }
    }

    pub fn certify(&self) -> Result<Certificate> {
        match self {
            Self::Average { d, f_avg } => certify(*d, *f_avg),
            Self::PerState { d, mode, z_fidelities, x_fidelities } => {
                check_mode(*d, *mode)?;
                for (name, list) in [("z_fidelities", z_fidelities), ("x_fidelities", x_fidelities)] {
                    if list.len() != *d {
                        return Err(Error::Data(format!("{name} has {} entries, expected {d}", list.len())));
                    }
                }
                let per_state: Vec<(BasisLabel, f64)> = z_fidelities
                    .iter()
                    .enumerate()
                    .map(|(j, &f)| (BasisLabel { kind: Basis::Z, index: j }, f))
                    .chain(x_fidelities.iter().enumerate().map(|(j, &f)| (BasisLabel { kind: Basis::X, index: j }, f)))
                    .collect();
                certify_from_counts(*d, &per_state)
            }
        }
    }
}
