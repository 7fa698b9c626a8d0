//! Quantum channels in Kraus form and their Choi states.
//!
//! A [`QuantumChannel`] is an immutable list of Kraus operators that has been
//! checked for trace preservation. The Choi state is computed on demand as
//! `J = (E (x) I)(|Phi_00><Phi_00|)`, i.e. the channel acts on the first
//! tensor factor and `J` has unit trace.

use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{schmidt_decompose, ComplexMatrix, Ket, ONE, ZERO};
use crate::states::{generalized_pauli, maximally_entangled};

/// Tolerance on `||sum K^dagger K - I||_F`.
pub const TP_TOL: f64 = 1e-8;
/// Tolerance used when validating density operators and Choi states.
pub const STATE_TOL: f64 = 1e-9;

/// Positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState(ComplexMatrix);

impl DensityState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        check_state(&matrix)?;
        Ok(Self(matrix))
    }

    pub fn pure(psi: &Ket) -> Result<Self> {
        psi.check_normalized()?;
        Ok(Self(psi.projector()))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(ComplexMatrix::identity(d).scale_real(1.0 / d as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `<psi| rho |psi>`.
    pub fn fidelity_with(&self, psi: &Ket) -> f64 {
        self.0.expectation(psi).re
    }
}

fn check_state(m: &ComplexMatrix) -> Result<()> {
    let eig = m.hermitian_eigensystem()?;
    if eig.min() < -STATE_TOL {
        return Err(Error::NotPositive { min_eigenvalue: eig.min() });
    }
    let trace = m.trace();
    if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
        return Err(Error::NotUnitTrace { trace: trace.re });
    }
    Ok(())
}

/// Completely positive, trace-preserving map given by Kraus operators
/// `K_l` of shape `d_out x d_in`.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    /// Validates shapes and trace preservation.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidParameter("channel needs at least one Kraus operator".into()))?;
        let (d_out, d_in) = (first.rows(), first.cols());
        if let Some(k) = kraus.iter().find(|k| (k.rows(), k.cols()) != (d_out, d_in)) {
            return Err(Error::Dimension(format!(
                "Kraus operator is {}x{}, expected {d_out}x{d_in}",
                k.rows(),
                k.cols()
            )));
        }
        let channel = Self { d_in, d_out, kraus };
        let residual = channel.tp_residual();
        if residual > TP_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(channel)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `||sum_l K_l^dagger K_l - I||_F`.
    pub fn tp_residual(&self) -> f64 {
        let sum = self
            .kraus
            .iter()
            .fold(ComplexMatrix::zeros(self.d_in, self.d_in), |acc, k| &acc + &(&k.dagger() * k));
        sum.distance(&ComplexMatrix::identity(self.d_in))
    }

    pub fn identity(d: usize) -> Self {
        Self { d_in: d, d_out: d, kraus: vec![ComplexMatrix::identity(d)] }
    }

    /// `rho -> U rho U^dagger`.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let residual = u.unitarity_residual();
        if residual > STATE_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Self::new(vec![u])
    }

    /// `sum_l K_l rho K_l^dagger`.
    pub fn apply(&self, rho: &DensityState) -> Result<DensityState> {
        if rho.dim() != self.d_in {
            return Err(Error::Dimension(format!(
                "channel input dimension {} but state dimension {}",
                self.d_in,
                rho.dim()
            )));
        }
        Ok(DensityState(self.apply_unchecked(rho.matrix())))
    }

    /// Channel action on an arbitrary operator (no positivity requirement).
    pub fn apply_operator(&self, op: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !op.is_square() || op.rows() != self.d_in {
            return Err(Error::Dimension(format!(
                "channel input dimension {} but operator is {}x{}",
                self.d_in,
                op.rows(),
                op.cols()
            )));
        }
        Ok(self.apply_unchecked(op))
    }

    fn apply_unchecked(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.kraus
            .iter()
            .fold(ComplexMatrix::zeros(self.d_out, self.d_out), |acc, k| {
                &acc + &(&(k * rho) * &k.dagger())
            })
    }

    /// Output state for a pure input.
    pub fn apply_pure(&self, psi: &Ket) -> Result<DensityState> {
        self.apply(&DensityState::pure(psi)?)
    }

    /// `after o before`: Kraus operators are all products `A_i B_j`.
    pub fn compose(after: &QuantumChannel, before: &QuantumChannel) -> Result<Self> {
        if after.d_in != before.d_out {
            return Err(Error::Dimension(format!(
                "cannot feed a {}-dimensional output into a {}-dimensional input",
                before.d_out, after.d_in
            )));
        }
        let kraus = after
            .kraus
            .iter()
            .flat_map(|a| before.kraus.iter().map(move |b| a * b))
            .collect();
        Self::new(kraus)
    }

    /// `rho -> U E(rho) U^dagger`, cheaper than composing with a unitary channel.
    pub fn followed_by_unitary(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.cols() != self.d_out {
            return Err(Error::Dimension("unitary does not match channel output".into()));
        }
        Self::new(self.kraus.iter().map(|k| u * k).collect())
    }

    /// Choi state `(E (x) I)(Phi_00)`.
    pub fn choi(&self) -> Result<ChoiMatrix> {
        if self.d_in != self.d_out {
            return Err(Error::Dimension(format!(
                "Choi state needs a square channel, got {} -> {}",
                self.d_in, self.d_out
            )));
        }
        let d = self.d_in;
        let acc = self
            .choi_components()
            .iter()
            .fold(ComplexMatrix::zeros(d * d, d * d), |acc, v| &acc + &v.projector());
        ChoiMatrix::new(d, acc)
    }

    /// Unnormalized vectors `(K_l (x) I)|Phi_00>` whose projectors sum to the
    /// Choi state. The row-major entries of `K_l / sqrt(d)` are exactly these
    /// amplitudes.
    pub fn choi_components(&self) -> Vec<Ket> {
        let scale = Complex64::new(1.0 / (self.d_in as f64).sqrt(), 0.0);
        self.kraus
            .iter()
            .map(|k| Ket::from_vec(k.as_slice().iter().map(|z| z * scale).collect()))
            .collect()
    }

    /// Largest Schmidt rank among the Choi components, an upper bound on the
    /// channel's Schmidt number (equal to the largest Kraus operator rank).
    pub fn schmidt_number_upper_bound(&self) -> Result<usize> {
        let mut best = 0;
        for v in self.choi_components() {
            let norm = v.norm();
            if norm < 1e-14 {
                continue;
            }
            let s = schmidt_decompose(&v.scaled(Complex64::new(1.0 / norm, 0.0)), self.d_out, self.d_in)?;
            best = best.max(s.rank());
        }
        Ok(best.max(1))
    }

    /// Parses the JSON channel format and checks trace preservation.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ChannelFile = serde_json::from_str(s)?;
        file.into_channel()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string(&ChannelFile::from(self))?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }
}

/// Choi state of a qudit channel.
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    d: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    /// Validates positivity, unit trace and `Tr_A J = I/d`.
    pub fn new(d: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != d * d || !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "Choi state for d = {d} must be {0}x{0}",
                d * d
            )));
        }
        check_state(&matrix)?;
        let marginal = matrix.partial_trace_first(d, d)?;
        let residual = marginal.distance(&ComplexMatrix::identity(d).scale_real(1.0 / d as f64));
        if residual > TP_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(Self { d, matrix })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `<Phi_00| J |Phi_00>`.
    pub fn entangled_fraction(&self) -> f64 {
        self.matrix.expectation(&maximally_entangled(self.d)).re
    }

    /// `tr[J O]`.
    pub fn expectation(&self, op: &ComplexMatrix) -> f64 {
        (&self.matrix * op).trace().re
    }

    /// Frobenius distance to `|Phi_00><Phi_00|`.
    pub fn distance_to_identity(&self) -> f64 {
        self.matrix.distance(&maximally_entangled(self.d).projector())
    }
}

/// `E_Z(rho) = sum_j |j><j| rho |j><j|`, the computational-basis measure
/// and prepare channel.
pub fn eb_measure_prepare(d: usize) -> Result<QuantumChannel> {
    check_dim(d)?;
    Ok(QuantumChannel {
        d_in: d,
        d_out: d,
        kraus: (0..d)
            .map(|j| ComplexMatrix::from_fn(d, d, |r, c| if r == j && c == j { ONE } else { ZERO }))
            .collect(),
    })
}

/// `E_k(rho) = (1/k) sum_l K_l rho K_l^dagger`, with `K_l` the projector
/// onto the `k` cyclically consecutive levels `l, l+1, ..., l+k-1`.
///
/// Each Kraus operator has rank `k`, so the Choi state has Schmidt number at
/// most `k`, and the two-basis average fidelity equals `(1 + k/d)/2`.
pub fn saturating_channel(d: usize, k: usize) -> Result<QuantumChannel> {
    check_dim(d)?;
    if k == 0 || k > d {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= d, got k = {k}, d = {d}")));
    }
    let (shift, _) = generalized_pauli(d)?;
    let window = ComplexMatrix::from_fn(d, d, |r, c| if r == c && r < k { ONE } else { ZERO });
    let weight = 1.0 / (k as f64).sqrt();
    let mut kraus = Vec::with_capacity(d);
    let mut shift_l = ComplexMatrix::identity(d);
    for _ in 0..d {
        let k_l = &(&shift_l * &window) * &shift_l.dagger();
        kraus.push(k_l.scale_real(weight));
        shift_l = &shift * &shift_l;
    }
    QuantumChannel::new(kraus)
}

/// `rho -> (1-p) rho + p I/d`, realized with the `d^2` Weyl operators
/// `X^a Z^b`: weight `sqrt(1 - p + p/d^2)` on the identity and `sqrt(p/d^2)`
/// on the others (zero-weight operators are dropped).
pub fn depolarizing(d: usize, p: f64) -> Result<QuantumChannel> {
    check_dim(d)?;
    check_probability(p)?;
    let (x, z) = generalized_pauli(d)?;
    let dd = (d * d) as f64;
    let mut kraus = vec![ComplexMatrix::identity(d).scale_real((1.0 - p + p / dd).sqrt())];
    if p > 0.0 {
        let w = (p / dd).sqrt();
        for a in 0..d {
            for b in 0..d {
                if a == 0 && b == 0 {
                    continue;
                }
                kraus.push((&x.pow(a) * &z.pow(b)).scale_real(w));
            }
        }
    }
    QuantumChannel::new(kraus)
}

/// `rho -> (1-p) rho + p sum_j |j><j| rho |j><j|`.
pub fn dephasing(d: usize, p: f64) -> Result<QuantumChannel> {
    check_dim(d)?;
    check_probability(p)?;
    let mut kraus = Vec::with_capacity(d + 1);
    if p < 1.0 {
        kraus.push(ComplexMatrix::identity(d).scale_real((1.0 - p).sqrt()));
    }
    if p > 0.0 {
        let w = Complex64::new(p.sqrt(), 0.0);
        for j in 0..d {
            kraus.push(ComplexMatrix::from_fn(d, d, |r, c| if r == j && c == j { w } else { ZERO }));
        }
    }
    QuantumChannel::new(kraus)
}

/// Random channel with `n_kraus` operators `G_i S^{-1/2}`, `G_i` complex
/// Gaussian and `S = sum_i G_i^dagger G_i`.
pub fn random_channel<R: Rng + ?Sized>(d: usize, n_kraus: usize, rng: &mut R) -> Result<QuantumChannel> {
    if d == 0 || n_kraus == 0 {
        return Err(Error::InvalidParameter("random channel needs d >= 1 and n_kraus >= 1".into()));
    }
    let gs: Vec<ComplexMatrix> = (0..n_kraus).map(|_| ComplexMatrix::random_gaussian(d, d, rng)).collect();
    let s = gs.iter().fold(ComplexMatrix::zeros(d, d), |acc, g| &acc + &(&g.dagger() * g));
    let eig = s.hermitian_eigensystem()?;
    let inv_sqrt: Vec<Complex64> = eig.values.iter().map(|&l| Complex64::new(1.0 / l.sqrt(), 0.0)).collect();
    let s_inv_sqrt = &(&eig.vectors * &ComplexMatrix::diagonal(&inv_sqrt)) * &eig.vectors.dagger();
    QuantumChannel::new(gs.iter().map(|g| g * &s_inv_sqrt).collect())
}

/// Two-qubit controlled-NOT with the first (most significant) qubit as
/// control.
pub fn cnot() -> ComplexMatrix {
    ComplexMatrix::from_real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0,
        ],
    )
    .expect("static matrix")
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {d}")));
    }
    Ok(())
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Complex entries as `[re, im]`, nested by row.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

/// On-disk channel format: `{"d": int, "kraus": [matrix, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelFile {
    pub d: usize,
    pub kraus: Vec<MatrixJson>,
}

impl ChannelFile {
    pub fn into_channel(self) -> Result<QuantumChannel> {
        let kraus = self.kraus.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
        if let Some(k) = kraus.iter().find(|k| k.rows() != self.d || k.cols() != self.d) {
            return Err(Error::Dimension(format!(
                "file declares d = {} but holds a {}x{} Kraus operator",
                self.d,
                k.rows(),
                k.cols()
            )));
        }
        QuantumChannel::new(kraus)
    }
}

impl From<&QuantumChannel> for ChannelFile {
    fn from(ch: &QuantumChannel) -> Self {
        Self { d: ch.d_in, kraus: ch.kraus.iter().map(matrix_to_json).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{x_basis_state, z_basis_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_zoo(d: usize) -> Vec<QuantumChannel> {
        let mut zoo = vec![
            QuantumChannel::identity(d),
            eb_measure_prepare(d).unwrap(),
            depolarizing(d, 0.3).unwrap(),
            dephasing(d, 0.6).unwrap(),
        ];
        for k in 1..=d {
            zoo.push(saturating_channel(d, k).unwrap());
        }
        zoo
    }

    #[test]
    fn zoo_is_trace_preserving_with_valid_choi() {
        for d in 2..=6 {
            for ch in all_zoo(d) {
                assert!(ch.tp_residual() < TP_TOL);
                let j = ch.choi().unwrap();
                assert!((j.matrix().trace().re - 1.0).abs() < 1e-12);
                assert!(j.matrix().hermitian_eigensystem().unwrap().min() > -STATE_TOL);
                let marginal = j.matrix().partial_trace_first(d, d).unwrap();
                assert!(marginal.distance(&ComplexMatrix::identity(d).scale_real(1.0 / d as f64)) < 1e-8);
            }
        }
    }

    #[test]
    fn rejects_non_trace_preserving() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(QuantumChannel::new(vec![half]), Err(Error::NotTracePreserving { .. })));
        assert!(QuantumChannel::new(vec![]).is_err());
        let mixed = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)];
        assert!(matches!(QuantumChannel::new(mixed), Err(Error::Dimension(_))));
    }

    #[test]
    fn apply_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let psi = ComplexMatrix::random_gaussian(3, 1, &mut rng).column(0).normalized().unwrap();
        let rho = DensityState::pure(&psi).unwrap();
        let out = QuantumChannel::identity(3).apply(&rho).unwrap();
        assert!(out.matrix().distance(rho.matrix()) < 1e-15);

        let plus = DensityState::pure(&x_basis_state(2, 0).unwrap()).unwrap();
        let out = eb_measure_prepare(2).unwrap().apply(&plus).unwrap();
        assert!(out.matrix().distance(DensityState::maximally_mixed(2).matrix()) < 1e-15);

        let out = depolarizing(3, 1.0).unwrap().apply(&rho).unwrap();
        assert!(out.matrix().distance(DensityState::maximally_mixed(3).matrix()) < 1e-12);

        assert!(matches!(
            QuantumChannel::identity(2).apply(&rho),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn density_state_validation() {
        let neg = ComplexMatrix::from_real(2, 2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(matches!(DensityState::new(neg), Err(Error::NotPositive { .. })));
        let big = ComplexMatrix::identity(2);
        assert!(matches!(DensityState::new(big), Err(Error::NotUnitTrace { .. })));
    }

    #[test]
    fn choi_examples() {
        let j = QuantumChannel::identity(2).choi().unwrap();
        assert!(j.distance_to_identity() < 1e-15);

        let j = eb_measure_prepare(2).unwrap().choi().unwrap();
        let expected = ComplexMatrix::from_real(
            4,
            4,
            &[0.5, 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0.5],
        )
        .unwrap();
        assert!(j.matrix().distance(&expected) < 1e-15);
        assert_eq!(eb_measure_prepare(2).unwrap().schmidt_number_upper_bound().unwrap(), 1);

        let rect = QuantumChannel::new(vec![ComplexMatrix::from_real(1, 2, &[1.0, 0.0]).unwrap(),
                                            ComplexMatrix::from_real(1, 2, &[0.0, 1.0]).unwrap()]).unwrap();
        assert_eq!((rect.d_in(), rect.d_out()), (2, 1));
        assert!(matches!(rect.choi(), Err(Error::Dimension(_))));
    }

    #[test]
    fn saturating_choi_components_have_rank_k() {
        let ch = saturating_channel(4, 2).unwrap();
        assert_eq!(ch.schmidt_number_upper_bound().unwrap(), 2);
        // sqrt(d) K_0 |Phi_00> = |00> + |11>
        let k0 = &ch.kraus()[0].scale_real(2f64.sqrt());
        let v = k0.kron(&ComplexMatrix::identity(4)).unwrap().apply(&maximally_entangled(4)).scaled(Complex64::new(2.0, 0.0));
        let expected = Ket::basis(16, 0).unwrap().add(&Ket::basis(16, 5).unwrap());
        assert!(v.distance(&expected) < 1e-12);
        for d in 2..=5 {
            for k in 1..=d {
                assert_eq!(saturating_channel(d, k).unwrap().schmidt_number_upper_bound().unwrap(), k);
            }
        }
    }

    #[test]
    fn saturating_full_rank_is_identity() {
        for d in 2..=5 {
            let ch = saturating_channel(d, d).unwrap();
            assert!(ch.choi().unwrap().distance_to_identity() < 1e-12);
        }
        assert!(saturating_channel(3, 0).is_err());
        assert!(saturating_channel(3, 4).is_err());
    }

    #[test]
    fn compose_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let e = random_channel(3, 2, &mut rng).unwrap();
        let c = QuantumChannel::compose(&QuantumChannel::identity(3), &e).unwrap();
        for j in 0..3 {
            let psi = z_basis_state(3, j).unwrap();
            let a = e.apply_pure(&psi).unwrap();
            let b = c.apply_pure(&psi).unwrap();
            assert!(a.matrix().distance(b.matrix()) < 1e-14);
        }

        let ebz = eb_measure_prepare(3).unwrap();
        let twice = QuantumChannel::compose(&ebz, &ebz).unwrap();
        assert!(twice.choi().unwrap().matrix().distance(ebz.choi().unwrap().matrix()) < 1e-14);

        let mismatch = QuantumChannel::compose(&QuantumChannel::identity(2), &e);
        assert!(matches!(mismatch, Err(Error::Dimension(_))));
    }

    #[test]
    fn local_unitaries_act_on_choi_by_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for d in [2, 3] {
            let e = random_channel(d, 3, &mut rng).unwrap();
            let u = ComplexMatrix::random_unitary(d, &mut rng);
            let v = ComplexMatrix::random_unitary(d, &mut rng);
            // E'(rho) = u E(v^dagger rho v) u^dagger
            let inner = QuantumChannel::compose(&e, &QuantumChannel::unitary(v.dagger()).unwrap()).unwrap();
            let e_prime = QuantumChannel::compose(&QuantumChannel::unitary(u.clone()).unwrap(), &inner).unwrap();
            // (A (x) I)|Phi> = (I (x) A^T)|Phi>, so the reference side picks up conj(v)
            let local = u.kron(&v.conj()).unwrap();
            let expected = &(&local * e.choi().unwrap().matrix()) * &local.dagger();
            assert!(e_prime.choi().unwrap().matrix().distance(&expected) < 1e-10);
        }
    }

    #[test]
    fn depolarizing_and_dephasing_actions() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let psi = ComplexMatrix::random_gaussian(4, 1, &mut rng).column(0).normalized().unwrap();
        let rho = DensityState::pure(&psi).unwrap();
        let p = 0.37;
        let out = depolarizing(4, p).unwrap().apply(&rho).unwrap();
        let expected = &rho.matrix().scale_real(1.0 - p) + &ComplexMatrix::identity(4).scale_real(p / 4.0);
        assert!(out.matrix().distance(&expected) < 1e-12);
        assert!(depolarizing(4, 0.0).unwrap().choi().unwrap().distance_to_identity() < 1e-15);

        let out = dephasing(4, p).unwrap().apply(&rho).unwrap();
        let pinched = eb_measure_prepare(4).unwrap().apply(&rho).unwrap();
        let expected = &rho.matrix().scale_real(1.0 - p) + &pinched.matrix().scale_real(p);
        assert!(out.matrix().distance(&expected) < 1e-12);
        let full = dephasing(4, 1.0).unwrap().apply(&rho).unwrap();
        assert!(full.matrix().distance(pinched.matrix()) < 1e-12);

        assert!(depolarizing(2, 1.5).is_err());
        assert!(dephasing(2, -0.1).is_err());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let ch = saturating_channel(3, 2).unwrap();
        let back = QuantumChannel::from_json_str(&ch.to_json_string().unwrap()).unwrap();
        assert!(back.choi().unwrap().matrix().distance(ch.choi().unwrap().matrix()) < 1e-15);

        let bad = r#"{"d": 2, "kraus": [[[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]]}"#;
        match QuantumChannel::from_json_str(bad) {
            Err(Error::NotTracePreserving { residual }) => assert!((residual - 0.75 * 2f64.sqrt()).abs() < 1e-12),
            other => panic!("expected TP error, got {other:?}"),
        }
        let wrong_d = r#"{"d": 3, "kraus": [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]]}"#;
        assert!(matches!(QuantumChannel::from_json_str(wrong_d), Err(Error::Dimension(_))));
        assert!(matches!(QuantumChannel::from_json_str("{"), Err(Error::Json(_))));
    }

    #[test]
    fn cnot_is_unitary_permutation() {
        let c = cnot();
        assert!(c.unitarity_residual() < 1e-15);
        assert_eq!(c.apply(&Ket::basis(4, 2).unwrap()), Ket::basis(4, 3).unwrap());
        assert_eq!(c.apply(&Ket::basis(4, 1).unwrap()), Ket::basis(4, 1).unwrap());
    }
}
