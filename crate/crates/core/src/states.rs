//! Basis states and operators on qudits: the computational (Z) basis, its
//! Fourier transform (X basis), the clock and shift operators, the Bell basis
//! they generate, and the two-basis correlation operator. The `product_*`
//! functions give the `n`-qubit analogues built from local qubit bases and
//! tensor products of Pauli matrices.
//!
//! Multi-qubit bit lists are ordered most-significant first: `bits[0]` is
//! qubit `N` and is the leftmost tensor factor, so the bit list
//! `[b_N, ..., b_1]` labels the computational index `sum_i b_i 2^(i-1)`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{phase, ComplexMatrix, Ket, ONE, ZERO};

/// Which of the two mutually unbiased bases a state belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

/// How the X basis is built for a given dimension.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Fourier basis of a single `d`-level system.
    #[default]
    Qudit,
    /// Products of local qubit bases, `d = 2^n`.
    Qubits,
}

/// Index of an input state within one of the two bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisLabel {
    pub kind: Basis,
    pub index: usize,
}

impl BasisLabel {
    pub fn new(d: usize, kind: Basis, index: usize) -> Result<Self> {
        if index >= d {
            return Err(Error::IndexOutOfRange { index, bound: d });
        }
        Ok(Self { kind, index })
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.index)
    }
}

/// Label `(l, m)` of the Bell state `X^l (x) Z^m |Phi_00>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BellLabel {
    pub l: usize,
    pub m: usize,
}

impl BellLabel {
    pub fn new(d: usize, l: usize, m: usize) -> Result<Self> {
        for index in [l, m] {
            if index >= d {
                return Err(Error::IndexOutOfRange { index, bound: d });
            }
        }
        Ok(Self { l, m })
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {d}")));
    }
    Ok(())
}

/// `|j>`.
pub fn z_basis_state(d: usize, j: usize) -> Result<Ket> {
    Ket::basis(d, j)
}

/// `|k̄> = d^{-1/2} sum_j e^{+2 pi i k j / d} |j>`.
pub fn x_basis_state(d: usize, k: usize) -> Result<Ket> {
    if k >= d {
        return Err(Error::IndexOutOfRange { index: k, bound: d });
    }
    let norm = 1.0 / (d as f64).sqrt();
    Ok(Ket::from_vec(
        (0..d)
            .map(|j| phase(2.0 * PI * ((k * j) % d) as f64 / d as f64) * norm)
            .collect(),
    ))
}

/// Index `-j` modulo `d`.
pub fn neg_mod(j: usize, d: usize) -> usize {
    (d - j % d) % d
}

/// Clock `Z = sum_j e^{2 pi i j/d} |j><j|` and cyclic shift
/// `X = sum_j |j+1><j|`, returned as `(X, Z)`.
pub fn generalized_pauli(d: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_dim(d)?;
    let shift = ComplexMatrix::from_fn(d, d, |r, c| if r == (c + 1) % d { ONE } else { ZERO });
    let clock = ComplexMatrix::from_fn(d, d, |r, c| {
        if r == c {
            phase(2.0 * PI * r as f64 / d as f64)
        } else {
            ZERO
        }
    });
    Ok((shift, clock))
}

/// `|Phi_00> = d^{-1/2} sum_j |j>|j>`.
pub fn maximally_entangled(d: usize) -> Ket {
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    Ket::from_vec((0..d * d).map(|i| if i / d == i % d { amp } else { ZERO }).collect())
}

/// `|Phi_lm> = (X^l (x) Z^m) |Phi_00>`.
pub fn bell_state(d: usize, l: usize, m: usize) -> Result<Ket> {
    let label = BellLabel::new(d, l, m)?;
    let (x, z) = generalized_pauli(d)?;
    let op = x.pow(label.l).kron(&z.pow(label.m))?;
    Ok(op.apply(&maximally_entangled(d)))
}

/// All `d^2` Bell states, ordered by `(l, m)` lexicographically.
pub fn bell_basis(d: usize) -> Result<Vec<(BellLabel, Ket)>> {
    let mut out = Vec::with_capacity(d * d);
    for l in 0..d {
        for m in 0..d {
            out.push((BellLabel { l, m }, bell_state(d, l, m)?));
        }
    }
    Ok(out)
}

/// `sum_psi |psi><psi| (x) |psi*><psi*|` over the given input states.
///
/// With a channel's Choi state `J`, `tr[J C] / 2` over the `2d` two-basis
/// inputs is the two-basis average fidelity.
pub fn correlation_from_states<'a>(states: impl IntoIterator<Item = &'a Ket>) -> Result<ComplexMatrix> {
    let mut acc: Option<ComplexMatrix> = None;
    for psi in states {
        let term = psi.kron(&psi.conj()).projector();
        acc = Some(match acc {
            None => term,
            Some(a) => &a + &term,
        });
    }
    acc.ok_or_else(|| Error::InvalidParameter("no input states".into()))
}

/// `C_d = sum_j ( |j><j| (x) |j><j| + |j̄><j̄| (x) |-j̄><-j̄| )`.
pub fn correlation_operator(d: usize) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for j in 0..d {
        let z = z_basis_state(d, j)?;
        acc = &acc + &z.kron(&z).projector();
        let x = x_basis_state(d, j)?;
        let x_neg = x_basis_state(d, neg_mod(j, d))?;
        acc = &acc + &x.kron(&x_neg).projector();
    }
    Ok(acc)
}

/// `sum_l Phi_{l,0} + sum_m Phi_{0,m}`.
pub fn bell_diagonal_correlation(d: usize) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for l in 0..d {
        acc = &acc + &bell_state(d, l, 0)?.projector();
    }
    for m in 0..d {
        acc = &acc + &bell_state(d, 0, m)?.projector();
    }
    Ok(acc)
}

/// `I + Phi_00 - sum_{l,m >= 1} Phi_lm`.
pub fn correlation_via_completeness(d: usize) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let mut acc = &ComplexMatrix::identity(d * d) + &maximally_entangled(d).projector();
    for l in 1..d {
        for m in 1..d {
            acc = &acc - &bell_state(d, l, m)?.projector();
        }
    }
    Ok(acc)
}

/// `I + Phi_00`, the operator upper bound on the correlation operator.
pub fn correlation_ceiling(d: usize) -> ComplexMatrix {
    &ComplexMatrix::identity(d * d) + &maximally_entangled(d).projector()
}

/// Input states of both bases: Z first, then X, each in index order.
pub fn two_bases(d: usize, mode: Mode) -> Result<Vec<(BasisLabel, Ket)>> {
    let mut out = Vec::with_capacity(2 * d);
    match mode {
        Mode::Qudit => {
            check_dim(d)?;
            for j in 0..d {
                out.push((BasisLabel { kind: Basis::Z, index: j }, z_basis_state(d, j)?));
            }
            for j in 0..d {
                out.push((BasisLabel { kind: Basis::X, index: j }, x_basis_state(d, j)?));
            }
        }
        Mode::Qubits => {
            let n = qubit_count(d)?;
            for kind in [Basis::Z, Basis::X] {
                for j in 0..d {
                    out.push((BasisLabel { kind, index: j }, product_basis_state(n, kind, &index_bits(n, j))?));
                }
            }
        }
    }
    Ok(out)
}

/// Correlation operator for the chosen basis pair.
pub fn correlation_for(d: usize, mode: Mode) -> Result<ComplexMatrix> {
    match mode {
        Mode::Qudit => correlation_operator(d),
        Mode::Qubits => product_correlation_operator(qubit_count(d)?),
    }
}

/// `n` such that `d = 2^n`, `n >= 1`.
pub fn qubit_count(d: usize) -> Result<usize> {
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("qubit mode needs d = 2^n with n >= 1, got {d}")));
    }
    Ok(d.trailing_zeros() as usize)
}

/// Bits of `j` as an `n`-long list, most significant first.
pub fn index_bits(n: usize, j: usize) -> Vec<u8> {
    (0..n).rev().map(|i| ((j >> i) & 1) as u8).collect()
}

fn check_bits(n: usize, bits: &[u8]) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    if bits.len() != n {
        return Err(Error::Dimension(format!("expected {n} bits, got {}", bits.len())));
    }
    if let Some(&b) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::InvalidParameter(format!("bit value {b} is not 0 or 1")));
    }
    Ok(())
}

/// `|b_N> (x) ... (x) |b_1>` in the local Z or X basis.
pub fn product_basis_state(n_qubits: usize, kind: Basis, bits: &[u8]) -> Result<Ket> {
    check_bits(n_qubits, bits)?;
    let local = |b: u8| match kind {
        Basis::Z => z_basis_state(2, b as usize),
        Basis::X => x_basis_state(2, b as usize),
    };
    let mut acc = local(bits[0])?;
    for &b in &bits[1..] {
        acc = acc.kron(&local(b)?);
    }
    Ok(acc)
}

/// Tensor product of `sigma_x` (or `sigma_z`) on every qubit whose mask bit
/// is set and the identity elsewhere.
pub fn product_pauli(n_qubits: usize, which: Basis, mask: &[u8]) -> Result<ComplexMatrix> {
    check_bits(n_qubits, mask)?;
    let (x, z) = generalized_pauli(2)?;
    let pauli = match which {
        Basis::X => x,
        Basis::Z => z,
    };
    let local = |b: u8| if b == 1 { pauli.clone() } else { ComplexMatrix::identity(2) };
    let mut acc = local(mask[0]);
    for &b in &mask[1..] {
        acc = acc.kron(&local(b))?;
    }
    Ok(acc)
}

/// `(X^l (x) Z^m) |Phi_00>` with product Paulis, `d = 2^n`.
pub fn product_bell_state(n_qubits: usize, l_mask: &[u8], m_mask: &[u8]) -> Result<Ket> {
    let x = product_pauli(n_qubits, Basis::X, l_mask)?;
    let z = product_pauli(n_qubits, Basis::Z, m_mask)?;
    Ok(x.kron(&z)?.apply(&maximally_entangled(1 << n_qubits)))
}

/// Correlation operator of the product Z and product X bases.
pub fn product_correlation_operator(n_qubits: usize) -> Result<ComplexMatrix> {
    let d = 1usize << n_qubits;
    let states: Vec<Ket> = two_bases(d, Mode::Qubits)?.into_iter().map(|(_, k)| k).collect();
    correlation_from_states(&states)
}

/// Product-Pauli analogue of [`bell_diagonal_correlation`].
pub fn product_bell_diagonal_correlation(n_qubits: usize) -> Result<ComplexMatrix> {
    let d = 1usize << n_qubits;
    let zero = vec![0u8; n_qubits];
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for j in 0..d {
        let mask = index_bits(n_qubits, j);
        acc = &acc + &product_bell_state(n_qubits, &mask, &zero)?.projector();
        acc = &acc + &product_bell_state(n_qubits, &zero, &mask)?.projector();
    }
    Ok(acc)
}
