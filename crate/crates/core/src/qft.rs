//! Quantum Fourier transform.
//!
//! The forward transform sends `|j>` to `(1/sqrt(2^m)) sum_k e^{+2 pi i jk/2^m} |k>`.
//! The circuit is the textbook ladder of Hadamards and controlled phases,
//! O(m^2) gates, finished by explicit swaps (three CNOTs each) that undo the
//! bit reversal. [`dft_reference`] computes the same unitary in O(n^2)
//! arithmetic straight from the kernel and is the measuring stick for every
//! circuit test.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{apply_circuit, Circuit, GateOp, Span};
use crate::statevec::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Which contiguous qubit range to transform, and which way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QftSpec {
    pub span: Span,
    pub direction: Direction,
}

fn build(total_qubits: usize, offset: usize, m: usize, direction: Direction) -> Result<Circuit> {
    if m == 0 {
        return Err(Error::BadParameter("QFT needs at least one qubit".into()));
    }
    let mut c = Circuit::new(total_qubits);
    for q in (0..m).rev() {
        c.push(GateOp::Hadamard { target: offset + q })?;
        for d in 1..=q {
            c.push(GateOp::ControlledPhase {
                control: offset + q - d,
                target: offset + q,
                angle: PI / (1 << d) as f64,
            })?;
        }
    }
    for i in 0..m / 2 {
        c.push_swap(offset + i, offset + m - 1 - i)?;
    }
    Ok(if direction == Direction::Forward { c } else { c.inverse() })
}

/// The transform on an `m`-qubit register as an explicit circuit.
pub fn qft_circuit(m: usize, direction: Direction) -> Result<Circuit> {
    build(m, 0, m, direction)
}

/// Applies the transform to `spec.span`, leaving qubits outside the span
/// untouched (the span transforms independently for every setting of the
/// spectator qubits).
pub fn apply_qft(state: &mut StateVector, spec: &QftSpec) -> Result<()> {
    let Span { start, len } = spec.span;
    if len == 0 || start + len > state.num_qubits() {
        return Err(Error::BadSpan(format!(
            "QFT span {}..{} does not fit a {}-qubit state",
            start,
            start + len,
            state.num_qubits()
        )));
    }
    let c = build(state.num_qubits(), start, len, spec.direction)?;
    apply_circuit(state, &c)
}

/// The discrete Fourier transform of an amplitude vector, computed directly
/// from the kernel `e^{+2 pi i jk/n} / sqrt(n)`. The length must be a power
/// of two.
pub fn dft_reference(amps: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = amps.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::BadLength { len: n });
    }
    let scale = 1.0 / (n as f64).sqrt();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Complex64::ZERO;
        for (j, a) in amps.iter().enumerate() {
            // Reduce j*k mod n before converting, so the angle never loses
            // precision to a large argument.
            let angle = TAU * ((j * k) % n) as f64 / n as f64;
            acc += a * Complex64::from_polar(1.0, angle);
        }
        out.push(acc * scale);
    }
    Ok(out)
}
