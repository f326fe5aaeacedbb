//! A state-vector simulator for quantum computation.
//!
//! A register of `l` qubits is stored as `2^l` complex amplitudes indexed by
//! the computational basis; qubit 0 is the least significant bit of the basis
//! index. On top of the register the crate provides a universal gate set,
//! the quantum Fourier transform, Shor's factoring algorithm, Grover search,
//! split-operator evolution of a particle on a periodic 1-D grid, and the
//! five-qubit error-correcting code with syndrome recovery.
//!
//! All randomness flows through caller-supplied RNGs, so any fixed seed
//! reproduces a run bit for bit.

pub mod error;
pub mod gates;
pub mod grover;
pub mod hamsim;
pub mod qecc5;
pub mod qft;
pub mod shor;
pub mod statevec;

pub use error::{Error, Result};
pub use gates::{Circuit, GateOp, ReversibleFunction, Span, Unitary2};
pub use grover::{grover_search, GroverOutcome, SearchOracle};
pub use hamsim::{evolve, Grid1D, Observables, SplitHamiltonian, SplitOrder};
pub use qecc5::{logical_error_rate, FiveQubitCode, LogicalQubit, NoiseModel, PauliError, Syndrome};
pub use qft::{Direction, QftSpec};
pub use shor::{factor, factor_with_base, FactorReport, FactoringInstance};
pub use statevec::{MeasurementOutcome, StateVector, MAX_QUBITS};

/// Complex amplitude type used throughout.
pub type Complex = num_complex::Complex64;
