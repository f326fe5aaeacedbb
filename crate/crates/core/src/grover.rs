//! Grover's search.
//!
//! Finds the single marked item among `2^n` candidates with about
//! `(pi/4) sqrt(2^n)` oracle queries. Each iteration flips the phase of the
//! marked amplitude and then inverts every amplitude about the mean; the
//! pair acts as a rotation by `2 asin(2^{-n/2})` in the plane spanned by the
//! marked state and the uniform superposition, so the success probability
//! after `k` iterations is `sin^2((2k+1) asin(2^{-n/2}))`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::statevec::{StateVector, MAX_QUBITS};

/// A phase oracle marking one basis state, with a query counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOracle {
    num_qubits: usize,
    marked: usize,
    queries: usize,
}

impl SearchOracle {
    pub fn new(num_qubits: usize, marked: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::BadParameter("search space needs at least one qubit".into()));
        }
        if num_qubits > MAX_QUBITS {
            return Err(Error::BadQubitCount { got: num_qubits, max: MAX_QUBITS });
        }
        if marked >= 1 << num_qubits {
            return Err(Error::BadBasisIndex { index: marked, qubits: num_qubits });
        }
        Ok(SearchOracle { num_qubits, marked, queries: 0 })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn marked(&self) -> usize {
        self.marked
    }

    /// Queries answered so far.
    pub fn queries(&self) -> usize {
        self.queries
    }

    /// Flips the sign of the marked amplitude and counts the query.
    pub fn apply(&mut self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::SizeMismatch {
                left: state.num_qubits(),
                right: self.num_qubits,
            });
        }
        let amps = state.amps_mut();
        amps[self.marked] = -amps[self.marked];
        self.queries += 1;
        Ok(())
    }
}

/// Inversion about the mean: every amplitude `c` becomes `2 <c> - c`.
pub fn diffusion(state: &mut StateVector) {
    let amps = state.amps_mut();
    let mean = amps.iter().sum::<crate::Complex>() / amps.len() as f64;
    for c in amps.iter_mut() {
        *c = 2.0 * mean - *c;
    }
}

/// The iteration count maximizing success probability,
/// `floor((pi/4) sqrt(2^n))`.
pub fn optimal_iterations(num_qubits: usize) -> usize {
    (std::f64::consts::FRAC_PI_4 * ((1u64 << num_qubits) as f64).sqrt()) as usize
}

/// Probability of measuring the marked state after `iterations` rounds on
/// `num_qubits` qubits, by the closed-form rotation angle.
pub fn success_probability(num_qubits: usize, iterations: usize) -> f64 {
    let theta = (1.0 / (1u64 << num_qubits) as f64).sqrt().asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// Result of one full search: the measured candidate and the cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroverOutcome {
    pub hit: usize,
    pub found: bool,
    pub iterations: usize,
    pub queries: usize,
}

/// Runs Grover's algorithm from the uniform superposition and measures.
///
/// `iterations` defaults to [`optimal_iterations`]; `queries` reports the
/// oracle's cumulative counter, so a fresh oracle reports the cost of this
/// search alone.
pub fn grover_search<R: Rng + ?Sized>(
    oracle: &mut SearchOracle,
    iterations: Option<usize>,
    rng: &mut R,
) -> Result<GroverOutcome> {
    let k = iterations.unwrap_or_else(|| optimal_iterations(oracle.num_qubits()));
    let mut s = StateVector::uniform(oracle.num_qubits())?;
    for _ in 0..k {
        oracle.apply(&mut s)?;
        diffusion(&mut s);
    }
    let m = s.measure_all(rng)?;
    Ok(GroverOutcome {
        hit: m.value,
        found: m.value == oracle.marked(),
        iterations: k,
        queries: oracle.queries(),
    })
}
