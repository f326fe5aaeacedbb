//! Quantum register as a dense vector of complex amplitudes.
//!
//! A register of `l` qubits holds `2^l` amplitudes `c_n`; the probability of
//! observing basis state `n` is `|c_n|^2`. Qubit `q` is bit `q` of the basis
//! index, so qubit 0 is the least significant bit.

use std::fmt::Write as _;
use std::io::BufRead;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Widest register the simulator will allocate (2^26 amplitudes = 1 GiB).
pub const MAX_QUBITS: usize = 26;

/// Norm may drift this far from 1 before measurement refuses to sample.
const MEASURE_NORM_TOL: f64 = 1e-6;

/// Result of measuring a register or a subset of its qubits.
///
/// `bits[j]` is the observed value of the j-th measured qubit and `value`
/// packs those bits little-endian, so for a full measurement `value` is the
/// surviving basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementOutcome {
    pub value: usize,
    pub bits: Vec<u8>,
}

/// A pure state of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_qubit_count(l: usize) -> Result<()> {
    if l == 0 || l > MAX_QUBITS {
        return Err(Error::BadQubitCount { got: l, max: MAX_QUBITS });
    }
    Ok(())
}

impl StateVector {
    /// The basis state `|n>` of an `l`-qubit register.
    pub fn basis_state(l: usize, n: usize) -> Result<Self> {
        check_qubit_count(l)?;
        if n >= 1 << l {
            return Err(Error::BadBasisIndex { index: n, qubits: l });
        }
        let mut amps = vec![Complex64::ZERO; 1 << l];
        amps[n] = Complex64::ONE;
        Ok(StateVector { num_qubits: l, amps })
    }

    /// Uniform superposition of all `2^l` basis states.
    pub fn uniform(l: usize) -> Result<Self> {
        check_qubit_count(l)?;
        let dim = 1usize << l;
        // 1/dim is an exact power of two, so the square root rounds cleanly.
        let a = Complex64::new((1.0 / dim as f64).sqrt(), 0.0);
        Ok(StateVector { num_qubits: l, amps: vec![a; dim] })
    }

    /// Wraps an explicit amplitude vector. The length must be a power of two
    /// and the norm must already be within 1e-9 of 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadLength { len });
        }
        let l = len.trailing_zeros() as usize;
        check_qubit_count(l)?;
        let s = StateVector { num_qubits: l, amps };
        let norm = s.norm_sqr().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(s)
    }

    /// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
    pub fn random<R: Rng + ?Sized>(l: usize, rng: &mut R) -> Result<Self> {
        check_qubit_count(l)?;
        let mut amps: Vec<Complex64> = (0..1usize << l)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in &mut amps {
            *c /= norm;
        }
        Ok(StateVector { num_qubits: l, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of amplitudes, `2^num_qubits`.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    /// `|c_n|^2`.
    pub fn probability(&self, n: usize) -> f64 {
        self.amps[n].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::SizeMismatch { left: self.num_qubits, right: other.num_qubits });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`; 1 exactly when the states differ only by a global
    /// phase.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Measures every qubit. The register collapses to the observed basis
    /// state `|n>` exactly and the outcome carries `n` with its bits.
    pub fn measure_all<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<MeasurementOutcome> {
        let total = self.norm_sqr();
        if (total.sqrt() - 1.0).abs() > MEASURE_NORM_TOL {
            return Err(Error::NotNormalized { norm: total.sqrt() });
        }
        let u = rng.random::<f64>() * total;
        let mut cum = 0.0;
        let mut picked = self.amps.len() - 1;
        for (n, c) in self.amps.iter().enumerate() {
            cum += c.norm_sqr();
            if u < cum {
                picked = n;
                break;
            }
        }
        self.amps.fill(Complex64::ZERO);
        self.amps[picked] = Complex64::ONE;
        Ok(MeasurementOutcome {
            value: picked,
            bits: (0..self.num_qubits).map(|q| ((picked >> q) & 1) as u8).collect(),
        })
    }

    /// Measures the listed qubits jointly. The outcome is drawn from their
    /// marginal distribution; the register collapses to the renormalized
    /// conditional state. `bits[j]` belongs to `qubits[j]`.
    pub fn measure_subset<R: Rng + ?Sized>(
        &mut self,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<MeasurementOutcome> {
        if qubits.is_empty() {
            return Err(Error::EmptySelection);
        }
        let mut seen = 0usize;
        for &q in qubits {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange { index: q, qubits: self.num_qubits });
            }
            if seen >> q & 1 == 1 {
                return Err(Error::DuplicateQubit { index: q });
            }
            seen |= 1 << q;
        }
        let total = self.norm_sqr();
        if (total.sqrt() - 1.0).abs() > MEASURE_NORM_TOL {
            return Err(Error::NotNormalized { norm: total.sqrt() });
        }

        let k = qubits.len();
        let extract = |n: usize| -> usize {
            qubits
                .iter()
                .enumerate()
                .fold(0, |v, (j, &q)| v | ((n >> q) & 1) << j)
        };
        let mut marginal = vec![0.0f64; 1 << k];
        for (n, c) in self.amps.iter().enumerate() {
            marginal[extract(n)] += c.norm_sqr();
        }

        let u = rng.random::<f64>() * total;
        let mut cum = 0.0;
        let mut picked = (1usize << k) - 1;
        for (v, p) in marginal.iter().enumerate() {
            cum += p;
            if u < cum {
                picked = v;
                break;
            }
        }

        let scale = 1.0 / marginal[picked].sqrt();
        for (n, c) in self.amps.iter_mut().enumerate() {
            if extract(n) == picked {
                *c *= scale;
            } else {
                *c = Complex64::ZERO;
            }
        }
        Ok(MeasurementOutcome {
            value: picked,
            bits: (0..k).map(|j| ((picked >> j) & 1) as u8).collect(),
        })
    }

    /// Renders the dump format: one `index<TAB>re<TAB>im` line per nonzero
    /// amplitude, indices ascending.
    pub fn to_dump(&self) -> String {
        let mut out = String::new();
        for (n, c) in self.amps.iter().enumerate() {
            if c.re != 0.0 || c.im != 0.0 {
                writeln!(out, "{}\t{}\t{}", n, c.re, c.im).unwrap();
            }
        }
        out
    }

    /// Parses the dump format for an `l`-qubit register. Indices must be
    /// strictly ascending and in range; the norm may be off by at most 1e-6
    /// and is corrected on load.
    pub fn from_dump<R: BufRead>(l: usize, reader: R) -> Result<Self> {
        check_qubit_count(l)?;
        let mut amps = vec![Complex64::ZERO; 1 << l];
        let mut last: Option<usize> = None;
        for (lineno, line) in reader.lines().enumerate() {
            let lineno = lineno + 1;
            let line = line.map_err(|e| Error::BadDump { line: lineno, reason: e.to_string() })?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (idx, re, im) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
                (Some(i), Some(re), Some(im), None) => (i, re, im),
                _ => {
                    return Err(Error::BadDump {
                        line: lineno,
                        reason: "expected `index re im`".into(),
                    });
                }
            };
            let parse = |s: &str, what: &str| -> Result<f64> {
                s.parse().map_err(|_| Error::BadDump {
                    line: lineno,
                    reason: format!("bad {what} `{s}`"),
                })
            };
            let idx: usize = idx.parse().map_err(|_| Error::BadDump {
                line: lineno,
                reason: format!("bad index `{idx}`"),
            })?;
            if idx >= amps.len() {
                return Err(Error::BadDump {
                    line: lineno,
                    reason: format!("index {idx} out of range for {l} qubits"),
                });
            }
            if last.is_some_and(|p| idx <= p) {
                return Err(Error::BadDump {
                    line: lineno,
                    reason: format!("index {idx} not ascending"),
                });
            }
            last = Some(idx);
            amps[idx] = Complex64::new(parse(re, "real part")?, parse(im, "imaginary part")?);
        }
        let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > MEASURE_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        for c in &mut amps {
            *c /= norm;
        }
        Ok(StateVector { num_qubits: l, amps })
    }
}
