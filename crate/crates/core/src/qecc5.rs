//! The five-qubit error-correcting code.
//!
//! One logical qubit is protected inside five physical qubits. The code
//! space is the joint +1 eigenspace of the four stabilizer generators
//! `XZZXI` and its cyclic shifts; its images under the sixteen errors
//! {identity, X/Z/Y on each qubit} are pairwise orthogonal two-dimensional
//! subspaces that exactly fill the 32-dimensional space, which is what makes
//! the code perfect: a four-bit syndrome distinguishes all sixteen errors.
//!
//! Syndrome extraction applies a fixed decoding unitary that rotates the
//! sixteen subspaces onto the sixteen settings of qubits 1 through 4 with
//! the logical content left on qubit 0, then measures those four qubits.
//! Recovery undoes the unitary and reapplies the identified Pauli.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gates::for_each_pair;
use crate::statevec::StateVector;

/// Stabilizer generators as `(x_mask, z_mask)` bit masks over qubits 0-4:
/// `XZZXI`, `IXZZX`, `XIXZZ`, `ZXIXZ`, leftmost letter on qubit 0.
const GENERATORS: [(usize, usize); 4] = [
    (0b01001, 0b00110),
    (0b10010, 0b01100),
    (0b00101, 0b11000),
    (0b01010, 0b10001),
];

const QUBITS: usize = 5;
const DIM: usize = 1 << QUBITS;

/// The sixteen correctable errors. Enumeration order is fixed: `I`, then
/// `X0..X4`, `Z0..Z4`, `Y0..Y4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliError {
    I,
    X(usize),
    Z(usize),
    Y(usize),
}

impl PauliError {
    /// All sixteen errors in enumeration order.
    pub fn all() -> [PauliError; 16] {
        let mut out = [PauliError::I; 16];
        for i in 1..16 {
            out[i] = Self::from_index(i).unwrap();
        }
        out
    }

    /// Position in the fixed enumeration.
    pub fn index(&self) -> usize {
        match *self {
            PauliError::I => 0,
            PauliError::X(i) => 1 + i,
            PauliError::Z(i) => 6 + i,
            PauliError::Y(i) => 11 + i,
        }
    }

    pub fn from_index(index: usize) -> Result<Self> {
        match index {
            0 => Ok(PauliError::I),
            1..=5 => Ok(PauliError::X(index - 1)),
            6..=10 => Ok(PauliError::Z(index - 6)),
            11..=15 => Ok(PauliError::Y(index - 11)),
            _ => Err(Error::BadParameter(format!("error index {index} not in [0, 16)"))),
        }
    }

    fn qubit(&self) -> Option<usize> {
        match *self {
            PauliError::I => None,
            PauliError::X(i) | PauliError::Z(i) | PauliError::Y(i) => Some(i),
        }
    }

    /// `(x_mask, z_mask)` of the operator, with `Y = iXZ`.
    fn masks(&self) -> (usize, usize) {
        match *self {
            PauliError::I => (0, 0),
            PauliError::X(i) => (1 << i, 0),
            PauliError::Z(i) => (0, 1 << i),
            PauliError::Y(i) => (1 << i, 1 << i),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.qubit() {
            Some(i) if i >= QUBITS => {
                Err(Error::QubitOutOfRange { index: i, qubits: QUBITS })
            }
            _ => Ok(()),
        }
    }

    /// Applies the Pauli to a five-qubit state. `Y` carries the standard
    /// phases `Y|0> = i|1>`, `Y|1> = -i|0>`.
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        self.validate()?;
        if state.num_qubits() != QUBITS {
            return Err(Error::SizeMismatch { left: state.num_qubits(), right: QUBITS });
        }
        let dim = state.len();
        let amps = state.amps_mut();
        match *self {
            PauliError::I => {}
            PauliError::X(i) => for_each_pair(dim, i, |n0, n1| amps.swap(n0, n1)),
            PauliError::Z(i) => for_each_pair(dim, i, |_, n1| amps[n1] = -amps[n1]),
            PauliError::Y(i) => for_each_pair(dim, i, |n0, n1| {
                let (a, b) = (amps[n0], amps[n1]);
                amps[n1] = Complex64::I * a;
                amps[n0] = -Complex64::I * b;
            }),
        }
        Ok(())
    }
}

impl std::fmt::Display for PauliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            PauliError::I => write!(f, "I"),
            PauliError::X(i) => write!(f, "X{i}"),
            PauliError::Z(i) => write!(f, "Z{i}"),
            PauliError::Y(i) => write!(f, "Y{i}"),
        }
    }
}

impl std::str::FromStr for PauliError {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadParameter(format!("unknown error {s:?}, want I, X0..X4, Z0..Z4, or Y0..Y4"));
        if s == "I" {
            return Ok(PauliError::I);
        }
        let (kind, idx) = s.split_at(s.len().min(1));
        let i: usize = idx.parse().map_err(|_| bad())?;
        let e = match kind {
            "X" => PauliError::X(i),
            "Z" => PauliError::Z(i),
            "Y" => PauliError::Y(i),
            _ => return Err(bad()),
        };
        e.validate().map_err(|_| bad())?;
        Ok(e)
    }
}

/// Whether two Pauli operators given as `(x_mask, z_mask)` anticommute.
fn anticommute(a: (usize, usize), b: (usize, usize)) -> bool {
    ((a.0 & b.1).count_ones() + (a.1 & b.0).count_ones()) % 2 == 1
}

/// `M|n> = (-1)^{popcount(n & z_mask)} |n XOR x_mask>` for an operator with
/// disjoint X and Z support, which covers every generator.
fn apply_generator(v: &[Complex64], (x_mask, z_mask): (usize, usize)) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; v.len()];
    for (n, &c) in v.iter().enumerate() {
        let sign = if (n & z_mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        out[n ^ x_mask] = sign * c;
    }
    out
}

/// One qubit's worth of quantum information, `alpha|0> + beta|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalQubit {
    alpha: Complex64,
    beta: Complex64,
}

impl LogicalQubit {
    /// Requires `|alpha|^2 + |beta|^2 = 1` within 1e-12.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(LogicalQubit { alpha, beta })
    }

    pub fn zero() -> Self {
        LogicalQubit { alpha: Complex64::ONE, beta: Complex64::ZERO }
    }

    pub fn one() -> Self {
        LogicalQubit { alpha: Complex64::ZERO, beta: Complex64::ONE }
    }

    /// Haar-random point on the Bloch sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let g = |rng: &mut R| {
                let re: f64 = rng.sample(rand_distr::StandardNormal);
                let im: f64 = rng.sample(rand_distr::StandardNormal);
                Complex64::new(re, im)
            };
            let (a, b) = (g(rng), g(rng));
            let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
            if norm > 1e-6 {
                return LogicalQubit { alpha: a / norm, beta: b / norm };
            }
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// `|<self|other>|^2`; global phase drops out.
    pub fn fidelity(&self, other: &Self) -> f64 {
        (self.alpha.conj() * other.alpha + self.beta.conj() * other.beta).norm_sqr()
    }
}

/// A four-bit syndrome identifying one of the sixteen errors; bit `g` set
/// means the error anticommutes with generator `g`, so zero means no error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Syndrome {
    pub value: usize,
    pub bits: [u8; 4],
}

/// The code: logical basis, decoding unitary, and syndrome table.
#[derive(Debug, Clone)]
pub struct FiveQubitCode {
    zero: StateVector,
    one: StateVector,
    /// Row `b | s<<1` holds the conjugate of the error image `E|b_L>` for
    /// the error with syndrome `s`, so the matrix rotates each image onto
    /// `|b>` on qubit 0 and `|s>` on qubits 1-4.
    decode_matrix: Vec<Complex64>,
    syndromes: [u8; 16],
    recover_for: [PauliError; 16],
}

impl FiveQubitCode {
    pub fn new() -> Self {
        // |0_L> from projecting |00000> onto the stabilized subspace with
        // prod_g (I + M_g)/2, then normalizing; |1_L> is its image under the
        // logical operator X on all five qubits.
        let mut zero = vec![Complex64::ZERO; DIM];
        zero[0] = Complex64::ONE;
        for g in GENERATORS {
            let image = apply_generator(&zero, g);
            for (c, i) in zero.iter_mut().zip(image) {
                *c = (*c + i) * 0.5;
            }
        }
        let norm = zero.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-9, "projector annihilated |00000>");
        for c in zero.iter_mut() {
            *c /= norm;
        }
        let one: Vec<Complex64> = (0..DIM).map(|n| zero[n ^ (DIM - 1)]).collect();
        let zero = StateVector::from_amplitudes(zero).expect("codeword norm");
        let one = StateVector::from_amplitudes(one).expect("codeword norm");

        let mut syndromes = [0u8; 16];
        let mut recover_for = [PauliError::I; 16];
        let mut seen = [false; 16];
        let mut decode_matrix = vec![Complex64::ZERO; DIM * DIM];
        for e in PauliError::all() {
            let mut s = 0u8;
            for (g, generator) in GENERATORS.iter().enumerate() {
                s |= (anticommute(e.masks(), *generator) as u8) << g;
            }
            syndromes[e.index()] = s;
            assert!(!seen[s as usize], "syndrome {s} assigned twice");
            seen[s as usize] = true;
            recover_for[s as usize] = e;
            for (b, codeword) in [&zero, &one].into_iter().enumerate() {
                let mut image = codeword.clone();
                e.apply(&mut image).unwrap();
                let row = b | (s as usize) << 1;
                for (col, c) in image.amplitudes().iter().enumerate() {
                    decode_matrix[row * DIM + col] = c.conj();
                }
            }
        }
        FiveQubitCode { zero, one, decode_matrix, syndromes, recover_for }
    }

    pub fn logical_zero(&self) -> &StateVector {
        &self.zero
    }

    pub fn logical_one(&self) -> &StateVector {
        &self.one
    }

    /// The syndrome that identifies `e`.
    pub fn syndrome_of(&self, e: PauliError) -> Result<u8> {
        e.validate()?;
        Ok(self.syndromes[e.index()])
    }

    /// The error a syndrome points at.
    pub fn recovery_for(&self, syndrome: usize) -> Result<PauliError> {
        if syndrome >= 16 {
            return Err(Error::BadParameter(format!("syndrome {syndrome} not in [0, 16)")));
        }
        Ok(self.recover_for[syndrome])
    }

    pub fn encode(&self, q: &LogicalQubit) -> StateVector {
        let amps: Vec<Complex64> = self
            .zero
            .amplitudes()
            .iter()
            .zip(self.one.amplitudes())
            .map(|(z, o)| q.alpha() * z + q.beta() * o)
            .collect();
        StateVector::from_amplitudes(amps).expect("codewords are orthonormal")
    }

    /// Reads `(alpha, beta)` back out of a state in the code subspace,
    /// normalized with `alpha` real and nonnegative (or `beta`, when
    /// `alpha` vanishes). States further than 1e-6 from the subspace are
    /// rejected with their projection defect.
    pub fn decode(&self, state: &StateVector) -> Result<LogicalQubit> {
        let alpha = self.zero.inner(state)?;
        let beta = self.one.inner(state)?;
        let inside = alpha.norm_sqr() + beta.norm_sqr();
        let defect = state.norm_sqr() - inside;
        if defect.abs() > 1e-6 {
            return Err(Error::BadParameter(format!(
                "state lies outside the code subspace, projection defect {defect:.3e}"
            )));
        }
        let scale = inside.sqrt();
        let reference = if alpha.norm() > 1e-12 { alpha } else { beta };
        let phase = reference / reference.norm();
        LogicalQubit::new(alpha / (scale * phase), beta / (scale * phase))
    }

    fn check_five(&self, state: &StateVector) -> Result<()> {
        if state.num_qubits() != QUBITS {
            return Err(Error::SizeMismatch { left: state.num_qubits(), right: QUBITS });
        }
        Ok(())
    }

    /// The decoding unitary: error images rotate onto syndrome settings of
    /// qubits 1-4 with the logical amplitude on qubit 0.
    pub fn apply_syndrome_unitary(&self, state: &mut StateVector) -> Result<()> {
        self.check_five(state)?;
        let amps = state.amps_mut();
        let mut out = vec![Complex64::ZERO; DIM];
        for (row, o) in out.iter_mut().enumerate() {
            for (col, &c) in amps.iter().enumerate() {
                *o += self.decode_matrix[row * DIM + col] * c;
            }
        }
        amps.copy_from_slice(&out);
        Ok(())
    }

    /// Inverse of [`Self::apply_syndrome_unitary`].
    pub fn apply_syndrome_unitary_dagger(&self, state: &mut StateVector) -> Result<()> {
        self.check_five(state)?;
        let amps = state.amps_mut();
        let mut out = vec![Complex64::ZERO; DIM];
        for (row, &c) in amps.iter().enumerate() {
            for (col, o) in out.iter_mut().enumerate() {
                *o += self.decode_matrix[row * DIM + col].conj() * c;
            }
        }
        amps.copy_from_slice(&out);
        Ok(())
    }

    /// Applies the decoding unitary and measures qubits 1-4. The state is
    /// left collapsed with the unitary still applied; [`Self::recover`]
    /// finishes the job. On a single error image the outcome is
    /// deterministic and reveals nothing about the logical content.
    pub fn syndrome_extract<R: Rng + ?Sized>(
        &self,
        state: &mut StateVector,
        rng: &mut R,
    ) -> Result<Syndrome> {
        self.apply_syndrome_unitary(state)?;
        let m = state.measure_subset(&[1, 2, 3, 4], rng)?;
        Ok(Syndrome {
            value: m.value,
            bits: [m.bits[0], m.bits[1], m.bits[2], m.bits[3]],
        })
    }

    /// Undoes the decoding unitary and the identified error, returning the
    /// state to the code subspace.
    pub fn recover(&self, state: &mut StateVector, syndrome: Syndrome) -> Result<()> {
        let e = self.recovery_for(syndrome.value)?;
        self.apply_syndrome_unitary_dagger(state)?;
        // Undoing a Pauli is reapplying it; Y is its own inverse too.
        e.apply(state)
    }
}

impl Default for FiveQubitCode {
    fn default() -> Self {
        Self::new()
    }
}

/// Independent single-qubit noise: each qubit suffers an error with
/// probability `p`, split over X, Z, Y by fixed weights (uniform thirds by
/// default).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    p: f64,
    weights: [f64; 3],
}

impl NoiseModel {
    /// X, Z, Y each with probability `p/3` per qubit.
    pub fn depolarizing(p: f64) -> Result<Self> {
        Self::with_weights(p, [1.0, 1.0, 1.0])
    }

    /// Custom conditional kind weights, ordered X, Z, Y.
    pub fn with_weights(p: f64, weights: [f64; 3]) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::BadParameter(format!("error probability {p} not in [0, 1]")));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::BadParameter(format!("bad kind weights {weights:?}")));
        }
        Ok(NoiseModel { p, weights })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Hits each of the five qubits independently; returns the errors that
    /// actually landed.
    pub fn apply<R: Rng + ?Sized>(
        &self,
        state: &mut StateVector,
        rng: &mut R,
    ) -> Result<Vec<PauliError>> {
        let total: f64 = self.weights.iter().sum();
        let mut applied = Vec::new();
        for qubit in 0..QUBITS {
            if rng.random::<f64>() >= self.p {
                continue;
            }
            let mut pick = rng.random::<f64>() * total;
            let mut kind = 0;
            for (k, w) in self.weights.iter().enumerate() {
                if pick < *w {
                    kind = k;
                    break;
                }
                pick -= w;
            }
            let e = match kind {
                0 => PauliError::X(qubit),
                1 => PauliError::Z(qubit),
                _ => PauliError::Y(qubit),
            };
            e.apply(state)?;
            applied.push(e);
        }
        Ok(applied)
    }
}

/// Monte-Carlo estimate of the logical error rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalRateEstimate {
    pub p: f64,
    pub trials: usize,
    pub failures: usize,
    pub rate: f64,
    pub stderr: f64,
}

/// Runs `trials` rounds of encode, depolarizing noise at `p`, syndrome
/// extraction, recovery, decode; a round fails when the decoded qubit's
/// fidelity with the original drops below `1 - 1e-6`. Each trial draws from
/// its own RNG stream of `seed`, so results are reproducible and trials
/// could run in any order.
pub fn logical_error_rate(
    code: &FiveQubitCode,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<LogicalRateEstimate> {
    if trials == 0 {
        return Err(Error::BadParameter("need at least one trial".into()));
    }
    let noise = NoiseModel::depolarizing(p)?;
    let mut failures = 0usize;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let q = LogicalQubit::random(&mut rng);
        let mut state = code.encode(&q);
        noise.apply(&mut state, &mut rng)?;
        let syndrome = code.syndrome_extract(&mut state, &mut rng)?;
        code.recover(&mut state, syndrome)?;
        let decoded = code.decode(&state)?;
        if q.fidelity(&decoded) < 1.0 - 1e-6 {
            failures += 1;
        }
    }
    let rate = failures as f64 / trials as f64;
    let stderr = (rate * (1.0 - rate) / trials as f64).sqrt();
    Ok(LogicalRateEstimate { p, trials, failures, rate, stderr })
}
