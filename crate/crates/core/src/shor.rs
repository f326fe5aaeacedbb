//! Shor's factoring algorithm.
//!
//! To factor an odd composite `N`, pick a base `a` coprime to `N` and find
//! the period `r` of `a^x mod N`: since `a^r = 1 (mod N)`, an even `r` with
//! `a^{r/2} != -1` splits `N` through `gcd(a^{r/2} +- 1, N)`. The quantum
//! part prepares a uniform superposition over `x`, evaluates `a^x mod N`
//! into a second register, Fourier-transforms the `x` register and measures;
//! measured values cluster near multiples of `2^l / r`, and continued
//! fractions recover `r` from them.

use num_complex::Complex64;
use num_integer::Integer;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gates::{apply_function_xor, mod_pow, ReversibleFunction, Span};
use crate::qft::{apply_qft, Direction, QftSpec};
use crate::statevec::{StateVector, MAX_QUBITS};

/// One factoring target: modulus, base, and register widths.
///
/// The `x` register defaults to `l = 2 ceil(log2 N)` qubits so that `2^l` is
/// at least the square of any possible period; the function register holds
/// values up to `N - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoringInstance {
    n: u64,
    base: u64,
    x_width: usize,
    f_width: usize,
}

impl FactoringInstance {
    pub fn new(n: u64, base: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::BadParameter(format!("modulus {n} too small")));
        }
        if base <= 1 || base >= n {
            return Err(Error::BadParameter(format!(
                "base must be in (1, {n}), got {base}"
            )));
        }
        let g = base.gcd(&n);
        if g != 1 {
            return Err(Error::BadParameter(format!(
                "base {base} shares factor {g} with {n}; no quantum search needed"
            )));
        }
        let f_width = bit_width(n - 1);
        let inst = FactoringInstance { n, base, x_width: 2 * f_width, f_width };
        inst.check_capacity()?;
        Ok(inst)
    }

    /// Overrides the default `x` register width (mostly for tests; smaller
    /// registers lose resolution on the period).
    pub fn with_x_width(mut self, x_width: usize) -> Result<Self> {
        if x_width == 0 {
            return Err(Error::BadParameter("x register needs at least one qubit".into()));
        }
        self.x_width = x_width;
        self.check_capacity()?;
        Ok(self)
    }

    fn check_capacity(&self) -> Result<()> {
        let total = self.x_width + self.f_width;
        if total > MAX_QUBITS {
            return Err(Error::BadQubitCount { got: total, max: MAX_QUBITS });
        }
        Ok(())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn x_width(&self) -> usize {
        self.x_width
    }

    pub fn f_width(&self) -> usize {
        self.f_width
    }

    fn x_span(&self) -> Span {
        Span::new(0, self.x_width)
    }

    fn f_span(&self) -> Span {
        Span::new(self.x_width, self.f_width)
    }

    /// The state right before the transform: `sum_x |x, a^x mod N>` scaled.
    fn prepare(&self) -> Result<StateVector> {
        let l = self.x_width;
        let dim = 1usize << (l + self.f_width);
        let amp = Complex64::new((1.0 / (1u64 << l) as f64).sqrt(), 0.0);
        let mut amps = vec![Complex64::ZERO; dim];
        for x in 0..1usize << l {
            amps[x] = amp;
        }
        let mut s = StateVector::from_amplitudes(amps)?;
        let f = ReversibleFunction::mod_exp(self.base, self.n)?;
        apply_function_xor(&mut s, &f, self.x_span(), self.f_span())?;
        Ok(s)
    }
}

/// Runs the quantum pipeline once and returns the measured `x`-register
/// value.
///
/// With `premeasure` the function register is measured before the transform,
/// as in the original presentation; the outcome distribution is provably the
/// same either way, and the premeasured register is simply cheaper to think
/// about.
pub fn run_period_finding<R: Rng + ?Sized>(
    inst: &FactoringInstance,
    rng: &mut R,
    premeasure: bool,
) -> Result<u64> {
    let mut s = inst.prepare()?;
    if premeasure {
        let f_qubits: Vec<usize> = (inst.f_span().start..inst.f_span().end()).collect();
        s.measure_subset(&f_qubits, rng)?;
    }
    apply_qft(&mut s, &QftSpec { span: inst.x_span(), direction: Direction::Forward })?;
    let x_qubits: Vec<usize> = (0..inst.x_width).collect();
    Ok(s.measure_subset(&x_qubits, rng)?.value as u64)
}

/// The exact post-transform distribution over `x`-register outcomes,
/// marginalized over the function register. No sampling involved.
pub fn exact_outcome_distribution(inst: &FactoringInstance) -> Result<Vec<f64>> {
    let mut s = inst.prepare()?;
    apply_qft(&mut s, &QftSpec { span: inst.x_span(), direction: Direction::Forward })?;
    let mut dist = vec![0.0f64; 1 << inst.x_width];
    let mask = (1usize << inst.x_width) - 1;
    for (n, c) in s.amplitudes().iter().enumerate() {
        dist[n & mask] += c.norm_sqr();
    }
    Ok(dist)
}

/// Recovers the period from measured values.
///
/// Each `m` approximates `k 2^l / r`, so the convergents of `m / 2^l` with
/// denominator below `n` are period candidates; least common multiples over
/// pairs cover runs where a measurement only exposed a divisor of `r`.
/// Returns the smallest candidate `r` with `base^r = 1 (mod n)`. A measured
/// zero carries no information and is skipped.
pub fn extract_period(measurements: &[u64], x_width: usize, n: u64, base: u64) -> Option<u64> {
    let mut candidates: Vec<u64> = Vec::new();
    for &m in measurements {
        if m == 0 {
            continue;
        }
        for q in convergent_denominators(m, 1u64 << x_width) {
            if q > 1 && q < n && !candidates.contains(&q) {
                candidates.push(q);
            }
        }
    }
    let mut with_lcms = candidates.clone();
    for (i, &a) in candidates.iter().enumerate() {
        for &b in &candidates[i + 1..] {
            let l = a.lcm(&b);
            if l < n && !with_lcms.contains(&l) {
                with_lcms.push(l);
            }
        }
    }
    with_lcms.sort_unstable();
    with_lcms.into_iter().find(|&r| mod_pow(base, r, n) == 1)
}

/// Denominators of the continued-fraction convergents of `m / den`.
fn convergent_denominators(m: u64, den: u64) -> Vec<u64> {
    let (mut num, mut den) = (m, den);
    let (mut q_prev, mut q) = (1u64, 0u64);
    let mut out = Vec::new();
    while den != 0 {
        let a = num / den;
        (num, den) = (den, num % den);
        let next = match a.checked_mul(q).and_then(|aq| aq.checked_add(q_prev)) {
            Some(v) => v,
            None => break,
        };
        (q_prev, q) = (q, next);
        out.push(q);
    }
    out
}

/// Why a verified period failed to produce factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorFailure {
    /// The period is odd, so `a^{r/2}` does not exist.
    OddPeriod,
    /// `a^{r/2} = +-1 (mod n)`, so both gcds are trivial.
    TrivialRoot,
}

impl std::fmt::Display for FactorFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FactorFailure::OddPeriod => write!(f, "odd-period"),
            FactorFailure::TrivialRoot => write!(f, "trivial-root"),
        }
    }
}

/// Turns a period into a factor pair via `gcd(a^{r/2} +- 1, n)`.
pub fn extract_factors(n: u64, base: u64, r: u64) -> std::result::Result<(u64, u64), FactorFailure> {
    if r % 2 == 1 {
        return Err(FactorFailure::OddPeriod);
    }
    let x = mod_pow(base, r / 2, n);
    if x == 1 || x == n - 1 {
        return Err(FactorFailure::TrivialRoot);
    }
    let p = (x - 1).gcd(&n);
    let q = (x + 1).gcd(&n);
    // x^2 = 1 (mod n) with x != +-1 forces both gcds to be proper factors.
    assert!(p > 1 && p < n && n % p == 0, "gcd {p} is not a proper factor of {n}");
    assert!(q > 1 && q < n && n % q == 0, "gcd {q} is not a proper factor of {n}");
    Ok((p, q))
}

/// How one attempt of [`factor`] ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttemptOutcome {
    Factored,
    /// The random base already shared a factor with `n`.
    LuckyGcd,
    NoPeriod,
    OddPeriod,
    TrivialRoot,
}

impl std::fmt::Display for AttemptOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AttemptOutcome::Factored => "factored",
            AttemptOutcome::LuckyGcd => "lucky-gcd",
            AttemptOutcome::NoPeriod => "no-period",
            AttemptOutcome::OddPeriod => "odd-period",
            AttemptOutcome::TrivialRoot => "trivial-root",
        };
        write!(f, "{s}")
    }
}

/// One base tried by [`factor`]: up to a few quantum runs and the extraction
/// verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attempt {
    pub base: u64,
    pub measured: Vec<u64>,
    pub period: Option<u64>,
    pub outcome: AttemptOutcome,
}

/// Result of [`factor`]: the factor pair (multiplying to `n`) unless every
/// attempt failed, plus the attempt log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorReport {
    pub n: u64,
    pub factors: Option<(u64, u64)>,
    pub attempts: Vec<Attempt>,
}

/// Quantum runs per base before giving up on it.
const RUNS_PER_ATTEMPT: usize = 3;

/// Shortcuts that need no quantum runs: tiny and prime inputs rejected,
/// even numbers and perfect powers factored outright.
fn classical_precheck(n: u64) -> Result<Option<(u64, u64)>> {
    if n < 4 {
        return Err(Error::BadParameter(format!("{n} has no proper factorization")));
    }
    if n % 2 == 0 {
        return Ok(Some((2, n / 2)));
    }
    if let Some(root) = perfect_power_root(n) {
        return Ok(Some((root, n / root)));
    }
    // Capacity before primality: the trial division below assumes a small n.
    FactoringInstance::new(n, 2)?;
    if is_prime(n) {
        return Err(Error::BadParameter(format!("{n} is prime")));
    }
    Ok(None)
}

/// One base's worth of work: a gcd check, then up to a few quantum runs
/// with incremental period extraction.
fn attempt_base<R: Rng + ?Sized>(
    n: u64,
    base: u64,
    premeasure: bool,
    rng: &mut R,
) -> Result<(Attempt, Option<(u64, u64)>)> {
    let g = base.gcd(&n);
    if g != 1 {
        let attempt = Attempt {
            base,
            measured: Vec::new(),
            period: None,
            outcome: AttemptOutcome::LuckyGcd,
        };
        return Ok((attempt, Some((g, n / g))));
    }
    let inst = FactoringInstance::new(n, base)?;
    let mut measured = Vec::new();
    let mut period = None;
    for _ in 0..RUNS_PER_ATTEMPT {
        measured.push(run_period_finding(&inst, rng, premeasure)?);
        period = extract_period(&measured, inst.x_width(), n, base);
        if period.is_some() {
            break;
        }
    }
    let Some(r) = period else {
        let attempt = Attempt { base, measured, period, outcome: AttemptOutcome::NoPeriod };
        return Ok((attempt, None));
    };
    let (outcome, factors) = match extract_factors(n, base, r) {
        Ok((p, _)) => (AttemptOutcome::Factored, Some((p, n / p))),
        Err(FactorFailure::OddPeriod) => (AttemptOutcome::OddPeriod, None),
        Err(FactorFailure::TrivialRoot) => (AttemptOutcome::TrivialRoot, None),
    };
    Ok((Attempt { base, measured, period, outcome }, factors))
}

fn report(n: u64, factors: Option<(u64, u64)>, attempts: Vec<Attempt>) -> FactorReport {
    let ordered = factors.map(|(p, q)| (p.min(q), p.max(q)));
    FactorReport { n, factors: ordered, attempts }
}

/// Factors `n` with up to `max_attempts` random bases, premeasuring the
/// function register. Even numbers, perfect powers, and lucky gcds are
/// resolved classically without any attempts; primes are rejected.
pub fn factor<R: Rng + ?Sized>(n: u64, max_attempts: usize, rng: &mut R) -> Result<FactorReport> {
    factor_with_options(n, max_attempts, true, rng)
}

/// [`factor`] with control over function-register premeasurement.
pub fn factor_with_options<R: Rng + ?Sized>(
    n: u64,
    max_attempts: usize,
    premeasure: bool,
    rng: &mut R,
) -> Result<FactorReport> {
    if let Some(factors) = classical_precheck(n)? {
        return Ok(report(n, Some(factors), Vec::new()));
    }
    let mut attempts = Vec::new();
    for _ in 0..max_attempts {
        let base = rng.random_range(2..n);
        let (attempt, factors) = attempt_base(n, base, premeasure, rng)?;
        attempts.push(attempt);
        if factors.is_some() {
            return Ok(report(n, factors, attempts));
        }
    }
    Ok(report(n, None, attempts))
}

/// Factors with one caller-chosen base instead of random ones. The
/// classical shortcuts still apply, so composite even or perfect-power `n`
/// never reaches the quantum pipeline.
pub fn factor_with_base<R: Rng + ?Sized>(
    n: u64,
    base: u64,
    premeasure: bool,
    rng: &mut R,
) -> Result<FactorReport> {
    if let Some(factors) = classical_precheck(n)? {
        return Ok(report(n, Some(factors), Vec::new()));
    }
    if base <= 1 || base >= n {
        return Err(Error::BadParameter(format!(
            "base must be in (1, {n}), got {base}"
        )));
    }
    let (attempt, factors) = attempt_base(n, base, premeasure, rng)?;
    Ok(report(n, factors, vec![attempt]))
}

fn bit_width(v: u64) -> usize {
    (64 - v.leading_zeros()) as usize
}

/// Smallest `r` with `r^k = n` for some `k >= 2`, if one exists; found at
/// the largest exponent.
fn perfect_power_root(n: u64) -> Option<u64> {
    for k in (2..=n.ilog2()).rev() {
        // powf can land one off the integer root.
        let r = (n as f64).powf(1.0 / k as f64).round() as u64;
        for cand in [r.saturating_sub(1), r, r + 1] {
            if cand >= 2 && cand.checked_pow(k).is_some_and(|p| p == n) {
                return Some(cand);
            }
        }
    }
    None
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
