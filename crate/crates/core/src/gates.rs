//! Universal gate set, circuits, and reversible classical functions.
//!
//! Gates act in place on a [`StateVector`] in O(2^l) time regardless of which
//! qubits they touch. Classical reversible functions are applied as basis
//! permutations rather than being compiled to gate sequences; the
//! compute-copy-uncompute chain turns a function with garbage outputs into a
//! clean result register.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::statevec::StateVector;

/// How far `U * U^dagger` may deviate from the identity entrywise.
const UNITARY_TOL: f64 = 1e-12;

/// Ancilla registers may carry at most this much stray norm before
/// [`compute_copy_uncompute`] refuses to run.
const ANCILLA_TOL: f64 = 1e-9;

/// A validated 2x2 unitary, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    m: [Complex64; 4],
}

impl Unitary2 {
    /// Accepts `[u00, u01, u10, u11]` if it is unitary within 1e-12.
    pub fn new(m: [Complex64; 4]) -> Result<Self> {
        // max |(U U^dagger - I)_ij|
        let mut dev = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                let got = m[2 * r] * m[2 * c].conj() + m[2 * r + 1] * m[2 * c + 1].conj();
                let want = if r == c { Complex64::ONE } else { Complex64::ZERO };
                dev = dev.max((got - want).norm());
            }
        }
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(Unitary2 { m })
    }

    pub fn matrix(&self) -> &[Complex64; 4] {
        &self.m
    }

    /// The conjugate transpose, i.e. the inverse.
    pub fn dagger(&self) -> Self {
        Unitary2 {
            m: [self.m[0].conj(), self.m[2].conj(), self.m[1].conj(), self.m[3].conj()],
        }
    }
}

/// One gate from the universal set.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    Not { target: usize },
    Cnot { control: usize, target: usize },
    Ccnot { control1: usize, control2: usize, target: usize },
    Hadamard { target: usize },
    ControlledPhase { control: usize, target: usize, angle: f64 },
    U2 { target: usize, unitary: Unitary2 },
}

impl GateOp {
    fn qubits(&self) -> Vec<usize> {
        match *self {
            GateOp::Not { target } | GateOp::Hadamard { target } | GateOp::U2 { target, .. } => {
                vec![target]
            }
            GateOp::Cnot { control, target }
            | GateOp::ControlledPhase { control, target, .. } => vec![control, target],
            GateOp::Ccnot { control1, control2, target } => vec![control1, control2, target],
        }
    }

    /// Checks indices are in range and pairwise distinct.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { index: q, qubits: num_qubits });
            }
            if qs[..i].contains(&q) {
                return Err(Error::DuplicateQubit { index: q });
            }
        }
        Ok(())
    }

    /// The gate implementing the inverse operation.
    pub fn inverse(&self) -> Self {
        match self {
            GateOp::ControlledPhase { control, target, angle } => GateOp::ControlledPhase {
                control: *control,
                target: *target,
                angle: -angle,
            },
            GateOp::U2 { target, unitary } => {
                GateOp::U2 { target: *target, unitary: unitary.dagger() }
            }
            other => other.clone(),
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateOp::Not { target } => write!(f, "NOT {target}"),
            GateOp::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            GateOp::Ccnot { control1, control2, target } => {
                write!(f, "CCNOT {control1} {control2} {target}")
            }
            GateOp::Hadamard { target } => write!(f, "H {target}"),
            GateOp::ControlledPhase { control, target, angle } => {
                write!(f, "CPHASE {control} {target} {angle}")
            }
            GateOp::U2 { target, unitary } => {
                write!(f, "U2 {target}")?;
                for c in unitary.matrix() {
                    write!(f, " {} {}", c.re, c.im)?;
                }
                Ok(())
            }
        }
    }
}

/// An ordered gate sequence on a fixed-width register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<GateOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, gates: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends the three CNOTs that swap qubits `a` and `b`.
    pub fn push_swap(&mut self, a: usize, b: usize) -> Result<()> {
        self.push(GateOp::Cnot { control: a, target: b })?;
        self.push(GateOp::Cnot { control: b, target: a })?;
        self.push(GateOp::Cnot { control: a, target: b })
    }

    /// The circuit applying the inverse: reversed order, inverted gates.
    pub fn inverse(&self) -> Self {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    /// Parses the text format, one gate per line:
    ///
    /// ```text
    /// NOT q
    /// CNOT c t
    /// CCNOT c1 c2 t
    /// H q
    /// CPHASE c t angle
    /// U2 q re00 im00 re01 im01 re10 im10 re11 im11
    /// ```
    ///
    /// Blank lines are skipped and `#` starts a comment.
    pub fn parse(num_qubits: usize, text: &str) -> Result<Self> {
        let mut circuit = Circuit::new(num_qubits);
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| Error::BadParameter(format!("line {lineno}: {reason}"));
            let mut fields = line.split_whitespace();
            let mnemonic = fields.next().unwrap();
            let args: Vec<&str> = fields.collect();
            let qubit = |s: &str| -> Result<usize> {
                s.parse().map_err(|_| bad(format!("bad qubit index `{s}`")))
            };
            let float = |s: &str| -> Result<f64> {
                let v: f64 = s.parse().map_err(|_| bad(format!("bad number `{s}`")))?;
                if !v.is_finite() {
                    return Err(bad(format!("non-finite number `{s}`")));
                }
                Ok(v)
            };
            let arity = |want: usize| -> Result<()> {
                if args.len() == want {
                    Ok(())
                } else {
                    Err(bad(format!(
                        "{mnemonic} takes {want} arguments, got {}",
                        args.len()
                    )))
                }
            };
            let gate = match mnemonic {
                "NOT" => {
                    arity(1)?;
                    GateOp::Not { target: qubit(args[0])? }
                }
                "CNOT" => {
                    arity(2)?;
                    GateOp::Cnot { control: qubit(args[0])?, target: qubit(args[1])? }
                }
                "CCNOT" => {
                    arity(3)?;
                    GateOp::Ccnot {
                        control1: qubit(args[0])?,
                        control2: qubit(args[1])?,
                        target: qubit(args[2])?,
                    }
                }
                "H" => {
                    arity(1)?;
                    GateOp::Hadamard { target: qubit(args[0])? }
                }
                "CPHASE" => {
                    arity(3)?;
                    GateOp::ControlledPhase {
                        control: qubit(args[0])?,
                        target: qubit(args[1])?,
                        angle: float(args[2])?,
                    }
                }
                "U2" => {
                    arity(9)?;
                    let mut m = [Complex64::ZERO; 4];
                    for (i, entry) in m.iter_mut().enumerate() {
                        *entry = Complex64::new(float(args[1 + 2 * i])?, float(args[2 + 2 * i])?);
                    }
                    GateOp::U2 {
                        target: qubit(args[0])?,
                        unitary: Unitary2::new(m)
                            .map_err(|e| bad(format!("U2 matrix: {e}")))?,
                    }
                }
                other => return Err(bad(format!("unknown gate `{other}`"))),
            };
            circuit.push(gate).map_err(|e| bad(e.to_string()))?;
        }
        Ok(circuit)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Applies one gate in place.
pub fn apply_gate(state: &mut StateVector, gate: &GateOp) -> Result<()> {
    gate.validate(state.num_qubits())?;
    let amps = state.amps_mut();
    match *gate {
        GateOp::Not { target } => {
            for_each_pair(amps.len(), target, |i0, i1| amps.swap(i0, i1));
        }
        GateOp::Cnot { control, target } => {
            let cbit = 1usize << control;
            for_each_pair(amps.len(), target, |i0, i1| {
                if i0 & cbit != 0 {
                    amps.swap(i0, i1);
                }
            });
        }
        GateOp::Ccnot { control1, control2, target } => {
            let cbits = (1usize << control1) | (1 << control2);
            for_each_pair(amps.len(), target, |i0, i1| {
                if i0 & cbits == cbits {
                    amps.swap(i0, i1);
                }
            });
        }
        GateOp::Hadamard { target } => {
            let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
            for_each_pair(amps.len(), target, |i0, i1| {
                let a = amps[i0];
                let b = amps[i1];
                amps[i0] = (a + b) * s;
                amps[i1] = (a - b) * s;
            });
        }
        GateOp::ControlledPhase { control, target, angle } => {
            let phase = Complex64::from_polar(1.0, angle);
            let bits = (1usize << control) | (1 << target);
            for (n, c) in amps.iter_mut().enumerate() {
                if n & bits == bits {
                    *c *= phase;
                }
            }
        }
        GateOp::U2 { target, unitary } => {
            let [m00, m01, m10, m11] = *unitary.matrix();
            for_each_pair(amps.len(), target, |i0, i1| {
                let a = amps[i0];
                let b = amps[i1];
                amps[i0] = m00 * a + m01 * b;
                amps[i1] = m10 * a + m11 * b;
            });
        }
    }
    Ok(())
}

/// Visits every amplitude pair differing only in bit `target`.
pub(crate) fn for_each_pair(dim: usize, target: usize, mut f: impl FnMut(usize, usize)) {
    let tbit = 1usize << target;
    let low_mask = tbit - 1;
    for i in 0..dim / 2 {
        let i0 = (i & !low_mask) << 1 | (i & low_mask);
        f(i0, i0 | tbit);
    }
}

/// Applies every gate of `circuit` in order.
pub fn apply_circuit(state: &mut StateVector, circuit: &Circuit) -> Result<()> {
    if circuit.num_qubits() != state.num_qubits() {
        return Err(Error::SizeMismatch {
            left: circuit.num_qubits(),
            right: state.num_qubits(),
        });
    }
    for g in &circuit.gates {
        apply_gate(state, g)?;
    }
    Ok(())
}

/// A contiguous run of qubits, `start .. start + len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub len: usize,
}

impl Span {
    pub fn new(start: usize, len: usize) -> Self {
        Span { start, len }
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    /// The bits of `n` covered by this span, shifted down to value position.
    pub fn extract(&self, n: usize) -> usize {
        (n >> self.start) & self.mask()
    }

    fn mask(&self) -> usize {
        if self.len == 0 { 0 } else { (1usize << self.len) - 1 }
    }

    fn overlaps(&self, other: &Span) -> bool {
        self.len > 0 && other.len > 0 && self.start < other.end() && other.start < self.end()
    }
}

fn check_spans(spans: &[(&str, Span)], num_qubits: usize) -> Result<()> {
    for (i, (name, s)) in spans.iter().enumerate() {
        if s.end() > num_qubits {
            return Err(Error::BadSpan(format!(
                "{name} register {}..{} does not fit a {num_qubits}-qubit state",
                s.start,
                s.end()
            )));
        }
        for (other_name, other) in &spans[..i] {
            if s.overlaps(other) {
                return Err(Error::BadSpan(format!(
                    "{name} register overlaps {other_name} register"
                )));
            }
        }
    }
    Ok(())
}

pub(crate) fn mod_pow(base: u64, exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut result = 1u128 % m;
    let mut b = base as u128 % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    result as u64
}

#[derive(Debug, Clone, PartialEq)]
enum FnRepr {
    Table { width: usize, map: Vec<u64>, inv: Vec<u64> },
    ModExp { base: u64, modulus: u64 },
}

/// A reversible classical function: either an explicit bijection on
/// `[0, 2^width)` or the modular-exponentiation map `x -> a^x mod N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversibleFunction {
    repr: FnRepr,
}

impl ReversibleFunction {
    /// Wraps an explicit permutation table. The length must be a power of
    /// two and the values a bijection onto `[0, len)`.
    pub fn table(map: Vec<u64>) -> Result<Self> {
        let len = map.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadFunction(format!(
                "table length {len} is not a power of two"
            )));
        }
        let width = len.trailing_zeros() as usize;
        let mut inv = vec![u64::MAX; len];
        for (x, &y) in map.iter().enumerate() {
            if y >= len as u64 {
                return Err(Error::BadFunction(format!("value {y} out of range")));
            }
            if inv[y as usize] != u64::MAX {
                return Err(Error::BadFunction(format!("value {y} appears twice")));
            }
            inv[y as usize] = x as u64;
        }
        Ok(ReversibleFunction { repr: FnRepr::Table { width, map, inv } })
    }

    /// The Shor oracle `x -> base^x mod modulus`; requires
    /// `1 <= base < modulus` and `gcd(base, modulus) = 1` so the map is
    /// periodic.
    pub fn mod_exp(base: u64, modulus: u64) -> Result<Self> {
        if modulus < 2 || base == 0 || base >= modulus {
            return Err(Error::BadFunction(format!(
                "need 1 <= base < modulus, got base {base} mod {modulus}"
            )));
        }
        if base.gcd(&modulus) != 1 {
            return Err(Error::BadFunction(format!(
                "base {base} shares a factor with modulus {modulus}"
            )));
        }
        Ok(ReversibleFunction { repr: FnRepr::ModExp { base, modulus } })
    }

    /// Builds the permutation realizing `|x, 0, 0> -> |x, f(x), g(x)>` on an
    /// `x_len + work_len + garbage_len` qubit domain, completed to a
    /// bijection on the rest of the space. `f` values must fit `work_len`
    /// bits and `g` values `garbage_len` bits.
    pub fn with_garbage(
        x_len: usize,
        work_len: usize,
        garbage_len: usize,
        f: impl Fn(u64) -> u64,
        g: impl Fn(u64) -> u64,
    ) -> Result<Self> {
        let width = x_len + work_len + garbage_len;
        if x_len == 0 || work_len == 0 || width > 24 {
            return Err(Error::BadFunction(format!(
                "bad register split {x_len}+{work_len}+{garbage_len}"
            )));
        }
        let len = 1usize << width;
        let mut map = vec![u64::MAX; len];
        let mut taken = vec![false; len];
        for x in 0..1u64 << x_len {
            let fx = f(x);
            let gx = g(x);
            if fx >= 1 << work_len {
                return Err(Error::BadFunction(format!(
                    "f({x}) = {fx} does not fit {work_len} bits"
                )));
            }
            if garbage_len == 0 && gx != 0 || garbage_len > 0 && gx >= 1 << garbage_len {
                return Err(Error::BadFunction(format!(
                    "g({x}) = {gx} does not fit {garbage_len} bits"
                )));
            }
            let out = x | fx << x_len | gx << (x_len + work_len);
            map[x as usize] = out;
            taken[out as usize] = true;
        }
        let mut free = (0..len as u64).filter(|&y| !taken[y as usize]);
        for entry in map.iter_mut() {
            if *entry == u64::MAX {
                *entry = free.next().expect("completion exhausted");
            }
        }
        Self::table(map)
    }

    /// Input width in qubits; `None` for `ModExp`, which accepts any width.
    pub fn width(&self) -> Option<usize> {
        match &self.repr {
            FnRepr::Table { width, .. } => Some(*width),
            FnRepr::ModExp { .. } => None,
        }
    }

    /// Bits needed to hold any output value.
    pub fn value_bits(&self) -> usize {
        match &self.repr {
            FnRepr::Table { width, .. } => *width,
            FnRepr::ModExp { modulus, .. } => 64 - (modulus - 1).leading_zeros() as usize,
        }
    }

    pub fn eval(&self, x: u64) -> u64 {
        match &self.repr {
            FnRepr::Table { map, .. } => map[x as usize],
            FnRepr::ModExp { base, modulus } => mod_pow(*base, x, *modulus),
        }
    }

    fn eval_inv(&self, y: u64) -> u64 {
        match &self.repr {
            FnRepr::Table { inv, .. } => inv[y as usize],
            FnRepr::ModExp { .. } => unreachable!("ModExp is applied by XOR, never inverted"),
        }
    }

    /// Output values for every input in `[0, 2^width_bits)`, computed
    /// incrementally for `ModExp`.
    fn value_table(&self, width_bits: usize) -> Vec<u64> {
        match &self.repr {
            FnRepr::Table { map, .. } => map.clone(),
            FnRepr::ModExp { base, modulus } => {
                let mut v = Vec::with_capacity(1 << width_bits);
                let mut cur = 1u64 % modulus;
                for _ in 0..1usize << width_bits {
                    v.push(cur);
                    cur = (cur as u128 * *base as u128 % *modulus as u128) as u64;
                }
                v
            }
        }
    }
}

/// Applies `|x, y> -> |x, y XOR f(x)>` with `x` read from `input` and `y`
/// living in `output`. The registers must be disjoint and `output` wide
/// enough for every value of `f`.
pub fn apply_function_xor(
    state: &mut StateVector,
    f: &ReversibleFunction,
    input: Span,
    output: Span,
) -> Result<()> {
    if input.len == 0 || output.len == 0 {
        return Err(Error::BadSpan("input and output registers need at least one qubit".into()));
    }
    check_spans(&[("input", input), ("output", output)], state.num_qubits())?;
    if let Some(w) = f.width()
        && w != input.len
    {
        return Err(Error::BadSpan(format!(
            "function wants a {w}-qubit input register, got {}",
            input.len
        )));
    }
    if f.value_bits() > output.len {
        return Err(Error::BadSpan(format!(
            "function values need {} qubits, output register has {}",
            f.value_bits(),
            output.len
        )));
    }
    let values = f.value_table(input.len);
    let amps = state.amps_mut();
    // |x,y> <-> |x, y ^ f(x)> pairs up basis states; swap each pair once.
    for n in 0..amps.len() {
        let fx = values[input.extract(n)] as usize;
        let partner = n ^ (fx << output.start);
        if n < partner {
            amps.swap(n, partner);
        }
    }
    Ok(())
}

/// Register layout for [`compute_copy_uncompute`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UncomputeLayout {
    pub x: Span,
    pub work: Span,
    pub garbage: Span,
    pub save: Span,
}

/// Runs `|x,0,0,0> -> |x,f(x),g(x),0> -> |x,f(x),g(x),f(x)> -> |x,0,0,f(x)>`:
/// compute into work and garbage, copy the work register into save with
/// CNOTs, then run the exact inverse of the compute step. Afterwards only
/// `x` and `save` carry any amplitude.
///
/// `f` is a permutation of the combined x/work/garbage register mapping
/// `|x,0,0>` to `|x,f(x),g(x)>`, e.g. from [`ReversibleFunction::with_garbage`].
/// A `ModExp` function has no garbage: the layout's garbage span must then be
/// empty and the compute step is an XOR into work.
pub fn compute_copy_uncompute(
    state: &mut StateVector,
    f: &ReversibleFunction,
    layout: &UncomputeLayout,
) -> Result<()> {
    let UncomputeLayout { x, work, garbage, save } = *layout;
    if x.len == 0 || work.len == 0 {
        return Err(Error::BadSpan("x and work registers need at least one qubit".into()));
    }
    if save.len != work.len {
        return Err(Error::BadSpan(format!(
            "save register ({} qubits) must match work register ({} qubits)",
            save.len, work.len
        )));
    }
    check_spans(
        &[("x", x), ("work", work), ("garbage", garbage), ("save", save)],
        state.num_qubits(),
    )?;
    match f.width() {
        Some(w) => {
            if w != x.len + work.len + garbage.len {
                return Err(Error::BadSpan(format!(
                    "function acts on {w} qubits, layout supplies {}",
                    x.len + work.len + garbage.len
                )));
            }
        }
        None => {
            if garbage.len != 0 {
                return Err(Error::BadSpan(
                    "a ModExp function produces no garbage; use an empty garbage register".into(),
                ));
            }
            if f.value_bits() > work.len {
                return Err(Error::BadSpan(format!(
                    "function values need {} qubits, work register has {}",
                    f.value_bits(),
                    work.len
                )));
            }
        }
    }

    // The chain only makes sense starting from |x, 0, 0, 0>.
    let ancilla_mask = (work.mask() << work.start)
        | (garbage.mask() << garbage.start)
        | (save.mask() << save.start);
    let stray: f64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(n, _)| n & ancilla_mask != 0)
        .map(|(_, c)| c.norm_sqr())
        .sum();
    if stray.sqrt() > ANCILLA_TOL {
        return Err(Error::BadSpan(format!(
            "work/garbage/save registers are not clean (stray norm {:.3e})",
            stray.sqrt()
        )));
    }

    let compute = |state: &mut StateVector, invert: bool| -> Result<()> {
        if f.width().is_some() {
            apply_spanned_permutation(state, f, &[x, work, garbage], invert);
            Ok(())
        } else {
            // XOR is its own inverse.
            apply_function_xor(state, f, x, work)
        }
    };

    compute(state, false)?;
    for i in 0..work.len {
        apply_gate(state, &GateOp::Cnot { control: work.start + i, target: save.start + i })?;
    }
    compute(state, true)
}

/// Relabels basis states by a permutation acting on the concatenated spans
/// (first span = low bits of the permutation's domain).
fn apply_spanned_permutation(
    state: &mut StateVector,
    f: &ReversibleFunction,
    spans: &[Span],
    invert: bool,
) {
    let old = state.amplitudes().to_vec();
    let amps = state.amps_mut();
    for (n, &a) in old.iter().enumerate() {
        let mut z = 0usize;
        let mut shift = 0;
        for s in spans {
            z |= s.extract(n) << shift;
            shift += s.len;
        }
        let pz = if invert { f.eval_inv(z as u64) } else { f.eval(z as u64) } as usize;
        let mut m = n;
        let mut taken = 0;
        for s in spans {
            m = m & !(s.mask() << s.start) | ((pz >> taken) & s.mask()) << s.start;
            taken += s.len;
        }
        amps[m] = a;
    }
}
