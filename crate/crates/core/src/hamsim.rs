//! Split-operator simulation of a particle on a periodic 1-D grid.
//!
//! The wavefunction lives in the register amplitudes, `c_j = psi(x_j)` with
//! `x_j = j L / 2^m`. A Hamiltonian `H = T(p) + V(x)` is evolved one short
//! step at a time: multiply by the potential phase in position space, hop to
//! momentum space with the Fourier transform, multiply by the kinetic phase,
//! hop back. Units are dimensionless with `hbar = 1`.
//!
//! Momentum convention: transform index `k` carries `p_k = 2 pi k / L` for
//! `k < 2^{m-1}` and `2 pi (k - 2^m) / L` above (wrapped negative
//! frequencies). The transform direction pairing is fixed so that the
//! on-grid plane wave `e^{i p_q x_j}` lands on index `q`: position to
//! momentum uses the `e^{-2 pi i jk / 2^m}` kernel, which is
//! [`Direction::Inverse`] of the transform in [`crate::qft`]. Both the
//! plane-wave phase test and the momentum-density test below pin this
//! pairing; flipping it silently negates every momentum readout.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::Span;
use crate::qft::{apply_qft, Direction, QftSpec};
use crate::statevec::{StateVector, MAX_QUBITS};

/// A periodic spatial grid of `2^m` points together with the time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    num_qubits: usize,
    length: f64,
    dt: f64,
}

impl Grid1D {
    /// At least 3 qubits, positive finite extent, nonzero finite step.
    /// Negative `dt` is allowed and runs the evolution backwards.
    pub fn new(num_qubits: usize, length: f64, dt: f64) -> Result<Self> {
        if num_qubits < 3 {
            return Err(Error::BadParameter(format!(
                "grid needs at least 3 qubits, got {num_qubits}"
            )));
        }
        if num_qubits > MAX_QUBITS {
            return Err(Error::BadQubitCount { got: num_qubits, max: MAX_QUBITS });
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::BadParameter(format!("grid length must be positive, got {length}")));
        }
        if dt == 0.0 || !dt.is_finite() {
            return Err(Error::BadParameter(format!("time step must be nonzero, got {dt}")));
        }
        Ok(Grid1D { num_qubits, length, dt })
    }

    /// The same grid stepping backwards in time.
    pub fn reversed(&self) -> Self {
        Grid1D { dt: -self.dt, ..*self }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn points(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn dx(&self) -> f64 {
        self.length / self.points() as f64
    }

    pub fn position(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }

    /// Momentum carried by transform index `k`.
    pub fn momentum(&self, k: usize) -> f64 {
        let m = self.points();
        let signed = if k < m / 2 { k as f64 } else { k as f64 - m as f64 };
        std::f64::consts::TAU * signed / self.length
    }

    fn span(&self) -> Span {
        Span::new(0, self.num_qubits)
    }
}

/// `H = T(p) + V(x)` sampled on a grid: `potential[j] = V(x_j)` and
/// `kinetic[k] = T(p_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitHamiltonian {
    potential: Vec<f64>,
    kinetic: Vec<f64>,
    mass: f64,
}

impl SplitHamiltonian {
    /// Unit mass: `T(p) = p^2 / 2`.
    pub fn new(grid: &Grid1D, v: impl Fn(f64) -> f64) -> Result<Self> {
        Self::with_mass(grid, v, 1.0)
    }

    pub fn with_mass(grid: &Grid1D, v: impl Fn(f64) -> f64, mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::BadParameter(format!("mass must be positive, got {mass}")));
        }
        let mut h = Self::with_kinetic(grid, v, |p| p * p / (2.0 * mass))?;
        h.mass = mass;
        Ok(h)
    }

    /// Custom dispersion `t(p)` in place of `p^2 / 2m`.
    pub fn with_kinetic(
        grid: &Grid1D,
        v: impl Fn(f64) -> f64,
        t: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let sample = |f: &dyn Fn(f64) -> f64, arg: fn(&Grid1D, usize) -> f64, name| {
            (0..grid.points())
                .map(|i| {
                    let val = f(arg(grid, i));
                    if val.is_finite() {
                        Ok(val)
                    } else {
                        Err(Error::BadParameter(format!("{name} is {val} at grid index {i}")))
                    }
                })
                .collect::<Result<Vec<f64>>>()
        };
        Ok(SplitHamiltonian {
            potential: sample(&v, Grid1D::position, "potential")?,
            kinetic: sample(&t, Grid1D::momentum, "kinetic term")?,
            mass: 1.0,
        })
    }

    /// Potential given directly as per-grid-point samples.
    pub fn from_potential_samples(grid: &Grid1D, samples: Vec<f64>, mass: f64) -> Result<Self> {
        if samples.len() != grid.points() {
            return Err(Error::BadLength { len: samples.len() });
        }
        let mut h = Self::with_mass(grid, |_| 0.0, mass)?;
        if let Some(j) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::BadParameter(format!(
                "potential is {} at grid index {j}",
                samples[j]
            )));
        }
        h.potential = samples;
        Ok(h)
    }

    /// The harmonic well `V = (x - L/2)^2 / 2`, centered on the grid.
    pub fn harmonic(grid: &Grid1D) -> Result<Self> {
        let c = grid.length() / 2.0;
        Self::new(grid, |x| (x - c) * (x - c) / 2.0)
    }

    /// `V = 0` everywhere.
    pub fn free(grid: &Grid1D) -> Result<Self> {
        Self::new(grid, |_| 0.0)
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn kinetic(&self) -> &[f64] {
        &self.kinetic
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    fn check_grid(&self, grid: &Grid1D) -> Result<()> {
        if self.potential.len() != grid.points() {
            return Err(Error::SizeMismatch {
                left: self.potential.len(),
                right: grid.points(),
            });
        }
        Ok(())
    }
}

/// Loads samples `psi(x_j)` into a register and normalizes.
pub fn init_wavefunction(grid: &Grid1D, samples: &[Complex64]) -> Result<StateVector> {
    if samples.len() != grid.points() {
        return Err(Error::BadLength { len: samples.len() });
    }
    let norm_sqr: f64 = samples.iter().map(|c| c.norm_sqr()).sum();
    if !(norm_sqr > 0.0) || !norm_sqr.is_finite() {
        return Err(Error::BadParameter(format!(
            "wavefunction samples have norm^2 = {norm_sqr}"
        )));
    }
    let scale = 1.0 / norm_sqr.sqrt();
    StateVector::from_amplitudes(samples.iter().map(|c| c * scale).collect())
}

/// A Gaussian packet `exp(-(x - x0)^2 / 2 sigma^2) e^{i p0 x}`, normalized.
pub fn gaussian_packet(grid: &Grid1D, x0: f64, sigma: f64, p0: f64) -> Result<StateVector> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::BadParameter(format!("packet width must be positive, got {sigma}")));
    }
    if !x0.is_finite() || !p0.is_finite() {
        return Err(Error::BadParameter(format!("packet parameters x0 = {x0}, p0 = {p0}")));
    }
    let samples: Vec<Complex64> = (0..grid.points())
        .map(|j| {
            let x = grid.position(j);
            let envelope = (-(x - x0) * (x - x0) / (2.0 * sigma * sigma)).exp();
            envelope * Complex64::cis(p0 * x)
        })
        .collect();
    init_wavefunction(grid, &samples)
}

/// Multiplies each amplitude by `e^{i f(j)}`; moduli are untouched.
pub fn apply_phase_function(state: &mut StateVector, f: impl Fn(usize) -> f64) -> Result<()> {
    // Validate before mutating so a bad phase leaves the state intact.
    for j in 0..state.len() {
        if !f(j).is_finite() {
            return Err(Error::BadParameter(format!("phase is {} at index {j}", f(j))));
        }
    }
    for (j, c) in state.amps_mut().iter_mut().enumerate() {
        *c *= Complex64::cis(f(j));
    }
    Ok(())
}

/// Splitting order for [`evolve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitOrder {
    /// `e^{-iT dt} e^{-iV dt}` per step; global error O(dt).
    Lie,
    /// Symmetrized with half potential steps at the ends; global error
    /// O(dt^2) and each step is its own inverse under `dt -> -dt`.
    Strang,
}

fn phase_multiply(state: &mut StateVector, samples: &[f64], scale: f64) {
    for (c, &s) in state.amps_mut().iter_mut().zip(samples) {
        *c *= Complex64::cis(-s * scale);
    }
}

fn kinetic_step(state: &mut StateVector, h: &SplitHamiltonian, grid: &Grid1D) -> Result<()> {
    apply_qft(state, &QftSpec { span: grid.span(), direction: Direction::Inverse })?;
    phase_multiply(state, &h.kinetic, grid.dt());
    apply_qft(state, &QftSpec { span: grid.span(), direction: Direction::Forward })
}

fn check_step(state: &StateVector, h: &SplitHamiltonian, grid: &Grid1D) -> Result<()> {
    if state.num_qubits() != grid.num_qubits() {
        return Err(Error::SizeMismatch {
            left: state.num_qubits(),
            right: grid.num_qubits(),
        });
    }
    h.check_grid(grid)
}

/// One first-order step: potential phase, then kinetic phase in momentum
/// space.
pub fn trotter_step(state: &mut StateVector, h: &SplitHamiltonian, grid: &Grid1D) -> Result<()> {
    check_step(state, h, grid)?;
    phase_multiply(state, &h.potential, grid.dt());
    kinetic_step(state, h, grid)
}

/// Evolves through `steps` time steps of `grid.dt()`.
pub fn evolve(
    state: &mut StateVector,
    h: &SplitHamiltonian,
    grid: &Grid1D,
    steps: usize,
    order: SplitOrder,
) -> Result<()> {
    if steps == 0 {
        return Err(Error::BadParameter("evolution needs at least one step".into()));
    }
    check_step(state, h, grid)?;
    match order {
        SplitOrder::Lie => {
            for _ in 0..steps {
                phase_multiply(state, &h.potential, grid.dt());
                kinetic_step(state, h, grid)?;
            }
        }
        SplitOrder::Strang => {
            // Adjacent half steps merge, leaving halves only at the ends.
            phase_multiply(state, &h.potential, grid.dt() / 2.0);
            for i in 0..steps {
                kinetic_step(state, h, grid)?;
                if i + 1 < steps {
                    phase_multiply(state, &h.potential, grid.dt());
                }
            }
            phase_multiply(state, &h.potential, grid.dt() / 2.0);
        }
    }
    Ok(())
}

/// Diagnostics read straight off the amplitudes (simulator-side access, not
/// a quantum measurement).
#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    pub position_density: Vec<f64>,
    pub momentum_density: Vec<f64>,
    pub mean_x: f64,
    pub mean_p: f64,
    pub energy: f64,
}

/// Densities, means, and the energy `sum_j V_j |c_j|^2 + sum_k T_k |~c_k|^2`.
pub fn observables(
    state: &StateVector,
    grid: &Grid1D,
    h: &SplitHamiltonian,
) -> Result<Observables> {
    check_step(state, h, grid)?;
    let position_density: Vec<f64> = state.amplitudes().iter().map(|c| c.norm_sqr()).collect();
    let mut momentum_rep = state.clone();
    apply_qft(&mut momentum_rep, &QftSpec { span: grid.span(), direction: Direction::Inverse })?;
    let momentum_density: Vec<f64> =
        momentum_rep.amplitudes().iter().map(|c| c.norm_sqr()).collect();
    let mut mean_x = 0.0;
    let mut mean_p = 0.0;
    let mut energy = 0.0;
    for j in 0..grid.points() {
        mean_x += grid.position(j) * position_density[j];
        mean_p += grid.momentum(j) * momentum_density[j];
        energy += h.potential[j] * position_density[j] + h.kinetic[j] * momentum_density[j];
    }
    Ok(Observables { position_density, momentum_density, mean_x, mean_p, energy })
}

/// Convenience for tests and the command line: the on-grid plane wave
/// `e^{i p_q x}` as a normalized state.
pub fn plane_wave(grid: &Grid1D, q: usize) -> Result<StateVector> {
    if q >= grid.points() {
        return Err(Error::BadBasisIndex { index: q, qubits: grid.num_qubits() });
    }
    let m = grid.points();
    let amp = (1.0 / m as f64).sqrt();
    let samples: Vec<Complex64> = (0..m)
        .map(|j| amp * Complex64::cis(std::f64::consts::TAU * (q * j % m) as f64 / m as f64))
        .collect();
    StateVector::from_amplitudes(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(m: usize, length: f64, dt: f64) -> Grid1D {
        Grid1D::new(m, length, dt).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(2, 1.0, 0.1).is_err());
        assert!(Grid1D::new(27, 1.0, 0.1).is_err());
        assert!(Grid1D::new(3, 0.0, 0.1).is_err());
        assert!(Grid1D::new(3, -1.0, 0.1).is_err());
        assert!(Grid1D::new(3, f64::INFINITY, 0.1).is_err());
        assert!(Grid1D::new(3, 1.0, 0.0).is_err());
        assert!(Grid1D::new(3, 1.0, f64::NAN).is_err());
        assert!(Grid1D::new(3, 1.0, -0.1).is_ok());
    }

    #[test]
    fn momentum_map_wraps_negative_frequencies() {
        // L = 2 pi makes p_k integer: [0, 1, 2, 3, -4, -3, -2, -1].
        let g = grid(3, std::f64::consts::TAU, 0.1);
        let want = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0];
        for (k, &p) in want.iter().enumerate() {
            assert!((g.momentum(k) - p).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn hamiltonian_sampling_and_validation() {
        let g = grid(3, 8.0, 0.1);
        let h = SplitHamiltonian::harmonic(&g).unwrap();
        // V(x_0) = (0 - 4)^2 / 2 = 8 at the left edge.
        assert!((h.potential()[0] - 8.0).abs() < 1e-12);
        assert!((h.potential()[4] - 0.0).abs() < 1e-12);
        // T(p_1) = p^2/2 at p = 2 pi / 8.
        let p = std::f64::consts::TAU / 8.0;
        assert!((h.kinetic()[1] - p * p / 2.0).abs() < 1e-12);

        let heavy = SplitHamiltonian::with_mass(&g, |_| 0.0, 4.0).unwrap();
        assert!((heavy.kinetic()[1] - p * p / 8.0).abs() < 1e-12);
        assert_eq!(heavy.mass(), 4.0);

        assert!(SplitHamiltonian::with_mass(&g, |_| 0.0, 0.0).is_err());
        assert!(SplitHamiltonian::with_mass(&g, |_| 0.0, -1.0).is_err());
        // 1/x blows up at the x = 0 grid point.
        assert!(SplitHamiltonian::new(&g, |x| 1.0 / x).is_err());

        let sampled =
            SplitHamiltonian::from_potential_samples(&g, vec![1.5; 8], 1.0).unwrap();
        assert_eq!(sampled.potential(), &[1.5; 8]);
        assert!((sampled.kinetic()[1] - p * p / 2.0).abs() < 1e-12);
        assert!(SplitHamiltonian::from_potential_samples(&g, vec![0.0; 7], 1.0).is_err());
        assert!(
            SplitHamiltonian::from_potential_samples(&g, vec![f64::NAN; 8], 1.0).is_err()
        );
    }

    #[test]
    fn init_wavefunction_normalizes_and_rejects_zero() {
        let g = grid(3, 8.0, 0.1);
        let mut samples = vec![Complex64::ZERO; 8];
        samples[3] = Complex64::new(2.5, 0.0);
        let s = init_wavefunction(&g, &samples).unwrap();
        assert_eq!(s.amplitude(3), Complex64::ONE);

        let constant = vec![Complex64::new(0.3, 0.0); 8];
        let s = init_wavefunction(&g, &constant).unwrap();
        let uniform = StateVector::uniform(3).unwrap();
        assert!(s.fidelity(&uniform).unwrap() > 1.0 - 1e-12);

        assert!(init_wavefunction(&g, &vec![Complex64::ZERO; 8]).is_err());
        assert!(init_wavefunction(&g, &samples[..4]).is_err());
        let bad = vec![Complex64::new(f64::NAN, 0.0); 8];
        assert!(init_wavefunction(&g, &bad).is_err());
    }

    #[test]
    fn gaussian_packet_is_normalized_and_centered() {
        let g = grid(6, 32.0, 0.1);
        let s = gaussian_packet(&g, 16.0, 2.0, 0.0).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        let h = SplitHamiltonian::free(&g).unwrap();
        let obs = observables(&s, &g, &h).unwrap();
        assert!((obs.mean_x - 16.0).abs() < 1e-9);
        assert!(obs.mean_p.abs() < 1e-9);
        assert!(gaussian_packet(&g, 16.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn phase_function_preserves_moduli_and_rejects_non_finite() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let original = StateVector::random(4, &mut rng).unwrap();

        let mut s = original.clone();
        apply_phase_function(&mut s, |_| 0.0).unwrap();
        assert_eq!(s.amplitudes(), original.amplitudes());

        apply_phase_function(&mut s, |_| std::f64::consts::PI).unwrap();
        assert!(s.fidelity(&original).unwrap() > 1.0 - 1e-12);

        let mut s = original.clone();
        apply_phase_function(&mut s, |j| (j * j) as f64 * 0.37).unwrap();
        for (a, b) in s.amplitudes().iter().zip(original.amplitudes()) {
            assert!((a.norm() - b.norm()).abs() < 1e-15);
        }

        let mut s = original.clone();
        let err = apply_phase_function(&mut s, |j| if j == 11 { f64::NAN } else { 0.0 });
        match err {
            Err(Error::BadParameter(msg)) => assert!(msg.contains("11"), "{msg}"),
            other => panic!("expected rejection, got {other:?}"),
        }
        // Rejected before touching anything.
        assert_eq!(s.amplitudes(), original.amplitudes());
    }

    #[test]
    fn free_step_advances_every_plane_wave_by_the_exact_phase() {
        let g = grid(4, 5.0, 0.03);
        let h = SplitHamiltonian::free(&g).unwrap();
        for q in 0..g.points() {
            let start = plane_wave(&g, q).unwrap();
            let mut s = start.clone();
            trotter_step(&mut s, &h, &g).unwrap();
            let p = g.momentum(q);
            let expect = Complex64::cis(-p * p / 2.0 * g.dt());
            // Fidelity is phase-blind; check the phase itself too.
            let overlap = start.inner(&s).unwrap();
            assert!((overlap - expect).norm() < 1e-12, "q = {q}");
        }
    }

    #[test]
    fn momentum_density_lands_on_the_wave_index() {
        // Pins the transform pairing: e^{i p_q x} must show up at index q,
        // not at its negative partner.
        let g = grid(4, 10.0, 0.1);
        let h = SplitHamiltonian::free(&g).unwrap();
        let q = 5;
        let s = plane_wave(&g, q).unwrap();
        let obs = observables(&s, &g, &h).unwrap();
        assert!(obs.momentum_density[q] > 1.0 - 1e-10, "density {:?}", obs.momentum_density);
        assert!((obs.mean_p - g.momentum(q)).abs() < 1e-9);
    }

    #[test]
    fn rightward_packet_moves_right() {
        let g = grid(6, 32.0, 0.05);
        let h = SplitHamiltonian::free(&g).unwrap();
        let mut s = gaussian_packet(&g, 12.0, 2.0, 1.0).unwrap();
        let before = observables(&s, &g, &h).unwrap();
        assert!((before.mean_p - 1.0).abs() < 0.05);
        evolve(&mut s, &h, &g, 40, SplitOrder::Strang).unwrap();
        // 2 time units at unit velocity.
        let after = observables(&s, &g, &h).unwrap();
        assert!((after.mean_x - before.mean_x - 2.0).abs() < 0.1, "drift {}", after.mean_x - before.mean_x);
    }

    #[test]
    fn zero_kinetic_term_freezes_the_position_density() {
        let g = grid(4, 6.0, 0.2);
        let h = SplitHamiltonian::with_kinetic(&g, |x| (x * 1.3).sin(), |_| 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut s = StateVector::random(4, &mut rng).unwrap();
        let before: Vec<f64> = s.amplitudes().iter().map(|c| c.norm_sqr()).collect();
        evolve(&mut s, &h, &g, 7, SplitOrder::Lie).unwrap();
        for (j, (&b, c)) in before.iter().zip(s.amplitudes()).enumerate() {
            assert!((b - c.norm_sqr()).abs() < 1e-12, "index {j}");
        }
    }

    #[test]
    fn one_lie_step_equals_trotter_step() {
        let g = grid(4, 6.0, 0.1);
        let h = SplitHamiltonian::harmonic(&g).unwrap();
        let mut a = gaussian_packet(&g, 3.0, 0.8, 0.0).unwrap();
        let mut b = a.clone();
        trotter_step(&mut a, &h, &g).unwrap();
        evolve(&mut b, &h, &g, 1, SplitOrder::Lie).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
        assert!(matches!(
            evolve(&mut b, &h, &g, 0, SplitOrder::Lie),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn strang_evolution_reverses_exactly() {
        let g = grid(5, 16.0, 0.02);
        let h = SplitHamiltonian::harmonic(&g).unwrap();
        let start = gaussian_packet(&g, 8.0, 1.0, 0.5).unwrap();
        let mut s = start.clone();
        evolve(&mut s, &h, &g, 50, SplitOrder::Strang).unwrap();
        assert!(s.fidelity(&start).unwrap() < 0.999, "evolution went somewhere");
        evolve(&mut s, &h, &g.reversed(), 50, SplitOrder::Strang).unwrap();
        assert!(s.fidelity(&start).unwrap() >= 1.0 - 1e-10);
    }

    #[test]
    fn norm_survives_ten_thousand_steps() {
        let g = grid(5, 16.0, 0.01);
        let h = SplitHamiltonian::harmonic(&g).unwrap();
        let mut s = gaussian_packet(&g, 8.0, 1.0, 1.0).unwrap();
        evolve(&mut s, &h, &g, 10_000, SplitOrder::Strang).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn harmonic_ground_state_stays_put() {
        // The sigma = 1 Gaussian is the ground state of the unit well; its
        // density should survive 100 strang steps to splitting accuracy.
        let g = grid(5, 16.0, 0.01);
        let h = SplitHamiltonian::harmonic(&g).unwrap();
        let mut s = gaussian_packet(&g, 8.0, 1.0, 0.0).unwrap();
        let before = observables(&s, &g, &h).unwrap();
        evolve(&mut s, &h, &g, 100, SplitOrder::Strang).unwrap();
        let after = observables(&s, &g, &h).unwrap();
        for j in 0..g.points() {
            assert!(
                (before.position_density[j] - after.position_density[j]).abs() < 1e-3,
                "density moved at {j}"
            );
        }
        assert!((before.energy - 0.5).abs() < 1e-2, "ground energy {}", before.energy);
        assert!((after.energy - before.energy).abs() < 1e-3);
    }

    #[test]
    fn observables_on_simple_states() {
        let g = grid(3, 8.0, 0.1);
        let h = SplitHamiltonian::harmonic(&g).unwrap();
        let uniform = StateVector::uniform(3).unwrap();
        let obs = observables(&uniform, &g, &h).unwrap();
        for d in &obs.position_density {
            assert!((d - 0.125).abs() < 1e-12);
        }
        let basis = StateVector::basis_state(3, 5).unwrap();
        let obs = observables(&basis, &g, &h).unwrap();
        assert!((obs.mean_x - 5.0).abs() < 1e-12);
        // A position delta is uniform in momentum, so its kinetic energy is
        // the plain average of T over the grid.
        let kinetic_mean = h.kinetic().iter().sum::<f64>() / 8.0;
        assert!((obs.energy - (h.potential()[5] + kinetic_mean)).abs() < 1e-9);
    }

    #[test]
    fn mismatched_state_and_grid_are_rejected() {
        let g = grid(4, 6.0, 0.1);
        let h = SplitHamiltonian::free(&g).unwrap();
        let mut wrong = StateVector::uniform(5).unwrap();
        assert!(matches!(
            trotter_step(&mut wrong, &h, &g),
            Err(Error::SizeMismatch { .. })
        ));
        let other = grid(5, 6.0, 0.1);
        let mut s = StateVector::uniform(5).unwrap();
        assert!(matches!(
            trotter_step(&mut s, &h, &other),
            Err(Error::SizeMismatch { .. })
        ));
    }
}
