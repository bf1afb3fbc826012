//! Time evolution of density matrices (units with hbar = 1).
//!
//! Closed evolution uses the exact propagator `exp(-iHt)`, the product
//! formula alternates the two probe-mediator couplings, and open dynamics
//! integrate a Lindblad master equation with fixed-step RK4. Jump operators
//! are always local to one labelled subsystem.

use crate::error::{Error, Result};
use crate::quantum::{
    embed, hermitian_deviation, hermitian_exp, CMatrix, DensityMatrix, SystemDims, HERMITIAN_TOL,
};

/// Largest trace drift tolerated during Lindblad integration before aborting.
pub const TRACE_ABORT: f64 = 1e-6;
/// Most negative eigenvalue tolerated during Lindblad integration.
pub const POSITIVITY_ABORT: f64 = 1e-6;
/// Number of RK4 steps used when no step size is given.
pub const DEFAULT_STEPS: usize = 2000;

/// A jump operator acting on a single subsystem, with its rate.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpOperator {
    pub subsystem: String,
    pub operator: CMatrix,
    pub rate: f64,
}

impl JumpOperator {
    pub fn new(subsystem: impl Into<String>, operator: CMatrix, rate: f64) -> Self {
        Self {
            subsystem: subsystem.into(),
            operator,
            rate,
        }
    }
}

/// Hamiltonian on the full space plus local dissipators.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    dims: SystemDims,
    hamiltonian: CMatrix,
    jumps: Vec<JumpOperator>,
    // sqrt(rate) * identity-padded operator
    embedded: Vec<CMatrix>,
    // sum_k L_k^dagger L_k
    decay: CMatrix,
}

impl LindbladModel {
    pub fn new(dims: SystemDims, hamiltonian: CMatrix, jumps: Vec<JumpOperator>) -> Result<Self> {
        let n = dims.total();
        if hamiltonian.nrows() != n || hamiltonian.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: hamiltonian.nrows(),
            });
        }
        let deviation = hermitian_deviation(&hamiltonian);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let mut embedded = Vec::with_capacity(jumps.len());
        for j in &jumps {
            if !(j.rate >= 0.0 && j.rate.is_finite()) {
                return Err(Error::InvalidArgument(format!("jump rate {}", j.rate)));
            }
            embedded.push(embed(&j.operator, &j.subsystem, &dims)?.scale(j.rate.sqrt()));
        }
        let decay = embedded
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, l| acc + l.adjoint() * l);
        Ok(Self {
            dims,
            hamiltonian,
            jumps,
            embedded,
            decay,
        })
    }

    pub fn closed(dims: SystemDims, hamiltonian: CMatrix) -> Result<Self> {
        Self::new(dims, hamiltonian, Vec::new())
    }

    pub fn dims(&self) -> &SystemDims {
        &self.dims
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[JumpOperator] {
        &self.jumps
    }

    /// Right-hand side of the master equation.
    pub fn generator(&self, rho: &CMatrix) -> CMatrix {
        let i = crate::quantum::I;
        let h_rho = &self.hamiltonian * rho;
        let mut out = (&h_rho - h_rho.adjoint()) * (-i);
        if !self.embedded.is_empty() {
            let d_rho = &self.decay * rho;
            out -= (&d_rho + d_rho.adjoint()).unscale(2.0);
            for l in &self.embedded {
                out += l * rho * l.adjoint();
            }
        }
        out
    }
}

/// Sampled states of a trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// Largest |Tr rho - 1| seen before sampling.
    pub max_trace_drift: f64,
    /// Largest negative eigenvalue removed when sampling.
    pub max_clipped: f64,
}

fn check_dims(rho: &DensityMatrix, m: &CMatrix) -> Result<()> {
    if m.nrows() != rho.dim() || m.ncols() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: m.nrows(),
        });
    }
    Ok(())
}

fn conjugate(rho: &DensityMatrix, u: &CMatrix) -> DensityMatrix {
    let m = u * rho.matrix() * u.adjoint();
    let m = (&m + m.adjoint()).unscale(2.0);
    DensityMatrix::from_parts_unchecked(m, rho.dims().clone())
}

/// `U rho U^dagger` with `U = exp(-i h t)`.
pub fn evolve_closed(rho0: &DensityMatrix, h: &CMatrix, t: f64) -> Result<DensityMatrix> {
    check_dims(rho0, h)?;
    let u = hermitian_exp(h, t)?;
    Ok(conjugate(rho0, &u))
}

/// `(exp(-i h_bc dt) exp(-i h_ac dt))^n rho0 (...)^dagger` with `dt = t/n`.
pub fn trotter_evolve(
    rho0: &DensityMatrix,
    h_ac: &CMatrix,
    h_bc: &CMatrix,
    t: f64,
    n: usize,
) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("Trotter step count must be at least 1".into()));
    }
    check_dims(rho0, h_ac)?;
    check_dims(rho0, h_bc)?;
    let dt = t / n as f64;
    let step = hermitian_exp(h_bc, dt)? * hermitian_exp(h_ac, dt)?;
    let mut u = CMatrix::identity(rho0.dim(), rho0.dim());
    for _ in 0..n {
        u = &step * u;
    }
    Ok(conjugate(rho0, &u))
}

fn rk4_step(model: &LindbladModel, rho: &CMatrix, dt: f64) -> CMatrix {
    let k1 = model.generator(rho);
    let k2 = model.generator(&(rho + k1.scale(dt / 2.0)));
    let k3 = model.generator(&(rho + k2.scale(dt / 2.0)));
    let k4 = model.generator(&(rho + k3.scale(dt)));
    rho + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(dt / 6.0)
}

struct Integrator<'a> {
    model: &'a LindbladModel,
    rho: CMatrix,
    t: f64,
    max_trace_drift: f64,
    max_clipped: f64,
}

impl Integrator<'_> {
    fn advance(&mut self, dt: f64) -> Result<()> {
        self.rho = rk4_step(self.model, &self.rho, dt);
        self.t += dt;
        let drift = (self.rho.trace().re - 1.0).abs();
        self.max_trace_drift = self.max_trace_drift.max(drift);
        let h = (&self.rho + self.rho.adjoint()).unscale(2.0);
        let min = h.symmetric_eigenvalues().min();
        if drift > TRACE_ABORT || min < -POSITIVITY_ABORT || !min.is_finite() {
            return Err(Error::IntegrationUnstable {
                time: self.t,
                dt,
                trace_drift: drift,
                min_eigenvalue: min,
            });
        }
        Ok(())
    }

    fn sample(&mut self) -> Result<DensityMatrix> {
        let (state, clipped) =
            DensityMatrix::from_nearly_physical(self.rho.clone(), self.model.dims.clone())?;
        self.max_clipped = self.max_clipped.max(clipped);
        Ok(state)
    }
}

/// Integrates the master equation from 0 to `t_end` with step `dt`,
/// sampling after every step (the initial state is sample 0).
pub fn evolve_lindblad(
    rho0: &DensityMatrix,
    model: &LindbladModel,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0) || !(t_end > 0.0) || dt > t_end {
        return Err(Error::InvalidArgument(format!(
            "need 0 < dt <= t_end (dt = {dt}, t_end = {t_end})"
        )));
    }
    let steps = (t_end / dt).round().max(1.0) as usize;
    let times: Vec<f64> = (0..=steps).map(|k| t_end * k as f64 / steps as f64).collect();
    evolve_lindblad_at(rho0, model, &times, t_end / steps as f64)
}

/// Integrates the master equation and returns the state at each of the
/// requested (ascending, non-negative) times. Steps between samples are
/// shortened to land exactly on every sample time and never exceed `max_dt`.
pub fn evolve_lindblad_at(
    rho0: &DensityMatrix,
    model: &LindbladModel,
    times: &[f64],
    max_dt: f64,
) -> Result<Trajectory> {
    if rho0.dims() != model.dims() {
        return Err(Error::InvalidDims("state and model dims differ".into()));
    }
    if !(max_dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt = {max_dt}")));
    }
    if times.first().is_some_and(|&t| t < 0.0) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "sample times must be non-negative and strictly increasing".into(),
        ));
    }
    let mut integ = Integrator {
        model,
        rho: rho0.matrix().clone(),
        t: 0.0,
        max_trace_drift: 0.0,
        max_clipped: 0.0,
    };
    let mut states = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - integ.t;
        if span > 0.0 {
            let n = (span / max_dt).ceil().max(1.0) as usize;
            let h = span / n as f64;
            for _ in 0..n {
                integ.advance(h)?;
            }
            integ.t = target;
        }
        states.push(integ.sample()?);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        max_trace_drift: integ.max_trace_drift,
        max_clipped: integ.max_clipped,
    })
}

/// Default step for a run to `t_end`.
pub fn default_dt(t_end: f64) -> f64 {
    t_end / DEFAULT_STEPS as f64
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::quantum::pauli::{bits, ket, projector, x, z};
    use crate::quantum::random::{hermitian, wishart};
    use crate::quantum::{identity, kron_all, trace_distance, CVector};

    fn abc() -> SystemDims {
        SystemDims::qubits(&["A", "B", "C"])
    }

    fn eq5_state() -> DensityMatrix {
        let m = (projector(&bits("011")) + projector(&bits("100"))).unscale(2.0);
        DensityMatrix::new(m, abc()).unwrap()
    }

    fn eq4_pair() -> (CMatrix, CMatrix) {
        let i2 = identity(2);
        (
            kron_all(&[x(), i2.clone(), x()]),
            kron_all(&[i2, x(), x()]),
        )
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn closed_evolution_at_zero_time_is_identity() {
        let (h_ac, h_bc) = eq4_pair();
        let rho = eq5_state();
        let out = evolve_closed(&rho, &(h_ac + h_bc), 0.0).unwrap();
        assert!(max_abs(&(out.matrix() - rho.matrix())) < 1e-15);
    }

    #[test]
    fn closed_evolution_preserves_spectrum_and_purity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = DensityMatrix::new(wishart(8, 3, &mut rng), abc()).unwrap();
        let h = hermitian(8, &mut rng);
        let out = evolve_closed(&rho, &h, 1.7).unwrap();
        for (a, b) in rho.eigenvalues().iter().zip(out.eigenvalues()) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!((rho.purity() - out.purity()).abs() < 1e-10);
    }

    #[test]
    fn closed_evolution_rejects_dimension_mismatch() {
        let rho = eq5_state();
        assert!(matches!(
            evolve_closed(&rho, &identity(4), 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn trotter_is_exact_for_commuting_couplings() {
        let (h_ac, h_bc) = eq4_pair();
        let rho = eq5_state();
        let exact = evolve_closed(&rho, &(&h_ac + &h_bc), PI / 4.0).unwrap();
        for n in [1, 2, 7, 32] {
            let tr = trotter_evolve(&rho, &h_ac, &h_bc, PI / 4.0, n).unwrap();
            assert!(max_abs(&(tr.matrix() - exact.matrix())) < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn trotter_single_short_step_is_accurate() {
        let i2 = identity(2);
        let h_ac = kron_all(&[x(), i2.clone(), x()]);
        let h_bc = kron_all(&[i2, z(), z()]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = DensityMatrix::new(wishart(8, 2, &mut rng), abc()).unwrap();
        let t = 1e-3;
        let exact = evolve_closed(&rho, &(&h_ac + &h_bc), t).unwrap();
        let tr = trotter_evolve(&rho, &h_ac, &h_bc, t, 1).unwrap();
        // Leading error is t^2 ||[h_ac, h_bc]|| / 2 ~ 4e-6.
        assert!(trace_distance(tr.matrix(), exact.matrix()) < 1e-5);
    }

    #[test]
    fn trotter_rejects_zero_steps() {
        let (h_ac, h_bc) = eq4_pair();
        assert!(trotter_evolve(&eq5_state(), &h_ac, &h_bc, 1.0, 0).is_err());
    }

    #[test]
    fn lindblad_without_jumps_matches_closed_evolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = DensityMatrix::new(wishart(8, 8, &mut rng), abc()).unwrap();
        let h = hermitian(8, &mut rng);
        let model = LindbladModel::closed(abc(), h.clone()).unwrap();
        let t_end = 1.0;
        let traj = evolve_lindblad(&rho, &model, t_end, default_dt(t_end)).unwrap();
        let exact = evolve_closed(&rho, &h, t_end).unwrap();
        let last = traj.states.last().unwrap();
        assert!(max_abs(&(last.matrix() - exact.matrix())) < 1e-8);
        assert_eq!(traj.times.len(), DEFAULT_STEPS + 1);
    }

    #[test]
    fn pure_dephasing_decays_coherence_exponentially() {
        // L = sqrt(g) Z gives d rho_01/dt = -2 g rho_01.
        let q = SystemDims::qubits(&["A"]);
        let plus: CVector = (ket(2, 0) + ket(2, 1)).unscale(2f64.sqrt());
        let rho = DensityMatrix::from_pure(&plus, q.clone()).unwrap();
        let gamma = 0.7;
        let model = LindbladModel::new(
            q,
            CMatrix::zeros(2, 2),
            vec![JumpOperator::new("A", z(), gamma)],
        )
        .unwrap();
        let traj = evolve_lindblad(&rho, &model, 2.0, 1e-3).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let expected = 0.5 * (-2.0 * gamma * t).exp();
            assert!((s.matrix()[(0, 1)].re - expected).abs() < 1e-6);
            assert!((s.matrix().trace().re - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn lindblad_preserves_trace_with_generic_local_jumps() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = DensityMatrix::new(wishart(8, 2, &mut rng), abc()).unwrap();
        let jumps = vec![
            JumpOperator::new("A", crate::quantum::random::ginibre(2, 2, &mut rng), 0.2),
            JumpOperator::new("B", crate::quantum::random::ginibre(2, 2, &mut rng), 0.1),
            JumpOperator::new("C", z(), 0.3),
        ];
        let model = LindbladModel::new(abc(), hermitian(8, &mut rng), jumps).unwrap();
        let traj = evolve_lindblad(&rho, &model, 1.5, default_dt(1.5)).unwrap();
        assert!(traj.max_trace_drift < 1e-8);
    }

    #[test]
    fn lindblad_aborts_with_diagnostic_when_step_is_too_large() {
        let q = SystemDims::qubits(&["A"]);
        let rho = DensityMatrix::from_pure(&ket(2, 0), q.clone()).unwrap();
        let model = LindbladModel::new(
            q,
            x().scale(50.0),
            vec![JumpOperator::new("A", z(), 40.0)],
        )
        .unwrap();
        let err = evolve_lindblad(&rho, &model, 1.0, 0.5).unwrap_err();
        assert!(matches!(err, Error::IntegrationUnstable { .. }), "{err}");
    }

    #[test]
    fn lindblad_rejects_bad_jump_operator() {
        let q = SystemDims::qubits(&["A"]);
        let bad = LindbladModel::new(
            q.clone(),
            CMatrix::zeros(2, 2),
            vec![JumpOperator::new("A", identity(3), 1.0)],
        );
        assert!(bad.is_err());
        let bad = LindbladModel::new(
            q,
            CMatrix::zeros(2, 2),
            vec![JumpOperator::new("Q", z(), 1.0)],
        );
        assert!(matches!(bad, Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn sampling_at_requested_times() {
        let q = SystemDims::qubits(&["A"]);
        let rho = DensityMatrix::from_pure(&ket(2, 0), q.clone()).unwrap();
        let model = LindbladModel::closed(q, x()).unwrap();
        let times = [0.0, 0.3, 1.1];
        let traj = evolve_lindblad_at(&rho, &model, &times, 1e-3).unwrap();
        for (t, s) in times.iter().zip(&traj.states) {
            assert!((s.matrix()[(1, 1)].re - t.sin().powi(2)).abs() < 1e-9);
        }
        assert!(evolve_lindblad_at(&rho, &model, &[0.5, 0.2], 1e-3).is_err());
    }
}
