use std::f64::consts::PI;

use crate::dynamics::{evolve_closed, JumpOperator};
use crate::error::{Error, Result};
use crate::quantum::pauli::{bits, minus, phi_plus, plus, projector, psi_plus, x};
use crate::quantum::{
    commutator, embed, hermitian_deviation, kron, CMatrix, DensityMatrix, MeasurementBasis,
    SystemDims, HERMITIAN_TOL,
};

/// Tolerance on `[H_AC, O_B]` and `[H_BC, O_A]`.
pub const LOCALITY_TOL: f64 = 1e-10;

/// Probes A, B and mediator C with couplings `h_ac`, `h_bc`.
#[derive(Debug, Clone)]
pub struct TripartiteScenario {
    pub name: String,
    pub rho0: DensityMatrix,
    pub h_ac: CMatrix,
    pub h_bc: CMatrix,
    pub jumps: Vec<JumpOperator>,
    /// Unread measurement on A applied before the evolution.
    pub breaking_basis: Option<MeasurementBasis>,
    pub sample_times: Vec<f64>,
}

fn max_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |a, z| a.max(z.norm()))
}

/// Largest commutator of `h` with the matrix units on `label`.
fn locality_deviation(h: &CMatrix, label: &str, dims: &SystemDims) -> Result<f64> {
    let d = dims.dim_of(label)?;
    let mut dev = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let mut e = CMatrix::zeros(d, d);
            e[(i, j)] = crate::quantum::ONE;
            dev = dev.max(max_entry(&commutator(h, &embed(&e, label, dims)?)));
        }
    }
    Ok(dev)
}

impl TripartiteScenario {
    pub fn dims(&self) -> &SystemDims {
        self.rho0.dims()
    }

    pub fn hamiltonian(&self) -> CMatrix {
        &self.h_ac + &self.h_bc
    }

    /// Checks labels, Hermiticity, that `h_ac` acts trivially on B and
    /// `h_bc` on A, jump labels, the breaking basis and the sample times.
    pub fn validate(&self) -> Result<()> {
        let dims = self.dims();
        if dims.len() != 3 || !["A", "B", "C"].iter().all(|l| dims.contains(l)) {
            return Err(Error::InvalidScenario(format!(
                "expected subsystems A, B, C, got {:?}",
                dims.labels()
            )));
        }
        for (name, h, other) in [("h_ac", &self.h_ac, "B"), ("h_bc", &self.h_bc, "A")] {
            if h.nrows() != dims.total() || h.ncols() != dims.total() {
                return Err(Error::DimensionMismatch {
                    expected: dims.total(),
                    actual: h.nrows(),
                });
            }
            let dev = hermitian_deviation(h);
            if dev > HERMITIAN_TOL {
                return Err(Error::InvalidScenario(format!("{name} is not Hermitian ({dev:.3e})")));
            }
            let dev = locality_deviation(h, other, dims)?;
            if dev > LOCALITY_TOL {
                return Err(Error::InvalidScenario(format!(
                    "{name} acts on {other} (commutator {dev:.3e})"
                )));
            }
        }
        for j in &self.jumps {
            let d = dims.dim_of(&j.subsystem)?;
            if j.operator.nrows() != d || j.operator.ncols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: j.operator.nrows(),
                });
            }
            if !(j.rate >= 0.0 && j.rate.is_finite()) {
                return Err(Error::InvalidScenario(format!("jump rate {}", j.rate)));
            }
        }
        if let Some(b) = &self.breaking_basis {
            if b.subsystem() != "A" || b.dim() != dims.dim_of("A")? {
                return Err(Error::InvalidScenario(
                    "breaking basis must be a full basis of A".into(),
                ));
            }
        }
        if self.sample_times.is_empty()
            || self.sample_times[0] < 0.0
            || self.sample_times.windows(2).any(|w| w[1] <= w[0])
            || self.sample_times.iter().any(|t| !t.is_finite())
        {
            return Err(Error::InvalidScenario(
                "sample times must be non-empty, non-negative and strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

fn xx_couplings(dims: &SystemDims) -> (CMatrix, CMatrix) {
    let xa = embed(&x(), "A", dims).expect("qubit A");
    let xb = embed(&x(), "B", dims).expect("qubit B");
    let xc = embed(&x(), "C", dims).expect("qubit C");
    (&xa * &xc, &xb * &xc)
}

/// `sigma_x sigma_x` couplings with `rho0 = (|011><011| + |100><100|)/2`,
/// sampled at `k pi/32`, `k = 0..=8`.
pub fn scenario_gain_example() -> TripartiteScenario {
    let dims = SystemDims::qubits(&["A", "B", "C"]);
    let (h_ac, h_bc) = xx_couplings(&dims);
    let m = (projector(&bits("011")) + projector(&bits("100"))).unscale(2.0);
    TripartiteScenario {
        name: "gain-example".into(),
        rho0: DensityMatrix::new(m, dims).expect("valid state"),
        h_ac,
        h_bc,
        jumps: Vec::new(),
        breaking_basis: None,
        sample_times: (0..=8).map(|k| k as f64 * PI / 32.0).collect(),
    }
}

/// Same couplings with
/// `rho0 = (|psi+><psi+| (x) |+><+| + |phi+><phi+| (x) |-><-|)/2`,
/// sampled at 20 equally spaced times in `[0, pi]`.
pub fn scenario_counterexample() -> TripartiteScenario {
    let dims = SystemDims::qubits(&["A", "B", "C"]);
    let (h_ac, h_bc) = xx_couplings(&dims);
    let m = (kron(&projector(&psi_plus()), &projector(&plus()))
        + kron(&projector(&phi_plus()), &projector(&minus())))
    .unscale(2.0);
    TripartiteScenario {
        name: "counterexample".into(),
        rho0: DensityMatrix::new(m, dims).expect("valid state"),
        h_ac,
        h_bc,
        jumps: Vec::new(),
        breaking_basis: None,
        sample_times: (0..20).map(|k| k as f64 * PI / 19.0).collect(),
    }
}

/// `exp(-i h_ac t) rho0 exp(i h_ac t)`: only the A-C coupling has acted.
pub fn instrumental_state(s: &TripartiteScenario, t: f64) -> Result<DensityMatrix> {
    evolve_closed(&s.rho0, &s.h_ac, t)
}
