//! Linearized membrane-in-the-middle optomechanics.
//!
//! Two driven cavities `a`, `b` couple to a membrane `c` through radiation
//! pressure. Fluctuations are Gaussian, so everything follows from the 6x6
//! covariance matrix in the order `(x_a, y_a, x_b, y_b, q, p)`. SI units
//! throughout; log-negativities here use the natural log.

mod covariance;
mod evolution;
mod figures;
mod params;

pub use covariance::{
    log_negativity_gaussian, symplectic_eigenvalues, three_mode_negativities, CovarianceState,
    Mode, RMatrix, PHYSICALITY_TOL, SYMMETRY_TOL,
};
pub use evolution::{
    build_drift_diffusion, lyapunov_steady, propagate_covariance, CovarianceTrajectory,
    DriftDiffusion, PROPAGATION_ABORT, STABILITY_MARGIN,
};
pub use figures::{
    dynamics_csv, optomech_dynamics, reproduce_fig4, sweep_steady_state, DynamicsConfig,
    DynamicsSeries, StopReason, SteadyPoint, SweepGrid, SweepPoint, SweepTable, FIG4_POWERS_MW,
};
pub use params::{derive_params, OptomechDerived, OptomechParams, C_LIGHT, HBAR, K_B};
