use serde::Serialize;

use super::covariance::{CovarianceState, RMatrix, PHYSICALITY_TOL};
use super::params::{OptomechDerived, OptomechParams};
use crate::error::{Error, Result};

/// `2ν` below `1 - PROPAGATION_ABORT` aborts covariance propagation.
pub const PROPAGATION_ABORT: f64 = 1e-6;
/// Real parts of drift eigenvalues must lie below `-STABILITY_MARGIN`.
pub const STABILITY_MARGIN: f64 = 1e-12;

/// `dV/dt = K V + V K^T + D`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftDiffusion {
    pub k: RMatrix,
    pub d: RMatrix,
}

impl DriftDiffusion {
    pub fn new(k: RMatrix, d: RMatrix) -> Result<Self> {
        let n = k.nrows();
        if k.ncols() != n || d.nrows() != n || d.ncols() != n {
            return Err(Error::InvalidDims("drift and diffusion must be square and equal".into()));
        }
        Ok(Self { k, d })
    }

    /// Largest real part of the drift eigenvalues.
    pub fn max_real_eigenvalue(&self) -> f64 {
        self.k
            .complex_eigenvalues()
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_stable(&self) -> bool {
        self.max_real_eigenvalue() < -STABILITY_MARGIN
    }

    fn rhs(&self, v: &RMatrix) -> RMatrix {
        let kv = &self.k * v;
        &kv + kv.transpose() + &self.d
    }
}

/// Linearized drift in the order `(x_a, y_a, x_b, y_b, q, p)` and the
/// diffusion `diag(κ_a, κ_a, κ_b, κ_b, 0, γ_c(2n̄ + 1))`.
pub fn build_drift_diffusion(d: &OptomechDerived, p: &OptomechParams) -> DriftDiffusion {
    let [ka, kb] = d.kappa;
    let [da, db] = d.detuning;
    let [ga, gb] = d.g;
    let (wc, gc) = (p.omega_c_rad_per_s, p.gamma_c_rad_per_s);
    #[rustfmt::skip]
    let k = RMatrix::from_row_slice(6, 6, &[
        -ka,  da,  0.0,  0.0,  0.0, 0.0,
        -da, -ka,  0.0,  0.0,  ga,  0.0,
        0.0, 0.0, -kb,   db,   0.0, 0.0,
        0.0, 0.0, -db,  -kb,  -gb,  0.0,
        0.0, 0.0,  0.0,  0.0,  0.0, wc,
        ga,  0.0, -gb,   0.0, -wc, -gc,
    ]);
    let d = RMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        ka,
        ka,
        kb,
        kb,
        0.0,
        gc * (2.0 * d.n_bar + 1.0),
    ]));
    DriftDiffusion { k, d }
}

/// Sampled covariance trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct CovarianceTrajectory {
    pub times: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<CovarianceState>,
    /// Smallest `2ν` over all samples.
    pub min_two_nu: f64,
}

/// Integrates `dV/dt = KV + VK^T + D` with RK4 from 0 to `t_end`,
/// symmetrizing after every step and sampling every `sample_every` steps
/// (plus the initial and final state). Every sample must be physical.
pub fn propagate_covariance(
    v0: &CovarianceState,
    dd: &DriftDiffusion,
    t_end: f64,
    dt: f64,
    sample_every: usize,
) -> Result<CovarianceTrajectory> {
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::InvalidArgument(format!("need dt > 0 and t_end >= 0 (dt = {dt})")));
    }
    if v0.matrix().nrows() != dd.k.nrows() {
        return Err(Error::DimensionMismatch {
            expected: dd.k.nrows(),
            actual: v0.matrix().nrows(),
        });
    }
    let steps = (t_end / dt).ceil() as usize;
    let h = if steps == 0 { 0.0 } else { t_end / steps as f64 };
    let stride = sample_every.max(1);
    let mut traj = CovarianceTrajectory {
        times: Vec::new(),
        states: Vec::new(),
        min_two_nu: f64::INFINITY,
    };
    let push = |traj: &mut CovarianceTrajectory, t: f64, v: &RMatrix| -> Result<()> {
        let s = CovarianceState::from_raw(v.clone());
        let two_nu = s.min_two_nu();
        if !(two_nu >= 1.0 - PROPAGATION_ABORT) {
            return Err(Error::Unphysical {
                two_nu_min: two_nu,
                time: t,
            });
        }
        traj.min_two_nu = traj.min_two_nu.min(two_nu);
        traj.times.push(t);
        traj.states.push(s);
        Ok(())
    };
    let mut v = v0.matrix().clone();
    push(&mut traj, 0.0, &v)?;
    for step in 1..=steps {
        v = rk4(dd, &v, h);
        if step % stride == 0 || step == steps {
            push(&mut traj, step as f64 * h, &v)?;
        }
    }
    Ok(traj)
}

pub(crate) fn rk4(dd: &DriftDiffusion, v: &RMatrix, h: f64) -> RMatrix {
    let k1 = dd.rhs(v);
    let k2 = dd.rhs(&(v + &k1 * (h / 2.0)));
    let k3 = dd.rhs(&(v + &k2 * (h / 2.0)));
    let k4 = dd.rhs(&(v + &k3 * h));
    let next = v + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    (&next + next.transpose()) * 0.5
}

/// Solves `K V + V K^T = -D` through the Kronecker-sum linear system.
pub fn lyapunov_steady(dd: &DriftDiffusion) -> Result<CovarianceState> {
    let max_re = dd.max_real_eigenvalue();
    if !(max_re < -STABILITY_MARGIN) {
        return Err(Error::Unstable {
            max_real_part: max_re,
        });
    }
    let n = dd.k.nrows();
    let id = RMatrix::identity(n, n);
    let a = id.kronecker(&dd.k) + dd.k.kronecker(&id);
    let rhs = nalgebra::DVector::from_iterator(n * n, dd.d.iter().map(|x| -x));
    let x = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("Lyapunov system".into()))?;
    let v = RMatrix::from_column_slice(n, n, x.as_slice());
    let v = (&v + v.transpose()) * 0.5;
    let residual = (&dd.k * &v + &v * dd.k.transpose() + &dd.d)
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = dd.d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if residual > 1e-10 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Singular(format!(
            "Lyapunov residual {residual:.3e} exceeds tolerance"
        )));
    }
    let s = CovarianceState::symmetric(v)?;
    let two_nu = s.min_two_nu();
    if two_nu < 1.0 - PHYSICALITY_TOL {
        return Err(Error::Unphysical {
            two_nu_min: two_nu,
            time: f64::INFINITY,
        });
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    use super::*;
    use crate::gaussian::derive_params;

    fn scalar_case() -> DriftDiffusion {
        DriftDiffusion::new(-RMatrix::identity(2, 2), RMatrix::identity(2, 2)).unwrap()
    }

    #[test]
    fn trivial_dynamics_leaves_state_unchanged() {
        let dd = DriftDiffusion::new(RMatrix::zeros(2, 2), RMatrix::zeros(2, 2)).unwrap();
        let v0 = CovarianceState::new(RMatrix::identity(2, 2) * 1.5).unwrap();
        let traj = propagate_covariance(&v0, &dd, 1.0, 0.01, 10).unwrap();
        assert_eq!(traj.states.last().unwrap(), &v0);
    }

    #[test]
    fn scalar_relaxation_matches_analytic_solution() {
        // v' = -2v + 1, v(0) = 1 => v(t) = 1/2 + e^{-2t}/2.
        let v0 = CovarianceState::new(RMatrix::identity(2, 2)).unwrap();
        let traj = propagate_covariance(&v0, &scalar_case(), 3.0, 1e-3, 100).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let exact = 0.5 + 0.5 * (-2.0 * t).exp();
            assert!((s.matrix()[(0, 0)] - exact).abs() < 1e-12);
        }
        let steady = lyapunov_steady(&scalar_case()).unwrap();
        assert!((steady.matrix() - RMatrix::identity(2, 2) * 0.5).amax() < 1e-14);
    }

    #[test]
    fn drift_matrix_structure() {
        let p = OptomechParams::fig4(40.0);
        let d = derive_params(&p).unwrap();
        let dd = build_drift_diffusion(&d, &p);
        let trace = -2.0 * d.kappa[0] - 2.0 * d.kappa[1] - p.gamma_c_rad_per_s;
        assert!((dd.k.trace() - trace).abs() <= 1e-9 * trace.abs());
        assert_eq!(dd.k[(5, 0)], d.g[0]);
        assert_eq!(dd.k[(5, 2)], -d.g[1]);
        assert_eq!(dd.d[(4, 4)], 0.0);
        assert_eq!(dd.d[(5, 5)], p.gamma_c_rad_per_s * (2.0 * d.n_bar + 1.0));
    }

    #[test]
    fn uncoupled_modes_relax_to_local_fixed_points() {
        let p = OptomechParams::fig4(40.0);
        let mut d = derive_params(&p).unwrap();
        d.g = [0.0, 0.0];
        let dd = build_drift_diffusion(&d, &p);
        for (i, j) in [(0, 2), (0, 4), (2, 4)] {
            assert_eq!(dd.k[(i, j)], 0.0);
            assert_eq!(dd.k[(j + 1, i)], 0.0);
        }
        let v = lyapunov_steady(&dd).unwrap();
        let m = v.matrix();
        for k in 0..4 {
            assert!((m[(k, k)] - 0.5).abs() < 1e-9);
        }
        let thermal = d.n_bar + 0.5;
        assert!((m[(4, 4)] - thermal).abs() < 1e-8 * thermal);
        assert!((m[(5, 5)] - thermal).abs() < 1e-8 * thermal);
        assert!(m.view((0, 4), (4, 2)).amax() < 1e-9);
    }

    #[test]
    fn unstable_drift_is_reported() {
        let dd = DriftDiffusion::new(RMatrix::identity(2, 2) * 0.1, RMatrix::identity(2, 2))
            .unwrap();
        assert!(matches!(lyapunov_steady(&dd), Err(Error::Unstable { .. })));
    }

    #[test]
    fn lyapunov_agrees_with_long_integration_on_random_stable_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 10 {
            let k = RMatrix::from_fn(4, 4, |_, _| StandardNormal.sample(&mut rng)) * 0.7
                - RMatrix::identity(4, 4) * 1.2;
            let d = RMatrix::from_diagonal(&nalgebra::DVector::from_fn(4, |_, _| {
                rng.random_range(0.0..2.0)
            }));
            let dd = DriftDiffusion::new(k, d).unwrap();
            let rate = dd.max_real_eigenvalue();
            if rate > -0.2 {
                continue;
            }
            let Ok(steady) = lyapunov_steady(&dd) else {
                continue;
            };
            let t_end = 30.0 / rate.abs();
            let mut v = RMatrix::identity(4, 4) * 0.5;
            let steps = (t_end / 1e-3).ceil() as usize;
            let h = t_end / steps as f64;
            for _ in 0..steps {
                v = rk4(&dd, &v, h);
            }
            assert!((v - steady.matrix()).amax() < 1e-8);
            checked += 1;
        }
    }
}
