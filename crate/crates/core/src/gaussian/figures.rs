use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::covariance::{three_mode_negativities, CovarianceState, PHYSICALITY_TOL};
use super::evolution::{build_drift_diffusion, lyapunov_steady, rk4, PROPAGATION_ABORT};
use super::params::{derive_params, OptomechParams};
use crate::error::{Error, Result};

/// The four `P_b` values of the time-series figure, in mW.
pub const FIG4_POWERS_MW: [f64; 4] = [20.0, 40.0, 60.0, 80.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    /// RK4 step in units of `1/ω_c`.
    pub dt_omega_c: f64,
    /// Integration horizon in units of `1/ω_c`.
    pub t_max_omega_c: f64,
    pub sample_every: usize,
    /// A stable run stops once both negativities vary by less than this over
    /// the last tenth of the elapsed window (and 30 relaxation times passed).
    pub settle_tol: f64,
    /// An unstable run stops once any covariance entry exceeds this.
    pub growth_cap: f64,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            dt_omega_c: 0.002,
            t_max_omega_c: 1000.0,
            sample_every: 50,
            settle_tol: 1e-6,
            growth_cap: 1e6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Settled,
    TimeLimit,
    GrowthCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyPoint {
    pub e_ab: f64,
    pub e_abc: f64,
}

/// Negativities (natural log) along one covariance trajectory starting from
/// vacuum cavities and a thermal membrane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsSeries {
    pub power_b_mw: f64,
    pub omega_c: f64,
    pub stable: bool,
    pub max_real_eigenvalue: f64,
    pub t_omega_c: Vec<f64>,
    pub e_ab: Vec<f64>,
    pub e_abc: Vec<f64>,
    pub two_nu_min: Vec<f64>,
    pub stop_reason: StopReason,
    /// Lyapunov steady state, when it exists.
    pub steady: Option<SteadyPoint>,
    /// `max|V(t_end) - V_s|`, when a steady state exists.
    pub lyapunov_deviation: Option<f64>,
}

impl DynamicsSeries {
    /// Smallest `2ν` over all samples.
    pub fn min_two_nu(&self) -> f64 {
        self.two_nu_min.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn all_physical(&self) -> bool {
        self.min_two_nu() >= 1.0 - PHYSICALITY_TOL
    }

    /// Every sample with `E_{a:b} > threshold` is at or after the first
    /// sample with `E_{ab:c} > threshold`.
    pub fn ab_preceded_by_abc(&self, threshold: f64) -> bool {
        let first_abc = self.e_abc.iter().position(|&e| e > threshold);
        let first_ab = self.e_ab.iter().position(|&e| e > threshold);
        match (first_ab, first_abc) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(c)) => c <= a,
        }
    }
}

const DYNAMICS_HEADER: &str = "# P_b in mW; t_omega_c in units of 1/omega_c; t_s in seconds; \
E_ab and E_abc are log-negativities in nepers; two_nu_min is twice the smallest symplectic eigenvalue\n\
P_b_mW,t_omega_c,t_s,E_ab,E_abc,two_nu_min\n";

/// Concatenated time series, one row per sample.
pub fn dynamics_csv(series: &[DynamicsSeries]) -> String {
    let mut out = String::from(DYNAMICS_HEADER);
    for s in series {
        for i in 0..s.t_omega_c.len() {
            let _ = writeln!(
                out,
                "{},{:.4},{:.6e},{:.10e},{:.10e},{:.12}",
                s.power_b_mw,
                s.t_omega_c[i],
                s.t_omega_c[i] / s.omega_c,
                s.e_ab[i],
                s.e_abc[i],
                s.two_nu_min[i],
            );
        }
    }
    out
}

fn settled(e: &[f64], tol: f64) -> bool {
    let n = e.len();
    let window = &e[n - (n / 10).max(2).min(n)..];
    let (lo, hi) = window
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    hi - lo < tol
}

/// Integrates the covariance matrix for one parameter set.
pub fn optomech_dynamics(p: &OptomechParams, cfg: &DynamicsConfig) -> Result<DynamicsSeries> {
    if !(cfg.dt_omega_c > 0.0 && cfg.t_max_omega_c > 0.0) {
        return Err(Error::InvalidArgument("step and horizon must be positive".into()));
    }
    let derived = derive_params(p)?;
    let dd = build_drift_diffusion(&derived, p);
    let wc = p.omega_c_rad_per_s;
    let max_re = dd.max_real_eigenvalue();
    let stable = dd.is_stable();
    let steady_state = if stable { Some(lyapunov_steady(&dd)?) } else { None };
    // 30 relaxation times, in units of 1/ω_c.
    let relax = if stable { 30.0 * wc / max_re.abs() } else { f64::INFINITY };

    let h = cfg.dt_omega_c / wc;
    let steps = (cfg.t_max_omega_c / cfg.dt_omega_c).ceil() as usize;
    let stride = cfg.sample_every.max(1);
    let mut series = DynamicsSeries {
        power_b_mw: p.power_b_mw,
        omega_c: wc,
        stable,
        max_real_eigenvalue: max_re,
        t_omega_c: Vec::new(),
        e_ab: Vec::new(),
        e_abc: Vec::new(),
        two_nu_min: Vec::new(),
        stop_reason: StopReason::TimeLimit,
        steady: None,
        lyapunov_deviation: None,
    };
    let record = |series: &mut DynamicsSeries, t: f64, v: &CovarianceState| -> Result<()> {
        let two_nu = v.min_two_nu();
        if !(two_nu >= 1.0 - PROPAGATION_ABORT) {
            return Err(Error::Unphysical {
                two_nu_min: two_nu,
                time: t / wc,
            });
        }
        let (eab, eabc) = three_mode_negativities(v)?;
        series.t_omega_c.push(t);
        series.e_ab.push(eab);
        series.e_abc.push(eabc);
        series.two_nu_min.push(two_nu);
        Ok(())
    };

    let mut v = CovarianceState::initial(derived.n_bar).matrix().clone();
    record(&mut series, 0.0, &CovarianceState::from_raw(v.clone()))?;
    for step in 1..=steps {
        v = rk4(&dd, &v, h);
        if step % stride != 0 && step != steps {
            continue;
        }
        let t = step as f64 * cfg.dt_omega_c;
        record(&mut series, t, &CovarianceState::from_raw(v.clone()))?;
        if v.amax() > cfg.growth_cap {
            series.stop_reason = StopReason::GrowthCap;
            break;
        }
        if t >= relax && settled(&series.e_ab, cfg.settle_tol) && settled(&series.e_abc, cfg.settle_tol)
        {
            series.stop_reason = StopReason::Settled;
            break;
        }
    }
    if let Some(vs) = steady_state {
        let (eab, eabc) = three_mode_negativities(&vs)?;
        series.steady = Some(SteadyPoint {
            e_ab: eab,
            e_abc: eabc,
        });
        series.lyapunov_deviation = Some((&v - vs.matrix()).amax());
    }
    Ok(series)
}

/// Time series for each `P_b` (mW) with all other parameters at the
/// figure preset.
pub fn reproduce_fig4(powers_mw: &[f64], cfg: &DynamicsConfig) -> Result<Vec<DynamicsSeries>> {
    powers_mw
        .par_iter()
        .map(|&pb| optomech_dynamics(&OptomechParams::fig4(pb), cfg))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub power_b_mw: Vec<f64>,
    pub delta_b_over_omega_c: Vec<f64>,
}

impl SweepGrid {
    /// `n_p` powers `100 k / n_p` mW and `n_d` detunings evenly spanning
    /// `[-2, 2] ω_c`.
    pub fn uniform(n_p: usize, n_d: usize) -> Self {
        Self {
            power_b_mw: (1..=n_p).map(|k| 100.0 * k as f64 / n_p as f64).collect(),
            delta_b_over_omega_c: (0..n_d)
                .map(|k| {
                    if n_d == 1 {
                        0.0
                    } else {
                        -2.0 + 4.0 * k as f64 / (n_d - 1) as f64
                    }
                })
                .collect(),
        }
    }

    /// The 40 x 40 steady-state grid.
    pub fn fig5() -> Self {
        Self::uniform(40, 40)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub power_b_mw: f64,
    pub delta_b_over_omega_c: f64,
    pub stable: bool,
    pub max_real_eigenvalue: f64,
    pub e_ab: Option<f64>,
    pub e_abc: Option<f64>,
}

/// Grid results, row-major with power as the slow index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub grid: SweepGrid,
    pub points: Vec<SweepPoint>,
}

impl SweepTable {
    pub fn unstable_count(&self) -> usize {
        self.points.iter().filter(|p| !p.stable).count()
    }

    /// Number of 4-connected components of unstable cells.
    pub fn unstable_components(&self) -> usize {
        let nd = self.grid.delta_b_over_omega_c.len();
        let np = self.grid.power_b_mw.len();
        let mut seen = vec![false; self.points.len()];
        let mut components = 0;
        for start in 0..self.points.len() {
            if seen[start] || self.points[start].stable {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(idx) = stack.pop() {
                let (i, j) = (idx / nd, idx % nd);
                let mut neighbours = Vec::with_capacity(4);
                if i > 0 {
                    neighbours.push(idx - nd);
                }
                if i + 1 < np {
                    neighbours.push(idx + nd);
                }
                if j > 0 {
                    neighbours.push(idx - 1);
                }
                if j + 1 < nd {
                    neighbours.push(idx + 1);
                }
                for n in neighbours {
                    if !seen[n] && !self.points[n].stable {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
        components
    }

    /// Largest steady-state `E_{ab:c}` over stable points.
    pub fn max_e_abc(&self) -> f64 {
        self.points.iter().filter_map(|p| p.e_abc).fold(0.0, f64::max)
    }

    pub fn max_e_ab(&self) -> f64 {
        self.points.iter().filter_map(|p| p.e_ab).fold(0.0, f64::max)
    }

    /// Unstable rows leave the entanglement columns empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "# P_b in mW; Delta_b in units of omega_c; E_ab and E_abc are steady-state \
             log-negativities in nepers, empty where no steady state exists\n\
             P_b_mW,Delta_b_over_omega_c,stable,E_ab,E_abc\n",
        );
        let fmt = |e: Option<f64>| e.map(|v| format!("{v:.10e}")).unwrap_or_default();
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{:.6},{},{},{}",
                p.power_b_mw,
                p.delta_b_over_omega_c,
                p.stable,
                fmt(p.e_ab),
                fmt(p.e_abc)
            );
        }
        out
    }
}

/// Steady states over `(P_b, Δ_b)` with every other parameter from `base`.
pub fn sweep_steady_state(base: &OptomechParams, grid: &SweepGrid) -> Result<SweepTable> {
    let nd = grid.delta_b_over_omega_c.len();
    let points = (0..grid.power_b_mw.len() * nd)
        .into_par_iter()
        .map(|idx| {
            let (pb, db) = (grid.power_b_mw[idx / nd], grid.delta_b_over_omega_c[idx % nd]);
            let mut p = *base;
            p.power_b_mw = pb;
            p.detuning_b_rad_per_s = db * p.omega_c_rad_per_s;
            let dd = build_drift_diffusion(&derive_params(&p)?, &p);
            let max_re = dd.max_real_eigenvalue();
            let (e_ab, e_abc) = if dd.is_stable() {
                let (a, c) = three_mode_negativities(&lyapunov_steady(&dd)?)?;
                (Some(a), Some(c))
            } else {
                (None, None)
            };
            Ok(SweepPoint {
                power_b_mw: pb,
                delta_b_over_omega_c: db,
                stable: e_ab.is_some(),
                max_real_eigenvalue: max_re,
                e_ab,
                e_abc,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        grid: grid.clone(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_initial_state_has_no_entanglement() {
        let cfg = DynamicsConfig {
            t_max_omega_c: 1.0,
            ..DynamicsConfig::default()
        };
        let s = optomech_dynamics(&OptomechParams::fig4(40.0), &cfg).unwrap();
        assert_eq!(s.e_ab[0], 0.0);
        assert_eq!(s.e_abc[0], 0.0);
        assert!(s.all_physical());
    }

    #[test]
    fn stable_run_settles_onto_lyapunov_state() {
        let s = optomech_dynamics(&OptomechParams::fig4(40.0), &DynamicsConfig::default()).unwrap();
        assert!(s.stable);
        assert_eq!(s.stop_reason, StopReason::Settled);
        assert!(s.lyapunov_deviation.unwrap() < 1e-8, "{:?}", s.lyapunov_deviation);
        let steady = s.steady.unwrap();
        assert!((s.e_ab.last().unwrap() - steady.e_ab).abs() < 1e-6);
        assert!(s.ab_preceded_by_abc(1e-4));
    }

    #[test]
    fn unstable_run_stops_at_growth_cap() {
        let s = optomech_dynamics(&OptomechParams::fig4(20.0), &DynamicsConfig::default()).unwrap();
        assert!(!s.stable && s.max_real_eigenvalue > 0.0);
        assert_eq!(s.stop_reason, StopReason::GrowthCap);
        assert!(s.steady.is_none());
        assert!(s.all_physical());
    }

    #[test]
    fn zero_power_b_has_no_cavity_entanglement() {
        let mut grid = SweepGrid::uniform(1, 5);
        grid.power_b_mw = vec![0.0];
        let t = sweep_steady_state(&OptomechParams::fig4(0.0), &grid).unwrap();
        for p in t.points.iter().filter(|p| p.stable) {
            assert!(p.e_ab.unwrap() < 1e-12);
        }
    }

    #[test]
    fn sweep_csv_leaves_unstable_cells_empty() {
        let t = sweep_steady_state(&OptomechParams::fig4(0.0), &SweepGrid::uniform(4, 5)).unwrap();
        let csv = t.to_csv();
        let rows: Vec<&str> = csv.lines().skip(2).collect();
        assert_eq!(rows.len(), 20);
        for (row, p) in rows.iter().zip(&t.points) {
            assert_eq!(row.ends_with(",,"), !p.stable);
        }
    }

    #[test]
    fn connected_components_count_four_neighbours() {
        let mk = |stable: bool| SweepPoint {
            power_b_mw: 0.0,
            delta_b_over_omega_c: 0.0,
            stable,
            max_real_eigenvalue: 0.0,
            e_ab: None,
            e_abc: None,
        };
        // 2x2 grid with unstable cells on one diagonal only.
        let t = SweepTable {
            grid: SweepGrid::uniform(2, 2),
            points: vec![mk(false), mk(true), mk(true), mk(false)],
        };
        assert_eq!(t.unstable_components(), 2);
    }
}
