use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TripartiteScenario;
use crate::dynamics::{default_dt, evolve_closed, evolve_lindblad_at, LindbladModel};
use crate::error::Result;
use crate::measures::{
    discord_deficit, ree, Bipartition, Bracket, DiscordConfig, ReeConfig, Verdict,
};
use crate::quantum::{dephase, partial_trace, DensityMatrix};

/// Bracket-separated gain in `E_{A:B}` needed for a detection.
pub const GAIN_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    pub ree: ReeConfig,
    pub discord: DiscordConfig,
    /// Largest Lindblad step; defaults to the last sample time / 2000.
    pub max_dt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub scenario: String,
    pub times: Vec<f64>,
    /// `E_{A:B}` brackets in bits.
    pub e_ab: Vec<Bracket>,
    /// `E_{A:BC}` brackets in bits.
    pub e_abc: Vec<Bracket>,
    /// `D_{AB|C}` in bits.
    pub d_ab_given_c: Vec<f64>,
    pub verdict: Verdict,
    /// `max_t e_ab(t).lower - e_ab(0).upper`.
    pub gain: f64,
    pub max_discord: f64,
    pub converged: bool,
    pub diagnostics: Vec<String>,
}

impl DetectionReport {
    /// One row per sample time, preceded by a units comment and a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "# t in inverse coupling units (hbar = 1); entanglement and discord in bits\n\
             t,e_ab_lo,e_ab_hi,e_abc_lo,e_abc_hi,d_ab_c\n",
        );
        for i in 0..self.times.len() {
            let _ = writeln!(
                out,
                "{:.10},{:.10},{:.10},{:.10},{:.10},{:.10}",
                self.times[i],
                self.e_ab[i].lower,
                self.e_ab[i].upper,
                self.e_abc[i].lower,
                self.e_abc[i].upper,
                self.d_ab_given_c[i],
            );
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

pub(crate) struct Sample {
    pub e_ab: Bracket,
    pub e_abc: Bracket,
    pub discord: f64,
    pub converged: bool,
}

pub(crate) fn evaluate(rho: &DensityMatrix, ree_cfg: &ReeConfig, d_cfg: &DiscordConfig) -> Result<Sample> {
    let rho_ab = partial_trace(rho, &["A", "B"])?;
    let ab = ree(&rho_ab, &Bipartition::new(&["A"], &["B"]), ree_cfg)?;
    let abc = ree(rho, &Bipartition::new(&["A"], &["B", "C"]), ree_cfg)?;
    let d = discord_deficit(rho, "C", d_cfg)?;
    Ok(Sample {
        e_ab: ab.bracket(),
        e_abc: abc.bracket(),
        discord: d.value,
        converged: ab.converged && abc.converged && d.converged,
    })
}

/// States at the sample times, with 0 prepended when missing.
pub(crate) fn trajectory(
    s: &TripartiteScenario,
    start: &DensityMatrix,
    max_dt: Option<f64>,
    diagnostics: &mut Vec<String>,
) -> Result<(Vec<f64>, Vec<DensityMatrix>)> {
    let mut times = s.sample_times.clone();
    if times[0] > 0.0 {
        times.insert(0, 0.0);
    }
    let h = s.hamiltonian();
    let t_max = *times.last().expect("non-empty");
    if s.jumps.is_empty() || t_max == 0.0 {
        let states = times
            .iter()
            .map(|&t| evolve_closed(start, &h, t))
            .collect::<Result<_>>()?;
        return Ok((times, states));
    }
    let model = LindbladModel::new(s.dims().clone(), h, s.jumps.clone())?;
    let dt = max_dt.unwrap_or_else(|| default_dt(t_max));
    let traj = evolve_lindblad_at(start, &model, &times, dt)?;
    if traj.max_clipped > 0.0 {
        diagnostics.push(format!(
            "clipped negative eigenvalues up to {:.3e} from integrated states",
            traj.max_clipped
        ));
    }
    Ok((times, traj.states))
}

fn pipeline(
    s: &TripartiteScenario,
    apply_breaking: bool,
    cfg: &DetectionConfig,
) -> Result<DetectionReport> {
    s.validate()?;
    let mut diagnostics = Vec::new();
    let start = match (&s.breaking_basis, apply_breaking) {
        (Some(b), true) => dephase(&s.rho0, b)?,
        _ => s.rho0.clone(),
    };
    let (times, states) = trajectory(s, &start, cfg.max_dt, &mut diagnostics)?;
    let samples: Vec<Sample> = states
        .par_iter()
        .map(|rho| evaluate(rho, &cfg.ree, &cfg.discord))
        .collect::<Result<_>>()?;

    for (t, smp) in times.iter().zip(&samples) {
        if !smp.converged {
            diagnostics.push(format!("optimizer did not converge at t = {t}"));
        }
    }
    let converged = samples.iter().all(|smp| smp.converged);
    let reference = samples[0].e_ab.upper;
    let gain = samples
        .iter()
        .map(|smp| smp.e_ab.lower - reference)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_discord = samples.iter().map(|smp| smp.discord).fold(0.0, f64::max);
    let detected = converged && gain > GAIN_THRESHOLD;
    let verdict = match (detected, apply_breaking) {
        (true, true) => Verdict::NonclassicalDetected,
        (true, false) => Verdict::Correlated,
        (false, _) => Verdict::Inconclusive,
    };
    Ok(DetectionReport {
        scenario: s.name.clone(),
        times,
        e_ab: samples.iter().map(|smp| smp.e_ab).collect(),
        e_abc: samples.iter().map(|smp| smp.e_abc).collect(),
        d_ab_given_c: samples.iter().map(|smp| smp.discord).collect(),
        verdict,
        gain,
        max_discord,
        converged,
        diagnostics,
    })
}

/// Applies the breaking measurement on A (if the scenario has one), evolves
/// and looks for a certified gain in `E_{A:B}`.
pub fn run_detection(s: &TripartiteScenario, cfg: &DetectionConfig) -> Result<DetectionReport> {
    pipeline(s, true, cfg)
}

/// Same pipeline without the breaking measurement. A gain then signals
/// either mediator discord or initial correlations between AB and C.
pub fn sec_detection(s: &TripartiteScenario, cfg: &DetectionConfig) -> Result<DetectionReport> {
    pipeline(s, false, cfg)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::protocol::{scenario_counterexample, scenario_gain_example};
    use crate::quantum::{CMatrix, MeasurementBasis};

    #[test]
    fn gain_example_discord_vanishes_at_endpoints_only() {
        let mut s = scenario_gain_example();
        s.sample_times = vec![0.0, PI / 8.0, PI / 4.0];
        let r = run_detection(&s, &DetectionConfig::default()).unwrap();
        assert!(r.d_ab_given_c[0] < 1e-6);
        assert!(r.d_ab_given_c[1] > 0.1, "{}", r.d_ab_given_c[1]);
        assert!(r.d_ab_given_c[2] < 1e-6);
        assert!(r.e_abc[0].contains(0.0, 1e-9) && r.e_abc[0].width() <= 2e-2);
        assert!(r.e_abc[2].contains(1.0, 0.05));
    }

    #[test]
    fn counterexample_with_breaking_measurement_shows_no_gain() {
        let mut s = scenario_counterexample();
        s.breaking_basis = Some(MeasurementBasis::computational("A", 2));
        s.sample_times = s.sample_times.iter().step_by(4).cloned().collect();
        let r = run_detection(&s, &DetectionConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.e_ab.iter().all(|b| b.upper < 2e-2), "{:?}", r.e_ab);
        assert!(r.e_ab[0].lower >= 0.0 && r.e_ab[0].upper <= 2e-2);
    }

    #[test]
    fn counterexample_without_breaking_is_correlated() {
        let mut s = scenario_counterexample();
        s.sample_times = vec![0.0, 0.5];
        let r = sec_detection(&s, &DetectionConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Correlated);
        assert!(r.gain > 0.7);
        assert!(r.max_discord < 1e-6);
    }

    #[test]
    fn trivial_dynamics_keeps_everything_constant() {
        let mut s = scenario_counterexample();
        s.h_ac = CMatrix::zeros(8, 8);
        s.h_bc = CMatrix::zeros(8, 8);
        s.sample_times = vec![0.0, 1.0];
        let r = sec_detection(&s, &DetectionConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!((r.e_abc[0].upper - r.e_abc[1].upper).abs() < 1e-9);
        assert!((r.d_ab_given_c[0] - r.d_ab_given_c[1]).abs() < 1e-9);
    }

    #[test]
    fn zero_is_prepended_to_sample_times() {
        let mut s = scenario_gain_example();
        s.sample_times = vec![PI / 4.0];
        let r = run_detection(&s, &DetectionConfig::default()).unwrap();
        assert_eq!(r.times[0], 0.0);
        assert_eq!(r.times.len(), 2);
        let csv = r.to_csv();
        assert!(csv.starts_with('#'));
        assert_eq!(csv.lines().count(), 4);
    }
}
