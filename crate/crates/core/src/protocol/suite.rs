use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::detection::{evaluate, trajectory};
use super::{DetectionConfig, ScenarioFile, TripartiteScenario};
use crate::dynamics::JumpOperator;
use crate::error::{Error, Result};
use crate::measures::{Bracket, PURITY_THRESHOLD};
use crate::quantum::random::{ginibre, haar_unitary, hermitian, wishart};
use crate::quantum::{
    identity, kron_all, partial_trace, von_neumann_entropy, CMatrix, DensityMatrix, SystemDims,
};

/// Discord above this at any sample means the construction failed.
pub const DISCORD_TOL: f64 = 1e-6;
/// Extra slack on entanglement comparisons.
pub const COMPARISON_TOL: f64 = 1e-6;
/// Additional slack for integrated (open) trajectories.
pub const INTEGRATOR_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    /// Sample times per trial, including `t = 0`.
    pub samples: usize,
    pub detection: DetectionConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: 50,
            seed: 7,
            samples: 4,
            detection: DetectionConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialReport {
    pub index: usize,
    pub open: bool,
    pub times: Vec<f64>,
    pub e_ab: Vec<Bracket>,
    pub e_abc: Vec<Bracket>,
    pub discord: Vec<f64>,
    /// `S_A(0) + S_B(0)`.
    pub purity_bound: f64,
    pub violations: Vec<String>,
    /// Present only for violating trials.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scenario: Option<ScenarioFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub violating_trials: usize,
    pub results: Vec<TrialReport>,
}

impl SuiteReport {
    /// One row per trial and sample; violations are `;`-joined.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "# t in inverse coupling units (hbar = 1); entanglement, discord and purity bound in bits\n\
             trial,open,t,e_ab_lo,e_ab_hi,e_abc_lo,e_abc_hi,d_ab_c,purity_bound,violations\n",
        );
        for r in &self.results {
            let violations = r.violations.join("; ").replace(',', " ");
            for i in 0..r.times.len() {
                let _ = writeln!(
                    out,
                    "{},{},{:.10},{:.10},{:.10},{:.10},{:.10},{:.10},{:.10},{}",
                    r.index,
                    r.open,
                    r.times[i],
                    r.e_ab[i].lower,
                    r.e_ab[i].upper,
                    r.e_abc[i].lower,
                    r.e_abc[i].upper,
                    r.discord[i],
                    r.purity_bound,
                    violations,
                );
            }
        }
        out
    }
}

fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64 + 1).wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Random scenario whose couplings and dissipators are block diagonal in a
/// fixed mediator basis, starting from a state classical in that basis.
/// Even indices are closed, odd indices carry jump operators.
fn classical_preserving_scenario(seed: u64, index: usize, samples: usize) -> TripartiteScenario {
    let mut rng = trial_rng(seed, index);
    let dims = SystemDims::qubits(&["A", "B", "C"]);
    let u = haar_unitary(2, &mut rng);
    let proj: Vec<CMatrix> = (0..2)
        .map(|c| {
            let v = u.column(c).into_owned();
            &v * v.adjoint()
        })
        .collect();
    let id = identity(2);

    let energies = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
    let h_c = &proj[0] * Complex64::from(energies[0])
        + &proj[1] * Complex64::from(energies[1]);
    let mut h_ac = kron_all(&[id.clone(), id.clone(), h_c]);
    let mut h_bc = CMatrix::zeros(8, 8);
    for p in &proj {
        h_ac += kron_all(&[hermitian(2, &mut rng), id.clone(), p.clone()]);
        h_bc += kron_all(&[id.clone(), hermitian(2, &mut rng), p.clone()]);
    }

    let weight: f64 = rng.random_range(0.2..0.8);
    let mut m = CMatrix::zeros(8, 8);
    for (p, w) in proj.iter().zip([weight, 1.0 - weight]) {
        let rank = rng.random_range(1..=2);
        m += crate::quantum::kron(&wishart(4, rank, &mut rng), p).scale(w);
    }
    let rho0 = DensityMatrix::new(m, dims).expect("convex mixture of states");

    let open = index % 2 == 1;
    let jumps = if open {
        vec![
            JumpOperator::new("A", ginibre(2, 2, &mut rng), rng.random_range(0.05..0.3)),
            JumpOperator::new("B", ginibre(2, 2, &mut rng), rng.random_range(0.05..0.3)),
            JumpOperator::new("C", proj[0].clone(), rng.random_range(0.05..0.3)),
        ]
    } else {
        Vec::new()
    };
    let t_end: f64 = rng.random_range(0.5..2.0);
    let n = samples.max(2);
    TripartiteScenario {
        name: format!("trial-{index}"),
        rho0,
        h_ac,
        h_bc,
        jumps,
        breaking_basis: None,
        sample_times: (0..n).map(|k| t_end * k as f64 / (n - 1) as f64).collect(),
    }
}

fn run_trial(cfg: &SuiteConfig, index: usize) -> Result<TrialReport> {
    let s = classical_preserving_scenario(cfg.seed, index, cfg.samples);
    s.validate()?;
    let open = !s.jumps.is_empty();
    let mut diagnostics = Vec::new();
    let (times, states) = trajectory(&s, &s.rho0, cfg.detection.max_dt, &mut diagnostics)?;
    let samples = states
        .iter()
        .map(|rho| evaluate(rho, &cfg.detection.ree, &cfg.detection.discord))
        .collect::<Result<Vec<_>>>()?;

    let sa = von_neumann_entropy(&partial_trace(&s.rho0, &["A"])?);
    let sb = von_neumann_entropy(&partial_trace(&s.rho0, &["B"])?);
    let purity_bound = sa + sb;
    let tol = COMPARISON_TOL + if open { INTEGRATOR_TOL } else { 0.0 };

    let mut violations = Vec::new();
    let e0 = samples[0].e_abc;
    for (k, (t, smp)) in times.iter().zip(&samples).enumerate() {
        if smp.discord >= DISCORD_TOL {
            violations.push(format!("t = {t}: discord {:.3e} is not zero", smp.discord));
        }
        let e = smp.e_abc;
        if !open && (e.upper - e0.upper).abs() > e.width() + e0.width() + tol {
            violations.push(format!(
                "t = {t}: E_A:BC changed from {:.6} to {:.6} under closed dynamics",
                e0.upper, e.upper
            ));
        }
        if k > 0 {
            let prev = samples[k - 1].e_abc;
            if e.upper - prev.upper > e.width() + prev.width() + tol {
                violations.push(format!(
                    "t = {t}: E_A:BC increased from {:.6} to {:.6}",
                    prev.upper, e.upper
                ));
            }
        }
        if smp.e_ab.upper > e.upper + smp.e_ab.width() + e.width() + tol {
            violations.push(format!(
                "t = {t}: E_A:B = {:.6} exceeds E_A:BC = {:.6}",
                smp.e_ab.upper, e.upper
            ));
        }
        if e.upper > e0.upper + e.width() + e0.width() + tol {
            violations.push(format!(
                "t = {t}: E_A:BC = {:.6} exceeds its initial value {:.6}",
                e.upper, e0.upper
            ));
        }
        if smp.e_ab.upper > purity_bound + PURITY_THRESHOLD {
            violations.push(format!(
                "t = {t}: E_A:B = {:.6} exceeds S_A(0) + S_B(0) = {purity_bound:.6}",
                smp.e_ab.upper
            ));
        }
    }
    let scenario = (!violations.is_empty()).then(|| ScenarioFile::from(&s));
    Ok(TrialReport {
        index,
        open,
        times,
        e_ab: samples.iter().map(|smp| smp.e_ab).collect(),
        e_abc: samples.iter().map(|smp| smp.e_abc).collect(),
        discord: samples.iter().map(|smp| smp.discord).collect(),
        purity_bound,
        violations,
        scenario,
    })
}

/// Random classical-mediator trials checking that `E_{A:BC}` is constant
/// (closed) or non-increasing (open), the chain
/// `E_{A:B}(t) <= E_{A:BC}(t) <= E_{A:BC}(0)`, and the purity bound
/// `E_{A:B}(t) <= S_A(0) + S_B(0)`, all on bracket edges.
pub fn theorem_property_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let results = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    let violating_trials = results.iter().filter(|r| !r.violations.is_empty()).count();
    Ok(SuiteReport {
        seed: cfg.seed,
        trials: cfg.trials,
        passed: violating_trials == 0,
        violating_trials,
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_are_rejected() {
        let cfg = SuiteConfig {
            trials: 0,
            ..SuiteConfig::default()
        };
        assert!(matches!(theorem_property_suite(&cfg), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn generated_scenarios_are_valid_and_alternate() {
        for i in 0..4 {
            let s = classical_preserving_scenario(3, i, 4);
            s.validate().unwrap();
            assert_eq!(s.jumps.is_empty(), i % 2 == 0);
            assert_eq!(s.sample_times.len(), 4);
        }
    }

    #[test]
    fn small_suite_passes() {
        let cfg = SuiteConfig {
            trials: 2,
            seed: 11,
            samples: 3,
            ..SuiteConfig::default()
        };
        let r = theorem_property_suite(&cfg).unwrap();
        assert!(r.passed, "{:#?}", r.results);
        assert!(r.results.iter().all(|t| t.scenario.is_none()));
    }
}
