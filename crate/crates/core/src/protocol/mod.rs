//! Entanglement-gain detection of a nonclassical mediator.
//!
//! Two probes A and B interact only through a mediator C via
//! `H = H_AC + H_BC`. If the mediator stays classical (zero one-way deficit
//! with C measured) then `E_{A:BC}` cannot grow, so any gain in `E_{A:B}`
//! after an entanglement-breaking measurement on A reveals discord in C.

mod detection;
mod io;
mod scenario;
mod suite;

pub use detection::{run_detection, sec_detection, DetectionConfig, DetectionReport, GAIN_THRESHOLD};
pub use io::{load_scenario, save_scenario, ScenarioFile};
pub use scenario::{
    instrumental_state, scenario_counterexample, scenario_gain_example, TripartiteScenario,
};
pub use suite::{theorem_property_suite, SuiteConfig, SuiteReport, TrialReport};

pub use crate::measures::Verdict;
