//! Random classical-mediator dynamics never increase E_A:BC. Even trials
//! are closed, odd ones add local Lindblad noise.

use nonclassicality::protocol::{theorem_property_suite, SuiteConfig};

fn main() -> nonclassicality::Result<()> {
    let trials = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(6);
    let report = theorem_property_suite(&SuiteConfig {
        trials,
        samples: 3,
        ..SuiteConfig::default()
    })?;
    for t in &report.results {
        let first = t.e_abc.first().unwrap();
        let last = t.e_abc.last().unwrap();
        println!(
            "trial {:>2} {:<6} E_A:BC {:.5} -> {:.5}  max D {:.1e}  {}",
            t.index,
            if t.open { "open" } else { "closed" },
            first.upper,
            last.upper,
            t.discord.iter().cloned().fold(0.0, f64::max),
            if t.violations.is_empty() { "ok" } else { "VIOLATION" }
        );
    }
    println!("violating trials: {}/{}", report.violating_trials, report.trials);
    Ok(())
}
