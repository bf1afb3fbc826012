//! Correlated initial probes: E_A:B rises with zero mediator discord at
//! every time, so a gain alone does not certify a quantum mediator.

use nonclassicality::dynamics::evolve_closed;
use nonclassicality::measures::ree_bell_diagonal;
use nonclassicality::protocol::{scenario_counterexample, sec_detection, DetectionConfig};
use nonclassicality::quantum::partial_trace;

fn main() -> nonclassicality::Result<()> {
    let s = scenario_counterexample();
    let report = sec_detection(&s, &DetectionConfig::default())?;
    let h = s.hamiltonian();

    println!("{:>7} {:>10} {:>10} {:>10} {:>9}", "t", "E_A:B lo", "E_A:B hi", "1-h(lmax)", "D_AB|C");
    for (i, &t) in report.times.iter().enumerate() {
        let rho_ab = partial_trace(&evolve_closed(&s.rho0, &h, t)?, &["A", "B"])?;
        let closed_form = ree_bell_diagonal(&rho_ab)?;
        println!(
            "{t:>7.4} {:>10.6} {:>10.6} {:>10.6} {:>9.1e}",
            report.e_ab[i].lower, report.e_ab[i].upper, closed_form, report.d_ab_given_c[i]
        );
    }
    println!("verdict without breaking measurement: {}", report.verdict);
    Ok(())
}
