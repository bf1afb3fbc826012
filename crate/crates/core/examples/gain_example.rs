//! Entanglement between A and the pair BC grows from 0 to 1 bit while the
//! mediator C carries discord only in between.

use std::f64::consts::PI;

use nonclassicality::dynamics::evolve_closed;
use nonclassicality::measures::{coherent_information, discord_deficit, Bipartition};
use nonclassicality::protocol::{
    instrumental_state, scenario_gain_example, sec_detection, DetectionConfig,
};

fn main() -> nonclassicality::Result<()> {
    let s = scenario_gain_example();
    let cfg = DetectionConfig::default();
    let report = sec_detection(&s, &cfg)?;

    println!("{:>8} {:>22} {:>10}", "t", "E_A:BC bracket", "D_AB|C");
    for i in 0..report.times.len() {
        let b = report.e_abc[i];
        println!(
            "{:>8.4} [{:>9.6}, {:>9.6}] {:>10.6}",
            report.times[i], b.lower, b.upper, report.d_ab_given_c[i]
        );
    }

    let end = evolve_closed(&s.rho0, &s.hamiltonian(), PI / 4.0)?;
    let ci = coherent_information(&end, &Bipartition::new(&["A"], &["B", "C"]))?;
    println!("coherent information S(BC) - S(ABC) at pi/4: {ci:.6}");

    let d_prime = discord_deficit(&instrumental_state(&s, PI / 4.0)?, "C", &cfg.discord)?;
    println!("instrumental-state discord D'_AB|C: {:.6}", d_prime.value);
    Ok(())
}
