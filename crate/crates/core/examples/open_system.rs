//! Dephasing the mediator during the gain example: the Lindblad trajectory
//! and the resulting entanglement brackets.

use nonclassicality::dynamics::{evolve_lindblad, JumpOperator, LindbladModel};
use nonclassicality::measures::{ree, Bipartition, ReeConfig};
use nonclassicality::protocol::scenario_gain_example;
use nonclassicality::quantum::pauli::z;

fn main() -> nonclassicality::Result<()> {
    let s = scenario_gain_example();
    for rate in [0.0, 0.2, 1.0] {
        let jumps = if rate > 0.0 { vec![JumpOperator::new("C", z(), rate)] } else { Vec::new() };
        let model = LindbladModel::new(s.dims().clone(), s.hamiltonian(), jumps)?;
        let traj = evolve_lindblad(&s.rho0, &model, std::f64::consts::FRAC_PI_4, 1e-3)?;
        let end = traj.states.last().unwrap();
        let e = ree(end, &Bipartition::new(&["A"], &["B", "C"]), &ReeConfig::default())?;
        println!(
            "gamma_C = {rate:.1}: E_A:BC(pi/4) in [{:.4}, {:.4}], purity {:.4}, trace drift {:.1e}",
            e.lower_bound,
            e.value,
            end.purity(),
            traj.max_trace_drift
        );
    }
    Ok(())
}
