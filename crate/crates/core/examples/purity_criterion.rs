//! Without mediator discord, E_A:B can never exceed S_A(0) + S_B(0). Pure
//! probes therefore turn any observed entanglement into a detection.

use nonclassicality::dynamics::evolve_closed;
use nonclassicality::measures::{purity_criterion, ree, Bipartition, ReeConfig};
use nonclassicality::quantum::pauli::{bits, x, y};
use nonclassicality::quantum::{embed, partial_trace, DensityMatrix, SystemDims};

fn main() -> nonclassicality::Result<()> {
    let dims = SystemDims::qubits(&["A", "B", "C"]);
    let hop = |p: &str| {
        let xx = embed(&x(), p, &dims).unwrap() * embed(&x(), "C", &dims).unwrap();
        let yy = embed(&y(), p, &dims).unwrap() * embed(&y(), "C", &dims).unwrap();
        (xx + yy).unscale(2.0)
    };
    let h = hop("A") + hop("B");

    let pure = DensityMatrix::from_pure(&bits("100"), dims.clone())?;
    let noisy = DensityMatrix::mixture(&[
        (0.8, &pure),
        (0.2, &DensityMatrix::maximally_mixed(dims.clone())),
    ])?;
    for (name, rho0) in [("pure probes", pure), ("noisy probes", noisy)] {
        let rho_ab = partial_trace(&evolve_closed(&rho0, &h, 1.1)?, &["A", "B"])?;
        let e = ree(&rho_ab, &Bipartition::new(&["A"], &["B"]), &ReeConfig::default())?;
        let report = purity_criterion(&rho0, e.lower_bound)?;
        println!(
            "{name:<13} bound {:.4}  E_A:B >= {:.4}  {}",
            report.bound, report.e_ab_tau, report.verdict
        );
    }
    Ok(())
}
