//! Werner-type family p|psi-><psi-| + (1-p) I/4: log-negativity, the
//! relative entropy of entanglement bracket against its closed form, and
//! the one-way deficit.

use nonclassicality::measures::{
    discord_deficit, log_negativity, ree, ree_bell_diagonal, Bipartition, DiscordConfig, ReeConfig,
};
use nonclassicality::quantum::pauli::{projector, psi_minus};
use nonclassicality::quantum::{DensityMatrix, SystemDims};

fn main() -> nonclassicality::Result<()> {
    let dims = SystemDims::qubits(&["A", "B"]);
    let singlet = DensityMatrix::new(projector(&psi_minus()), dims.clone())?;
    let mixed = DensityMatrix::maximally_mixed(dims);
    let part = Bipartition::new(&["A"], &["B"]);

    println!("{:>5} {:>8} {:>20} {:>9} {:>9}", "p", "E_N", "REE bracket", "closed", "D_A|B");
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let rho = DensityMatrix::mixture(&[(p, &singlet), (1.0 - p, &mixed)])?;
        let r = ree(&rho, &part, &ReeConfig::default())?;
        println!(
            "{p:>5.1} {:>8.5} [{:>8.5}, {:>8.5}] {:>9.5} {:>9.5}",
            log_negativity(&rho, &part)?,
            r.lower_bound,
            r.value,
            ree_bell_diagonal(&rho)?,
            discord_deficit(&rho, "B", &DiscordConfig::default())?.value
        );
    }
    Ok(())
}
