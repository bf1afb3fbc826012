//! Moving C from B's side to A's side changes the entanglement by at most
//! the discord of C: |E_A:BC - E_AC:B| <= D_AB|C.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nonclassicality::measures::{check_relocation_bound, DiscordConfig, ReeConfig};
use nonclassicality::quantum::pauli::{bits, projector};
use nonclassicality::quantum::random::wishart;
use nonclassicality::quantum::{DensityMatrix, SystemDims};

fn main() -> nonclassicality::Result<()> {
    let dims = SystemDims::qubits(&["A", "B", "C"]);
    let ghz = (bits("000") + bits("111")).unscale(2f64.sqrt());
    let mut states = vec![("GHZ", DensityMatrix::new(projector(&ghz), dims.clone())?)];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for rank in [1, 2, 4, 8] {
        states.push(("random", DensityMatrix::new(wishart(8, rank, &mut rng), dims.clone())?));
    }

    println!("{:<8} {:>9} {:>9} {:>9} {:>6}", "state", "E_A:BC", "E_AC:B", "D_AB|C", "holds");
    for (name, rho) in &states {
        let r = check_relocation_bound(rho, &ReeConfig::default(), &DiscordConfig::default())?;
        println!(
            "{name:<8} {:>9.5} {:>9.5} {:>9.5} {:>6}",
            r.e_a_bc.midpoint(),
            r.e_ac_b.midpoint(),
            r.discord,
            r.holds
        );
    }
    Ok(())
}
