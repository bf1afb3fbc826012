//! First-order splitting error halves when the step count doubles, and
//! vanishes for commuting couplings.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nonclassicality::dynamics::{evolve_closed, trotter_evolve};
use nonclassicality::protocol::scenario_gain_example;
use nonclassicality::quantum::random::{hermitian, wishart};
use nonclassicality::quantum::{identity, kron, trace_distance, DensityMatrix, SystemDims};

fn main() -> nonclassicality::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let dims = SystemDims::qubits(&["A", "C", "B"]);
    // Ordering A, C, B puts both couplings on adjacent factors.
    let h_ac = kron(&hermitian(4, &mut rng), &identity(2));
    let h_bc = kron(&identity(2), &hermitian(4, &mut rng));
    let rho = DensityMatrix::new(wishart(8, 8, &mut rng), dims)?;
    let exact = evolve_closed(&rho, &(&h_ac + &h_bc), 1.0)?;

    let mut previous = None;
    for n in [1, 2, 4, 8, 16, 32, 64, 128] {
        let err = trace_distance(trotter_evolve(&rho, &h_ac, &h_bc, 1.0, n)?.matrix(), exact.matrix());
        match previous {
            Some(p) => println!("n = {n:>3}  error = {err:.3e}  ratio = {:.3}", p / err),
            None => println!("n = {n:>3}  error = {err:.3e}"),
        }
        previous = Some(err);
    }

    let s = scenario_gain_example();
    let exact = evolve_closed(&s.rho0, &s.hamiltonian(), PI / 4.0)?;
    let one = trotter_evolve(&s.rho0, &s.h_ac, &s.h_bc, PI / 4.0, 1)?;
    println!("commuting couplings, n = 1: error = {:.1e}", trace_distance(one.matrix(), exact.matrix()));
    Ok(())
}
