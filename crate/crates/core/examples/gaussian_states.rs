//! Covariance-matrix basics: symplectic spectra and log-negativity of a
//! two-mode squeezed vacuum mixed with thermal noise.

use nonclassicality::gaussian::{log_negativity_gaussian, CovarianceState, RMatrix};

fn squeezed(r: f64, noise: f64) -> nonclassicality::Result<CovarianceState> {
    let (c, s) = ((2.0 * r).cosh() * 0.5, (2.0 * r).sinh() * 0.5);
    let mut v = RMatrix::identity(4, 4) * (c + noise);
    for (i, j, val) in [(0, 2, s), (1, 3, -s)] {
        v[(i, j)] = val;
        v[(j, i)] = val;
    }
    CovarianceState::new(v)
}

fn main() -> nonclassicality::Result<()> {
    println!("{:>5} {:>6} {:>22} {:>8}", "r", "noise", "symplectic spectrum", "E_N");
    for r in [0.0, 0.25, 0.5, 1.0] {
        for noise in [0.0, 0.5, 2.0] {
            let v = squeezed(r, noise)?;
            let nu = v.symplectic_eigenvalues();
            println!(
                "{r:>5.2} {noise:>6.1} [{:>9.4}, {:>9.4}] {:>8.4}",
                nu[0],
                nu[1],
                log_negativity_gaussian(&v, 1)?
            );
        }
    }
    Ok(())
}
