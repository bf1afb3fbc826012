use nalgebra::SymmetricEigen;

use super::DensityMatrix;
use crate::error::{Error, Result};

/// Eigenvalues at or below this are dropped from `0 log 0` sums.
pub const EIGEN_CUTOFF: f64 = 1e-12;

fn entropy_of_spectrum(ev: impl IntoIterator<Item = f64>) -> f64 {
    let s: f64 = ev
        .into_iter()
        .filter(|&l| l > EIGEN_CUTOFF)
        .map(|l| -l * l.log2())
        .sum();
    s.max(0.0)
}

/// `-Tr rho log2 rho`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(rho.eigenvalues())
}

/// `h(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_of_spectrum([p, 1.0 - p])
}

/// Quantum relative entropy `Tr rho (log2 rho - log2 sigma)` in bits.
///
/// Returns `f64::INFINITY` when the support of `rho` is not contained in the
/// support of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::InvalidDims(
            "relative entropy of states on different spaces".into(),
        ));
    }
    let eig = SymmetricEigen::new(sigma.matrix().clone());
    let u = &eig.eigenvectors;
    let rho_in_sigma_basis = u.adjoint() * rho.matrix() * u;
    let mut cross = 0.0;
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        let weight = rho_in_sigma_basis[(k, k)].re;
        if lam > EIGEN_CUTOFF {
            cross -= weight * lam.log2();
        } else if weight > 1e-10 {
            return Ok(f64::INFINITY);
        }
    }
    Ok((cross - von_neumann_entropy(rho)).max(0.0))
}
