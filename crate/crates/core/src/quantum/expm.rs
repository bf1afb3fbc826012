use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{hermitian_deviation, CMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// `f(h)` for Hermitian `h` through its eigendecomposition.
pub fn hermitian_function(h: &CMatrix, f: impl Fn(f64) -> Complex64) -> Result<CMatrix> {
    let deviation = hermitian_deviation(h);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let eig = SymmetricEigen::new((h + h.adjoint()).unscale(2.0));
    let u = &eig.eigenvectors;
    let mut fu = u.clone();
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        let fl = f(l);
        for r in 0..fu.nrows() {
            fu[(r, k)] *= fl;
        }
    }
    Ok(fu * u.adjoint())
}

/// Unitary `exp(-i h t)`.
pub fn hermitian_exp(h: &CMatrix, t: f64) -> Result<CMatrix> {
    hermitian_function(h, |l| Complex64::from_polar(1.0, -l * t))
}
