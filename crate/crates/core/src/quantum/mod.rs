//! Finite-dimensional multipartite states and the linear algebra shared by
//! every other module.
//!
//! Matrices are dense `DMatrix<Complex64>`. Subsystems are addressed by label
//! and tensor factors are ordered exactly as listed in [`SystemDims`]: the
//! first label is the most significant digit of a basis index.
//!
//! All entropies here are in bits.

mod basis;
mod dims;
mod entropy;
mod expm;
mod ops;
pub mod random;
mod state;

pub use basis::{dephase, MeasurementBasis};
pub use dims::SystemDims;
pub use entropy::{binary_entropy, relative_entropy, von_neumann_entropy, EIGEN_CUTOFF};
pub use expm::{hermitian_exp, hermitian_function};
pub use ops::{
    commutator, embed, hermitian_deviation, identity, kron, kron_all, partial_trace,
    partial_transpose, partial_transpose_matrix, permute_subsystems, trace_distance, trace_norm,
};
pub use state::{DensityMatrix, HERMITIAN_TOL, NEGATIVITY_TOL, TRACE_TOL};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pauli matrices and a few fixed states used throughout the crate.
pub mod pauli {
    use super::{CMatrix, CVector, I, ONE, ZERO};

    pub fn x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    pub fn y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }

    /// Computational basis ket `|index>` in dimension `dim`.
    pub fn ket(dim: usize, index: usize) -> CVector {
        let mut v = CVector::zeros(dim);
        v[index] = ONE;
        v
    }

    /// Ket of a bit string such as `"011"`, qubits ordered left to right.
    pub fn bits(s: &str) -> CVector {
        let n = s.len();
        let index = s
            .chars()
            .fold(0usize, |acc, c| (acc << 1) | usize::from(c == '1'));
        ket(1 << n, index)
    }

    pub fn plus() -> CVector {
        (ket(2, 0) + ket(2, 1)).unscale(2f64.sqrt())
    }

    pub fn minus() -> CVector {
        (ket(2, 0) - ket(2, 1)).unscale(2f64.sqrt())
    }

    /// (|00> + |11>)/sqrt(2)
    pub fn phi_plus() -> CVector {
        (bits("00") + bits("11")).unscale(2f64.sqrt())
    }

    /// (|00> - |11>)/sqrt(2)
    pub fn phi_minus() -> CVector {
        (bits("00") - bits("11")).unscale(2f64.sqrt())
    }

    /// (|01> + |10>)/sqrt(2)
    pub fn psi_plus() -> CVector {
        (bits("01") + bits("10")).unscale(2f64.sqrt())
    }

    /// (|01> - |10>)/sqrt(2)
    pub fn psi_minus() -> CVector {
        (bits("01") - bits("10")).unscale(2f64.sqrt())
    }

    pub fn projector(v: &CVector) -> CMatrix {
        v * v.adjoint()
    }
}

#[cfg(test)]
mod tests;
