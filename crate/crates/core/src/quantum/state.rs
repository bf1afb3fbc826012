use nalgebra::SymmetricEigen;

use super::{hermitian_deviation, CMatrix, CVector, SystemDims};
use crate::error::{Error, Result};

/// Maximum `|rho - rho^dagger|` entry accepted for a density matrix.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Maximum deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-NEGATIVITY_TOL, 0)` are treated as roundoff.
pub const NEGATIVITY_TOL: f64 = 1e-10;

/// A validated density matrix together with its subsystem structure.
///
/// Construction checks Hermiticity, unit trace and positivity. The stored
/// matrix is exactly Hermitian: the anti-Hermitian roundoff part is removed.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: CMatrix,
    dims: SystemDims,
}

impl DensityMatrix {
    pub fn new(data: CMatrix, dims: SystemDims) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::DimensionMismatch {
                expected: data.nrows(),
                actual: data.ncols(),
            });
        }
        if data.nrows() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                actual: data.nrows(),
            });
        }
        let deviation = hermitian_deviation(&data);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = data.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace });
        }
        let data = (&data + data.adjoint()).unscale(2.0);
        let min = data
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min < -NEGATIVITY_TOL {
            return Err(Error::NotPositive { eigenvalue: min });
        }
        Ok(Self { data, dims })
    }

    /// `|psi><psi|` for a (not necessarily normalized) ket.
    pub fn from_pure(psi: &CVector, dims: SystemDims) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let psi = psi.unscale(norm);
        Self::new(&psi * psi.adjoint(), dims)
    }

    pub fn maximally_mixed(dims: SystemDims) -> Self {
        let d = dims.total();
        let data = CMatrix::identity(d, d).unscale(d as f64);
        Self { data, dims }
    }

    /// Convex mixture `sum_k w_k rho_k` of states sharing the same dims.
    pub fn mixture(terms: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let mut acc = CMatrix::zeros(first.1.dim(), first.1.dim());
        for (w, rho) in terms {
            if rho.dims != first.1.dims {
                return Err(Error::InvalidDims("mixture of states with different dims".into()));
            }
            if *w < 0.0 {
                return Err(Error::InvalidArgument(format!("negative weight {w}")));
            }
            acc += rho.data.scale(*w);
        }
        Self::new(acc, first.1.dims.clone())
    }

    /// Tensor product, concatenating the subsystem lists.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        let mut dims = self.dims.dims().to_vec();
        dims.extend_from_slice(other.dims.dims());
        let mut labels = self.dims.labels().to_vec();
        labels.extend_from_slice(other.dims.labels());
        let dims = SystemDims::new(dims, labels)?;
        Self::new(super::kron(&self.data, &other.data), dims)
    }

    /// Builds a state from a matrix that is PSD up to integration error:
    /// Hermitian part is taken, eigenvalues below zero are clipped and the
    /// trace renormalized. Returns the state and the clipped magnitude.
    pub(crate) fn from_nearly_physical(data: CMatrix, dims: SystemDims) -> Result<(Self, f64)> {
        let h = (&data + data.adjoint()).unscale(2.0);
        let eig = SymmetricEigen::new(h.clone());
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min >= 0.0 {
            let tr = h.trace().re;
            return Ok((Self::new(h.unscale(tr), dims)?, 0.0));
        }
        let clipped = eig.eigenvalues.map(|l| l.max(0.0));
        let sum: f64 = clipped.iter().sum();
        let u = &eig.eigenvectors;
        let mut d = CMatrix::zeros(h.nrows(), h.ncols());
        for (k, &l) in clipped.iter().enumerate() {
            if l > 0.0 {
                let col = u.column(k);
                d += (col * col.adjoint()).scale(l / sum);
            }
        }
        Ok((Self::new(d, dims)?, -min))
    }

    pub(crate) fn from_parts_unchecked(data: CMatrix, dims: SystemDims) -> Self {
        Self { data, dims }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn dims(&self) -> &SystemDims {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Ascending eigenvalues with roundoff negatives clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .data
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .map(|&l| l.max(0.0))
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn purity(&self) -> f64 {
        (&self.data * &self.data).trace().re
    }

    /// Same matrix, relabelled subsystems (dimensions must agree).
    pub fn with_dims(&self, dims: SystemDims) -> Result<Self> {
        if dims.total() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: dims.total(),
            });
        }
        Ok(Self {
            data: self.data.clone(),
            dims,
        })
    }
}
