use super::Bipartition;
use crate::error::Result;
use crate::quantum::{partial_transpose_matrix, trace_norm, DensityMatrix};

/// `log2 || rho^{T_right} ||_1`.
pub fn log_negativity(rho: &DensityMatrix, part: &Bipartition) -> Result<f64> {
    part.validate(rho.dims())?;
    let mut m = rho.matrix().clone();
    for label in part.right() {
        m = partial_transpose_matrix(&m, rho.dims(), label)?;
    }
    Ok(trace_norm(&m).log2().max(0.0))
}
