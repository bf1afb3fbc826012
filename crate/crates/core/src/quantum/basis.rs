use super::{embed, CMatrix, CVector, DensityMatrix};
use crate::error::{Error, Result};

/// Orthonormal basis of one labelled subsystem, used for von Neumann
/// measurements with unread outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    subsystem: String,
    vectors: Vec<CVector>,
}

const ORTHONORMAL_TOL: f64 = 1e-10;

impl MeasurementBasis {
    pub fn new(subsystem: impl Into<String>, vectors: Vec<CVector>) -> Result<Self> {
        let n = vectors.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty measurement basis".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: v.len(),
            });
        }
        let mut deviation = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let ip = vectors[i].dotc(&vectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                deviation = deviation.max((ip - target).norm());
            }
        }
        if deviation > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self {
            subsystem: subsystem.into(),
            vectors,
        })
    }

    /// Basis given by the columns of a unitary.
    pub fn from_unitary(subsystem: impl Into<String>, u: &CMatrix) -> Result<Self> {
        let vectors = (0..u.ncols()).map(|k| u.column(k).into_owned()).collect();
        Self::new(subsystem, vectors)
    }

    pub fn computational(subsystem: impl Into<String>, dim: usize) -> Self {
        Self::from_unitary(subsystem, &CMatrix::identity(dim, dim)).expect("identity is unitary")
    }

    pub fn subsystem(&self) -> &str {
        &self.subsystem
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn projectors(&self) -> Vec<CMatrix> {
        self.vectors.iter().map(|v| v * v.adjoint()).collect()
    }
}

/// Unread projective measurement: `sum_c (P_c (x) 1) rho (P_c (x) 1)`.
pub fn dephase(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<DensityMatrix> {
    let dims = rho.dims();
    let d = dims.dim_of(basis.subsystem())?;
    if d != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: basis.dim(),
        });
    }
    let m = rho.matrix();
    let mut out = CMatrix::zeros(m.nrows(), m.ncols());
    for p in basis.projectors() {
        let full = embed(&p, basis.subsystem(), dims)?;
        out += &full * m * &full;
    }
    let out = (&out + out.adjoint()).unscale(2.0);
    Ok(DensityMatrix::from_parts_unchecked(out, dims.clone()))
}
