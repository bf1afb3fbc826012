use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type RMatrix = DMatrix<f64>;

/// Relative symmetry tolerance for covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// `2ν >= 1 - PHYSICALITY_TOL` for every symplectic eigenvalue.
pub const PHYSICALITY_TOL: f64 = 1e-8;

/// Modes of the three-mode system in quadrature order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    A,
    B,
    C,
}

impl Mode {
    pub fn index(self) -> usize {
        self as usize
    }
}

fn max_abs(m: &RMatrix) -> f64 {
    m.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Symmetric covariance matrix in the order `(x_1, p_1, x_2, p_2, ...)`
/// with vacuum equal to `I/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceState {
    v: RMatrix,
}

impl CovarianceState {
    /// Checks shape, symmetry and physicality.
    pub fn new(v: RMatrix) -> Result<Self> {
        let s = Self::symmetric(v)?;
        let two_nu = s.min_two_nu();
        if two_nu < 1.0 - PHYSICALITY_TOL {
            return Err(Error::Unphysical {
                two_nu_min: two_nu,
                time: f64::NAN,
            });
        }
        Ok(s)
    }

    /// Checks shape and symmetry only (partial transposes are unphysical).
    pub fn symmetric(v: RMatrix) -> Result<Self> {
        if v.nrows() != v.ncols() || !v.nrows().is_multiple_of(2) || v.nrows() == 0 {
            return Err(Error::InvalidDims(format!(
                "covariance matrix must be square of even size, got {}x{}",
                v.nrows(),
                v.ncols()
            )));
        }
        let deviation = max_abs(&(&v - v.transpose()));
        if deviation > SYMMETRY_TOL * max_abs(&v).max(1.0) {
            return Err(Error::NotSymmetric { deviation });
        }
        let v = (&v + v.transpose()) * 0.5;
        Ok(Self { v })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            v: RMatrix::identity(2 * modes, 2 * modes) * 0.5,
        }
    }

    /// Vacuum cavities and a thermal membrane with `n̄` phonons.
    pub fn initial(n_bar: f64) -> Self {
        let mut v = RMatrix::identity(6, 6) * 0.5;
        v[(4, 4)] = n_bar + 0.5;
        v[(5, 5)] = n_bar + 0.5;
        Self { v }
    }

    pub(crate) fn from_raw(v: RMatrix) -> Self {
        Self { v }
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.v
    }

    pub fn modes(&self) -> usize {
        self.v.nrows() / 2
    }

    /// Covariance of the listed modes.
    pub fn submatrix(&self, modes: &[usize]) -> Result<Self> {
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.v.nrows()) {
            return Err(Error::InvalidArgument(format!("mode {} out of range", bad / 2)));
        }
        Ok(Self {
            v: RMatrix::from_fn(idx.len(), idx.len(), |i, j| self.v[(idx[i], idx[j])]),
        })
    }

    /// Flips the sign of the momentum of `mode`.
    pub fn partial_transpose(&self, mode: usize) -> Self {
        let k = 2 * mode + 1;
        let mut v = self.v.clone();
        for i in 0..v.nrows() {
            if i != k {
                v[(i, k)] = -v[(i, k)];
                v[(k, i)] = -v[(k, i)];
            }
        }
        Self { v }
    }

    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic_eigenvalues(&self.v)
    }

    pub fn min_two_nu(&self) -> f64 {
        2.0 * self.symplectic_eigenvalues()[0]
    }
}

fn omega(n: usize) -> RMatrix {
    let mut o = RMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        o[(2 * k, 2 * k + 1)] = 1.0;
        o[(2 * k + 1, 2 * k)] = -1.0;
    }
    o
}

/// Moduli of the eigenvalues of `i Ω V`, one per mode, ascending.
pub fn symplectic_eigenvalues(v: &RMatrix) -> Vec<f64> {
    let n = v.nrows() / 2;
    let mut moduli: Vec<f64> = (omega(n) * v)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect();
    moduli.sort_by(f64::total_cmp);
    moduli.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// `max(0, -ln 2ν̃_min)` after transposing the single mode `mode`; natural
/// log. Exact for a one-versus-rest split.
pub fn log_negativity_gaussian(v: &CovarianceState, mode: usize) -> Result<f64> {
    if mode >= v.modes() {
        return Err(Error::InvalidArgument(format!("mode {mode} out of range")));
    }
    let nu = v.partial_transpose(mode).symplectic_eigenvalues()[0];
    Ok((-(2.0 * nu).ln()).max(0.0))
}

/// `E_{a:b}` from the two-cavity block and `E_{ab:c}` from the full state.
pub fn three_mode_negativities(v: &CovarianceState) -> Result<(f64, f64)> {
    let ab = v.submatrix(&[Mode::A.index(), Mode::B.index()])?;
    Ok((
        log_negativity_gaussian(&ab, 1)?,
        log_negativity_gaussian(v, Mode::C.index())?,
    ))
}
