//! Random states and operators for property tests and the theorem suite.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{CMatrix, CVector};
use num_complex::Complex64;

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `rows x cols` matrix of i.i.d. standard complex Gaussians.
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unitary (QR of a Ginibre matrix with phase correction).
pub fn haar_unitary(d: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = ginibre(d, d, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        let phase = r[(k, k)] / r[(k, k)].norm();
        for i in 0..d {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Haar-random unit vector.
pub fn haar_pure(d: usize, rng: &mut impl Rng) -> CVector {
    let v = CVector::from_fn(d, |_, _| gaussian(rng));
    let n = v.norm();
    v.unscale(n)
}

/// Trace-normalized Wishart matrix `G G^dagger / Tr` with `G` of shape `d x rank`.
pub fn wishart(d: usize, rank: usize, rng: &mut impl Rng) -> CMatrix {
    let g = ginibre(d, rank, rng);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    w.unscale(tr)
}

/// Hermitian matrix `(G + G^dagger)/2` with Ginibre `G`.
pub fn hermitian(d: usize, rng: &mut impl Rng) -> CMatrix {
    let g = ginibre(d, d, rng);
    (&g + g.adjoint()).unscale(2.0)
}
