//! Relative entropy of entanglement, bracketed from both sides.
//!
//! Upper bound: minimize `S(rho || sigma)` over mixtures of `K` product pure
//! states `sigma ∝ sum_k |x_k><x_k| (x) |y_k><y_k|` (weights absorbed into
//! the vector norms) with L-BFGS from several random starts. The winning
//! `sigma` is separable by construction, so its value is a true upper bound.
//!
//! Lower bound: for any full-rank `sigma0`, convexity of `f(sigma) = S(rho||sigma)`
//! gives `f(sigma) >= f(sigma0) + <G, sigma - sigma0>` with `G` the gradient
//! at `sigma0` and `<G, sigma0> = -1` (nats). For PPT `sigma` and any `Q >= 0`,
//! `<G, sigma> >= lambda_min(G - Q^Γ)`, so
//! `f(sigma0) + 1 + lambda_min(G - Q^Γ)` bounds the PPT-relaxed minimum, and
//! hence the separable one, from below. `Q` is optimized but any `Q` yields
//! a valid bound. The hashing bound (coherent information) is also a valid
//! lower bound and the larger of the two is reported.

use std::f64::consts::LN_2;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Bipartition, Bracket};
use crate::error::{Error, Result};
use crate::optim::{lbfgs, LbfgsConfig};
use crate::quantum::random::ginibre;
use crate::quantum::{
    binary_entropy, partial_trace, permute_subsystems, relative_entropy, von_neumann_entropy,
    CMatrix, CVector, DensityMatrix, ONE, ZERO,
};

/// Largest total dimension accepted by [`ree`].
pub const MAX_REE_DIM: usize = 16;

/// Eigenvalues of the ansatz below this fraction of the largest are treated
/// as zero (the objective is then infinite).
const RANK_FLOOR: f64 = 1e-14;

/// A bracket at most this wide counts as converged even if the iteration
/// cap was hit.
const CERTIFIED_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReeConfig {
    /// Independent random starts of the ansatz optimization.
    pub restarts: usize,
    /// Number of product terms; defaults to `(d_left * d_right)^2`.
    pub components: Option<usize>,
    /// Iteration cap per start.
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for ReeConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            components: None,
            max_iters: 1500,
            seed: 0x5EED_0001,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReeResult {
    /// Upper bound in bits, equal to `S(rho || closest_state)`.
    pub value: f64,
    /// Certified lower bound in bits.
    pub lower_bound: f64,
    /// Explicit separable state attaining `value`.
    pub closest_state: DensityMatrix,
    /// The winning start met its stopping tolerance or the bracket is
    /// narrower than 1e-6.
    pub converged: bool,
    /// Iterations of the winning start.
    pub iterations: usize,
}

impl ReeResult {
    pub fn bracket(&self) -> Bracket {
        Bracket::new(self.lower_bound, self.value)
    }
}

/// Hashing lower bound `max(S(L) - S(LR), S(R) - S(LR), 0)` in bits.
pub fn coherent_information(rho: &DensityMatrix, part: &Bipartition) -> Result<f64> {
    part.validate(rho.dims())?;
    let s = von_neumann_entropy(rho);
    let sl = von_neumann_entropy(&partial_trace(rho, part.left())?);
    let sr = von_neumann_entropy(&partial_trace(rho, part.right())?);
    Ok((sl - s).max(sr - s).max(0.0))
}

/// Dense Hermitian eigendecomposition with ascending order not guaranteed.
fn eigh(m: CMatrix) -> (Vec<f64>, CMatrix) {
    let e = SymmetricEigen::new(m);
    (e.eigenvalues.iter().cloned().collect(), e.eigenvectors)
}

/// Divided differences of `ln` on the spectrum.
fn log_divided_differences(lam: &[f64]) -> Vec<Vec<f64>> {
    let n = lam.len();
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (lam[i], lam[j]);
            g[i][j] = if (a - b).abs() <= 1e-12 * a.max(b) {
                2.0 / (a + b)
            } else {
                (a.ln() - b.ln()) / (a - b)
            };
        }
    }
    g
}

/// Returns `(-Tr rho ln sigma, gradient -Dln_sigma[rho])` for positive
/// definite `sigma`, or `None` if `sigma` is numerically singular.
fn cross_entropy_and_gradient(rho: &CMatrix, sigma: CMatrix) -> Option<(f64, CMatrix)> {
    let (lam, u) = eigh(sigma);
    let lmax = lam.iter().cloned().fold(0.0, f64::max);
    if lam.iter().any(|&l| l <= RANK_FLOOR * lmax) || lmax <= 0.0 {
        return None;
    }
    let rt = u.adjoint() * rho * &u;
    let cross: f64 = -(0..lam.len()).map(|i| rt[(i, i)].re * lam[i].ln()).sum::<f64>();
    let dd = log_divided_differences(&lam);
    let m = CMatrix::from_fn(lam.len(), lam.len(), |i, j| rt[(i, j)] * dd[i][j]);
    let grad = -(&u * m * u.adjoint());
    Some((cross, grad))
}

/// Transposes the right factor of a `dl*dr` square matrix.
fn transpose_right(m: &CMatrix, dl: usize, dr: usize) -> CMatrix {
    let n = dl * dr;
    let mut out = CMatrix::from_element(n, n, ZERO);
    for a in 0..dl {
        for b in 0..dr {
            for c in 0..dl {
                for d in 0..dr {
                    out[(a * dr + d, c * dr + b)] = m[(a * dr + b, c * dr + d)];
                }
            }
        }
    }
    out
}

fn unpack(p: &[f64], offset: usize, len: usize) -> CVector {
    CVector::from_fn(len, |i, _| Complex64::new(p[offset + 2 * i], p[offset + 2 * i + 1]))
}

fn pack(g: &mut [f64], offset: usize, v: &CVector) {
    for (i, z) in v.iter().enumerate() {
        g[offset + 2 * i] = z.re;
        g[offset + 2 * i + 1] = z.im;
    }
}

/// Product-mixture ansatz for a state already ordered as left (x) right.
struct ProductAnsatz<'a> {
    rho: &'a CMatrix,
    dl: usize,
    dr: usize,
    terms: usize,
}

impl ProductAnsatz<'_> {
    fn stride(&self) -> usize {
        2 * (self.dl + self.dr)
    }

    fn n_params(&self) -> usize {
        self.terms * self.stride()
    }

    fn products(&self, p: &[f64]) -> Vec<(CVector, CVector, CVector)> {
        (0..self.terms)
            .map(|k| {
                let off = k * self.stride();
                let x = unpack(p, off, self.dl);
                let y = unpack(p, off + 2 * self.dl, self.dr);
                let xy = x.kronecker(&y);
                (x, y, xy)
            })
            .collect()
    }

    fn unnormalized(&self, prods: &[(CVector, CVector, CVector)]) -> CMatrix {
        let d = self.dl * self.dr;
        let mut n = CMatrix::from_element(d, d, ZERO);
        for (_, _, v) in prods {
            n.gerc(ONE, v, v, ONE);
        }
        n
    }

    fn state(&self, p: &[f64]) -> CMatrix {
        let n = self.unnormalized(&self.products(p));
        let z = n.trace().re;
        n.unscale(z)
    }

    /// `-Tr rho ln(N/Tr N)` in nats with its gradient in the parameters.
    fn objective(&self, p: &[f64], grad: &mut [f64]) -> f64 {
        let prods = self.products(p);
        let n = self.unnormalized(&prods);
        let z = n.trace().re;
        let Some((cross, mut g)) = cross_entropy_and_gradient(self.rho, n) else {
            return f64::INFINITY;
        };
        for i in 0..g.nrows() {
            g[(i, i)] += Complex64::new(1.0 / z, 0.0);
        }
        let dr = self.dr;
        for (k, (x, y, xy)) in prods.iter().enumerate() {
            let w = &g * xy;
            let gx = CVector::from_fn(self.dl, |a, _| {
                (0..dr).map(|c| y[c].conj() * w[a * dr + c]).sum::<Complex64>() * 2.0
            });
            let gy = CVector::from_fn(dr, |c, _| {
                (0..self.dl).map(|a| x[a].conj() * w[a * dr + c]).sum::<Complex64>() * 2.0
            });
            let off = k * self.stride();
            pack(grad, off, &gx);
            pack(grad, off + 2 * self.dl, &gy);
        }
        cross + z.ln()
    }
}

/// `max_Q lambda_min(G - Q^Γ)` over `Q = L L^dagger`, by smoothed ascent.
fn dual_certificate(g: &CMatrix, dl: usize, dr: usize) -> f64 {
    let d = dl * dr;
    let lambda_min = |m: &CMatrix| m.clone().symmetric_eigenvalues().min();
    let certify = |l: &CMatrix| {
        let q = l * l.adjoint();
        lambda_min(&(g - transpose_right(&q, dl, dr)))
    };

    // Start from the positive part of (G + 1)^Γ.
    let shifted = transpose_right(&(g + CMatrix::identity(d, d)), dl, dr);
    let (lam, u) = eigh((&shifted + shifted.adjoint()).unscale(2.0));
    let sqrt_pos = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(lam[i].max(0.0).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let l0 = &u * sqrt_pos;
    let mut best = certify(&l0).max(lambda_min(g));

    let to_params = |l: &CMatrix| -> Vec<f64> { l.iter().flat_map(|z| [z.re, z.im]).collect() };
    let from_params =
        |p: &[f64]| CMatrix::from_iterator(d, d, p.chunks(2).map(|c| Complex64::new(c[0], c[1])));

    let cfg = LbfgsConfig {
        max_iters: 300,
        grad_tol: 1e-12,
        f_tol: 1e-14,
        ..LbfgsConfig::default()
    };
    let mut params = to_params(&l0);
    for mu in [1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
        let objective = |p: &[f64], grad: &mut [f64]| -> f64 {
            let l = from_params(p);
            let q = &l * l.adjoint();
            let m = g - transpose_right(&q, dl, dr);
            let (lam, u) = eigh((&m + m.adjoint()).unscale(2.0));
            let lmin = lam.iter().cloned().fold(f64::INFINITY, f64::min);
            let weights: Vec<f64> = lam.iter().map(|&v| (-(v - lmin) / mu).exp()).collect();
            let total: f64 = weights.iter().sum();
            let softmin = lmin - mu * total.ln();
            let w = CMatrix::from_fn(d, d, |i, j| {
                (0..d)
                    .map(|k| u[(i, k)] * u[(j, k)].conj() * (weights[k] / total))
                    .sum::<Complex64>()
            });
            let gl = transpose_right(&w, dl, dr) * &l * Complex64::new(2.0, 0.0);
            for (k, z) in gl.iter().enumerate() {
                grad[2 * k] = z.re;
                grad[2 * k + 1] = z.im;
            }
            -softmin
        };
        let m = lbfgs(objective, params.clone(), &cfg);
        params = m.x;
        best = best.max(certify(&from_params(&params)));
    }
    best
}

/// Relative entropy of entanglement across `part`, bracketed.
pub fn ree(rho: &DensityMatrix, part: &Bipartition, config: &ReeConfig) -> Result<ReeResult> {
    part.validate(rho.dims())?;
    let dim = rho.dim();
    if dim > MAX_REE_DIM {
        return Err(Error::TooLarge {
            dim,
            limit: MAX_REE_DIM,
        });
    }
    if config.restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let dims = rho.dims();
    let dl = dims.dim_of_set(part.left())?;
    let dr = dims.dim_of_set(part.right())?;
    let order: Vec<&String> = part.left().iter().chain(part.right()).collect();
    let ordered = permute_subsystems(rho, &order)?;
    let ansatz = ProductAnsatz {
        rho: ordered.matrix(),
        dl,
        dr,
        terms: config.components.unwrap_or(dim * dim).max(1),
    };

    let lcfg = LbfgsConfig {
        max_iters: config.max_iters,
        ..LbfgsConfig::default()
    };
    let runs: Vec<_> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(
                config.seed ^ (r as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            let x0: Vec<f64> = ginibre(ansatz.n_params() / 2, 1, &mut rng)
                .iter()
                .flat_map(|z| [z.re, z.im])
                .collect();
            lbfgs(|p, g| ansatz.objective(p, g), x0, &lcfg)
        })
        .collect();
    // First-found minimum wins ties.
    let best = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.f.total_cmp(&b.f).then(i.cmp(j)))
        .map(|(_, m)| m)
        .expect("at least one restart");

    let sigma_ordered = ansatz.state(&best.x);
    let sigma_ordered = (&sigma_ordered + sigma_ordered.adjoint()).unscale(2.0);
    let sigma = DensityMatrix::new(sigma_ordered.clone(), ordered.dims().clone())?;
    let closest_state = permute_subsystems(&sigma, dims.labels())?;
    let value = relative_entropy(rho, &closest_state)?;

    let mut lower = coherent_information(rho, part)?;
    if let Some((cross, g)) = cross_entropy_and_gradient(ordered.matrix(), sigma_ordered) {
        let neg_entropy_nats = -von_neumann_entropy(rho) * LN_2;
        let f0 = neg_entropy_nats + cross;
        let dual = (f0 + 1.0 + dual_certificate(&g, dl, dr)) / LN_2;
        lower = lower.max(dual);
    }
    let lower_bound = lower.min(value);

    Ok(ReeResult {
        value,
        lower_bound,
        closest_state,
        converged: best.converged || value - lower_bound <= CERTIFIED_GAP,
        iterations: best.iterations,
    })
}

/// Closed form for two-qubit states with maximally mixed marginals (Bell
/// diagonal up to local unitaries): `1 - h(lambda_max)` if `lambda_max > 1/2`,
/// else 0. For rank-two states this equals `1 - S(rho)`.
pub fn ree_bell_diagonal(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims().dims() != [2, 2] {
        return Err(Error::InvalidDims("expected a two-qubit state".into()));
    }
    let labels = rho.dims().labels();
    let half = CMatrix::identity(2, 2).unscale(2.0);
    let mut deviation = 0.0f64;
    for l in labels {
        let m = partial_trace(rho, &[l])?;
        deviation = deviation.max((m.matrix() - &half).iter().fold(0.0, |a, z| a.max(z.norm())));
    }
    if deviation > 1e-8 {
        return Err(Error::NotBellDiagonal { deviation });
    }
    let lmax = rho.eigenvalues().last().cloned().unwrap_or(0.0);
    Ok(if lmax > 0.5 {
        1.0 - binary_entropy(lmax)
    } else {
        0.0
    })
}
