use super::{CMatrix, DensityMatrix, SystemDims, ZERO};
use crate::error::{Error, Result};

/// Kronecker product `a (x) b`; `a` is the more significant factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Operator `op` acting on subsystem `label`, identity elsewhere.
pub fn embed(op: &CMatrix, label: &str, dims: &SystemDims) -> Result<CMatrix> {
    let k = dims.index_of(label)?;
    let d = dims.dims()[k];
    if op.nrows() != d || op.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: op.nrows(),
        });
    }
    let left: usize = dims.dims()[..k].iter().product();
    let right = dims.stride(k);
    Ok(kron_all(&[identity(left), op.clone(), identity(right)]))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Largest entry of `|m - m^dagger|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Sum of singular values of a Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> f64 {
    let h = (m + m.adjoint()).unscale(2.0);
    h.symmetric_eigenvalues().iter().map(|l| l.abs()).sum()
}

/// `||rho - sigma||_1 / 2`.
pub fn trace_distance(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    0.5 * trace_norm(&(rho - sigma))
}

/// Splits every basis index into (digits of kept subsystems, digits of the rest).
fn split_indices(dims: &SystemDims, mask: &[bool]) -> Vec<(usize, usize)> {
    let n = dims.total();
    let d = dims.dims();
    (0..n)
        .map(|mut idx| {
            let (mut kept, mut kept_mul, mut rest, mut rest_mul) = (0, 1, 0, 1);
            for k in (0..d.len()).rev() {
                let digit = idx % d[k];
                idx /= d[k];
                if mask[k] {
                    kept += digit * kept_mul;
                    kept_mul *= d[k];
                } else {
                    rest += digit * rest_mul;
                    rest_mul *= d[k];
                }
            }
            (kept, rest)
        })
        .collect()
}

/// Reduced state on `keep`; subsystem order of the result follows the
/// original dims regardless of the order of `keep`.
pub fn partial_trace<S: AsRef<str>>(rho: &DensityMatrix, keep: &[S]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::InvalidArgument("partial trace must keep a subsystem".into()));
    }
    let dims = rho.dims();
    let mask = dims.mask(keep)?;
    let out_dims = dims.restrict(keep)?;
    let split = split_indices(dims, &mask);
    let m = rho.matrix();
    let dk = out_dims.total();
    let mut out = CMatrix::from_element(dk, dk, ZERO);
    for (r, &(kr, tr)) in split.iter().enumerate() {
        for (c, &(kc, tc)) in split.iter().enumerate() {
            if tr == tc {
                out[(kr, kc)] += m[(r, c)];
            }
        }
    }
    // Partial trace of a valid state is valid; only roundoff needs removing.
    let out = (&out + out.adjoint()).unscale(2.0);
    Ok(DensityMatrix::from_parts_unchecked(out, out_dims))
}

/// Transposes the indices of subsystem `label` in an arbitrary matrix on `dims`.
pub fn partial_transpose_matrix(m: &CMatrix, dims: &SystemDims, label: &str) -> Result<CMatrix> {
    let k = dims.index_of(label)?;
    let d = dims.dims()[k];
    let stride = dims.stride(k);
    let n = dims.total();
    if m.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: m.nrows(),
        });
    }
    let mut out = CMatrix::from_element(n, n, ZERO);
    for r in 0..n {
        let dr = (r / stride) % d;
        for c in 0..n {
            let dc = (c / stride) % d;
            let r2 = r - dr * stride + dc * stride;
            let c2 = c - dc * stride + dr * stride;
            out[(r2, c2)] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Partial transpose of `rho` on one subsystem. The result is Hermitian with
/// unit trace but in general not positive.
pub fn partial_transpose(rho: &DensityMatrix, label: &str) -> Result<CMatrix> {
    partial_transpose_matrix(rho.matrix(), rho.dims(), label)
}

/// Reorders the tensor factors of `rho` to follow `order` (a permutation of
/// its labels).
pub fn permute_subsystems<S: AsRef<str>>(rho: &DensityMatrix, order: &[S]) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if order.len() != dims.len() {
        return Err(Error::InvalidArgument(format!(
            "permutation has {} labels, state has {}",
            order.len(),
            dims.len()
        )));
    }
    let perm: Vec<usize> = order
        .iter()
        .map(|l| dims.index_of(l.as_ref()))
        .collect::<Result<_>>()?;
    let mut seen = vec![false; perm.len()];
    for &p in &perm {
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidArgument("repeated label in permutation".into()));
        }
    }
    let new_dims = SystemDims::new(
        perm.iter().map(|&p| dims.dims()[p]).collect(),
        perm.iter().map(|&p| dims.labels()[p].clone()).collect(),
    )?;
    let n = dims.total();
    // map[new_index] = old_index
    let map: Vec<usize> = (0..n)
        .map(|mut idx| {
            let mut old = 0;
            for pos in (0..perm.len()).rev() {
                let dpos = new_dims.dims()[pos];
                let digit = idx % dpos;
                idx /= dpos;
                old += digit * dims.stride(perm[pos]);
            }
            old
        })
        .collect();
    let m = rho.matrix();
    let out = CMatrix::from_fn(n, n, |r, c| m[(map[r], map[c])]);
    Ok(DensityMatrix::from_parts_unchecked(out, new_dims))
}
