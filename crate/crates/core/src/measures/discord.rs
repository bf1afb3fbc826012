use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::{nelder_mead, NelderMeadConfig};
use crate::quantum::random::haar_unitary;
use crate::quantum::{
    dephase, hermitian_function, von_neumann_entropy, CMatrix, CVector, DensityMatrix,
    MeasurementBasis, ZERO,
};

/// Largest measured-subsystem dimension accepted by [`discord_deficit`].
pub const MAX_MEASURED_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscordConfig {
    /// Points per axis of the Bloch-sphere grid (qubit case).
    pub grid: usize,
    /// Random unitary starts besides the identity (qutrit and ququart case).
    pub restarts: usize,
    pub max_evals: usize,
    pub seed: u64,
}

impl Default for DiscordConfig {
    fn default() -> Self {
        Self {
            grid: 12,
            restarts: 8,
            max_evals: 4000,
            seed: 0x5EED_0002,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiscordResult {
    /// Minimized deficit in bits, clamped at zero.
    pub value: f64,
    /// Basis attaining `value`.
    pub basis: MeasurementBasis,
    pub converged: bool,
    pub evaluations: usize,
}

/// `(cos θ/2, e^{iφ} sin θ/2)` and its orthogonal partner.
fn bloch_basis(label: &str, theta: f64, phi: f64) -> MeasurementBasis {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let up = CVector::from_vec(vec![Complex64::new(c, 0.0), e * s]);
    let down = CVector::from_vec(vec![-e.conj() * s, Complex64::new(c, 0.0)]);
    MeasurementBasis::new(label, vec![up, down]).expect("Bloch basis is orthonormal")
}

/// Hermitian `d x d` matrix from `d^2` reals.
fn hermitian_from(p: &[f64], d: usize) -> CMatrix {
    let mut h = CMatrix::from_element(d, d, ZERO);
    let mut k = d;
    for i in 0..d {
        h[(i, i)] = Complex64::new(p[i], 0.0);
        for j in i + 1..d {
            let z = Complex64::new(p[k], p[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

fn rotated_basis(label: &str, u0: &CMatrix, p: &[f64]) -> MeasurementBasis {
    let d = u0.nrows();
    let v = hermitian_function(&hermitian_from(p, d), |l| Complex64::from_polar(1.0, l))
        .expect("constructed Hermitian");
    MeasurementBasis::from_unitary(label, &(u0 * v)).expect("product of unitaries")
}

/// One-way deficit `min_Π S(Π[rho]) - S(rho)` with `Π` a von Neumann
/// measurement on `measured`.
pub fn discord_deficit(
    rho: &DensityMatrix,
    measured: &str,
    config: &DiscordConfig,
) -> Result<DiscordResult> {
    let d = rho.dims().dim_of(measured)?;
    if d > MAX_MEASURED_DIM {
        return Err(Error::TooLarge {
            dim: d,
            limit: MAX_MEASURED_DIM,
        });
    }
    let s0 = von_neumann_entropy(rho);
    let entropy_after = |b: &MeasurementBasis| {
        von_neumann_entropy(&dephase(rho, b).expect("basis matches subsystem"))
    };
    if d == 1 {
        let basis = MeasurementBasis::computational(measured, 1);
        return Ok(DiscordResult {
            value: 0.0,
            basis,
            converged: true,
            evaluations: 0,
        });
    }

    let nm = NelderMeadConfig {
        max_evals: config.max_evals,
        ..NelderMeadConfig::default()
    };
    let (basis, f, converged, evaluations) = if d == 2 {
        let n = config.grid.max(1);
        let mut best = (0.0, 0.0, f64::INFINITY);
        for i in 0..n {
            for j in 0..n {
                let (theta, phi) = (i as f64 * PI / n as f64, 2.0 * PI * j as f64 / n as f64);
                let f = entropy_after(&bloch_basis(measured, theta, phi));
                if f < best.2 {
                    best = (theta, phi, f);
                }
            }
        }
        let m = nelder_mead(
            |p| entropy_after(&bloch_basis(measured, p[0], p[1])),
            &[best.0, best.1],
            PI / (2.0 * n as f64),
            &nm,
        );
        let evals = n * n + m.iterations;
        if m.f < best.2 {
            (bloch_basis(measured, m.x[0], m.x[1]), m.f, m.converged, evals)
        } else {
            (bloch_basis(measured, best.0, best.1), best.2, m.converged, evals)
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let starts: Vec<CMatrix> = std::iter::once(CMatrix::identity(d, d))
            .chain((0..config.restarts).map(|_| haar_unitary(d, &mut rng)))
            .collect();
        let zero = vec![0.0; d * d];
        let mut best: Option<(MeasurementBasis, f64, bool)> = None;
        let mut evals = 0;
        for u0 in &starts {
            let m = nelder_mead(|p| entropy_after(&rotated_basis(measured, u0, p)), &zero, 0.3, &nm);
            evals += m.iterations;
            if best.as_ref().is_none_or(|b| m.f < b.1) {
                best = Some((rotated_basis(measured, u0, &m.x), m.f, m.converged));
            }
        }
        let (b, f, c) = best.expect("at least the identity start");
        (b, f, c, evals)
    };
    Ok(DiscordResult {
        value: (f - s0).max(0.0),
        basis,
        converged,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::dynamics::evolve_closed;
    use crate::quantum::pauli::{bits, ket, phi_plus, projector, x};
    use crate::quantum::random::wishart;
    use crate::quantum::{embed, kron, kron_all, permute_subsystems, SystemDims};

    fn abc() -> SystemDims {
        SystemDims::qubits(&["A", "B", "C"])
    }

    fn classical_mixture() -> DensityMatrix {
        let m = (projector(&bits("011")) + projector(&bits("100"))).unscale(2.0);
        DensityMatrix::new(m, abc()).unwrap()
    }

    #[test]
    fn classical_mixture_has_no_discord_on_c() {
        let r = discord_deficit(&classical_mixture(), "C", &DiscordConfig::default()).unwrap();
        assert!(r.value < 1e-6, "{}", r.value);
    }

    #[test]
    fn instrumental_state_has_unit_discord() {
        let dims = abc();
        let h_ac = embed(&x(), "A", &dims).unwrap() * embed(&x(), "C", &dims).unwrap();
        let rho = evolve_closed(&classical_mixture(), &h_ac, PI / 4.0).unwrap();
        let r = discord_deficit(&rho, "C", &DiscordConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 2e-2, "{}", r.value);
    }

    #[test]
    fn bell_pair_with_spectator_has_unit_discord() {
        let bell = DensityMatrix::from_pure(&phi_plus(), SystemDims::qubits(&["A", "C"])).unwrap();
        let b0 = DensityMatrix::from_pure(&ket(2, 0), SystemDims::qubits(&["B"])).unwrap();
        let rho = permute_subsystems(&bell.tensor(&b0).unwrap(), &["A", "B", "C"]).unwrap();
        let r = discord_deficit(&rho, "C", &DiscordConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);

        // Brute-force grid over the sphere as an independent check.
        let s0 = von_neumann_entropy(&rho);
        let mut grid_min = f64::INFINITY;
        for i in 0..=40 {
            for j in 0..40 {
                let b = bloch_basis("C", PI * i as f64 / 40.0, 2.0 * PI * j as f64 / 40.0);
                grid_min = grid_min.min(von_neumann_entropy(&dephase(&rho, &b).unwrap()) - s0);
            }
        }
        assert!((grid_min - 1.0).abs() < 1e-9);
        assert!(r.value <= grid_min + 1e-9);
    }

    #[test]
    fn qutrit_classical_state_has_no_discord() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let dims = SystemDims::new(vec![2, 3], vec!["A", "C"]).unwrap();
        let u = haar_unitary(3, &mut rng);
        let mut m = CMatrix::zeros(6, 6);
        for c in 0..3 {
            let v = u.column(c).into_owned();
            m += kron(&wishart(2, 2, &mut rng), &projector(&v)).unscale(3.0);
        }
        let rho = DensityMatrix::new(m, dims).unwrap();
        let r = discord_deficit(&rho, "C", &DiscordConfig::default()).unwrap();
        assert!(r.value < 1e-6, "{}", r.value);
    }

    #[test]
    fn rejects_large_measured_subsystem() {
        let dims = SystemDims::new(vec![2, 5], vec!["A", "C"]).unwrap();
        let rho = DensityMatrix::maximally_mixed(dims);
        assert!(matches!(
            discord_deficit(&rho, "C", &DiscordConfig::default()),
            Err(Error::TooLarge { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn quantum_classical_states_have_no_discord(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = haar_unitary(2, &mut rng);
            let p: f64 = rand::Rng::random_range(&mut rng, 0.05..0.95);
            let mut m = CMatrix::zeros(8, 8);
            for (c, w) in [(0, p), (1, 1.0 - p)] {
                let v = u.column(c).into_owned();
                m += kron(&wishart(4, 3, &mut rng), &projector(&v)).scale(w);
            }
            let rho = DensityMatrix::new(m, abc()).unwrap();
            let r = discord_deficit(&rho, "C", &DiscordConfig::default()).unwrap();
            prop_assert!(r.value < 1e-6, "{}", r.value);
        }

        #[test]
        fn invariant_under_unitaries_on_measured_side(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = DensityMatrix::new(wishart(8, 2, &mut rng), abc()).unwrap();
            let u = kron_all(&[CMatrix::identity(4, 4), haar_unitary(2, &mut rng)]);
            let rotated = DensityMatrix::new(&u * rho.matrix() * u.adjoint(), abc()).unwrap();
            let cfg = DiscordConfig::default();
            let a = discord_deficit(&rho, "C", &cfg).unwrap().value;
            let b = discord_deficit(&rotated, "C", &cfg).unwrap().value;
            prop_assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }
}
