use serde::{Deserialize, Serialize};

use super::{discord_deficit, ree, Bipartition, Bracket, DiscordConfig, ReeConfig, MAX_REE_DIM};
use crate::error::{Error, Result};
use crate::quantum::{partial_trace, von_neumann_entropy, DensityMatrix};

/// Margin above which a purity-bound excess counts as a detection.
pub const PURITY_THRESHOLD: f64 = 1e-6;

/// Tolerance for certified violations of the relocation bound.
pub const RELOCATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NonclassicalDetected,
    Inconclusive,
    Correlated,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NonclassicalDetected => "NONCLASSICAL_DETECTED",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Correlated => "CORRELATED",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelocationReport {
    /// Labels in the roles `(A, B, C)`.
    pub labels: [String; 3],
    pub e_a_bc: Bracket,
    pub e_ac_b: Bracket,
    /// `D_{AB|C}` (an upper bound from the basis search).
    pub discord: f64,
    /// Sum of the two bracket widths.
    pub slack: f64,
    /// `|E_{A:BC} - E_{AC:B}| <= D_{AB|C} + slack` on the upper edges.
    pub holds: bool,
    /// The smallest difference compatible with both brackets exceeds the
    /// discord by more than [`RELOCATION_TOL`].
    pub certified_violation: bool,
    pub converged: bool,
}

/// Checks `|E_{A:BC} - E_{AC:B}| <= D_{AB|C}` on a tripartite state whose
/// subsystems play the roles A, B, C in their listed order.
pub fn check_relocation_bound(
    rho: &DensityMatrix,
    ree_config: &ReeConfig,
    discord_config: &DiscordConfig,
) -> Result<RelocationReport> {
    let labels = rho.dims().labels();
    if labels.len() != 3 {
        return Err(Error::InvalidDims(format!(
            "expected three subsystems, got {}",
            labels.len()
        )));
    }
    if rho.dim() > MAX_REE_DIM {
        return Err(Error::TooLarge {
            dim: rho.dim(),
            limit: MAX_REE_DIM,
        });
    }
    let (a, b, c) = (&labels[0], &labels[1], &labels[2]);
    let r1 = ree(rho, &Bipartition::new(&[a], &[b, c]), ree_config)?;
    let r2 = ree(rho, &Bipartition::new(&[a, c], &[b]), ree_config)?;
    let d = discord_deficit(rho, c, discord_config)?;
    let (e1, e2) = (r1.bracket(), r2.bracket());
    let slack = e1.width() + e2.width();
    let holds = (e1.upper - e2.upper).abs() <= d.value + slack + 1e-9;
    let min_gap = (e1.lower - e2.upper).max(e2.lower - e1.upper).max(0.0);
    Ok(RelocationReport {
        labels: [a.clone(), b.clone(), c.clone()],
        e_a_bc: e1,
        e_ac_b: e2,
        discord: d.value,
        slack,
        holds,
        certified_violation: min_gap > d.value + RELOCATION_TOL,
        converged: r1.converged && r2.converged && d.converged,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PurityReport {
    /// `S_A(0) + S_B(0)`.
    pub bound: f64,
    pub e_ab_tau: f64,
    pub verdict: Verdict,
}

/// Entanglement between A and B at any later time cannot exceed
/// `S_A(0) + S_B(0)` unless the mediator carried discord.
pub fn purity_criterion(rho0: &DensityMatrix, e_ab_tau: f64) -> Result<PurityReport> {
    let sa = von_neumann_entropy(&partial_trace(rho0, &["A"])?);
    let sb = von_neumann_entropy(&partial_trace(rho0, &["B"])?);
    let bound = sa + sb;
    let verdict = if e_ab_tau > bound + PURITY_THRESHOLD {
        Verdict::NonclassicalDetected
    } else {
        Verdict::Inconclusive
    };
    Ok(PurityReport {
        bound,
        e_ab_tau,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::quantum::pauli::{bits, minus, phi_plus, plus, projector, psi_plus};
    use crate::quantum::random::haar_pure;
    use crate::quantum::{kron, SystemDims};

    fn abc() -> SystemDims {
        SystemDims::qubits(&["A", "B", "C"])
    }

    fn counterexample_initial() -> DensityMatrix {
        let m = (kron(&projector(&psi_plus()), &projector(&plus()))
            + kron(&projector(&phi_plus()), &projector(&minus())))
        .unscale(2.0);
        DensityMatrix::new(m, abc()).unwrap()
    }

    #[test]
    fn classical_mixture_satisfies_relocation_bound() {
        let m = (projector(&bits("011")) + projector(&bits("100"))).unscale(2.0);
        let rho = DensityMatrix::new(m, abc()).unwrap();
        let r = check_relocation_bound(&rho, &ReeConfig::default(), &DiscordConfig::default())
            .unwrap();
        assert!(r.holds && !r.certified_violation);
        assert!(r.discord < 1e-6);
        assert!(r.e_a_bc.upper < 2e-2 && r.e_ac_b.upper < 2e-2);
    }

    #[test]
    fn random_pure_states_satisfy_relocation_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..2 {
            let rho = DensityMatrix::from_pure(&haar_pure(8, &mut rng), abc()).unwrap();
            let r = check_relocation_bound(&rho, &ReeConfig::default(), &DiscordConfig::default())
                .unwrap();
            assert!(r.holds, "{r:?}");
            assert!(!r.certified_violation);
        }
    }

    #[test]
    fn rejects_bipartite_states() {
        let rho = DensityMatrix::maximally_mixed(SystemDims::qubits(&["A", "B"]));
        assert!(
            check_relocation_bound(&rho, &ReeConfig::default(), &DiscordConfig::default()).is_err()
        );
    }

    #[test]
    fn mixed_probes_give_no_detection() {
        let r = purity_criterion(&counterexample_initial(), 1.0).unwrap();
        assert!((r.bound - 2.0).abs() < 1e-12);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn pure_probes_detect_any_entanglement() {
        let rho = DensityMatrix::from_pure(&bits("000"), abc()).unwrap();
        let r = purity_criterion(&rho, 0.5).unwrap();
        assert_eq!(r.bound, 0.0);
        assert_eq!(r.verdict, Verdict::NonclassicalDetected);
        let r = purity_criterion(&rho, 0.0).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn verdict_serializes_in_screaming_case() {
        let s = serde_json::to_string(&Verdict::NonclassicalDetected).unwrap();
        assert_eq!(s, "\"NONCLASSICAL_DETECTED\"");
        assert_eq!(Verdict::Correlated.to_string(), "CORRELATED");
    }
}
