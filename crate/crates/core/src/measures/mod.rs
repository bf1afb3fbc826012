//! Correlation quantifiers and the inequality checks built from them.
//!
//! Everything here is in bits. The relative entropy of entanglement has no
//! closed form in general, so [`ree`] returns a certified bracket: an upper
//! bound attained by an explicit separable state and a lower bound from a
//! dual certificate of the PPT relaxation.

mod bounds;
mod discord;
mod negativity;
mod ree;

pub use bounds::{
    check_relocation_bound, purity_criterion, PurityReport, RelocationReport, Verdict,
    PURITY_THRESHOLD, RELOCATION_TOL,
};
pub use discord::{discord_deficit, DiscordConfig, DiscordResult, MAX_MEASURED_DIM};
pub use negativity::log_negativity;
pub use ree::{
    coherent_information, ree, ree_bell_diagonal, ReeConfig, ReeResult, MAX_REE_DIM,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::SystemDims;

/// Split of a state's subsystems into two disjoint groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<String>,
    right: Vec<String>,
}

impl Bipartition {
    pub fn new<S: AsRef<str>>(left: &[S], right: &[S]) -> Self {
        Self {
            left: left.iter().map(|s| s.as_ref().to_string()).collect(),
            right: right.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    pub fn left(&self) -> &[String] {
        &self.left
    }

    pub fn right(&self) -> &[String] {
        &self.right
    }

    /// Checks that the two sides are nonempty, disjoint and cover `dims`.
    pub fn validate(&self, dims: &SystemDims) -> Result<()> {
        if self.left.is_empty() || self.right.is_empty() {
            return Err(Error::InvalidBipartition("empty side".into()));
        }
        for l in self.left.iter().chain(&self.right) {
            dims.index_of(l)?;
        }
        if self.left.iter().any(|l| self.right.contains(l)) {
            return Err(Error::InvalidBipartition("sides overlap".into()));
        }
        let mut all: Vec<&String> = self.left.iter().chain(&self.right).collect();
        all.sort();
        all.dedup();
        if all.len() != dims.len() || all.len() != self.left.len() + self.right.len() {
            return Err(Error::InvalidBipartition(format!(
                "{}:{} does not cover {:?}",
                self.left.join(""),
                self.right.join(""),
                dims.labels()
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.left.join(""), self.right.join(""))
    }
}

/// Interval `[lower, upper]` known to contain a quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

impl Bracket {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }

    pub fn exact(v: f64) -> Self {
        Self { lower: v, upper: v }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    /// `value` lies within the bracket widened by `tol` on both sides.
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        self.lower - tol <= value && value <= self.upper + tol
    }
}
