//! Entanglement-gain criteria for detecting quantum discord carried by an
//! inaccessible mediator, and the numerical machinery to evaluate them.
//!
//! - [`quantum`]: multipartite density matrices and linear-algebra primitives.
//! - [`dynamics`]: closed, Trotterized and Lindblad evolution.
//! - [`measures`]: negativity, relative entropy of entanglement brackets,
//!   one-way deficit and the inequality checkers built on them.
//! - [`protocol`]: detection pipeline and named tripartite scenarios.
//! - [`gaussian`]: linearized membrane-in-the-middle optomechanics.
//! - [`cli`]: command-line front end used by the `nonclassicality` binary.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod measures;
mod optim;
pub mod protocol;
pub mod quantum;

pub use error::{Error, Result};
