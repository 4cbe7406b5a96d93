//! Exact verification of coefficient-wise dominance between projected
//! structure polynomials of graph covers and powers of the base polynomial,
//! plus the partition-function tools that connect it to the Bethe
//! approximation of attractive binary pairwise models.
//!
//! Modules, bottom-up:
//!
//! - [`graph`]: simple graphs, bipartiteness, subdivision.
//! - [`covers`]: permutation voltage assignments and the M-covers they build.
//! - [`poly`]: exact sparse polynomials, projection, dominance.
//! - [`families`]: independent sets, matchings, perfect matchings, Eulerian
//!   subsets and their generating polynomials.
//! - [`conjecture`]: per-cover and exhaustive dominance checks with witnesses.
//! - [`bethe`]: partition functions, the Bethe free energy and cover bounds.

pub mod bethe;
pub mod conjecture;
pub mod covers;
pub mod families;
pub mod graph;
pub mod poly;

use thiserror::Error;

pub use bethe::{BetheError, PairwiseModel};
pub use conjecture::{CheckOptions, CheckReport, Status};
pub use covers::{CoverError, CoverGraph, Permutation, VoltageAssignment};
pub use families::StructureFamily;
pub use graph::{Graph, GraphError};
pub use poly::{PolyError, Polynomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Bethe(#[from] BetheError),
    #[error("assignment has degree {found}, checker expects {expected}")]
    DegreeMismatch { expected: usize, found: usize },
}
