//! Exact enumeration of the affine regions of continuous piecewise-affine
//! neural networks over a bounded input polytope.
//!
//! The pipeline is layer-by-layer: each region found so far is split by the
//! hyperplanes its next activation layer induces, and the resulting cells are
//! discovered by a breadth-first walk over sidedness flips, each certified by
//! a Chebyshev-center LP.

pub mod analysis;
pub mod enumerate;
mod error;
pub mod fixtures;
pub mod geometry;
pub mod network;
pub mod oracle;
pub mod parallel;
pub mod report;

pub use enumerate::{EnumerationResult, Enumerator, Region};
pub use error::Error;
pub use geometry::{HPolytope, Halfspace, Hyperplane, LpKernel, Tolerances};
pub use network::{EffectiveAffine, LayerSpec, Network, SignPattern};
pub use parallel::Parallelism;
