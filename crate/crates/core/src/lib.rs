//! Exact RO(G)-graded Bredon cohomology computations for configuration
//! spaces of points in a representation, over a small catalog of finite
//! groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: integer Smith/Hermite normal forms and finite abelian groups.
//! * [`group_rep`]: the group catalog, representations and the invariants
//!   `d`, `D`, `e` and orientability.
//! * [`stirling`]: Stirling numbers of the first kind and the splitting
//!   multiplicities `a(k, j)`.
//! * [`point_cohomology`]: the coefficient ring `M` as declarative chart
//!   tables, with Euler-class multiplication.
//! * [`spheres`]: representation spheres and unit spheres.
//! * [`vanishing`]: the vanishing-requirement checker.
//! * [`config_ring`]: the deformed Arnold presentation ring.
//! * [`oc_assembly`]: additive charts of `H*(OC_k(V))`.
//! * [`varchenko_gelfand`]: functions on the symmetric group.
//! * [`mackey_homology`]: permutation-module chain complexes, including an
//!   independent cellular model of representation spheres.

pub mod config_ring;
pub mod error;
pub mod expr;
pub mod group_rep;
pub mod linalg;
pub mod mackey_homology;
pub mod oc_assembly;
pub mod point_cohomology;
pub mod spheres;
pub mod stirling;
pub mod vanishing;
pub mod varchenko_gelfand;

pub use error::{Error, Result};
