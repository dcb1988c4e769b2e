//! Steiner systems built from prescribed automorphism groups.
//!
//! The crate covers the whole pipeline used to construct and classify
//! Steiner designs `S(t,k,v)`:
//!
//! - [`design`]: designs, parameters, verification, derived designs and
//!   admissibility of parameter sets;
//! - [`perm`]: permutations and finitely generated permutation groups;
//! - [`orbits`]: orbits of a group on `s`-subsets of points;
//! - [`kramer_mesner`]: orbit incidence matrices and the reduction of the
//!   `λ = 1` selection problem to exact cover;
//! - [`exact_cover`]: Algorithm X with dancing links;
//! - [`extension`]: extension of a `G`-invariant `S(t,k,v)` through a new
//!   point to a `G`-invariant `S(t+1,k+1,v+1)`;
//! - [`isomorphism`]: invariants, isomorphism tests, automorphism groups and
//!   isomorphism filtering;
//! - [`io`] and [`fixtures`]: text formats and shipped example data.
//!
//! Points are always `0..v`. When a design has a distinguished point `∞`
//! (the fixed point of a rotational system, or the point added by an
//! extension) it is the last point `v - 1`.

pub mod combinatorics;
pub mod design;
pub mod error;
pub mod exact_cover;
pub mod extension;
pub mod fixtures;
pub mod io;
pub mod isomorphism;
pub mod kramer_mesner;
pub mod orbits;
pub mod perm;

pub use design::{AdmissibilityReport, Design, Params, Verification};
pub use error::{Error, Result};
pub use exact_cover::{CoverSolution, ExactCoverInstance, SearchLimits, SearchStats};
pub use extension::ExtensionProblem;
pub use kramer_mesner::KmMatrix;
pub use orbits::{OrbitTransversal, SubsetOrbit};
pub use perm::{PermGroup, Permutation};
