//! SU(2) simplicial gauge theory on 4D spacetime meshes.
//!
//! This crate builds discrete gauge-invariant Yang-Mills(-Higgs) actions on
//! simplicial spacetime lattices: a periodic tetrahedral mesh of the unit
//! 3-torus (six tetrahedra per cube, all sharing the interior diagonal) is
//! replicated at uniformly spaced time nodes. Gauge fields live as su(2)
//! degrees of freedom on spatial and temporal edges; parallel transport
//! matrices `U = exp(A)` produce Wilson-loop curvatures on faces, and three
//! discrete actions of increasing structure are provided:
//!
//! * `S^J` — the interpolated FEM action built from curvature dofs of the
//!   Whitney 2-form interpolant,
//! * `S^I` — the intermediate action built from loop curvatures without
//!   transport insertions (not gauge invariant),
//! * `S^L` — the simplicial gauge theory action with parallel-transport
//!   insertions between distinguished points (exactly gauge invariant).
//!
//! The [`harness`] module drives convergence studies against exactly known
//! continuum actions and fits the observed `h^2` error law.

pub mod action;
pub mod gaugefield;
pub mod harness;
pub mod liealg;
pub mod mat2;
pub mod mesh;
pub mod whitney;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
