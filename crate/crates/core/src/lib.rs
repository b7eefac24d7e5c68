//! Spectral geometry of convex curves and surfaces.
//!
//! Every functional in the reverse isoperimetric inequalities for
//! Minkowski-plane curves, convex surfaces in R³ and convex curves on the unit
//! sphere, computed from support functions or sampled traces with spectrally
//! accurate differentiation and quadrature.
//!
//! - [`spectral`]: periodic and spherical calculus.
//! - [`plane`]: support-function curves, Minkowski norms, evolutes, signed areas.
//! - [`surface`]: support fields on S², principal radii, focal maps, volumes.
//! - [`sphere_curve`]: convex curves on S² and the exact remainder identity.
//! - [`search`]: derivative-free probing of the anisotropic constant.
//! - [`families`]: seeded generators for test and sweep families.

pub mod error;
pub mod families;
pub mod plane;
pub mod report;
pub mod search;
pub mod spectral;
pub mod sphere_curve;
pub mod surface;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use report::{InequalityReport, Relation, Resolution};

/// Default relative tolerance for identity checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// Default circle resolution.
pub const DEFAULT_CIRCLE_N: usize = 512;
/// Default sphere colatitude count (longitudes are twice this).
pub const DEFAULT_SPHERE_N_THETA: usize = 96;
