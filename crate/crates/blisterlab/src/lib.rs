//! Energy functional, explicit test deformations and scaling-law checks for
//! blistering patterns of compressed thin films on compliant substrates.
//!
//! The crate evaluates the non-dimensionalized three-term energy (membrane,
//! bending, local substrate) of admissible deformations on the unit torus,
//! constructs the classical 1D blister profiles and the 2D blister-lattice
//! test field built from piecewise-linear corner maps and minimal-ridge
//! smoothing, and verifies the predicted scaling laws against a
//! direct-minimization oracle.

pub mod construct1d;
pub mod construct2d;
pub mod energy;
pub mod error;
pub mod field;
pub mod geometry;
pub mod minimize;
pub mod params;
pub mod profile;
pub mod quadrature;
pub mod scaling;

pub use energy::{energy_1d, h_half_norm_sq, EnergyBreakdown, QuadSpec};
pub use error::{BlisterError, Result};
pub use field::{energy_field, Field2D, FieldJet};
pub use geometry::{BondedSet1D, BondedSet2D};
pub use params::Params;
pub use profile::Profile1D;
