#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Spectral laboratory for observability and exact controllability of the
//! Schrödinger propagator `e^{itΔ}` on compact model manifolds.
//!
//! All quantities are computed in an exact Laplace eigenbasis truncated at
//! a cutoff: observability Gramians over measurable time sets, semiclassical
//! resolvent certificates, band-filtered and weak observability constants,
//! and Hilbert Uniqueness Method controls.

pub mod error;
pub mod hum;
pub mod io;
pub mod linalg;
pub mod observability;
pub mod resolvent;
pub mod sets;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::{smallest_eig, EigenPair, HermitianMatrix};
pub use sets::{spatial_gramian, DensityProfile, SpatialSet, TimeSet};
pub use spectral::{Boundary, Family, ModelDescriptor, SpectralFilter, SpectralModel, StateCoeffs};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
