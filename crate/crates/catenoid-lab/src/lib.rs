//! Numerical laboratory for the Jacobi spectrum of the critical catenoids
//! in hyperbolic space that meet a geodesic ball orthogonally.
//!
//! Modules are layered bottom-up: [`profile`] holds closed forms,
//! [`boundary_geometry`] solves the free-boundary condition,
//! [`jacobi_fields`] and [`robin_spectrum`] handle the radial Jacobi
//! operator, [`conditions`] assembles the named conditions and the index,
//! and [`asymptotics`] checks the endpoint constants.

// `!(x > 0.0)` is used deliberately so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod boundary_geometry;
pub mod cli;
pub mod conditions;
pub mod error;
pub mod jacobi_fields;
pub mod numerics;
pub mod profile;
pub mod robin_spectrum;

pub use error::{LabError, Result};
pub use numerics::Tolerances;
pub use profile::ParamA;
