//! Generic numerical building blocks used by the geometry and spectral code.

pub mod ode;
pub mod quadrature;
pub mod richardson;
pub mod roots;

pub use ode::{Dopri5, OdeTolerance};
pub use quadrature::{integrate, Integral, QuadTolerance};
pub use richardson::{central_derivative, Derivative};
pub use roots::{bisect, brent, Root};

/// Tolerance bundle threaded through every computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub quad: QuadTolerance,
    pub ode: OdeTolerance,
    /// Absolute tolerance on root locations in `s`.
    pub root: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quad: QuadTolerance::default(),
            ode: OdeTolerance::default(),
            root: 1e-15,
        }
    }
}
