use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum LabError {
    #[error("parameter a = {0} lies outside the domain a > 1/2")]
    Domain(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {intervals} subintervals")]
    Quadrature {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("ODE step size collapsed at s = {at:e} (h = {step:e}); near a = 1/2 use the rescaled variable s/sqrt(a - 1/2)")]
    StepCollapse { at: f64, step: f64 },

    #[error("no sign change found while scanning [{lo:e}, {hi:e}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("root finder did not converge in [{lo:e}, {hi:e}]")]
    RootNotConverged { lo: f64, hi: f64 },

    #[error("eigenvalue bracket exhausted: search bound reached {bound:e}")]
    BracketExhausted { bound: f64 },

    #[error("finite difference step {0:e} is too small for the domain")]
    StepUnderflow(f64),

    #[error("degenerate denominator B(s0)^2 - 2K^2 = {value:e} (relative {relative:e}); (G) is close to equality")]
    DegenerateDenominator { value: f64, relative: f64 },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<LabError>,
    },
}

impl LabError {
    /// Wrap the error with the name of the sub-computation that failed.
    pub fn context(self, context: impl Into<String>) -> Self {
        LabError::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) trait ResultExt<T> {
    fn context(self, context: &str) -> Result<T>;
}

impl<T> ResultExt<T> for Result<T> {
    fn context(self, context: &str) -> Result<T> {
        self.map_err(|e| e.context(context))
    }
}
