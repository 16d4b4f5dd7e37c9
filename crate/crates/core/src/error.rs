use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failures raised by the models. Parameter-rule violations are reported as
/// data by [`crate::types::validate_design`] and never show up here.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain where a formula is defined.
    Domain { what: &'static str, detail: DomainDetail },
    /// An iterative solver ran out of budget.
    NoConvergence { what: &'static str, iterations: usize, residual: f64 },
    /// A state variable became NaN or infinite.
    NonFinite { what: &'static str, step: usize },
    /// The design cannot deploy against the line pressure drop.
    Degenerate { contraction: f64, stroke: f64 },
    /// A station failed while integrating the effective area.
    Station { phi: f64, source: alloc::boxed::Box<Error> },
}

/// Extra numbers attached to a [`Error::Domain`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainDetail {
    Value(f64),
    Interval { value: f64, lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, detail: DomainDetail::Value(value) }
    }

    pub(crate) fn out_of_interval(what: &'static str, value: f64, lo: f64, hi: f64) -> Self {
        Error::Domain { what, detail: DomainDetail::Interval { value, lo, hi } }
    }

    /// True for failures of the numerical machinery rather than bad inputs.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::NoConvergence { .. } | Error::NonFinite { .. } => true,
            Error::Station { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, detail: DomainDetail::Value(v) } => {
                write!(f, "{what}: value {v} is outside the valid domain")
            }
            Error::Domain { what, detail: DomainDetail::Interval { value, lo, hi } } => {
                write!(f, "{what}: {value} is outside the valid interval [{lo}, {hi}]")
            }
            Error::NoConvergence { what, iterations, residual } => {
                write!(f, "{what}: no convergence after {iterations} iterations (last residual {residual:e})")
            }
            Error::NonFinite { what, step } => write!(f, "{what}: non-finite state at step {step}"),
            Error::Degenerate { contraction, stroke } => {
                write!(f, "gripper cannot deploy: line contraction {contraction} m exceeds available stroke {stroke} m")
            }
            Error::Station { phi, source } => write!(f, "station at azimuth {phi} rad: {source}"),
        }
    }
}

impl core::error::Error for Error {}
