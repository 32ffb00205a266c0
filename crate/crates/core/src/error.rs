use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("spectral parameter {lambda} is not above the spectral radius {radius}")]
    BelowSpectrum { lambda: f64, radius: f64 },
    #[error("chemical potential {mu} is not below the ground energy {eps0}")]
    InvalidMu { mu: f64, eps0: f64 },
    #[error("density {rho} is below the critical density {rho_c}")]
    BelowCritical { rho: f64, rho_c: f64 },
    #[error("model {0} is recurrent")]
    Recurrent(String),
    #[error("dimension {dim} exceeds the dense limit {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("singular Krein matrix (condition estimate {0:e})")]
    Singular(f64),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of an iterative or numerical kernel, as opposed to
    /// inputs outside an operation's domain.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::Singular(_))
    }
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

/// A real number or `+∞`. Divergent Green functions and infinite critical
/// densities are reported as `Infinite`, never as a large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinite)
    }

    /// Unwraps a finite value, mapping `Infinite` to an `Invalid` error.
    pub fn require(self, what: &str) -> Result<f64> {
        self.finite()
            .ok_or_else(|| Error::Invalid(format!("{what} is infinite")))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Extended::Finite(x) => x,
            Extended::Infinite => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for Extended {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}
