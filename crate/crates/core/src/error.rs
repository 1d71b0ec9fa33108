use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("gamma must exceed 1 (got {0})")]
    Gamma(f64),
    #[error("negative entry {value} at cell {cell}")]
    Negative { cell: usize, value: f64 },
    #[error("non-finite value at cell {0}")]
    NonFinite(usize),
    #[error("spectral differentiation requires a periodic grid on every axis")]
    NotPeriodic,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("I + t grad u0 is singular: blow-up reached at t = {t}")]
    BlowupReached { t: f64 },
    #[error("characteristic inversion did not converge after {iterations} iterations (residual {residual:e})")]
    NewtonFailed { iterations: usize, residual: f64 },
    #[error("empty region")]
    EmptyRegion,
    #[error("t = {t} is at or past the pole 2/nu0 = {pole}")]
    Pole { t: f64, pole: f64 },
    #[error("data differs from the background outside B_R: {0}")]
    Support(String),
    #[error("vacuum cell {0} carries nonzero momentum")]
    VacuumMomentum(usize),
    #[error("time step {dt:e} exceeds the CFL bound {max:e}")]
    Cfl { dt: f64, max: f64 },
    #[error("negative density {value:e} at cell {cell}")]
    NegativeDensity { cell: usize, value: f64 },
    #[error("step failed at t = {t}: {source}")]
    AtTime { t: f64, source: Box<Error> },
    #[error("trajectory blew up; decay diagnostics are undefined")]
    BlowupTrajectory,
    #[error("bisection failed: {0}")]
    Bisection(String),
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
