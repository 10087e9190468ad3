use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("vacuum exceeded: wbar + w = {0} < 0")]
    VacuumExceeded(f64),
    #[error("vacuum: {0}")]
    Vacuum(String),
    #[error("root solve failed after {iterations} iterations on bracket [{lo}, {hi}] (f(lo)={flo}, f(hi)={fhi})")]
    NoConvergence {
        iterations: usize,
        lo: f64,
        hi: f64,
        flo: f64,
        fhi: f64,
    },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("setup error: {0}")]
    Setup(String),
    #[error("time step underflow: dt = {dt} at t = {time}")]
    DtUnderflow { dt: f64, time: f64 },
    #[error("inadmissible cell ({i}, {j}): rho = {rho}")]
    Inadmissible { i: usize, j: usize, rho: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("empty region: {0}")]
    EmptyRegion(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
