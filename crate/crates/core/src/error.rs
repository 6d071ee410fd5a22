use thiserror::Error;

/// Errors surfaced by simulation, spectral estimation and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("step size rejected: dt*(|omega|_max + sum|K|) = {bound:.3} > 1 for oscillator {osc}")]
    StepSizeRejected { osc: usize, bound: f64 },

    #[error("non-finite state detected at t = {time}")]
    NonFinite { time: f64 },

    #[error("frequency grids do not match")]
    GridMismatch,

    #[error("spectrum has negative values (min {min:.3e} at omega {omega:.4})")]
    NegativeSpectrum { min: f64, omega: f64 },

    #[error("reference spectrum is identically zero")]
    ZeroReference,

    #[error("recording would alias: {mass:.2}% of spectral power above the Nyquist frequency {nyquist:.3}")]
    Aliasing { mass: f64, nyquist: f64 },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {msg}")]
    Parse { path: String, msg: String },
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
