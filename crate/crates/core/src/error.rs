use thiserror::Error;

use crate::profile::ModeLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("magnetic field must be non-negative, got {0} T")]
    NegativeField(f64),

    #[error("cyclotron frequency is zero: the A² coefficient diverges")]
    ZeroCyclotronFrequency,

    #[error("mode frequency must be positive, got {0} rad/s")]
    ZeroModeFrequency(f64),

    #[error("coupling field of mode {0} is empty")]
    EmptyField(ModeLabel),

    #[error("effective coupling of mode {0} vanishes; overlap is undefined")]
    ZeroCoupling(ModeLabel),

    #[error("no mode {0} in coupling set")]
    UnknownMode(ModeLabel),

    #[error("modes {0} and {1} are degenerate; intermode figure of merit undefined")]
    DegenerateModes(ModeLabel, ModeLabel),

    #[error("grid shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("a Fourier representation is required: {0}")]
    RequiresFourier(String),

    #[error("profile is not normalized: measured norm {measured} (expected 1 ± {tolerance})")]
    NotNormalized { measured: f64, tolerance: f64 },

    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error("matrix lacks bosonic block structure (residual {0:e})")]
    NotBosonic(f64),

    #[error("symplectic normalization failed for mode {mode}: norm {norm}")]
    Normalization { mode: usize, norm: f64 },

    #[error("dynamical instability at B = {b} T: {detail}")]
    Unstable { b: f64, detail: String },

    #[error("no middle polariton: {0}")]
    NoMiddlePolariton(String),

    #[error("response matrix is singular at {freq_hz} Hz")]
    SingularResponse { freq_hz: f64 },

    #[error("invalid layer stack: {0}")]
    InvalidStack(String),

    #[error("invalid waveform: {0}")]
    InvalidWaveform(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("profile file format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
