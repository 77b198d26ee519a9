use thiserror::Error;

/// Errors raised by the simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("chain of {n_sites} sites exceeds the cap of {cap} sites for {what}")]
    SizeCap {
        n_sites: usize,
        cap: usize,
        what: &'static str,
    },

    #[error("integration failed{}: {reason}", mode_suffix(*.mode))]
    Integration { mode: Option<usize>, reason: String },

    #[error("norm drift {drift:.3e} in mode {mode} exceeds tolerance")]
    NormDrift { mode: usize, drift: f64 },

    #[error("estimate requested outside its validity window: {0}")]
    OutsideValidity(String),

    #[error("root bracketing failed: {0}")]
    Bracket(String),
}

fn mode_suffix(mode: Option<usize>) -> String {
    match mode {
        Some(m) => format!(" in mode {m}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Attaches a mode/channel index to an integration failure.
    pub fn in_mode(self, mode: usize) -> Self {
        match self {
            Error::Integration { reason, .. } => Error::Integration {
                mode: Some(mode),
                reason,
            },
            other => other,
        }
    }

    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Integration { .. } | Error::NormDrift { .. } | Error::Bracket(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
