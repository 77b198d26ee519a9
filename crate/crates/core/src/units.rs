use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Unit convention for ħ. The coupling `J` lives on the model parameters, so
/// the natural time unit of a run is `ħ/J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub hbar: f64,
}

impl Default for Units {
    fn default() -> Self {
        Units { hbar: 1.0 }
    }
}

impl Units {
    pub fn new(hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::invalid(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Units { hbar })
    }

    /// The time unit `ħ/J` for a given coupling.
    pub fn time_unit(&self, coupling: f64) -> f64 {
        self.hbar / coupling
    }
}
