//! Anisotropic Heisenberg chain
//! `H = −J Σ (Δx σxσx + Δy σyσy + Δz σzσz + g σx)` on a ring, treated by
//! dense exact diagonalization in translation/`Z₂` sectors.

pub mod classify;
pub mod model;
pub mod perturbative;
pub mod sector;
pub mod sweep;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use classify::{classify_eigenstates, diagonalize, EigenDecomposition, SymmetryLabels};
pub use model::{dense_hamiltonian, symmetry_operators};
pub use perturbative::{
    group2_first_order, matrix_element_hd0, pe_heisenberg, perturbative_levels, Group2FirstOrder, PerturbativeLevels,
};
pub use sector::{sector_basis, SectorBasis};
pub use sweep::{tdse_sweep, HeisenbergSweep};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergParams {
    pub n_sites: usize,
    pub coupling: f64,
    /// `(Δx, Δy, Δz)`
    pub delta: [f64; 3],
    pub field: f64,
}

impl HeisenbergParams {
    pub fn new(n_sites: usize, coupling: f64, delta: [f64; 3], field: f64) -> Result<Self> {
        if n_sites < 3 || n_sites.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "the Heisenberg chain needs an odd N >= 3, got {n_sites}"
            )));
        }
        if !(coupling > 0.0 && coupling.is_finite()) {
            return Err(Error::invalid(format!("coupling must be positive, got {coupling}")));
        }
        if delta.iter().any(|d| !d.is_finite()) {
            return Err(Error::invalid("anisotropies must be finite"));
        }
        if !(field >= 0.0 && field.is_finite()) {
            return Err(Error::invalid(format!("field must be nonnegative, got {field}")));
        }
        Ok(HeisenbergParams {
            n_sites,
            coupling,
            delta,
            field,
        })
    }

    pub fn with_field(&self, field: f64) -> Self {
        HeisenbergParams { field, ..*self }
    }

    /// `max(|Δx|, |Δy|, |Δz|)`
    pub fn max_anisotropy(&self) -> f64 {
        self.delta.iter().fold(0.0f64, |m, d| m.max(d.abs()))
    }
}
