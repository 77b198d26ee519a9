use serde::{Deserialize, Serialize};

use crate::FieldSchedule;

/// Excitation probability of one transition channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelProbability {
    /// Model-specific channel label: momentum-pair index `n` for the Ising
    /// chain, degeneracy index `d` of the group-2 states for Heisenberg.
    pub index: usize,
    /// Excitation energy above the final ground state (units of `J`).
    pub energy: f64,
    pub probability: f64,
}

/// Outcome of one field sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcitationReport {
    /// Channels sorted by excitation energy, lowest first.
    pub channels: Vec<ChannelProbability>,
    /// `p_E = Σ p₀→ₙ`.
    pub p_total: f64,
    /// Probability of not ending in the final ground state, `1 − |⟨E₀|ψ⟩|²`.
    pub p_leave: f64,
    /// Set when `p_total` exceeds one (only possible outside the adiabatic regime).
    pub p_total_exceeds_one: bool,
    /// `⟨H⟩ − E₀` (units of `J`).
    pub mean_energy_above_ground: f64,
    /// Variance of `H` (units of `J²`).
    pub energy_variance: f64,
    /// Spectrum width `ΔE` used to normalise the heating ratio (units of `J`).
    pub spectrum_width: f64,
    pub schedule: FieldSchedule,
}

impl ExcitationReport {
    /// `(⟨H⟩ − E₀)/ΔE`
    pub fn heating_ratio(&self) -> f64 {
        self.mean_energy_above_ground / self.spectrum_width
    }

    /// The channel with the largest excitation probability.
    pub fn dominant_channel(&self) -> Option<&ChannelProbability> {
        self.channels
            .iter()
            .max_by(|a, b| a.probability.total_cmp(&b.probability))
    }
}
