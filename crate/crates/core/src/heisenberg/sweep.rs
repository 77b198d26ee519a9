//! Sweeps of the Heisenberg chain inside the `(k = 0, Z₂ = +1)` sector.

use serde::{Deserialize, Serialize};

use crate::heisenberg::classify::{classify_along, SectorOperators};
use crate::heisenberg::sector::{sector_basis, SectorBasis};
use crate::heisenberg::HeisenbergParams;
use crate::linalg::{dot, eigen_auto, evolve_ramp, norm_sqr, MatVec};
use crate::ode::IntegratorOptions;
use crate::report::{ChannelProbability, ExcitationReport};
use crate::{Error, FieldSchedule, Result, Units, C64};

/// Largest chain for sector-reduced sweeps.
pub const SWEEP_MAX_SITES: usize = 13;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeisenbergSweep {
    /// Channels are the group-2 states `ψ_{20d}(g₁)`, indexed by `d`.
    /// `p_leave` is `1 − |⟨E₀(g₁)|ψ(T)⟩|²`; `spectrum_width` is the width of
    /// the `(0, +1)` sector spectrum at `g₁`.
    pub report: ExcitationReport,
    /// Weight on final states outside group 2 (other than the ground state).
    pub other_groups_weight: f64,
    /// Final state in sector coordinates.
    #[serde(skip)]
    pub state: Vec<C64>,
}

/// Ground state of the `(0, +1)` sector at `g` (sector coordinates).
pub(crate) fn sector_ground(ops: &SectorOperators, g: f64) -> (f64, Vec<C64>) {
    let (vals, vecs) = eigen_auto(ops.at(g));
    (vals[0], vecs.column(0).iter().copied().collect())
}

/// Integrates the Schrödinger equation in the `(k = 0, Z₂ = +1)` sector from
/// its ground state at `g₀`.
pub fn tdse_sweep(
    params: &HeisenbergParams,
    schedule: &FieldSchedule,
    opts: IntegratorOptions,
    units: Units,
) -> Result<HeisenbergSweep> {
    if params.n_sites > SWEEP_MAX_SITES {
        return Err(Error::SizeCap {
            n_sites: params.n_sites,
            cap: SWEEP_MAX_SITES,
            what: "sector-reduced Heisenberg sweep",
        });
    }
    let basis = sector_basis(params.n_sites, 0, 1)?;
    let ops = SectorOperators::new(params, &basis)?;
    let (_, mut psi) = sector_ground(&ops, schedule.g_start);
    evolve_ramp(&ops.fixed, &ops.field, schedule, units.hbar, opts, &mut psi, &[], |_, _| {})?;
    let norm = norm_sqr(&psi);
    let drift = (norm - 1.0).abs();
    if drift > 1e-6 {
        return Err(Error::NormDrift { mode: 0, drift });
    }
    analyse_final(params, &basis, &ops, schedule, psi)
}

pub(crate) fn analyse_final(
    params: &HeisenbergParams,
    basis: &SectorBasis,
    ops: &SectorOperators,
    schedule: &FieldSchedule,
    psi: Vec<C64>,
) -> Result<HeisenbergSweep> {
    let g1 = schedule.g_end;
    let dec = classify_along(&params.with_field(g1), basis, &[g1])?
        .pop()
        .expect("one field");
    let e0 = dec.energies[0];
    let norm = norm_sqr(&psi);
    let mut channels = Vec::new();
    let mut other = 0.0;
    let mut ground_weight = 0.0;
    for (i, l) in dec.labels.iter().enumerate() {
        let w = dot(&dec.state(i), &psi).norm_sqr() / norm;
        if i == 0 {
            ground_weight = w;
        } else if l.group_index == 2 {
            channels.push(ChannelProbability {
                index: l.degeneracy_index,
                energy: dec.energies[i] - e0,
                probability: w,
            });
        } else {
            other += w;
        }
    }
    let h1 = ops.at(g1);
    let mut hpsi = vec![C64::new(0.0, 0.0); psi.len()];
    h1.mul_acc(C64::new(1.0, 0.0), &psi, &mut hpsi);
    let mean = dot(&psi, &hpsi).re / norm;
    let mean_sq = norm_sqr(&hpsi) / norm;
    channels.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.index.cmp(&b.index)));
    let p_total = channels.iter().map(|c| c.probability).sum::<f64>();
    let width = dec.energies.last().copied().unwrap_or(e0) - e0;
    Ok(HeisenbergSweep {
        report: ExcitationReport {
            channels,
            p_total,
            p_leave: 1.0 - ground_weight,
            p_total_exceeds_one: p_total > 1.0,
            mean_energy_above_ground: mean - e0,
            energy_variance: (mean_sq - mean * mean).max(0.0),
            spectrum_width: width,
            schedule: *schedule,
        },
        other_groups_weight: other,
        state: psi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stationary_sweep_stays_in_ground_state() {
        let p = HeisenbergParams::new(5, 1.0, [0.1, 0.3, 1.0], 10.0).unwrap();
        let s = FieldSchedule::constant(10.0, 3.0).unwrap();
        let r = tdse_sweep(&p, &s, IntegratorOptions::adaptive(1e-10, 1e-12), Units::default()).unwrap();
        assert!(r.report.p_leave < 1e-12);
    }

    #[test]
    fn size_cap() {
        let p = HeisenbergParams::new(15, 1.0, [0.1, 0.3, 1.0], 10.0).unwrap();
        let s = FieldSchedule::new(10.0, 5.0, 1.0).unwrap();
        assert!(matches!(
            tdse_sweep(&p, &s, IntegratorOptions::default(), Units::default()),
            Err(Error::SizeCap { .. })
        ));
    }
}
