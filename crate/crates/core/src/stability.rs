//! Symmetry-breaking perturbations `V = J Σ_j ε_j n̂⁽ʲ⁾·σ⁽ʲ⁾` during a sweep.
//!
//! Both models lose the symmetries that the reduced treatments rely on, so
//! everything here evolves the full `2^N` space.

use serde::{Deserialize, Serialize};

use crate::heisenberg::model::{field_part, interaction_part};
use crate::heisenberg::sweep::sector_ground;
use crate::heisenberg::{sector_basis, HeisenbergParams};
use crate::heisenberg::classify::SectorOperators;
use crate::ising::adiabatic::Validity;
use crate::ising::dynamics::spectrum_width;
use crate::ising::oracle::{self, sector_ground_of};
use crate::ising::IsingParams;
use crate::linalg::{dot, evolve_ramp, lowest_eigenpair, norm_sqr, SparseMatrix};
use crate::ode::IntegratorOptions;
use crate::spin;
use crate::{Error, FieldSchedule, Result, Units, C64};

/// Largest chain for the perturbed Ising sweep.
pub const ISING_MAX_SITES: usize = 12;
/// Largest chain for the perturbed Heisenberg sweep.
pub const HEISENBERG_MAX_SITES: usize = 11;

/// Default schedule for the Ising heating scan: `g₀ = 5`, `g₁ = 0`, `ġ = −0.01`.
pub fn default_ising_schedule() -> FieldSchedule {
    FieldSchedule::from_rate(5.0, 0.0, -0.01).expect("valid constants")
}

/// Per-site strengths and unit directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub strengths: Vec<f64>,
    pub directions: Vec<[f64; 3]>,
}

impl PerturbationSpec {
    pub fn new(strengths: Vec<f64>, directions: Vec<[f64; 3]>) -> Result<Self> {
        if strengths.len() != directions.len() {
            return Err(Error::invalid("one direction per strength required"));
        }
        if strengths.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("strengths must be finite"));
        }
        for d in &directions {
            let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::invalid(format!("direction {d:?} is not a unit vector")));
            }
        }
        Ok(PerturbationSpec { strengths, directions })
    }

    /// Same strength and direction on every site.
    pub fn uniform(n_sites: usize, strength: f64, direction: [f64; 3]) -> Result<Self> {
        Self::new(vec![strength; n_sites], vec![direction; n_sites])
    }

    pub fn zero(n_sites: usize) -> Self {
        PerturbationSpec {
            strengths: vec![0.0; n_sites],
            directions: vec![[1.0, 0.0, 0.0]; n_sites],
        }
    }

    pub fn n_sites(&self) -> usize {
        self.strengths.len()
    }

    /// `ε = sqrt((1/N) Σ_j ε_j² |n_x⁽ʲ⁾ + i n_y⁽ʲ⁾|²)`
    pub fn effective_strength(&self) -> f64 {
        let n = self.n_sites() as f64;
        let sum: f64 = self
            .strengths
            .iter()
            .zip(&self.directions)
            .map(|(e, d)| e * e * (d[0] * d[0] + d[1] * d[1]))
            .sum();
        (sum / n).sqrt()
    }

    /// Every strength multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        PerturbationSpec {
            strengths: self.strengths.iter().map(|e| e * factor).collect(),
            directions: self.directions.clone(),
        }
    }

    /// `V/J` as a sparse matrix on the product `σz` basis.
    pub fn operator(&self) -> SparseMatrix {
        let n = self.n_sites();
        self.strengths.iter().zip(&self.directions).enumerate().fold(
            SparseMatrix::from_triplets(1 << n, Vec::new()),
            |acc, (j, (&e, &d))| acc.add_scaled(C64::new(e, 0.0), &spin::single_site(n, j, d)),
        )
    }

    /// Random directions (isotropic) and strengths (uniform in `[0.5, 1.5]`),
    /// rescaled so that [`effective_strength`](Self::effective_strength) equals
    /// `epsilon`.
    pub fn random(n_sites: usize, epsilon: f64, rng: &mut impl rand::RngExt) -> Self {
        loop {
            let directions: Vec<[f64; 3]> = (0..n_sites)
                .map(|_| loop {
                    let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
                    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if r > 1e-3 && r <= 1.0 {
                        break v.map(|x| x / r);
                    }
                })
                .collect();
            let strengths = (0..n_sites).map(|_| rng.random_range(0.5..1.5)).collect();
            let spec = PerturbationSpec { strengths, directions };
            let eff = spec.effective_strength();
            if eff > 1e-6 {
                return spec.scaled(epsilon / eff);
            }
        }
    }
}

/// Outcome of a perturbed Ising sweep, measured with the unperturbed `H(g₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbedIsingReport {
    pub epsilon: f64,
    /// `(⟨H(g₁)⟩ − E₀)/ΔE`, `ΔE` the width of the spectrum at `g₁`.
    pub heating_ratio: f64,
    pub mean_energy_above_ground: f64,
    pub spectrum_width: f64,
    /// Weight on the ground state (lowest `Z₂ = +1` state).
    pub ground_weight: f64,
    /// Weight on the first excited state (lowest `Z₂ = −1` state), which is
    /// asymptotically degenerate with the ground state for `g₁ < 1`.
    pub first_excited_weight: f64,
    /// Everything else.
    pub higher_weight: f64,
}

/// Dense sweep of the Ising chain with `V = Jεσz⁽⁰⁾` switched on throughout,
/// starting from the unperturbed ground state at `g₀`.
pub fn ising_perturbed_sweep(
    params: &IsingParams,
    schedule: &FieldSchedule,
    epsilon: f64,
    opts: IntegratorOptions,
    units: Units,
) -> Result<PerturbedIsingReport> {
    let n = params.n_sites;
    if n > ISING_MAX_SITES {
        return Err(Error::SizeCap {
            n_sites: n,
            cap: ISING_MAX_SITES,
            what: "perturbed Ising sweep",
        });
    }
    let j = params.coupling;
    let zz = oracle::interaction_part(n, j)?;
    let x = oracle::field_part(n, j)?;
    let v = spin::single_site(n, 0, [0.0, 0.0, 1.0]);
    let fixed = zz.add_scaled(C64::new(j * epsilon, 0.0), &v);

    let h0 = zz.add_scaled(C64::new(schedule.g_start, 0.0), &x);
    let (_, mut psi) = sector_ground_of(&h0, n, 1)?;
    evolve_ramp(&fixed, &x, schedule, units.hbar, opts, &mut psi, &[], |_, _| {})?;
    let norm = norm_sqr(&psi);

    let g1 = schedule.g_end;
    let h1 = zz.add_scaled(C64::new(g1, 0.0), &x);
    let (e_even, even) = sector_ground_of(&h1, n, 1)?;
    let (_, odd) = sector_ground_of(&h1, n, -1)?;
    let w0 = dot(&even, &psi).norm_sqr() / norm;
    let w1 = dot(&odd, &psi).norm_sqr() / norm;
    let mean = h1.inner(&psi, &psi).re / norm - e_even;
    let width = spectrum_width(&params.with_field(g1), g1);
    Ok(PerturbedIsingReport {
        epsilon,
        heating_ratio: mean / width,
        mean_energy_above_ground: mean,
        spectrum_width: width,
        ground_weight: w0,
        first_excited_weight: w1,
        higher_weight: (1.0 - w0 - w1).max(0.0),
    })
}

/// Closed-form bound with its validity flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationBound {
    pub epsilon: f64,
    pub p_v: f64,
    pub validity: Validity,
}

/// `p_V = (ε/(2g₀))² N`. Valid when `g₀` is at least ten times every `|ε_j|`
/// and `|Δξ|`; marginal down to a factor of two.
pub fn heisenberg_perturbation_bound(spec: &PerturbationSpec, params: &HeisenbergParams, g0: f64) -> PerturbationBound {
    let eps = spec.effective_strength();
    let scale = spec
        .strengths
        .iter()
        .map(|e| e.abs())
        .fold(params.max_anisotropy(), f64::max);
    let validity = if scale == 0.0 || g0 >= 10.0 * scale {
        Validity::Valid
    } else if g0 >= 2.0 * scale {
        Validity::Marginal
    } else {
        Validity::Invalid
    };
    PerturbationBound {
        epsilon: eps,
        p_v: (eps / (2.0 * g0)).powi(2) * spec.n_sites() as f64,
        validity,
    }
}

/// Numeric counterpart of [`heisenberg_perturbation_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbedHeisenbergReport {
    /// `1 − |⟨ground(H(g₁) + V)|ψ(T)⟩|²`
    pub p_v: f64,
    /// `1 − |⟨ground(H(g₀) + V)|ψ(0)⟩|²`: the part already present when `V`
    /// is switched on.
    pub initial_mismatch: f64,
}

/// Full-space sweep under `H(t) + V`, starting from the unperturbed ground
/// state at `g₀`.
pub fn heisenberg_perturbed_sweep(
    params: &HeisenbergParams,
    schedule: &FieldSchedule,
    spec: &PerturbationSpec,
    opts: IntegratorOptions,
    units: Units,
) -> Result<PerturbedHeisenbergReport> {
    let n = params.n_sites;
    if n > HEISENBERG_MAX_SITES {
        return Err(Error::SizeCap {
            n_sites: n,
            cap: HEISENBERG_MAX_SITES,
            what: "perturbed Heisenberg sweep",
        });
    }
    if spec.n_sites() != n {
        return Err(Error::invalid("perturbation spec length differs from the chain"));
    }
    let basis = sector_basis(n, 0, 1)?;
    let ops = SectorOperators::new(params, &basis)?;
    let (_, start) = sector_ground(&ops, schedule.g_start);
    let mut psi = basis.embed(&start);

    let fixed = interaction_part(params)?.add_scaled(C64::new(params.coupling, 0.0), &spec.operator());
    let field = field_part(params)?;
    let ground_of = |g: f64, guess: &[C64]| lowest_eigenpair(&fixed.add_scaled(C64::new(g, 0.0), &field), guess, 1e-11).1;

    let g0_ground = ground_of(schedule.g_start, &psi);
    let initial_mismatch = 1.0 - dot(&g0_ground, &psi).norm_sqr();
    evolve_ramp(&fixed, &field, schedule, units.hbar, opts, &mut psi, &[], |_, _| {})?;
    let norm = norm_sqr(&psi);
    let g1_ground = ground_of(schedule.g_end, &psi);
    Ok(PerturbedHeisenbergReport {
        p_v: 1.0 - dot(&g1_ground, &psi).norm_sqr() / norm,
        initial_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effective_strength_uses_transverse_components() {
        let x = PerturbationSpec::uniform(5, 0.3, [1.0, 0.0, 0.0]).unwrap();
        assert!((x.effective_strength() - 0.3).abs() < 1e-15);
        let z = PerturbationSpec::uniform(5, 0.3, [0.0, 0.0, 1.0]).unwrap();
        assert_eq!(z.effective_strength(), 0.0);
        let p = HeisenbergParams::new(5, 1.0, [0.1, 0.3, 1.0], 10.0).unwrap();
        assert_eq!(heisenberg_perturbation_bound(&z, &p, 10.0).p_v, 0.0);
    }

    #[test]
    fn bound_example() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let spec = PerturbationSpec::uniform(9, 0.1, [s, s, 0.0]).unwrap();
        let p = HeisenbergParams::new(9, 1.0, [0.1, 0.3, 1.0], 10.0).unwrap();
        let b = heisenberg_perturbation_bound(&spec, &p, 10.0);
        assert!((b.p_v - 2.25e-4).abs() < 1e-15);
        assert_eq!(b.validity, Validity::Valid);
    }

    #[test]
    fn spec_validation() {
        assert!(PerturbationSpec::new(vec![0.1], vec![[1.0, 1.0, 0.0]]).is_err());
        assert!(PerturbationSpec::new(vec![0.1, 0.2], vec![[1.0, 0.0, 0.0]]).is_err());
    }

    #[test]
    fn operator_is_hermitian() {
        let s = 1.0 / 3f64.sqrt();
        let spec = PerturbationSpec::new(vec![0.1, -0.2, 0.3], vec![[s, s, s], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        assert!(spec.operator().hermiticity_defect() < 1e-15);
    }
}
