//! Strong-field series for the Heisenberg chain, to first order in `1/g`.
//!
//! The zeroth-order states are `x`-basis product states: `|→⟩` for the
//! ground state and the two-flip translation-invariant states
//! `Υ_{20j} = N^{−1/2} Σ_i |i, i+j⟩`, `j = 1..(N−1)/2`, for group 2.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::heisenberg::HeisenbergParams;
use crate::ising::adiabatic::Validity;
use crate::spin::x_basis_state;
use crate::{FieldSchedule, Units, C64};

/// Field-to-anisotropy ratio from which the series is considered valid.
pub const VALIDITY_RATIO: f64 = 5.0;

/// `g / max|Δξ|`: valid from [`VALIDITY_RATIO`], invalid at or below 1.
pub fn field_validity(g: f64, params: &HeisenbergParams) -> Validity {
    let m = params.max_anisotropy();
    if m == 0.0 {
        return Validity::Valid;
    }
    let r = g / m;
    if r >= VALIDITY_RATIO {
        Validity::Valid
    } else if r > 1.0 {
        Validity::Marginal
    } else {
        Validity::Invalid
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbativeLevels {
    pub n_sites: usize,
    pub field: f64,
    pub validity: Validity,
    /// `E₀/(JN) ≈ e0_series[0]·g + e0_series[1]`.
    pub e0_series: [f64; 2],
    /// `E_{20d}/(JN) ≈ s[0]·g + s[1]` for `d = 1..(N−1)/2` (index `d − 1`).
    pub e20d_series: Vec<[f64; 2]>,
    /// `|φ₀⁽¹⁾⟩` in the `Υ_{20j}` basis (index `j − 1`).
    pub phi0_first: Vec<f64>,
    /// `|φ_{20d}⁽⁰⁾⟩` in the `Υ_{20j}` basis, per `d`.
    pub phi20d_zero: Vec<Vec<f64>>,
    /// `⟨→|φ_{20d}⁽¹⁾⟩`, per `d`.
    pub arrow_phi20d_first: Vec<f64>,
}

impl PerturbativeLevels {
    /// Series value of `E₀/(JN)` at the stored field.
    pub fn e0(&self) -> f64 {
        self.e0_series[0] * self.field + self.e0_series[1]
    }

    /// Series value of `E_{20d}/(JN)`, `d ≥ 1`.
    pub fn e20d(&self, d: usize) -> f64 {
        let s = self.e20d_series[d - 1];
        s[0] * self.field + s[1]
    }

    /// `|φ₀⁽⁰⁾⟩ + (1/g)|φ₀⁽¹⁾⟩`, normalized, in the product `σz` basis.
    pub fn ground_state(&self) -> Vec<C64> {
        let mut v = x_basis_state(self.n_sites, &[]);
        add_upsilon(&mut v, self.n_sites, &self.phi0_first, 1.0 / self.field);
        normalize(&mut v);
        v
    }

    /// `|φ_{20d}⁽⁰⁾⟩` in the product `σz` basis.
    pub fn group2_state(&self, d: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); 1 << self.n_sites];
        add_upsilon(&mut v, self.n_sites, &self.phi20d_zero[d - 1], 1.0);
        v
    }
}

/// `Υ_{20j}` in the product `σz` basis.
pub fn upsilon(n_sites: usize, j: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); 1 << n_sites];
    let norm = (n_sites as f64).sqrt().recip();
    for i in 0..n_sites {
        let s = x_basis_state(n_sites, &[i, (i + j) % n_sites]);
        v.iter_mut().zip(s).for_each(|(a, b)| *a += b * norm);
    }
    v
}

fn add_upsilon(v: &mut [C64], n_sites: usize, coeffs: &[f64], scale: f64) {
    for (j, &c) in coeffs.iter().enumerate() {
        if c != 0.0 {
            let u = upsilon(n_sites, j + 1);
            v.iter_mut().zip(u).for_each(|(a, b)| *a += b * (c * scale));
        }
    }
}

fn normalize(v: &mut [C64]) {
    let n = crate::linalg::norm_sqr(v).sqrt();
    v.iter_mut().for_each(|a| *a /= n);
}

/// Series coefficients at `params.field`.
pub fn perturbative_levels(params: &HeisenbergParams) -> PerturbativeLevels {
    let n = params.n_sites;
    let nf = n as f64;
    let [dx, dy, dz] = params.delta;
    let pairs = (n - 1) / 2;
    let arg = |d: usize, j: usize| 2.0 * PI * (d * j) as f64 / (nf + 1.0);

    let e20d_series = (1..=pairs)
        .map(|d| {
            [
                -(1.0 - 4.0 / nf),
                -dx * (1.0 - 8.0 / nf) + 4.0 / nf * (dz + dy).abs() * arg(d, 1).cos(),
            ]
        })
        .collect();
    // Σ_j |j, j+1⟩ = √N Υ_{201}.
    let mut phi0_first = vec![0.0; pairs];
    phi0_first[0] = 0.25 * (dz - dy) * nf.sqrt();
    let phi20d_zero = (1..=pairs)
        .map(|d| {
            (1..=pairs)
                .map(|j| 2.0 / (nf + 1.0).sqrt() * arg(d, j).sin())
                .collect()
        })
        .collect();
    let arrow_phi20d_first = (1..=pairs)
        .map(|d| -0.5 * (dz - dy) * (nf / (nf + 1.0)).sqrt() * arg(d, 1).sin())
        .collect();
    PerturbativeLevels {
        n_sites: n,
        field: params.field,
        validity: field_validity(params.field, params),
        e0_series: [-1.0, -dx],
        e20d_series,
        phi0_first,
        phi20d_zero,
        arrow_phi20d_first,
    }
}

/// `ℋ_{d0}(s) = ⟨ψ_{20d}|H′|ψ₀⟩ ≈ −2J(Δz − Δy)(g′/g) √(N/(N+1)) sin(2πd/(N+1))`
/// (units of `J`), with `H′ = −J g′ Σσx`.
pub fn matrix_element_hd0(d: usize, s: f64, params: &HeisenbergParams, schedule: &FieldSchedule) -> f64 {
    let nf = params.n_sites as f64;
    let [_, dy, dz] = params.delta;
    let g = schedule.field_at(s);
    -2.0 * params.coupling * (dz - dy) * schedule.dg_ds() / g
        * (nf / (nf + 1.0)).sqrt()
        * (2.0 * PI * d as f64 / (nf + 1.0)).sin()
}

/// First-order degenerate perturbation theory for group 2 at `k = 0`, solved
/// exactly within the `Υ_{20j}` block.
///
/// The block is a hopping chain `j = 1..M`, `M = (N−1)/2`, with amplitude
/// `−2(Δz + Δy)`, an extra `−4Δx` at `j = 1` (adjacent flips share a bond) and
/// a self-loop `−2(Δz + Δy)` at `j = M` (distance `M + 1` folds back onto `M`
/// on the ring). The closed-form cosine band of [`PerturbativeLevels`] drops
/// the two boundary terms, so it does not converge to the dense levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Group2FirstOrder {
    pub n_sites: usize,
    pub field: f64,
    /// `E_{20d}/(JN)` ascending, `d = 1..M`.
    pub energies: Vec<f64>,
    /// `Υ_{20j}` coefficients of each state (index `[d − 1][j − 1]`).
    pub states: Vec<Vec<f64>>,
}

pub fn group2_first_order(params: &HeisenbergParams) -> Group2FirstOrder {
    let n = params.n_sites;
    let nf = n as f64;
    let m = (n - 1) / 2;
    let [dx, dy, dz] = params.delta;
    let hop = -2.0 * (dz + dy);
    let mut h = nalgebra::DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        h[(j, j)] = -params.field * (nf - 4.0) - dx * (nf - 8.0);
        if j + 1 < m {
            h[(j, j + 1)] = hop;
            h[(j + 1, j)] = hop;
        }
    }
    h[(0, 0)] -= 4.0 * dx;
    h[(m - 1, m - 1)] += hop;
    let (vals, vecs) = crate::linalg::real_symmetric_eigen(h);
    Group2FirstOrder {
        n_sites: n,
        field: params.field,
        energies: vals.iter().map(|e| e / nf).collect(),
        states: (0..m).map(|d| vecs.column(d).iter().map(|c| c.re).collect()).collect(),
    }
}

impl Group2FirstOrder {
    /// `ℋ_{d0}(s)` to first order with these states (units of `J`); `d` counts
    /// by ascending energy.
    pub fn matrix_element(&self, d: usize, s: f64, params: &HeisenbergParams, schedule: &FieldSchedule) -> f64 {
        let [_, dy, dz] = params.delta;
        let g = schedule.field_at(s);
        -params.coupling * (dz - dy) * schedule.dg_ds() / g
            * (self.n_sites as f64).sqrt()
            * self.states[d - 1][0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergEstimate {
    pub p_e: f64,
    pub validity: Validity,
}

/// `p_E ≈ (ħ²/(2⁸J²)) (Δz − Δy)² ((g₀ − g₁)²/T²) N/g₁⁶`.
pub fn pe_heisenberg(params: &HeisenbergParams, schedule: &FieldSchedule, units: Units) -> HeisenbergEstimate {
    let [_, dy, dz] = params.delta;
    let (g0, g1) = (schedule.g_start, schedule.g_end);
    let hj = units.hbar / params.coupling;
    let p_e = hj * hj / 256.0 * (dz - dy).powi(2) * (g0 - g1).powi(2) / schedule.duration.powi(2)
        * params.n_sites as f64
        / g1.powi(6);
    HeisenbergEstimate {
        p_e,
        validity: field_validity(g1, params),
    }
}
