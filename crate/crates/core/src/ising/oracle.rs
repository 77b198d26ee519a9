//! Brute-force `2^N` treatment of the Ising chain, used to validate the
//! free-fermion solution. Built directly from bit operations so it shares no
//! code with the fermion side.

use nalgebra::DMatrix;

use crate::ising::exact::{sector_spectrum, IsingParams, Sector};
use crate::linalg::{self, dot, evolve_ramp, SparseMatrix};
use crate::ode::IntegratorOptions;
use crate::spin::{self, check_dense};
use crate::{FieldSchedule, Result, Units, C64};

/// `−J Σ σz⁽ⁱ⁾σz⁽ⁱ⁺¹⁾` on a ring of `n` sites.
pub fn interaction_part(n: usize, coupling: f64) -> Result<SparseMatrix> {
    check_dense(n, "dense Ising oracle")?;
    let dim = 1usize << n;
    let trip = (0..dim)
        .map(|s| {
            let rotated = (s >> 1) | ((s & 1) << (n - 1));
            let domain_walls = (s ^ rotated).count_ones() as f64;
            let aligned = n as f64 - domain_walls;
            (s, s, C64::new(-coupling * (aligned - domain_walls), 0.0))
        })
        .collect();
    Ok(SparseMatrix::from_triplets(dim, trip))
}

/// `−J Σ σx⁽ⁱ⁾` on a ring of `n` sites.
pub fn field_part(n: usize, coupling: f64) -> Result<SparseMatrix> {
    check_dense(n, "dense Ising oracle")?;
    let dim = 1usize << n;
    let mut trip = Vec::with_capacity(dim * n);
    for s in 0..dim {
        for i in 0..n {
            trip.push((s ^ (1 << i), s, C64::new(-coupling, 0.0)));
        }
    }
    Ok(SparseMatrix::from_triplets(dim, trip))
}

/// Full dense Hamiltonian `−J Σ (σzσz + g σx)`; any `2 ≤ n ≤ 14`.
pub fn dense_hamiltonian(n: usize, coupling: f64, g: f64) -> Result<SparseMatrix> {
    let zz = interaction_part(n, coupling)?;
    Ok(zz.add_scaled(C64::new(g, 0.0), &field_part(n, coupling)?))
}

/// Sorted eigenvalues of the full dense Hamiltonian.
pub fn dense_spectrum(n: usize, coupling: f64, g: f64) -> Result<Vec<f64>> {
    let h = dense_hamiltonian(n, coupling, g)?;
    Ok(linalg::symmetric_eigenvalues(
        h.to_dense_real().expect("Ising matrix is real"),
    ))
}

/// Sorted eigenvalues restricted to `Z₂ = z2`.
pub fn dense_sector_spectrum(n: usize, coupling: f64, g: f64, z2: i8) -> Result<Vec<f64>> {
    let h = dense_hamiltonian(n, coupling, g)?;
    Ok(linalg::symmetric_eigenvalues(
        spin::z2_project(&h, n, z2).map(|v| v.re),
    ))
}

/// Ground state (energy, full-space vector) within the `Z₂ = z2` sector.
pub fn dense_sector_ground(n: usize, coupling: f64, g: f64, z2: i8) -> Result<(f64, Vec<C64>)> {
    let h = dense_hamiltonian(n, coupling, g)?;
    sector_ground_of(&h, n, z2)
}

pub(crate) fn sector_ground_of(h: &SparseMatrix, n: usize, z2: i8) -> Result<(f64, Vec<C64>)> {
    let block: DMatrix<f64> = spin::z2_project(h, n, z2).map(|v| v.re);
    let (vals, vecs) = linalg::real_symmetric_eigen(block);
    let coords: Vec<C64> = vecs.column(0).iter().copied().collect();
    Ok((vals[0], spin::z2_embed(&coords, n, z2)))
}

/// Additive constants `(even, odd)` that align the free-fermion sector
/// levels with the dense spectrum at one calibration point.
pub fn calibrate_offsets(params: &IsingParams) -> Result<(f64, f64)> {
    let n = params.n_sites;
    let mut out = [0.0; 2];
    for (slot, sector) in [Sector::Even, Sector::Odd].into_iter().enumerate() {
        let spec = sector_spectrum(params, sector);
        let fermion_low = spec.lowest_level().energy - spec.additive_offset;
        let dense_low = dense_sector_spectrum(n, params.coupling, params.field, sector.z2())?[0];
        out[slot] = dense_low - fermion_low;
    }
    Ok((out[0], out[1]))
}

/// Result of a full-space dense sweep.
#[derive(Debug, Clone)]
pub struct DenseSweep {
    /// `1 − |⟨E₀(g₁)|ψ(T)⟩|²`
    pub p_leave: f64,
    /// `⟨ψ(T)|H(g₁)|ψ(T)⟩ − E₀(g₁)`
    pub mean_energy_above_ground: f64,
    pub ground_energy: f64,
    /// Largest deviation of the normalised `⟨Z₂⟩` from its initial value at
    /// the checkpoints.
    pub z2_drift: f64,
    /// Largest deviation of `⟨T⟩` from its initial value at the checkpoints.
    pub translation_drift: f64,
    pub state: Vec<C64>,
}

/// Time-dependent Schrödinger evolution of the whole `2^n` space, starting in
/// the even-sector ground state at `g₀`.
pub fn dense_sweep(
    n: usize,
    coupling: f64,
    schedule: &FieldSchedule,
    opts: IntegratorOptions,
    units: Units,
) -> Result<DenseSweep> {
    let zz = interaction_part(n, coupling)?;
    let x = field_part(n, coupling)?;
    let h0 = zz.add_scaled(C64::new(schedule.g_start, 0.0), &x);
    let (_, mut psi) = sector_ground_of(&h0, n, 1)?;

    let z2 = spin::z2_operator(n);
    let tr = spin::translation_operator(n);
    let expect = |op: &SparseMatrix, v: &[C64]| op.inner(v, v) / linalg::norm_sqr(v);
    let z2_0 = expect(&z2, &psi);
    let t_0 = expect(&tr, &psi);
    let checkpoints: Vec<f64> = (1..8).map(|i| schedule.duration * i as f64 / 8.0).collect();
    let (mut z2_drift, mut translation_drift) = (0.0f64, 0.0f64);
    evolve_ramp(&zz, &x, schedule, units.hbar, opts, &mut psi, &checkpoints, |_, v| {
        z2_drift = z2_drift.max((expect(&z2, v) - z2_0).norm());
        translation_drift = translation_drift.max((expect(&tr, v) - t_0).norm());
    })?;
    z2_drift = z2_drift.max((expect(&z2, &psi) - z2_0).norm());
    translation_drift = translation_drift.max((expect(&tr, &psi) - t_0).norm());

    let h1 = zz.add_scaled(C64::new(schedule.g_end, 0.0), &x);
    let (e0, ground) = sector_ground_of(&h1, n, 1)?;
    let overlap = dot(&ground, &psi).norm_sqr();
    let energy = h1.inner(&psi, &psi).re / linalg::norm_sqr(&psi);
    Ok(DenseSweep {
        p_leave: 1.0 - overlap,
        mean_energy_above_ground: energy - e0,
        ground_energy: e0,
        z2_drift,
        translation_drift,
        state: psi,
    })
}

/// `⟨E₀(g₀)|H(g₁)|E₀(g₀)⟩ − E₀(g₁)`: the energy deposited by a sudden quench.
pub fn sudden_quench_energy(n: usize, coupling: f64, g0: f64, g1: f64) -> Result<f64> {
    let (_, psi) = dense_sector_ground(n, coupling, g0, 1)?;
    let h1 = dense_hamiltonian(n, coupling, g1)?;
    let (e0, _) = sector_ground_of(&h1, n, 1)?;
    Ok(h1.inner(&psi, &psi).re - e0)
}
