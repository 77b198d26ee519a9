//! Sector diagonalization and the `(n, k, d)` labelling of eigenstates.
//!
//! The group index `n` is read off at a strong reference field, where group
//! `n` has `N − 2n` for `⟨Σσx⟩`, and carried down to the requested field by
//! following group subspaces from one field step to the next.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::heisenberg::model::{field_part, interaction_part};
use crate::heisenberg::sector::SectorBasis;
use crate::heisenberg::HeisenbergParams;
use crate::linalg::eigen_auto;
use crate::{spin, Error, Result, C64};

/// Overlap weight below which a group assignment is flagged as ambiguous.
pub const TRACKING_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryLabels {
    pub z2: i8,
    /// `k` with `T = e^{−i2πk/N}`.
    pub momentum_index: usize,
    pub group_index: usize,
    /// 1-based position by energy within `(n, k)`.
    pub degeneracy_index: usize,
    /// Set when some tracking step matched this state with weight below
    /// [`TRACKING_THRESHOLD`].
    pub flagged: bool,
}

/// Eigenpairs of one sector at one field.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub n_sites: usize,
    pub k: usize,
    pub z2: i8,
    pub field: f64,
    /// Ascending (units of `J`).
    pub energies: Vec<f64>,
    /// Eigenvectors as columns, in sector coordinates.
    pub states: DMatrix<C64>,
    /// Filled by [`classify_eigenstates`]; empty otherwise.
    pub labels: Vec<SymmetryLabels>,
}

impl EigenDecomposition {
    pub fn state(&self, i: usize) -> Vec<C64> {
        self.states.column(i).iter().copied().collect()
    }

    /// Index of the state with labels `(n, d)`, if present.
    pub fn find(&self, group: usize, d: usize) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| l.group_index == group && l.degeneracy_index == d)
    }
}

/// Sector-projected pieces `H = A + g B`.
pub(crate) struct SectorOperators {
    pub fixed: DMatrix<C64>,
    pub field: DMatrix<C64>,
}

impl SectorOperators {
    pub fn new(params: &HeisenbergParams, basis: &SectorBasis) -> Result<Self> {
        if basis.n_sites != params.n_sites {
            return Err(Error::invalid("sector basis built for a different chain"));
        }
        Ok(SectorOperators {
            fixed: basis.project(&interaction_part(params)?),
            field: basis.project(&field_part(params)?),
        })
    }

    pub fn at(&self, g: f64) -> DMatrix<C64> {
        &self.fixed + &self.field * C64::new(g, 0.0)
    }
}

/// Diagonalizes `H(params.field)` in one sector; labels are left empty.
pub fn diagonalize(params: &HeisenbergParams, basis: &SectorBasis) -> Result<EigenDecomposition> {
    let ops = SectorOperators::new(params, basis)?;
    Ok(decompose(&ops, basis, params.field))
}

fn decompose(ops: &SectorOperators, basis: &SectorBasis, g: f64) -> EigenDecomposition {
    let (energies, states) = eigen_auto(ops.at(g));
    EigenDecomposition {
        n_sites: basis.n_sites,
        k: basis.k,
        z2: basis.z2,
        field: g,
        energies,
        states,
        labels: Vec::new(),
    }
}

/// Reference field for the group assignment.
pub fn reference_field(params: &HeisenbergParams) -> f64 {
    50.0 * params.max_anisotropy().max(1.0)
}

/// Labels for `decomposition`, which must come from [`diagonalize`] on `basis`.
pub fn classify_eigenstates(
    params: &HeisenbergParams,
    decomposition: &EigenDecomposition,
    basis: &SectorBasis,
) -> Result<Vec<SymmetryLabels>> {
    let mut out = classify_along(params, basis, &[decomposition.field])?;
    let labelled = out.pop().expect("one field requested");
    // Same matrix, same solver: the spectra agree state by state.
    debug_assert!(labelled
        .energies
        .iter()
        .zip(&decomposition.energies)
        .all(|(a, b)| (a - b).abs() <= 1e-9 * (1.0 + a.abs())));
    Ok(labelled.labels)
}

/// Labelled decompositions at each field in `fields` (any order), from one
/// continuation that starts at the reference field.
pub fn classify_along(
    params: &HeisenbergParams,
    basis: &SectorBasis,
    fields: &[f64],
) -> Result<Vec<EigenDecomposition>> {
    if fields.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
        return Err(Error::invalid("fields must be finite and nonnegative"));
    }
    let ops = SectorOperators::new(params, basis)?;
    let n = params.n_sites;
    let g_ref = reference_field(params).max(fields.iter().copied().fold(0.0, f64::max));

    // Group index at the reference field from ⟨Σσx⟩ = N − 2n.
    let sx = basis.project(&spin::sum_sx(n));
    let start = decompose(&ops, basis, g_ref);
    let mut groups: Vec<usize> = (0..start.energies.len())
        .map(|i| {
            let v = start.states.column(i);
            let m = (v.adjoint() * &sx * v)[(0, 0)].re;
            ((n as f64 - m) / 2.0).round().clamp(0.0, n as f64) as usize
        })
        .collect();
    let mut min_weight = vec![1.0f64; groups.len()];
    let mut prev = start;

    let mut order: Vec<usize> = (0..fields.len()).collect();
    order.sort_by(|&a, &b| fields[b].total_cmp(&fields[a]));
    let mut results: Vec<Option<EigenDecomposition>> = vec![None; fields.len()];
    for &fi in &order {
        let target = fields[fi];
        for g in continuation_path(prev.field, target) {
            let next = decompose(&ops, basis, g);
            let (new_groups, new_min) = track(&prev, &groups, &min_weight, &next);
            groups = new_groups;
            min_weight = new_min;
            prev = next;
        }
        let mut dec = prev.clone();
        dec.labels = assign_labels(&dec, &groups, &min_weight);
        results[fi] = Some(dec);
    }
    Ok(results.into_iter().map(|d| d.expect("every field visited")).collect())
}

/// Field values from `from` down to `to` (inclusive), geometric while large
/// and in steps of at most 0.02 below 1.
fn continuation_path(from: f64, to: f64) -> Vec<f64> {
    let mut path = Vec::new();
    let mut g = from;
    while g > to {
        let step = if g > 1.0 { g * 0.05 } else { 0.02 };
        g = (g - step).max(to);
        path.push(g);
    }
    if path.is_empty() && from != to {
        path.push(to);
    }
    path
}

fn track(
    prev: &EigenDecomposition,
    prev_groups: &[usize],
    prev_min: &[f64],
    next: &EigenDecomposition,
) -> (Vec<usize>, Vec<f64>) {
    let d = next.energies.len();
    let overlaps = (prev.states.adjoint() * &next.states).map(|c| c.norm_sqr());
    let n_groups = prev_groups.iter().copied().max().unwrap_or(0) + 1;
    let mut capacity = vec![0usize; n_groups];
    for &g in prev_groups {
        capacity[g] += 1;
    }
    // weight[j][n]: weight of new state j on the previous group-n subspace.
    let mut candidates = Vec::with_capacity(d * n_groups);
    let mut weight = vec![vec![0.0; n_groups]; d];
    for j in 0..d {
        for i in 0..d {
            weight[j][prev_groups[i]] += overlaps[(i, j)];
        }
        for g in 0..n_groups {
            if capacity[g] > 0 {
                candidates.push((weight[j][g], j, g));
            }
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut groups = vec![usize::MAX; d];
    for (_, j, g) in candidates {
        if groups[j] == usize::MAX && capacity[g] > 0 {
            groups[j] = g;
            capacity[g] -= 1;
        }
    }
    let min = (0..d)
        .map(|j| {
            let pred = (0..d)
                .max_by(|&a, &b| overlaps[(a, j)].total_cmp(&overlaps[(b, j)]))
                .unwrap();
            prev_min[pred].min(weight[j][groups[j]])
        })
        .collect();
    (groups, min)
}

fn assign_labels(dec: &EigenDecomposition, groups: &[usize], min_weight: &[f64]) -> Vec<SymmetryLabels> {
    let mut seen = std::collections::HashMap::new();
    // Energies are ascending, so counting in order gives d by energy.
    groups
        .iter()
        .zip(min_weight)
        .map(|(&g, &w)| {
            let d = seen.entry(g).or_insert(0usize);
            *d += 1;
            SymmetryLabels {
                z2: dec.z2,
                momentum_index: dec.k,
                group_index: g,
                degeneracy_index: *d,
                flagged: w < TRACKING_THRESHOLD,
            }
        })
        .collect()
}

/// Sector-projected `Σσx`, exposed for matrix-element checks.
pub fn sector_sum_sx(basis: &SectorBasis) -> DMatrix<C64> {
    basis.project(&spin::sum_sx(basis.n_sites))
}
