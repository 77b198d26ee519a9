//! Free-fermion solution of the cyclic transverse-field Ising chain
//! `H = −J Σ (σz⁽ⁱ⁾σz⁽ⁱ⁺¹⁾ + g σx⁽ⁱ⁾)`.
//!
//! After the Jordan–Wigner mapping the Hilbert space splits by fermion-number
//! parity. Each parity sector is a set of independent fermion modes labelled by
//! an integer `k ∈ 0..N`:
//!
//! - even sector: `Λ_k = 2√(1 + g² + 2g cos(2πk/N))`,
//! - odd sector: `Λ̄_0 = 2(g − 1)` and `Λ̄_k = 2√(1 + g² − 2g cos(2πk/N))`.
//!
//! A many-body level is `E = offset − ½ Σ_k Λ_k + Σ_{occupied} Λ_k`, where the
//! number of occupied modes is even in the even sector and odd in the odd one.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parameters of the cyclic Ising chain. The free-fermion routines need an odd
/// number of sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsingParams {
    pub n_sites: usize,
    pub coupling: f64,
    pub field: f64,
}

impl IsingParams {
    pub fn new(n_sites: usize, coupling: f64, field: f64) -> Result<Self> {
        if n_sites < 3 || n_sites.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "the free-fermion chain needs an odd N >= 3, got {n_sites}"
            )));
        }
        if !(coupling > 0.0 && coupling.is_finite()) {
            return Err(Error::invalid(format!("coupling must be positive, got {coupling}")));
        }
        if !(field >= 0.0 && field.is_finite()) {
            return Err(Error::invalid(format!("field must be nonnegative, got {field}")));
        }
        Ok(IsingParams {
            n_sites,
            coupling,
            field,
        })
    }

    pub fn with_field(&self, field: f64) -> Self {
        IsingParams { field, ..*self }
    }

    /// Number of momentum pairs `(n, N − n)`, i.e. `(N − 1)/2`.
    pub fn n_pairs(&self) -> usize {
        (self.n_sites - 1) / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Even,
    Odd,
}

impl Sector {
    /// Required parity of the occupation count.
    fn parity(self) -> usize {
        match self {
            Sector::Even => 0,
            Sector::Odd => 1,
        }
    }

    /// Eigenvalue of `Z₂ = Π σx` on this sector.
    pub fn z2(self) -> i8 {
        match self {
            Sector::Even => 1,
            Sector::Odd => -1,
        }
    }
}

impl std::fmt::Display for Sector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sector::Even => "even",
            Sector::Odd => "odd",
        })
    }
}

/// A single fermion mode of one parity sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FermionMode {
    pub index: usize,
    pub n_sites: usize,
    pub sector: Sector,
}

impl FermionMode {
    pub fn new(index: usize, n_sites: usize, sector: Sector) -> Self {
        assert!(index < n_sites, "mode index {index} out of range for N = {n_sites}");
        FermionMode {
            index,
            n_sites,
            sector,
        }
    }

    /// `2πk/N` in radians.
    pub fn momentum(&self) -> f64 {
        2.0 * PI * self.index as f64 / self.n_sites as f64
    }

    /// Mode paired with this one by `k → −k`.
    pub fn partner(&self) -> FermionMode {
        FermionMode {
            index: (self.n_sites - self.index) % self.n_sites,
            ..*self
        }
    }
}

fn angle(k: usize, n: usize) -> f64 {
    2.0 * PI * (k % n) as f64 / n as f64
}

/// `cos(2πk/N)` evaluated on `min(k, N − k)` so that `k ↔ N − k` agree bit for bit.
fn cos_sym(k: usize, n: usize) -> f64 {
    let k = k % n;
    angle(k.min(n - k), n).cos()
}

/// Even-sector single-fermion energy `Λ_k` (units of `J`).
pub fn lambda_even(k: usize, g: f64, n: usize) -> f64 {
    2.0 * (1.0 + g * g + 2.0 * g * cos_sym(k, n)).max(0.0).sqrt()
}

/// Odd-sector single-fermion energy `Λ̄_k` (units of `J`); `Λ̄_0 = 2(g − 1)`
/// carries a sign.
pub fn lambda_odd(k: usize, g: f64, n: usize) -> f64 {
    if k.is_multiple_of(n) {
        2.0 * (g - 1.0)
    } else {
        2.0 * (1.0 + g * g - 2.0 * g * cos_sym(k, n)).max(0.0).sqrt()
    }
}

/// Bogoliubov angle `θ_k(g)` of the even-sector pair `(k, −k)`.
///
/// `θ_k = −atan2(sin(2πk/N), g + cos(2πk/N))`; the sign makes
/// `(dθ_k/dg)(dg/ds)` coincide with `θ′_k(s)` of
/// [`crate::ising::adiabatic::theta_prime`].
pub fn bogoliubov_angle(k: usize, g: f64, n: usize) -> f64 {
    let q = angle(k, n);
    -(q.sin()).atan2(g + q.cos())
}

/// Analytic `dθ_k/dg`.
pub fn bogoliubov_angle_dg(k: usize, g: f64, n: usize) -> f64 {
    let q = angle(k, n);
    q.sin() / (1.0 + g * g + 2.0 * g * q.cos())
}

/// Additive energy constant of each sector, fixed once against the dense
/// `2^N` diagonalization (see `oracle::calibrate_offsets`). With the
/// mode energies above both constants come out as zero.
pub fn additive_offset(_sector: Sector) -> f64 {
    0.0
}

/// Single-fermion spectrum of one parity sector, in units of `J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorSpectrum {
    pub sector: Sector,
    /// `J·Λ_k` (or `J·Λ̄_k`) for `k = 0..N`.
    pub single_energies: Vec<f64>,
    /// `offset − ½ Σ_k J Λ_k`, the empty-occupation reference. In the odd
    /// sector this reference is not itself an allowed level.
    pub ground_energy: f64,
    pub additive_offset: f64,
}

pub fn sector_spectrum(params: &IsingParams, sector: Sector) -> SectorSpectrum {
    let n = params.n_sites;
    let g = params.field;
    let single_energies: Vec<f64> = (0..n)
        .map(|k| {
            params.coupling
                * match sector {
                    Sector::Even => lambda_even(k, g, n),
                    Sector::Odd => lambda_odd(k, g, n),
                }
        })
        .collect();
    let additive_offset = additive_offset(sector) * params.coupling;
    let ground_energy = additive_offset - 0.5 * single_energies.iter().sum::<f64>();
    SectorSpectrum {
        sector,
        single_energies,
        ground_energy,
        additive_offset,
    }
}

/// One many-body level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub energy: f64,
    /// Occupied mode indices `k`, ascending.
    pub occupied: Vec<usize>,
    pub sector: Sector,
}

impl SectorSpectrum {
    /// Parity-allowed levels in ascending energy, generated lazily.
    pub fn levels(&self) -> SectorLevels<'_> {
        SectorLevels::new(self)
    }

    /// Lowest parity-allowed level.
    pub fn lowest_level(&self) -> Level {
        self.levels().next().expect("every sector has at least one level")
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Node {
    sum: f64,
    members: Vec<u32>,
}

impl Eq for Node {}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap and we want the smallest sum.
        other
            .sum
            .total_cmp(&self.sum)
            .then_with(|| other.members.cmp(&self.members))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ascending enumeration of parity-allowed occupation patterns.
///
/// Negative mode energies are occupied in the reference pattern and toggled
/// off like ordinary excitations, so every toggle costs `|Λ|` and changes the
/// occupation parity. Subsets of toggles are produced in ascending total cost
/// by the usual best-first scheme over sorted weights.
pub struct SectorLevels<'a> {
    spec: &'a SectorSpectrum,
    weights: Vec<f64>,
    order: Vec<usize>,
    base_energy: f64,
    base_parity: usize,
    heap: BinaryHeap<Node>,
    started: bool,
}

impl<'a> SectorLevels<'a> {
    fn new(spec: &'a SectorSpectrum) -> Self {
        let mut order: Vec<usize> = (0..spec.single_energies.len()).collect();
        order.sort_by(|&a, &b| {
            spec.single_energies[a]
                .abs()
                .total_cmp(&spec.single_energies[b].abs())
                .then(a.cmp(&b))
        });
        let weights = order
            .iter()
            .map(|&k| spec.single_energies[k].abs())
            .collect();
        let negatives: Vec<f64> = spec
            .single_energies
            .iter()
            .copied()
            .filter(|&e| e < 0.0)
            .collect();
        SectorLevels {
            spec,
            weights,
            order,
            base_energy: spec.ground_energy + negatives.iter().sum::<f64>(),
            base_parity: negatives.len() % 2,
            heap: BinaryHeap::new(),
            started: false,
        }
    }

    fn next_subset(&mut self) -> Option<Node> {
        if !self.started {
            self.started = true;
            if !self.weights.is_empty() {
                self.heap.push(Node {
                    sum: self.weights[0],
                    members: vec![0],
                });
            }
            return Some(Node {
                sum: 0.0,
                members: Vec::new(),
            });
        }
        let node = self.heap.pop()?;
        let last = *node.members.last().expect("non-empty subsets only") as usize;
        if last + 1 < self.weights.len() {
            let mut grown = node.members.clone();
            grown.push(last as u32 + 1);
            self.heap.push(Node {
                sum: node.sum + self.weights[last + 1],
                members: grown,
            });
            let mut moved = node.members.clone();
            *moved.last_mut().unwrap() = last as u32 + 1;
            self.heap.push(Node {
                sum: node.sum - self.weights[last] + self.weights[last + 1],
                members: moved,
            });
        }
        Some(node)
    }
}

impl Iterator for SectorLevels<'_> {
    type Item = Level;

    fn next(&mut self) -> Option<Level> {
        loop {
            let node = self.next_subset()?;
            if (self.base_parity + node.members.len()) % 2 != self.spec.sector.parity() {
                continue;
            }
            let mut occupied: Vec<bool> = self
                .spec
                .single_energies
                .iter()
                .map(|&e| e < 0.0)
                .collect();
            for &m in &node.members {
                let k = self.order[m as usize];
                occupied[k] = !occupied[k];
            }
            let occupied: Vec<usize> = occupied
                .iter()
                .enumerate()
                .filter_map(|(k, &o)| o.then_some(k))
                .collect();
            let energy = self.spec.ground_energy
                + occupied
                    .iter()
                    .map(|&k| self.spec.single_energies[k])
                    .sum::<f64>();
            debug_assert!((energy - (self.base_energy + node.sum)).abs() < 1e-8 * (1.0 + energy.abs()));
            return Some(Level {
                energy,
                occupied,
                sector: self.spec.sector,
            });
        }
    }
}

/// The `max_levels` lowest many-body levels over both sectors, ascending.
pub fn enumerate_levels(params: &IsingParams, max_levels: usize) -> Result<Vec<Level>> {
    let n = params.n_sites;
    let fits = n < usize::BITS as usize - 1 && max_levels > (1usize << n);
    if fits {
        return Err(Error::invalid(format!(
            "requested {max_levels} levels but the chain has only 2^{n}"
        )));
    }
    let even = sector_spectrum(params, Sector::Even);
    let odd = sector_spectrum(params, Sector::Odd);
    let mut levels: Vec<Level> = even.levels().take(max_levels).collect();
    levels.extend(odd.levels().take(max_levels));
    levels.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(a.sector.cmp(&b.sector))
            .then_with(|| a.occupied.cmp(&b.occupied))
    });
    levels.truncate(max_levels);
    Ok(levels)
}

/// Gap between the even-sector vacuum and the lowest odd-sector state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstGap {
    /// Exact difference of the sector ground levels (units of `J`).
    pub exact: f64,
    /// Large-`N` closed form `(g − 1) + √((g − 1)² + g (π/N)²)` (units of `J`).
    pub asymptotic: f64,
}

pub fn asymptotic_first_gap(g: f64, n_sites: usize) -> f64 {
    let x = PI / n_sites as f64;
    (g - 1.0) + ((g - 1.0).powi(2) + g * x * x).sqrt()
}

pub fn first_gap(params: &IsingParams) -> FirstGap {
    let even = sector_spectrum(params, Sector::Even).lowest_level();
    let odd = sector_spectrum(params, Sector::Odd).lowest_level();
    FirstGap {
        exact: odd.energy - even.energy,
        asymptotic: params.coupling * asymptotic_first_gap(params.field, params.n_sites),
    }
}

/// Minimum over `g ∈ [g_lo, g_hi]` and over pairs `n` of the two-fermion
/// excitation energy `2Λ_n(g)` (units of `J`). Returns `(g_min, gap)`.
///
/// Uses a 2001-point grid followed by golden-section refinement.
pub fn min_two_fermion_gap(n_sites: usize, g_lo: f64, g_hi: f64) -> Result<(f64, f64)> {
    if n_sites < 3 || n_sites.is_multiple_of(2) {
        return Err(Error::invalid(format!("need odd N >= 3, got {n_sites}")));
    }
    if !(g_hi > g_lo && g_lo >= 0.0) {
        return Err(Error::invalid(format!("bad field range [{g_lo}, {g_hi}]")));
    }
    let pairs = (n_sites - 1) / 2;
    let lowest = |g: f64| {
        (1..=pairs)
            .map(|k| 2.0 * lambda_even(k, g, n_sites))
            .fold(f64::INFINITY, f64::min)
    };
    let (g, gap) = grid_then_golden(lowest, g_lo, g_hi, 2001);
    Ok((g, gap))
}

/// Minimizes `f` on `[lo, hi]`: uniform grid, then golden section around the
/// best grid point. Returns `(argmin, min)`.
pub(crate) fn grid_then_golden(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let step = (hi - lo) / (points - 1) as f64;
    let (mut best_i, mut best) = (0, f64::INFINITY);
    for i in 0..points {
        let v = f(lo + i as f64 * step);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let a = lo + best_i.saturating_sub(1) as f64 * step;
    let b = (lo + (best_i + 1) as f64 * step).min(hi);
    let (x, v) = golden_min(&f, a, b, 1e-13);
    if v < best {
        (x, v)
    } else {
        (lo + best_i as f64 * step, best)
    }
}

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol * (1.0 + a.abs() + b.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_examples() {
        for k in 0..5 {
            let q = 2.0 * PI * k as f64 / 5.0;
            assert_eq!(lambda_even(k, 0.0, 5), 2.0);
            let expect = 2.0 * (2.0 + 2.0 * q.cos()).sqrt();
            assert!((lambda_even(k, 1.0, 5) - expect).abs() < 1e-14);
        }
        assert!((lambda_even(0, 3.0, 7) - 8.0).abs() < 1e-14);
        let mid = lambda_even(250, 1.0, 501);
        assert!((mid - 4.0 * (PI / 1002.0).sin()).abs() < 1e-14);
        assert!((mid - 0.012534).abs() < 1e-5);
        assert_eq!(lambda_odd(0, 2.0, 9), 2.0);
        assert_eq!(lambda_odd(0, 1.0, 9), 0.0);
        let q = 2.0 * PI / 9.0;
        assert!((lambda_odd(1, 1.0, 9) - 2.0 * (2.0 - 2.0 * q.cos()).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn lambda_symmetric_under_reflection() {
        for n in [3usize, 7, 11, 51] {
            for &g in &[0.0, 0.3, 1.0, 2.7] {
                for k in 1..n {
                    assert_eq!(lambda_even(k, g, n), lambda_even(n - k, g, n));
                    assert_eq!(lambda_odd(k, g, n), lambda_odd(n - k, g, n));
                }
            }
        }
    }

    #[test]
    fn critical_softening_at_k_zero() {
        let n = 11;
        let (kmin, vmin) = (0..n)
            .map(|k| (k, lambda_odd(k, 1.0, n)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert_eq!((kmin, vmin), (0, 0.0));
    }

    #[test]
    fn partner_is_involution() {
        for n in [3usize, 9, 21] {
            for k in 0..n {
                let m = FermionMode::new(k, n, Sector::Even);
                assert_eq!(m.partner().partner(), m);
                if (1..=(n - 1) / 2).contains(&k) {
                    assert_ne!(m.partner().index, k);
                }
            }
        }
    }

    #[test]
    fn bogoliubov_angle_limits_and_derivative() {
        // 2πk/N = π/2 for k = 1, N = 4 (grid helper only; physics needs odd N).
        assert!(bogoliubov_angle(1, 1e9, 4).abs() < 1e-8);
        assert!(bogoliubov_angle(3, 0.0, 7).is_finite());
        for &(k, g, n) in &[(1usize, 0.4, 7usize), (3, 1.1, 11), (20, 2.5, 51)] {
            let h = 1e-5;
            let fd = (bogoliubov_angle(k, g + h, n) - bogoliubov_angle(k, g - h, n)) / (2.0 * h);
            assert!((fd - bogoliubov_angle_dg(k, g, n)).abs() < 1e-6);
        }
    }

    #[test]
    fn classical_ground_energy() {
        let p = IsingParams::new(5, 1.0, 0.0).unwrap();
        let lv = enumerate_levels(&p, 2).unwrap();
        assert!((lv[0].energy + 5.0).abs() < 1e-12);
        assert!((lv[1].energy + 5.0).abs() < 1e-12);
        let p3 = IsingParams::new(3, 1.0, 0.0).unwrap();
        let lv = enumerate_levels(&p3, 8).unwrap();
        assert_eq!(lv.len(), 8);
        assert!((lv[0].energy + 3.0).abs() < 1e-12 && (lv[1].energy + 3.0).abs() < 1e-12);
    }

    #[test]
    fn paramagnetic_limit() {
        let g = 1e4;
        let p = IsingParams::new(5, 1.0, g).unwrap();
        let lv = enumerate_levels(&p, 1).unwrap();
        assert!((lv[0].energy / (-g * 5.0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn level_counts_and_order() {
        let p = IsingParams::new(7, 1.0, 0.8).unwrap();
        let lv = enumerate_levels(&p, 128).unwrap();
        assert_eq!(lv.len(), 128);
        assert!(lv.windows(2).all(|w| w[0].energy <= w[1].energy));
        assert_eq!(lv.iter().filter(|l| l.sector == Sector::Even).count(), 64);
        assert!(enumerate_levels(&p, 129).is_err());
        for l in &lv {
            assert_eq!(l.occupied.len() % 2, l.sector.parity());
        }
    }

    #[test]
    fn negative_odd_mode_is_handled() {
        // g < 1 makes Λ̄_0 negative; the odd ground state then occupies k = 0.
        let p = IsingParams::new(9, 1.0, 0.3).unwrap();
        let odd = sector_spectrum(&p, Sector::Odd);
        assert!(odd.single_energies[0] < 0.0);
        let low = odd.lowest_level();
        assert_eq!(low.occupied, vec![0]);
        let all: Vec<Level> = odd.levels().collect();
        assert_eq!(all.len(), 256);
        assert!(all.windows(2).all(|w| w[0].energy <= w[1].energy + 1e-12));
    }

    #[test]
    fn first_gap_limits() {
        let p = IsingParams::new(201, 1.0, 2.0).unwrap();
        assert!((first_gap(&p).exact - 2.0).abs() < 1e-9);
        let p = IsingParams::new(201, 1.0, 0.5).unwrap();
        assert!(first_gap(&p).exact.abs() < 1e-12);
        assert!((asymptotic_first_gap(1.0, 201) - PI / 201.0).abs() < 1e-15);
        assert!((asymptotic_first_gap(1.0, 201) - 0.015629).abs() < 1e-6);
    }

    #[test]
    fn min_gap_small_chain_matches_analytic_minimum() {
        // For each pair, min_g Λ_n(g) = 2|sin(2πn/N)| at g = −cos(2πn/N).
        let n = 51;
        let analytic = (1..=25)
            .filter(|&k| (2.0 * PI * k as f64 / n as f64).cos() <= 0.0)
            .map(|k| 4.0 * (2.0 * PI * k as f64 / n as f64).sin().abs())
            .fold(f64::INFINITY, f64::min);
        let (g, gap) = min_two_fermion_gap(n, 0.5, 1.5).unwrap();
        assert!((gap - analytic).abs() < 1e-9, "{gap} vs {analytic}");
        assert!((gap / (4.0 * PI / 51.0) - 1.0).abs() < 0.03);
        assert!((g - (PI / 51.0).cos()).abs() < 1e-6);
    }
}
