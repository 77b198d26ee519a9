//! Sweep dynamics of the Ising chain, one momentum pair at a time.
//!
//! The even-sector Hamiltonian decouples into pairs `(n, −n)`,
//! `n = 1..(N−1)/2`, each acting on the two states {pair empty, pair doubly
//! occupied}; the unpaired mode stays empty. In units of `J` the pair
//! generator is the traceless matrix
//!
//! ```text
//! H_n(g) = −2 (g + cos q_n) σz − 2 sin q_n σy,   q_n = 2πn/N,
//! ```
//!
//! whose splitting is `2Λ_n(g)` and whose ground vector is
//! `(cos θ_n/2, −i sin θ_n/2)` with `θ_n` from [`bogoliubov_angle`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ising::exact::{bogoliubov_angle, lambda_even, IsingParams};
use crate::ode::{Integrator, IntegratorOptions, LinearGenerator, TwoLevelField, TwoLevelMagnus};
use crate::report::{ChannelProbability, ExcitationReport};
use crate::{Error, FieldSchedule, Result, Units, C64};

/// Largest tolerated `| |a|² + |b|² − 1 |` before a sweep is declared failed.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Pauli vector `(bx, by, bz)` of the pair generator, in units of `J`.
pub fn pair_generator(n: usize, g: f64, n_sites: usize) -> [f64; 3] {
    let q = 2.0 * std::f64::consts::PI * n as f64 / n_sites as f64;
    [0.0, -2.0 * q.sin(), -2.0 * (g + q.cos())]
}

/// Instantaneous ground vector of pair `n` in the {empty, doubly occupied} basis.
pub fn pair_ground(n: usize, g: f64, n_sites: usize) -> [C64; 2] {
    let half = 0.5 * bogoliubov_angle(n, g, n_sites);
    [C64::new(half.cos(), 0.0), C64::new(0.0, -half.sin())]
}

/// Instantaneous excited vector of pair `n`.
pub fn pair_excited(n: usize, g: f64, n_sites: usize) -> [C64; 2] {
    let half = 0.5 * bogoliubov_angle(n, g, n_sites);
    [C64::new(-half.sin(), 0.0), C64::new(0.0, -half.cos())]
}

fn overlap_sqr(a: &[C64; 2], b: &[C64; 2]) -> f64 {
    (a[0].conj() * b[0] + a[1].conj() * b[1]).norm_sqr()
}

/// Amplitudes of every momentum pair at one point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeAmplitudes {
    pub n_sites: usize,
    /// Schedule position `s ∈ [0, 1]`.
    pub s: f64,
    /// Field `g(s)` at which the amplitudes are expressed.
    pub field: f64,
    /// `pairs[n − 1] = (a_n, b_n)`.
    pub pairs: Vec<[C64; 2]>,
}

impl ModeAmplitudes {
    /// Instantaneous ground state at field `g`.
    pub fn ground(params: &IsingParams, g: f64) -> Self {
        ModeAmplitudes {
            n_sites: params.n_sites,
            s: 0.0,
            field: g,
            pairs: (1..=params.n_pairs())
                .map(|n| pair_ground(n, g, params.n_sites))
                .collect(),
        }
    }

    /// Largest `| |a|² + |b|² − 1 |` over the pairs.
    pub fn norm_drift(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| (p[0].norm_sqr() + p[1].norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

struct PairField {
    sin_q: f64,
    cos_q: f64,
    scale: f64,
    schedule: FieldSchedule,
    max_norm: f64,
}

impl PairField {
    fn new(n: usize, params: &IsingParams, schedule: &FieldSchedule, units: Units) -> Self {
        let q = 2.0 * std::f64::consts::PI * n as f64 / params.n_sites as f64;
        let scale = params.coupling / units.hbar;
        // |b| = Λ_n(g) is convex in g, so its maximum on the ramp is at an end.
        let max_norm = scale
            * lambda_even(n, schedule.g_start, params.n_sites)
                .max(lambda_even(n, schedule.g_end, params.n_sites));
        PairField {
            sin_q: q.sin(),
            cos_q: q.cos(),
            scale,
            schedule: *schedule,
            max_norm,
        }
    }

    #[inline]
    fn b(&self, t: f64) -> [f64; 3] {
        let g = self.schedule.field_at_time(t);
        [0.0, -2.0 * self.sin_q * self.scale, -2.0 * (g + self.cos_q) * self.scale]
    }
}

impl TwoLevelField for PairField {
    fn field(&self, t: f64) -> [f64; 3] {
        self.b(t)
    }
    fn max_norm(&self) -> f64 {
        self.max_norm
    }
}

impl LinearGenerator for PairField {
    fn dim(&self) -> usize {
        2
    }
    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]) {
        let [_, by, bz] = self.b(t);
        // −i (by σy + bz σz) ψ
        let (a, b) = (psi[0], psi[1]);
        let mi = C64::new(0.0, -1.0);
        out[0] = mi * (C64::new(bz, 0.0) * a + C64::new(0.0, -by) * b);
        out[1] = mi * (C64::new(0.0, by) * a - C64::new(bz, 0.0) * b);
    }
}

/// Evolves one pair from `t = 0`, reporting the state at each checkpoint time.
fn evolve_pair(
    n: usize,
    params: &IsingParams,
    schedule: &FieldSchedule,
    times: &[f64],
    start: [C64; 2],
    opts: &IntegratorOptions,
    units: Units,
) -> Result<Vec<[C64; 2]>> {
    let field = PairField::new(n, params, schedule, units);
    let mut psi = start;
    let mut out = Vec::with_capacity(times.len());
    let mut t = 0.0;
    if let Some(magnus) = TwoLevelMagnus::from_options(opts) {
        for &tc in times {
            magnus
                .advance(&field, t, tc, &mut psi)
                .map_err(|e| e.in_mode(n))?;
            t = tc;
            out.push(psi);
        }
    } else {
        let mut integ = Integrator::new(*opts, 2)?;
        for &tc in times {
            integ
                .advance(&field, t, tc, &mut psi)
                .map_err(|e| e.in_mode(n))?;
            t = tc;
            out.push(psi);
        }
    }
    for p in &out {
        let drift = (p[0].norm_sqr() + p[1].norm_sqr() - 1.0).abs();
        if drift > NORM_TOLERANCE {
            return Err(Error::NormDrift { mode: n, drift });
        }
    }
    Ok(out)
}

/// Sweeps the chain from its `g₀` ground state and returns the amplitudes at
/// `s = 1`.
pub fn evolve_sweep(
    params: &IsingParams,
    schedule: &FieldSchedule,
    opts: &IntegratorOptions,
    units: Units,
) -> Result<ModeAmplitudes> {
    let mut snaps = evolve_sweep_checkpoints(params, schedule, &[schedule.g_end], opts, units)?;
    Ok(snaps.pop().expect("one checkpoint requested"))
}

/// Like [`evolve_sweep`], recording the amplitudes each time the field
/// reaches one of `fields` (given in sweep order).
pub fn evolve_sweep_checkpoints(
    params: &IsingParams,
    schedule: &FieldSchedule,
    fields: &[f64],
    opts: &IntegratorOptions,
    units: Units,
) -> Result<Vec<ModeAmplitudes>> {
    opts.validate()?;
    let span = schedule.g_end - schedule.g_start;
    let mut fracs = Vec::with_capacity(fields.len());
    for &g in fields {
        let s = if span == 0.0 {
            if g != schedule.g_start {
                return Err(Error::invalid(format!("field {g} is not on a stationary ramp")));
            }
            1.0
        } else {
            (g - schedule.g_start) / span
        };
        if !(-1e-12..=1.0 + 1e-12).contains(&s) {
            return Err(Error::invalid(format!("checkpoint field {g} lies outside the ramp")));
        }
        if fracs.last().is_some_and(|&prev: &f64| s < prev) {
            return Err(Error::invalid("checkpoint fields must follow the sweep direction"));
        }
        fracs.push(s.clamp(0.0, 1.0));
    }
    let times: Vec<f64> = fracs.iter().map(|s| s * schedule.duration).collect();
    let per_mode: Vec<Vec<[C64; 2]>> = (1..=params.n_pairs())
        .into_par_iter()
        .map(|n| {
            let start = pair_ground(n, schedule.g_start, params.n_sites);
            evolve_pair(n, params, schedule, &times, start, opts, units)
        })
        .collect::<Result<_>>()?;
    Ok(fracs
        .iter()
        .zip(fields)
        .enumerate()
        .map(|(i, (&s, &g))| ModeAmplitudes {
            n_sites: params.n_sites,
            s,
            field: g,
            pairs: per_mode.iter().map(|m| m[i]).collect(),
        })
        .collect())
}

/// `p₀→ₙ`: weight of each pair on its excited vector at `g_final`, with the
/// excitation energy `2JΛ_n(g_final)`. Returned in pair order `n = 1, 2, …`.
pub fn extract_p0n(amps: &ModeAmplitudes, params: &IsingParams, g_final: f64) -> Vec<ChannelProbability> {
    amps.pairs
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let n = i + 1;
            ChannelProbability {
                index: n,
                energy: 2.0 * params.coupling * lambda_even(n, g_final, params.n_sites),
                probability: overlap_sqr(&pair_excited(n, g_final, params.n_sites), p),
            }
        })
        .collect()
}

/// Energy statistics of a swept state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEnergy {
    /// `⟨H⟩ − E₀` (units of `J`).
    pub above_ground: f64,
    /// Variance of `H` (units of `J²`).
    pub variance: f64,
    /// Spectrum width `ΔE = J Σ_k Λ_k(g_final)`.
    pub spectrum_width: f64,
}

pub fn mean_energy(amps: &ModeAmplitudes, params: &IsingParams, g_final: f64) -> MeanEnergy {
    let mut above_ground = 0.0;
    let mut variance = 0.0;
    for c in extract_p0n(amps, params, g_final) {
        above_ground += c.energy * c.probability;
        variance += c.energy * c.energy * c.probability * (1.0 - c.probability);
    }
    MeanEnergy {
        above_ground,
        variance,
        spectrum_width: spectrum_width(params, g_final),
    }
}

/// `ΔE = J Σ_k Λ_k(g)`.
pub fn spectrum_width(params: &IsingParams, g: f64) -> f64 {
    params.coupling
        * (0..params.n_sites)
            .map(|k| lambda_even(k, g, params.n_sites))
            .sum::<f64>()
}

/// Assembles an [`ExcitationReport`] from swept amplitudes.
pub fn build_report(amps: &ModeAmplitudes, params: &IsingParams, schedule: &FieldSchedule) -> ExcitationReport {
    let g1 = amps.field;
    let mut channels = extract_p0n(amps, params, g1);
    let p_total: f64 = channels.iter().map(|c| c.probability).sum();
    let survival: f64 = channels.iter().map(|c| 1.0 - c.probability).product();
    let energy = mean_energy(amps, params, g1);
    channels.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.index.cmp(&b.index)));
    let mut schedule = *schedule;
    if g1 != schedule.g_end {
        schedule = schedule.truncated_at(g1).unwrap_or(schedule);
    }
    ExcitationReport {
        channels,
        p_total,
        p_leave: 1.0 - survival,
        p_total_exceeds_one: p_total > 1.0,
        mean_energy_above_ground: energy.above_ground,
        energy_variance: energy.variance,
        spectrum_width: energy.spectrum_width,
        schedule,
    }
}

/// Runs a sweep and summarises it.
pub fn sweep_report(
    params: &IsingParams,
    schedule: &FieldSchedule,
    opts: &IntegratorOptions,
    units: Units,
) -> Result<ExcitationReport> {
    let amps = evolve_sweep(params, schedule, opts, units)?;
    Ok(build_report(&amps, params, schedule))
}

/// Reports for the prefixes of one ramp that stop at each of `g_finals`
/// (sweep order). One integration serves all of them.
pub fn sweep_reports_along(
    params: &IsingParams,
    schedule: &FieldSchedule,
    g_finals: &[f64],
    opts: &IntegratorOptions,
    units: Units,
) -> Result<Vec<ExcitationReport>> {
    let snaps = evolve_sweep_checkpoints(params, schedule, g_finals, opts, units)?;
    Ok(snaps.iter().map(|a| build_report(a, params, schedule)).collect())
}

/// Linear ramp whose numeric `p_E` (= `p_leave`) hits a target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSolution {
    /// Signed `ġ`.
    pub rate: f64,
    pub duration: f64,
    pub p_e: f64,
    pub evaluations: usize,
}

/// Bisection on `ln|ġ|` for the ramp `g₀ → g₁` with `p_E = target` to relative
/// tolerance `rel_tol`. `guess` is a starting duration.
pub fn rate_for_target(
    params: &IsingParams,
    g0: f64,
    g1: f64,
    target: f64,
    rel_tol: f64,
    guess: f64,
    opts: &IntegratorOptions,
    units: Units,
) -> Result<RateSolution> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::invalid(format!("target probability {target} not in (0, 1)")));
    }
    if g0 == g1 {
        return Err(Error::invalid("a stationary ramp excites nothing"));
    }
    let span = (g1 - g0).abs();
    let mut evaluations = 0;
    let mut p_at = |ln_rate: f64| -> Result<f64> {
        evaluations += 1;
        let schedule = FieldSchedule::new(g0, g1, span / ln_rate.exp())?;
        Ok(sweep_report(params, &schedule, opts, units)?.p_leave)
    };
    let mut x = (span / guess).ln();
    let mut px = p_at(x)?;
    let (mut lo, mut hi) = (x, x);
    let (mut p_lo, mut p_hi) = (px, px);
    for _ in 0..40 {
        if p_lo <= target && p_hi >= target {
            break;
        }
        if p_hi < target {
            lo = hi;
            p_lo = p_hi;
            hi += std::f64::consts::LN_2;
            p_hi = p_at(hi)?;
        } else {
            hi = lo;
            p_hi = p_lo;
            lo -= std::f64::consts::LN_2;
            p_lo = p_at(lo)?;
        }
    }
    if !(p_lo <= target && p_hi >= target) {
        return Err(Error::Bracket(format!(
            "no rate brackets p_E = {target} for N = {} (reached {p_lo:.3e}..{p_hi:.3e})",
            params.n_sites
        )));
    }
    for _ in 0..80 {
        if (px - target).abs() <= rel_tol * target {
            break;
        }
        x = 0.5 * (lo + hi);
        px = p_at(x)?;
        if px < target {
            lo = x;
        } else {
            hi = x;
        }
    }
    if (px - target).abs() > rel_tol * target {
        return Err(Error::Bracket(format!(
            "bisection did not reach p_E = {target} for N = {}",
            params.n_sites
        )));
    }
    let rate = (g1 - g0).signum() * x.exp();
    Ok(RateSolution {
        rate,
        duration: span / x.exp(),
        p_e: px,
        evaluations,
    })
}

/// Sweeps `g₀ → g₁` and back with the same duration each way; returns the
/// probability of ending in the initial ground state.
pub fn round_trip_check(
    params: &IsingParams,
    schedule_up: &FieldSchedule,
    opts: &IntegratorOptions,
    units: Units,
) -> Result<f64> {
    opts.validate()?;
    let down = schedule_up.reversed();
    let g0 = schedule_up.g_start;
    let survival: Vec<f64> = (1..=params.n_pairs())
        .into_par_iter()
        .map(|n| {
            let start = pair_ground(n, g0, params.n_sites);
            let up = evolve_pair(n, params, schedule_up, &[schedule_up.duration], start, opts, units)?;
            let back = evolve_pair(n, params, &down, &[down.duration], up[0], opts, units)?;
            Ok(overlap_sqr(&pair_ground(n, g0, params.n_sites), &back[0]))
        })
        .collect::<Result<_>>()?;
    Ok(survival.iter().product())
}
