//! Adiabatic-approximation estimates for Ising sweeps.
//!
//! To first order a slow ramp excites pair `n` with probability
//! `p₀→ₙ ≲ (1/T²) max_s |A_{n0}(s)/ω_{n0}(s)|²`, where `A_{n0} = θ′_n/2` and
//! `ħω_{n0} = 2JΛ_n`. Summing the channels gives `p_E`, which in three field
//! regimes reduces to closed forms in `N`, `T` and the endpoints.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ising::exact::{grid_then_golden, lambda_even, IsingParams};
use crate::{Error, FieldSchedule, Result, Units};

/// `θ′_k(s) = (dg/ds) sin(2πk/N) / (1 + g² + 2g cos(2πk/N))`.
pub fn theta_prime(k: usize, g: f64, n_sites: usize, dg_ds: f64) -> f64 {
    let q = 2.0 * PI * k as f64 / n_sites as f64;
    dg_ds * q.sin() / (1.0 + g * g + 2.0 * g * q.cos())
}

/// `⟨n(s)|H′(s)|vac(s)⟩ = −JΛ_n θ′_n` (units of `J`), with `H′ = dH/ds`.
pub fn channel_matrix_element(n: usize, s: f64, params: &IsingParams, schedule: &FieldSchedule) -> f64 {
    let g = schedule.field_at(s);
    -params.coupling * lambda_even(n, g, params.n_sites) * theta_prime(n, g, params.n_sites, schedule.dg_ds())
}

/// One transition channel `vac → |n⟩` along a schedule.
#[derive(Debug, Clone, Copy)]
pub struct TransitionChannel {
    pub n: usize,
    pub params: IsingParams,
    pub schedule: FieldSchedule,
    pub units: Units,
}

impl TransitionChannel {
    pub fn new(n: usize, params: IsingParams, schedule: FieldSchedule, units: Units) -> Result<Self> {
        if n == 0 || n > params.n_pairs() {
            return Err(Error::invalid(format!(
                "channel {n} outside 1..={}",
                params.n_pairs()
            )));
        }
        Ok(TransitionChannel {
            n,
            params,
            schedule,
            units,
        })
    }

    /// `A_{n0}(s) = −⟨n|H′|vac⟩/(ħω_{n0}) = θ′_n/2` (dimensionless).
    pub fn coupling(&self, s: f64) -> f64 {
        -self.matrix_element(s) / (self.units.hbar * self.angular_gap(s))
    }

    /// `ω_{n0}(s) = 2JΛ_n/ħ`.
    pub fn angular_gap(&self, s: f64) -> f64 {
        let g = self.schedule.field_at(s);
        2.0 * self.params.coupling * lambda_even(self.n, g, self.params.n_sites) / self.units.hbar
    }

    pub fn matrix_element(&self, s: f64) -> f64 {
        channel_matrix_element(self.n, s, &self.params, &self.schedule)
    }

    /// `(1/T²) max_s |A/ω|²`, the same quantity as [`p0n_bound`] reached
    /// through the coupling and the gap.
    pub fn bound(&self) -> f64 {
        let f = |s: f64| {
            let r = self.coupling(s) / self.angular_gap(s);
            -(r * r)
        };
        let (_, m) = grid_then_golden(f, 0.0, 1.0, 2001);
        -m / self.schedule.duration.powi(2)
    }
}

/// `(ħ²/(16J²T²)) max_s |θ′_n(s)/Λ_n(s)|²`.
pub fn p0n_bound(n: usize, params: &IsingParams, schedule: &FieldSchedule, units: Units) -> f64 {
    if schedule.is_stationary() {
        return 0.0;
    }
    let n_sites = params.n_sites;
    let dg = schedule.dg_ds();
    let f = |s: f64| {
        let g = schedule.field_at(s);
        let r = theta_prime(n, g, n_sites, dg) / lambda_even(n, g, n_sites);
        -(r * r)
    };
    let (_, m) = grid_then_golden(f, 0.0, 1.0, 2001);
    let scale = units.hbar / (params.coupling * schedule.duration);
    -m * scale * scale / 16.0
}

/// `p_E ≈ Σ_n p0n_bound(n)`.
pub fn pe_sum(params: &IsingParams, schedule: &FieldSchedule, units: Units) -> f64 {
    (1..=params.n_pairs())
        .map(|n| p0n_bound(n, params, schedule, units))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `g₀ ≫ 1`, `g₁ > 1`, `N(g₁ − 1) ≫ 1`
    R1,
    /// `g₀ ≫ 1`, `g₁ > 1`, `N(g₁ − 1) ≪ 1`
    R2,
    /// `g₀ ≫ 1`, `g₁ ≤ 1`
    R3,
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r1" | "1" => Ok(Regime::R1),
            "r2" | "2" => Ok(Regime::R2),
            "r3" | "3" => Ok(Regime::R3),
            _ => Err(Error::invalid(format!("unknown regime {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Validity {
    Valid,
    Marginal,
    Invalid,
}

/// `x ≫ 1`: valid from 10, invalid at or below 1.
pub fn much_greater_than_one(x: f64) -> Validity {
    if x >= 10.0 {
        Validity::Valid
    } else if x > 1.0 {
        Validity::Marginal
    } else {
        Validity::Invalid
    }
}

/// `x ≪ 1`: valid up to 0.1, invalid from 1.
pub fn much_less_than_one(x: f64) -> Validity {
    if x <= 0.1 {
        Validity::Valid
    } else if x < 1.0 {
        Validity::Marginal
    } else {
        Validity::Invalid
    }
}

fn strict(ok: bool) -> Validity {
    if ok {
        Validity::Valid
    } else {
        Validity::Invalid
    }
}

/// Worst validity over a regime's conditions.
pub fn regime_validity(regime: Regime, g0: f64, g1: f64, n_sites: usize) -> Validity {
    let n = n_sites as f64;
    let conds = match regime {
        Regime::R1 => [much_greater_than_one(g0), strict(g1 > 1.0), much_greater_than_one(n * (g1 - 1.0))],
        Regime::R2 => [much_greater_than_one(g0), strict(g1 > 1.0), much_less_than_one(n * (g1 - 1.0))],
        Regime::R3 => [much_greater_than_one(g0), strict(g1 <= 1.0), Validity::Valid],
    };
    conds.into_iter().max().unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeEstimate {
    pub regime: Regime,
    pub validity: Validity,
    pub p_e_bound: f64,
}

/// `p_E · T²/(g₀ − g₁)²` for the regime: the factor that multiplies the
/// squared ramp rate.
fn regime_coefficient(regime: Regime, params: &IsingParams, g1: f64, units: Units) -> f64 {
    let n = params.n_sites as f64;
    let hj2 = (units.hbar / params.coupling).powi(2);
    match regime {
        Regime::R1 => hj2 / 256.0 * n / (g1 * g1 - 1.0).powi(3),
        Regime::R2 => hj2 / (64.0 * PI.powi(4)) * (4.0 - 3.0 * g1) * n.powi(4),
        Regime::R3 => hj2 / (64.0 * PI.powi(4)) * n.powi(4),
    }
}

/// Evaluates one regime formula. Outside its validity window this is an
/// error unless `allow_outside` is set; marginal windows are always returned
/// with their flag.
pub fn pe_regime(
    regime: Regime,
    params: &IsingParams,
    schedule: &FieldSchedule,
    units: Units,
    allow_outside: bool,
) -> Result<RegimeEstimate> {
    let (g0, g1) = (schedule.g_start, schedule.g_end);
    let validity = regime_validity(regime, g0, g1, params.n_sites);
    if validity == Validity::Invalid && !allow_outside {
        return Err(Error::OutsideValidity(format!(
            "{regime:?} with g0 = {g0}, g1 = {g1}, N = {}",
            params.n_sites
        )));
    }
    let rate2 = (g0 - g1).powi(2) / schedule.duration.powi(2);
    Ok(RegimeEstimate {
        regime,
        validity,
        p_e_bound: regime_coefficient(regime, params, g1, units) * rate2,
    })
}

pub fn pe_regime1(params: &IsingParams, schedule: &FieldSchedule, units: Units, allow_outside: bool) -> Result<RegimeEstimate> {
    pe_regime(Regime::R1, params, schedule, units, allow_outside)
}

pub fn pe_regime2(params: &IsingParams, schedule: &FieldSchedule, units: Units, allow_outside: bool) -> Result<RegimeEstimate> {
    pe_regime(Regime::R2, params, schedule, units, allow_outside)
}

pub fn pe_regime3(params: &IsingParams, schedule: &FieldSchedule, units: Units, allow_outside: bool) -> Result<RegimeEstimate> {
    pe_regime(Regime::R3, params, schedule, units, allow_outside)
}

/// Sweep duration `T` for which the regime formula gives `p_target`.
pub fn duration_for_target(
    p_target: f64,
    regime: Regime,
    params: &IsingParams,
    g0: f64,
    g1: f64,
    units: Units,
    allow_outside: bool,
) -> Result<f64> {
    if !(p_target > 0.0 && p_target < 1.0) {
        return Err(Error::invalid(format!("target probability {p_target} not in (0, 1)")));
    }
    if g0 == g1 {
        return Err(Error::invalid("a stationary ramp excites nothing"));
    }
    if regime_validity(regime, g0, g1, params.n_sites) == Validity::Invalid && !allow_outside {
        return Err(Error::OutsideValidity(format!(
            "{regime:?} with g0 = {g0}, g1 = {g1}, N = {}",
            params.n_sites
        )));
    }
    let c = regime_coefficient(regime, params, g1, units);
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::OutsideValidity(format!("{regime:?} formula is not positive at g1 = {g1}")));
    }
    Ok((g0 - g1).abs() * (c / p_target).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::exact::bogoliubov_angle;

    fn ising(n: usize) -> IsingParams {
        IsingParams::new(n, 1.0, 5.0).unwrap()
    }

    #[test]
    fn theta_prime_matches_angle_derivative() {
        for &(k, g, n, dg) in &[(1usize, 0.7, 11usize, -4.0), (5, 1.3, 11, 2.0), (17, 3.0, 51, -5.0)] {
            let h = 1e-6;
            let fd = (bogoliubov_angle(k, g + h, n) - bogoliubov_angle(k, g - h, n)) / (2.0 * h) * dg;
            assert!((fd - theta_prime(k, g, n, dg)).abs() < 1e-6);
        }
        // sin(2πk/N) = 0 only at k = 0 on an odd ring.
        assert_eq!(theta_prime(0, 1.0, 7, 3.0), 0.0);
        let big = theta_prime(1, 1e4, 7, 1.0) * 1e8;
        assert!((big - (2.0 * PI / 7.0).sin()).abs() < 1e-3);
    }

    #[test]
    fn matrix_element_over_gap() {
        let p = ising(21);
        let s = FieldSchedule::new(5.0, 0.5, 100.0).unwrap();
        for n in [1usize, 4, 10] {
            let ch = TransitionChannel::new(n, p, s, Units::default()).unwrap();
            for &x in &[0.0, 0.3, 0.9] {
                let ratio = ch.matrix_element(x) / ch.angular_gap(x);
                let tp = theta_prime(n, s.field_at(x), 21, s.dg_ds());
                assert!((ratio + tp / 2.0).abs() < 1e-12);
            }
            let rev = TransitionChannel::new(n, p, s.reversed(), Units::default()).unwrap();
            assert!((rev.matrix_element(0.5) + ch.matrix_element(0.5)).abs() < 1e-12);
        }
        let still = FieldSchedule::constant(2.0, 1.0).unwrap();
        assert_eq!(channel_matrix_element(3, 0.4, &p, &still), 0.0);
    }

    #[test]
    fn bound_routes_agree_and_scale() {
        let p = ising(51);
        let s = FieldSchedule::from_rate(5.0, 1.2, -0.01).unwrap();
        for n in [1usize, 8, 25] {
            let a = p0n_bound(n, &p, &s, Units::default());
            let b = TransitionChannel::new(n, p, s, Units::default()).unwrap().bound();
            assert!((a / b - 1.0).abs() < 1e-9);
            let slow = FieldSchedule::new(5.0, 1.2, 2.0 * s.duration).unwrap();
            assert!((p0n_bound(n, &p, &slow, Units::default()) * 4.0 / a - 1.0).abs() < 1e-12);
        }
        assert_eq!(pe_sum(&p, &FieldSchedule::constant(2.0, 5.0).unwrap(), Units::default()), 0.0);
    }

    #[test]
    fn fig6_coefficient() {
        for n in [11usize, 51, 101] {
            let t = duration_for_target(0.05, Regime::R3, &ising(n), 5.0, 0.0, Units::default(), true).unwrap();
            let c = t / (n * n) as f64;
            assert!((c - 5.0 / (0.05 * 64.0 * PI.powi(4)).sqrt()).abs() < 1e-12);
            assert!((c - 0.2832).abs() < 5e-4);
        }
        let t1 = duration_for_target(0.04, Regime::R3, &ising(11), 5.0, 0.0, Units::default(), true).unwrap();
        let t4 = duration_for_target(0.01, Regime::R3, &ising(11), 5.0, 0.0, Units::default(), true).unwrap();
        assert!((t4 / t1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn regime_boundaries() {
        let p = ising(101);
        let s = FieldSchedule::new(50.0, 1.0, 1000.0).unwrap();
        let r2 = pe_regime2(&p, &s, Units::default(), true).unwrap();
        let r3 = pe_regime3(&p, &s, Units::default(), false).unwrap();
        assert_eq!(r2.p_e_bound, r3.p_e_bound);
        assert_eq!(r2.validity, Validity::Invalid);
        assert!(pe_regime2(&p, &s, Units::default(), false).is_err());
        assert_eq!(regime_validity(Regime::R1, 5.0, 2.0, 101), Validity::Marginal);
        assert_eq!(regime_validity(Regime::R1, 10.0, 2.0, 101), Validity::Valid);
        assert_eq!(regime_validity(Regime::R3, 10.0, 1.0001, 101), Validity::Invalid);
        assert!(duration_for_target(0.05, Regime::R1, &p, 10.0, 0.5, Units::default(), false).is_err());
    }

    #[test]
    fn exponents_are_exact() {
        let s = FieldSchedule::new(10.0, 2.0, 100.0).unwrap();
        let a = pe_regime1(&ising(11), &s, Units::default(), true).unwrap().p_e_bound;
        let b = pe_regime1(&ising(101), &s, Units::default(), true).unwrap().p_e_bound;
        assert!(((b / a).ln() / (101f64 / 11.0).ln() - 1.0).abs() < 1e-12);
        let s3 = FieldSchedule::new(10.0, 0.0, 100.0).unwrap();
        let a = pe_regime3(&ising(11), &s3, Units::default(), true).unwrap().p_e_bound;
        let b = pe_regime3(&ising(101), &s3, Units::default(), true).unwrap().p_e_bound;
        assert!(((b / a).ln() / (101f64 / 11.0).ln() - 4.0).abs() < 1e-12);
    }
}
