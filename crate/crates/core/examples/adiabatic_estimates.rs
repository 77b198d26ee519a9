//! Closed-form excitation estimates in the three field regimes and the
//! sweep duration they predict for a target excitation probability.

use spinramp::ising::adiabatic::{duration_for_target, pe_regime, Regime};
use spinramp::ising::IsingParams;
use spinramp::{FieldSchedule, Units};

fn main() -> spinramp::Result<()> {
    let units = Units::default();
    let p = IsingParams::new(101, 1.0, 5.0)?;
    for (g1, regime) in [(2.0, Regime::R1), (1.0, Regime::R2), (0.0, Regime::R3)] {
        let s = FieldSchedule::from_rate(5.0, g1, -1e-4)?;
        let e = pe_regime(regime, &p, &s, units, true)?;
        println!("{regime:?}: g1 = {g1}, p_E ≲ {:.3e} ({:?})", e.p_e_bound, e.validity);
    }
    for n in [11, 51, 101, 501] {
        let p = IsingParams::new(n, 1.0, 5.0)?;
        let t = duration_for_target(0.05, Regime::R3, &p, 5.0, 0.0, units, true)?;
        println!("N = {n:<4} T = {t:>10.1}  T/N² = {:.4}", t / (n * n) as f64);
    }
    Ok(())
}
