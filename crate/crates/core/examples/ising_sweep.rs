//! A linear field ramp through the critical point, solved one momentum pair
//! at a time, with the adiabatic-approximation estimate per channel.

use spinramp::ising::adiabatic::{p0n_bound, pe_sum};
use spinramp::ising::dynamics::sweep_report;
use spinramp::ising::IsingParams;
use spinramp::ode::IntegratorOptions;
use spinramp::{FieldSchedule, Units};

fn main() -> spinramp::Result<()> {
    let units = Units::default();
    let p = IsingParams::new(51, 1.0, 5.0)?;
    for g1 in [2.0, 1.2, 0.8, 0.0] {
        let s = FieldSchedule::from_rate(5.0, g1, -0.01)?;
        let r = sweep_report(&p, &s, &IntegratorOptions::pair_default(), units)?;
        println!(
            "g1 = {g1:<4} T = {:<6} p_E = {:.3e}  estimate {:.3e}  heating {:.2e}",
            s.duration,
            r.p_leave,
            pe_sum(&p, &s, units),
            r.heating_ratio()
        );
    }

    // Channels come back sorted by excitation energy.
    let s = FieldSchedule::from_rate(5.0, 1.0, -0.01)?;
    let r = sweep_report(&p, &s, &IntegratorOptions::pair_default(), units)?;
    println!("lowest channels at g1 = 1:");
    for c in r.channels.iter().take(5) {
        println!(
            "  n = {:>2}  2Λ = {:.4}  p = {:.3e}  bound {:.3e}",
            c.index,
            c.energy,
            c.probability,
            p0n_bound(c.index, &p, &s, units)
        );
    }
    Ok(())
}
