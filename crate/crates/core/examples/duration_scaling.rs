//! Tunes the ramp rate so that a full sweep 5 → 0 ends with p_E = 0.05, for
//! growing chains, and fits the power law of the resulting duration.

use spinramp::cli::loglog_fit;
use spinramp::ising::dynamics::rate_for_target;
use spinramp::ising::IsingParams;
use spinramp::ode::IntegratorOptions;
use spinramp::Units;

fn main() -> spinramp::Result<()> {
    let opts = IntegratorOptions::pair_default();
    let (mut ns, mut ts) = (Vec::new(), Vec::new());
    for n in (11..=61).step_by(10) {
        let p = IsingParams::new(n, 1.0, 5.0)?;
        let sol = rate_for_target(&p, 5.0, 0.0, 0.05, 1e-3, 0.25 * (n * n) as f64, &opts, Units::default())?;
        println!("N = {n:<3} rate = {:.5}  T = {:8.2}  p_E = {:.4}", sol.rate, sol.duration, sol.p_e);
        ns.push(n as f64);
        ts.push(sol.duration);
    }
    let (slope, c) = loglog_fit(&ns, &ts);
    println!("T ≈ {:.4} N^{slope:.3}", c.exp());
    Ok(())
}
