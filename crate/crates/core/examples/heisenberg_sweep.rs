//! Sector-reduced Heisenberg sweeps compared with the large-field estimate,
//! plus the first-order group-2 levels next to exact ones.

use spinramp::heisenberg::classify::classify_along;
use spinramp::heisenberg::{group2_first_order, pe_heisenberg, perturbative_levels, sector_basis, tdse_sweep, HeisenbergParams};
use spinramp::ode::IntegratorOptions;
use spinramp::{FieldSchedule, Units};

fn main() -> spinramp::Result<()> {
    let delta = [0.1, 0.3, 1.0];
    let opts = IntegratorOptions::adaptive(1e-10, 1e-12);
    for n in [5, 7, 9] {
        for alpha in [-2.0, -6.0] {
            let p = HeisenbergParams::new(n, 1.0, delta, 10.0)?;
            let s = FieldSchedule::from_rate(10.0, 5.0, alpha)?;
            let r = tdse_sweep(&p, &s, opts, Units::default())?;
            let est = pe_heisenberg(&p, &s, Units::default());
            println!("N = {n} α = {alpha:>4}: p_E = {:.3e}, estimate {:.3e}", r.report.p_leave, est.p_e);
        }
    }

    let n = 7;
    let g = 20.0;
    let p = HeisenbergParams::new(n, 1.0, delta, g)?;
    let dec = classify_along(&p, &sector_basis(n, 0, 1)?, &[g])?.pop().expect("one field");
    let series = perturbative_levels(&p);
    let block = group2_first_order(&p);
    println!("E0/(JN): exact {:.5}, series {:.5}", dec.energies[0] / n as f64, series.e0());
    for d in 1..=(n - 1) / 2 {
        let exact = dec.energies[dec.find(2, d).expect("group-2 state")] / n as f64;
        println!("E_2,0,{d}/(JN): exact {exact:.5}, first-order block {:.5}", block.energies[d - 1]);
    }
    Ok(())
}
