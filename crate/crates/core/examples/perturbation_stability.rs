//! Symmetry-breaking perturbations: extra heating of the Ising sweep from a
//! single-site σz term, and random local fields on the Heisenberg ring
//! against their closed-form bound.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinramp::heisenberg::HeisenbergParams;
use spinramp::ising::IsingParams;
use spinramp::ode::IntegratorOptions;
use spinramp::stability::{heisenberg_perturbation_bound, heisenberg_perturbed_sweep, ising_perturbed_sweep, PerturbationSpec};
use spinramp::{FieldSchedule, Units};

fn main() -> spinramp::Result<()> {
    let opts = IntegratorOptions::adaptive(1e-9, 1e-12);
    let p = IsingParams::new(7, 1.0, 5.0)?;
    let s = FieldSchedule::from_rate(5.0, 0.0, -0.05)?;
    for eps in [0.0, 0.05, 0.1, 0.2] {
        let r = ising_perturbed_sweep(&p, &s, eps, opts, Units::default())?;
        println!(
            "ε = {eps:<4}: heating {:.3e}, ground {:.3}, first excited {:.3}, higher {:.1e}",
            r.heating_ratio, r.ground_weight, r.first_excited_weight, r.higher_weight
        );
    }

    let hp = HeisenbergParams::new(7, 1.0, [0.1, 0.3, 1.0], 10.0)?;
    let hs = FieldSchedule::new(10.0, 5.0, 10.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..3 {
        let spec = PerturbationSpec::random(7, 0.05, &mut rng);
        let bound = heisenberg_perturbation_bound(&spec, &hp, 10.0);
        let r = heisenberg_perturbed_sweep(&hp, &hs, &spec, opts, Units::default())?;
        println!("p_V = {:.3e}, bound {:.3e} ({:?})", r.p_v, bound.p_v, bound.validity);
    }
    Ok(())
}
