use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinramp::heisenberg::{tdse_sweep, HeisenbergParams};
use spinramp::ising::dynamics::sweep_report;
use spinramp::ising::IsingParams;
use spinramp::ode::IntegratorOptions;
use spinramp::stability::{
    heisenberg_perturbation_bound, heisenberg_perturbed_sweep, ising_perturbed_sweep, PerturbationSpec,
};
use spinramp::{FieldSchedule, Units};

const DELTA: [f64; 3] = [0.1, 0.3, 1.0];

fn tight() -> IntegratorOptions {
    IntegratorOptions::adaptive(1e-11, 1e-13)
}

#[test]
fn unperturbed_ising_matches_pair_dynamics() {
    let n = 7;
    let schedule = FieldSchedule::from_rate(3.0, 0.5, -0.2).unwrap();
    let p = IsingParams::new(n, 1.0, 3.0).unwrap();
    let dense = ising_perturbed_sweep(&p, &schedule, 0.0, tight(), Units::default()).unwrap();
    let pairs = sweep_report(&p, &schedule, &IntegratorOptions::pair_default(), Units::default()).unwrap();
    assert!((dense.ground_weight - (1.0 - pairs.p_leave)).abs() < 1e-8);
    assert!((dense.mean_energy_above_ground - pairs.mean_energy_above_ground).abs() < 1e-8);
    assert!((dense.heating_ratio - pairs.heating_ratio()).abs() < 1e-8);
    assert!(dense.first_excited_weight < 1e-12);
}

#[test]
fn unperturbed_heisenberg_matches_sector_sweep() {
    let n = 5;
    let schedule = FieldSchedule::from_rate(10.0, 5.0, -6.0).unwrap();
    let p = HeisenbergParams::new(n, 1.0, DELTA, 10.0).unwrap();
    let full = heisenberg_perturbed_sweep(&p, &schedule, &PerturbationSpec::zero(n), tight(), Units::default()).unwrap();
    let sector = tdse_sweep(&p, &schedule, tight(), Units::default()).unwrap();
    assert!(full.initial_mismatch.abs() < 1e-10);
    assert!((full.p_v - sector.report.p_leave).abs() < 1e-8, "{} vs {}", full.p_v, sector.report.p_leave);
}

#[test]
fn ising_heating_grows_quadratically() {
    let n = 5;
    let schedule = FieldSchedule::from_rate(3.0, 0.0, -0.05).unwrap();
    let p = IsingParams::new(n, 1.0, 3.0).unwrap();
    let h = |e: f64| {
        ising_perturbed_sweep(&p, &schedule, e, IntegratorOptions::adaptive(1e-9, 1e-12), Units::default())
            .unwrap()
            .heating_ratio
    };
    let base = h(0.0);
    let (a, b) = (h(0.05) - base, h(0.1) - base);
    assert!((b / a - 4.0).abs() < 0.6, "{a} {b}");
}

#[test]
fn heisenberg_stays_within_twice_the_bound() {
    let n = 5;
    let schedule = FieldSchedule::new(10.0, 5.0, 10.0).unwrap();
    let p = HeisenbergParams::new(n, 1.0, DELTA, 10.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..4 {
        let spec = PerturbationSpec::random(n, 0.05, &mut rng);
        let bound = heisenberg_perturbation_bound(&spec, &p, 10.0);
        let r = heisenberg_perturbed_sweep(&p, &schedule, &spec, IntegratorOptions::adaptive(1e-9, 1e-12), Units::default())
            .unwrap();
        assert!(r.p_v <= 2.0 * bound.p_v, "{} vs {}", r.p_v, bound.p_v);
    }
}
