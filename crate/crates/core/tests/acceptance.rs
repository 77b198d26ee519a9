//! Acceptance checks, one line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` (the output is
//! printed either way). Criteria listed in `KNOWN_FAILURES` are expected to
//! fail; they still print `FAIL`, and an unexpected pass is reported as an
//! error so the list cannot go stale.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinramp::cli::loglog_fit;
use spinramp::heisenberg::classify::classify_along;
use spinramp::heisenberg::{
    dense_hamiltonian, diagonalize, group2_first_order, pe_heisenberg, perturbative_levels, sector_basis,
    symmetry_operators, tdse_sweep, HeisenbergParams,
};
use spinramp::ising::adiabatic::{duration_for_target, pe_regime1, pe_sum, Regime};
use spinramp::ising::dynamics::{evolve_sweep, rate_for_target, sweep_report, sweep_reports_along};
use spinramp::ising::oracle::{calibrate_offsets, dense_spectrum, dense_sweep};
use spinramp::ising::{enumerate_levels, min_two_fermion_gap, IsingParams};
use spinramp::linalg::{commutator_norm, hermitian_eigen};
use spinramp::ode::{integrate, IntegratorOptions, LinearGenerator};
use spinramp::stability::{
    heisenberg_perturbation_bound, heisenberg_perturbed_sweep, ising_perturbed_sweep, PerturbationSpec,
};
use spinramp::{FieldSchedule, Units, C64};

const DELTA: [f64; 3] = [0.1, 0.3, 1.0];

/// `(criterion, reason)`; see the README for the analysis.
const KNOWN_FAILURES: &[(&str, &str)] = &[
    (
        "4b",
        "close to g0 the two endpoint amplitudes interfere, so the numeric p_E swings around the single-endpoint estimate",
    ),
    (
        "8b",
        "the closed-form E20d band omits two boundary terms of the first-order block, so its residual tends to a constant",
    ),
    (
        "9b",
        "the bound weighs n_x and n_y, but with the field along x the spin-flipping components are n_y and n_z",
    ),
];

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn units() -> Units {
    Units::default()
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_offset: f64 = 0.0;
    for n in [3, 5, 7, 9, 11] {
        for g in [0.0, 0.5, 1.0, 2.0, 5.0] {
            let p = IsingParams::new(n, 1.0, g).unwrap();
            let ff: Vec<f64> = enumerate_levels(&p, 1 << n).unwrap().iter().map(|l| l.energy).collect();
            let dense = dense_spectrum(n, 1.0, g).unwrap();
            assert_eq!(ff.len(), dense.len());
            let dev = ff.iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(dev);
            let (e, o) = calibrate_offsets(&p).unwrap();
            worst_offset = worst_offset.max(e.abs()).max(o.abs());
        }
    }
    Outcome {
        id: "1",
        pass: worst <= 1e-8,
        detail: format!("max |Δ| = {worst:.2e} J over 25 (N, g); calibrated offsets within {worst_offset:.1e}"),
    }
}

fn criterion_2() -> Outcome {
    let n = 501;
    let (g, gap) = min_two_fermion_gap(n, 0.5, 1.5).unwrap();
    let target = 4.0 * std::f64::consts::PI / n as f64;
    let rel = (gap / target - 1.0).abs();
    Outcome {
        id: "2",
        pass: rel <= 0.02,
        detail: format!("min gap {gap:.6} at g = {g:.4}; 4π/N = {target:.6}; rel. dev. {rel:.1e}"),
    }
}

fn criterion_3() -> Outcome {
    let coeff = {
        let n = 101;
        let p = IsingParams::new(n, 1.0, 5.0).unwrap();
        duration_for_target(0.05, Regime::R3, &p, 5.0, 0.0, units(), true).unwrap() / (n * n) as f64
    };
    let opts = IntegratorOptions::pair_default();
    let (mut ns, mut ts) = (Vec::new(), Vec::new());
    for n in (11..=101).step_by(10) {
        let p = IsingParams::new(n, 1.0, 5.0).unwrap();
        let guess = coeff * (n * n) as f64;
        let s = rate_for_target(&p, 5.0, 0.0, 0.05, 1e-3, guess, &opts, units()).unwrap();
        ns.push(n as f64);
        ts.push(s.duration);
    }
    let (slope, c) = loglog_fit(&ns, &ts);
    let pass = (coeff - 0.2832).abs() <= 0.0005 && (1.8..=2.2).contains(&slope);
    Outcome {
        id: "3",
        pass,
        detail: format!(
            "analytic T/N² = {coeff:.4}; numeric T ∝ N^{slope:.3} (prefactor {:.4}, T/N² at N=101: {:.4})",
            c.exp(),
            ts.last().unwrap() / (101.0 * 101.0)
        ),
    }
}

fn criterion_4() -> Vec<Outcome> {
    let n = 51;
    let (g0, rate) = (5.0, -0.01);
    let p = IsingParams::new(n, 1.0, g0).unwrap();
    // 4.95, 4.90, …, 0.80 in sweep order (the figure grid).
    let g1s: Vec<f64> = (1..=84).map(|i| (500 - 5 * i) as f64 / 100.0).collect();
    let ramp = FieldSchedule::from_rate(g0, 0.8, rate).unwrap();
    let reports = sweep_reports_along(&p, &ramp, &g1s, &IntegratorOptions::pair_default(), units()).unwrap();
    let pe = |g: f64| {
        let i = g1s.iter().position(|&x| (x - g).abs() < 1e-9).unwrap();
        reports[i].p_leave
    };
    let jump = pe(0.8) / pe(1.5);
    let (mut worst, mut worst_at): (f64, f64) = (1.0, g0);
    let mut outside = Vec::new();
    for (g1, r) in g1s.iter().zip(&reports) {
        if *g1 >= 1.2 - 1e-9 {
            let s = FieldSchedule::from_rate(g0, *g1, rate).unwrap();
            let ratio = pe_sum(&p, &s, units()) / r.p_leave;
            if ratio.ln().abs() > worst.ln().abs() {
                (worst, worst_at) = (ratio, *g1);
            }
            if !(0.5..=2.0).contains(&ratio) {
                outside.push(format!("{g1}"));
            }
        }
    }
    vec![
        Outcome {
            id: "4a",
            pass: jump >= 10.0,
            detail: format!("p_E(0.8)/p_E(1.5) = {jump:.1}"),
        },
        Outcome {
            id: "4b",
            pass: outside.is_empty(),
            detail: format!(
                "worst pe_sum/numeric on [1.2, 4.95] = {worst:.3} at g1 = {worst_at}; outside 2x at g1 = [{}]",
                outside.join(", ")
            ),
        },
    ]
}

fn criterion_5() -> Outcome {
    let n = 501;
    let p = IsingParams::new(n, 1.0, 5.0).unwrap();
    let s = FieldSchedule::from_rate(5.0, 1.0, -1e-4).unwrap();
    let r = sweep_report(&p, &s, &IntegratorOptions::pair_default(), units()).unwrap();
    let lowest = &r.channels[0];
    let max = r.channels.iter().max_by(|a, b| a.probability.total_cmp(&b.probability)).unwrap();
    let second = r.channels[1].probability;
    Outcome {
        id: "5",
        pass: lowest.index == max.index,
        detail: format!(
            "lowest channel n = {} (2Λ = {:.5}) has p = {:.3e}; next channel {:.3e}; p_E = {:.3e}",
            lowest.index, lowest.energy, lowest.probability, second, r.p_leave
        ),
    }
}

fn criterion_6() -> Outcome {
    let mut ratios = Vec::new();
    for g1 in [5.0, 10.0, 20.0] {
        let s = FieldSchedule::new(2.0 * g1, g1, 10.0).unwrap();
        let hp = HeisenbergParams::new(101, 1.0, [0.0, 0.0, 1.0], 2.0 * g1).unwrap();
        let ip = IsingParams::new(101, 1.0, 2.0 * g1).unwrap();
        let h = pe_heisenberg(&hp, &s, units()).p_e;
        let i = pe_regime1(&ip, &s, units(), true).unwrap().p_e_bound;
        ratios.push((g1, h / i));
    }
    let at20 = ratios.last().unwrap().1;
    let text: Vec<String> = ratios.iter().map(|(g, r)| format!("g1={g}: {r:.4}")).collect();
    Outcome {
        id: "6",
        pass: (at20 - 1.0).abs() <= 0.02,
        detail: format!("pe_heisenberg/pe_regime1: {}", text.join(", ")),
    }
}

fn heisenberg_pe(n: usize, alpha: f64) -> (f64, f64) {
    let p = HeisenbergParams::new(n, 1.0, DELTA, 10.0).unwrap();
    let s = FieldSchedule::from_rate(10.0, 5.0, alpha).unwrap();
    let r = tdse_sweep(&p, &s, IntegratorOptions::adaptive(1e-10, 1e-12), units()).unwrap();
    (r.report.p_leave, pe_heisenberg(&p, &s, units()).p_e)
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 1.0;
    let mut track = |num: f64, est: f64| {
        let r = num / est;
        if r.ln().abs() > worst.ln().abs() {
            worst = r;
        }
        num
    };
    let ns = [5usize, 7, 9, 11];
    let pn: Vec<f64> = ns.iter().map(|&n| {
        let (a, b) = heisenberg_pe(n, -6.0);
        track(a, b)
    }).collect();
    let alphas = [-2.0, -4.0, -6.0, -10.0];
    let pa: Vec<f64> = alphas.iter().map(|&a| {
        let (x, y) = heisenberg_pe(9, a);
        track(x, y)
    }).collect();
    let nf: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let af: Vec<f64> = alphas.iter().map(|a: &f64| a.abs()).collect();
    let (sn, _) = loglog_fit(&nf, &pn);
    let (sa, _) = loglog_fit(&af, &pa);
    Outcome {
        id: "7",
        pass: (sn - 1.0).abs() <= 0.3 && (sa - 2.0).abs() <= 0.2 && (0.5..=2.0).contains(&worst),
        detail: format!("slope vs N = {sn:.3}; slope vs |α| = {sa:.3}; worst numeric/estimate = {worst:.3}"),
    }
}

/// `(g, E₀ residual, printed E20d residual, block E20d residual)` per `JN`,
/// largest absolute value over `d`.
fn level_residuals(n: usize, g: f64) -> (f64, f64, f64) {
    let p = HeisenbergParams::new(n, 1.0, DELTA, g).unwrap();
    let basis = sector_basis(n, 0, 1).unwrap();
    let dec = classify_along(&p, &basis, &[g]).unwrap().pop().unwrap();
    let nf = n as f64;
    let series = perturbative_levels(&p);
    let block = group2_first_order(&p);
    let e0 = dec.energies[dec.find(0, 1).unwrap()] / nf - series.e0();
    let m = (n - 1) / 2;
    let mut exact: Vec<f64> = (1..=m).map(|d| dec.energies[dec.find(2, d).unwrap()] / nf).collect();
    let mut printed: Vec<f64> = (1..=m).map(|d| series.e20d(d)).collect();
    exact.sort_by(f64::total_cmp);
    printed.sort_by(f64::total_cmp);
    let worst = |approx: &[f64]| exact.iter().zip(approx).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    (e0, worst(&printed), worst(&block.energies))
}

fn criterion_8() -> Vec<Outcome> {
    let gs = [10.0, 20.0, 40.0];
    let res: Vec<(f64, f64, f64)> = gs.iter().map(|&g| level_residuals(7, g)).collect();
    let slope = |f: fn(&(f64, f64, f64)) -> f64| {
        let ys: Vec<f64> = res.iter().map(|r| f(r).abs()).collect();
        (loglog_fit(&gs, &ys).0, ys)
    };
    let (s0, y0) = slope(|r| r.0);
    let (sp, yp) = slope(|r| r.1);
    let (sb, yb) = slope(|r| r.2);
    let fmt = |ys: &[f64]| ys.iter().map(|y| format!("{y:.2e}")).collect::<Vec<_>>().join(", ");
    vec![
        Outcome {
            id: "8a",
            pass: (s0 + 1.0).abs() <= 0.2,
            detail: format!("E0 residuals [{}] at g = 10, 20, 40; slope {s0:.3}", fmt(&y0)),
        },
        Outcome {
            id: "8b",
            pass: (sp + 1.0).abs() <= 0.2,
            detail: format!("closed-form E20d residuals [{}]; slope {sp:.3}", fmt(&yp)),
        },
        Outcome {
            id: "8c",
            pass: (sb + 1.0).abs() <= 0.2,
            detail: format!("first-order block E20d residuals [{}]; slope {sb:.3} (supplementary)", fmt(&yb)),
        },
    ]
}

fn criterion_9() -> Vec<Outcome> {
    let opts = IntegratorOptions::adaptive(1e-9, 1e-12);
    let s = FieldSchedule::from_rate(5.0, 0.0, -0.01).unwrap();
    let eps = [0.05, 0.1, 0.2];
    let mut slopes = Vec::new();
    let mut at_01 = Vec::new();
    let mut gap_ok = true;
    for n in [7usize, 9, 11] {
        let p = IsingParams::new(n, 1.0, 5.0).unwrap();
        let h: Vec<f64> = eps
            .iter()
            .map(|&e| {
                let r = ising_perturbed_sweep(&p, &s, e, opts, units()).unwrap();
                gap_ok &= r.first_excited_weight >= 10.0 * r.higher_weight;
                r.heating_ratio
            })
            .collect();
        slopes.push(loglog_fit(&eps, &h).0);
        at_01.push(h[1]);
    }
    let spread = at_01.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        / at_01.iter().copied().fold(f64::INFINITY, f64::min)
        - 1.0;
    let slopes_ok = slopes.iter().all(|s| (s - 2.0).abs() <= 0.3);
    let ising = Outcome {
        id: "9a",
        pass: slopes_ok && spread < 0.3 && gap_ok,
        detail: format!(
            "Ising ε-slopes {:.3}/{:.3}/{:.3} (N = 7/9/11), spread at ε=0.1 {:.0}%, gap-state dominated: {gap_ok}",
            slopes[0],
            slopes[1],
            slopes[2],
            100.0 * spread
        ),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let hs = FieldSchedule::new(10.0, 5.0, 10.0).unwrap();
    let mut worst: f64 = 0.0;
    // Same bound with ε built from the components that flip spins along the field (y, z).
    let mut worst_flip: f64 = 0.0;
    let mut count = 0;
    for n in [5usize, 7, 9] {
        let hp = HeisenbergParams::new(n, 1.0, DELTA, 10.0).unwrap();
        for _ in 0..20 {
            let spec = PerturbationSpec::random(n, 0.05, &mut rng);
            let bound = heisenberg_perturbation_bound(&spec, &hp, 10.0);
            let r = heisenberg_perturbed_sweep(&hp, &hs, &spec, opts, units()).unwrap();
            let flip: f64 = spec
                .strengths
                .iter()
                .zip(&spec.directions)
                .map(|(e, d)| e * e * (d[1] * d[1] + d[2] * d[2]))
                .sum::<f64>()
                / n as f64;
            let flip_bound = flip / (4.0 * 100.0) * n as f64;
            worst = worst.max(r.p_v / bound.p_v);
            worst_flip = worst_flip.max(r.p_v / flip_bound);
            count += 1;
        }
    }
    let heisenberg = Outcome {
        id: "9b",
        pass: worst <= 2.0,
        detail: format!(
            "Heisenberg max p_V/bound = {worst:.3} over {count} specs; with ε from (n_y, n_z) instead: {worst_flip:.3}"
        ),
    };
    vec![ising, heisenberg]
}

struct Rotating;

impl LinearGenerator for Rotating {
    fn dim(&self) -> usize {
        2
    }

    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]) {
        let off = C64::new(t.cos(), -t.sin());
        let mi = C64::new(0.0, -1.0);
        out[0] = mi * (0.5 * psi[0] + off * psi[1]);
        out[1] = mi * (off.conj() * psi[0] - 0.5 * psi[1]);
    }
}

fn criterion_10() -> Outcome {
    // Mode norms.
    let p = IsingParams::new(101, 1.0, 3.0).unwrap();
    let s = FieldSchedule::from_rate(3.0, 0.0, -0.05).unwrap();
    let drift = evolve_sweep(&p, &s, &IntegratorOptions::pair_default(), units()).unwrap().norm_drift();

    // Symmetries of the Heisenberg Hamiltonian and their conservation.
    let hp = HeisenbergParams::new(7, 1.0, DELTA, 1.3).unwrap();
    let h = dense_hamiltonian(&hp).unwrap().to_dense();
    let (z2, t) = symmetry_operators(7).unwrap();
    let comm = commutator_norm(&h, &z2.to_dense()).max(commutator_norm(&h, &t.to_dense()));
    let ds = dense_sweep(7, 1.0, &FieldSchedule::from_rate(2.0, 0.5, -0.5).unwrap(),
        IntegratorOptions::adaptive(1e-10, 1e-12), units()).unwrap();
    let conserved = ds.z2_drift.max(ds.translation_drift);

    // Sector completeness.
    let hp5 = HeisenbergParams::new(5, 1.0, DELTA, 0.9).unwrap();
    let (mut full, _) = hermitian_eigen(dense_hamiltonian(&hp5).unwrap().to_dense());
    let mut parts: Vec<f64> = (0..5)
        .flat_map(|k| [(k, 1i8), (k, -1i8)])
        .flat_map(|(k, z)| diagonalize(&hp5, &sector_basis(5, k, z).unwrap()).unwrap().energies)
        .collect();
    full.sort_by(f64::total_cmp);
    parts.sort_by(f64::total_cmp);
    let complete = full.len() == parts.len()
        && full.iter().zip(&parts).all(|(a, b)| (a - b).abs() < 1e-9);

    // Fourth-order convergence of RK4.
    let start = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let solve = |o| {
        let mut psi = start;
        integrate(&Rotating, 0.0, 3.0, &mut psi, o).unwrap();
        psi
    };
    let exact = solve(IntegratorOptions::adaptive(1e-13, 1e-15));
    let err = |hh: f64| {
        let psi = solve(IntegratorOptions::rk4(hh));
        ((psi[0] - exact[0]).norm_sqr() + (psi[1] - exact[1]).norm_sqr()).sqrt()
    };
    let ratio = err(0.04) / err(0.02);

    // CLI determinism.
    let cli = || {
        Command::new(env!("CARGO_BIN_EXE_spinramp"))
            .args(["sweep", "ising", "--n", "21", "--g0", "5", "--g1-scan", "0:0.25:5", "--rate", "-0.05", "--with-bounds"])
            .output()
            .unwrap()
    };
    let (a, b) = (cli(), cli());
    let deterministic = a.status.success() && a.stdout == b.stdout;

    Outcome {
        id: "10",
        pass: drift < 1e-9 && comm < 1e-8 && conserved < 1e-8 && complete && (ratio - 16.0).abs() <= 3.0 && deterministic,
        detail: format!(
            "norm drift {drift:.1e}; [H,Z2],[H,T] {comm:.1e}; symmetry drift {conserved:.1e}; sectors complete: {complete}; \
             RK4 ratio {ratio:.2}; CLI deterministic: {deterministic}"
        ),
    }
}

fn main() -> ExitCode {
    let checks: Vec<(&str, fn() -> Vec<Outcome>)> = vec![
        ("1", || vec![criterion_1()]),
        ("2", || vec![criterion_2()]),
        ("3", || vec![criterion_3()]),
        ("4", criterion_4),
        ("5", || vec![criterion_5()]),
        ("6", || vec![criterion_6()]),
        ("7", || vec![criterion_7()]),
        ("8", criterion_8),
        ("9", criterion_9),
        ("10", || vec![criterion_10()]),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = 0;
    for (id, check) in checks {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let start = Instant::now();
        let outcomes = check();
        let secs = start.elapsed().as_secs_f64();
        for o in outcomes {
            let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == o.id);
            let verdict = if o.pass { "PASS" } else { "FAIL" };
            let note = match (o.pass, known) {
                (false, Some((_, why))) => format!(" [known: {why}]"),
                (false, None) => {
                    unexpected += 1;
                    String::new()
                }
                (true, Some(_)) => {
                    unexpected += 1;
                    " [listed as a known failure but passed]".to_string()
                }
                (true, None) => String::new(),
            };
            println!("criterion {:<3} {verdict}  {} ({secs:.1} s){note}", o.id, o.detail);
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected result(s)");
        ExitCode::FAILURE
    }
}
