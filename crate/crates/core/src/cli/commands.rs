//! The `spectrum`, `sweep` and `scan` subcommands.

use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::args::{Axis, IntegratorArgs, Model, ScanArgs, SpectrumArgs, SweepArgs};
use super::grid::{parse_grid, parse_int_grid};
use super::output::{fmt, fmt_opt, Artifact, Run, Table};
use super::{loglog_fit, CliError, Ctx};
use crate::heisenberg::{self, classify::classify_along, pe_heisenberg, sector_basis, tdse_sweep, HeisenbergParams};
use crate::ising::adiabatic::{duration_for_target, p0n_bound, pe_regime, Regime, RegimeEstimate, Validity};
use crate::ising::dynamics::{rate_for_target, sweep_report, sweep_reports_along};
use crate::ising::{enumerate_levels, lambda_even, IsingParams};
use crate::stability::{
    heisenberg_perturbation_bound, heisenberg_perturbed_sweep, ising_perturbed_sweep, PerturbationSpec,
};
use crate::{ExcitationReport, FieldSchedule};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn grid(spec: &str) -> Result<Vec<f64>, CliError> {
    parse_grid(spec).map_err(|e| usage(e.0))
}

fn single(spec: Option<&str>, default: f64, what: &str) -> Result<f64, CliError> {
    match spec {
        None => Ok(default),
        Some(s) => match grid(s)?.as_slice() {
            [x] => Ok(*x),
            _ => Err(usage(format!("--{what} takes a single value here"))),
        },
    }
}

fn validity_name(v: Validity) -> &'static str {
    match v {
        Validity::Valid => "valid",
        Validity::Marginal => "marginal",
        Validity::Invalid => "invalid",
    }
}

/// Schedule from exactly one of rate, duration, alpha.
fn schedule_from(g0: f64, g1: f64, rate: Option<f64>, duration: Option<f64>) -> Result<FieldSchedule, CliError> {
    match (rate, duration) {
        (Some(r), None) => Ok(FieldSchedule::from_rate(g0, g1, r)?),
        (None, Some(t)) => Ok(FieldSchedule::new(g0, g1, t)?),
        (None, None) => Err(usage("one of --rate, --T or --alpha is required")),
        (Some(_), Some(_)) => Err(usage("--rate and --T are mutually exclusive")),
    }
}

// ---------------------------------------------------------------- spectrum

pub fn spectrum(ctx: &Ctx, a: &SpectrumArgs) -> Result<Run, CliError> {
    match a.model {
        Model::Ising => spectrum_ising(ctx, a),
        Model::Heisenberg => spectrum_heisenberg(ctx, a),
    }
}

fn spectrum_ising(ctx: &Ctx, a: &SpectrumArgs) -> Result<Run, CliError> {
    let gs = grid(a.g.as_deref().unwrap_or("0:0.01:3"))?;
    let params = IsingParams::new(a.n, ctx.coupling, 0.0)?;
    let max = a.levels.unwrap_or(if a.n <= 10 { 1 << a.n } else { 64 });
    let per_g = gs
        .par_iter()
        .map(|&g| enumerate_levels(&params.with_field(g), max))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut t = Table::new(&["g", "level", "energy", "z2", "occupied"]);
    for (g, levels) in gs.iter().zip(per_g) {
        for (i, l) in levels.iter().enumerate() {
            let occ: Vec<String> = l.occupied.iter().map(|k| k.to_string()).collect();
            t.row([fmt(*g), i.to_string(), fmt(l.energy), l.sector.z2().to_string(), occ.join(" ")]);
        }
    }
    let mut run = Run::new(
        "spectrum",
        json!({"model": "ising", "n_sites": a.n, "coupling": ctx.coupling, "g": gs, "levels": max}),
    );
    run.artifacts.push(t.finish("spectrum_ising.csv"));
    Ok(run)
}

#[derive(Debug, Clone, Copy)]
struct Labelled {
    energy: f64,
    z2: i8,
    k: usize,
    n: usize,
    d: usize,
    flagged: bool,
}

/// Groups energy-sorted states into multiplets.
fn multiplets(states: &[Labelled]) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=states.len() {
        let split = i == states.len() || {
            let (a, b) = (states[i - 1].energy, states[i].energy);
            (b - a).abs() > 1e-8 * a.abs().max(1.0)
        };
        if split {
            out.push(start..i);
            start = i;
        }
    }
    out
}

fn spectrum_heisenberg(ctx: &Ctx, a: &SpectrumArgs) -> Result<Run, CliError> {
    let gs = grid(a.g.as_deref().unwrap_or("0:0.05:5"))?;
    if gs.iter().any(|&g| g < 0.0) {
        return Err(usage("Heisenberg fields must be nonnegative"));
    }
    let params = HeisenbergParams::new(a.n, ctx.coupling, a.anisotropy.delta(), gs[0])?;
    let sectors: Vec<(usize, i8)> = (0..a.n).flat_map(|k| [(k, 1i8), (k, -1i8)]).collect();
    let decs = sectors
        .par_iter()
        .map(|&(k, z2)| {
            let basis = sector_basis(a.n, k, z2)?;
            classify_along(&params, &basis, &gs)
        })
        .collect::<crate::Result<Vec<_>>>()?;

    let mut t = Table::new(&["g", "level", "energy", "z2", "k", "n", "d", "D", "flagged"]);
    let mut flagged = 0usize;
    let mut last: Vec<Labelled> = Vec::new();
    for (gi, g) in gs.iter().enumerate() {
        let mut states: Vec<Labelled> = decs
            .iter()
            .flat_map(|per_g| {
                let dec = &per_g[gi];
                dec.energies.iter().zip(&dec.labels).map(|(&e, l)| Labelled {
                    energy: e,
                    z2: l.z2,
                    k: l.momentum_index,
                    n: l.group_index,
                    d: l.degeneracy_index,
                    flagged: l.flagged,
                })
            })
            .collect();
        states.sort_by(|x, y| x.energy.total_cmp(&y.energy).then(x.k.cmp(&y.k)).then(y.z2.cmp(&x.z2)));
        flagged += states.iter().filter(|s| s.flagged).count();
        let sizes: Vec<usize> = {
            let mut v = vec![0; states.len()];
            for r in multiplets(&states) {
                let len = r.len();
                v[r].iter_mut().for_each(|x| *x = len);
            }
            v
        };
        for (i, s) in states.iter().enumerate() {
            t.row([
                fmt(*g),
                i.to_string(),
                fmt(s.energy),
                s.z2.to_string(),
                s.k.to_string(),
                s.n.to_string(),
                s.d.to_string(),
                sizes[i].to_string(),
                (s.flagged as u8).to_string(),
            ]);
        }
        last = states;
    }

    let g_tab = *gs.last().expect("nonempty grid");
    let mut deg = Table::new(&["multiplet", "energy", "D", "n", "z2", "k"]);
    for (m, r) in multiplets(&last).into_iter().enumerate() {
        let members = &last[r];
        let mut ns: Vec<usize> = members.iter().map(|s| s.n).collect();
        ns.dedup();
        let mut ks: Vec<usize> = members.iter().map(|s| s.k).collect();
        ks.sort_unstable();
        ks.dedup();
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        deg.row([
            m.to_string(),
            fmt(members[0].energy),
            members.len().to_string(),
            join(&ns),
            members[0].z2.to_string(),
            join(&ks),
        ]);
    }

    let mut run = Run::new(
        "spectrum",
        json!({
            "model": "heisenberg", "n_sites": a.n, "coupling": ctx.coupling,
            "delta": a.anisotropy.delta(), "g": gs, "degeneracy_table_field": g_tab,
        }),
    );
    if flagged > 0 {
        run.validity_flags
            .push(format!("{flagged} state labels matched with overlap below the tracking threshold"));
    }
    run.notes
        .push(format!("degeneracy table evaluated at g = {}", fmt(g_tab)));
    run.artifacts.push(t.finish("spectrum_heisenberg.csv"));
    run.artifacts.push(deg.finish("degeneracy.csv"));
    Ok(run)
}

// ---------------------------------------------------------------- sweep

#[derive(Debug, Serialize)]
struct IsingBounds {
    pe_sum: f64,
    regimes: Vec<RegimeEstimate>,
}

#[derive(Debug, Serialize)]
struct IsingSweepOutput<'a> {
    model: &'static str,
    n_sites: usize,
    coupling: f64,
    hbar: f64,
    schedule: FieldSchedule,
    p_e: f64,
    heating_ratio: f64,
    report: &'a ExcitationReport,
    bounds: Option<IsingBounds>,
}

#[derive(Debug, Serialize)]
struct HeisenbergSweepOutput<'a> {
    model: &'static str,
    n_sites: usize,
    coupling: f64,
    hbar: f64,
    delta: [f64; 3],
    schedule: FieldSchedule,
    p_e: f64,
    heating_ratio: f64,
    other_groups_weight: f64,
    estimate: heisenberg::perturbative::HeisenbergEstimate,
    report: &'a ExcitationReport,
}

fn regimes(params: &IsingParams, schedule: &FieldSchedule, ctx: &Ctx) -> Vec<RegimeEstimate> {
    [Regime::R1, Regime::R2, Regime::R3]
        .into_iter()
        .filter_map(|r| pe_regime(r, params, schedule, ctx.units, true).ok())
        .collect()
}

pub fn sweep(ctx: &Ctx, a: &SweepArgs) -> Result<Run, CliError> {
    let rate = a.rate.or(a.alpha);
    match (a.model, a.g1, &a.g1_scan) {
        (Model::Ising, Some(g1), None) => sweep_ising(ctx, a, g1, schedule_from(a.g0, g1, rate, a.duration)?),
        (Model::Ising, None, Some(spec)) => {
            let rate = rate.ok_or_else(|| usage("--g1-scan needs --rate"))?;
            let g1s = grid(spec)?;
            let mut run = Run::new(
                "sweep",
                json!({
                    "model": "ising", "n_sites": a.n, "coupling": ctx.coupling, "hbar": ctx.units.hbar,
                    "g0": a.g0, "g1_scan": g1s, "rate": rate, "with_bounds": a.with_bounds,
                    "integrator": a.integrator,
                }),
            );
            let table = g1_scan_table(ctx, a.n, a.g0, &g1s, rate, a.with_bounds, &a.integrator, &mut run)?;
            run.artifacts.push(table.finish("sweep_ising_g1_scan.csv"));
            Ok(run)
        }
        (Model::Heisenberg, Some(g1), None) => {
            sweep_heisenberg(ctx, a, g1, schedule_from(a.g0, g1, rate, a.duration)?)
        }
        (Model::Heisenberg, None, Some(_)) => Err(usage("--g1-scan is only available for the Ising model")),
        _ => Err(usage("exactly one of --g1 and --g1-scan is required")),
    }
}

fn sweep_ising(ctx: &Ctx, a: &SweepArgs, g1: f64, schedule: FieldSchedule) -> Result<Run, CliError> {
    let params = IsingParams::new(a.n, ctx.coupling, a.g0)?;
    let report = sweep_report(&params, &schedule, &a.integrator.pair_options(), ctx.units)?;
    let mut run = Run::new(
        "sweep",
        json!({
            "model": "ising", "n_sites": a.n, "coupling": ctx.coupling, "hbar": ctx.units.hbar,
            "g0": a.g0, "g1": g1, "rate": schedule.rate(), "duration": schedule.duration,
            "with_bounds": a.with_bounds, "integrator": a.integrator,
        }),
    );
    let channel_bounds: Option<Vec<f64>> = a.with_bounds.then(|| {
        report
            .channels
            .par_iter()
            .map(|c| p0n_bound(c.index, &params, &schedule, ctx.units))
            .collect()
    });
    let bounds = channel_bounds.as_ref().map(|b| {
        let regs = regimes(&params, &schedule, ctx);
        for r in &regs {
            if r.validity != Validity::Valid {
                run.validity_flags
                    .push(format!("{:?} estimate is {}", r.regime, validity_name(r.validity)));
            }
        }
        IsingBounds {
            pe_sum: b.iter().sum(),
            regimes: regs,
        }
    });
    if report.p_total_exceeds_one {
        run.validity_flags.push("sum of channel probabilities exceeds one".into());
    }
    let mut t = Table::new(&["rank", "n", "energy", "probability", "bound"]);
    for (rank, c) in report.channels.iter().enumerate() {
        let b = channel_bounds.as_ref().map(|b| b[rank]);
        t.row([
            (rank + 1).to_string(),
            c.index.to_string(),
            fmt(c.energy),
            fmt(c.probability),
            fmt_opt(b),
        ]);
    }
    let out = IsingSweepOutput {
        model: "ising",
        n_sites: a.n,
        coupling: ctx.coupling,
        hbar: ctx.units.hbar,
        schedule,
        p_e: report.p_leave,
        heating_ratio: report.heating_ratio(),
        report: &report,
        bounds,
    };
    run.artifacts.push(Artifact::json("sweep_ising.json", &out));
    run.artifacts.push(t.finish("sweep_ising_p0n.csv"));
    Ok(run)
}

/// `p_E` and estimates for every final field of one ramp `g₀ → min(g1s)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn g1_scan_table(
    ctx: &Ctx,
    n: usize,
    g0: f64,
    g1s: &[f64],
    rate: f64,
    with_bounds: bool,
    integ: &IntegratorArgs,
    run: &mut Run,
) -> Result<Table, CliError> {
    let params = IsingParams::new(n, ctx.coupling, g0)?;
    let inside = |g: f64| if rate < 0.0 { g <= g0 } else { g >= g0 };
    if let Some(bad) = g1s.iter().find(|&&g| !inside(g)) {
        return Err(usage(format!("final field {bad} is not reached from g0 = {g0} at rate {rate}")));
    }
    let far = if rate < 0.0 {
        g1s.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        g1s.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    };
    // Visit the fields in sweep order, then restore the requested order.
    let mut order: Vec<usize> = (0..g1s.len()).collect();
    order.sort_by(|&i, &j| {
        let c = g1s[i].total_cmp(&g1s[j]);
        if rate < 0.0 {
            c.reverse()
        } else {
            c
        }
    });
    let visited: Vec<f64> = order.iter().map(|&i| g1s[i]).collect();
    let mut reports = vec![None; g1s.len()];
    if far != g0 {
        let ramp = FieldSchedule::from_rate(g0, far, rate)?;
        let along = sweep_reports_along(&params, &ramp, &visited, &integ.pair_options(), ctx.units)?;
        for (&i, r) in order.iter().zip(along) {
            reports[i] = Some(r);
        }
    }

    let mut header = vec!["g1", "duration", "p_e", "p_total", "heating_ratio"];
    if with_bounds {
        header.extend(["pe_sum", "pe_r1", "r1_validity", "pe_r2", "r2_validity", "pe_r3", "r3_validity"]);
    }
    let rows: Vec<Vec<String>> = g1s
        .par_iter()
        .zip(&reports)
        .map(|(&g1, rep)| {
            let duration = if g1 == g0 { 0.0 } else { (g1 - g0) / rate };
            let mut row = vec![
                fmt(g1),
                fmt(duration),
                fmt(rep.as_ref().map_or(0.0, |r| r.p_leave)),
                fmt(rep.as_ref().map_or(0.0, |r| r.p_total)),
                fmt(rep.as_ref().map_or(0.0, |r| r.heating_ratio())),
            ];
            if with_bounds {
                if g1 == g0 {
                    row.extend(["0", "", "", "", "", "", ""].map(String::from));
                } else {
                    let s = FieldSchedule::from_rate(g0, g1, rate).expect("checked above");
                    let sum: f64 = (1..=params.n_pairs()).map(|k| p0n_bound(k, &params, &s, ctx.units)).sum();
                    row.push(fmt(sum));
                    for r in regimes(&params, &s, ctx) {
                        let value = (r.validity != Validity::Invalid).then_some(r.p_e_bound);
                        row.push(fmt_opt(value));
                        row.push(validity_name(r.validity).to_string());
                    }
                }
            }
            row
        })
        .collect();
    let mut t = Table::new(&header);
    for r in rows {
        t.row(r);
    }
    if with_bounds {
        run.notes.push(
            "regime estimates are left blank where the regime's conditions fail; marginal values are kept".into(),
        );
    }
    Ok(t)
}

fn sweep_heisenberg(ctx: &Ctx, a: &SweepArgs, g1: f64, schedule: FieldSchedule) -> Result<Run, CliError> {
    let params = HeisenbergParams::new(a.n, ctx.coupling, a.anisotropy.delta(), a.g0)?;
    let res = tdse_sweep(&params, &schedule, a.integrator.dense_options(), ctx.units)?;
    let estimate = pe_heisenberg(&params, &schedule, ctx.units);
    let mut run = Run::new(
        "sweep",
        json!({
            "model": "heisenberg", "n_sites": a.n, "coupling": ctx.coupling, "hbar": ctx.units.hbar,
            "delta": a.anisotropy.delta(), "g0": a.g0, "g1": g1, "rate": schedule.rate(),
            "duration": schedule.duration, "integrator": a.integrator,
        }),
    );
    if estimate.validity != Validity::Valid {
        run.validity_flags
            .push(format!("perturbative estimate is {}", validity_name(estimate.validity)));
    }
    let mut t = Table::new(&["d", "energy", "probability"]);
    for c in &res.report.channels {
        t.row([c.index.to_string(), fmt(c.energy), fmt(c.probability)]);
    }
    let out = HeisenbergSweepOutput {
        model: "heisenberg",
        n_sites: a.n,
        coupling: ctx.coupling,
        hbar: ctx.units.hbar,
        delta: a.anisotropy.delta(),
        schedule,
        p_e: res.report.p_leave,
        heating_ratio: res.report.heating_ratio(),
        other_groups_weight: res.other_groups_weight,
        estimate,
        report: &res.report,
    };
    run.artifacts.push(Artifact::json("sweep_heisenberg.json", &out));
    run.artifacts.push(t.finish("sweep_heisenberg_channels.csv"));
    Ok(run)
}

// ---------------------------------------------------------------- scan

#[derive(Debug, Serialize)]
struct ScanSummary {
    axis: &'static str,
    model: Model,
    points: usize,
    failures: usize,
    /// Least-squares fit of `ln y = slope·ln x + ln prefactor`.
    fit: Option<Fit>,
    extra: serde_json::Value,
}

#[derive(Debug, Serialize)]
struct Fit {
    x: &'static str,
    y: &'static str,
    slope: f64,
    prefactor: f64,
}

fn fit(x: &'static str, y: &'static str, xs: &[f64], ys: &[f64]) -> Option<Fit> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (*a, *b))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    let (slope, intercept) = loglog_fit(&xs, &ys);
    Some(Fit {
        x,
        y,
        slope,
        prefactor: intercept.exp(),
    })
}

pub fn scan(ctx: &Ctx, a: &ScanArgs) -> Result<Run, CliError> {
    let rate_spec = a.rate.as_deref().or(a.alpha.as_deref());
    match (a.axis, a.model) {
        (Axis::N, Model::Ising) => scan_n_ising(ctx, a),
        (Axis::N, Model::Heisenberg) => scan_n_heisenberg(ctx, a, rate_spec),
        (Axis::Rate, Model::Ising) => scan_rate_ising(ctx, a, rate_spec),
        (Axis::Rate, Model::Heisenberg) => scan_rate_heisenberg(ctx, a, rate_spec),
        (Axis::G1, Model::Ising) => {
            let n = single(a.n.as_deref(), 51.0, "n")? as usize;
            let g0 = a.g0.unwrap_or(5.0);
            let rate = single(rate_spec, -0.01, "rate")?;
            let g1s = grid(a.g1.as_deref().unwrap_or("0:0.05:5"))?;
            let mut run = Run::new(
                "scan",
                json!({"axis": "g1", "model": "ising", "n_sites": n, "g0": g0, "g1": g1s, "rate": rate,
                       "coupling": ctx.coupling, "hbar": ctx.units.hbar, "integrator": a.integrator}),
            );
            let t = g1_scan_table(ctx, n, g0, &g1s, rate, true, &a.integrator, &mut run)?;
            run.artifacts.push(t.finish("scan_g1.csv"));
            Ok(run)
        }
        (Axis::G1, Model::Heisenberg) => Err(usage("the g1 axis is only available for the Ising model")),
        (Axis::Epsilon, Model::Ising) => scan_eps_ising(ctx, a, rate_spec),
        (Axis::Epsilon, Model::Heisenberg) => scan_eps_heisenberg(ctx, a, rate_spec),
    }
}

fn scan_n_ising(ctx: &Ctx, a: &ScanArgs) -> Result<Run, CliError> {
    let ns = parse_int_grid(a.n.as_deref().unwrap_or("11:10:101")).map_err(|e| usage(e.0))?;
    let g0 = a.g0.unwrap_or(5.0);
    let g1 = single(a.g1.as_deref(), 0.0, "g1")?;
    let target = a.target_pe;
    let regime = if g1 <= 1.0 { Regime::R3 } else { Regime::R1 };
    let opts = a.integrator.pair_options();
    // Solve each N independently; per-N failures are recorded, not fatal.
    let results: Vec<(usize, Result<_, String>, Option<f64>)> = ns
        .par_iter()
        .map(|&n| {
            let analytic = IsingParams::new(n, ctx.coupling, g0)
                .and_then(|p| duration_for_target(target, regime, &p, g0, g1, ctx.units, true))
                .ok();
            let solved = IsingParams::new(n, ctx.coupling, g0)
                .and_then(|p| {
                    let guess = analytic.unwrap_or((n * n) as f64);
                    rate_for_target(&p, g0, g1, target, a.rel_tol, guess, &opts, ctx.units)
                })
                .map_err(|e| e.to_string());
            (n, solved, analytic)
        })
        .collect();
    let mut t = Table::new(&[
        "n_sites",
        "rate",
        "duration",
        "duration_over_n2",
        "p_e",
        "evaluations",
        "analytic_duration",
        "error",
    ]);
    let mut run = Run::new(
        "scan",
        json!({"axis": "N", "model": "ising", "n": ns, "g0": g0, "g1": g1, "target_pe": target,
               "rel_tol": a.rel_tol, "coupling": ctx.coupling, "hbar": ctx.units.hbar,
               "integrator": a.integrator}),
    );
    let (mut xs, mut ts, mut analytic_coeff) = (Vec::new(), Vec::new(), None);
    for (n, res, analytic) in &results {
        let nf = *n as f64;
        analytic_coeff = analytic.map(|t| t / (nf * nf)).or(analytic_coeff);
        match res {
            Ok(s) => {
                xs.push(nf);
                ts.push(s.duration);
                t.row([
                    n.to_string(),
                    fmt(s.rate),
                    fmt(s.duration),
                    fmt(s.duration / (nf * nf)),
                    fmt(s.p_e),
                    s.evaluations.to_string(),
                    fmt_opt(*analytic),
                    String::new(),
                ]);
            }
            Err(e) => {
                run.failures.push(format!("N = {n}: {e}"));
                let row = [n.to_string(), String::new(), String::new(), String::new(), String::new(),
                           String::new(), fmt_opt(*analytic), e.clone()];
                t.row(row);
            }
        }
    }
    let summary = ScanSummary {
        axis: "N",
        model: Model::Ising,
        points: ns.len(),
        failures: run.failures.len(),
        fit: fit("n_sites", "duration", &xs, &ts),
        extra: json!({"target_pe": target, "analytic_regime": format!("{regime:?}"),
                      "analytic_duration_over_n2": analytic_coeff}),
    };
    run.artifacts.push(t.finish("scan_N.csv"));
    run.artifacts.push(Artifact::json("scan_N.json", &summary));
    Ok(run)
}

fn heisenberg_point(
    ctx: &Ctx,
    n: usize,
    delta: [f64; 3],
    g0: f64,
    g1: f64,
    rate: f64,
    integ: &IntegratorArgs,
) -> crate::Result<(f64, f64)> {
    let params = HeisenbergParams::new(n, ctx.coupling, delta, g0)?;
    let s = FieldSchedule::from_rate(g0, g1, rate)?;
    let res = tdse_sweep(&params, &s, integ.dense_options(), ctx.units)?;
    Ok((res.report.p_leave, pe_heisenberg(&params, &s, ctx.units).p_e))
}

fn scan_n_heisenberg(ctx: &Ctx, a: &ScanArgs, rate_spec: Option<&str>) -> Result<Run, CliError> {
    let ns = parse_int_grid(a.n.as_deref().unwrap_or("5:2:11")).map_err(|e| usage(e.0))?;
    let g0 = a.g0.unwrap_or(10.0);
    let g1 = single(a.g1.as_deref(), 5.0, "g1")?;
    let rate = single(rate_spec, -6.0, "alpha")?;
    let delta = a.anisotropy.delta();
    let pts = ns
        .par_iter()
        .map(|&n| heisenberg_point(ctx, n, delta, g0, g1, rate, &a.integrator))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut t = Table::new(&["n_sites", "alpha", "p_e", "pe_estimate", "ratio"]);
    for (n, (p, e)) in ns.iter().zip(&pts) {
        t.row([n.to_string(), fmt(rate), fmt(*p), fmt(*e), fmt(p / e)]);
    }
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let ps: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let mut run = Run::new(
        "scan",
        json!({"axis": "N", "model": "heisenberg", "n": ns, "g0": g0, "g1": g1, "alpha": rate,
               "delta": delta, "coupling": ctx.coupling, "hbar": ctx.units.hbar, "integrator": a.integrator}),
    );
    let summary = ScanSummary {
        axis: "N",
        model: Model::Heisenberg,
        points: ns.len(),
        failures: 0,
        fit: fit("n_sites", "p_e", &xs, &ps),
        extra: json!({}),
    };
    run.artifacts.push(t.finish("scan_N.csv"));
    run.artifacts.push(Artifact::json("scan_N.json", &summary));
    Ok(run)
}

/// Sixteen rates from −1e-4 to −10, log-spaced.
fn default_rates() -> Vec<f64> {
    (0..16)
        .map(|i| -(10f64.powf(-4.0 + 5.0 * i as f64 / 15.0) * 1e6).round() / 1e6)
        .map(|r: f64| if r == 0.0 { -1e-4 } else { r })
        .collect()
}

fn scan_rate_ising(ctx: &Ctx, a: &ScanArgs, rate_spec: Option<&str>) -> Result<Run, CliError> {
    let n = single(a.n.as_deref(), 51.0, "n")? as usize;
    let g0 = a.g0.unwrap_or(5.0);
    let g1 = single(a.g1.as_deref(), 0.0, "g1")?;
    let rates = match rate_spec {
        Some(s) => grid(s)?,
        None => default_rates(),
    };
    let params = IsingParams::new(n, ctx.coupling, g0)?;
    let opts = a.integrator.pair_options();
    let rows = rates
        .par_iter()
        .map(|&rate| {
            let s = FieldSchedule::from_rate(g0, g1, rate)?;
            let rep = sweep_report(&params, &s, &opts, ctx.units)?;
            let adiabatic: f64 = (1..=params.n_pairs())
                .map(|k| p0n_bound(k, &params, &s, ctx.units) * 2.0 * ctx.coupling * lambda_even(k, g1, n))
                .sum::<f64>()
                / rep.spectrum_width;
            Ok((rate, s.duration, rep, adiabatic))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let mut t = Table::new(&[
        "rate",
        "duration",
        "p_e",
        "heating_ratio",
        "energy_std_ratio",
        "adiabatic_heating_ratio",
    ]);
    for (rate, d, rep, ad) in &rows {
        t.row([
            fmt(*rate),
            fmt(*d),
            fmt(rep.p_leave),
            fmt(rep.heating_ratio()),
            fmt(rep.energy_variance.sqrt() / rep.spectrum_width),
            fmt(*ad),
        ]);
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.0.abs()).collect();
    let hs: Vec<f64> = rows.iter().map(|r| r.2.heating_ratio()).collect();
    let mut run = Run::new(
        "scan",
        json!({"axis": "rate", "model": "ising", "n_sites": n, "g0": g0, "g1": g1, "rates": rates,
               "coupling": ctx.coupling, "hbar": ctx.units.hbar, "integrator": a.integrator}),
    );
    run.notes
        .push("adiabatic_heating_ratio uses the per-channel bounds weighted by 2Λ_n(g1)".into());
    let summary = ScanSummary {
        axis: "rate",
        model: Model::Ising,
        points: rows.len(),
        failures: 0,
        fit: fit("abs_rate", "heating_ratio", &xs, &hs),
        extra: json!({}),
    };
    run.artifacts.push(t.finish("scan_rate.csv"));
    run.artifacts.push(Artifact::json("scan_rate.json", &summary));
    Ok(run)
}

fn scan_rate_heisenberg(ctx: &Ctx, a: &ScanArgs, rate_spec: Option<&str>) -> Result<Run, CliError> {
    let n = single(a.n.as_deref(), 9.0, "n")? as usize;
    let g0 = a.g0.unwrap_or(10.0);
    let g1 = single(a.g1.as_deref(), 5.0, "g1")?;
    let alphas = grid(rate_spec.unwrap_or("-1,-2,-4,-6,-8,-10,-15,-20"))?;
    let delta = a.anisotropy.delta();
    let pts = alphas
        .par_iter()
        .map(|&r| heisenberg_point(ctx, n, delta, g0, g1, r, &a.integrator))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut t = Table::new(&["alpha", "duration", "p_e", "pe_estimate", "ratio"]);
    for (r, (p, e)) in alphas.iter().zip(&pts) {
        t.row([fmt(*r), fmt((g1 - g0) / r), fmt(*p), fmt(*e), fmt(p / e)]);
    }
    let xs: Vec<f64> = alphas.iter().map(|r| r.abs()).collect();
    let ps: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let mut run = Run::new(
        "scan",
        json!({"axis": "rate", "model": "heisenberg", "n_sites": n, "g0": g0, "g1": g1, "alpha": alphas,
               "delta": delta, "coupling": ctx.coupling, "hbar": ctx.units.hbar, "integrator": a.integrator}),
    );
    let summary = ScanSummary {
        axis: "rate",
        model: Model::Heisenberg,
        points: alphas.len(),
        failures: 0,
        fit: fit("abs_alpha", "p_e", &xs, &ps),
        extra: json!({}),
    };
    run.artifacts.push(t.finish("scan_rate.csv"));
    run.artifacts.push(Artifact::json("scan_rate.json", &summary));
    Ok(run)
}

fn scan_eps_ising(ctx: &Ctx, a: &ScanArgs, rate_spec: Option<&str>) -> Result<Run, CliError> {
    let n = single(a.n.as_deref(), 9.0, "n")? as usize;
    let g0 = a.g0.unwrap_or(5.0);
    let g1 = single(a.g1.as_deref(), 0.0, "g1")?;
    let rate = single(rate_spec, -0.01, "rate")?;
    let eps = grid(a.eps.as_deref().unwrap_or("0,0.05,0.1,0.2"))?;
    let params = IsingParams::new(n, ctx.coupling, g0)?;
    let s = FieldSchedule::from_rate(g0, g1, rate)?;
    let opts = a.integrator.dense_options();
    let reps = eps
        .par_iter()
        .map(|&e| ising_perturbed_sweep(&params, &s, e, opts, ctx.units))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut t = Table::new(&[
        "epsilon",
        "heating_ratio",
        "mean_energy_above_ground",
        "ground_weight",
        "first_excited_weight",
        "higher_weight",
    ]);
    for r in &reps {
        t.row([
            fmt(r.epsilon),
            fmt(r.heating_ratio),
            fmt(r.mean_energy_above_ground),
            fmt(r.ground_weight),
            fmt(r.first_excited_weight),
            fmt(r.higher_weight),
        ]);
    }
    let hs: Vec<f64> = reps.iter().map(|r| r.heating_ratio).collect();
    let constants: Vec<f64> = reps
        .iter()
        .filter(|r| r.epsilon != 0.0)
        .map(|r| r.heating_ratio / (r.epsilon * r.epsilon))
        .collect();
    let mut run = Run::new(
        "scan",
        json!({"axis": "epsilon", "model": "ising", "n_sites": n, "g0": g0, "g1": g1, "rate": rate,
               "epsilon": eps, "coupling": ctx.coupling, "hbar": ctx.units.hbar, "integrator": a.integrator}),
    );
    run.notes.push("perturbation V = J·ε·σz on site 0, present during the whole sweep".into());
    let summary = ScanSummary {
        axis: "epsilon",
        model: Model::Ising,
        points: eps.len(),
        failures: 0,
        fit: fit("epsilon", "heating_ratio", &eps, &hs),
        extra: json!({"heating_over_eps2": constants}),
    };
    run.artifacts.push(t.finish("scan_epsilon.csv"));
    run.artifacts.push(Artifact::json("scan_epsilon.json", &summary));
    Ok(run)
}

fn scan_eps_heisenberg(ctx: &Ctx, a: &ScanArgs, rate_spec: Option<&str>) -> Result<Run, CliError> {
    let n = single(a.n.as_deref(), 7.0, "n")? as usize;
    let g0 = a.g0.unwrap_or(10.0);
    let g1 = single(a.g1.as_deref(), 5.0, "g1")?;
    let rate = single(rate_spec, -0.5, "rate")?;
    let eps = grid(a.eps.as_deref().unwrap_or("0.025,0.05,0.1"))?;
    let params = HeisenbergParams::new(n, ctx.coupling, a.anisotropy.delta(), g0)?;
    let s = FieldSchedule::from_rate(g0, g1, rate)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
    let specs: Vec<PerturbationSpec> = (0..a.specs).map(|_| PerturbationSpec::random(n, 1.0, &mut rng)).collect();
    let jobs: Vec<(usize, f64)> = (0..specs.len()).flat_map(|i| eps.iter().map(move |&e| (i, e))).collect();
    let opts = a.integrator.dense_options();
    let rows = jobs
        .par_iter()
        .map(|&(i, e)| {
            let spec = specs[i].scaled(e);
            let bound = heisenberg_perturbation_bound(&spec, &params, g0);
            let r = heisenberg_perturbed_sweep(&params, &s, &spec, opts, ctx.units)?;
            Ok((i, e, r, bound))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let mut t = Table::new(&["spec", "epsilon", "p_v", "bound", "ratio", "initial_mismatch", "validity"]);
    let mut run = Run::new(
        "scan",
        json!({"axis": "epsilon", "model": "heisenberg", "n_sites": n, "g0": g0, "g1": g1, "rate": rate,
               "epsilon": eps, "specs": a.specs, "seed": a.seed, "delta": a.anisotropy.delta(),
               "coupling": ctx.coupling, "hbar": ctx.units.hbar, "integrator": a.integrator}),
    );
    let mut worst: f64 = 0.0;
    for (i, e, r, b) in &rows {
        worst = worst.max(r.p_v / b.p_v);
        if b.validity != Validity::Valid {
            run.validity_flags
                .push(format!("spec {i}, ε = {e}: bound is {}", validity_name(b.validity)));
        }
        t.row([
            i.to_string(),
            fmt(*e),
            fmt(r.p_v),
            fmt(b.p_v),
            fmt(r.p_v / b.p_v),
            fmt(r.initial_mismatch),
            validity_name(b.validity).to_string(),
        ]);
    }
    let xs: Vec<f64> = rows.iter().filter(|r| r.0 == 0).map(|r| r.1).collect();
    let ps: Vec<f64> = rows.iter().filter(|r| r.0 == 0).map(|r| r.2.p_v).collect();
    let summary = ScanSummary {
        axis: "epsilon",
        model: Model::Heisenberg,
        points: rows.len(),
        failures: 0,
        fit: fit("epsilon", "p_v", &xs, &ps),
        extra: json!({"max_ratio_to_bound": worst, "fit_spec": 0}),
    };
    run.artifacts.push(t.finish("scan_epsilon.csv"));
    run.artifacts.push(Artifact::json("scan_epsilon.json", &summary));
    Ok(run)
}
