//! Data behind each figure, produced by the ordinary subcommands.

use std::time::Instant;

use clap::Parser;
use serde_json::json;

use super::args::{Cli, Command};
use super::output::{fmt, Run, Table};
use super::{commands, CliError, Ctx};
use crate::ising::lambda_even;

pub const FIGURE_IDS: [&str; 9] = ["fig1", "fig2", "energies", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

/// `(subdirectory, subcommand arguments)` for each run of a figure.
fn recipe(id: &str) -> Option<Vec<(&'static str, &'static str)>> {
    let r = match id {
        "fig1" => vec![("", "spectrum ising --n 5 --g 0:0.01:3")],
        "fig2" => vec![("", "spectrum heisenberg --n 5 --g 0:0.05:5")],
        "fig3" => vec![("", "sweep ising --n 501 --g0 5 --g1 1 --rate -1e-4 --with-bounds")],
        "fig4" => vec![("", "sweep ising --n 51 --g0 5 --g1-scan 0:0.05:5 --rate -0.01 --with-bounds")],
        "fig5" => vec![("", "scan rate --n 51 --g0 5 --g1 0")],
        "fig6" => vec![("", "scan N --n 11:10:101 --g0 5 --g1 0 --target-pe 0.05")],
        "fig7" => vec![
            ("N5", "scan rate --model heisenberg --n 5 --g0 10 --g1 5"),
            ("N9", "scan rate --model heisenberg --n 9 --g0 10 --g1 5"),
        ],
        "fig8" => vec![
            ("alpha-6", "scan N --model heisenberg --n 5:2:13 --g0 10 --g1 5 --alpha -6"),
            ("alpha-10", "scan N --model heisenberg --n 5:2:13 --g0 10 --g1 5 --alpha -10"),
        ],
        _ => return None,
    };
    Some(r)
}

/// Pair energies `2Λ_n(g)` for `N = 51`.
fn pair_energies(ctx: &Ctx) -> Run {
    let n = 51;
    let gs = super::grid::parse_grid("0:0.01:3").expect("static grid");
    let mut t = Table::new(&["g", "n", "two_lambda"]);
    for &g in &gs {
        for k in 1..=n / 2 {
            t.row([fmt(g), k.to_string(), fmt(2.0 * ctx.coupling * lambda_even(k, g, n))]);
        }
    }
    let mut run = Run::new("energies", json!({"n_sites": n, "g": gs, "coupling": ctx.coupling}));
    run.artifacts.push(t.finish("pair_energies.csv"));
    run
}

fn run_recipe(ctx: &Ctx, line: &str) -> Result<Run, CliError> {
    let argv = std::iter::once("spinramp").chain(line.split_whitespace());
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        let msg = e.to_string();
        CliError::Usage(msg.strip_prefix("error: ").unwrap_or(&msg).trim_end().to_string())
    })?;
    match &cli.command {
        Command::Spectrum(a) => commands::spectrum(ctx, a),
        Command::Sweep(a) => commands::sweep(ctx, a),
        Command::Scan(a) => commands::scan(ctx, a),
        Command::Figures(_) => unreachable!("recipes never nest"),
    }
}

/// Runs `which` (`all` or one id); failures of one figure are recorded on
/// its run and do not stop the others.
pub fn figures(ctx: &Ctx, which: &str) -> Result<Vec<(String, Run)>, CliError> {
    let ids: Vec<&str> = if which == "all" {
        FIGURE_IDS.to_vec()
    } else if FIGURE_IDS.contains(&which) {
        vec![which]
    } else {
        return Err(CliError::Usage(format!(
            "unknown figure {which:?}; expected all or one of {}",
            FIGURE_IDS.join(", ")
        )));
    };
    let mut out = Vec::new();
    for id in ids {
        if id == "energies" {
            let start = Instant::now();
            let mut run = pair_energies(ctx);
            run.runtime = Some(start.elapsed());
            out.push((id.to_string(), run));
            continue;
        }
        for (sub, line) in recipe(id).expect("known id") {
            let dir = if sub.is_empty() { id.to_string() } else { format!("{id}/{sub}") };
            let start = Instant::now();
            let mut run = match run_recipe(ctx, line) {
                Ok(r) => r,
                Err(e @ CliError::Usage(_)) => return Err(e),
                Err(e) => {
                    let mut r = Run::new(id, json!({"arguments": line}));
                    r.failures.push(e.to_string());
                    r
                }
            };
            run.runtime = Some(start.elapsed());
            run.notes.push(format!("arguments: {line}"));
            if id == "fig4" {
                run.notes.push(
                    "initial field g0 = 5 follows the figure caption; the surrounding text mentions g0 = 2".into(),
                );
            }
            out.push((dir, run));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_recipe_parses() {
        for id in FIGURE_IDS {
            for (_, line) in recipe(id).unwrap_or_default() {
                let argv = std::iter::once("spinramp").chain(line.split_whitespace());
                Cli::try_parse_from(argv).unwrap_or_else(|e| panic!("{id}: {e}"));
            }
        }
    }
}
