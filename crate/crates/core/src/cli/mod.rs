//! Command-line front end: `spinramp spectrum | sweep | scan | figures`.
//!
//! Exit codes: 0 on success, 1 for I/O failures, 2 for usage errors and
//! invalid parameters, 3 when a numerical routine failed (also for scans that
//! finished with some failed points).

mod args;
mod commands;
mod figures;
mod grid;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::Parser;

pub use args::{Cli, Command};
pub use grid::{parse_grid, parse_int_grid, GridError};
pub use output::{Artifact, Run, RunManifest};

use crate::Units;

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub units: Units,
    pub coupling: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(e) if e.is_numerical() => 3,
            CliError::Model(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

/// Least-squares line through `(ln x, ln y)`: returns `(slope, intercept)`.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Runs one subcommand on already-parsed arguments.
pub fn execute(cli: &Cli) -> Result<Vec<(String, Run)>, CliError> {
    let ctx = Ctx {
        units: Units::new(cli.hbar).map_err(|e| CliError::Usage(e.to_string()))?,
        coupling: cli.coupling,
    };
    if !(ctx.coupling > 0.0 && ctx.coupling.is_finite()) {
        return Err(CliError::Usage(format!("coupling must be positive, got {}", ctx.coupling)));
    }
    let one = |r: Run| vec![(String::new(), r)];
    match &cli.command {
        Command::Spectrum(a) => commands::spectrum(&ctx, a).map(one),
        Command::Sweep(a) => commands::sweep(&ctx, a).map(one),
        Command::Scan(a) => commands::scan(&ctx, a).map(one),
        Command::Figures(a) => figures::figures(&ctx, &a.which),
    }
}

/// Entry point of the `spinramp` binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return 2;
        }
        pool = pool.num_threads(w);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return 1;
        }
    };

    let start = Instant::now();
    let runs = match pool.install(|| execute(&cli)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let elapsed = start.elapsed();

    let is_figures = matches!(cli.command, Command::Figures(_));
    let out_dir = cli
        .out
        .clone()
        .or_else(|| is_figures.then(|| "figures".into()));
    let written = match &out_dir {
        Some(dir) => write_runs(dir, &runs, elapsed, is_figures),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            runs.iter()
                .try_for_each(|(_, r)| r.print(&mut lock))
                .and_then(|_| lock.flush())
        }
    };
    if let Err(e) = written {
        eprintln!("error: i/o error: {e}");
        return 1;
    }
    let mut failed = false;
    for (sub, r) in &runs {
        let at = if sub.is_empty() { String::new() } else { format!("{sub}: ") };
        for f in &r.validity_flags {
            eprintln!("warning: {at}{f}");
        }
        for f in &r.failures {
            eprintln!("failed: {at}{f}");
            failed = true;
        }
    }
    if failed {
        3
    } else {
        0
    }
}

fn write_runs(
    dir: &std::path::Path,
    runs: &[(String, Run)],
    elapsed: std::time::Duration,
    top_level: bool,
) -> std::io::Result<()> {
    let mut manifests = Vec::new();
    for (sub, r) in runs {
        let d = if sub.is_empty() { dir.to_path_buf() } else { dir.join(sub) };
        let m = r.write(&d, elapsed)?;
        manifests.push(m.strip_prefix(dir).unwrap_or(&m).to_string_lossy().into_owned());
    }
    if top_level {
        let failures: Vec<String> = runs
            .iter()
            .flat_map(|(sub, r)| r.failures.iter().map(move |f| format!("{sub}: {f}")))
            .collect();
        let completed: Vec<&str> = runs
            .iter()
            .filter(|(_, r)| r.failures.is_empty())
            .map(|(sub, _)| sub.as_str())
            .collect();
        let runtimes: serde_json::Map<String, serde_json::Value> = runs
            .iter()
            .map(|(sub, r)| (sub.clone(), r.runtime.unwrap_or_default().as_secs_f64().into()))
            .collect();
        let body = serde_json::json!({
            "version": env!("CARGO_PKG_VERSION"),
            "runtime_seconds": elapsed.as_secs_f64(),
            "runtimes": runtimes,
            "manifests": manifests,
            "completed": completed,
            "failures": failures,
        });
        std::fs::write(dir.join("figures.manifest.json"), Artifact::json("", &body).body)?;
    }
    Ok(())
}
