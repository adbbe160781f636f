//! `colombeau`: scenario runner for generalized functions, basic functionals
//! and wave front set estimates.
//!
//! Exit codes: 0 success (tasks may be FAIL or DEGRADED), 1 a task hit an
//! unexpected error or the output could not be written, 2 the scenario does
//! not parse, 3 the scenario fails validation (nothing is written).

// `!(a > b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod build;
mod dsl;
mod report;
mod scenario;
mod tasks;
mod validate;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use report::{num, nums, Status, TIMESTAMP_KEY};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use validate::Plan;

/// Environment variable holding the worker thread count.
const THREADS_ENV: &str = "COLOMBEAU_THREADS";

#[derive(Parser)]
#[command(name = "colombeau", version, about = "Run generalized-function scenarios and write reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario and write report.json, fits.csv and wf_<name>.json.
    Run {
        scenario: PathBuf,
        /// Output directory; defaults to the scenario's `output`, relative to the scenario file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a scenario without computing anything.
    Validate { scenario: PathBuf },
    /// Print a readable summary of one task of a report.
    Explain { report: PathBuf, task_id: String },
}

fn load(path: &Path) -> Result<Plan, ExitCode> {
    let sc = scenario::load(path).map_err(|e| {
        eprintln!("error: {}:{}:{}: {}", path.display(), e.line, e.column, e.message);
        ExitCode::from(2)
    })?;
    validate::validate(&sc).map_err(|issues| {
        for i in &issues {
            eprintln!("error: {i}");
        }
        eprintln!("{} validation error(s); nothing was written", issues.len());
        ExitCode::from(3)
    })
}

fn configure_threads() -> Result<(), ExitCode> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = match v.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => {
            eprintln!("error: {THREADS_ENV} must be a positive integer, got '{v}'");
            return Err(ExitCode::from(3));
        }
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| {
        eprintln!("error: cannot start {n} threads: {e}");
        ExitCode::from(1)
    })
}

fn metadata(plan: &Plan, scenario: &Path) -> Value {
    let t = &plan.tol;
    let g = &plan.grid;
    let dim = g.dim();
    json!({
        "scenario": scenario.file_name().map(|s| s.to_string_lossy().into_owned()),
        "domain": {
            "dim": dim,
            "lo": nums(&g.lo()[..dim]),
            "hi": nums(&g.hi()[..dim]),
            "points": g.points_per_axis(),
        },
        "ladder": nums(plan.ladder.values()),
        "tolerances": {
            "q_max": num(t.q_max),
            "n_max": num(t.n_max),
            "residual_gate": num(t.residual_gate),
            "tau_regular": num(t.tau_regular),
            "tau_wavefront": num(t.tau_wavefront),
            "stability_tolerance": num(t.stability_tolerance),
            "machine_floor": num(t.machine_floor),
            "spectral_floor": num(t.spectral_floor),
            "xi_slope_gate": num(t.xi_slope_gate),
            "gate_octaves": t.gate_octaves,
            "l_grid": nums(&t.l_grid),
            "m_grid": nums(&t.m_grid),
            "slow_scale_powers": nums(&t.slow_scale_powers),
            "slow_scale_tail_tolerance": num(t.slow_scale_tail_tolerance),
            "slow_scale_growth_cap": num(t.slow_scale_growth_cap),
            "xi_reach": num(t.xi_reach),
            "samples_per_octave": t.samples_per_octave,
            "angular_samples": t.angular_samples,
            "max_refined_points": t.max_refined_points,
            "aliasing_guard": num(t.aliasing_guard),
            "max_order": t.max_order,
        },
    })
}

fn run(path: &Path, out: Option<PathBuf>) -> ExitCode {
    let plan = match load(path) {
        Ok(p) => p,
        Err(c) => return c,
    };
    if let Err(c) = configure_threads() {
        return c;
    }
    let dir = out.unwrap_or_else(|| path.parent().unwrap_or(Path::new(".")).join(&plan.output));
    let objects = build::Builder::new(&plan).build_all();
    let outcomes: Vec<_> = plan.tasks.par_iter().map(|t| tasks::run_task(t, &plan, &objects)).collect();

    let mut task_values = Vec::new();
    let mut fits = Vec::new();
    let mut files = Vec::new();
    let mut counts = std::collections::BTreeMap::new();
    for (t, o) in plan.tasks.iter().zip(&outcomes) {
        println!("{:<9} {} ({}): {}", o.status.as_str(), t.id(), t.kind(), o.summary);
        *counts.entry(o.status.as_str()).or_insert(0usize) += 1;
        task_values.push(report::task_json(t.id(), t.kind(), o));
        fits.extend(o.fits.iter().map(|f| (t.id().to_string(), f.clone())));
        if let Some((name, v)) = &o.wavefront {
            files.push((format!("wf_{name}.json"), report::to_pretty(v)));
        }
    }
    let stamp = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let doc = json!({
        "tool": "colombeau",
        "version": env!("CARGO_PKG_VERSION"),
        TIMESTAMP_KEY: stamp,
        "metadata": metadata(&plan, path),
        "status_counts": counts,
        "tasks": task_values,
    });
    files.insert(0, ("report.json".into(), report::to_pretty(&doc)));
    files.insert(1, ("fits.csv".into(), report::fits_csv(&fits)));
    if let Err(e) = report::write_all(&dir, &files) {
        eprintln!("error: cannot write to {}: {e}", dir.display());
        return ExitCode::from(1);
    }
    println!("wrote {} file(s) to {}", files.len(), dir.display());
    if outcomes.iter().any(|o| o.status == Status::Error) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn explain(path: &Path, id: &str) -> ExitCode {
    let doc: Value = match std::fs::read_to_string(path).map_err(|e| e.to_string()).and_then(|s| {
        serde_json::from_str(&s).map_err(|e| format!("line {} column {}: {e}", e.line(), e.column()))
    }) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    match report::explain(&doc, id) {
        Some(s) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        None => {
            eprintln!("error: no task '{id}' in {}", path.display());
            ExitCode::from(3)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { scenario, out } => run(&scenario, out),
        Command::Validate { scenario } => match load(&scenario) {
            Ok(p) => {
                println!("ok: {} object(s), {} task(s)", p.objects.len(), p.tasks.len());
                ExitCode::SUCCESS
            }
            Err(c) => c,
        },
        Command::Explain { report, task_id } => explain(&report, &task_id),
    }
}
