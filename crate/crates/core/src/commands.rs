//! Command implementations behind the `qwalk` binary.
//!
//! Each command validates its input, computes everything in memory and only
//! then writes its files through [`OutputSet`], so a failed run leaves no
//! partial output behind.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analytic::{analytic_distribution, seed_from_simulation, AnalyticParams};
use crate::error::{Error, Result};
use crate::io::config::OutputFormat;
use crate::io::csv::{read_grid, read_trajectory, write_grid, write_matrix, write_trajectory};
use crate::io::pgm::write_pgm;
use crate::io::{OutputSet, OutputSpec, RunConfig, SweepConfig};
use crate::schedule::PhaseSchedule;
use crate::trajectory::{classify_chain, compare_peaks, crossing_times, ChainClass, ComparisonReport, Trajectory};
use crate::walk::{evolve, ProbabilityGrid};

/// Largest tolerated |Σ_m P_m − 1| over a simulated run.
pub const NORM_DRIFT_TOL: f64 = 1e-10;

fn schedule_json(schedule: &PhaseSchedule) -> Value {
    match schedule {
        PhaseSchedule::Constant { theta0 } => json!({ "kind": "constant", "theta0": theta0 }),
        PhaseSchedule::Linear { theta0, omega } => {
            json!({ "kind": "linear", "theta0": theta0, "omega": omega })
        }
        PhaseSchedule::Sinusoidal { theta0, omega } => {
            json!({ "kind": "sinusoidal", "theta0": theta0, "omega": omega })
        }
        PhaseSchedule::Tabulated { table } => json!({ "kind": "tabulated", "table": table }),
    }
}

fn run_json(command: &str, config: &RunConfig) -> Value {
    let i = config.initial;
    json!({
        "command": command,
        "generator": concat!("qwalk ", env!("CARGO_PKG_VERSION")),
        "schedule": schedule_json(&config.schedule),
        "steps": config.steps,
        "time_step": config.step_params.time_step,
        "spacing": config.step_params.spacing,
        "initial": { "site": 0, "r": [i.r.re, i.r.im], "l": [i.l.re, i.l.im] },
        "formats": config.output.formats.iter().map(|f| f.name()).collect::<Vec<_>>(),
    })
}

fn finish(mut files: OutputSet, output: &OutputSpec, mut metadata: Value) -> Result<Vec<PathBuf>> {
    if output.wants(OutputFormat::Json) {
        let mut names: Vec<&str> = files.names().collect();
        names.push("metadata.json");
        metadata["files"] = json!(names);
        let mut text = serde_json::to_string_pretty(&metadata).expect("metadata is plain JSON");
        text.push('\n');
        files.add("metadata.json", text);
    }
    files.commit(&output.dir)
}

fn grid_rows(grid: &ProbabilityGrid) -> Vec<Vec<Option<f64>>> {
    grid.iter_rows().map(|r| r.iter().copied().map(Some).collect()).collect()
}

/// Exact walk: `probability{,_r,_l}.csv`, `probability.pgm`, `metadata.json`.
pub fn cmd_simulate(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let record = evolve(&config.walk_config())?;
    let drift = record
        .total
        .iter_rows()
        .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    if drift > NORM_DRIFT_TOL {
        return Err(Error::Accuracy { estimate: 1.0 + drift, error_bound: drift });
    }

    let mut files = OutputSet::new();
    if config.output.wants(OutputFormat::Csv) {
        files.add("probability.csv", write_grid(&record.total));
        files.add("probability_r.csv", write_grid(&record.right));
        files.add("probability_l.csv", write_grid(&record.left));
    }
    if config.output.wants(OutputFormat::Pgm) {
        let rows = grid_rows(&record.total);
        files.add("probability.pgm", write_pgm(record.total.width(), rows.iter().map(Vec::as_slice)));
    }
    let mut metadata = run_json("simulate", config);
    metadata["sites"] = json!([-(record.half_width() as i64), record.half_width()]);
    metadata["max_norm_drift"] = json!(drift);
    finish(files, &config.output, metadata)
}

/// Continuum solution: `analytic{,_r,_l}.csv`, `analytic.pgm`, `metadata.json`.
///
/// Rows are integer steps; rows at singular times have empty cells.
pub fn cmd_analytic(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let walk = config.walk_config();
    let seeds = seed_from_simulation(&walk)?;
    let mut params = AnalyticParams::for_steps(seeds, config.steps, config.grid_spacing)?;
    params.w = config.w;
    let schedule = config.schedule.in_step_units(config.step_params.time_step);
    let field = analytic_distribution(&params, &schedule)?;

    let width = field.width();
    let split = |cells: &[Option<f64>]| -> Vec<Vec<Option<f64>>> {
        cells.chunks(width).map(<[Option<f64>]>::to_vec).collect()
    };
    let mut files = OutputSet::new();
    if config.output.wants(OutputFormat::Csv) {
        for (name, cells) in [
            ("analytic.csv", &field.total),
            ("analytic_r.csv", &field.right),
            ("analytic_l.csv", &field.left),
        ] {
            let rows = split(cells);
            files.add(name, write_matrix(&field.grid, rows.iter().map(Vec::as_slice)));
        }
    }
    if config.output.wants(OutputFormat::Pgm) {
        let rows = split(&field.total);
        files.add("analytic.pgm", write_pgm(width, rows.iter().map(Vec::as_slice)));
    }
    let singular: Vec<usize> = (0..field.times.len()).filter(|&t| field.is_singular(t)).collect();
    let mut metadata = run_json("analytic", config);
    metadata["w"] = json!(config.w);
    metadata["grid_spacing"] = json!(config.grid_spacing);
    metadata["grid"] = json!({
        "first": field.grid.first(),
        "last": field.grid.last(),
        "count": width,
    });
    metadata["singular_steps"] = json!(singular);
    finish(files, &config.output, metadata)
}

/// Closed-form branches at every step: `trajectory.csv`, `metadata.json`.
pub fn cmd_trajectory(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let schedule = config.schedule.in_step_units(config.step_params.time_step);
    if let PhaseSchedule::Tabulated { table } = &schedule {
        if config.steps > table.len() {
            return Err(Error::ScheduleExhausted { index: table.len(), len: table.len() });
        }
    }
    let trajectory = Trajectory::for_steps(&schedule, config.steps, config.k_max)?;
    let class = match schedule {
        PhaseSchedule::Linear { theta0, omega } => classify_chain(theta0, omega).ok(),
        _ => None,
    };
    let mut files = OutputSet::new();
    if config.output.wants(OutputFormat::Csv) {
        files.add("trajectory.csv", write_trajectory(&trajectory));
    }
    let mut metadata = run_json("trajectory", config);
    metadata["k_max"] = json!(config.k_max);
    metadata["class"] = json!(class.map(|c| c.name()));
    metadata["crossing_times"] = json!(crossing_times(&trajectory));
    finish(files, &config.output, metadata)
}

/// Chain class of a linear schedule.
pub fn cmd_classify(theta0: f64, omega: f64) -> Result<ChainClass> {
    classify_chain(theta0, omega)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn with_path<T>(path: &Path, result: Result<T>) -> Result<T> {
    result.map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse { line, message: format!("{}: {message}", path.display()) },
        other => other,
    })
}

/// Peak-versus-trajectory report for a simulated `probability.csv` and a
/// `trajectory.csv`; written to `compare.json`.
pub fn cmd_compare(sim_csv: &Path, trajectory_csv: &Path, output: &OutputSpec) -> Result<(ComparisonReport, Vec<PathBuf>)> {
    let grid = with_path(sim_csv, read_grid(&read_text(sim_csv)?))?;
    let trajectory = with_path(trajectory_csv, read_trajectory(&read_text(trajectory_csv)?))?;
    let report = compare_peaks(&grid, &trajectory)?;
    let mut text = serde_json::to_string_pretty(&report).expect("report is plain JSON");
    text.push('\n');
    let mut files = OutputSet::new();
    files.add("compare.json", text);
    let written = files.commit(&output.dir)?;
    Ok((report, written))
}

/// Rows of a sweep table, ordered by (θ₀, ω) ascending.
pub fn sweep_table(sweep: &SweepConfig) -> Result<Vec<(f64, f64, ChainClass)>> {
    let mut cells: Vec<(f64, f64)> = sweep
        .theta0
        .iter()
        .flat_map(|&t| sweep.omega.iter().map(move |&o| (t, o)))
        .collect();
    cells.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    cells.dedup();
    cells
        .par_iter()
        .map(|&(t, o)| Ok((t, o, classify_chain(t, o)?)))
        .collect()
}

/// Classification over a (θ₀, ω) grid: `sweep.csv`.
pub fn cmd_sweep(sweep: &SweepConfig) -> Result<Vec<PathBuf>> {
    let rows = sweep_table(sweep)?;
    let mut text = String::from("theta0,omega,class\n");
    for (t, o, class) in rows {
        text.push_str(&format!("{t},{o},{class}\n"));
    }
    let mut files = OutputSet::new();
    files.add("sweep.csv", text);
    files.commit(&sweep.output.dir)
}
