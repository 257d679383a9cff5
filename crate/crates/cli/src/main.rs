mod args;
mod config;
mod output;
mod sweep;
mod tasks;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;

use args::{Cli, Command, Common, Format, TaskKind};
use config::RunConfig;
use output::{Row, Table};
use sweep::Axis;

/// A grid point and its evaluation.
type PointResult = (Vec<f64>, Result<Vec<f64>, isoppp::Error>);

fn fail(code: u8, message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn run_task(task: TaskKind, common: &Common) -> ExitCode {
    let (base, sweep_specs) = match RunConfig::resolve(common) {
        Ok(v) => v,
        Err(e) => return fail(2, &e),
    };
    let axes = match sweep_specs.iter().map(|s| Axis::parse(s)).collect::<Result<Vec<_>, _>>() {
        Ok(a) => a,
        Err(e) => return fail(2, &e),
    };
    if let Err(e) = base.shape.build::<f64>() {
        return fail(tasks::exit_code(&e), &tasks::describe(&e));
    }

    let points = sweep::grid(&axes);
    let results: Vec<PointResult> = points
        .into_par_iter()
        .map(|point| {
            let mut cfg = base.clone();
            for (axis, &v) in axes.iter().zip(&point) {
                axis.name.apply(&mut cfg, v);
            }
            let result = tasks::evaluate(task, &cfg);
            (point, result)
        })
        .collect();

    if axes.is_empty() {
        if let Some((_, Err(e))) = results.first() {
            return fail(tasks::exit_code(e), &tasks::describe(e));
        }
    }

    let width = task.columns().len();
    let rows = results
        .into_iter()
        .map(|(point, result)| {
            let mut values: Vec<Option<f64>> = point.into_iter().map(Some).collect();
            match result {
                Ok(v) => {
                    values.extend(v.into_iter().map(Some));
                    Row { values, error: None }
                }
                Err(e) => {
                    values.extend(std::iter::repeat_n(None, width));
                    Row { values, error: Some(tasks::describe(&e)) }
                }
            }
        })
        .collect();

    let mut columns: Vec<String> = axes.iter().map(|a| a.name.column().to_string()).collect();
    columns.extend(task.columns().iter().map(|c| c.to_string()));
    let config = serde_json::json!({
        "task": task.name(),
        "config": base,
        "sweep": axes.iter().map(|a| a.spec.clone()).collect::<Vec<_>>(),
    });
    let table = Table { config, columns, rows };
    let text = match common.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => return fail(2, &e),
    };
    let written = match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(2, &e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(path) = &cli.replot_check {
        return match output::replot_check(path) {
            Ok(s) => {
                println!("ok: {} rows, {} columns, {} values round-trip", s.rows, s.columns, s.values);
                ExitCode::SUCCESS
            }
            Err(e) => fail(2, &e),
        };
    }
    let Some(command) = cli.command else {
        return fail(2, "no subcommand given (see --help)");
    };
    let (task, common) = match &command {
        Command::Mean(c) => (TaskKind::Mean, c),
        Command::Laplace(c) => (TaskKind::Laplace, c),
        Command::Outage(c) => (TaskKind::Outage, c),
        Command::Divergence(c) => (TaskKind::Divergence, c),
        Command::Relerror(c) => (TaskKind::Relerror, c),
        Command::Capacity(c) => (TaskKind::Capacity, c),
        Command::Fhds(c) => (TaskKind::Fhds, c),
        Command::Csma(c) => (TaskKind::Csma, c),
        Command::Bounds(c) => (TaskKind::Bounds, c),
        Command::Simulate(c) => (TaskKind::Simulate, c),
        Command::Sweep(s) => (s.task, &s.common),
    };
    run_task(task, common)
}
