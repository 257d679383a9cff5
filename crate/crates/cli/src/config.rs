use std::fs;
use std::path::Path;

use isoppp::shapes::{ShapeDescriptor, ShapeKind};
use serde::{Deserialize, Serialize};

use crate::args::{Common, FadingArg, SimKind};

/// Settings read from `--scenario-file`; every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFile {
    pub description: Option<String>,
    pub shape: Option<ShapeDescriptor>,
    pub alpha: Option<f64>,
    pub c: Option<f64>,
    pub lambda: Option<f64>,
    pub y0: Option<f64>,
    pub d: Option<f64>,
    pub beta: Option<f64>,
    pub eta_db: Option<f64>,
    pub s: Option<f64>,
    pub z: Option<f64>,
    pub m: Option<f64>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub delta_db: Option<f64>,
    pub fading: Option<FadingArg>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub truncation_tol: Option<f64>,
    pub max_radius: Option<f64>,
    pub sim_task: Option<SimKind>,
    pub sweep: Vec<String>,
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad scenario file {}: {e}", path.display()))
    }
}

/// Fully resolved settings of one evaluation point. Echoed into every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub shape: ShapeDescriptor,
    pub alpha: f64,
    pub c: f64,
    pub lambda: f64,
    pub y0: f64,
    pub d: f64,
    pub beta: f64,
    /// `None` is a noiseless receiver.
    pub eta_db: Option<f64>,
    pub s: f64,
    pub z: f64,
    pub m: f64,
    pub epsilon: f64,
    /// Linear carrier-sensing threshold.
    pub delta: f64,
    pub fading: FadingArg,
    pub tol: f64,
    pub seed: u64,
    pub trials: usize,
    pub truncation_tol: f64,
    pub max_radius: Option<f64>,
    pub sim_task: SimKind,
}

pub fn parse_shape(text: &str) -> Result<ShapeDescriptor, String> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        serde_json::from_str(trimmed).map(ShapeDescriptor::resolved).map_err(|e| format!("bad shape JSON: {e}"))
    } else {
        trimmed.parse::<ShapeKind>().map(ShapeDescriptor::new).map_err(|e| e.to_string())
    }
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl RunConfig {
    /// Flags override the scenario file, which overrides the defaults.
    pub fn resolve(args: &Common) -> Result<(Self, Vec<String>), String> {
        let file = match &args.scenario_file {
            Some(path) => ScenarioFile::load(path)?,
            None => ScenarioFile::default(),
        };
        let shape = match &args.shape {
            Some(text) => parse_shape(text)?,
            None => file
                .shape
                .clone()
                .map(ShapeDescriptor::resolved)
                .ok_or("no shape given: use --shape or --scenario-file")?,
        };
        let pick = |flag: Option<f64>, from_file: Option<f64>, default: f64| flag.or(from_file).unwrap_or(default);
        let delta = match (args.delta_db, args.delta, file.delta_db, file.delta) {
            (Some(db), _, _, _) => db_to_linear(db),
            (None, Some(v), _, _) => v,
            (None, None, Some(db), _) => db_to_linear(db),
            (None, None, None, v) => v.unwrap_or(1e-5),
        };
        let sweep = if args.sweep.is_empty() { file.sweep.clone() } else { args.sweep.clone() };
        let cfg = RunConfig {
            shape,
            alpha: pick(args.alpha, file.alpha, 4.0),
            c: pick(args.c, file.c, 1.0),
            lambda: pick(args.lambda, file.lambda, 1e-3),
            y0: pick(args.y0, file.y0, 0.0),
            d: pick(args.d, file.d, 10.0),
            beta: pick(args.beta, file.beta, 1.0),
            eta_db: args.eta_db.or(file.eta_db),
            s: pick(args.s, file.s, 1.0),
            z: pick(args.z, file.z, 1e-2),
            m: pick(args.m, file.m, 1.0),
            epsilon: pick(args.epsilon, file.epsilon, 0.1),
            delta,
            fading: args.fading.or(file.fading).unwrap_or(FadingArg::Rayleigh),
            tol: pick(args.tol, file.tol, 1e-10),
            seed: args.seed.or(file.seed).unwrap_or(1),
            trials: args.trials.or(file.trials).unwrap_or(100_000),
            truncation_tol: pick(args.truncation_tol, file.truncation_tol, 1e-3),
            max_radius: args.max_radius.or(file.max_radius),
            sim_task: args.sim_task.or(file.sim_task).unwrap_or(SimKind::Mean),
        };
        Ok((cfg, sweep))
    }
}
