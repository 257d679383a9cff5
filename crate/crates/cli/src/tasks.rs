use isoppp::analytic::{laplace_transform, mean_interference, ChannelModel, FadingLaw, LinkConfig, Snr};
use isoppp::applications::{csma_accuracy_loss, csma_large_scale_density, fh_ds_gain, local_transmission_capacity};
use isoppp::bounds::{default_grid, lower_tail_bound, markov_upper_tail, subharmonic_region};
use isoppp::mcsim::{simulate, SimConfig, SimTask};
use isoppp::outage::{log_divergence, log_divergence_from_outages, outage_approx, outage_exact, relative_error};
use isoppp::{Error, ShapeF64};

use crate::args::{FadingArg, SimKind, TaskKind};
use crate::config::RunConfig;

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Mean => "mean",
            TaskKind::Laplace => "laplace",
            TaskKind::Outage => "outage",
            TaskKind::Divergence => "divergence",
            TaskKind::Relerror => "relerror",
            TaskKind::Capacity => "capacity",
            TaskKind::Fhds => "fhds",
            TaskKind::Csma => "csma",
            TaskKind::Bounds => "bounds",
            TaskKind::Simulate => "simulate",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            TaskKind::Mean => &["mean", "abs_error"],
            TaskKind::Laplace => &["laplace"],
            TaskKind::Outage => &["outage"],
            TaskKind::Divergence => &["gamma", "gamma_from_outages"],
            TaskKind::Relerror => &["relative_error", "outage", "outage_approx"],
            TaskKind::Capacity => &["capacity"],
            TaskKind::Fhds => &["ratio", "asymptote"],
            TaskKind::Csma => &["accuracy_loss", "lambda_large_scale"],
            TaskKind::Bounds => &["lower", "markov"],
            TaskKind::Simulate => &[
                "mean",
                "mean_half_width95",
                "estimate",
                "estimate_half_width95",
                "truncation_radius",
                "truncation_bias_bound",
                "trials",
                "mean_count",
            ],
        }
    }
}

fn channel(cfg: &RunConfig) -> Result<ChannelModel<f64>, Error> {
    let fading = match cfg.fading {
        FadingArg::Rayleigh => FadingLaw::RayleighExponential,
        FadingArg::Unit => FadingLaw::UnitDeterministic,
    };
    ChannelModel::new(cfg.alpha, cfg.c, fading)
}

fn link(cfg: &RunConfig) -> Result<LinkConfig<f64>, Error> {
    let eta = cfg.eta_db.map_or(Snr::Infinite, Snr::from_db);
    LinkConfig::new(cfg.lambda, cfg.y0, cfg.d, cfg.beta, eta)
}

/// Evaluates one grid point, returning the values for [`TaskKind::columns`].
pub fn evaluate(task: TaskKind, cfg: &RunConfig) -> Result<Vec<f64>, Error> {
    let shape: ShapeF64 = cfg.shape.build()?;
    let tol = cfg.tol;
    Ok(match task {
        TaskKind::Mean => {
            let m = mean_interference(&shape, &channel(cfg)?, cfg.lambda, cfg.y0, tol)?;
            vec![m.value, m.abs_error]
        }
        TaskKind::Laplace => vec![laplace_transform(&shape, &channel(cfg)?, cfg.lambda, cfg.y0, cfg.s, tol)?],
        TaskKind::Outage => vec![outage_exact(&shape, &channel(cfg)?, &link(cfg)?, tol)?],
        TaskKind::Divergence => {
            let (ch, l) = (channel(cfg)?, link(cfg)?);
            vec![log_divergence(&shape, &ch, &l, tol)?, log_divergence_from_outages(&shape, &ch, &l, tol)?]
        }
        TaskKind::Relerror => {
            let (ch, l) = (channel(cfg)?, link(cfg)?);
            vec![
                relative_error(&shape, &ch, &l, tol)?,
                outage_exact(&shape, &ch, &l, tol)?,
                outage_approx(&shape, &ch, &l)?,
            ]
        }
        TaskKind::Capacity => vec![local_transmission_capacity(&shape, &channel(cfg)?, &link(cfg)?, cfg.epsilon, tol)?],
        TaskKind::Fhds => {
            let g = fh_ds_gain(&shape, cfg.d, cfg.beta, cfg.m, tol)?;
            vec![g.ratio, g.asymptote]
        }
        TaskKind::Csma => vec![
            csma_accuracy_loss(cfg.lambda, cfg.alpha, cfg.delta, cfg.d, cfg.beta, tol)?,
            csma_large_scale_density(cfg.lambda, cfg.alpha, cfg.delta)?,
        ],
        TaskKind::Bounds => {
            let ch = channel(cfg)?;
            let (step, extent) = default_grid(&shape);
            let region = subharmonic_region(&shape, step, extent)?;
            vec![
                lower_tail_bound(&shape, &ch, cfg.lambda, cfg.y0, cfg.z, &region, tol)?,
                markov_upper_tail(&shape, &ch, cfg.lambda, cfg.y0, cfg.z, tol)?,
            ]
        }
        TaskKind::Simulate => {
            let sim_task = match cfg.sim_task {
                SimKind::Mean => SimTask::Mean,
                SimKind::Tail => SimTask::Tail(vec![cfg.z]),
                SimKind::Outage => SimTask::Outage,
                SimKind::Laplace => SimTask::Laplace(vec![cfg.s]),
            };
            let sim_cfg = SimConfig {
                trials: cfg.trials,
                seed: cfg.seed,
                truncation_tol_fraction: cfg.truncation_tol,
                max_radius_override: cfg.max_radius,
            };
            let out = simulate(&shape, &channel(cfg)?, &link(cfg)?, &sim_task, &sim_cfg)?;
            let estimate = match cfg.sim_task {
                SimKind::Mean => None,
                SimKind::Tail => out.tail_freq.first().copied(),
                SimKind::Outage => out.outage_freq,
                SimKind::Laplace => out.laplace_est.first().copied(),
            };
            let (value, hw) = estimate.map_or((out.mean, out.mean_half_width95), |e| (e.value, e.half_width95));
            vec![
                out.mean,
                out.mean_half_width95,
                value,
                hw,
                out.truncation_radius,
                out.truncation_bias_bound,
                out.trials_used as f64,
                out.mean_count,
            ]
        }
    })
}

/// Process exit status for a failed single evaluation.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        e if e.is_divergent() => 4,
        Error::NonConvergence { .. } => 3,
        _ => 2,
    }
}

/// Human-readable diagnostic; divergent requests get an explanation of the regime.
pub fn describe(err: &Error) -> String {
    if err.is_divergent() {
        format!(
            "divergent regime: with alpha = 2 and a shape that does not decay at least polynomially the \
             interference is almost surely infinite, so this quantity does not exist ({err})"
        )
    } else {
        err.to_string()
    }
}
