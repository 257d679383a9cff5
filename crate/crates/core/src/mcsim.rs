//! Monte-Carlo oracle: samples the point process inside a truncation disc, applies fading and
//! reports empirical interference statistics with normal-approximation confidence intervals.
//!
//! Trial `i` draws from its own ChaCha stream `(seed, i)`, so outcomes are bit-identical for a
//! given configuration no matter how the trials are spread over threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{mean_interference, ChannelModel, LinkConfig};
use crate::error::{Error, Result};
use crate::numerics::{integrate, integrate_to_infinity, integrate_with_breaks};
use crate::scalar::{lit, to_f64, Scalar};
use crate::shapes::{ShapeFunction, TailClass};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

const TABLE_KNOTS: usize = 10_000;
const TABLE_MAX_KNOTS: usize = 160_000;
/// Maximum interpolation error of the cumulative table, relative to its total mass.
const TABLE_ACCURACY: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub trials: usize,
    pub seed: u64,
    /// Neglected mean beyond the truncation radius, as a fraction of the mean.
    pub truncation_tol_fraction: f64,
    pub max_radius_override: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { trials: 100_000, seed: 1, truncation_tol_fraction: 1e-3, max_radius_override: None }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("need at least one trial".into()));
        }
        if !(self.truncation_tol_fraction > 0.0 && self.truncation_tol_fraction < 1.0) {
            return Err(Error::InvalidConfig("truncation tolerance must lie in (0, 1)".into()));
        }
        if let Some(r) = self.max_radius_override {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidConfig("radius override must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Statistic to estimate in addition to the mean.
#[derive(Debug, Clone, PartialEq)]
pub enum SimTask {
    Mean,
    /// `P(I >= z)` on a grid of levels.
    Tail(Vec<f64>),
    /// `P(SINR < beta)` with an independent desired-link fade.
    Outage,
    /// `E[exp(-s I)]` on a grid of transform variables.
    Laplace(Vec<f64>),
}

/// Empirical estimate with its 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub at: f64,
    pub value: f64,
    pub half_width95: f64,
}

impl Estimate {
    pub fn std_error(&self) -> f64 {
        self.half_width95 / Z95
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimOutcome {
    pub mean: f64,
    pub mean_std_error: f64,
    pub mean_half_width95: f64,
    pub tail_freq: Vec<Estimate>,
    pub outage_freq: Option<Estimate>,
    pub laplace_est: Vec<Estimate>,
    pub truncation_radius: f64,
    /// Upper bound on the mean interference neglected beyond the truncation radius.
    pub truncation_bias_bound: f64,
    pub trials_used: usize,
    pub mean_count: f64,
}

/// Truncation radius and the bound on the neglected mean it achieves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    pub radius: f64,
    pub bias_bound: f64,
}

fn shape_f64<T: Scalar>(shape: &ShapeFunction<T>) -> impl Fn(f64) -> f64 + '_ {
    move |r| to_f64(shape.eval(lit(r)))
}

/// Whether `int r F(r) r^-alpha dr` diverges at infinity.
fn far_field_diverges<T: Scalar>(shape: &ShapeFunction<T>, alpha: f64) -> bool {
    match shape.tail() {
        TailClass::CompactSupport(_) | TailClass::ExponentialDecay(_) => false,
        TailClass::PowerDecay(nu) => to_f64(nu) + alpha <= 2.0,
        TailClass::NonDecaying | TailClass::LogDecay(_) => alpha <= 2.0,
    }
}

/// `lambda 2 pi int_R^inf r F(r) / (c + max(0, r - y0)^alpha) dr`.
fn neglected_mean_bound<T: Scalar>(
    shape: &ShapeFunction<T>,
    alpha: f64,
    c: f64,
    lambda: f64,
    y0: f64,
    radius: f64,
) -> f64 {
    if let Some(end) = shape.support_end() {
        if radius >= to_f64(end) {
            return 0.0;
        }
    }
    if far_field_diverges(shape, alpha) {
        return f64::INFINITY;
    }
    let f = shape_f64(shape);
    let integrand = |r: f64| {
        let gap = (r - y0).max(0.0);
        let denom = c + gap.powf(alpha);
        if denom <= 0.0 {
            f64::INFINITY
        } else {
            r * f(r) / denom
        }
    };
    let mut pts = vec![radius, y0 + 1.0, 2.0 * radius, 8.0 * radius];
    pts.extend(shape.knots().into_iter().map(to_f64).chain(shape.support_end().map(to_f64)));
    pts.retain(|&p| p >= radius);
    let tail = match shape.support_end() {
        Some(end) => {
            pts.retain(|&p| p <= to_f64(end));
            pts.push(to_f64(end));
            integrate_with_breaks(integrand, &pts, 1e-10)
        }
        None => integrate_to_infinity(integrand, &pts, 1e-10),
    };
    2.0 * std::f64::consts::PI * lambda * tail.value.max(0.0)
}

/// Conservative stand-in for the mean when no closed form is available: every interferer is
/// placed at the far side of its circle, `2 pi lambda int_0^R r F / (c' + (r + y0)^alpha)`.
fn far_side_mean<T: Scalar>(shape: &ShapeFunction<T>, alpha: f64, c: f64, lambda: f64, y0: f64, radius: f64) -> f64 {
    let f = shape_f64(shape);
    let c_ref = if c > 0.0 { c } else { 1.0 };
    let mut pts = vec![0.0, radius, to_f64(shape.length_scale()).min(radius)];
    pts.extend(shape.knots().into_iter().map(to_f64).filter(|&k| k < radius));
    let v = integrate_with_breaks(|r: f64| r * f(r) / (c_ref + (r + y0).powf(alpha)), &pts, 1e-10).value;
    2.0 * std::f64::consts::PI * lambda * v
}

/// Smallest radius on a geometric grid whose neglected-mean bound is within
/// `tol_fraction` of the mean (analytic when available, otherwise a far-side lower estimate).
pub fn truncation_radius<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    lambda: f64,
    y0: f64,
    tol_fraction: f64,
) -> Result<Truncation> {
    if let Some(end) = shape.support_end() {
        return Ok(Truncation { radius: to_f64(end), bias_bound: 0.0 });
    }
    let (alpha, c) = (to_f64(channel.alpha), to_f64(channel.c));
    if far_field_diverges(shape, alpha) {
        return Err(Error::NoFiniteTruncation(format!(
            "interference from a {:?} shape with alpha = {alpha} has no finite far-field bound",
            shape.tail()
        )));
    }
    let analytic = mean_interference(shape, channel, lit(lambda), lit(y0), lit(1e-9)).ok().map(|m| to_f64(m.value));
    let mut radius = y0 + to_f64(shape.length_scale());
    for _ in 0..400 {
        let bound = neglected_mean_bound(shape, alpha, c, lambda, y0, radius);
        let reference = analytic.unwrap_or_else(|| far_side_mean(shape, alpha, c, lambda, y0, radius));
        if bound <= tol_fraction * reference {
            return Ok(Truncation { radius, bias_bound: bound });
        }
        radius *= 2f64.powf(0.125);
    }
    Err(Error::NoFiniteTruncation(format!("no truncation radius below {radius:.3e} meets the tolerance")))
}

/// `2 pi lambda int_0^R r F(r) dr`, the expected number of points within radius `R`.
pub fn expected_count<T: Scalar>(shape: &ShapeFunction<T>, lambda: f64, radius: f64) -> f64 {
    let f = shape_f64(shape);
    2.0 * std::f64::consts::PI
        * lambda
        * integrate_with_breaks(|r: f64| r * f(r), &radial_grid(shape, radius), 1e-11).value
}

fn radial_grid<T: Scalar>(shape: &ShapeFunction<T>, radius: f64) -> Vec<f64> {
    let mut pts = vec![0.0, radius];
    pts.extend(shape.knots().into_iter().map(to_f64).filter(|&k| k < radius));
    let mut r = to_f64(shape.length_scale());
    while r < radius {
        pts.push(r);
        r *= 4.0;
    }
    pts
}

/// Exact mean interference from points within radius `R`, by quadrature over radius and angle.
pub fn truncated_mean<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    lambda: f64,
    y0: f64,
    radius: f64,
    tol: f64,
) -> Result<f64> {
    let (alpha, c) = (to_f64(channel.alpha), to_f64(channel.c));
    let f = shape_f64(shape);
    let angular = |r: f64| -> f64 {
        if alpha == 2.0 && c > 0.0 {
            // int_0^pi dphi / (a - b cos phi)
            let a = c + r * r + y0 * y0;
            let b = 2.0 * r * y0;
            std::f64::consts::PI / ((a - b) * (a + b)).sqrt()
        } else {
            integrate(
                |phi: f64| {
                    let rho2 = (r * r + y0 * y0 - 2.0 * r * y0 * phi.cos()).max(0.0);
                    (c + rho2.powf(alpha / 2.0)).recip()
                },
                0.0,
                std::f64::consts::PI,
                tol,
            )
            .value
        }
    };
    let mut pts = radial_grid(shape, radius);
    if y0 > 0.0 && y0 < radius {
        pts.push(y0);
    }
    let result = integrate_with_breaks(|r: f64| 2.0 * r * f(r) * angular(r), &pts, tol);
    if !result.value.is_finite() {
        return Err(Error::DivergentIntegral("truncated mean is infinite".into()));
    }
    Ok(lambda * result.value)
}

/// Inverse-transform sampler for radii with density proportional to `r F(r)` on `[0, R]`.
///
/// The cumulative mass is tabulated on a `sinh`-spaced grid and interpolated with a monotone
/// cubic; the knot count doubles from 10^4 until the interpolant matches fresh quadrature at
/// every segment midpoint.
#[derive(Debug, Clone)]
pub struct RadialSampler {
    radius: f64,
    knots: Vec<f64>,
    cumulative: Vec<f64>,
    slopes: Vec<f64>,
    /// `guide[j]` is the first table index with cumulative fraction at least `j / (len - 1)`.
    guide: Vec<usize>,
}

impl RadialSampler {
    pub fn new<T: Scalar>(shape: &ShapeFunction<T>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidConfig(format!("sampling radius must be positive, got {radius}")));
        }
        let mut n = TABLE_KNOTS;
        loop {
            let sampler = Self::build(shape, radius, n);
            if sampler.total_mass() <= 0.0 {
                return Err(Error::DomainError("shape has no mass inside the sampling radius".into()));
            }
            if n >= TABLE_MAX_KNOTS || sampler.midpoint_error(shape) <= TABLE_ACCURACY {
                return Ok(sampler);
            }
            n *= 2;
        }
    }

    fn build<T: Scalar>(shape: &ShapeFunction<T>, radius: f64, n: usize) -> Self {
        let f = shape_f64(shape);
        let mut scale = to_f64(shape.length_scale());
        for k in shape.knots() {
            let k = to_f64(k);
            scale = scale.min(k);
        }
        let scale = (scale / 20.0).clamp(radius * 1e-9, radius);
        let top = (radius / scale).asinh();
        let mut knots: Vec<f64> = (0..=n).map(|i| scale * (top * i as f64 / n as f64).sinh()).collect();
        knots[n] = radius;
        knots.extend(shape.knots().into_iter().map(to_f64).filter(|&k| k > 0.0 && k < radius));
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let density = |r: f64| r * f(r);
        let mut cumulative = Vec::with_capacity(knots.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in knots.windows(2) {
            acc += integrate(density, w[0], w[1], 1e-13).value.max(0.0);
            cumulative.push(acc);
        }
        let slopes = monotone_slopes(&knots, &cumulative, &knots.iter().map(|&r| density(r)).collect::<Vec<_>>());
        let bins = knots.len() - 1;
        let total = acc;
        let guide = (0..=bins).map(|j| cumulative.partition_point(|&m| m < total * (j as f64 / bins as f64))).collect();
        Self { radius, knots, cumulative, slopes, guide }
    }

    fn midpoint_error<T: Scalar>(&self, shape: &ShapeFunction<T>) -> f64 {
        let f = shape_f64(shape);
        let total = self.total_mass();
        (0..self.knots.len() - 1)
            .into_par_iter()
            .map(|i| {
                let (a, b) = (self.knots[i], self.knots[i + 1]);
                let mid = 0.5 * (a + b);
                let exact = self.cumulative[i] + integrate(|r: f64| r * f(r), a, mid, 1e-13).value;
                (self.interpolate(i, mid) - exact).abs() / total
            })
            .reduce(|| 0.0, f64::max)
    }

    /// `int_0^R r F(r) dr`.
    pub fn total_mass(&self) -> f64 {
        *self.cumulative.last().expect("non-empty table")
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn knot_count(&self) -> usize {
        self.knots.len()
    }

    fn interpolate(&self, i: usize, r: f64) -> f64 {
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let t = (r - x0) / h;
        let (y0, y1) = (self.cumulative[i], self.cumulative[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1
    }

    /// Derivative of [`Self::interpolate`] in `r`.
    fn interpolate_slope(&self, i: usize, r: f64) -> f64 {
        let h = self.knots[i + 1] - self.knots[i];
        let t = (r - self.knots[i]) / h;
        let dy = self.cumulative[i + 1] - self.cumulative[i];
        6.0 * t * (1.0 - t) * dy / h
            + (3.0 * t * t - 4.0 * t + 1.0) * self.slopes[i]
            + (3.0 * t * t - 2.0 * t) * self.slopes[i + 1]
    }

    /// Cumulative mass up to `r`, from the interpolated table.
    pub fn cumulative_at(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if r >= self.radius {
            return self.total_mass();
        }
        let i = self.knots.partition_point(|&k| k <= r).saturating_sub(1).min(self.knots.len() - 2);
        self.interpolate(i, r)
    }

    /// Radius whose cumulative fraction is `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        let target = u * self.total_mass();
        let bins = self.guide.len() - 1;
        let j = ((u * bins as f64) as usize).min(bins - 1);
        let from = self.guide[j].saturating_sub(1);
        let to = (self.guide[j + 1] + 1).min(self.cumulative.len());
        let p = from + self.cumulative[from..to].partition_point(|&m| m < target);
        let i = p.clamp(1, self.knots.len() - 1) - 1;
        let (mut lo, mut hi) = (self.knots[i], self.knots[i + 1]);
        // safeguarded Newton on the monotone cubic
        let mut r = if self.cumulative[i + 1] > self.cumulative[i] {
            lo + (hi - lo) * (target - self.cumulative[i]) / (self.cumulative[i + 1] - self.cumulative[i])
        } else {
            lo
        };
        for _ in 0..60 {
            let g = self.interpolate(i, r) - target;
            if g == 0.0 {
                return r;
            }
            if g > 0.0 {
                hi = r;
            } else {
                lo = r;
            }
            let deriv = self.interpolate_slope(i, r);
            let newton = if deriv > 0.0 { r - g / deriv } else { f64::NAN };
            if newton > lo && newton < hi {
                // quadratic convergence: a step this small leaves an error far below rounding
                if (newton - r).abs() <= 1e-11 * r {
                    return newton;
                }
                r = newton;
            } else {
                r = 0.5 * (lo + hi);
                if hi - lo <= 1e-15 * hi {
                    return r;
                }
            }
        }
        r
    }

    /// One Poisson realisation of the points within the radius, as `(r, phi)` pairs.
    pub fn sample_points<R: Rng + ?Sized>(&self, lambda: f64, rng: &mut R) -> Vec<(f64, f64)> {
        let n = self.sample_count(lambda, rng);
        (0..n).map(|_| self.sample_point(rng)).collect()
    }

    fn sample_count<R: Rng + ?Sized>(&self, lambda: f64, rng: &mut R) -> u64 {
        let mean = 2.0 * std::f64::consts::PI * lambda * self.total_mass();
        if mean <= 0.0 {
            return 0;
        }
        Poisson::new(mean).map(|p| p.sample(rng) as u64).unwrap_or(0)
    }

    fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let r = self.quantile(rng.random::<f64>());
        let phi = std::f64::consts::TAU * rng.random::<f64>();
        (r, phi)
    }
}

/// Fritsch-Carlson slopes: exact derivatives clipped so the cubic stays monotone.
fn monotone_slopes(x: &[f64], y: &[f64], exact: &[f64]) -> Vec<f64> {
    let n = x.len();
    let secant: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
    let mut m: Vec<f64> = exact.iter().map(|d| d.max(0.0)).collect();
    for i in 0..n - 1 {
        let s = secant[i];
        if s <= 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
            continue;
        }
        let (a, b) = (m[i] / s, m[i + 1] / s);
        let norm = a * a + b * b;
        if norm > 9.0 {
            let tau = 3.0 / norm.sqrt();
            m[i] = tau * a * s;
            m[i + 1] = tau * b * s;
        }
    }
    m
}

/// Draws one realisation of the process within `max_radius`.
pub fn sample_point_process<T: Scalar, R: Rng + ?Sized>(
    shape: &ShapeFunction<T>,
    lambda: f64,
    max_radius: f64,
    rng: &mut R,
) -> Result<Vec<(f64, f64)>> {
    Ok(RadialSampler::new(shape, max_radius)?.sample_points(lambda, rng))
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

struct Trial {
    interference: f64,
    count: u64,
    in_outage: bool,
}

fn proportion(at: f64, hits: usize, n: usize) -> Estimate {
    let p = hits as f64 / n as f64;
    Estimate { at, value: p, half_width95: Z95 * (p * (1.0 - p) / n as f64).sqrt() }
}

fn sample_mean(values: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let mean = values.clone().sum::<f64>() / nf;
    let var = if n > 1 { values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (nf - 1.0) } else { 0.0 };
    (mean, (var / nf).sqrt())
}

/// Runs `cfg.trials` independent realisations of the interference at `link.y0`.
pub fn simulate<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    link: &LinkConfig<T>,
    task: &SimTask,
    cfg: &SimConfig,
) -> Result<SimOutcome> {
    cfg.validate()?;
    link.validate()?;
    let (lambda, y0) = (to_f64(link.lambda), to_f64(link.y0));
    let (alpha, c) = (to_f64(channel.alpha), to_f64(channel.c));
    let truncation = match cfg.max_radius_override {
        Some(radius) => Truncation { radius, bias_bound: neglected_mean_bound(shape, alpha, c, lambda, y0, radius) },
        None => truncation_radius(shape, channel, lambda, y0, cfg.truncation_tol_fraction)?,
    };
    let sampler = RadialSampler::new(shape, truncation.radius)?;
    let threshold = to_f64(link.beta) * to_f64(channel.inverse_path_loss(link.d));
    let noise = to_f64(link.beta) * to_f64(link.eta.inverse());
    let fading = &channel.fading;
    let outage = matches!(task, SimTask::Outage);

    let trials: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, i);
            let count = sampler.sample_count(lambda, &mut rng);
            let mut interference = 0.0;
            for _ in 0..count {
                let (r, phi) = sampler.sample_point(&mut rng);
                let rho2 = (r * r + y0 * y0 - 2.0 * r * y0 * phi.cos()).max(0.0);
                let path = match alpha {
                    2.0 => rho2,
                    4.0 => rho2 * rho2,
                    _ => rho2.powf(0.5 * alpha),
                };
                interference += fading.sample(&mut rng) / (c + path);
            }
            let in_outage = outage && fading.sample(&mut rng) < noise + threshold * interference;
            Trial { interference, count, in_outage }
        })
        .collect();

    let n = trials.len();
    let (mean, mean_std_error) = sample_mean(trials.iter().map(|t| t.interference), n);
    let mean_count = trials.iter().map(|t| t.count as f64).sum::<f64>() / n as f64;
    let mut outcome = SimOutcome {
        mean,
        mean_std_error,
        mean_half_width95: Z95 * mean_std_error,
        tail_freq: Vec::new(),
        outage_freq: None,
        laplace_est: Vec::new(),
        truncation_radius: truncation.radius,
        truncation_bias_bound: truncation.bias_bound,
        trials_used: n,
        mean_count,
    };
    match task {
        SimTask::Mean => {}
        SimTask::Tail(levels) => {
            outcome.tail_freq = levels
                .iter()
                .map(|&z| proportion(z, trials.iter().filter(|t| t.interference >= z).count(), n))
                .collect();
        }
        SimTask::Outage => {
            outcome.outage_freq = Some(proportion(to_f64(link.beta), trials.iter().filter(|t| t.in_outage).count(), n));
        }
        SimTask::Laplace(grid) => {
            outcome.laplace_est = grid
                .iter()
                .map(|&s| {
                    let (value, se) = sample_mean(trials.iter().map(|t| (-s * t.interference).exp()), n);
                    Estimate { at: s, value, half_width95: Z95 * se }
                })
                .collect();
        }
    }
    Ok(outcome)
}
