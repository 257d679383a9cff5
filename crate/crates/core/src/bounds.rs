//! Tail bounds on the interference: a dominant-interferer lower bound on subharmonic regions
//! of the intensity and the Markov upper bound.

use crate::analytic::{interference_driving, ChannelModel, FadingLaw};
use crate::error::{Error, Result};
use crate::numerics::{integrate_to_infinity, integrate_with_breaks};
use crate::scalar::{lit, to_f64, Scalar};
use crate::shapes::ShapeFunction;

/// Slack on the radial Laplacian when deciding subharmonicity.
pub const LAPLACIAN_TOLERANCE: f64 = -1e-12;

/// Radii (as disjoint, ordered closed intervals) on which the intensity is subharmonic.
/// An unbounded interval has `f64::INFINITY` as its upper end.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRegion<T> {
    pub intervals: Vec<(T, T)>,
}

impl<T: Scalar> RadialRegion<T> {
    pub fn new(intervals: Vec<(T, T)>) -> Result<Self> {
        let mut prev = -T::one();
        for &(lo, hi) in &intervals {
            if !(lo >= T::zero() && lo <= hi && lo > prev) {
                return Err(Error::InvalidConfig("region intervals must be ordered, disjoint and non-negative".into()));
            }
            prev = hi;
        }
        Ok(Self { intervals })
    }

    pub fn whole_plane() -> Self {
        Self { intervals: vec![(T::zero(), T::infinity())] }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Interval for which `y0` is an interior point of the corresponding annulus (or disc).
    pub fn containing(&self, y0: T) -> Option<(T, T)> {
        self.intervals.iter().copied().find(|&(lo, hi)| y0 < hi && (y0 > lo || (lo == T::zero() && y0 >= T::zero())))
    }
}

/// Default grid for [`subharmonic_region`]: covers ten times the largest feature radius.
pub fn default_grid<T: Scalar>(shape: &ShapeFunction<T>) -> (T, T) {
    let feature = shape.knots().into_iter().chain(shape.support_end()).fold(shape.length_scale(), |m, k| m.max(k));
    let extent = feature * lit(10.0);
    (extent / lit(4000.0), extent)
}

/// Subharmonic radii found by central differences of `F'' + F'/r` on `0, h, 2h, ..` up to
/// `extent`. Grid points within one step of a knot are excluded; a region reaching the last
/// grid point is taken to extend to infinity.
pub fn subharmonic_region<T: Scalar>(shape: &ShapeFunction<T>, grid_step: T, extent: T) -> Result<RadialRegion<T>> {
    if !(grid_step > T::zero() && extent > grid_step) {
        return Err(Error::InvalidConfig("grid step must be positive and below the grid extent".into()));
    }
    let h = grid_step;
    let n = (extent / h).ceil().to_usize().unwrap_or(usize::MAX);
    if n > 50_000_000 {
        return Err(Error::InvalidConfig("subharmonic grid too fine".into()));
    }
    let knots = shape.knots();
    let tol = lit::<T>(LAPLACIAN_TOLERANCE);
    let two = lit::<T>(2.0);
    let ok = |i: usize| {
        let r = h * T::from_usize(i).unwrap();
        if knots.iter().any(|&k| (r - k).abs() <= h * lit(1.000001)) {
            return false;
        }
        let laplacian = if i == 0 {
            // F'' + F'/r -> 2 F''(0); symmetric difference of the even extension
            lit::<T>(4.0) * (shape.eval(h) - shape.eval(T::zero())) / (h * h)
        } else {
            let (lo, mid, hi) = (shape.eval(r - h), shape.eval(r), shape.eval(r + h));
            (hi - two * mid + lo) / (h * h) + (hi - lo) / (two * h * r)
        };
        laplacian >= tol
    };
    let mut intervals = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..=n {
        match (ok(i), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                intervals.push((h * T::from_usize(s).unwrap(), h * T::from_usize(i - 1).unwrap()));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        intervals.push((h * T::from_usize(s).unwrap(), T::infinity()));
    }
    RadialRegion::new(intervals)
}

/// Largest radius of a disc centred at distance `y0` from the origin that stays inside the
/// region: `rHigh - y0` for an interval starting at the origin, else the distance to the nearer
/// boundary circle. Infinite for `[0, inf)`.
pub fn max_inscribed_radius<T: Scalar>(region: &RadialRegion<T>, y0: T) -> Result<T> {
    let (lo, hi) = region.containing(y0).ok_or(Error::OutsideRegion(to_f64(y0)))?;
    if lo == T::zero() {
        Ok(hi - y0)
    } else {
        Ok((y0 - lo).min(hi - y0))
    }
}

/// `int_0^rbar r P(g >= z (c + r^alpha)) dr` for a unit path-loss gain, which is
/// `min(rbar^2, (1/z - c)^(2/alpha)) / 2` when `z c < 1` and zero otherwise.
fn dominant_mass_unit(alpha: f64, c: f64, z: f64, r_bar: f64) -> f64 {
    if z * c >= 1.0 {
        return 0.0;
    }
    let reach_sq = (1.0 / z - c).powf(2.0 / alpha);
    0.5 * (r_bar * r_bar).min(reach_sq)
}

/// Same integral by quadrature for any fading law with a known tail.
fn dominant_mass_quadrature(
    alpha: f64,
    c: f64,
    z: f64,
    r_bar: f64,
    tail: impl Fn(f64) -> f64,
    tol: f64,
) -> Result<f64> {
    let integrand = |r: f64| r * tail(z * (c + r.powf(alpha)));
    let mut breaks = vec![0.0];
    // where the argument crosses 1, the scale of every unit-mean tail
    if z * c < 1.0 {
        let knee = (1.0 / z - c).powf(1.0 / alpha);
        if knee < r_bar {
            breaks.push(knee);
        }
    }
    let result = if r_bar.is_finite() {
        breaks.push(r_bar);
        integrate_with_breaks(integrand, &breaks, tol)
    } else {
        integrate_to_infinity(integrand, &breaks, tol)
    };
    Ok(result.require_converged()?.value)
}

/// `1 - exp(-2 pi lambda F(|y0|) int_0^rbar r P(g >= z (c + r^alpha)) dr)`, a lower bound on
/// `P(I(y0) >= z)` valid when `y0` is interior to a subharmonic `region`.
pub fn lower_tail_bound<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    lambda: T,
    y0: T,
    z: T,
    region: &RadialRegion<T>,
    tol: T,
) -> Result<T> {
    if !(z > T::zero()) {
        return Err(Error::DomainError(format!("interference level must be positive, got {}", to_f64(z))));
    }
    let r_bar = to_f64(max_inscribed_radius(region, y0)?);
    let (alpha, c, zf) = (to_f64(channel.alpha), to_f64(channel.c), to_f64(z));
    let mass = match &channel.fading {
        FadingLaw::UnitDeterministic => dominant_mass_unit(alpha, c, zf, r_bar),
        law => {
            if law.tail_probability(1.0).is_none() {
                return Err(Error::UnsupportedFading("fading with a known tail distribution"));
            }
            dominant_mass_quadrature(alpha, c, zf, r_bar, |x| law.tail_probability(x).unwrap(), to_f64(tol))?
        }
    };
    let exponent = 2.0 * std::f64::consts::PI * to_f64(lambda) * to_f64(shape.eval(y0)) * mass;
    Ok(lit(-(-exponent).exp_m1()))
}

/// Markov bound `P(I(y0) >= z) <= min(1, lambda A_alpha(y0, c) / z)`.
pub fn markov_upper_tail<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    lambda: T,
    y0: T,
    z: T,
    tol: T,
) -> Result<T> {
    if !(z > T::zero()) {
        return Err(Error::DomainError(format!("interference level must be positive, got {}", to_f64(z))));
    }
    let exponent = crate::analytic::PathLossExponent::from_alpha(channel.alpha)?;
    let a = interference_driving(exponent, shape, y0, channel.c, tol)?;
    Ok((lambda * a.value / z).min(T::one()))
}
