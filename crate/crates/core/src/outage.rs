//! Rayleigh outage probability, its locally stationary approximation and accuracy metrics.

use crate::analytic::{interference_driving_a4, log_laplace_transform, ChannelModel, LinkConfig, Snr};
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};
use crate::shapes::ShapeFunction;

/// Denominator floor below which the relative error is refused.
pub const DEGENERATE_OUTAGE: f64 = 1e-15;

fn require_rayleigh<T: Scalar>(channel: &ChannelModel<T>) -> Result<()> {
    if channel.fading.is_rayleigh() {
        Ok(())
    } else {
        Err(Error::UnsupportedFading("rayleigh"))
    }
}

/// `log(1 - P_o)`, kept separate so callers can avoid the `1 - (1 - x)` round trip.
pub fn log_success_exact<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    link: &LinkConfig<T>,
    tol: T,
) -> Result<T> {
    require_rayleigh(channel)?;
    link.validate()?;
    let s = link.beta * channel.inverse_path_loss(link.d);
    let log_l = log_laplace_transform(shape, channel, link.lambda, link.y0, s, tol)?;
    Ok(log_l - link.beta * link.eta.inverse())
}

/// `P_o(y0) = 1 - L_I(beta (c + d^alpha)) exp(-beta / eta)` under Rayleigh fading.
pub fn outage_exact<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    link: &LinkConfig<T>,
    tol: T,
) -> Result<T> {
    let log_success = log_success_exact(shape, channel, link, tol)?;
    Ok((-log_success.exp_m1()).max(T::zero()).min(T::one()))
}

/// `log(1 - P~_o)` for the locally stationary model with intensity `lambda F(|y0|)`.
pub fn log_success_approx<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    link: &LinkConfig<T>,
) -> Result<T> {
    require_rayleigh(channel)?;
    link.validate()?;
    let alpha = channel.alpha;
    if alpha <= lit(2.0) {
        return Err(Error::UnsupportedAlpha(to_f64(alpha)));
    }
    if channel.c != T::zero() {
        return Err(Error::RequiresZeroC(to_f64(channel.c)));
    }
    let pi = T::PI();
    let two = lit::<T>(2.0);
    let angle = two * pi / alpha;
    let geometry = two * pi * pi / alpha / angle.sin();
    let exponent = link.lambda * shape.eval(link.y0) * link.d * link.d * link.beta.powf(two / alpha) * geometry;
    Ok(-exponent - link.beta * link.eta.inverse())
}

/// `P~_o(y0) = 1 - exp(-lambda F(|y0|) d^2 beta^(2/alpha) (2 pi^2 / alpha) csc(2 pi / alpha))`.
///
/// Needs `c = 0` and `alpha > 2`. A finite SNR multiplies the success probability by the same
/// noise factor `exp(-beta / eta)` as the exact model.
pub fn outage_approx<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    link: &LinkConfig<T>,
) -> Result<T> {
    let log_success = log_success_approx(shape, channel, link)?;
    Ok((-log_success.exp_m1()).max(T::zero()).min(T::one()))
}

fn require_divergence_regime<T: Scalar>(channel: &ChannelModel<T>, link: &LinkConfig<T>) -> Result<()> {
    if channel.alpha != lit(4.0) {
        return Err(Error::UnsupportedAlpha(to_f64(channel.alpha)));
    }
    if channel.c != T::zero() {
        return Err(Error::RequiresZeroC(to_f64(channel.c)));
    }
    if link.eta != Snr::Infinite {
        return Err(Error::InvalidConfig("log-divergence is defined for a noiseless receiver".into()));
    }
    Ok(())
}

/// Closed-form log-divergence for `alpha = 4`, `c = 0`:
/// `gamma(y0) = d^4 beta (pi^2 F(|y0|) / (2 d^2 sqrt(beta)) - A_4(y0, beta d^4))`.
///
/// Positive values mean the stationary approximation overestimates the outage.
pub fn log_divergence<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    link: &LinkConfig<T>,
    tol: T,
) -> Result<T> {
    require_divergence_regime(channel, link)?;
    link.validate()?;
    let (d, beta) = (link.d, link.beta);
    let d2 = d * d;
    let s = beta * d2 * d2;
    let a4 = interference_driving_a4(shape, link.y0, s, tol)?.value;
    let pi = T::PI();
    let stationary = pi * pi * shape.eval(link.y0) / (lit::<T>(2.0) * d2 * beta.sqrt());
    Ok(s * (stationary - a4))
}

/// Log-divergence from its definition, `lambda^-1 log((1 - P_o) / (1 - P~_o))`.
pub fn log_divergence_from_outages<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    link: &LinkConfig<T>,
    tol: T,
) -> Result<T> {
    require_divergence_regime(channel, link)?;
    let exact = outage_exact(shape, channel, link, tol)?;
    let approx = outage_approx(shape, channel, link)?;
    Ok(((-exact).ln_1p() - (-approx).ln_1p()) / link.lambda)
}

/// `delta(y0) = |P~_o - P_o| / P_o`.
pub fn relative_error<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    link: &LinkConfig<T>,
    tol: T,
) -> Result<T> {
    let exact = outage_exact(shape, channel, link, tol)?;
    let approx = outage_approx(shape, channel, link)?;
    if exact <= lit(DEGENERATE_OUTAGE) {
        return Err(Error::DegenerateDenominator(to_f64(exact)));
    }
    Ok((approx - exact).abs() / exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::FadingLaw;
    use crate::shapes::ScenarioParams;
    use std::f64::consts::PI;

    const TOL: f64 = 1e-11;

    fn fig3_shape() -> ShapeFunction<f64> {
        ShapeFunction::scenario(ScenarioParams::A { r0: 500.0, r1: 800.0 }).unwrap()
    }

    fn link(lambda: f64, y0: f64, d: f64, beta: f64, eta: Snr<f64>) -> LinkConfig<f64> {
        LinkConfig::new(lambda, y0, d, beta, eta).unwrap()
    }

    #[test]
    fn zero_threshold_never_in_outage() {
        let ch = ChannelModel::rayleigh(4.0, 1.0).unwrap();
        let p = outage_exact(&fig3_shape(), &ch, &link(1e-3, 0.0, 10.0, 1e-12, Snr::Infinite), TOL).unwrap();
        assert!(p <= 1e-9);
    }

    #[test]
    fn noise_floor_outside_support() {
        let eta = Snr::from_db(10.0);
        let ch = ChannelModel::rayleigh(4.0, 1.0).unwrap();
        let p = outage_exact(&fig3_shape(), &ch, &link(1e-3, 1e4, 10.0, 0.5, eta), TOL).unwrap();
        assert!((p - (1.0 - (-0.05f64).exp())).abs() < 1e-6, "{p}");
    }

    #[test]
    fn noise_decomposition_is_exact() {
        let shape = ShapeFunction::scenario(ScenarioParams::C { rho: 50.0 }).unwrap();
        for alpha in [2.0, 4.0] {
            let ch = ChannelModel::rayleigh(alpha, 1.0).unwrap();
            for y0 in [0.0, 30.0, 200.0] {
                let quiet = outage_exact(&shape, &ch, &link(1e-3, y0, 10.0, 0.5, Snr::Infinite), TOL).unwrap();
                let noisy = outage_exact(&shape, &ch, &link(1e-3, y0, 10.0, 0.5, Snr::from_db(10.0)), TOL).unwrap();
                let expected = 1.0 - (1.0 - quiet) * (-0.05f64).exp();
                assert!((noisy - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn outage_is_monotone_in_threshold_density_and_distance() {
        let shape = fig3_shape();
        for alpha in [2.0, 4.0] {
            let ch = ChannelModel::rayleigh(alpha, 1.0).unwrap();
            let base = link(1e-3, 300.0, 10.0, 0.5, Snr::Infinite);
            let p0 = outage_exact(&shape, &ch, &base, TOL).unwrap();
            assert!((0.0..=1.0).contains(&p0));
            let up = |l: LinkConfig<f64>| outage_exact(&shape, &ch, &l, TOL).unwrap();
            assert!(up(LinkConfig { beta: 1.0, ..base }) >= p0);
            assert!(up(base.with_lambda(2e-3)) >= p0);
            assert!(up(LinkConfig { d: 20.0, ..base }) >= p0);
        }
    }

    #[test]
    fn outage_decreases_away_from_the_dense_core() {
        let shape = fig3_shape();
        for alpha in [2.0, 4.0] {
            let ch = ChannelModel::rayleigh(alpha, 1.0).unwrap();
            let mut prev = 1.0;
            for i in 0..=20 {
                let p = outage_exact(&shape, &ch, &link(1e-3, 50.0 * i as f64, 10.0, 0.5, Snr::Infinite), TOL).unwrap();
                assert!(p <= prev + 1e-12);
                prev = p;
            }
        }
    }

    #[test]
    fn approximation_examples() {
        let constant = ShapeFunction::constant(1.0).unwrap();
        let ch = ChannelModel::rayleigh(4.0, 0.0).unwrap();
        let p = outage_approx(&constant, &ch, &link(1e-3, 0.0, 10.0, 1.0, Snr::Infinite)).unwrap();
        assert!((p - (1.0 - (-1e-3 * 100.0 * PI * PI / 2.0).exp())).abs() < 1e-15);
        let p = outage_approx(&fig3_shape(), &ch, &link(1e-3, 900.0, 10.0, 1.0, Snr::Infinite)).unwrap();
        assert_eq!(p, 0.0);
        let two = ChannelModel::rayleigh(2.0, 0.0).unwrap();
        assert!(matches!(
            outage_approx(&constant, &two, &link(1e-3, 0.0, 10.0, 1.0, Snr::Infinite)),
            Err(Error::UnsupportedAlpha(_))
        ));
        let c1 = ChannelModel::rayleigh(4.0, 1.0).unwrap();
        assert!(matches!(
            outage_approx(&constant, &c1, &link(1e-3, 0.0, 10.0, 1.0, Snr::Infinite)),
            Err(Error::RequiresZeroC(_))
        ));
    }

    #[test]
    fn log_divergence_vanishes_for_stationary_shapes() {
        let ch = ChannelModel::rayleigh(4.0, 0.0).unwrap();
        for level in [1.0, 0.4] {
            let s = ShapeFunction::constant(level).unwrap();
            for i in 0..20 {
                let l = link(1e-3, 37.0 * i as f64, 10.0, 1.0, Snr::Infinite);
                assert!(log_divergence(&s, &ch, &l, TOL).unwrap().abs() <= 1e-9);
                assert!(relative_error(&s, &ch, &l, TOL).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn log_divergence_routes_agree_and_sign_matches() {
        let ch = ChannelModel::rayleigh(4.0, 0.0).unwrap();
        let shapes = [
            fig3_shape(),
            ShapeFunction::scenario(ScenarioParams::C { rho: 100.0 }).unwrap(),
            ShapeFunction::scenario(ScenarioParams::D { delta: 1e-5, alpha: 4.0 }).unwrap(),
        ];
        for shape in &shapes {
            for i in 0..20 {
                let l = link(1e-3, 45.0 * i as f64, 10.0, 1.0, Snr::Infinite);
                let closed = log_divergence(shape, &ch, &l, 1e-13).unwrap();
                let defn = log_divergence_from_outages(shape, &ch, &l, 1e-13).unwrap();
                assert!((closed - defn).abs() <= 1e-9, "{closed} vs {defn}");
                let gap = outage_approx(shape, &ch, &l).unwrap() - outage_exact(shape, &ch, &l, 1e-13).unwrap();
                if closed.abs() > 1e-6 {
                    assert_eq!(closed.signum(), gap.signum());
                }
            }
        }
    }

    #[test]
    fn approximation_fails_near_origin_for_scenario_d() {
        let ch = ChannelModel::rayleigh(4.0, 0.0).unwrap();
        let d = ShapeFunction::scenario(ScenarioParams::D { delta: 1e-5, alpha: 4.0 }).unwrap();
        let l = link(1e-3, 0.0, 10.0, 1.0, Snr::Infinite);
        assert!(log_divergence(&d, &ch, &l, TOL).unwrap() < -100.0);
        assert!(relative_error(&d, &ch, &l, TOL).unwrap() >= 1.0);
    }

    #[test]
    fn approximation_is_close_on_the_plateau() {
        let ch = ChannelModel::rayleigh(4.0, 0.0).unwrap();
        let a = ShapeFunction::scenario(ScenarioParams::A { r0: 500.0, r1: 800.0 }).unwrap();
        let l = link(1e-3, 200.0, 10.0, 1.0, Snr::Infinite);
        assert!(relative_error(&a, &ch, &l, TOL).unwrap() <= 0.05);
    }

    #[test]
    fn degenerate_denominator_is_reported() {
        let ch = ChannelModel::rayleigh(4.0, 0.0).unwrap();
        let a = fig3_shape();
        let l = link(1e-3, 1e6, 10.0, 1.0, Snr::Infinite);
        assert!(matches!(relative_error(&a, &ch, &l, TOL), Err(Error::DegenerateDenominator(_))));
    }

    #[test]
    fn non_rayleigh_is_rejected() {
        let ch = ChannelModel::new(4.0, 1.0, FadingLaw::UnitDeterministic).unwrap();
        let l = link(1e-3, 0.0, 10.0, 1.0, Snr::Infinite);
        assert!(matches!(outage_exact(&fig3_shape(), &ch, &l, TOL), Err(Error::UnsupportedFading(_))));
    }
}
