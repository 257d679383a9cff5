//! Throughput metrics: local transmission capacity, frequency-hopping versus direct-sequence
//! spreading gain, and the accuracy of the Poisson approximation to carrier sensing.

use statrs::function::gamma::gamma;

use crate::analytic::{interference_driving, interference_driving_a2, ChannelModel, LinkConfig, Snr};
use crate::error::{Error, Result};
use crate::outage::{outage_exact, DEGENERATE_OUTAGE};
use crate::scalar::{lit, to_f64, Scalar};
use crate::shapes::{ScenarioParams, ShapeFunction};

fn require_noiseless_rayleigh<T: Scalar>(channel: &ChannelModel<T>, link: &LinkConfig<T>) -> Result<()> {
    if !channel.fading.is_rayleigh() {
        return Err(Error::UnsupportedFading("rayleigh"));
    }
    if channel.c != T::zero() {
        return Err(Error::RequiresZeroC(to_f64(channel.c)));
    }
    if link.eta != Snr::Infinite {
        return Err(Error::InvalidConfig("capacity metrics assume a noiseless receiver".into()));
    }
    Ok(())
}

/// Density of concurrent transmitters near `y0` that keeps the outage at `epsilon`, times the
/// success probability: `-log(1 - eps)(1 - eps) / (s A_alpha(y0, s))` with `s = beta d^alpha`.
///
/// `link.lambda` is ignored; the result is the solution for it.
pub fn local_transmission_capacity<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    link: &LinkConfig<T>,
    epsilon: T,
    tol: T,
) -> Result<T> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::InvalidConfig(format!("outage constraint must lie in (0, 1), got {}", to_f64(epsilon))));
    }
    require_noiseless_rayleigh(channel, link)?;
    link.validate()?;
    let exponent = crate::analytic::PathLossExponent::from_alpha(channel.alpha)?;
    let s = link.beta * link.d.powf(channel.alpha);
    let a = interference_driving(exponent, shape, link.y0, s, tol)?.value;
    if !(a > T::zero()) {
        return Err(Error::DegenerateDenominator(to_f64(a)));
    }
    let success = T::one() - epsilon;
    Ok(-(-epsilon).ln_1p() * success / (s * a))
}

/// Exact capacity ratio of frequency hopping over direct sequence at the origin, and the
/// logarithmic asymptote `1 + pi F(0) log M / A_2(o, beta d^2)` it follows for large `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhDsGain<T> {
    pub ratio: T,
    pub asymptote: T,
}

/// `A_2(o, beta d^2 / M) / A_2(o, beta d^2)` for `alpha = 2`, `c = 0`.
pub fn fh_ds_gain<T: Scalar>(shape: &ShapeFunction<T>, d: T, beta: T, m: T, tol: T) -> Result<FhDsGain<T>> {
    if !(m >= T::one() && m.is_finite()) {
        return Err(Error::InvalidConfig(format!("processing gain must be >= 1, got {}", to_f64(m))));
    }
    if !(d > T::zero() && beta > T::zero()) {
        return Err(Error::InvalidConfig("link distance and threshold must be positive".into()));
    }
    if !(shape.f_zero() > T::zero()) {
        return Err(Error::InvalidConfig("spreading gain needs a positive density at the origin".into()));
    }
    let s = beta * d * d;
    let direct = interference_driving_a2(shape, T::zero(), s, tol)?.value;
    let hopping = if m == T::one() { direct } else { interference_driving_a2(shape, T::zero(), s / m, tol)?.value };
    Ok(FhDsGain { ratio: hopping / direct, asymptote: T::one() + T::PI() * shape.f_zero() * m.ln() / direct })
}

/// Large-scale density of active transmitters under carrier sensing,
/// `(1 - exp(-lambda pi Gamma(1 + 2/alpha) Delta^(-2/alpha))) / (pi Gamma(1 + 2/alpha) Delta^(-2/alpha))`.
pub fn csma_large_scale_density<T: Scalar>(lambda_potential: T, alpha: T, delta_sense: T) -> Result<T> {
    if !(lambda_potential > T::zero() && alpha >= lit(2.0) && delta_sense > T::zero()) {
        return Err(Error::InvalidConfig("need lambda > 0, alpha >= 2 and a positive sensing threshold".into()));
    }
    let (lambda, alpha, delta) = (to_f64(lambda_potential), to_f64(alpha), to_f64(delta_sense));
    let area = std::f64::consts::PI * gamma(1.0 + 2.0 / alpha) * delta.powf(-2.0 / alpha);
    Ok(lit(-(-lambda * area).exp_m1() / area))
}

/// Shape of the interferer density seen by a sensing transmitter, `1 - exp(-Delta r^alpha)`.
pub fn csma_shape<T: Scalar>(delta_sense: T, alpha: T) -> Result<ShapeFunction<T>> {
    ShapeFunction::scenario(ScenarioParams::D { delta: delta_sense, alpha })
}

/// `|P_o(o, d) - P_o(y0, d)| / P_o(y0, d)` with `|y0| = d`: the error of placing the receiver
/// on top of its transmitter in the carrier-sensing model (`alpha = 4`, `c = 0`, Rayleigh).
pub fn csma_accuracy_loss<T: Scalar>(
    lambda_potential: T,
    alpha: T,
    delta_sense: T,
    d: T,
    beta: T,
    tol: T,
) -> Result<T> {
    if alpha != lit(4.0) {
        return Err(Error::UnsupportedAlpha(to_f64(alpha)));
    }
    let lambda = csma_large_scale_density(lambda_potential, alpha, delta_sense)?;
    let shape = csma_shape(delta_sense, alpha)?;
    let channel = ChannelModel::rayleigh(alpha, T::zero())?;
    let at_tx = LinkConfig::new(lambda, T::zero(), d, beta, Snr::Infinite)?;
    let colocated = outage_exact(&shape, &channel, &at_tx, tol)?;
    let actual = outage_exact(&shape, &channel, &at_tx.with_y0(d), tol)?;
    if actual <= lit(DEGENERATE_OUTAGE) {
        return Err(Error::DegenerateDenominator(to_f64(actual)));
    }
    Ok((colocated - actual).abs() / actual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outage::outage_approx;
    use std::f64::consts::PI;

    const TOL: f64 = 1e-12;

    fn link(y0: f64, d: f64, beta: f64) -> LinkConfig<f64> {
        LinkConfig::new(1.0, y0, d, beta, Snr::Infinite).unwrap()
    }

    #[test]
    fn capacity_examples() {
        let c = ShapeFunction::scenario(ScenarioParams::C { rho: 100.0 }).unwrap();
        let two = ChannelModel::rayleigh(2.0, 0.0).unwrap();
        let cap = local_transmission_capacity(&c, &two, &link(0.0, 10.0, 0.5), 0.1, TOL).unwrap();
        let a2 = interference_driving_a2(&c, 0.0, 50.0, TOL).unwrap().value;
        assert!((cap - (-(0.9f64).ln() * 0.9 / (50.0 * a2))).abs() < 1e-15 * cap.abs().max(1.0));

        let one = ShapeFunction::constant(1.0).unwrap();
        let four = ChannelModel::rayleigh(4.0, 0.0).unwrap();
        let cap = local_transmission_capacity(&one, &four, &link(0.0, 10.0, 1.0), 0.1, TOL).unwrap();
        let expected = -(0.9f64).ln() * 0.9 / (100.0 * PI * PI / 2.0);
        assert!(((cap - expected) / expected).abs() < 1e-12);
        // inverting the stationary approximation gives the same density
        let l = LinkConfig::new(cap / 0.9, 0.0, 10.0, 1.0, Snr::Infinite).unwrap();
        assert!((outage_approx(&one, &four, &l).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn capacity_is_linear_for_small_epsilon() {
        let one = ShapeFunction::constant(1.0).unwrap();
        let four = ChannelModel::rayleigh(4.0, 0.0).unwrap();
        let a = local_transmission_capacity(&one, &four, &link(0.0, 10.0, 1.0), 1e-6, TOL).unwrap();
        let b = local_transmission_capacity(&one, &four, &link(0.0, 10.0, 1.0), 2e-6, TOL).unwrap();
        assert!((b / a - 2.0).abs() < 1e-5);
    }

    #[test]
    fn capacity_round_trip() {
        let shapes = [
            ShapeFunction::scenario(ScenarioParams::A { r0: 500.0, r1: 800.0 }).unwrap(),
            ShapeFunction::scenario(ScenarioParams::C { rho: 100.0 }).unwrap(),
        ];
        for alpha in [2.0, 4.0] {
            let ch = ChannelModel::rayleigh(alpha, 0.0).unwrap();
            for shape in &shapes {
                for eps in [0.01, 0.1, 0.5] {
                    let base = link(120.0, 10.0, 0.5);
                    let cap = local_transmission_capacity(shape, &ch, &base, eps, TOL).unwrap();
                    let p = outage_exact(shape, &ch, &base.with_lambda(cap / (1.0 - eps)), TOL).unwrap();
                    assert!((p - eps).abs() <= 1e-9, "alpha={alpha} eps={eps}: {p}");
                }
            }
        }
    }

    #[test]
    fn capacity_rejects_divergent_and_noisy_setups() {
        let ch = ChannelModel::rayleigh(2.0, 0.0).unwrap();
        let one = ShapeFunction::constant(1.0).unwrap();
        assert!(matches!(
            local_transmission_capacity(&one, &ch, &link(0.0, 10.0, 1.0), 0.1, TOL),
            Err(Error::DivergentIntegral(_))
        ));
        let noisy = LinkConfig::new(1.0, 0.0, 10.0, 1.0, Snr::Linear(10.0)).unwrap();
        assert!(local_transmission_capacity(&one, &ch, &noisy, 0.1, TOL).is_err());
    }

    #[test]
    fn spreading_gain_scales_with_log_m() {
        let c = ShapeFunction::scenario(ScenarioParams::C { rho: 100.0 }).unwrap();
        let unit = fh_ds_gain(&c, 10.0, 0.5, 1.0, TOL).unwrap();
        assert_eq!(unit.ratio, 1.0);
        assert_eq!(unit.asymptote, 1.0);
        let a2 = interference_driving_a2(&c, 0.0, 50.0, TOL).unwrap().value;
        let slope = PI * 4f64.ln() / a2;
        let ratios: Vec<f64> =
            [4.0, 16.0, 64.0, 256.0].iter().map(|&m| fh_ds_gain(&c, 10.0, 0.5, m, TOL).unwrap().ratio).collect();
        for w in ratios.windows(2) {
            assert!(w[1] > w[0]);
            assert!(((w[1] - w[0]) / slope - 1.0).abs() < 0.1, "{} vs {slope}", w[1] - w[0]);
        }
        let big = fh_ds_gain(&c, 10.0, 0.5, 1e4, TOL).unwrap();
        assert!(((big.ratio - 1.0) * a2 / (1e4f64).ln() / PI - 1.0).abs() < 0.05);
        assert!(fh_ds_gain(&c, 10.0, 0.5, 1e8, TOL).unwrap().ratio > big.ratio);
    }

    #[test]
    fn spreading_gain_remainder_is_bounded() {
        // (ratio - asymptote) A_2 / pi = int f log((r^2 + s)/(r^2 + s/M)) dr, bounded by max|f| int log(1 + s/r^2)
        let rho = 100.0;
        let c = ShapeFunction::scenario(ScenarioParams::C { rho }).unwrap();
        let s: f64 = 50.0;
        let a2 = interference_driving_a2(&c, 0.0, s, TOL).unwrap().value;
        let bound = (1.0 / rho) * PI * s.sqrt();
        for m in [4.0, 256.0, 1e4, 1e6] {
            let g = fh_ds_gain(&c, 10.0, 0.5, m, TOL).unwrap();
            assert!(((g.ratio - g.asymptote) * a2 / PI).abs() <= bound);
        }
    }

    #[test]
    fn large_scale_density() {
        let tiny = csma_large_scale_density(1e-12, 4.0, 1e-5).unwrap();
        assert!(tiny / 1e-12 >= 0.999);
        let area = PI * (PI.sqrt() / 2.0) * (1e-5f64).powf(-0.5);
        let expected = (1.0 - (-1e-3 * area).exp()) / area;
        assert!((csma_large_scale_density(1e-3, 4.0, 1e-5).unwrap() - expected).abs() < 1e-15);
        let loose = csma_large_scale_density(1e-3f64, 4.0, 1e20).unwrap();
        assert!((loose / 1e-3 - 1.0).abs() < 1e-6);
        let mut prev = 0.0;
        for k in 0..40 {
            let l = csma_large_scale_density(1e-6 * 1.5f64.powi(k), 4.0, 1e-5).unwrap();
            assert!(l >= prev && l <= 1.0 / area);
            prev = l;
        }
    }

    #[test]
    fn csma_shape_is_scenario_d() {
        let s = csma_shape(1e-5f64, 4.0).unwrap();
        assert_eq!(s, ShapeFunction::scenario(ScenarioParams::D { delta: 1e-5, alpha: 4.0 }).unwrap());
    }

    #[test]
    fn accuracy_loss_limits() {
        let near = csma_accuracy_loss(1e-3, 4.0, 1e-5, 0.01, 1.0, TOL).unwrap();
        assert!(near <= 1e-3, "{near}");
        let far = csma_accuracy_loss(1e-3, 4.0, 1e-5, 1e3, 1.0, TOL).unwrap();
        assert!(far <= 1e-2, "{far}");
        assert!(matches!(csma_accuracy_loss(1e-3, 2.0, 1e-5, 1.0, 1.0, TOL), Err(Error::UnsupportedAlpha(_))));
    }
}
