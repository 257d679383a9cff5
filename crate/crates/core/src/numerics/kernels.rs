//! Closed-form radial kernels of the mean-interference integrals.
//!
//! For `alpha = 2` the angular average of the path loss integrates to an `asinh` in `r^2`;
//! for `alpha = 4` it integrates to the angle `atan(2 Re k / (1 - |k|^2))` of a complex
//! quantity `k`. Both are evaluated here in forms that stay accurate at the origin and at
//! large radii.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

pub type ComplexValue<T> = Complex<T>;

/// Receiver offsets at or below this use the origin form of the `asinh` kernel.
pub fn epsilon_origin<T: Scalar>(c: T) -> T {
    lit::<T>(1e-6) * c.sqrt().max(T::one())
}

fn require_positive_c<T: Scalar>(c: T) -> Result<()> {
    if c > T::zero() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("path-loss constant must be positive, got {}", to_f64(c))))
    }
}

/// `int_0^pi dphi / (a + b cos phi) = pi / sqrt(a^2 - b^2)` for `a > |b|`.
pub fn angular_closed_form<T: Scalar>(a: T, b: T) -> Result<T> {
    if !(a > b.abs()) {
        return Err(Error::DomainError(format!("need a > |b|, got a={} b={}", to_f64(a), to_f64(b))));
    }
    Ok(T::PI() / ((a - b) * (a + b)).sqrt())
}

/// `asinh((r^2 + c - y^2) / (2 y sqrt(c)))`, or `log(r^2 + y^2 + c)` when `y` is at the origin.
pub fn asinh_kernel<T: Scalar>(r: T, c: T, y0: T) -> Result<T> {
    require_positive_c(c)?;
    if y0 <= epsilon_origin(c) {
        return Ok((r * r + y0 * y0 + c).ln());
    }
    Ok(((r * r + c - y0 * y0) / (lit::<T>(2.0) * y0 * c.sqrt())).asinh())
}

/// `asinh_kernel + log(y sqrt(c))`: the same kernel up to an additive constant, continuous
/// in `y` down to the origin where it meets `log(r^2 + y^2 + c)`.
///
/// Additive constants cancel in the mean interference of any shape with `F(inf) = 0`.
pub fn log_kernel<T: Scalar>(r: T, c: T, y0: T) -> Result<T> {
    require_positive_c(c)?;
    if y0 <= epsilon_origin(c) {
        return Ok((r * r + y0 * y0 + c).ln());
    }
    Ok(log_kernel_unchecked(r, c, y0))
}

/// `log((q + sqrt(q^2 + 4 c y^2)) / 2)` with `q = r^2 + c - y^2`, without cancellation.
#[inline]
pub(crate) fn log_kernel_unchecked<T: Scalar>(r: T, c: T, y0: T) -> T {
    let q = (r - y0) * (r + y0) + c;
    let t = lit::<T>(4.0) * c * y0 * y0;
    let root = (q * q + t).sqrt();
    if q >= T::zero() {
        ((q + root) * lit(0.5)).ln()
    } else {
        (t * lit(0.5) / (root - q)).ln()
    }
}

/// `(r^2 - y^2 - j sqrt(c)) / sqrt((sqrt(c) + j (r^2 + y^2))^2 + 4 r^2 y^2)`, principal root.
pub fn kappa<T: Scalar>(r: T, c: T, y0: T) -> ComplexValue<T> {
    let s = c.sqrt();
    let num = Complex::new(r * r - y0 * y0, -s);
    let inner = Complex::new(s, r * r + y0 * y0);
    let den = (inner * inner + Complex::new(lit::<T>(4.0) * r * r * y0 * y0, T::zero())).sqrt();
    num / den
}

/// Intermediate quantities of the stable angle evaluation.
struct AngleParts<T> {
    /// numerator argument of atan2
    sin_part: T,
    /// denominator argument of atan2 (never negative)
    cos_part: T,
}

/// Writes `(1 - |k|^2) + 2j Re k` (up to a positive factor) without cancellation.
///
/// With `s = sqrt(c)`, `m = r^2 - y^2` and `D = sqrt((s^2 - m^2) + 2j s (r^2 + y^2)) = X + jY`,
/// the pair is `(R0, 2(mX - sY))` where `R0 = 16 c r^2 y^2 / (|D^2| + m^2 + c)`. For `m >= 0`
/// the common factor `R0` is divided out, leaving `(mX + sY, m^2 - c)`; that form also
/// covers `y = 0`, where `k` degenerates to `-j`.
fn angle_parts<T: Scalar>(r: T, c: T, y0: T) -> AngleParts<T> {
    let two: T = lit(2.0);
    let s = c.sqrt();
    let m = (r - y0) * (r + y0);
    let a = r * r + y0 * y0;
    let re = (s - m) * (s + m);
    let im = two * s * a;
    let modulus = re.hypot(im);
    let (x, y) = if re >= T::zero() {
        let x = ((modulus + re) / two).sqrt();
        (x, if x > T::zero() { im / (two * x) } else { T::zero() })
    } else {
        let y = ((modulus - re) / two).sqrt();
        (im / (two * y), y)
    };
    if m >= T::zero() {
        AngleParts { sin_part: (m - s) * (m + s), cos_part: m * x + s * y }
    } else {
        let r0 = lit::<T>(16.0) * c * r * r * y0 * y0 / (modulus + m * m + c);
        AngleParts { sin_part: two * (m * x - s * y), cos_part: r0 }
    }
}

/// `Theta(r) = atan(2 Re k / (1 - |k|^2))` on the branch running from `-pi/2` at `r = 0`
/// to `+pi/2` as `r -> infinity`; `pi / (2 sqrt c) * Theta` is an antiderivative of the
/// angular integral `int_0^pi 2r / (c + (r^2 + y^2 - 2 r y cos phi)^2) dphi`.
pub fn arctan_kernel<T: Scalar>(r: T, c: T, y0: T) -> Result<T> {
    require_positive_c(c)?;
    let p = angle_parts(r, c, y0);
    Ok(p.sin_part.atan2(p.cos_part))
}

/// `pi/2 - arctan_kernel`, accurate where the kernel approaches its upper limit.
pub(crate) fn arctan_kernel_complement<T: Scalar>(r: T, c: T, y0: T) -> T {
    let p = angle_parts(r, c, y0);
    p.cos_part.atan2(p.sin_part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::integrate;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// Brute-force angular integral of the alpha=4 path loss.
    fn angular_oracle(r: f64, c: f64, y: f64) -> f64 {
        let res =
            integrate(|phi: f64| 2.0 * r / (c + (r * r + y * y - 2.0 * r * y * phi.cos()).powi(2)), 0.0, PI, 1e-14);
        res.value
    }

    #[test]
    fn angular_closed_form_examples() {
        assert!((angular_closed_form(1.0, 0.0).unwrap() - PI).abs() < 1e-15);
        assert!((angular_closed_form(2.0, 1.0).unwrap() - PI / 3f64.sqrt()).abs() < 1e-15);
        assert!(matches!(angular_closed_form(1.0, 1.0), Err(Error::DomainError(_))));
        assert!(matches!(angular_closed_form(1.0, -2.0), Err(Error::DomainError(_))));
    }

    #[test]
    fn angular_closed_form_matches_quadrature() {
        for (a, b) in [(2.0, 1.0), (5.0, 3.0), (1.01, 1.0)] {
            let brute = integrate(|phi: f64| (a + b * phi.cos()).recip(), 0.0, PI, 1e-14).value;
            let closed = angular_closed_form(a, b).unwrap();
            assert!((brute - closed).abs() <= 1e-10, "({a},{b}): {brute} vs {closed}");
        }
    }

    #[test]
    fn asinh_kernel_examples() {
        assert_eq!(asinh_kernel(0.0, 1.0, 0.0).unwrap(), 0.0);
        assert!(asinh_kernel(0.0f64, 4.0, 2.0).unwrap().abs() < 1e-15);
        let x: f64 = 76.0 / 10.0;
        let v = asinh_kernel(10.0, 1.0, 5.0).unwrap();
        assert!((v - x.asinh()).abs() < 1e-14);
        assert!((v - (x + (x * x + 1.0).sqrt()).ln()).abs() < 1e-14);
        assert!(matches!(asinh_kernel(1.0, 0.0, 1.0), Err(Error::DomainError(_))));
        assert!(matches!(arctan_kernel(1.0, -1.0, 1.0), Err(Error::DomainError(_))));
    }

    #[test]
    fn log_kernel_is_shifted_asinh_kernel() {
        for &(r, c, y) in &[(0.0, 1.0, 3.0), (2.0, 0.5, 1.0), (100.0, 4.0, 7.0), (0.1, 2.0, 50.0)] {
            let shifted = asinh_kernel(r, c, y).unwrap() + (y * f64::sqrt(c)).ln();
            assert!((log_kernel(r, c, y).unwrap() - shifted).abs() < 1e-12);
        }
    }

    #[test]
    fn log_kernel_continuous_across_origin_switch() {
        for &c in &[0.25, 1.0, 4.0, 100.0] {
            let eps = epsilon_origin(c);
            for i in 0..=30 {
                let r = if i == 0 { 0.0 } else { 10f64.powf(-3.0 + 6.0 * i as f64 / 30.0) };
                let below = log_kernel(r, c, eps).unwrap();
                let above = log_kernel(r, c, eps * (1.0 + 1e-9)).unwrap();
                assert!((below - above).abs() <= 1e-6, "c={c} r={r}: {below} vs {above}");
            }
        }
    }

    #[test]
    fn kappa_examples() {
        let k = kappa(0.0f64, 1.0, 2.0);
        assert!((k.norm() - 1.0).abs() < 1e-15);
        let k = kappa(0.0f64, 1.0, 0.0);
        assert!(k.re.abs() < 1e-15 && (k.im + 1.0).abs() < 1e-15);
        for &(r, c, y) in &[(0.5, 1.0, 1.0), (3.0, 0.5, 2.0), (10.0, 4.0, 5.0), (1e3, 1.0, 3.0)] {
            assert!(kappa(r, c, y).norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn stable_angle_matches_kappa_definition() {
        for &c in &[0.5f64, 1.0, 2.0, 5.0] {
            for &y in &[0.5, 1.0, 2.0, 5.0] {
                for &r in &[0.2, 0.5, 1.0, 2.0, 5.0] {
                    let k = kappa(r, c, y);
                    let direct = (2.0 * k.re).atan2(1.0 - k.norm_sqr());
                    let stable = arctan_kernel(r, c, y).unwrap();
                    assert!((direct - stable).abs() < 1e-9, "r={r} c={c} y={y}: {direct} vs {stable}");
                }
            }
        }
    }

    #[test]
    fn corollary_limits() {
        assert!((arctan_kernel(1e-9, 1.0, 3.0).unwrap() + FRAC_PI_2).abs() < 1e-4);
        assert!((arctan_kernel(1e9, 1.0, 3.0).unwrap() - FRAC_PI_2).abs() < 1e-4);
        assert_eq!(arctan_kernel(0.0, 1.0, 0.0).unwrap(), -FRAC_PI_2);
        assert_eq!(arctan_kernel(0.0, 2.0, 3.0).unwrap(), -FRAC_PI_2);
    }

    #[test]
    fn origin_closed_form() {
        // y = 0: the angular integral is 2 pi r / (c + r^4)
        for &c in &[0.5, 1.0, 3.0] {
            for &r in &[0.1, 1.0, 2.5, 40.0] {
                let expected = 2.0 * (r * r / f64::sqrt(c)).atan() - FRAC_PI_2;
                assert!((arctan_kernel(r, c, 0.0).unwrap() - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn complement_is_consistent() {
        for &(r, c, y) in &[(0.0, 1.0, 1.0), (0.7, 2.0, 1.5), (3.0, 1.0, 0.0), (1e6, 1.0, 3.0)] {
            let t = arctan_kernel(r, c, y).unwrap();
            let tc = arctan_kernel_complement(r, c, y);
            assert!((t + tc - FRAC_PI_2).abs() < 1e-14);
        }
        // far tail decays like 2 sqrt(c) / r^2
        let tc = arctan_kernel_complement(1e6f64, 4.0, 3.0);
        assert!((tc / (4.0 / 1e12) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn derivative_relation_against_brute_force() {
        let grid = [0.5f64, 1.0, 2.0, 5.0];
        for &r in &grid {
            for &c in &grid {
                for &y in &grid {
                    let h = 1e-3 * r;
                    let g = |t: f64| PI / (2.0 * c.sqrt()) * arctan_kernel(t, c, y).unwrap();
                    let d = (-g(r + 2.0 * h) + 8.0 * g(r + h) - 8.0 * g(r - h) + g(r - 2.0 * h)) / (12.0 * h);
                    let oracle = angular_oracle(r, c, y);
                    assert!(((d - oracle) / oracle).abs() <= 1e-6, "r={r} c={c} y={y}: {d} vs {oracle}");
                }
            }
        }
    }

    #[test]
    fn kernel_is_monotone() {
        for &(c, y) in &[(1.0, 0.0), (1.0, 3.0), (0.25, 10.0), (9.0, 0.5)] {
            let mut prev = arctan_kernel(0.0, c, y).unwrap();
            for i in 1..4000 {
                let r = 1e-4 * 1.005f64.powi(i);
                let v = arctan_kernel(r, c, y).unwrap();
                assert!(prev <= v + 1e-12, "c={c} y={y} r={r}");
                prev = v;
            }
        }
    }
}
