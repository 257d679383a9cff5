//! Mean interference, Laplace transform and finiteness classification.
//!
//! For path-loss exponents 2 and 4 the mean interference at a receiver offset `y0` is
//! `lambda * A(y0, c)` with an interference-driving function `A` built from one radial
//! integral of the shape derivative against a closed-form kernel. Under Rayleigh fading the
//! Laplace transform reuses the same function: `L(s) = exp(-lambda s A(y0, s + c))`.

use std::fmt;
use std::sync::Arc;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::numerics::kernels::{arctan_kernel_complement, epsilon_origin, log_kernel_unchecked};
use crate::numerics::{integrate_semi_infinite_with_breaks, IntegralResult, KernelGrowth};
use crate::scalar::{lit, to_f64, Scalar};
use crate::shapes::{ShapeFunction, TailClass};

type Sampler = dyn Fn(&mut dyn RngCore) -> f64 + Send + Sync;
type TailFn = dyn Fn(f64) -> f64 + Send + Sync;

/// User-supplied fading distribution with unit mean.
#[derive(Clone)]
pub struct CustomFading {
    pub name: String,
    sampler: Arc<Sampler>,
    tail: Option<Arc<TailFn>>,
}

impl CustomFading {
    /// `sampler` must draw from a unit-mean law; `tail(x)` is `P(g >= x)` when known.
    pub fn new(
        name: impl Into<String>,
        sampler: impl Fn(&mut dyn RngCore) -> f64 + Send + Sync + 'static,
        tail: Option<Arc<TailFn>>,
    ) -> Self {
        Self { name: name.into(), sampler: Arc::new(sampler), tail }
    }
}

impl fmt::Debug for CustomFading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFading").field("name", &self.name).field("has_tail", &self.tail.is_some()).finish()
    }
}

/// Distribution of the power fading coefficients (all with unit mean).
#[derive(Debug, Clone)]
pub enum FadingLaw {
    /// `g = 1`: pure path loss.
    UnitDeterministic,
    /// `g ~ Exp(1)`.
    RayleighExponential,
    Custom(CustomFading),
}

impl FadingLaw {
    pub fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        match self {
            FadingLaw::UnitDeterministic => 1.0,
            FadingLaw::RayleighExponential => {
                let u: f64 = rand::Rng::random(rng);
                -(-u).ln_1p()
            }
            FadingLaw::Custom(c) => (c.sampler)(rng),
        }
    }

    /// `P(g >= x)`, if known in closed form.
    pub fn tail_probability(&self, x: f64) -> Option<f64> {
        match self {
            FadingLaw::UnitDeterministic => Some(if x <= 1.0 { 1.0 } else { 0.0 }),
            FadingLaw::RayleighExponential => Some(if x <= 0.0 { 1.0 } else { (-x).exp() }),
            FadingLaw::Custom(c) => c.tail.as_ref().map(|t| t(x)),
        }
    }

    pub fn is_rayleigh(&self) -> bool {
        matches!(self, FadingLaw::RayleighExponential)
    }

    pub fn name(&self) -> &str {
        match self {
            FadingLaw::UnitDeterministic => "unit",
            FadingLaw::RayleighExponential => "rayleigh",
            FadingLaw::Custom(c) => &c.name,
        }
    }
}

/// Path loss `(c + d^alpha)^-1` together with the fading law.
#[derive(Debug, Clone)]
pub struct ChannelModel<T> {
    pub alpha: T,
    pub c: T,
    pub fading: FadingLaw,
}

impl<T: Scalar> ChannelModel<T> {
    pub fn new(alpha: T, c: T, fading: FadingLaw) -> Result<Self> {
        if !(alpha >= lit(2.0) && alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!("path-loss exponent must be >= 2, got {}", to_f64(alpha))));
        }
        if !(c >= T::zero() && c.is_finite()) {
            return Err(Error::InvalidConfig(format!("path-loss constant must be >= 0, got {}", to_f64(c))));
        }
        Ok(Self { alpha, c, fading })
    }

    pub fn rayleigh(alpha: T, c: T) -> Result<Self> {
        Self::new(alpha, c, FadingLaw::RayleighExponential)
    }

    /// `1 / path_loss(d) = c + d^alpha`.
    pub fn inverse_path_loss(&self, d: T) -> T {
        self.c + d.powf(self.alpha)
    }

    pub(crate) fn closed_form_exponent(&self) -> Result<PathLossExponent> {
        PathLossExponent::from_alpha(self.alpha)
    }
}

/// The two exponents with closed-form interference-driving functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathLossExponent {
    Two,
    Four,
}

impl PathLossExponent {
    pub fn from_alpha<T: Scalar>(alpha: T) -> Result<Self> {
        if alpha == lit(2.0) {
            Ok(PathLossExponent::Two)
        } else if alpha == lit(4.0) {
            Ok(PathLossExponent::Four)
        } else {
            Err(Error::UnsupportedAlpha(to_f64(alpha)))
        }
    }
}

/// Mean signal-to-noise ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Snr<T> {
    Infinite,
    Linear(T),
}

impl<T: Scalar> Snr<T> {
    pub fn from_db(db: T) -> Self {
        Snr::Linear(lit::<T>(10.0).powf(db / lit(10.0)))
    }

    /// `1 / eta`, zero for a noiseless receiver.
    pub fn inverse(&self) -> T {
        match *self {
            Snr::Infinite => T::zero(),
            Snr::Linear(eta) => eta.recip(),
        }
    }
}

/// Reference link: intensity scale, receiver offset, link distance, threshold and SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig<T> {
    pub lambda: T,
    pub y0: T,
    pub d: T,
    pub beta: T,
    pub eta: Snr<T>,
}

impl<T: Scalar> LinkConfig<T> {
    pub fn new(lambda: T, y0: T, d: T, beta: T, eta: Snr<T>) -> Result<Self> {
        let link = Self { lambda, y0, d, beta, eta };
        link.validate()?;
        Ok(link)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: T, allow_zero: bool| {
            let ok = v.is_finite() && (v > T::zero() || (allow_zero && v == T::zero()));
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} = {} is out of range", to_f64(v))))
            }
        };
        check("lambda", self.lambda, false)?;
        check("y0", self.y0, true)?;
        check("d", self.d, false)?;
        check("beta", self.beta, false)?;
        if let Snr::Linear(eta) = self.eta {
            check("eta", eta, false)?;
        }
        Ok(())
    }

    pub fn with_y0(self, y0: T) -> Self {
        Self { y0, ..self }
    }

    pub fn with_lambda(self, lambda: T) -> Self {
        Self { lambda, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlmostSure {
    Yes,
    No,
    Unknown,
}

/// Which of mean interference, interferer count and interference itself are finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FinitenessVerdict {
    pub mean_interference_finite: bool,
    pub expected_count_finite: bool,
    pub interference_as_finite: AlmostSure,
}

fn require_c<T: Scalar>(c: T) -> Result<()> {
    if c > T::zero() && c.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("path-loss constant must be positive, got {}", to_f64(c))))
    }
}

fn require_offset<T: Scalar>(y0: T) -> Result<()> {
    if y0 >= T::zero() && y0.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("receiver offset must be >= 0, got {}", to_f64(y0))))
    }
}

/// `A_2(y0, c) = -pi (F(0) K(0) + int_0^inf f(r) K(r) dr)` with the `asinh` kernel `K`.
///
/// The kernel is evaluated in its log form, which differs from the `asinh` form by a constant
/// that cancels because `F(inf) = 0` for every admissible shape.
pub fn interference_driving_a2<T: Scalar>(shape: &ShapeFunction<T>, y0: T, c: T, tol: T) -> Result<IntegralResult<T>> {
    require_c(c)?;
    require_offset(y0)?;
    if !shape.tail().decays_polynomially() {
        return Err(Error::DivergentIntegral(format!(
            "mean interference is infinite for alpha = 2 with a {:?} shape tail",
            shape.tail()
        )));
    }
    let eps = epsilon_origin(c);
    let kernel = move |r: T| {
        if y0 <= eps {
            (r * r + y0 * y0 + c).ln()
        } else {
            log_kernel_unchecked(r, c, y0)
        }
    };
    let integral = integrate_semi_infinite_with_breaks(kernel, KernelGrowth::Logarithmic, shape, &[y0, c.sqrt()], tol)?
        .require_converged()?;
    let pi = T::PI();
    Ok(IntegralResult {
        value: -pi * (shape.f_zero() * kernel(T::zero()) + integral.value),
        abs_error: pi * integral.abs_error,
        ..integral
    })
}

/// `A_4(y0, c) = pi/(2 sqrt c) (F(inf) pi/2 - F(0) Theta(0) - int f Theta dr)` with
/// `Theta(0) = -pi/2`.
///
/// Evaluated as `pi/(2 sqrt c) (pi F(0) + int f (pi/2 - Theta) dr)`, which is the same
/// expression after `int f = F(inf) - F(0)` and whose integrand decays like `f / r^2`.
pub fn interference_driving_a4<T: Scalar>(shape: &ShapeFunction<T>, y0: T, c: T, tol: T) -> Result<IntegralResult<T>> {
    require_c(c)?;
    require_offset(y0)?;
    let quarter = c.powf(lit(0.25));
    let breaks = [y0, quarter, y0 + quarter, (y0 - quarter).max(T::zero())];
    let kernel = move |r: T| arctan_kernel_complement(r, c, y0);
    let integral =
        integrate_semi_infinite_with_breaks(kernel, KernelGrowth::Bounded, shape, &breaks, tol)?.require_converged()?;
    let pi = T::PI();
    let scale = pi / (lit::<T>(2.0) * c.sqrt());
    Ok(IntegralResult {
        value: scale * (pi * shape.f_zero() + integral.value),
        abs_error: scale * integral.abs_error,
        ..integral
    })
}

/// `A_alpha(y0, c)` for `alpha` in {2, 4}.
pub fn interference_driving<T: Scalar>(
    exponent: PathLossExponent,
    shape: &ShapeFunction<T>,
    y0: T,
    c: T,
    tol: T,
) -> Result<IntegralResult<T>> {
    match exponent {
        PathLossExponent::Two => interference_driving_a2(shape, y0, c, tol),
        PathLossExponent::Four => interference_driving_a4(shape, y0, c, tol),
    }
}

/// `E[I(y0)] = lambda A_alpha(y0, c)`; independent of the fading law.
pub fn mean_interference<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    lambda: T,
    y0: T,
    tol: T,
) -> Result<IntegralResult<T>> {
    let exponent = channel.closed_form_exponent()?;
    Ok(interference_driving(exponent, shape, y0, channel.c, tol)?.scaled(lambda))
}

/// `log L(s) = -lambda s A_alpha(y0, s + c)` under Rayleigh fading; `-inf` when `A` diverges.
pub fn log_laplace_transform<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    lambda: T,
    y0: T,
    s: T,
    tol: T,
) -> Result<T> {
    if !channel.fading.is_rayleigh() {
        return Err(Error::UnsupportedFading("rayleigh"));
    }
    let exponent = channel.closed_form_exponent()?;
    if !(s >= T::zero()) {
        return Err(Error::DomainError(format!("transform variable must be >= 0, got {}", to_f64(s))));
    }
    if s == T::zero() {
        return Ok(T::zero());
    }
    if !(s + channel.c > T::zero()) {
        return Err(Error::DomainError("need s + c > 0".into()));
    }
    match interference_driving(exponent, shape, y0, s + channel.c, tol) {
        Ok(a) => Ok(-lambda * s * a.value),
        Err(Error::DivergentIntegral(_)) => Ok(T::neg_infinity()),
        Err(e) => Err(e),
    }
}

/// `L(s) = E[exp(-s I(y0))] = exp(-lambda s A_alpha(y0, s + c))` under Rayleigh fading.
///
/// Returns 0 in the regime where the interference is almost surely infinite.
pub fn laplace_transform<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
    lambda: T,
    y0: T,
    s: T,
    tol: T,
) -> Result<T> {
    log_laplace_transform(shape, channel, lambda, y0, s, tol).map(T::exp)
}

/// Finiteness of mean interference, expected interferer count and the interference itself.
pub fn classify_finiteness<T: Scalar>(
    shape: &ShapeFunction<T>,
    channel: &ChannelModel<T>,
) -> Result<FinitenessVerdict> {
    let exponent = channel.closed_form_exponent()?;
    let tail = shape.tail();
    let expected_count_finite = tail.finite_mass();
    let mean_interference_finite = match exponent {
        PathLossExponent::Two => tail.decays_polynomially(),
        PathLossExponent::Four => true,
    };
    let interference_as_finite = if mean_interference_finite {
        AlmostSure::Yes
    } else if exponent == PathLossExponent::Two && matches!(tail, TailClass::NonDecaying | TailClass::LogDecay(_)) {
        AlmostSure::No
    } else {
        AlmostSure::Unknown
    };
    Ok(FinitenessVerdict { mean_interference_finite, expected_count_finite, interference_as_finite })
}
