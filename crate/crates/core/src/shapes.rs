//! Isotropic shape functions `F(r)`.
//!
//! The interferer intensity at `x` is `lambda * F(|x|)` with `F` mapping radii to `[0, 1]`.
//! Each shape carries its analytic derivative `f = dF/dr` and a declared tail class; the
//! quadrature routines rely on both.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

/// Large-radius behaviour of a shape function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailClass<T> {
    /// `F(r) = 0` for `r >= end`.
    CompactSupport(T),
    /// `F(r) ~ r^-nu`.
    PowerDecay(T),
    /// `F(r) ~ exp(-rate * r)`.
    ExponentialDecay(T),
    /// `F(r)` tends to a positive constant.
    NonDecaying,
    /// `F(r) ~ (log r)^-p` with `0 < p <= 1`.
    LogDecay(T),
}

impl<T: Scalar> TailClass<T> {
    /// Whether `F` decays at least polynomially, i.e. the mean interference is finite for `alpha = 2`.
    pub fn decays_polynomially(&self) -> bool {
        matches!(self, TailClass::CompactSupport(_) | TailClass::PowerDecay(_) | TailClass::ExponentialDecay(_))
    }

    /// Whether `int r F(r) dr` is finite, i.e. finitely many interferers on average.
    pub fn finite_mass(&self) -> bool {
        match *self {
            TailClass::CompactSupport(_) | TailClass::ExponentialDecay(_) => true,
            TailClass::PowerDecay(nu) => nu > lit(2.0),
            TailClass::NonDecaying | TailClass::LogDecay(_) => false,
        }
    }
}

/// Parameters of the four illustration scenarios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioParams<T> {
    /// Finite network: plateau on `[0, r0]` with raised-cosine roll-off to zero at `r1`.
    A { r0: T, r1: T },
    /// Urban deployment with a hotspot: sum of two plateaus.
    B { hot_level: T, hot_r0: T, hot_r1: T, base_level: T, base_r0: T, base_r1: T },
    /// Scattered network: `exp(-r / rho)`.
    C { rho: T },
    /// Carrier-sense inhibition around the origin: `1 - exp(-delta r^alpha)`.
    D { delta: T, alpha: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioId {
    A,
    B,
    C,
    D,
}

impl<T> ScenarioParams<T> {
    pub fn id(&self) -> ScenarioId {
        match self {
            ScenarioParams::A { .. } => ScenarioId::A,
            ScenarioParams::B { .. } => ScenarioId::B,
            ScenarioParams::C { .. } => ScenarioId::C,
            ScenarioParams::D { .. } => ScenarioId::D,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Plateau<T> {
    level: T,
    r0: T,
    r1: T,
}

impl<T: Scalar> Plateau<T> {
    fn phase(&self, r: T) -> T {
        T::PI() * (r - self.r0) / (self.r1 - self.r0)
    }

    fn eval(&self, r: T) -> T {
        if r <= self.r0 {
            self.level
        } else if r >= self.r1 {
            T::zero()
        } else {
            self.level * lit::<T>(0.5) * (T::one() + self.phase(r).cos())
        }
    }

    fn deriv(&self, r: T) -> T {
        if r <= self.r0 || r >= self.r1 {
            T::zero()
        } else {
            -self.level * lit::<T>(0.5) * T::PI() / (self.r1 - self.r0) * self.phase(r).sin()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Profile<T> {
    Constant { level: T },
    PowerTail { nu: T, knee: T },
    Plateau(Plateau<T>),
    Hotspot { hot: Plateau<T>, base: Plateau<T> },
    Exponential { rho: T },
    CarrierSense { delta: T, alpha: T },
    LogDecay { p: T, knee: T },
}

/// Radial density profile `F(r)` with its derivative and tail class. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeFunction<T> {
    profile: Profile<T>,
    tail: TailClass<T>,
}

fn positive<T: Scalar>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidScenarioParams(format!("{name} must be positive and finite, got {}", to_f64(v))))
    }
}

fn plateau<T: Scalar>(level: T, r0: T, r1: T) -> Result<Plateau<T>> {
    positive("r0", r0)?;
    positive("r1", r1)?;
    if r0 >= r1 {
        return Err(Error::InvalidScenarioParams(format!(
            "plateau radii must satisfy r0 < r1, got {} >= {}",
            to_f64(r0),
            to_f64(r1)
        )));
    }
    if !(level > T::zero() && level <= T::one()) {
        return Err(Error::InvalidScenarioParams(format!("plateau level {} outside (0, 1]", to_f64(level))));
    }
    Ok(Plateau { level, r0, r1 })
}

impl<T: Scalar> ShapeFunction<T> {
    /// Builds one of the four illustration scenarios.
    pub fn scenario(params: ScenarioParams<T>) -> Result<Self> {
        match params {
            ScenarioParams::A { r0, r1 } => {
                let p = plateau(T::one(), r0, r1)?;
                Ok(Self { profile: Profile::Plateau(p), tail: TailClass::CompactSupport(r1) })
            }
            ScenarioParams::B { hot_level, hot_r0, hot_r1, base_level, base_r0, base_r1 } => {
                let hot = plateau(hot_level, hot_r0, hot_r1)?;
                let base = plateau(base_level, base_r0, base_r1)?;
                if hot_level + base_level > T::one() {
                    return Err(Error::InvalidScenarioParams(format!(
                        "hotspot level + base level = {} exceeds 1",
                        to_f64(hot_level + base_level)
                    )));
                }
                Ok(Self {
                    profile: Profile::Hotspot { hot, base },
                    tail: TailClass::CompactSupport(hot_r1.max(base_r1)),
                })
            }
            ScenarioParams::C { rho } => {
                positive("rho", rho)?;
                Ok(Self { profile: Profile::Exponential { rho }, tail: TailClass::ExponentialDecay(rho.recip()) })
            }
            ScenarioParams::D { delta, alpha } => {
                positive("delta", delta)?;
                positive("alpha", alpha)?;
                Ok(Self { profile: Profile::CarrierSense { delta, alpha }, tail: TailClass::NonDecaying })
            }
        }
    }

    /// Stationary profile `F = level`.
    pub fn constant(level: T) -> Result<Self> {
        if !(level > T::zero() && level <= T::one()) {
            return Err(Error::InvalidLevel(to_f64(level)));
        }
        Ok(Self { profile: Profile::Constant { level }, tail: TailClass::NonDecaying })
    }

    /// `F(r) = (1 + (r/knee)^2)^(-nu/2)`, decaying like `r^-nu`.
    pub fn power_tail(nu: T, knee: T) -> Result<Self> {
        if !(nu > T::zero() && nu.is_finite()) {
            return Err(Error::InvalidExponent(to_f64(nu)));
        }
        positive("knee", knee)?;
        Ok(Self { profile: Profile::PowerTail { nu, knee }, tail: TailClass::PowerDecay(nu) })
    }

    /// `F(r) = (1 + log(1 + r/knee))^(-p)` with `0 < p <= 1`: decays slower than any power.
    pub fn log_decay(p: T, knee: T) -> Result<Self> {
        if !(p > T::zero() && p <= T::one()) {
            return Err(Error::InvalidExponent(to_f64(p)));
        }
        positive("knee", knee)?;
        Ok(Self { profile: Profile::LogDecay { p, knee }, tail: TailClass::LogDecay(p) })
    }

    /// `F(r)`.
    pub fn eval(&self, r: T) -> T {
        let one = T::one();
        match self.profile {
            Profile::Constant { level } => level,
            Profile::PowerTail { nu, knee } => {
                let q = r / knee;
                (one + q * q).powf(-nu / lit(2.0))
            }
            Profile::Plateau(p) => p.eval(r),
            Profile::Hotspot { hot, base } => hot.eval(r) + base.eval(r),
            Profile::Exponential { rho } => (-r / rho).exp(),
            Profile::CarrierSense { delta, alpha } => -(-delta * r.powf(alpha)).exp_m1(),
            Profile::LogDecay { p, knee } => (one + (r / knee).ln_1p()).powf(-p),
        }
    }

    /// `f(r) = dF/dr`.
    pub fn deriv(&self, r: T) -> T {
        let one = T::one();
        match self.profile {
            Profile::Constant { .. } => T::zero(),
            Profile::PowerTail { nu, knee } => {
                let q = r / knee;
                -nu * r / (knee * knee) * (one + q * q).powf(-nu / lit(2.0) - one)
            }
            Profile::Plateau(p) => p.deriv(r),
            Profile::Hotspot { hot, base } => hot.deriv(r) + base.deriv(r),
            Profile::Exponential { rho } => -(-r / rho).exp() / rho,
            Profile::CarrierSense { delta, alpha } => {
                if r <= T::zero() {
                    // r^(alpha-1) at the origin
                    return if alpha < one {
                        T::infinity()
                    } else if alpha == one {
                        delta
                    } else {
                        T::zero()
                    };
                }
                let ra = r.powf(alpha);
                delta * alpha * ra / r * (-delta * ra).exp()
            }
            Profile::LogDecay { p, knee } => -p * (one + (r / knee).ln_1p()).powf(-p - one) / (knee + r),
        }
    }

    pub fn tail(&self) -> TailClass<T> {
        self.tail
    }

    /// `F(0)`.
    pub fn f_zero(&self) -> T {
        self.eval(T::zero())
    }

    /// `lim F(r)` as `r -> infinity`, read off the declared tail class.
    pub fn limit_at_infinity(&self) -> T {
        match (self.tail, self.profile) {
            (TailClass::NonDecaying, Profile::Constant { level }) => level,
            (TailClass::NonDecaying, _) => T::one(),
            _ => T::zero(),
        }
    }

    /// Radii where `F` is only once differentiable; always used as quadrature split points.
    pub fn knots(&self) -> Vec<T> {
        match self.profile {
            Profile::Plateau(p) => vec![p.r0, p.r1],
            Profile::Hotspot { hot, base } => {
                let mut k = vec![hot.r0, hot.r1, base.r0, base.r1];
                k.sort_by(|a, b| a.partial_cmp(b).expect("finite knots"));
                k.dedup();
                k
            }
            _ => Vec::new(),
        }
    }

    /// Characteristic length over which `F` changes appreciably.
    pub fn length_scale(&self) -> T {
        match self.profile {
            Profile::Constant { .. } => T::one(),
            Profile::PowerTail { knee, .. } | Profile::LogDecay { knee, .. } => knee,
            Profile::Plateau(p) => p.r1,
            Profile::Hotspot { hot, base } => hot.r1.max(base.r1),
            Profile::Exponential { rho } => rho,
            Profile::CarrierSense { delta, alpha } => delta.powf(-alpha.recip()),
        }
    }

    /// End of the support for compactly supported shapes.
    pub fn support_end(&self) -> Option<T> {
        match self.tail {
            TailClass::CompactSupport(end) => Some(end),
            _ => None,
        }
    }
}

/// JSON shape descriptor: `{"scenario": "...", "params": {...}}`.
///
/// Missing parameters fall back to the defaults of [`ShapeParams`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeDescriptor {
    pub scenario: ShapeKind,
    #[serde(default)]
    pub params: ShapeParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShapeKind {
    A,
    B,
    C,
    D,
    #[serde(rename = "constant")]
    Constant,
    #[serde(rename = "powerTail")]
    PowerTail,
    #[serde(rename = "logDecay")]
    LogDecay,
}

impl std::str::FromStr for ShapeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" | "a" => ShapeKind::A,
            "B" | "b" => ShapeKind::B,
            "C" | "c" => ShapeKind::C,
            "D" | "d" => ShapeKind::D,
            "constant" => ShapeKind::Constant,
            "powerTail" => ShapeKind::PowerTail,
            "logDecay" => ShapeKind::LogDecay,
            other => return Err(Error::InvalidConfig(format!("unknown scenario {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShapeParams {
    pub level: f64,
    /// Plateau end for `A` (default 500) or knee radius for `powerTail`/`logDecay` (default 1).
    pub r0: Option<f64>,
    pub r1: f64,
    pub hot_level: f64,
    pub hot_r0: f64,
    pub hot_r1: f64,
    pub base_level: f64,
    pub base_r0: f64,
    pub base_r1: f64,
    pub rho: f64,
    /// Sensing threshold in linear units; ignored when `delta_db` is given.
    pub delta: f64,
    pub delta_db: Option<f64>,
    pub alpha: f64,
    pub nu: f64,
    pub p: f64,
}

impl Default for ShapeParams {
    fn default() -> Self {
        Self {
            level: 1.0,
            r0: None,
            r1: 800.0,
            hot_level: 0.5,
            hot_r0: 20.0,
            hot_r1: 100.0,
            base_level: 0.5,
            base_r0: 500.0,
            base_r1: 800.0,
            rho: 100.0,
            delta: 1e-5,
            delta_db: None,
            alpha: 4.0,
            nu: 2.0,
            p: 0.5,
        }
    }
}

impl ShapeDescriptor {
    pub fn new(scenario: ShapeKind) -> Self {
        Self { scenario, params: ShapeParams::default() }.resolved()
    }

    /// Fills in the kind-dependent default of `r0`, so the descriptor echoes every value used.
    pub fn resolved(mut self) -> Self {
        if self.params.r0.is_none() {
            self.params.r0 = match self.scenario {
                ShapeKind::A => Some(500.0),
                ShapeKind::PowerTail | ShapeKind::LogDecay => Some(1.0),
                _ => None,
            };
        }
        self
    }

    pub fn build<T: Scalar>(&self) -> Result<ShapeFunction<T>> {
        let resolved = self.clone().resolved();
        let p = &resolved.params;
        let r0 = p.r0.unwrap_or(f64::NAN);
        let delta = p.delta_db.map(|db| 10f64.powf(db / 10.0)).unwrap_or(p.delta);
        match self.scenario {
            ShapeKind::A => ShapeFunction::scenario(ScenarioParams::A { r0: lit(r0), r1: lit(p.r1) }),
            ShapeKind::B => ShapeFunction::scenario(ScenarioParams::B {
                hot_level: lit(p.hot_level),
                hot_r0: lit(p.hot_r0),
                hot_r1: lit(p.hot_r1),
                base_level: lit(p.base_level),
                base_r0: lit(p.base_r0),
                base_r1: lit(p.base_r1),
            }),
            ShapeKind::C => ShapeFunction::scenario(ScenarioParams::C { rho: lit(p.rho) }),
            ShapeKind::D => ShapeFunction::scenario(ScenarioParams::D { delta: lit(delta), alpha: lit(p.alpha) }),
            ShapeKind::Constant => ShapeFunction::constant(lit(p.level)),
            ShapeKind::PowerTail => ShapeFunction::power_tail(lit(p.nu), lit(r0)),
            ShapeKind::LogDecay => ShapeFunction::log_decay(lit(p.p), lit(r0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scenario_c(rho: f64) -> ShapeFunction<f64> {
        ShapeFunction::scenario(ScenarioParams::C { rho }).unwrap()
    }

    fn all_shapes() -> Vec<ShapeFunction<f64>> {
        vec![
            ShapeFunction::constant(0.7).unwrap(),
            ShapeFunction::power_tail(1.5, 50.0).unwrap(),
            ShapeFunction::log_decay(0.5, 2.0).unwrap(),
            ShapeFunction::scenario(ScenarioParams::A { r0: 400.0, r1: 600.0 }).unwrap(),
            ShapeFunction::scenario(ScenarioParams::B {
                hot_level: 0.6,
                hot_r0: 10.0,
                hot_r1: 60.0,
                base_level: 0.4,
                base_r0: 300.0,
                base_r1: 500.0,
            })
            .unwrap(),
            scenario_c(100.0),
            ShapeFunction::scenario(ScenarioParams::D { delta: 1e-5, alpha: 4.0 }).unwrap(),
        ]
    }

    #[test]
    fn scenario_examples() {
        let c = scenario_c(100.0);
        assert_eq!(c.eval(0.0), 1.0);
        assert!(matches!(c.tail(), TailClass::ExponentialDecay(_)));

        let d = ShapeFunction::scenario(ScenarioParams::D { delta: 1e-5f64, alpha: 4.0 }).unwrap();
        assert_eq!(d.eval(0.0), 0.0);
        assert!((d.eval(1e3) - 1.0).abs() < 1e-12);

        let a = ShapeFunction::scenario(ScenarioParams::A { r0: 400.0f64, r1: 600.0 }).unwrap();
        assert_eq!(a.eval(200.0), 1.0);
        assert_eq!(a.eval(700.0), 0.0);
        assert!((a.eval(500.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn scenario_parameter_errors() {
        let bad_order = ShapeFunction::<f64>::scenario(ScenarioParams::A { r0: 600.0, r1: 400.0 });
        assert!(matches!(bad_order, Err(Error::InvalidScenarioParams(_))));
        let too_dense = ShapeFunction::<f64>::scenario(ScenarioParams::B {
            hot_level: 0.7,
            hot_r0: 10.0,
            hot_r1: 20.0,
            base_level: 0.4,
            base_r0: 100.0,
            base_r1: 200.0,
        });
        assert!(matches!(too_dense, Err(Error::InvalidScenarioParams(_))));
        assert!(ShapeFunction::<f64>::scenario(ScenarioParams::C { rho: 0.0 }).is_err());
    }

    #[test]
    fn constant_shape() {
        let s = ShapeFunction::constant(1.0).unwrap();
        assert_eq!(s.eval(123.4), 1.0);
        assert_eq!(s.tail(), TailClass::NonDecaying);
        assert_eq!(ShapeFunction::constant(0.5).unwrap().deriv(10.0), 0.0);
        assert!(matches!(ShapeFunction::constant(0.0), Err(Error::InvalidLevel(_))));
        assert!(matches!(ShapeFunction::constant(1.5), Err(Error::InvalidLevel(_))));
    }

    #[test]
    fn power_tail_shape() {
        let s = ShapeFunction::power_tail(2.0f64, 1.0).unwrap();
        assert_eq!(s.eval(0.0), 1.0);
        let expected = 1.0 / (1.0 + 1e6);
        assert!((s.eval(1e3) - expected).abs() / expected <= 1e-5);
        assert_eq!(ShapeFunction::power_tail(1.5, 50.0).unwrap().tail(), TailClass::PowerDecay(1.5));
        assert!(matches!(ShapeFunction::<f64>::power_tail(0.0, 1.0), Err(Error::InvalidExponent(_))));
        assert!(matches!(ShapeFunction::<f64>::power_tail(-1.0, 1.0), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn exponential_derivative_is_analytic() {
        let s = scenario_c(7.0);
        for r in [0.0, 0.5, 3.0, 40.0] {
            assert_eq!(s.deriv(r), -(-r / 7.0f64).exp() / 7.0);
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let tol = 1e-6;
        for s in all_shapes() {
            for &r in &[0.3, 1.0, 7.5, 33.0, 150.0, 420.0, 555.0, 2000.0] {
                // stay clear of plateau knots where the second derivative jumps
                if s.knots().iter().any(|k| (r - k).abs() < 1.0) {
                    continue;
                }
                let h = 1e-4 * r.max(1.0);
                let lhs = (s.eval(r + h) - s.eval(r - h) - 2.0 * h * s.deriv(r)).abs();
                assert!(lhs <= tol * h * h + tol * h, "{s:?} at r={r}: {lhs}");
            }
        }
    }

    #[test]
    fn tail_classification_consistent() {
        for s in all_shapes() {
            match s.tail() {
                TailClass::PowerDecay(nu) => {
                    let v: Vec<f64> = [1e3, 1e4, 1e5].iter().map(|&r: &f64| s.eval(r) * r.powf(nu)).collect();
                    for w in v.windows(2) {
                        assert!(((w[1] - w[0]) / w[0]).abs() < 0.2);
                    }
                    assert!(v[2] > 0.0);
                }
                TailClass::CompactSupport(end) => {
                    assert_eq!(s.eval(end), 0.0);
                    assert_eq!(s.eval(end * 2.0), 0.0);
                }
                TailClass::ExponentialDecay(rate) => {
                    let r = 50.0 / rate;
                    assert!(s.eval(r) < 1e-20);
                }
                TailClass::NonDecaying => assert!(s.eval(1e6) > 0.1),
                TailClass::LogDecay(p) => {
                    // F(r) * log(r)^p tends to one
                    let r: f64 = 1e12;
                    assert!((s.eval(r) * r.ln().powf(p) - 1.0).abs() < 0.1);
                }
            }
        }
    }

    #[test]
    fn monotone_scenarios() {
        let a = ShapeFunction::scenario(ScenarioParams::A { r0: 100.0, r1: 300.0 }).unwrap();
        let c = scenario_c(50.0);
        let d = ShapeFunction::scenario(ScenarioParams::D { delta: 1e-5, alpha: 4.0 }).unwrap();
        let grid: Vec<f64> = (0..2000).map(|i| i as f64 * 0.25).collect();
        for w in grid.windows(2) {
            assert!(a.eval(w[1]) <= a.eval(w[0]));
            assert!(c.eval(w[1]) <= c.eval(w[0]));
            assert!(d.eval(w[1]) >= d.eval(w[0]));
        }
    }

    #[test]
    fn complementary_cdf_interpretation() {
        // F(0) = 1 and f <= 0: 1 - F is a distribution function
        for s in [scenario_c(20.0), ShapeFunction::power_tail(1.0, 3.0).unwrap()] {
            assert_eq!(s.f_zero(), 1.0);
            let mut prev = 0.0;
            for i in 0..500 {
                let r = (i as f64 * 0.05).exp() - 1.0;
                assert!(s.deriv(r) <= 0.0);
                let cdf = 1.0 - s.eval(r);
                assert!(cdf >= prev && (0.0..=1.0).contains(&cdf));
                prev = cdf;
            }
            assert!(1.0 - s.eval(1e12) > 0.999);
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let json = r#"{"scenario":"constant","params":{"level":1}}"#;
        let d: ShapeDescriptor = serde_json::from_str(json).unwrap();
        let s = d.build::<f64>().unwrap();
        assert_eq!(s.eval(5.0), 1.0);

        let d: ShapeDescriptor = serde_json::from_str(r#"{"scenario":"D","params":{"delta_db":-50}}"#).unwrap();
        let s = d.build::<f64>().unwrap();
        let expected = 1.0 - (-1e-5 * 10f64.powi(4)).exp();
        assert!((s.eval(10.0) - expected).abs() < 1e-15);

        let d: ShapeDescriptor = serde_json::from_str(r#"{"scenario":"A","params":{"r0":500,"r1":800}}"#).unwrap();
        assert_eq!(d.build::<f64>().unwrap().support_end(), Some(800.0));
        assert!(serde_json::from_str::<ShapeDescriptor>(r#"{"scenario":"E"}"#).is_err());

        // an omitted knee means the same thing in JSON and by name
        let d: ShapeDescriptor = serde_json::from_str(r#"{"scenario":"powerTail","params":{"nu":3}}"#).unwrap();
        let by_name = ShapeDescriptor {
            params: ShapeParams { nu: 3.0, ..ShapeParams::default() },
            ..ShapeDescriptor::new(ShapeKind::PowerTail)
        };
        assert_eq!(d.build::<f64>().unwrap(), by_name.build::<f64>().unwrap());
        assert_eq!(d.resolved().params.r0, Some(1.0));
        let a: ShapeDescriptor = serde_json::from_str(r#"{"scenario":"A"}"#).unwrap();
        assert_eq!(a.build::<f64>().unwrap().support_end(), Some(800.0));
    }

    #[test]
    fn single_precision_shapes() {
        let s = ShapeFunction::<f32>::scenario(ScenarioParams::C { rho: 10.0 }).unwrap();
        assert!((s.eval(10.0) - (-1.0f32).exp()).abs() < 1e-7);
    }

    proptest! {
        #[test]
        fn shapes_map_into_unit_interval(r in 0.0f64..1e7) {
            for s in all_shapes() {
                let v = s.eval(r);
                prop_assert!((0.0..=1.0).contains(&v), "{:?} at {}: {}", s, r, v);
            }
        }
    }
}
