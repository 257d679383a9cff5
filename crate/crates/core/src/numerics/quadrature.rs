//! Globally adaptive Gauss-Kronrod (10/21) quadrature with semi-infinite support.
//!
//! Intervals are bisected in order of largest error estimate until the summed estimate drops
//! below `max(tol, tol * |value|)` or the evaluation budget runs out. A semi-infinite piece
//! `[a, inf)` is mapped onto `(0, 1/(1+a)]` with `u = 1/(1+r)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};
use crate::shapes::{ShapeFunction, TailClass};

/// Evaluation budget shared by all adaptive integrations.
pub const MAX_EVALUATIONS: usize = 1_000_000;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980223048,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult<T> {
    pub value: T,
    pub abs_error: T,
    pub converged: bool,
    pub evaluations: usize,
}

impl<T: Scalar> IntegralResult<T> {
    /// Turns an unconverged result into [`Error::NonConvergence`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence {
                value: self.value.to_f64().unwrap_or(f64::NAN),
                abs_error: self.abs_error.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    pub fn scaled(self, k: T) -> Self {
        Self { value: self.value * k, abs_error: self.abs_error * k.abs(), ..self }
    }
}

/// Growth of a kernel as `r -> infinity`, needed to decide integrability against a shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelGrowth {
    Bounded,
    Logarithmic,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Map {
    Identity,
    /// `r = 1/u - 1`, `dr = -du/u^2`
    Reciprocal,
}

struct Piece<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    map: Map,
}

impl<T: Scalar> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Scalar> Eq for Piece<T> {}
impl<T: Scalar> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Scalar> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn eval_mapped<T: Scalar, F: Fn(T) -> T>(f: &F, map: Map, x: T) -> T {
    match map {
        Map::Identity => f(x),
        Map::Reciprocal => {
            let r = x.recip() - T::one();
            f(r) / (x * x)
        }
    }
}

/// One 21-point Kronrod estimate with the QUADPACK error heuristic.
fn gk21<T: Scalar, F: Fn(T) -> T>(f: &F, map: Map, a: T, b: T) -> (T, T) {
    let half: T = lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let fc = eval_mapped(f, map, center);
    let mut res_k = fc * lit(WGK[10]);
    let mut res_g = T::zero();
    let mut res_abs = res_k.abs();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = half_len * lit(XGK[j]);
        let f1 = eval_mapped(f, map, center - dx);
        let f2 = eval_mapped(f, map, center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let wk: T = lit(WGK[j]);
        res_k = res_k + wk * (f1 + f2);
        res_abs = res_abs + wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + lit::<T>(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = res_k * half;
    let mut res_asc = lit::<T>(WGK[10]) * (fc - mean).abs();
    for j in 0..10 {
        res_asc = res_asc + lit::<T>(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let hl = half_len.abs();
    let value = res_k * half_len;
    res_abs = res_abs * hl;
    res_asc = res_asc * hl;
    let mut err = ((res_k - res_g) * half_len).abs();
    if res_asc != T::zero() && err != T::zero() {
        let scale = (lit::<T>(200.0) * err / res_asc).powf(lit(1.5));
        err = if scale < T::one() { res_asc * scale } else { res_asc };
    }
    let eps = T::epsilon();
    if res_abs > T::min_positive_value() / (lit::<T>(50.0) * eps) {
        err = err.max(lit::<T>(50.0) * eps * res_abs);
    }
    (value, err)
}

fn run<T: Scalar, F: Fn(T) -> T>(f: &F, pieces: Vec<(T, T, Map)>, tol: T, max_evals: usize) -> IntegralResult<T> {
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for (a, b, map) in pieces {
        if a == b {
            continue;
        }
        let (value, error) = gk21(f, map, a, b);
        evaluations += 21;
        heap.push(Piece { a, b, value, error, map });
    }
    let totals =
        |heap: &BinaryHeap<Piece<T>>| heap.iter().fold((T::zero(), T::zero()), |(v, e), p| (v + p.value, e + p.error));
    let (mut value, mut error) = totals(&heap);
    let mut converged = false;
    let mut since_refresh = 0;
    loop {
        if !value.is_finite() || !error.is_finite() {
            break;
        }
        if error <= tol.max(tol * value.abs()) {
            converged = true;
            break;
        }
        if evaluations + 42 > max_evals {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = lit::<T>(0.5) * (worst.a + worst.b);
        let width = (worst.b - worst.a).abs();
        if width <= lit::<T>(100.0) * T::epsilon() * (worst.a.abs() + worst.b.abs()) || mid == worst.a || mid == worst.b
        {
            // cannot be refined further
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk21(f, worst.map, worst.a, mid);
        let (v2, e2) = gk21(f, worst.map, mid, worst.b);
        evaluations += 42;
        value = value - worst.value + v1 + v2;
        error = error - worst.error + e1 + e2;
        heap.push(Piece { a: worst.a, b: mid, value: v1, error: e1, map: worst.map });
        heap.push(Piece { a: mid, b: worst.b, value: v2, error: e2, map: worst.map });
        since_refresh += 1;
        if since_refresh == 64 {
            // incremental updates drift; resynchronise
            (value, error) = totals(&heap);
            since_refresh = 0;
        }
    }
    let (value_sum, error_sum) = totals(&heap);
    IntegralResult {
        value: value_sum,
        abs_error: error_sum,
        converged: converged && error_sum.is_finite(),
        evaluations,
    }
}

fn sorted_points<T: Scalar>(points: &[T]) -> Vec<T> {
    let mut p: Vec<T> = points.iter().copied().filter(|x| x.is_finite()).collect();
    p.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    p.dedup();
    p
}

/// `int_a^b f`.
pub fn integrate<T: Scalar, F: Fn(T) -> T>(f: F, a: T, b: T, tol: T) -> IntegralResult<T> {
    run(&f, vec![(a, b, Map::Identity)], tol, MAX_EVALUATIONS)
}

/// Integral over `[min(points), max(points)]`, with every point used as an initial split.
pub fn integrate_with_breaks<T: Scalar, F: Fn(T) -> T>(f: F, points: &[T], tol: T) -> IntegralResult<T> {
    let p = sorted_points(points);
    let pieces = p.windows(2).map(|w| (w[0], w[1], Map::Identity)).collect();
    run(&f, pieces, tol, MAX_EVALUATIONS)
}

/// `int_{min(points)}^inf f`, splitting at every point; the last point starts the mapped tail.
pub fn integrate_to_infinity<T: Scalar, F: Fn(T) -> T>(f: F, points: &[T], tol: T) -> IntegralResult<T> {
    let p = sorted_points(points);
    assert!(!p.is_empty(), "integrate_to_infinity needs a lower limit");
    let last = *p.last().expect("non-empty");
    assert!(last > -T::one(), "tail map needs lower limit above -1");
    let mut pieces: Vec<_> = p.windows(2).map(|w| (w[0], w[1], Map::Identity)).collect();
    pieces.push((T::zero(), (T::one() + last).recip(), Map::Reciprocal));
    run(&f, pieces, tol, MAX_EVALUATIONS)
}

/// Radii used to split `[0, inf)` for integrals weighted by `shape`'s derivative.
pub(crate) fn radial_breaks<T: Scalar>(shape: &ShapeFunction<T>, extra: &[T]) -> (Vec<T>, bool) {
    let mut pts = vec![T::zero()];
    pts.extend(shape.knots());
    pts.extend(extra.iter().copied().filter(|x| *x > T::zero() && x.is_finite()));
    match shape.support_end() {
        Some(end) => {
            pts.retain(|x| *x <= end);
            pts.push(end);
            (sorted_points(&pts), false)
        }
        None => {
            let top = pts.iter().copied().fold(T::zero(), T::max);
            let knee = shape.length_scale().max(top);
            // split the body geometrically so each piece sees a comparable dynamic range
            let mut r = knee;
            let floor = knee * lit(1e-4);
            while r > floor {
                pts.push(r);
                r = r / lit(8.0);
            }
            (sorted_points(&pts), true)
        }
    }
}

/// `int_0^inf weight.deriv(r) * kernel(r) dr` with split points at shape knots and
/// a mapped tail beyond the shape's length scale.
///
/// Returns [`Error::DivergentIntegral`] when a logarithmically growing kernel meets a
/// shape that does not decay at least polynomially.
pub fn integrate_semi_infinite<T: Scalar, K: Fn(T) -> T>(
    kernel: K,
    growth: KernelGrowth,
    weight: &ShapeFunction<T>,
    tol: T,
) -> Result<IntegralResult<T>> {
    integrate_semi_infinite_with_breaks(kernel, growth, weight, &[], tol)
}

/// [`integrate_semi_infinite`] with caller-supplied additional split points.
pub fn integrate_semi_infinite_with_breaks<T: Scalar, K: Fn(T) -> T>(
    kernel: K,
    growth: KernelGrowth,
    weight: &ShapeFunction<T>,
    extra_breaks: &[T],
    tol: T,
) -> Result<IntegralResult<T>> {
    if !(tol > T::zero()) {
        return Err(Error::DomainError("tolerance must be positive".into()));
    }
    if growth == KernelGrowth::Logarithmic && matches!(weight.tail(), TailClass::NonDecaying | TailClass::LogDecay(_)) {
        return Err(Error::DivergentIntegral(format!(
            "shape tail {:?} decays too slowly for a logarithmically growing kernel",
            weight.tail()
        )));
    }
    let integrand = |r: T| {
        let w = weight.deriv(r);
        if w == T::zero() {
            T::zero()
        } else {
            w * kernel(r)
        }
    };
    let (points, infinite) = radial_breaks(weight, extra_breaks);
    Ok(if infinite {
        integrate_to_infinity(integrand, &points, tol)
    } else {
        integrate_with_breaks(integrand, &points, tol)
    })
}
