//! Interference statistics for wireless networks whose interferers form an isotropic,
//! generally non-stationary Poisson point process.
//!
//! The library computes location-dependent mean interference, Laplace transforms, Rayleigh
//! outage probabilities, tail bounds and throughput metrics, and ships a Monte-Carlo engine
//! that samples the same process as an independent check.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*F64` aliases below are the
//! double-precision instantiations used by the CLI.

// `!(x > 0)` style guards are deliberate: they reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod applications;
pub mod bounds;
pub mod error;
pub mod mcsim;
pub mod numerics;
pub mod outage;
pub mod scalar;
pub mod shapes;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type ShapeF64 = shapes::ShapeFunction<f64>;
pub type ShapeF32 = shapes::ShapeFunction<f32>;
pub type IntegralResultF64 = numerics::IntegralResult<f64>;
pub type ChannelF64 = analytic::ChannelModel<f64>;
pub type LinkF64 = analytic::LinkConfig<f64>;
pub type RegionF64 = bounds::RadialRegion<f64>;
pub type FhDsGainF64 = applications::FhDsGain<f64>;
