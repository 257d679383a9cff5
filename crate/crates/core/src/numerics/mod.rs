//! Special kernels and adaptive quadrature.

pub mod kernels;
pub mod quadrature;

pub use kernels::{angular_closed_form, arctan_kernel, asinh_kernel, epsilon_origin, kappa, log_kernel, ComplexValue};
pub use quadrature::{
    integrate, integrate_semi_infinite, integrate_semi_infinite_with_breaks, integrate_to_infinity,
    integrate_with_breaks, IntegralResult, KernelGrowth, MAX_EVALUATIONS,
};
