//! Special functions and quadrature backing the trace-moment closed forms.

mod bessel;
mod quadrature;

pub use bessel::{bessel_j0, j0_large_argument, j0_power_series, BRANCH_SWITCH};
pub use quadrature::{
    gauss_legendre, integrate, weighted_integral_with, weighted_j0_integral, QuadratureScheme,
    QuadratureSpec,
};
