//! Special functions and quadrature.

mod bessel;
mod quadrature;
mod sphere;

pub use bessel::bessel_j;
pub(crate) use bessel::bessel_j012;
pub use quadrature::{
    integrate_1d, Bundle, Integrator, Quadrable, QuadratureRule, DEFAULT_ABS_TOL, DEFAULT_REL_TOL,
    MAX_ORDER, MIN_ORDER,
};
pub use sphere::{SphereIntegrator, SpherePoint};
