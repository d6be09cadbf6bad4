//! Numerical kernels: Gauss-Legendre quadrature, adaptive panels, cumulative
//! integrals, an embedded Runge-Kutta 5(4) integrator with event detection,
//! Hermite splines and bracketed root finding.

pub mod ode;
pub mod quadrature;
pub mod roots;
pub mod spline;

pub use ode::{integrate, integrate_until, EventDirection, OdeOptions, Trajectory};
pub use quadrature::{gl16, integrate_adaptive, CumulativeIntegral, VectorValue};
pub use roots::{bisect, brent};
pub use spline::HermiteSpline;
