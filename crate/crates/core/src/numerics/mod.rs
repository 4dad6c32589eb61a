//! Small numerical kernels: special functions, root bracketing, quadrature,
//! dense linear solves and explicit Runge–Kutta integrators.

pub mod bessel;
pub mod linalg;
pub mod ode;
pub mod quad;
pub mod roots;
