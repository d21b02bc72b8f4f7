//! Numerical building blocks shared by the solvers: a Dormand–Prince 5(4)
//! stepper with dense output, Brent's bracketed root finder and adaptive
//! Gauss–Kronrod quadrature.

pub mod quad;
pub mod rk;
pub mod roots;

pub use quad::{integrate, QuadOptions};
pub use roots::{brent, BrentOptions};
