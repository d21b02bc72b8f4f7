//! Radial model profiles on constant-curvature warped products, their
//! boundary-response curves, and the scalar comparison bounds built on them.
//!
//! The crate is organized bottom-up: [`spaceform`] holds the warping
//! functions, [`radial`] integrates the model ODE, [`tau`] turns profiles into
//! boundary-response curves, and [`estimates`] evaluates the bounds.
//! [`closed_forms`] contains analytic solutions used as validation oracles.

// Comparisons are written negated so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_forms;
pub mod error;
pub mod estimates;
pub mod export;
pub mod isoparametric;
pub mod nonlinearity;
pub mod numerics;
pub mod radial;
pub mod selftest;
pub mod spaceform;
pub mod tau;

pub use error::{Error, Result};
pub use estimates::{Branch, ComparisonPair};
pub use nonlinearity::{Nonlinearity, SampleGrid};
pub use radial::{solve_generic, solve_profile, CauchyData, ModelProfile, SolveOptions};
pub use spaceform::SpaceForm;
