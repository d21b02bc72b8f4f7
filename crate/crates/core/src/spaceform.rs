//! Closed-form radial geometry of the constant-curvature model spaces.
//!
//! A [`SpaceForm`] carries the dimension `n` and the curvature bound `k`; the
//! warping function `s_k` and its derivative fix the metric `dr² + s_k(r)² g_F`
//! of every warped-product model used elsewhere in the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this value of `|k| r²` the warping function is evaluated by its
/// Taylor series; the trigonometric forms lose digits as `k → 0`.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Ambient data of a model manifold: dimension and curvature bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceForm {
    n: u32,
    k: f64,
    r_bar: f64,
}

impl SpaceForm {
    pub fn new(n: u32, k: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("dimension n = {n} must be at least 2")));
        }
        if !k.is_finite() {
            return Err(Error::InvalidParameter(format!("curvature k = {k} must be finite")));
        }
        let r_bar = if k > 0.0 { std::f64::consts::PI / k.sqrt() } else { f64::INFINITY };
        Ok(Self { n, k, r_bar })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> f64 {
        f64::from(self.n)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Right endpoint of the radial interval: `π/√k` for `k > 0`, `+∞` otherwise.
    pub fn r_bar(&self) -> f64 {
        self.r_bar
    }

    pub fn is_compact(&self) -> bool {
        self.k > 0.0
    }

    fn check_range(&self, r: f64) -> Result<()> {
        if !(r >= 0.0) {
            return Err(Error::Domain(format!("radius {r} must be non-negative")));
        }
        if r > self.r_bar {
            return Err(Error::Domain(format!("radius {r} exceeds r_bar = {}", self.r_bar)));
        }
        Ok(())
    }

    /// Warping function `s_k(r)`.
    pub fn s_k(&self, r: f64) -> Result<f64> {
        self.check_range(r)?;
        if self.k > 0.0 && r == self.r_bar {
            return Ok(0.0);
        }
        Ok(self.s_k_unchecked(r))
    }

    /// Derivative `s_k'(r)` (cos / 1 / cosh type).
    pub fn ds_k(&self, r: f64) -> Result<f64> {
        self.check_range(r)?;
        Ok(self.ds_k_unchecked(r))
    }

    /// `s_k` without range checks, for hot loops that already validated `r`.
    pub(crate) fn s_k_unchecked(&self, r: f64) -> f64 {
        let k = self.k;
        let x = k * r * r;
        if x.abs() < SERIES_THRESHOLD {
            r * (1.0 - x / 6.0 + x * x / 120.0)
        } else if k > 0.0 {
            let a = k.sqrt();
            (a * r).sin() / a
        } else {
            let a = (-k).sqrt();
            (a * r).sinh() / a
        }
    }

    pub(crate) fn ds_k_unchecked(&self, r: f64) -> f64 {
        let k = self.k;
        let x = k * r * r;
        if x.abs() < SERIES_THRESHOLD {
            1.0 - x / 2.0 + x * x / 24.0
        } else if k > 0.0 {
            (k.sqrt() * r).cos()
        } else {
            ((-k).sqrt() * r).cosh()
        }
    }

    pub(crate) fn cot_k_unchecked(&self, r: f64) -> f64 {
        self.ds_k_unchecked(r) / self.s_k_unchecked(r)
    }

    /// `cot_k(r) = s_k'(r) / s_k(r)`, singular at `r = 0` (and at `r̄` when `k > 0`).
    pub fn cot_k(&self, r: f64) -> Result<f64> {
        self.check_range(r)?;
        if r == 0.0 {
            return Err(Error::Singularity { r, what: "cot_k has a pole at the origin" });
        }
        if self.k > 0.0 && r == self.r_bar {
            return Err(Error::Singularity { r, what: "cot_k has a pole at r_bar" });
        }
        Ok(self.cot_k_unchecked(r))
    }

    /// `tan_k(r) = s_k(r) / s_k'(r)`; `tan_k(0) = 0`, singular at `r̄/2` for `k > 0`.
    pub fn tan_k(&self, r: f64) -> Result<f64> {
        self.check_range(r)?;
        if self.k > 0.0 {
            if r >= self.r_bar {
                return Err(Error::Domain(format!("tan_k needs r < r_bar, got {r}")));
            }
            let half = 0.5 * self.r_bar;
            if (r - half).abs() <= 4.0 * f64::EPSILON * self.r_bar {
                return Err(Error::Singularity { r, what: "tan_k has a pole at r_bar/2" });
            }
        }
        Ok(self.s_k_unchecked(r) / self.ds_k_unchecked(r))
    }

    /// Volume-element integrand `s_k(r)^(n-1)` of the model.
    pub fn volume_integrand(&self, r: f64) -> Result<f64> {
        Ok(self.s_k(r)?.powi(self.n as i32 - 1))
    }

    /// Radial drift coefficient `(n-1) cot_k(r)` of the model Laplacian.
    pub fn radial_coefficient(&self, r: f64) -> f64 {
        (self.dim() - 1.0) * self.cot_k_unchecked(r)
    }
}
