//! Nonlinearities `f` of the semilinear problem `Δu + f(u) = 0`, together with
//! the sampled predicates that decide which comparison statements apply.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaceform::SpaceForm;

/// Default number of Chebyshev sample points used by the condition checks.
pub const DEFAULT_GRID_POINTS: usize = 2049;

/// Parameterized families. Parameters are stored verbatim so that evaluation
/// is reproducible bit for bit from a descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `n k x + 1`
    SerrinFk { n: u32, k: f64 },
    /// `λ x + β`
    Affine { lambda: f64, beta: f64 },
    /// `x |x|^p`
    LaneEmden { p: f64 },
    /// `x − x |x|^(p−1)`
    AllenCahn { p: f64 },
    /// `K e^(2x)`
    Bratu { k: f64 },
    /// constant `c`
    Constant { c: f64 },
    /// `Σ a_i x^i`, coefficients in ascending degree.
    Polynomial { coeffs: Vec<f64> },
}

/// Half-open interval `[lo, hi)` on which `f` is considered; `hi` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi > lo) {
            return Err(Error::InvalidParameter(format!("interval [{lo}, {hi}) is empty or malformed")));
        }
        if lo != 0.0 && hi != 0.0 {
            return Err(Error::InvalidParameter(format!("interval [{lo}, {hi}) must have 0 as an endpoint")));
        }
        Ok(Self { lo, hi })
    }

    pub fn positive() -> Self {
        Self { lo: 0.0, hi: f64::INFINITY }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x < self.hi
    }
}

/// An evaluatable nonlinearity with optional analytic derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Nonlinearity {
    #[serde(flatten)]
    family: Family,
    #[serde(rename = "I_f")]
    interval: Interval,
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    analytic_derivative: bool,
}

fn default_true() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("parameter {name} = {v} must be finite")))
    }
}

impl Nonlinearity {
    /// Builds a nonlinearity from a family with its default interval.
    pub fn from_family(family: Family) -> Result<Self> {
        let interval = match &family {
            Family::SerrinFk { n, k } => {
                if *n < 2 {
                    return Err(Error::InvalidParameter(format!("serrin_fk needs n >= 2, got {n}")));
                }
                check_finite("k", *k)?;
                if *k < 0.0 {
                    Interval { lo: 0.0, hi: 1.0 / (f64::from(*n) * -k) }
                } else {
                    Interval::positive()
                }
            }
            Family::Affine { lambda, beta } => {
                check_finite("lambda", *lambda)?;
                check_finite("beta", *beta)?;
                if *lambda < 0.0 && *beta > 0.0 {
                    Interval { lo: 0.0, hi: -beta / lambda }
                } else {
                    Interval::positive()
                }
            }
            Family::LaneEmden { p } => {
                check_finite("p", *p)?;
                if *p < 0.0 {
                    return Err(Error::InvalidParameter(format!("lane_emden needs p >= 0, got {p}")));
                }
                Interval::positive()
            }
            Family::AllenCahn { p } => {
                check_finite("p", *p)?;
                if *p <= 1.0 {
                    return Err(Error::InvalidParameter(format!("allen_cahn needs p > 1, got {p}")));
                }
                Interval { lo: 0.0, hi: 1.0 }
            }
            Family::Bratu { k } => {
                check_finite("K", *k)?;
                Interval::positive()
            }
            Family::Constant { c } => {
                check_finite("c", *c)?;
                Interval::positive()
            }
            Family::Polynomial { coeffs } => {
                if coeffs.is_empty() {
                    return Err(Error::InvalidParameter("polynomial needs at least one coefficient".into()));
                }
                for (i, a) in coeffs.iter().enumerate() {
                    check_finite(&format!("a{i}"), *a)?;
                }
                Interval::positive()
            }
        };
        Ok(Self { family, interval, analytic_derivative: true })
    }

    pub fn serrin_fk(n: u32, k: f64) -> Result<Self> {
        Self::from_family(Family::SerrinFk { n, k })
    }

    pub fn affine(lambda: f64, beta: f64) -> Result<Self> {
        Self::from_family(Family::Affine { lambda, beta })
    }

    pub fn lane_emden(p: f64) -> Result<Self> {
        Self::from_family(Family::LaneEmden { p })
    }

    pub fn allen_cahn(p: f64) -> Result<Self> {
        Self::from_family(Family::AllenCahn { p })
    }

    pub fn bratu(k: f64) -> Result<Self> {
        Self::from_family(Family::Bratu { k })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::from_family(Family::Constant { c })
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        Self::from_family(Family::Polynomial { coeffs })
    }

    /// Replaces the interval `I_f`.
    pub fn with_interval(mut self, interval: Interval) -> Self {
        self.interval = interval;
        self
    }

    /// Hides the analytic derivative so that callers fall back to finite differences.
    pub fn without_derivative(mut self) -> Self {
        self.analytic_derivative = false;
        self
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            Family::SerrinFk { .. } => "serrin_fk",
            Family::Affine { .. } => "affine",
            Family::LaneEmden { .. } => "lane_emden",
            Family::AllenCahn { .. } => "allen_cahn",
            Family::Bratu { .. } => "bratu",
            Family::Constant { .. } => "constant",
            Family::Polynomial { .. } => "polynomial",
        }
    }

    /// Named parameters in declaration order.
    pub fn params(&self) -> Vec<(String, f64)> {
        match &self.family {
            Family::SerrinFk { n, k } => vec![("n".into(), f64::from(*n)), ("k".into(), *k)],
            Family::Affine { lambda, beta } => vec![("lambda".into(), *lambda), ("beta".into(), *beta)],
            Family::LaneEmden { p } | Family::AllenCahn { p } => vec![("p".into(), *p)],
            Family::Bratu { k } => vec![("K".into(), *k)],
            Family::Constant { c } => vec![("c".into(), *c)],
            Family::Polynomial { coeffs } => {
                coeffs.iter().enumerate().map(|(i, a)| (format!("a{i}"), *a)).collect()
            }
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.family {
            Family::SerrinFk { n, k } => f64::from(*n) * k * x + 1.0,
            Family::Affine { lambda, beta } => lambda * x + beta,
            Family::LaneEmden { p } => x * x.abs().powf(*p),
            Family::AllenCahn { p } => x - x * x.abs().powf(p - 1.0),
            Family::Bratu { k } => k * (2.0 * x).exp(),
            Family::Constant { c } => *c,
            Family::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, a| acc * x + a),
        }
    }

    pub fn has_derivative(&self) -> bool {
        self.analytic_derivative
    }

    /// Analytic derivative, or `None` if it has been hidden.
    pub fn deriv(&self, x: f64) -> Option<f64> {
        if !self.analytic_derivative {
            return None;
        }
        Some(match &self.family {
            Family::SerrinFk { n, k } => f64::from(*n) * k,
            Family::Affine { lambda, .. } => *lambda,
            Family::LaneEmden { p } => (p + 1.0) * x.abs().powf(*p),
            Family::AllenCahn { p } => 1.0 - p * x.abs().powf(p - 1.0),
            Family::Bratu { k } => 2.0 * k * (2.0 * x).exp(),
            Family::Constant { .. } => 0.0,
            Family::Polynomial { coeffs } => coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (i, a)| acc * x + i as f64 * a),
        })
    }

    /// Fourth-order central difference of `eval`.
    pub fn deriv_fd(&self, x: f64) -> f64 {
        let h = 1e-3 * x.abs().max(1.0);
        (self.eval(x - 2.0 * h) - 8.0 * self.eval(x - h) + 8.0 * self.eval(x + h) - self.eval(x + 2.0 * h))
            / (12.0 * h)
    }

    /// Analytic derivative when available, otherwise the finite-difference
    /// value if `fallback` is set.
    pub fn deriv_or_fd(&self, x: f64, fallback: bool) -> Result<f64> {
        match self.deriv(x) {
            Some(d) => Ok(d),
            None if fallback => Ok(self.deriv_fd(x)),
            None => Err(Error::MissingDerivative(self.name().into())),
        }
    }

    /// JSON descriptor `{family, params, I_f}`.
    pub fn descriptor(&self) -> serde_json::Value {
        let params: serde_json::Map<String, serde_json::Value> =
            self.params().into_iter().map(|(k, v)| (k, serde_json::json!(v))).collect();
        let hi = if self.interval.hi.is_finite() {
            serde_json::json!(self.interval.hi)
        } else {
            serde_json::json!("inf")
        };
        serde_json::json!({
            "family": self.name(),
            "params": params,
            "I_f": [self.interval.lo, hi],
        })
    }
}

impl fmt::Display for Nonlinearity {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(|(_, v)| format!("{v}")).collect();
        write!(out, "{}:{}", self.name(), params.join(","))
    }
}

/// Parses `family:p1,p2,...`, e.g. `constant:1`, `affine:-0.25,2.5`,
/// `serrin_fk:3,-1`, `polynomial:1,0,-1`.
impl FromStr for Nonlinearity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<f64> = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidParameter(format!("cannot parse parameter '{t}' in '{s}'")))
                })
                .collect::<Result<_>>()?
        };
        let want = |count: usize| -> Result<()> {
            if nums.len() == count {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "nonlinearity '{name}' takes {count} parameter(s), got {}",
                    nums.len()
                )))
            }
        };
        let family = match name.trim().replace('-', "_").as_str() {
            "serrin_fk" | "serrin" => {
                want(2)?;
                if nums[0].fract() != 0.0 || nums[0] < 2.0 {
                    return Err(Error::InvalidParameter(format!("serrin_fk dimension {} is not an integer >= 2", nums[0])));
                }
                Family::SerrinFk { n: nums[0] as u32, k: nums[1] }
            }
            "affine" => {
                want(2)?;
                Family::Affine { lambda: nums[0], beta: nums[1] }
            }
            "lane_emden" => {
                want(1)?;
                Family::LaneEmden { p: nums[0] }
            }
            "allen_cahn" => {
                want(1)?;
                Family::AllenCahn { p: nums[0] }
            }
            "bratu" => {
                want(1)?;
                Family::Bratu { k: nums[0] }
            }
            "constant" => {
                want(1)?;
                Family::Constant { c: nums[0] }
            }
            "polynomial" | "poly" => Family::Polynomial { coeffs: nums },
            other => return Err(Error::InvalidParameter(format!("unknown nonlinearity family '{other}'"))),
        };
        Nonlinearity::from_family(family)
    }
}

/// Sample points at which the conditions on `f` are tested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    points: Vec<f64>,
}

impl SampleGrid {
    /// `count` Chebyshev–Gauss points of the open interval `(lo, hi)`, ascending.
    pub fn chebyshev(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::EmptyGrid);
        }
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::InvalidParameter(format!("grid interval ({lo}, {hi}) must be finite and non-empty")));
        }
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let points = (0..count)
            .map(|j| {
                let theta = std::f64::consts::PI * (2.0 * (count - 1 - j) as f64 + 1.0) / (2.0 * count as f64);
                mid + half * theta.cos()
            })
            .collect();
        Ok(Self { points })
    }

    /// Default grid over `I_f ∩ [0, m_max]`.
    pub fn for_nonlinearity(f: &Nonlinearity, m_max: f64) -> Result<Self> {
        let iv = f.interval();
        let hi = iv.hi.min(m_max);
        let lo = iv.lo.max(0.0).min(hi);
        Self::chebyshev(lo, hi, DEFAULT_GRID_POINTS)
    }

    pub fn from_points(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("grid points must be finite".into()));
        }
        points.sort_by(f64::total_cmp);
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lo(&self) -> f64 {
        self.points[0]
    }

    pub fn hi(&self) -> f64 {
        self.points[self.points.len() - 1]
    }
}

/// Outcome of a sampled condition check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub holds: bool,
    /// First grid point (in ascending order) at which the condition fails.
    pub witness: Option<f64>,
    pub grid_points: usize,
    pub grid_lo: f64,
    pub grid_hi: f64,
}

impl ConditionReport {
    fn from_scan(grid: &SampleGrid, witness: Option<f64>) -> Self {
        Self { holds: witness.is_none(), witness, grid_points: grid.len(), grid_lo: grid.lo(), grid_hi: grid.hi() }
    }
}

/// Options for the derivative-based checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub tol: f64,
    pub fd_fallback: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { tol: 1e-10, fd_fallback: true }
    }
}

fn nonempty(grid: &SampleGrid) -> Result<()> {
    if grid.is_empty() {
        Err(Error::EmptyGrid)
    } else {
        Ok(())
    }
}

/// `f > 0` and `f(x) ≥ nkx + f(0)` on the grid, plus `f(0) > 0` when `k ≤ 0`.
pub fn check_standard_conditions(f: &Nonlinearity, sf: &SpaceForm, grid: &SampleGrid) -> Result<ConditionReport> {
    nonempty(grid)?;
    let f0 = f.eval(0.0);
    if sf.k() <= 0.0 && !(f0 > 0.0) {
        return Ok(ConditionReport::from_scan(grid, Some(0.0)));
    }
    let nk = sf.dim() * sf.k();
    let witness = grid.points().iter().copied().find(|&x| {
        let fx = f.eval(x);
        let rhs = nk * x + f0;
        !(fx > 0.0) || fx < rhs - 1e-12 * (1.0 + rhs.abs())
    });
    Ok(ConditionReport::from_scan(grid, witness))
}

/// `f'(x) ≥ nk − tol` on the grid.
pub fn check_derivative_bound(
    f: &Nonlinearity,
    sf: &SpaceForm,
    grid: &SampleGrid,
    opts: CheckOptions,
) -> Result<ConditionReport> {
    nonempty(grid)?;
    let nk = sf.dim() * sf.k();
    for &x in grid.points() {
        if f.deriv_or_fd(x, opts.fd_fallback)? < nk - opts.tol {
            return Ok(ConditionReport::from_scan(grid, Some(x)));
        }
    }
    Ok(ConditionReport::from_scan(grid, None))
}

/// `f(x) − x f'(x) ≥ −tol` on the grid.
pub fn check_tau_monotonicity_condition(
    f: &Nonlinearity,
    grid: &SampleGrid,
    opts: CheckOptions,
) -> Result<ConditionReport> {
    nonempty(grid)?;
    for &x in grid.points() {
        if f.eval(x) - x * f.deriv_or_fd(x, opts.fd_fallback)? < -opts.tol {
            return Ok(ConditionReport::from_scan(grid, Some(x)));
        }
    }
    Ok(ConditionReport::from_scan(grid, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid01() -> SampleGrid {
        SampleGrid::chebyshev(0.0, 1.0, 257).unwrap()
    }

    #[test]
    fn chebyshev_grid_is_open_sorted_and_symmetric() {
        let g = SampleGrid::chebyshev(0.0, 2.0, 9).unwrap();
        let p = g.points();
        assert!(p[0] > 0.0 && p[8] < 2.0);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        assert!((p[4] - 1.0).abs() < 1e-15);
        assert!((p[0] + p[8] - 2.0).abs() < 1e-15);
        assert_eq!(SampleGrid::chebyshev(0.0, 1.0, 0), Err(Error::EmptyGrid));
    }

    #[test]
    fn serrin_family_meets_standard_conditions_with_equality() {
        let sf = SpaceForm::new(3, 1.0).unwrap();
        let f = Nonlinearity::serrin_fk(3, 1.0).unwrap();
        assert!(check_standard_conditions(&f, &sf, &grid01()).unwrap().holds);
    }

    #[test]
    fn zero_is_not_admissible_in_flat_space() {
        let sf = SpaceForm::new(2, 0.0).unwrap();
        let f = Nonlinearity::constant(0.0).unwrap();
        let rep = check_standard_conditions(&f, &sf, &grid01()).unwrap();
        assert!(!rep.holds);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn linear_without_constant_fails_for_negative_curvature() {
        let sf = SpaceForm::new(3, -1.0).unwrap();
        let f = Nonlinearity::polynomial(vec![0.0, -3.0]).unwrap();
        assert!(!check_standard_conditions(&f, &sf, &grid01()).unwrap().holds);
    }

    #[test]
    fn affine_derivative_bound_iff_lambda_at_least_nk() {
        let sf = SpaceForm::new(3, 1.0).unwrap();
        for (lambda, expect) in [(3.0, true), (3.5, true), (2.9, false), (-0.25, false)] {
            let f = Nonlinearity::affine(lambda, 1.0).unwrap();
            let rep = check_derivative_bound(&f, &sf, &grid01(), CheckOptions::default()).unwrap();
            assert_eq!(rep.holds, expect, "lambda = {lambda}");
        }
    }

    #[test]
    fn bratu_derivative_bound_against_direct_differentiation() {
        let sf = SpaceForm::new(2, 1.0).unwrap();
        let grid = grid01();
        for kk in [0.5, 1.0, 2.0] {
            let f = Nonlinearity::bratu(kk).unwrap();
            let expect = grid.points().iter().all(|&x| 2.0 * kk * (2.0 * x).exp() >= 2.0 - 1e-10);
            let rep = check_derivative_bound(&f, &sf, &grid, CheckOptions::default()).unwrap();
            assert_eq!(rep.holds, expect);
        }
        // K = 0.5 < nk/2 fails near 0, K >= nk/2 holds everywhere on [0, 1].
        let f = Nonlinearity::bratu(0.5).unwrap();
        assert!(!check_derivative_bound(&f, &sf, &grid, CheckOptions::default()).unwrap().holds);
        let f = Nonlinearity::bratu(1.0).unwrap();
        assert!(check_derivative_bound(&f, &sf, &grid, CheckOptions::default()).unwrap().holds);
    }

    #[test]
    fn tau_monotonicity_examples() {
        let opts = CheckOptions::default();
        let g = grid01();
        assert!(check_tau_monotonicity_condition(&Nonlinearity::serrin_fk(4, -1.0).unwrap(), &g, opts).unwrap().holds);
        assert!(check_tau_monotonicity_condition(&Nonlinearity::constant(1.0).unwrap(), &g, opts).unwrap().holds);
        let rep = check_tau_monotonicity_condition(&Nonlinearity::lane_emden(2.0).unwrap(), &g, opts).unwrap();
        assert!(!rep.holds);
        assert!(rep.witness.unwrap() < 1e-2);
    }

    #[test]
    fn missing_derivative_without_fallback_is_an_error() {
        let sf = SpaceForm::new(2, 0.0).unwrap();
        let f = Nonlinearity::affine(1.0, 1.0).unwrap().without_derivative();
        let opts = CheckOptions { tol: 1e-10, fd_fallback: false };
        assert!(matches!(check_derivative_bound(&f, &sf, &grid01(), opts), Err(Error::MissingDerivative(_))));
        let opts = CheckOptions { tol: 1e-8, fd_fallback: true };
        assert!(check_derivative_bound(&f, &sf, &grid01(), opts).unwrap().holds);
    }

    #[test]
    fn parse_and_descriptor_round_trip() {
        let f: Nonlinearity = "affine:-0.25,2.5".parse().unwrap();
        assert_eq!(f, Nonlinearity::affine(-0.25, 2.5).unwrap());
        assert_eq!(f.interval().hi, 10.0);
        let g: Nonlinearity = "constant:1".parse().unwrap();
        assert_eq!(g.eval(3.0), 1.0);
        assert_eq!(g.descriptor()["I_f"][1], "inf");
        let h: Nonlinearity = format!("{f}").parse().unwrap();
        assert_eq!(h, f);
        assert!("serrin_fk:2.5,1".parse::<Nonlinearity>().is_err());
        assert!("warp:1".parse::<Nonlinearity>().is_err());
        assert!("constant:1,2".parse::<Nonlinearity>().is_err());
        let json = serde_json::to_string(&f).unwrap();
        let back: Nonlinearity = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn polynomial_matches_horner_and_derivative() {
        let f = Nonlinearity::polynomial(vec![1.0, -2.0, 0.5, 3.0]).unwrap();
        let x = 0.7;
        assert!((f.eval(x) - (1.0 - 2.0 * x + 0.5 * x * x + 3.0 * x * x * x)).abs() < 1e-15);
        assert!((f.deriv(x).unwrap() - (-2.0 + x + 9.0 * x * x)).abs() < 1e-14);
    }

    fn families() -> Vec<Nonlinearity> {
        vec![
            Nonlinearity::serrin_fk(3, -1.0).unwrap(),
            Nonlinearity::affine(1.0, 2.9).unwrap(),
            Nonlinearity::lane_emden(1.5).unwrap(),
            Nonlinearity::allen_cahn(3.0).unwrap(),
            Nonlinearity::bratu(0.7).unwrap(),
            Nonlinearity::constant(2.0).unwrap(),
            Nonlinearity::polynomial(vec![1.0, 0.0, -1.0, 0.25]).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn analytic_derivative_matches_finite_differences(x in 0.01f64..0.99) {
            for f in families() {
                let d = f.deriv(x).unwrap();
                let fd = f.deriv_fd(x);
                prop_assert!((d - fd).abs() <= 1e-6 * d.abs().max(1.0), "{} at {x}: {d} vs {fd}", f.name());
            }
        }

        #[test]
        fn difference_quotients_are_bounded(x in 0.0f64..0.99, dx in 1e-6f64..1e-2) {
            for f in families() {
                let q = (f.eval(x + dx) - f.eval(x)) / dx;
                prop_assert!(q.abs() < 1e3);
            }
        }

        #[test]
        fn serrin_family_always_standard(n in 2u32..8, k in -3.0f64..3.0) {
            let sf = SpaceForm::new(n, k).unwrap();
            let f = Nonlinearity::serrin_fk(n, k).unwrap();
            let hi = f.interval().hi.min(2.0);
            let grid = SampleGrid::chebyshev(0.0, hi, 65).unwrap();
            prop_assert!(check_standard_conditions(&f, &sf, &grid).unwrap().holds);
        }

        #[test]
        fn violations_persist_under_refinement(c in -1.0f64..0.5) {
            let sf = SpaceForm::new(2, 1.0).unwrap();
            let f = Nonlinearity::polynomial(vec![c, 0.5, -1.0]).unwrap();
            let coarse = SampleGrid::chebyshev(0.0, 1.0, 17).unwrap();
            let rep = check_standard_conditions(&f, &sf, &coarse).unwrap();
            if let Some(w) = rep.witness {
                let mut pts = SampleGrid::chebyshev(0.0, 1.0, 129).unwrap().points().to_vec();
                pts.push(w);
                let fine = SampleGrid::from_points(pts).unwrap();
                let rep2 = check_standard_conditions(&f, &sf, &fine).unwrap();
                prop_assert!(!rep2.holds);
                prop_assert!(rep2.witness.unwrap() <= w);
            }
        }
    }
}
