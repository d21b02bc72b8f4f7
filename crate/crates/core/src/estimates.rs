//! Scalar bounds evaluated on a model profile: inverse branches `χ±`, the
//! model gradient, the coefficients `λ` and `μ`, curvature, area,
//! isoperimetric and hot-spot bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{brent, integrate, BrentOptions, QuadOptions};
use crate::radial::ModelProfile;
use crate::spaceform::SpaceForm;

/// Branch of a comparison pair: the outer (`plus`) or inner (`minus`) annulus side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

/// An admissible radial profile together with the branch it is compared on.
#[derive(Debug, Clone)]
pub struct ComparisonPair {
    pub sign: Branch,
    pub profile: ModelProfile,
    sf: SpaceForm,
}

fn chi_brent() -> BrentOptions {
    BrentOptions { xtol: 0.0, rtol: 2.0 * f64::EPSILON, ftol: 0.0, max_iter: 200 }
}

impl ComparisonPair {
    pub fn new(profile: ModelProfile, sign: Branch) -> Result<Self> {
        let sf = profile
            .sf
            .ok_or_else(|| Error::InvalidParameter("comparison pairs need a radial model profile".into()))?;
        if !profile.admissible {
            return Err(Error::NotAdmissible(profile.failure.clone().unwrap_or_else(|| "profile not admissible".into())));
        }
        match sign {
            Branch::Plus if profile.r_plus.is_none() => {
                return Err(Error::InvalidParameter("plus branch needs an outer zero".into()))
            }
            Branch::Minus if profile.r_minus.is_none() || profile.cauchy.r == 0.0 => {
                return Err(Error::InvalidParameter("minus branch needs R > 0 and an inner zero".into()))
            }
            _ => {}
        }
        Ok(Self { sign, profile, sf })
    }

    pub fn sf(&self) -> &SpaceForm {
        &self.sf
    }

    pub fn m(&self) -> f64 {
        self.profile.cauchy.m
    }

    /// Core radius `R̄`.
    pub fn r_core(&self) -> f64 {
        self.profile.cauchy.r
    }

    /// Boundary radius of the branch: `r̄₊` or `r̄₋`.
    pub fn r_end(&self) -> f64 {
        match self.sign {
            Branch::Plus => self.profile.r_plus.unwrap_or(f64::NAN),
            Branch::Minus => self.profile.r_minus.unwrap_or(f64::NAN),
        }
    }

    /// Boundary slope `Ū'(r̄±)` of the branch.
    pub fn du_end(&self) -> f64 {
        match self.sign {
            Branch::Plus => self.profile.du_plus.unwrap_or(f64::NAN),
            Branch::Minus => self.profile.du_minus.unwrap_or(f64::NAN),
        }
    }

    /// Radius interval of the branch, `(lo, hi)` in increasing order.
    pub fn branch_interval(&self) -> (f64, f64) {
        let (a, b) = (self.r_core(), self.r_end());
        (a.min(b), a.max(b))
    }

    /// Default exclusion width `δ = 1e-4 (r̄₊ − r̄₋)` around the core and the boundary.
    pub fn exclusion(&self) -> f64 {
        let (lo, hi) = self.profile.support();
        1e-4 * (hi - lo)
    }
}

/// Radius on the pair's branch at which `Ū = s`.
pub fn chi_inverse(pair: &ComparisonPair, s: f64) -> Result<f64> {
    let m = pair.m();
    if !(s >= 0.0 && s < m) {
        return Err(Error::Domain(format!("level {s} outside [0, M = {m})")));
    }
    if s == 0.0 {
        return Ok(pair.r_end());
    }
    let (lo, hi) = pair.branch_interval();
    let p = &pair.profile;
    brent(|r| p.u(r).map_or(f64::NAN, |u| u - s), lo, hi, chi_brent())
}

/// Model gradient `W̄(s) = Ū'(χ(s))²`; `s = M` gives 0.
pub fn model_gradient_w(pair: &ComparisonPair, s: f64) -> Result<f64> {
    if s == pair.m() {
        return Ok(0.0);
    }
    let r = chi_inverse(pair, s)?;
    Ok(pair.profile.du(r)?.powi(2))
}

/// `Ū'(r)²` at a radius on the branch.
pub fn model_gradient_w_at_radius(pair: &ComparisonPair, r: f64) -> Result<f64> {
    let (lo, hi) = pair.branch_interval();
    if !(r >= lo && r <= hi) {
        return Err(Error::Domain(format!("radius {r} outside the branch [{lo}, {hi}]")));
    }
    Ok(pair.profile.du(r)?.powi(2))
}

fn check_interior(pair: &ComparisonPair, r: f64) -> Result<()> {
    let (lo, hi) = pair.profile.support();
    if r == pair.r_core() {
        return Err(Error::Singularity { r, what: "Ū' vanishes at the core" });
    }
    if !(r > lo && r < hi) {
        return Err(Error::Domain(format!("radius {r} not strictly inside ({lo}, {hi})")));
    }
    Ok(())
}

/// `P = −Ū'' + cot_k Ū' = f(Ū) + n cot_k Ū'`, obtained without cancellation from
/// `(s_k^n P)' = s_k^n Ū' (f'(Ū) − nk)` and `P(R̄) = f(M)`.
fn p_of_r(pair: &ComparisonPair, r: f64) -> Result<f64> {
    let sf = pair.sf();
    let p = &pair.profile;
    let f = &p.f;
    let nn = sf.dim();
    let nk = nn * sf.k();
    let n = sf.n() as i32;
    let r0 = pair.r_core();
    let base = if r0 == 0.0 { 0.0 } else { sf.s_k(r0)?.powi(n) * f.eval(p.cauchy.m) };
    let mut err = None;
    let integral = integrate(
        |x| match (p.eval(x), sf.s_k(x)) {
            (Ok((u, du)), Ok(s)) => match f.deriv_or_fd(u, true) {
                Ok(d) => s.powi(n) * du * (d - nk),
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            },
            _ => f64::NAN,
        },
        r0,
        r,
        QuadOptions { abs_tol: 1e-300, rel_tol: 1e-12, max_intervals: 4000 },
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok((base + integral) / sf.s_k(r)?.powi(n))
}

/// `λ(r) = (−Ū'' + cot_k Ū') / Ū'²`.
pub fn lambda_of_r(pair: &ComparisonPair, r: f64) -> Result<f64> {
    check_interior(pair, r)?;
    let du = pair.profile.du(r)?;
    Ok(p_of_r(pair, r)? / (du * du))
}

/// Same quantity straight from the profile and the equation, for cross-checks.
pub fn lambda_direct(pair: &ComparisonPair, r: f64) -> Result<f64> {
    check_interior(pair, r)?;
    let sf = pair.sf();
    let (u, du) = pair.profile.eval(r)?;
    let cot = sf.cot_k(r)?;
    Ok((pair.profile.f.eval(u) + sf.dim() * cot * du) / (du * du))
}

/// `μ(r) = f'(Ū) − nk + ((n+2)/n) λ f(Ū)`.
pub fn mu_of_r(pair: &ComparisonPair, r: f64) -> Result<f64> {
    let lambda = lambda_of_r(pair, r)?;
    mu_from_lambda(pair, r, lambda)
}

fn mu_from_lambda(pair: &ComparisonPair, r: f64, lambda: f64) -> Result<f64> {
    let sf = pair.sf();
    let nn = sf.dim();
    let f = &pair.profile.f;
    let u = pair.profile.u(r)?;
    Ok(f.deriv_or_fd(u, true)? - nn * sf.k() + (nn + 2.0) / nn * lambda * f.eval(u))
}

/// `μ` at the branch boundary by quadratic extrapolation from the nodes
/// `r̄ ∓ δ, r̄ ∓ 2δ, r̄ ∓ 3δ`. The default `δ` is `1e-3` times the distance
/// from the boundary to the nearest of the core and the poles of `cot_k`.
pub fn mu_at_boundary(pair: &ComparisonPair, delta: Option<f64>) -> Result<f64> {
    let end = pair.r_end();
    let sf = pair.sf();
    let mut scale = (end - pair.r_core()).abs().min(end);
    if sf.is_compact() {
        scale = scale.min(sf.r_bar() - end);
    }
    let d = delta.unwrap_or(1e-3 * scale);
    let inward = if end > pair.r_core() { -1.0 } else { 1.0 };
    let vals: Vec<f64> = (1..=3).map(|j| mu_of_r(pair, end + inward * j as f64 * d)).collect::<Result<_>>()?;
    Ok(3.0 * vals[0] - 3.0 * vals[1] + vals[2])
}

/// Result of scanning the sign of `μ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuScan {
    pub min_mu: f64,
    pub argmin: f64,
    pub all_nonnegative: bool,
    pub samples: Vec<(f64, f64)>,
}

/// Tolerance below zero still counted as non-negative.
pub const MU_SIGN_TOL: f64 = 1e-8;

/// `μ` on the given radii; points within `δ` of the core or of the boundary
/// zeros are skipped.
pub fn mu_sign_scan(pair: &ComparisonPair, radii: &[f64]) -> Result<MuScan> {
    let delta = pair.exclusion();
    let (lo, hi) = pair.profile.support();
    let core = pair.r_core();
    let usable: Vec<f64> = radii
        .iter()
        .copied()
        .filter(|&r| r > lo + delta && r < hi - delta && (r - core).abs() > delta)
        .collect();
    if usable.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let samples: Vec<(f64, f64)> = usable.iter().map(|&r| Ok((r, mu_of_r(pair, r)?))).collect::<Result<_>>()?;
    let (argmin, min_mu) = samples.iter().copied().fold((f64::NAN, f64::INFINITY), |acc, s| if s.1 < acc.1 { s } else { acc });
    Ok(MuScan { min_mu, argmin, all_nonnegative: min_mu >= -MU_SIGN_TOL, samples })
}

/// Equispaced scan over the whole support of the pair's profile (both
/// branches), excluding the `δ` zones.
pub fn mu_sign_scan_uniform(pair: &ComparisonPair, count: usize) -> Result<MuScan> {
    let delta = pair.exclusion();
    let (lo, hi) = pair.profile.support();
    let radii: Vec<f64> =
        (0..count).map(|i| lo + 2.0 * delta + (hi - lo - 4.0 * delta) * i as f64 / (count.max(2) - 1) as f64).collect();
    mu_sign_scan(pair, &radii)
}

/// Mean-curvature bounds on the boundary component and on the maximum set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBounds {
    pub boundary_h_bound: f64,
    /// `None` when `R̄ = 0` (the maximum set is a point).
    pub maxset_h_bound: Option<f64>,
}

pub fn curvature_bounds(pair: &ComparisonPair) -> Result<CurvatureBounds> {
    let sf = pair.sf();
    let r0 = pair.r_core();
    let core = if r0 > 0.0 { Some(sf.cot_k(r0)?) } else { None };
    Ok(match pair.sign {
        Branch::Plus => CurvatureBounds { boundary_h_bound: sf.cot_k(pair.r_end())?, maxset_h_bound: core.map(|c| -c) },
        Branch::Minus => CurvatureBounds { boundary_h_bound: -sf.cot_k(pair.r_end())?, maxset_h_bound: core },
    })
}

fn require_core(pair: &ComparisonPair) -> Result<f64> {
    let r0 = pair.r_core();
    if r0 > 0.0 {
        Ok(r0)
    } else {
        Err(Error::Domain("the maximum set is a point (R = 0)".into()))
    }
}

/// `(s_k(R̄) / s_k(χ(t)))^(n−1)`.
pub fn area_ratio_factor(pair: &ComparisonPair, t: f64) -> Result<f64> {
    let r0 = require_core(pair)?;
    let sf = pair.sf();
    let r = if t == pair.m() { r0 } else { chi_inverse(pair, t)? };
    Ok((sf.s_k(r0)? / sf.s_k(r)?).powi(sf.n() as i32 - 1))
}

const ISO_QUAD: QuadOptions = QuadOptions { abs_tol: 0.0, rel_tol: 1e-12, max_intervals: 4000 };

/// `∫ s_k^(n−1) dr / s_k(R̄)^(n−1)` between `r_core` and `r_end`.
pub fn isoperimetric_ratio_from_radii(sf: &SpaceForm, r_core: f64, r_end: f64) -> Result<f64> {
    if !(r_core > 0.0) {
        return Err(Error::Domain("the ratio needs R > 0".into()));
    }
    let n = sf.n() as i32;
    let vol = integrate(|r| sf.s_k(r).map_or(f64::NAN, |s| s.powi(n - 1)), r_core.min(r_end), r_core.max(r_end), ISO_QUAD)?;
    Ok(vol / sf.s_k(r_core)?.powi(n - 1))
}

/// Model-side value of the isoperimetric inequality.
pub fn isoperimetric_model_ratio(pair: &ComparisonPair) -> Result<f64> {
    let r0 = require_core(pair)?;
    isoperimetric_ratio_from_radii(pair.sf(), r0, pair.r_end())
}

/// Same ratio through the level-set parametrization
/// `∫₀^M s_k(χ(t))^(n−1) / |Ū'(χ(t))| dt / s_k(R̄)^(n−1)`, with `t = M(1 − v²)`.
pub fn isoperimetric_ratio_coarea(pair: &ComparisonPair) -> Result<f64> {
    let r0 = require_core(pair)?;
    let sf = pair.sf();
    let n = sf.n() as i32;
    let m = pair.m();
    let p = &pair.profile;
    let val = integrate(
        |v| {
            if v == 0.0 {
                // |Ū'| ~ |Ū''(R̄)| |χ − R̄| and χ − R̄ ~ v √(2M/|Ū''|).
                let ddu = (p.f.eval(m)).abs();
                return sf.s_k(r0).map_or(f64::NAN, |s| s.powi(n - 1)) * 2.0 * m / (2.0 * m * ddu).sqrt();
            }
            let t = m * (1.0 - v * v);
            let r = match chi_inverse(pair, t) {
                Ok(r) => r,
                Err(_) => return f64::NAN,
            };
            match (p.du(r), sf.s_k(r)) {
                (Ok(du), Ok(s)) => s.powi(n - 1) / du.abs() * 2.0 * m * v,
                _ => f64::NAN,
            }
        },
        0.0,
        1.0,
        QuadOptions { abs_tol: 0.0, rel_tol: 1e-10, max_intervals: 4000 },
    )?;
    Ok(val / sf.s_k(r0)?.powi(n - 1))
}

/// Lower bound `(2/n) s_k(d/2)² / s_k'(d)` for the value at distance `d` from the boundary.
pub fn serrin_lower_bound(sf: &SpaceForm, d: f64) -> Result<f64> {
    if !(d >= 0.0) {
        return Err(Error::Domain(format!("distance {d} must be non-negative")));
    }
    if sf.is_compact() && d >= 0.5 * sf.r_bar() {
        return Err(Error::Domain(format!("distance {d} must stay below r_bar/2 = {}", 0.5 * sf.r_bar())));
    }
    let c = sf.ds_k(d)?;
    if !(c > 0.0) {
        return Err(Error::Domain(format!("s_k'({d}) = {c} is not positive")));
    }
    Ok(2.0 / sf.dim() * sf.s_k(0.5 * d)?.powi(2) / c)
}

/// Hot-spot distance bounds from a comparison pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HotspotBounds {
    pub raw: f64,
    pub normalized: f64,
    /// The inequality is strict on the inner branch.
    pub strict: bool,
    /// `tan_k(r_Ω)/n · normalized`, when an inradius is supplied.
    pub distance_bound: Option<f64>,
}

/// `√((2/n) M + k M²)`.
fn hotspot_scale(sf: &SpaceForm, m: f64) -> Result<f64> {
    let v = 2.0 / sf.dim() * m + sf.k() * m * m;
    if !(v > 0.0) {
        return Err(Error::Domain(format!("(2/n)M + kM² = {v} is not positive")));
    }
    Ok(v.sqrt())
}

pub fn hotspot_bounds(pair: &ComparisonPair, r_omega: Option<f64>) -> Result<HotspotBounds> {
    let sf = pair.sf();
    if sf.is_compact() && pair.profile.r_plus.is_some_and(|rp| rp > 0.5 * sf.r_bar()) {
        return Err(Error::Domain(format!(
            "outer zero {} exceeds r_bar/2 = {}",
            pair.profile.r_plus.unwrap_or(f64::NAN),
            0.5 * sf.r_bar()
        )));
    }
    let raw = (pair.r_end() - pair.r_core()).abs();
    let normalized = raw / hotspot_scale(sf, pair.m())?;
    let distance_bound = match r_omega {
        Some(ro) => Some(sf.tan_k(ro)? / sf.dim() * normalized),
        None => None,
    };
    Ok(HotspotBounds { raw, normalized, strict: pair.sign == Branch::Minus, distance_bound })
}

/// Weight `(s_k(r) / |Ū'(r)|)^(2(n−1)/n)` of the gradient functional.
pub fn f_beta_weight(pair: &ComparisonPair, r: f64) -> Result<f64> {
    check_interior(pair, r)?;
    let sf = pair.sf();
    let du = pair.profile.du(r)?;
    Ok((sf.s_k(r)? / du.abs()).powf(2.0 * (sf.dim() - 1.0) / sf.dim()))
}

/// JSON bound report of one pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub sign: Branch,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub r_minus: Option<f64>,
    pub r_plus: Option<f64>,
    pub curvature_bounds: CurvatureBounds,
    pub iso_ratio: Option<f64>,
    pub hotspot_raw: f64,
    pub hotspot_normalized: Option<f64>,
    pub mu_min: Option<f64>,
}

pub fn bound_report(pair: &ComparisonPair, mu_points: usize) -> Result<BoundReport> {
    let hot = hotspot_bounds(pair, None);
    let mu_min = if pair.profile.f.has_derivative() && mu_points > 0 {
        Some(mu_sign_scan_uniform(pair, mu_points)?.min_mu)
    } else {
        None
    };
    Ok(BoundReport {
        sign: pair.sign,
        r: pair.r_core(),
        m: pair.m(),
        r_minus: pair.profile.r_minus,
        r_plus: pair.profile.r_plus,
        curvature_bounds: curvature_bounds(pair)?,
        iso_ratio: if pair.r_core() > 0.0 { Some(isoperimetric_model_ratio(pair)?) } else { None },
        hotspot_raw: (pair.r_end() - pair.r_core()).abs(),
        hotspot_normalized: hot.ok().map(|h| h.normalized),
        mu_min,
    })
}
