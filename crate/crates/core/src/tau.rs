//! Boundary-response curves `τ̄±(R) = U'(r±)² / c` of the model profiles,
//! with the admissible set and gap they generate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::{asymptotic_gap, AsymptoticProfile};
use crate::error::{Error, Result};
use crate::nonlinearity::{Family, Nonlinearity};
use crate::radial::{solve_profile, CauchyData, ModelProfile, SolveOptions};
use crate::spaceform::SpaceForm;

/// `c(M,k,f) = U'_{0,M}(r₊)²`, the squared boundary slope of the centered profile.
pub fn normalization_constant(sf: &SpaceForm, f: &Nonlinearity, m: f64, opts: &SolveOptions) -> Result<f64> {
    let p = solve_profile(sf, f, CauchyData::new(0.0, m)?, opts)?;
    centered_constant(&p)
}

fn centered_constant(p: &ModelProfile) -> Result<f64> {
    match (p.admissible, p.du_plus) {
        (true, Some(d)) if d != 0.0 => Ok(d * d),
        _ => Err(Error::NotAdmissible(format!(
            "centered profile with M = {} has no boundary slope: {}",
            p.cauchy.m,
            p.failure.as_deref().unwrap_or("zero slope")
        ))),
    }
}

/// One sampled core radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauRow {
    #[serde(rename = "R")]
    pub r: f64,
    pub tau_plus: Option<f64>,
    pub tau_minus: Option<f64>,
    pub r_minus: Option<f64>,
    pub r_plus: Option<f64>,
    pub du_minus: Option<f64>,
    pub du_plus: Option<f64>,
    pub diagnostic: Option<String>,
}

impl TauRow {
    pub fn is_ok(&self) -> bool {
        self.diagnostic.is_none()
    }
}

/// Sampled `τ̄±` curves for fixed `(M, k, f)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauTable {
    pub sf: SpaceForm,
    pub f: Nonlinearity,
    pub m: f64,
    pub c_norm: f64,
    pub rows: Vec<TauRow>,
    /// Infimum of the sampled `τ̄⁺`.
    pub tau0: f64,
    pub tau_plus_sup: f64,
    pub tau_minus_inf: f64,
}

impl TauTable {
    pub fn ok_rows(&self) -> impl Iterator<Item = &TauRow> {
        self.rows.iter().filter(|r| r.is_ok())
    }

    /// `(R, τ̄⁺)` pairs of the successful rows.
    pub fn plus_curve(&self) -> Vec<(f64, f64)> {
        self.ok_rows().filter_map(|r| Some((r.r, r.tau_plus?))).collect()
    }

    pub fn minus_curve(&self) -> Vec<(f64, f64)> {
        self.ok_rows().filter_map(|r| Some((r.r, r.tau_minus?))).collect()
    }
}

/// `count` equispaced points of `[lo, hi]`, endpoints included.
pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| if i + 1 == count { hi } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 })
            .collect(),
    }
}

fn row_from_profile(r: f64, c: f64, res: Result<ModelProfile>) -> TauRow {
    let mut row =
        TauRow { r, tau_plus: None, tau_minus: None, r_minus: None, r_plus: None, du_minus: None, du_plus: None, diagnostic: None };
    match res {
        Ok(p) if p.admissible => {
            row.r_minus = p.r_minus;
            row.r_plus = p.r_plus;
            row.du_minus = p.du_minus;
            row.du_plus = p.du_plus;
            row.tau_plus = p.du_plus.map(|d| d * d / c);
            row.tau_minus = p.du_minus.map(|d| d * d / c);
        }
        Ok(p) => row.diagnostic = Some(p.failure.unwrap_or_else(|| "profile not admissible".into())),
        Err(e) => row.diagnostic = Some(e.to_string()),
    }
    row
}

/// Solves one profile per core radius (in parallel) and tabulates `τ̄±`.
pub fn tau_scan(sf: &SpaceForm, f: &Nonlinearity, m: f64, r_grid: &[f64], opts: &SolveOptions) -> Result<TauTable> {
    if r_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for &r in r_grid {
        if !(r >= 0.0 && r < sf.r_bar()) {
            return Err(Error::InvalidParameter(format!("core radius {r} outside [0, r_bar = {})", sf.r_bar())));
        }
    }
    let centered = solve_profile(sf, f, CauchyData::new(0.0, m)?, opts)?;
    let c = centered_constant(&centered)?;
    let rows: Vec<TauRow> = r_grid
        .par_iter()
        .map(|&r| {
            if r == 0.0 {
                row_from_profile(r, c, Ok(centered.clone()))
            } else {
                row_from_profile(r, c, CauchyData::new(r, m).and_then(|cd| solve_profile(sf, f, cd, opts)))
            }
        })
        .collect();
    let plus: Vec<f64> = rows.iter().filter_map(|r| r.tau_plus).collect();
    let minus: Vec<f64> = rows.iter().filter_map(|r| r.tau_minus).collect();
    if plus.is_empty() && minus.is_empty() {
        let first = rows.iter().find_map(|r| r.diagnostic.clone()).unwrap_or_default();
        return Err(Error::AllRowsFailed(first));
    }
    let tau0 = plus.iter().copied().fold(f64::INFINITY, f64::min);
    let tau_plus_sup = plus.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tau_minus_inf = minus.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TauTable { sf: *sf, f: f.clone(), m, c_norm: c, rows, tau0, tau_plus_sup, tau_minus_inf })
}

/// An interval of `τ` values with endpoint openness flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl TauInterval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapMethod {
    /// `k > 0`: the two limits at `r̄/2` coincide by reflection.
    ExactSymmetry,
    /// `k ≤ 0`: limits of both curves fitted from the tail of the scan.
    AsymptoteFit,
    /// `k ≤ 0` with limits that coincide to the width tolerance.
    SinglePoint,
}

/// Limits used for the `k ≤ 0` estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoteData {
    pub r_max: f64,
    pub tail_rows: usize,
    pub limit_plus: f64,
    pub limit_minus: f64,
    /// Large-core prediction `[τ₊, τ₋]` when `f = nkx + 1` with `k < 0`.
    pub predicted: Option<(f64, f64)>,
}

/// Admissible set and gap of a `τ̄` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapEstimate {
    pub adm: Vec<TauInterval>,
    pub gap: Option<TauInterval>,
    pub method: GapMethod,
    pub asymptote: Option<AsymptoteData>,
}

impl GapEstimate {
    pub fn width(&self) -> f64 {
        self.gap.map_or(0.0, |g| g.width())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GapOptions {
    /// Fraction of the rows treated as the tail.
    pub tail_fraction: f64,
    /// Relative spread allowed across the tail for an exponentially converging curve.
    pub asymptote_tol: f64,
    /// Limits closer than this are reported as a single point.
    pub width_tol: f64,
    /// Degree in `1/R` of the flat-case extrapolation.
    pub fit_degree: usize,
}

impl Default for GapOptions {
    fn default() -> Self {
        Self { tail_fraction: 0.1, asymptote_tol: 1e-3, width_tol: 1e-4, fit_degree: 3 }
    }
}

/// Least-squares fit of `y ≈ Σ a_j x^j` through normal equations in
/// Gaussian elimination; returns `a_0`.
#[allow(clippy::needless_range_loop)]
fn poly_intercept(xs: &[f64], ys: &[f64], degree: usize) -> Result<f64> {
    let d = degree + 1;
    if xs.len() < d + 2 {
        return Err(Error::InsufficientRange(format!("{} tail rows for a degree-{degree} fit", xs.len())));
    }
    let scale = xs.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut mat = vec![vec![0.0; d + 1]; d];
    for (&x, &y) in xs.iter().zip(ys) {
        let t = x / scale;
        let pows: Vec<f64> = (0..d).map(|j| t.powi(j as i32)).collect();
        for i in 0..d {
            for j in 0..d {
                mat[i][j] += pows[i] * pows[j];
            }
            mat[i][d] += pows[i] * y;
        }
    }
    for col in 0..d {
        let piv = (col..d).max_by(|&a, &b| mat[a][col].abs().total_cmp(&mat[b][col].abs())).unwrap_or(col);
        mat.swap(col, piv);
        let p = mat[col][col];
        if p == 0.0 {
            return Err(Error::InsufficientRange("singular fit matrix".into()));
        }
        for row in 0..d {
            if row != col {
                let factor = mat[row][col] / p;
                for j in col..=d {
                    mat[row][j] -= factor * mat[col][j];
                }
            }
        }
    }
    Ok(mat[0][d] / mat[0][0])
}

fn tail(curve: &[(f64, f64)], fraction: f64, min_rows: usize) -> &[(f64, f64)] {
    let count = ((curve.len() as f64 * fraction).ceil() as usize).max(min_rows).min(curve.len());
    &curve[curve.len() - count..]
}

/// Mean of the tail after checking that it has settled.
fn tail_average(curve: &[(f64, f64)], opts: &GapOptions, which: &str) -> Result<f64> {
    let t = tail(curve, opts.tail_fraction, 3);
    if t.len() < 3 {
        return Err(Error::InsufficientRange(format!("{which}: fewer than 3 rows in the scan")));
    }
    let mean = t.iter().map(|p| p.1).sum::<f64>() / t.len() as f64;
    let spread = t.iter().fold(0.0f64, |a, p| a.max((p.1 - mean).abs()));
    if spread > opts.asymptote_tol * mean.abs().max(1e-300) {
        return Err(Error::InsufficientRange(format!(
            "{which}: tail spread {spread:e} exceeds tolerance (R_max = {})",
            t[t.len() - 1].0
        )));
    }
    Ok(mean)
}

/// Extrapolation of an `O(1/R)`-converging tail to `R = ∞`.
fn inverse_r_limit(curve: &[(f64, f64)], opts: &GapOptions, which: &str) -> Result<f64> {
    let r_max = curve.last().map_or(0.0, |p| p.0);
    let pts: Vec<(f64, f64)> = curve.iter().copied().filter(|p| p.0 >= 0.25 * r_max && p.0 > 0.0).collect();
    let xs: Vec<f64> = pts.iter().map(|p| 1.0 / p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    poly_intercept(&xs, &ys, opts.fit_degree).map_err(|e| match e {
        Error::InsufficientRange(s) => Error::InsufficientRange(format!("{which}: {s}")),
        other => other,
    })
}

fn predicted_gap(sf: &SpaceForm, f: &Nonlinearity, m: f64) -> Option<(f64, f64)> {
    match f.family() {
        Family::SerrinFk { n, k } if *k < 0.0 && *n == sf.n() && *k == sf.k() => {
            // Rescale to k = −1, then to the normalization of the limit profile.
            let m1 = -k * m * f64::from(*n);
            if !(m1 > 0.0 && m1 < 1.0) {
                return None;
            }
            asymptotic_gap(*n, m1 / (1.0 - m1)).ok().map(|a: AsymptoticProfile| a.tau_gap())
        }
        _ => None,
    }
}

/// Admissible set and gap from a `τ̄` table.
pub fn gap_estimate(table: &TauTable, opts: &GapOptions) -> Result<GapEstimate> {
    let plus = table.plus_curve();
    let minus = table.minus_curve();
    let k = table.sf.k();
    if k > 0.0 {
        // Beyond r̄/2 the curves swap roles, so together they cover [τ0, ∞).
        let lo = plus.iter().chain(minus.iter()).map(|p| p.1).fold(f64::INFINITY, f64::min);
        if !lo.is_finite() {
            return Err(Error::InsufficientRange("no successful rows".into()));
        }
        return Ok(GapEstimate {
            adm: vec![TauInterval { lo, hi: f64::INFINITY, lo_closed: true, hi_closed: false }],
            gap: None,
            method: GapMethod::ExactSymmetry,
            asymptote: None,
        });
    }
    let (limit_plus, limit_minus) = if k < 0.0 {
        (tail_average(&plus, opts, "tau_plus")?, tail_average(&minus, opts, "tau_minus")?)
    } else {
        (inverse_r_limit(&plus, opts, "tau_plus")?, inverse_r_limit(&minus, opts, "tau_minus")?)
    };
    let r_max = plus.last().map_or(0.0, |p| p.0);
    let tail_rows = tail(&plus, opts.tail_fraction, 3).len();
    let asymptote = Some(AsymptoteData {
        r_max,
        tail_rows,
        limit_plus,
        limit_minus,
        predicted: predicted_gap(&table.sf, &table.f, table.m),
    });
    let tau0 = table.tau0;
    let gap = TauInterval::closed(limit_plus.min(limit_minus), limit_plus.max(limit_minus));
    let method = if gap.width() <= opts.width_tol { GapMethod::SinglePoint } else { GapMethod::AsymptoteFit };
    let mut adm = Vec::new();
    if gap.lo > tau0 {
        adm.push(TauInterval { lo: tau0, hi: gap.lo, lo_closed: true, hi_closed: false });
    }
    adm.push(TauInterval { lo: gap.hi, hi: f64::INFINITY, lo_closed: false, hi_closed: false });
    Ok(GapEstimate { adm, gap: Some(gap), method, asymptote })
}

/// One point of the boundary-slope imbalance curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapCurvePoint {
    #[serde(rename = "R")]
    pub r: f64,
    pub s: f64,
    pub du_minus: f64,
    pub du_plus: f64,
}

/// `s(R) = |U'(r₋) + U'(r₊)|` on the hyperbolic space `k = −1` for
/// `f = −nx + 1`, reported in the normalization of the large-core limit
/// profile: `m_limit` is the maximum of that normalization (the solved
/// profile has maximum `m_limit/(n(m_limit+1))`) and slopes are multiplied by `n`.
pub fn figure_gap_curve(n: u32, m_limit: f64, r_grid: &[f64], opts: &SolveOptions) -> Result<Vec<GapCurvePoint>> {
    if !(m_limit > 0.0 && m_limit.is_finite()) {
        return Err(Error::InvalidParameter(format!("M = {m_limit} must be positive")));
    }
    if r_grid.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::InvalidParameter("the slope-imbalance curve needs R > 0".into()));
    }
    let sf = SpaceForm::new(n, -1.0)?;
    let f = Nonlinearity::serrin_fk(n, -1.0)?;
    let nn = f64::from(n);
    let m = m_limit / (nn * (m_limit + 1.0));
    let table = tau_scan(&sf, &f, m, r_grid, opts)?;
    table
        .rows
        .iter()
        .map(|row| match (row.du_minus, row.du_plus) {
            (Some(a), Some(b)) => Ok(GapCurvePoint { r: row.r, s: nn * (a + b).abs(), du_minus: nn * a, du_plus: nn * b }),
            _ => Err(Error::NotAdmissible(format!(
                "R = {}: {}",
                row.r,
                row.diagnostic.as_deref().unwrap_or("missing boundary slope")
            ))),
        })
        .collect()
}
