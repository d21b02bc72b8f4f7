//! Shooting integration of `U'' + b(r) U' + f(U) = 0` from Cauchy data
//! `U(R) = M`, `U'(R) = 0`, outward to the first zero of `U` on each side.
//!
//! The radial model equation uses `b = (n−1) cot_k`; the isoparametric
//! reduction plugs in its own coefficient through [`solve_generic`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::numerics::rk::{self, DenseStep, State};
use crate::numerics::{brent, BrentOptions};
use crate::spaceform::SpaceForm;

/// Core radius `R` and maximum value `M` of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauchyData {
    /// Core radius `R`.
    pub r: f64,
    /// Maximum value `M > 0`.
    pub m: f64,
}

impl CauchyData {
    pub fn new(r: f64, m: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidParameter(format!("core radius R = {r} must be finite and non-negative")));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidParameter(format!("maximum value M = {m} must be positive")));
        }
        Ok(Self { r, m })
    }
}

/// Integration controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Distance from `R` after which an unbounded side gives up looking for a zero.
    pub r_max_cap: f64,
    pub max_steps: usize,
    /// Offset of the series startup at a pole; `None` picks `1e-6` times a
    /// natural length scale of the data.
    pub epsilon: Option<f64>,
    /// Target for `|U(r_±)|` after refinement.
    pub tol_zero: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, r_max_cap: 200.0, max_steps: 1_000_000, epsilon: None, tol_zero: 1e-13 }
    }
}

impl SolveOptions {
    /// Same options with both tolerances scaled by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self { rtol: self.rtol * factor, atol: self.atol * factor, ..self }
    }
}

/// One accepted integration node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub r: f64,
    pub u: f64,
    pub du: f64,
}

/// Dense representation of the solution on a sub-interval.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
enum Piece {
    Rk(DenseStep),
    /// `U = M − a (r − pole)²` near a pole.
    Series { pole: f64, m: f64, a: f64, lo: f64, hi: f64 },
    /// `U = C + B φ(ρ)`, `ρ = |r − pole|`, `φ' = ρ^(−b₁)`: the forcing-free
    /// solution used in the last stretch before a pole.
    PoleTail { pole: f64, c: f64, b: f64, b1: f64, lo: f64, hi: f64 },
}

fn tail_phi(rho: f64, b1: f64) -> f64 {
    if (b1 - 1.0).abs() < 1e-8 {
        rho.ln()
    } else {
        rho.powf(1.0 - b1) / (1.0 - b1)
    }
}

fn tail_phi_inverse(v: f64, b1: f64) -> f64 {
    if (b1 - 1.0).abs() < 1e-8 {
        v.exp()
    } else {
        ((1.0 - b1) * v).powf(1.0 / (1.0 - b1))
    }
}

impl Piece {
    fn lo(&self) -> f64 {
        match self {
            Piece::Rk(d) => d.lo(),
            Piece::Series { lo, .. } | Piece::PoleTail { lo, .. } => *lo,
        }
    }

    fn hi(&self) -> f64 {
        match self {
            Piece::Rk(d) => d.hi(),
            Piece::Series { hi, .. } | Piece::PoleTail { hi, .. } => *hi,
        }
    }

    fn eval(&self, r: f64) -> State {
        match self {
            Piece::Rk(d) => d.eval(r),
            Piece::Series { pole, m, a, .. } => {
                let x = r - pole;
                [m - a * x * x, -2.0 * a * x]
            }
            Piece::PoleTail { pole, c, b, b1, .. } => {
                let rho = (r - pole).abs();
                let slope = b * rho.powf(-b1);
                [c + b * tail_phi(rho, *b1), if r > *pole { slope } else { -slope }]
            }
        }
    }
}

/// How one side of the integration ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideEnd {
    /// First zero of `U` found.
    Zero,
    /// The side starts at a pole of the coefficient (core on a focal point).
    Pole,
    /// Integration reached the opposite pole without a zero.
    SingularEndpoint,
}

/// A numerically integrated profile `U_{R,M}` with its zeros.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelProfile {
    pub sf: Option<SpaceForm>,
    pub f: Nonlinearity,
    pub cauchy: CauchyData,
    /// Interval on which the coefficient is defined.
    pub domain: (f64, f64),
    pub nodes: Vec<Node>,
    pub r_minus: Option<f64>,
    pub r_plus: Option<f64>,
    pub du_minus: Option<f64>,
    pub du_plus: Option<f64>,
    pub left_end: SideEnd,
    pub right_end: SideEnd,
    pub admissible: bool,
    pub failure: Option<String>,
    /// Estimated error of the located zeros.
    pub error_estimate: f64,
    pieces: Vec<Piece>,
}

impl ModelProfile {
    /// Leftmost radius covered by the dense output.
    pub fn r_lo(&self) -> f64 {
        self.pieces.first().map_or(self.cauchy.r, Piece::lo)
    }

    pub fn r_hi(&self) -> f64 {
        self.pieces.last().map_or(self.cauchy.r, Piece::hi)
    }

    /// `(U(r), U'(r))` from the dense interpolant.
    pub fn eval(&self, r: f64) -> Result<(f64, f64)> {
        let slack = 16.0 * f64::EPSILON * r.abs().max(1.0);
        if !(r >= self.r_lo() - slack && r <= self.r_hi() + slack) {
            return Err(Error::Domain(format!(
                "r = {r} outside the integrated range [{}, {}]",
                self.r_lo(),
                self.r_hi()
            )));
        }
        if r == self.cauchy.r {
            return Ok((self.cauchy.m, 0.0));
        }
        let r = r.clamp(self.r_lo(), self.r_hi());
        let idx = self.pieces.partition_point(|p| p.hi() < r).min(self.pieces.len() - 1);
        let y = self.pieces[idx].eval(r);
        Ok((y[0], y[1]))
    }

    pub fn u(&self, r: f64) -> Result<f64> {
        Ok(self.eval(r)?.0)
    }

    pub fn du(&self, r: f64) -> Result<f64> {
        Ok(self.eval(r)?.1)
    }

    /// Interval `[r_-, r_+]` where the profile is positive; open ends at poles
    /// are replaced by the pole itself.
    pub fn support(&self) -> (f64, f64) {
        (self.r_minus.unwrap_or(self.r_lo()), self.r_plus.unwrap_or(self.r_hi()))
    }

    /// `|U'(r_-) + U'(r_+)|`, the boundary-slope imbalance of the profile.
    pub fn slope_sum(&self) -> Option<f64> {
        Some((self.du_minus? + self.du_plus?).abs())
    }

    /// Dense values on `count` equispaced radii of `[lo, hi]`.
    pub fn sample(&self, lo: f64, hi: f64, count: usize) -> Result<Vec<Node>> {
        if count < 2 {
            return Err(Error::InvalidParameter("need at least two sample points".into()));
        }
        (0..count)
            .map(|i| {
                let r = if i + 1 == count { hi } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 };
                let (u, du) = self.eval(r)?;
                Ok(Node { r, u, du })
            })
            .collect()
    }
}

/// State at `ε` from a pole given by the second-order series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StartState {
    pub r: f64,
    pub u: f64,
    pub du: f64,
    /// Residue `b₁ = lim d·b` at the pole.
    pub b1: f64,
}

/// Which endpoint of the coefficient interval the core sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleSide {
    Left,
    Right,
}

/// Residue of `b` at an endpoint pole by Richardson extrapolation of `d·b`.
pub fn pole_residue(b: &dyn Fn(f64) -> f64, pole: f64, side: PoleSide) -> Result<f64> {
    let g = |d: f64| match side {
        PoleSide::Left => d * b(pole + d),
        PoleSide::Right => -d * b(pole - d),
    };
    let h = 1e-3;
    let b1 = (4.0 * g(0.5 * h) - g(h)) / 3.0;
    if !b1.is_finite() {
        return Err(Error::Singularity { r: pole, what: "coefficient residue is not finite" });
    }
    if b1 <= -1.0 {
        return Err(Error::Singularity { r: pole, what: "coefficient residue must exceed -1" });
    }
    Ok(b1)
}

/// Series startup off a pole: `U = M − f(M) ε²/(2(1+b₁))`, `U' = ∓f(M) ε/(1+b₁)`.
pub fn singular_start_generic(
    b: &dyn Fn(f64) -> f64,
    f: &Nonlinearity,
    pole: f64,
    side: PoleSide,
    m: f64,
    eps: f64,
) -> Result<StartState> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("startup offset {eps} must be positive")));
    }
    let b1 = pole_residue(b, pole, side)?;
    let fm = f.eval(m);
    let u = m - fm * eps * eps / (2.0 * (1.0 + b1));
    let slope = fm * eps / (1.0 + b1);
    Ok(match side {
        PoleSide::Left => StartState { r: pole + eps, u, du: -slope, b1 },
        PoleSide::Right => StartState { r: pole - eps, u, du: slope, b1 },
    })
}

/// Series startup for the radial model at `R = 0` (or `R = r̄` when `k > 0`).
pub fn singular_start(sf: &SpaceForm, f: &Nonlinearity, cd: CauchyData, eps: f64) -> Result<StartState> {
    let b = |r: f64| sf.radial_coefficient(r);
    if cd.r == 0.0 {
        singular_start_generic(&b, f, 0.0, PoleSide::Left, cd.m, eps)
    } else if sf.is_compact() && cd.r == sf.r_bar() {
        singular_start_generic(&b, f, sf.r_bar(), PoleSide::Right, cd.m, eps)
    } else {
        Err(Error::InvalidParameter(format!("R = {} is not a pole of the radial coefficient", cd.r)))
    }
}

fn default_epsilon(f: &Nonlinearity, m: f64, opts: &SolveOptions) -> f64 {
    opts.epsilon.unwrap_or_else(|| {
        let fm = f.eval(m).abs();
        let scale = if fm > 0.0 { (2.0 * m / fm).sqrt().min(1.0) } else { 1.0 };
        1e-6 * scale
    })
}

/// Solves the radial model equation `U'' + (n−1) cot_k U' + f(U) = 0`.
///
/// `R = r̄` is accepted for `k > 0` and starts from the antipodal pole.
pub fn solve_profile(sf: &SpaceForm, f: &Nonlinearity, cd: CauchyData, opts: &SolveOptions) -> Result<ModelProfile> {
    if cd.r > sf.r_bar() {
        return Err(Error::InvalidParameter(format!("R = {} exceeds r_bar = {}", cd.r, sf.r_bar())));
    }
    let b = |r: f64| sf.radial_coefficient(r);
    let mut p = solve_generic(&b, f, cd, (0.0, sf.r_bar()), opts)?;
    p.sf = Some(*sf);
    Ok(p)
}

struct SideResult {
    pieces: Vec<Piece>,
    nodes: Vec<Node>,
    zero: Option<(f64, f64)>,
    end: SideEnd,
    err_sum: f64,
}

/// Integrates `U'' + b U' + f(U) = 0` on the coefficient interval `(lo, hi)`.
///
/// Finite endpoints are treated as (at most simple) poles of `b`; infinite
/// ones are truncated at `R ± r_max_cap`.
pub fn solve_generic(
    b: &dyn Fn(f64) -> f64,
    f: &Nonlinearity,
    cd: CauchyData,
    interval: (f64, f64),
    opts: &SolveOptions,
) -> Result<ModelProfile> {
    let (lo, hi) = interval;
    if !(lo < hi) || lo.is_nan() || hi.is_nan() {
        return Err(Error::InvalidParameter(format!("coefficient interval ({lo}, {hi}) is empty")));
    }
    if !(cd.m > 0.0) {
        return Err(Error::InvalidParameter(format!("maximum value M = {} must be positive", cd.m)));
    }
    if !(cd.r >= lo && cd.r <= hi) || cd.r.is_infinite() {
        return Err(Error::InvalidParameter(format!("R = {} outside the interval [{lo}, {hi}]", cd.r)));
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(Error::InvalidParameter("tolerances must be positive".into()));
    }
    let fm = f.eval(cd.m);
    if !fm.is_finite() {
        return Err(Error::Domain(format!("f(M) is not finite for M = {}", cd.m)));
    }
    if fm <= 0.0 {
        return Err(Error::NotAdmissible(format!("f(M) = {fm} <= 0, so U does not decrease from its core")));
    }
    let eps = default_epsilon(f, cd.m, opts);

    let right = if cd.r == hi {
        None
    } else if cd.r == lo && lo.is_finite() {
        let st = singular_start_generic(b, f, lo, PoleSide::Left, cd.m, eps)?;
        let a = fm / (2.0 * (1.0 + st.b1));
        let series = Piece::Series { pole: lo, m: cd.m, a, lo, hi: st.r };
        Some(integrate_side(b, f, st.r, [st.u, st.du], 1.0, hi, cd.r, opts, Some(series))?)
    } else {
        Some(integrate_side(b, f, cd.r, [cd.m, 0.0], 1.0, hi, cd.r, opts, None)?)
    };
    let left = if cd.r == lo {
        None
    } else if cd.r == hi && hi.is_finite() {
        let st = singular_start_generic(b, f, hi, PoleSide::Right, cd.m, eps)?;
        let a = fm / (2.0 * (1.0 + st.b1));
        let series = Piece::Series { pole: hi, m: cd.m, a, lo: st.r, hi };
        Some(integrate_side(b, f, st.r, [st.u, st.du], -1.0, lo, cd.r, opts, Some(series))?)
    } else {
        Some(integrate_side(b, f, cd.r, [cd.m, 0.0], -1.0, lo, cd.r, opts, None)?)
    };

    let mut pieces = Vec::new();
    let mut nodes = Vec::new();
    let mut failure = None;
    let mut error_estimate: f64 = 0.0;
    let (mut r_minus, mut du_minus, mut left_end) = (None, None, SideEnd::Pole);
    if let Some(side) = left {
        pieces.extend(side.pieces.into_iter().rev());
        nodes.extend(side.nodes.into_iter().rev());
        left_end = side.end;
        if let Some((z, dz)) = side.zero {
            r_minus = Some(z);
            du_minus = Some(dz);
            error_estimate = error_estimate.max(side.err_sum / dz.abs());
        } else {
            failure = Some(format!("no zero of U before the singular endpoint r = {lo}"));
        }
    }
    nodes.push(Node { r: cd.r, u: cd.m, du: 0.0 });
    let (mut r_plus, mut du_plus, mut right_end) = (None, None, SideEnd::Pole);
    if let Some(side) = right {
        pieces.extend(side.pieces);
        nodes.extend(side.nodes);
        right_end = side.end;
        if let Some((z, dz)) = side.zero {
            r_plus = Some(z);
            du_plus = Some(dz);
            error_estimate = error_estimate.max(side.err_sum / dz.abs());
        } else {
            failure = Some(format!("no zero of U before the singular endpoint r = {hi}"));
        }
    }
    let admissible = failure.is_none();

    Ok(ModelProfile {
        sf: None,
        f: f.clone(),
        cauchy: cd,
        domain: interval,
        nodes,
        r_minus,
        r_plus,
        du_minus,
        du_plus,
        left_end,
        right_end,
        admissible,
        failure,
        error_estimate,
        pieces,
    })
}

#[allow(clippy::too_many_arguments)]
fn integrate_side(
    b: &dyn Fn(f64) -> f64,
    f: &Nonlinearity,
    r0: f64,
    y0: State,
    dir: f64,
    limit: f64,
    core: f64,
    opts: &SolveOptions,
    series: Option<Piece>,
) -> Result<SideResult> {
    let pole = limit.is_finite();
    let target = if pole { limit } else { core + dir * opts.r_max_cap };
    let pole_stop = 1e-14 * limit.abs().max(1.0);
    let mut rhs = |r: f64, y: &State| -> State { [y[1], -b(r) * y[1] - f.eval(y[0])] };

    let mut pieces: Vec<Piece> = series.into_iter().collect();
    let mut nodes = Vec::new();
    if r0 != core {
        nodes.push(Node { r: r0, u: y0[0], du: y0[1] });
    }
    let mut r = r0;
    let mut y = y0;
    let mut f0 = rhs(r, &y);
    let span = (target - r).abs();
    let mut h = rk::initial_step(&mut rhs, r, &y, &f0, dir, opts.rtol, opts.atol, 0.5 * span).abs();
    let mut err_sum = 0.0;
    let mut steps = 0usize;

    loop {
        let dist = (target - r).abs();
        if pole && dist <= pole_stop {
            if let Some((zero, dz, piece)) = pole_tail_zero(b, limit, dir, r, &y)? {
                pieces.push(piece);
                nodes.push(Node { r: zero, u: 0.0, du: dz });
                return Ok(SideResult { pieces, nodes, zero: Some((zero, dz)), end: SideEnd::Zero, err_sum });
            }
            return Ok(SideResult { pieces, nodes, zero: None, end: SideEnd::SingularEndpoint, err_sum });
        }
        if !pole && dist <= 1e-14 * target.abs().max(1.0) {
            return Err(Error::NoZeroFound { reached: r, cap: target });
        }
        let h_cap = if pole { 0.5 * dist } else { dist };
        let h_try = h.min(h_cap);
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::StepFailure { r, reason: format!("exceeded {} steps", opts.max_steps) });
        }
        let s = rk::step(&mut rhs, r, &y, &f0, dir * h_try);
        let err = s.error_norm(opts.rtol, opts.atol);
        let finite = s.y1.iter().all(|v| v.is_finite()) && err.is_finite();
        if !finite || err > 1.0 {
            let factor = if finite { (0.9 * err.powf(-0.2)).max(0.2) } else { 0.2 };
            h = h_try * factor;
            if h < 1e-15 * r.abs().max(1.0) {
                return Err(Error::StepFailure { r, reason: format!("step size underflow (h = {h:e})") });
            }
            continue;
        }
        err_sum += s.err[0].abs();

        if s.y1[0] <= 0.0 {
            let (zero, last) = refine_zero(&mut rhs, &s, opts)?;
            let dz = last.y1[1];
            if !(dz * dir < 0.0) {
                return Err(Error::NotAdmissible(format!("U' = {dz} does not point outward at the zero r = {zero}")));
            }
            pieces.push(Piece::Rk(last.dense()));
            nodes.push(Node { r: zero, u: last.y1[0], du: dz });
            return Ok(SideResult { pieces, nodes, zero: Some((zero, dz)), end: SideEnd::Zero, err_sum });
        }
        if !(s.y1[1] * dir < 0.0) {
            return Err(Error::NotAdmissible(format!(
                "U' = {} vanishes or turns at r = {} before U reaches zero (U = {})",
                s.y1[1],
                s.t1(),
                s.y1[0]
            )));
        }
        pieces.push(Piece::Rk(s.dense()));
        r = s.t1();
        y = s.y1;
        f0 = s.f1;
        nodes.push(Node { r, u: y[0], du: y[1] });
        let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = h_try * grow;
    }
}

/// Closes a side that has come within rounding distance of a pole without a
/// zero. There the forcing is negligible against the drift and
/// `U = C + B φ(ρ)` solves the equation; its zero (if any) is explicit.
fn pole_tail_zero(b: &dyn Fn(f64) -> f64, pole: f64, dir: f64, r: f64, y: &State) -> Result<Option<(f64, f64, Piece)>> {
    let side = if dir < 0.0 { PoleSide::Left } else { PoleSide::Right };
    let b1 = pole_residue(b, pole, side)?;
    let rho = (r - pole).abs();
    // dU/dρ with ρ increasing away from the pole.
    let w = -dir * y[1];
    if !(w > 0.0) {
        return Ok(None);
    }
    let bb = w * rho.powf(b1);
    let c = y[0] - bb * tail_phi(rho, b1);
    let rho0 = tail_phi_inverse(-c / bb, b1);
    if !(rho0 > 0.0 && rho0 < rho) {
        return Ok(None);
    }
    let dz = -dir * bb * rho0.powf(-b1);
    if !dz.is_finite() {
        return Ok(None);
    }
    let zero = pole - dir * rho0;
    if zero == pole {
        return Ok(None);
    }
    let (lo, hi) = if dir < 0.0 { (zero, r) } else { (r, zero) };
    Ok(Some((zero, dz, Piece::PoleTail { pole, c, b: bb, b1, lo, hi })))
}

/// Locates the zero of `U` inside an accepted step by Brent iteration on a
/// single re-taken step from the step's start.
fn refine_zero<F: FnMut(f64, &State) -> State>(rhs: &mut F, s: &rk::Step, opts: &SolveOptions) -> Result<(f64, rk::Step)> {
    let t0 = s.t0;
    let t1 = s.t1();
    let y0 = s.y0;
    let f0 = s.f0;
    let zero = if s.y1[0] == 0.0 {
        t1
    } else {
        let bopts = BrentOptions { xtol: 0.0, rtol: 2.0 * f64::EPSILON, ftol: opts.tol_zero, max_iter: 200 };
        brent(|t| if t == t0 { y0[0] } else { rk::step(rhs, t0, &y0, &f0, t - t0).y1[0] }, t0, t1, bopts)?
    };
    let last = rk::step(rhs, t0, &y0, &f0, zero - t0);
    Ok((zero, last))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn flat(n: u32) -> SpaceForm {
        SpaceForm::new(n, 0.0).unwrap()
    }

    #[test]
    fn flat_centered_constant_forcing() {
        let sf = flat(2);
        let f = Nonlinearity::constant(1.0).unwrap();
        let p = solve_profile(&sf, &f, CauchyData::new(0.0, 0.5).unwrap(), &SolveOptions::default()).unwrap();
        assert!(p.admissible);
        assert_eq!(p.r_minus, None);
        assert_relative_eq!(p.r_plus.unwrap(), 2f64.sqrt(), epsilon = 1e-10);
        assert_relative_eq!(p.du_plus.unwrap(), -(2f64.sqrt()) / 2.0, epsilon = 1e-10);
        for node in p.sample(0.0, p.r_plus.unwrap(), 101).unwrap() {
            assert!((node.u - (0.5 - node.r * node.r / 4.0)).abs() < 1e-10);
            assert!((node.du + node.r / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn boundary_slope_squared_is_two_m_over_n() {
        let f = Nonlinearity::constant(1.0).unwrap();
        for n in 2..=6 {
            for m in [0.1, 1.0, 10.0] {
                let p = solve_profile(&flat(n), &f, CauchyData::new(0.0, m).unwrap(), &SolveOptions::default()).unwrap();
                let d = p.du_plus.unwrap();
                assert!((d * d - 2.0 * m / f64::from(n)).abs() < 1e-10, "n={n} M={m}");
            }
        }
    }

    #[test]
    fn series_startup_matches_taylor_oracle() {
        let sf = SpaceForm::new(3, 0.0).unwrap();
        let f = Nonlinearity::constant(1.0).unwrap();
        let st = singular_start(&sf, &f, CauchyData::new(0.0, 2.0).unwrap(), 1e-4).unwrap();
        assert_relative_eq!(st.b1, 2.0, epsilon = 1e-9);
        assert_relative_eq!(st.u, 2.0 - 1e-8 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(st.du, -1e-4 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_forcing_is_not_admissible() {
        let sf = flat(2);
        let f = Nonlinearity::constant(0.0).unwrap();
        let st = singular_start(&sf, &f, CauchyData::new(0.0, 1.0).unwrap(), 1e-4).unwrap();
        assert_eq!((st.u, st.du), (1.0, 0.0));
        let err = solve_profile(&sf, &f, CauchyData::new(0.0, 1.0).unwrap(), &SolveOptions::default());
        assert!(matches!(err, Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn no_drift_double_integration() {
        let f = Nonlinearity::constant(1.0).unwrap();
        let zero = |_r: f64| 0.0;
        let cd = CauchyData::new(1.0, 2.0).unwrap();
        let p = solve_generic(&zero, &f, cd, (f64::NEG_INFINITY, f64::INFINITY), &SolveOptions::default()).unwrap();
        assert_relative_eq!(p.r_plus.unwrap(), 3.0, epsilon = 1e-10);
        assert_relative_eq!(p.r_minus.unwrap(), -1.0, epsilon = 1e-10);
        for r in [-0.5, 0.3, 1.7, 2.9] {
            assert!((p.u(r).unwrap() - (2.0 - (r - 1.0) * (r - 1.0) / 2.0)).abs() < 1e-11);
        }
    }

    #[test]
    fn generic_engine_reproduces_radial_solve_exactly() {
        let sf = SpaceForm::new(3, -1.0).unwrap();
        let f = Nonlinearity::serrin_fk(3, -1.0).unwrap();
        let cd = CauchyData::new(0.7, 0.2).unwrap();
        let opts = SolveOptions::default();
        let a = solve_profile(&sf, &f, cd, &opts).unwrap();
        let b = |r: f64| (3.0 - 1.0) * sf.cot_k(r).unwrap();
        let g = solve_generic(&b, &f, cd, (0.0, f64::INFINITY), &opts).unwrap();
        assert_eq!(a.r_plus, g.r_plus);
        assert_eq!(a.r_minus, g.r_minus);
        assert_eq!(a.nodes, g.nodes);
    }

    #[test]
    fn reflection_symmetry_on_the_sphere() {
        let sf = SpaceForm::new(3, 1.0).unwrap();
        let f = Nonlinearity::serrin_fk(3, 1.0).unwrap();
        let opts = SolveOptions::default();
        for r in [0.0, 0.4, 1.1] {
            let a = solve_profile(&sf, &f, CauchyData::new(r, 0.8).unwrap(), &opts).unwrap();
            let b = solve_profile(&sf, &f, CauchyData::new(PI - r, 0.8).unwrap(), &opts).unwrap();
            assert!(a.admissible && b.admissible);
            let (lo, hi) = a.support();
            for node in a.sample(lo, hi, 41).unwrap() {
                let (u2, du2) = b.eval(PI - node.r).unwrap();
                assert!((node.u - u2).abs() < 1e-8, "R={r} r={}", node.r);
                assert!((node.du + du2).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn turning_profile_is_rejected() {
        // f < 0 below 3/4 pushes U back up before it can reach zero.
        let f = Nonlinearity::polynomial(vec![-3.0, 4.0]).unwrap();
        let err = solve_profile(&flat(2), &f, CauchyData::new(0.0, 1.0).unwrap(), &SolveOptions::default());
        assert!(matches!(err, Err(Error::NotAdmissible(_))), "{err:?}");
    }

    #[test]
    fn cap_reports_no_zero() {
        // Linear f with the wrong sign in hyperbolic space decays without crossing.
        let sf = SpaceForm::new(3, -1.0).unwrap();
        let f = Nonlinearity::affine(0.5, 0.0).unwrap();
        let opts = SolveOptions { r_max_cap: 30.0, ..SolveOptions::default() };
        let err = solve_profile(&sf, &f, CauchyData::new(0.0, 1.0).unwrap(), &opts);
        assert!(matches!(err, Err(Error::NoZeroFound { .. })), "{err:?}");
    }

    #[test]
    fn divergence_form_identity() {
        use crate::numerics::{integrate, QuadOptions};
        let sf = SpaceForm::new(4, -1.0).unwrap();
        let f = Nonlinearity::serrin_fk(4, -1.0).unwrap();
        let p = solve_profile(&sf, &f, CauchyData::new(0.5, 0.2).unwrap(), &SolveOptions::default()).unwrap();
        let (lo, hi) = p.support();
        for r in [lo + 1e-3, 0.3, 1.0, hi] {
            let flux = p.du(r).unwrap() * sf.s_k(r).unwrap().powi(3);
            let mass = integrate(
                |x| sf.s_k(x).unwrap().powi(3) * f.eval(p.u(x).unwrap()),
                0.5,
                r,
                QuadOptions::default(),
            )
            .unwrap();
            assert!((flux + mass).abs() < 1e-9, "r={r}: {flux} vs {mass}");
        }
    }

    #[test]
    fn halving_tolerance_moves_zero_within_error_estimate() {
        let sf = SpaceForm::new(3, 1.0).unwrap();
        let f = Nonlinearity::allen_cahn(3.0).unwrap();
        let cd = CauchyData::new(0.9, 0.6).unwrap();
        let opts = SolveOptions { rtol: 1e-7, atol: 1e-9, ..SolveOptions::default() };
        let a = solve_profile(&sf, &f, cd, &opts).unwrap();
        let b = solve_profile(&sf, &f, cd, &opts.scaled(0.5)).unwrap();
        let est = a.error_estimate.max(f64::EPSILON);
        assert!((a.r_plus.unwrap() - b.r_plus.unwrap()).abs() < 10.0 * est);
        assert!((a.r_minus.unwrap() - b.r_minus.unwrap()).abs() < 10.0 * est);
    }
}
