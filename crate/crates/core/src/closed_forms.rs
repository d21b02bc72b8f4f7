//! Analytic solutions of the radial model equation, used as independent
//! oracles for the shooting integrator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{brent, integrate, BrentOptions, QuadOptions};
use crate::spaceform::SpaceForm;

/// Centered flat profile for `f ≡ 1`: `U = M − r²/(2n)`, `U' = −r/n`.
pub fn serrin_flat_centered(n: u32, m: f64, r: f64) -> Result<(f64, f64)> {
    if n < 2 || !(m > 0.0) {
        return Err(Error::InvalidParameter(format!("need n >= 2 and M > 0, got n = {n}, M = {m}")));
    }
    let nn = f64::from(n);
    let r_plus = (2.0 * nn * m).sqrt();
    if !(r >= 0.0 && r <= r_plus * (1.0 + 4.0 * f64::EPSILON)) {
        return Err(Error::Domain(format!("r = {r} outside [0, {r_plus}]")));
    }
    Ok((m - r * r / (2.0 * nn), -r / nn))
}

/// Zero `√(2nM)` of the centered flat profile.
pub fn serrin_flat_radius(n: u32, m: f64) -> f64 {
    (2.0 * f64::from(n) * m).sqrt()
}

fn require_unit_curvature(sf: &SpaceForm) -> Result<()> {
    if sf.k() == 1.0 || sf.k() == -1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("explicit form needs k = ±1 (rescale first), got k = {}", sf.k())))
    }
}

/// `(1 − s^n) / (c² s^(n−1))` written to stay accurate where `c = cos r → 0`.
fn sphere_integrand(n: f64, r: f64) -> f64 {
    let (s, c) = r.sin_cos();
    let c2 = c * c;
    let one_minus = -((0.5 * n) * (-c2).ln_1p()).exp_m1();
    if c2 < 1e-300 {
        return 0.5 * n;
    }
    one_minus / (c2 * s.powf(n - 1.0))
}

/// Integral of `g` over `[a, b]` with a logarithmic substitution on the part
/// below 1 so that the `ρ^(1−n)` behaviour near 0 stays resolved.
fn integrate_log_near_zero<F: Fn(f64) -> f64>(g: F, a: f64, b: f64) -> Result<f64> {
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-13, max_intervals: 4000 };
    let split = b.min(1.0);
    let mut total = 0.0;
    if a < split {
        total += integrate(|x| {
            let rho = x.exp();
            g(rho) * rho
        }, a.ln(), split.ln(), opts)?;
    }
    let lo = a.max(split);
    if lo < b {
        total += integrate(&g, lo, b, opts)?;
    }
    Ok(total)
}

/// `J(r) = ∫_r^∞ dρ / (cosh² ρ sinh^(n−1) ρ)` for the hyperbolic case.
fn hyperbolic_tail(n: f64, r: f64) -> Result<f64> {
    let g = |rho: f64| 1.0 / (rho.cosh().powi(2) * rho.sinh().powf(n - 1.0));
    integrate_log_near_zero(g, r, r.max(1.0) + 60.0)
}

/// `G_k(r) = ∫_r^{e_k} (1 − s_k^n) / (c_k² s_k^(n−1)) dρ` with `c_k = s_k'`,
/// `e_1 = π/2` and `e_{−1} = +∞`; solves `(G_k − k/c_k)' = −1/(c_k² s_k^(n−1))`.
pub fn g_k(sf: &SpaceForm, r: f64) -> Result<f64> {
    require_unit_curvature(sf)?;
    let n = sf.dim();
    if sf.k() > 0.0 {
        if !(r > 0.0 && r < std::f64::consts::PI) {
            return Err(Error::Domain(format!("G_1 needs 0 < r < π, got {r}")));
        }
        let half = std::f64::consts::FRAC_PI_2;
        if r <= half {
            integrate_log_near_zero(|x| sphere_integrand(n, x), r, half)
        } else {
            // Reflect onto (0, π/2): the integrand is symmetric about π/2.
            Ok(-integrate_log_near_zero(|x| sphere_integrand(n, x), std::f64::consts::PI - r, half)?)
        }
    } else {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("G_-1 needs r > 0, got {r}")));
        }
        Ok(hyperbolic_tail(n, r)? - 1.0 / r.cosh())
    }
}

/// Derivative `G_k'(r) = −(1 − s_k^n) / (c_k² s_k^(n−1))`.
pub fn g_k_deriv(sf: &SpaceForm, r: f64) -> Result<f64> {
    require_unit_curvature(sf)?;
    let n = sf.dim();
    if sf.k() > 0.0 {
        Ok(-sphere_integrand(n, r))
    } else {
        let (s, c) = (r.sinh(), r.cosh());
        Ok(-(1.0 - s.powf(n)) / (c * c * s.powf(n - 1.0)))
    }
}

/// Explicit profile for `f = nkx + 1`, `k = ±1`:
/// `V = −1/(nk) + A c_k + B y₂` with the second homogeneous solution
/// `y₂ = c_k G_k − k`, constants fixed by `V(R) = M`, `V'(R) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SerrinExplicit {
    pub sf: SpaceForm,
    pub r_core: f64,
    pub m: f64,
    pub a: f64,
    pub b: f64,
}

impl SerrinExplicit {
    pub fn new(sf: &SpaceForm, r_core: f64, m: f64) -> Result<Self> {
        require_unit_curvature(sf)?;
        if !(r_core > 0.0 && r_core < sf.r_bar()) {
            return Err(Error::Domain(format!("core radius {r_core} must lie in (0, r_bar)")));
        }
        let nk = sf.dim() * sf.k();
        let mut me = Self { sf: *sf, r_core, m, a: 0.0, b: 0.0 };
        let (y2, dy2) = me.second_solution(r_core)?;
        let (c, dc) = (sf.ds_k(r_core)?, -sf.k() * sf.s_k(r_core)?);
        let rhs = m + 1.0 / nk;
        let det = c * dy2 - dc * y2;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Domain("degenerate Wronskian at the core".into()));
        }
        me.a = rhs * dy2 / det;
        me.b = -rhs * dc / det;
        Ok(me)
    }

    /// `(y₂, y₂')` at `r`.
    pub fn second_solution(&self, r: f64) -> Result<(f64, f64)> {
        let sf = &self.sf;
        let n = sf.dim();
        let c = sf.ds_k(r)?;
        let dc = -sf.k() * sf.s_k(r)?;
        if sf.k() > 0.0 {
            let g = g_k(sf, r)?;
            Ok((c * g - 1.0, dc * g + c * g_k_deriv(sf, r)?))
        } else {
            let j = hyperbolic_tail(n, r)?;
            let s = sf.s_k(r)?;
            Ok((c * j, dc * j - 1.0 / (c * s.powf(n - 1.0))))
        }
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        Ok(self.eval(r)?.0)
    }

    /// `(V, V')` at `r`.
    pub fn eval(&self, r: f64) -> Result<(f64, f64)> {
        let sf = &self.sf;
        let nk = sf.dim() * sf.k();
        let c = sf.ds_k(r)?;
        let dc = -sf.k() * sf.s_k(r)?;
        let (y2, dy2) = self.second_solution(r)?;
        Ok((-1.0 / nk + self.a * c + self.b * y2, self.a * dc + self.b * dy2))
    }
}

/// Value of the explicit profile `V_{R,M,k}` at `r`.
pub fn serrin_explicit(sf: &SpaceForm, r_core: f64, m: f64, r: f64) -> Result<f64> {
    SerrinExplicit::new(sf, r_core, m)?.value(r)
}

/// Closed-form radial solution on the unit 3-sphere for `f = λx + β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelmholtzS3 {
    pub lambda: f64,
    pub beta: f64,
    pub r_core: f64,
    pub m: f64,
}

impl HelmholtzS3 {
    pub fn new(lambda: f64, beta: f64, r_core: f64, m: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("λ = {lambda} must be finite and non-zero")));
        }
        if !(1.0 + lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("need 1 + λ > 0, got λ = {lambda}")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&r_core) {
            return Err(Error::Domain(format!("core radius {r_core} outside [0, π]")));
        }
        Ok(Self { lambda, beta, r_core, m })
    }

    fn parts(&self, r: f64) -> Result<(f64, f64, f64, f64)> {
        if !(r > 0.0 && r < std::f64::consts::PI) {
            return Err(Error::Singularity { r, what: "csc(r) has poles at 0 and π" });
        }
        let w = (1.0 + self.lambda).sqrt();
        let (sr, cr) = self.r_core.sin_cos();
        let (sw, cw) = (w * (r - self.r_core)).sin_cos();
        let g = sr * cw + cr * sw / w;
        let dg = -sr * w * sw + cr * cw;
        let ddg = -w * w * g;
        Ok((g, dg, ddg, (self.lambda * self.m + self.beta) / self.lambda))
    }

    /// The displayed closed form
    /// `u = (csc r sin R (λM+β) cos(ω(r−R)) + csc r cos R (λM+β) sin(ω(r−R))/ω − β)/λ`, `ω = √(1+λ)`.
    pub fn value(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r < std::f64::consts::PI) {
            return Err(Error::Singularity { r, what: "csc(r) has poles at 0 and π" });
        }
        let (l, b, rr, m) = (self.lambda, self.beta, self.r_core, self.m);
        let w = (1.0 + l).sqrt();
        let csc = 1.0 / r.sin();
        Ok((csc * rr.sin() * (l * m + b) * (w * (r - rr)).cos() + csc * rr.cos() * (l * m + b) * (w * (r - rr)).sin() / w
            - b)
            / l)
    }

    pub fn deriv(&self, r: f64) -> Result<f64> {
        let (g, dg, _, kk) = self.parts(r)?;
        let (s, c) = r.sin_cos();
        Ok(kk * (dg / s - g * c / (s * s)))
    }

    pub fn second_deriv(&self, r: f64) -> Result<f64> {
        let (g, dg, ddg, kk) = self.parts(r)?;
        let (s, c) = r.sin_cos();
        Ok(kk * (ddg / s - 2.0 * dg * c / (s * s) + g * (1.0 / s + 2.0 * c * c / (s * s * s))))
    }

    /// `U'' + 2 cot(r) U' + λU + β` at `r`.
    pub fn residual(&self, r: f64) -> Result<f64> {
        Ok(self.second_deriv(r)? + 2.0 * r.cos() / r.sin() * self.deriv(r)? + self.lambda * self.value(r)? + self.beta)
    }
}

/// Value of the S³ Helmholtz closed form.
pub fn helmholtz_s3(lambda: f64, beta: f64, r_core: f64, m: f64, r: f64) -> Result<f64> {
    HelmholtzS3::new(lambda, beta, r_core, m)?.value(r)
}

/// Large-core limit profile `V∞(s) = 1 − (e^{−ns} + n e^{s}) / ((n+1)(M+1))`
/// for the hyperbolic problem in the normalization where the centered
/// profile is `1 − cosh(r)/(M+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticProfile {
    pub n: u32,
    pub m: f64,
    pub s_minus: f64,
    pub s_plus: f64,
    /// `(|V∞'(s₊)|, |V∞'(s₋)|)`: limits of the outer and inner boundary slopes.
    pub predicted_limits: (f64, f64),
}

impl AsymptoticProfile {
    pub fn value(&self, s: f64) -> f64 {
        let nn = f64::from(self.n);
        1.0 - ((-nn * s).exp() + nn * s.exp()) / ((nn + 1.0) * (self.m + 1.0))
    }

    pub fn deriv(&self, s: f64) -> f64 {
        let nn = f64::from(self.n);
        nn * ((-nn * s).exp() - s.exp()) / ((nn + 1.0) * (self.m + 1.0))
    }

    /// Squared boundary slope of the centered profile in this normalization,
    /// `1 − 1/(M+1)²`.
    pub fn centered_slope_sq(&self) -> f64 {
        1.0 - 1.0 / ((self.m + 1.0) * (self.m + 1.0))
    }

    /// Predicted boundary-response gap `[L₊²/c, L₋²/c]`.
    pub fn tau_gap(&self) -> (f64, f64) {
        let c = self.centered_slope_sq();
        (self.predicted_limits.0.powi(2) / c, self.predicted_limits.1.powi(2) / c)
    }

    pub fn gap_length(&self) -> f64 {
        let (a, b) = self.tau_gap();
        b - a
    }

    /// Limit of `|U'(r₋) + U'(r₊)|` in this normalization.
    pub fn slope_sum_limit(&self) -> f64 {
        self.predicted_limits.1 - self.predicted_limits.0
    }

    /// Maximum value of the matching profile for `f = −nx + 1`, i.e. `M/(n(M+1))`.
    pub fn unscaled_max(&self) -> f64 {
        self.m / (f64::from(self.n) * (self.m + 1.0))
    }
}

/// Roots and predicted boundary-slope limits of `V∞`.
pub fn asymptotic_gap(n: u32, m: f64) -> Result<AsymptoticProfile> {
    if n < 2 || !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidParameter(format!("need n >= 2 and M > 0, got n = {n}, M = {m}")));
    }
    let nn = f64::from(n);
    let level = (nn + 1.0) * (m + 1.0);
    let h = |s: f64| (-nn * s).exp() + nn * s.exp() - level;
    let opts = BrentOptions::default();
    let hi = (level / nn).ln() + 1.0;
    let lo = -(level.ln() / nn) - 1.0;
    let s_plus = brent(h, 0.0, hi, opts)?;
    let s_minus = brent(h, lo, 0.0, opts)?;
    let scale = nn / level;
    let lim_plus = scale * (s_plus.exp() - (-nn * s_plus).exp());
    let lim_minus = scale * ((-nn * s_minus).exp() - s_minus.exp());
    Ok(AsymptoticProfile { n, m, s_minus, s_plus, predicted_limits: (lim_plus, lim_minus) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn flat_examples() {
        assert_eq!(serrin_flat_centered(2, 0.5, 0.0).unwrap(), (0.5, 0.0));
        let (u, du) = serrin_flat_centered(2, 0.5, 2f64.sqrt()).unwrap();
        assert!(u.abs() < 1e-15);
        assert_relative_eq!(du, -(2f64.sqrt()) / 2.0, epsilon = 1e-15);
        let (u, du) = serrin_flat_centered(3, 1.0, 1.0).unwrap();
        assert_relative_eq!(u, 1.0 - 1.0 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(du, -1.0 / 3.0, epsilon = 1e-15);
        assert!(serrin_flat_centered(2, 0.5, 1.5).is_err());
    }

    #[test]
    fn g_k_derivative_identity() {
        for (k, n) in [(1.0, 2), (1.0, 3), (-1.0, 2), (-1.0, 4)] {
            let sf = SpaceForm::new(n, k).unwrap();
            for r in [0.2, 0.7, 1.3, 2.0] {
                let h = 1e-4;
                let fd = (g_k(&sf, r + h).unwrap() - g_k(&sf, r - h).unwrap()) / (2.0 * h);
                let d = g_k_deriv(&sf, r).unwrap();
                assert!((fd - d).abs() < 1e-6 * d.abs().max(1.0), "k={k} n={n} r={r}: {fd} vs {d}");
            }
        }
    }

    #[test]
    fn g_k_is_smooth_across_the_equator() {
        let sf = SpaceForm::new(3, 1.0).unwrap();
        let a = g_k(&sf, PI / 2.0 - 1e-7).unwrap();
        let b = g_k(&sf, PI / 2.0 + 1e-7).unwrap();
        assert!((a - b).abs() < 1e-6);
        assert!(a.abs() < 1e-6);
    }

    #[test]
    fn g_k_slope_blows_up_like_r_power() {
        for (k, n) in [(1.0, 2), (1.0, 3), (-1.0, 3), (-1.0, 5)] {
            let sf = SpaceForm::new(n, k).unwrap();
            let lim: Vec<f64> = [1e-2, 1e-3, 1e-4]
                .iter()
                .map(|&r| -g_k_deriv(&sf, r).unwrap() * r.powi(n as i32 - 1))
                .collect();
            assert!((lim[2] - 1.0).abs() < 1e-6, "{lim:?}");
            assert!((lim[2] - 1.0).abs() < (lim[0] - 1.0).abs());
        }
        let sf = SpaceForm::new(4, -1.0).unwrap();
        let scaled = g_k(&sf, 1e-3).unwrap() * 1e-6;
        assert!((scaled - 0.5).abs() < 1e-3, "{scaled}");
    }

    fn residual(e: &SerrinExplicit, r: f64) -> f64 {
        let h = 1e-4;
        let (v, dv) = e.eval(r).unwrap();
        let ddv = (e.eval(r + h).unwrap().1 - e.eval(r - h).unwrap().1) / (2.0 * h);
        let sf = e.sf;
        ddv + (sf.dim() - 1.0) * sf.cot_k(r).unwrap() * dv + sf.dim() * sf.k() * v + 1.0
    }

    #[test]
    fn explicit_profile_reproduces_cauchy_data_and_ode() {
        for (k, n, r0, m) in [(-1.0, 2, 1.0, 0.25), (-1.0, 3, 0.5, 0.2), (1.0, 3, 1.0, 0.8), (1.0, 2, 2.0, 0.5)] {
            let sf = SpaceForm::new(n, k).unwrap();
            let e = SerrinExplicit::new(&sf, r0, m).unwrap();
            let (v, dv) = e.eval(r0).unwrap();
            assert!((v - m).abs() < 1e-12, "V(R) = {v}");
            assert!(dv.abs() < 1e-12, "V'(R) = {dv}");
            for r in [0.6 * r0, 0.9 * r0, 1.1 * r0, 1.3 * r0] {
                assert!(residual(&e, r).abs() < 1e-6, "k={k} n={n} r={r}");
            }
        }
    }

    #[test]
    fn helmholtz_cauchy_data_and_residual() {
        for (l, b, r0) in [(-0.25, 2.5, 0.7), (1.0, 2.9, PI / 2.0), (0.5, 1.0, 2.2)] {
            let h = HelmholtzS3::new(l, b, r0, 1.0).unwrap();
            assert!((h.value(r0).unwrap() - 1.0).abs() < 1e-12);
            assert!(h.deriv(r0).unwrap().abs() < 1e-12);
            for r in [0.3, 0.9, 1.6, 2.4, 3.0] {
                assert!(h.residual(r).unwrap().abs() < 1e-10, "λ={l} r={r}");
                let fd = (h.value(r + 1e-5).unwrap() - h.value(r - 1e-5).unwrap()) / 2e-5;
                assert!((fd - h.deriv(r).unwrap()).abs() < 1e-7 * h.deriv(r).unwrap().abs().max(1.0));
            }
        }
        assert!(HelmholtzS3::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(HelmholtzS3::new(-1.0, 1.0, 1.0, 1.0).is_err());
        assert!(helmholtz_s3(0.5, 1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn asymptotic_profile_examples() {
        let m = 3f64.cosh() - 1.0;
        for n in 2..=4 {
            let a = asymptotic_gap(n, m).unwrap();
            assert!(a.s_minus < 0.0 && a.s_plus > 0.0);
            assert!(a.value(a.s_minus).abs() < 1e-12 && a.value(a.s_plus).abs() < 1e-12);
            assert_relative_eq!(a.value(0.0), 1.0 - 1.0 / (m + 1.0), epsilon = 1e-15);
            assert!(a.predicted_limits.0 < a.predicted_limits.1);
            assert_relative_eq!(a.predicted_limits.0, -a.deriv(a.s_plus), epsilon = 1e-12);
            assert_relative_eq!(a.predicted_limits.1, a.deriv(a.s_minus), epsilon = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn asymptotic_roots_bracket_origin(n in 2u32..9, m in 0.01f64..100.0) {
            let a = asymptotic_gap(n, m).unwrap();
            prop_assert!(a.s_minus < 0.0 && 0.0 < a.s_plus);
            prop_assert!(a.value(a.s_minus).abs() < 1e-12);
            prop_assert!(a.value(a.s_plus).abs() < 1e-12);
            prop_assert!(a.predicted_limits.0 < a.predicted_limits.1);
        }

        #[test]
        fn helmholtz_residual_vanishes(l in -0.9f64..3.0, b in 0.1f64..4.0, r0 in 0.1f64..3.0, r in 0.05f64..3.09) {
            prop_assume!(l.abs() > 1e-3);
            let h = HelmholtzS3::new(l, b, r0, 1.0).unwrap();
            let scale = h.value(r).unwrap().abs().max(1.0) * (1.0 + 1.0 / r.sin().powi(2));
            prop_assert!(h.residual(r).unwrap().abs() < 1e-10 * scale);
        }
    }
}
