//! Profiles along isoparametric foliations of the round sphere `S^n`.
//!
//! A family with `ℓ` distinct principal curvatures and multiplicities
//! `(m₁, m₂)` reduces the equation to `Z'' + b(s) Z' + f(Z) = 0` on
//! `(0, π/ℓ)`, where `s` is the distance to the first focal submanifold and
//! `b(s) = (n−1) cot(ℓs) − c / (ℓ sin(ℓs))` with `c = ℓ²(m₂ − m₁)/2`.

use std::fmt;
use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::numerics::{integrate, QuadOptions};
use crate::radial::{solve_generic, CauchyData, ModelProfile, SolveOptions};

const ALLOWED_ELL: [u32; 5] = [1, 2, 3, 4, 6];

/// Cartan–Münzner data `(ℓ, m₁, m₂)` on `S^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsoparametricFamily {
    pub ell: u32,
    pub m1: u32,
    pub m2: u32,
    pub n: u32,
    pub c: f64,
}

impl IsoparametricFamily {
    pub fn new(ell: u32, m1: u32, m2: u32, n: u32) -> Result<Self> {
        if !ALLOWED_ELL.contains(&ell) {
            return Err(Error::InvalidParameter(format!("ell = {ell} is not one of 1, 2, 3, 4, 6")));
        }
        if m1 == 0 || m2 == 0 {
            return Err(Error::InvalidParameter("multiplicities must be positive".into()));
        }
        if ell % 2 == 1 && m1 != m2 {
            return Err(Error::InvalidParameter(format!("ell = {ell} is odd, so m1 = {m1} and m2 = {m2} must agree")));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!("sphere dimension n = {n} must be at least 2")));
        }
        Ok(Self { ell, m1, m2, n, c: Self::c_of(ell, m1, m2) })
    }

    fn c_of(ell: u32, m1: u32, m2: u32) -> f64 {
        f64::from(ell * ell) * (f64::from(m2) - f64::from(m1)) / 2.0
    }

    /// Checks that the stored `c` matches the one recomputed from `(ℓ, m₁, m₂)`.
    pub fn validate(&self) -> Result<()> {
        let fresh = Self::new(self.ell, self.m1, self.m2, self.n)?;
        if fresh.c != self.c {
            return Err(Error::InvalidParameter(format!("stored c = {} but (ell, m1, m2) give {}", self.c, fresh.c)));
        }
        Ok(())
    }

    /// Warning when `n − 1 ≠ ℓ(m₁ + m₂)/2`; the relation is not enforced.
    pub fn dimension_warning(&self) -> Option<String> {
        let lhs = 2 * (self.n - 1);
        let rhs = self.ell * (self.m1 + self.m2);
        (lhs != rhs).then(|| {
            format!(
                "n - 1 = {} differs from ell (m1 + m2) / 2 = {}",
                self.n - 1,
                f64::from(rhs) / 2.0
            )
        })
    }

    /// Right end `π/ℓ` of the parameter interval.
    pub fn s_max(&self) -> f64 {
        PI / f64::from(self.ell)
    }
}

/// `b(s) = (n−1) cot(ℓs) − c / (ℓ sin(ℓs))`.
pub fn iso_coefficient(family: &IsoparametricFamily, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < family.s_max()) {
        return Err(Error::Domain(format!("s = {s} must lie in (0, {})", family.s_max())));
    }
    Ok(iso_coefficient_unchecked(family, s))
}

fn iso_coefficient_unchecked(family: &IsoparametricFamily, s: f64) -> f64 {
    let l = f64::from(family.ell);
    let (sn, cs) = (l * s).sin_cos();
    (f64::from(family.n) - 1.0) * cs / sn - family.c / (l * sn)
}

/// Shape of the domain `{Z > 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoDomain {
    /// Band between two regular leaves `s₋ < s < s₊`.
    LeafBand,
    /// Tube `s < s₊` around the focal submanifold at `s = 0`.
    FocalCapPlus,
    /// Tube `s > s₋` around the focal submanifold at `s = π/ℓ`.
    FocalCapMinus,
}

impl fmt::Display for IsoDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::LeafBand => "leaf-band",
            Self::FocalCapPlus => "focal-cap-plus",
            Self::FocalCapMinus => "focal-cap-minus",
        })
    }
}

/// A profile `Z_{S,M,f}` with `Z(S) = M`, `Z'(S) = 0`.
#[derive(Debug, Clone)]
pub struct IsoProfile {
    pub family: IsoparametricFamily,
    pub f: Nonlinearity,
    pub s_core: f64,
    pub m: f64,
    pub profile: ModelProfile,
    /// `cos(ℓS)`.
    pub r_param: f64,
    pub domain: IsoDomain,
}

/// Flat summary used by exports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoSummary {
    pub ell: u32,
    pub m1: u32,
    pub m2: u32,
    pub c: f64,
    pub n: u32,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub s_minus: Option<f64>,
    pub s_plus: Option<f64>,
    pub domain: IsoDomain,
}

impl IsoProfile {
    pub fn s_minus(&self) -> Option<f64> {
        self.profile.r_minus
    }

    pub fn s_plus(&self) -> Option<f64> {
        self.profile.r_plus
    }

    pub fn summary(&self) -> IsoSummary {
        IsoSummary {
            ell: self.family.ell,
            m1: self.family.m1,
            m2: self.family.m2,
            c: self.family.c,
            n: self.family.n,
            s: self.s_core,
            m: self.m,
            s_minus: self.s_minus(),
            s_plus: self.s_plus(),
            domain: self.domain,
        }
    }

    /// `Z'(s) − Z'(S) + ∫_S^s (b Z' + f(Z)) dσ`, the integrated form of the equation.
    pub fn residual(&self, s: f64) -> Result<f64> {
        let (_, dz) = self.profile.eval(s)?;
        let fam = self.family;
        let p = &self.profile;
        let integral = integrate(
            |x| match p.eval(x) {
                Ok((z, dz)) => {
                    let b = if dz == 0.0 { 0.0 } else { iso_coefficient_unchecked(&fam, x) * dz };
                    b + p.f.eval(z)
                }
                Err(_) => f64::NAN,
            },
            self.s_core,
            s,
            QuadOptions { abs_tol: 1e-14, rel_tol: 1e-12, max_intervals: 4000 },
        )?;
        Ok(dz + integral)
    }
}

/// Integrates the reduced equation from `Z(S) = M`, `Z'(S) = 0`.
pub fn solve_iso_profile(
    family: &IsoparametricFamily,
    f: &Nonlinearity,
    s_core: f64,
    m: f64,
    opts: &SolveOptions,
) -> Result<IsoProfile> {
    family.validate()?;
    let s_max = family.s_max();
    if !(0.0..=s_max).contains(&s_core) {
        return Err(Error::InvalidParameter(format!("S = {s_core} outside [0, {s_max}]")));
    }
    let fam = *family;
    let b = move |s: f64| iso_coefficient_unchecked(&fam, s);
    let profile = solve_generic(&b, f, CauchyData::new(s_core, m)?, (0.0, s_max), opts)?;
    let domain = if s_core == 0.0 {
        IsoDomain::FocalCapPlus
    } else if s_core == s_max {
        IsoDomain::FocalCapMinus
    } else {
        IsoDomain::LeafBand
    };
    Ok(IsoProfile {
        family: *family,
        f: f.clone(),
        s_core,
        m,
        profile,
        r_param: (f64::from(family.ell) * s_core).cos(),
        domain,
    })
}

/// Free isometric actions considered for descending a profile to a quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientGroup {
    Antipodal,
    HopfCircle,
    CyclicP,
}

impl FromStr for QuotientGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "antipodal" => Ok(Self::Antipodal),
            "hopf_circle" | "hopf" => Ok(Self::HopfCircle),
            "cyclic_p" | "cyclic" | "lens" => Ok(Self::CyclicP),
            other => Err(Error::UnsupportedGroup(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentResult {
    pub descends: bool,
    /// True when the answer rests on metadata the caller asserts.
    pub conditional: bool,
    pub note: String,
}

pub fn descent_check(family: &IsoparametricFamily, group: QuotientGroup) -> DescentResult {
    match group {
        QuotientGroup::Antipodal => {
            let even = family.ell.is_multiple_of(2);
            DescentResult {
                descends: even,
                conditional: false,
                note: if even {
                    "ell is even: the antipodal map preserves every leaf".into()
                } else {
                    "ell is odd: the antipodal map exchanges leaves, so the foliation does not descend".into()
                },
            }
        }
        QuotientGroup::HopfCircle | QuotientGroup::CyclicP => {
            let odd = family.n % 2 == 1;
            let what = if group == QuotientGroup::HopfCircle { "Hopf circle action" } else { "cyclic subgroup of the Hopf circle" };
            DescentResult {
                descends: odd,
                conditional: odd,
                note: if odd {
                    format!("{what} is free on S^{}; descends provided the family is Hopf invariant (not verified)", family.n)
                } else {
                    format!("S^{} has even dimension and carries no free {what}", family.n)
                },
            }
        }
    }
}
