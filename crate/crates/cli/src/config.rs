//! Command-line parameters and their JSON-file counterpart.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Deserializer};

use warpcmp::{Error, Nonlinearity, Result, SolveOptions, SpaceForm};

/// Parameters shared by all computing subcommands. Every field is optional on
/// the command line; `--config` values take precedence.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Dimension, or a comma-separated list for `fig-gap`.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many")]
    pub n: Option<Vec<u32>>,
    /// Curvature of the model space.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Nonlinearity `name:p1,p2`; `serrin` alone uses the current n and k.
    #[arg(long)]
    pub f: Option<String>,
    /// Core radius.
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub r_core: Option<f64>,
    /// Maximum value.
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<f64>,
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long)]
    pub atol: Option<f64>,
    #[arg(long)]
    pub r_max_cap: Option<f64>,
    /// First core radius of a scan.
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Last core radius of a scan.
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Number of scan radii.
    #[arg(long)]
    pub count: Option<usize>,
    /// Number of output samples.
    #[arg(long)]
    pub points: Option<usize>,
    /// Branch for pair-based reports: `plus` or `minus`.
    #[arg(long)]
    pub sign: Option<String>,
    /// Inradius for the hot-spot distance bound.
    #[arg(long)]
    pub r_omega: Option<f64>,
    #[arg(long)]
    pub ell: Option<u32>,
    #[arg(long)]
    pub m1: Option<u32>,
    #[arg(long)]
    pub m2: Option<u32>,
    /// Core leaf parameter of an isoparametric profile.
    #[arg(long = "S")]
    #[serde(rename = "S")]
    pub s_core: Option<f64>,
    /// Quotient group for the descent check: antipodal, hopf_circle or cyclic_p.
    #[arg(long)]
    pub group: Option<String>,
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<u32>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(u32),
        Many(Vec<u32>),
    }
    Ok(Option::<OneOrMany>::deserialize(d)?.map(|v| match v {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(xs) => xs,
    }))
}

fn missing(name: &str) -> Error {
    Error::InvalidParameter(format!("missing required parameter '{name}'"))
}

impl Params {
    /// Fills every field that is set in `other`.
    pub fn override_with(&mut self, other: Params) {
        macro_rules! take {
            ($($field:ident),*) => { $( if other.$field.is_some() { self.$field = other.$field; } )* };
        }
        take!(n, k, f, r_core, m, rtol, atol, r_max_cap, r_min, r_max, count, points, sign, r_omega, ell, m1, m2, s_core, group);
    }

    pub fn load(path: &Path) -> Result<Params> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidParameter(format!("config {}: {e}", path.display())))
    }

    pub fn n(&self) -> Result<u32> {
        match self.n.as_deref() {
            Some([n]) => Ok(*n),
            Some(_) => Err(Error::InvalidParameter("expected a single dimension n".into())),
            None => Err(missing("n")),
        }
    }

    pub fn n_list(&self) -> Result<Vec<u32>> {
        match &self.n {
            Some(v) if !v.is_empty() => Ok(v.clone()),
            _ => Err(missing("n")),
        }
    }

    pub fn k(&self) -> Result<f64> {
        self.k.ok_or_else(|| missing("k"))
    }

    pub fn m(&self) -> Result<f64> {
        self.m.ok_or_else(|| missing("M"))
    }

    pub fn space_form(&self) -> Result<SpaceForm> {
        SpaceForm::new(self.n()?, self.k()?)
    }

    pub fn nonlinearity(&self) -> Result<Nonlinearity> {
        let text = self.f.as_deref().ok_or_else(|| missing("f"))?;
        match text.trim() {
            "serrin" | "serrin_fk" | "serrin-fk" => Nonlinearity::serrin_fk(self.n()?, self.k()?),
            other => other.parse(),
        }
    }

    pub fn solve_options(&self) -> Result<SolveOptions> {
        let mut o = SolveOptions::default();
        if let Some(x) = self.rtol {
            o.rtol = x;
        }
        if let Some(x) = self.atol {
            o.atol = x;
        }
        if let Some(x) = self.r_max_cap {
            o.r_max_cap = x;
        }
        if !(o.rtol > 0.0 && o.atol > 0.0 && o.r_max_cap > 0.0) {
            return Err(Error::InvalidParameter("tolerances and r_max_cap must be positive".into()));
        }
        Ok(o)
    }

    /// Scan radii; the default upper end is `r̄/2` for spheres, 50 for flat
    /// space and `12/√|k|` for hyperbolic space.
    pub fn r_grid(&self, sf: &SpaceForm) -> Result<Vec<f64>> {
        let lo = self.r_min.unwrap_or(0.0);
        let hi = match self.r_max {
            Some(x) => x,
            None if sf.k() > 0.0 => 0.5 * sf.r_bar(),
            None if sf.k() == 0.0 => 50.0,
            None => 12.0 / sf.k().abs().sqrt(),
        };
        let count = self.count.unwrap_or(50);
        if !(lo >= 0.0 && hi > lo) || count < 2 {
            return Err(Error::InvalidParameter(format!("scan range [{lo}, {hi}] with {count} points is empty")));
        }
        Ok(warpcmp::tau::uniform_grid(lo, hi, count))
    }

    pub fn points_or(&self, default: usize) -> usize {
        self.points.unwrap_or(default)
    }
}

/// Global options that are not part of a computation.
#[derive(Debug, Clone, Default, Args)]
pub struct Output {
    /// JSON file whose keys override the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (or directory for `selftest`); stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}
