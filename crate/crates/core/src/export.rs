//! Plain-text exports. Numbers are written with 17 significant digits so
//! that every value round-trips; missing values are empty fields.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::json;

use crate::error::{Error, Result};
use crate::isoparametric::IsoProfile;
use crate::radial::ModelProfile;
use crate::tau::{GapCurvePoint, GapEstimate, TauTable};

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))
}

/// Writes `content`, creating parent directories.
pub fn write_text(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_err(path, e))?;
    }
    fs::write(path, content).map_err(|e| io_err(path, e))
}

/// Header object of a profile export.
pub fn profile_header(profile: &ModelProfile) -> serde_json::Value {
    json!({
        "n": profile.sf.map(|s| s.n()),
        "k": profile.sf.map(|s| s.k()),
        "f": profile.f.descriptor(),
        "R": profile.cauchy.r,
        "M": profile.cauchy.m,
        "r_minus": profile.r_minus,
        "r_plus": profile.r_plus,
        "dU_minus": profile.du_minus,
        "dU_plus": profile.du_plus,
        "admissible": profile.admissible,
    })
}

fn profile_rows(out: &mut String, profile: &ModelProfile, count: usize) -> Result<()> {
    let (lo, hi) = profile.support();
    out.push_str("r,U,dU\n");
    for node in profile.sample(lo, hi, count)? {
        let _ = writeln!(out, "{},{},{}", fmt_num(node.r), fmt_num(node.u), fmt_num(node.du));
    }
    Ok(())
}

/// `# {header}` followed by `r,U,dU` on `count` equispaced radii of the support.
pub fn profile_csv(profile: &ModelProfile, count: usize) -> Result<String> {
    let mut out = format!("# {}\n", profile_header(profile));
    profile_rows(&mut out, profile, count)?;
    Ok(out)
}

pub fn iso_csv(iso: &IsoProfile, count: usize) -> Result<String> {
    let header = serde_json::to_string(&iso.summary()).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut out = format!("# {header}\n");
    profile_rows(&mut out, &iso.profile, count)?;
    Ok(out)
}

pub fn tau_csv(table: &TauTable) -> String {
    let mut out = format!(
        "# {}\n",
        json!({
            "n": table.sf.n(),
            "k": table.sf.k(),
            "f": table.f.descriptor(),
            "M": table.m,
            "c_norm": table.c_norm,
        })
    );
    out.push_str("R,tau_plus,tau_minus,r_minus,r_plus,diagnostic\n");
    for row in &table.rows {
        let diag = row.diagnostic.as_deref().unwrap_or("").replace([',', '\n'], ";");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_num(row.r),
            fmt_opt(row.tau_plus),
            fmt_opt(row.tau_minus),
            fmt_opt(row.r_minus),
            fmt_opt(row.r_plus),
            diag
        );
    }
    out
}

/// JSON summary `{c_norm, tau0, adm, gap, method}` of a scan and its gap estimate.
pub fn tau_summary(table: &TauTable, gap: &GapEstimate) -> serde_json::Value {
    json!({
        "c_norm": table.c_norm,
        "tau0": table.tau0,
        "adm": gap.adm,
        "gap": gap.gap.map_or_else(Vec::new, |g| vec![g]),
        "method": gap.method,
        "asymptote": gap.asymptote,
    })
}

pub fn gap_curve_csv(n: u32, points: &[GapCurvePoint]) -> String {
    let mut out = String::from("n,R,s,dU_minus,dU_plus\n");
    for p in points {
        let _ = writeln!(out, "{n},{},{},{},{}", fmt_num(p.r), fmt_num(p.s), fmt_num(p.du_minus), fmt_num(p.du_plus));
    }
    out
}

/// Two-column CSV with the given header.
pub fn pairs_csv(header: &str, rows: &[(f64, f64)]) -> String {
    let mut out = format!("{header}\n");
    for (a, b) in rows {
        let _ = writeln!(out, "{},{}", fmt_num(*a), fmt_num(*b));
    }
    out
}
