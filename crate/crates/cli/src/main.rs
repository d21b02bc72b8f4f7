//! `warpcmp`: radial model profiles, boundary-response scans and comparison
//! bounds from the command line.
//!
//! Exit codes: 0 on success, 2 for invalid input, 3 for numerical failures.
//! Errors are reported as one JSON object on stderr.

mod config;

use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::{Output, Params};
use warpcmp::estimates::{bound_report, hotspot_bounds, mu_at_boundary, mu_sign_scan_uniform, Branch, ComparisonPair};
use warpcmp::export::{gap_curve_csv, iso_csv, profile_csv, tau_csv, tau_summary, write_text};
use warpcmp::isoparametric::{descent_check, solve_iso_profile, IsoparametricFamily, QuotientGroup};
use warpcmp::selftest::{self, fig_mu_csv, gap_curve_grid, gap_curve_mass, mu_scan_radii};
use warpcmp::tau::{figure_gap_curve, gap_estimate, tau_scan, GapOptions};
use warpcmp::{solve_profile, CauchyData, Error};

/// Environment variable holding the worker-thread count of parallel scans.
const THREADS_ENV: &str = "WARPCMP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "warpcmp", version, about = "Radial model profiles and comparison bounds")]
struct Cli {
    #[command(flatten)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one radial profile and write it as CSV.
    Profile(Params),
    /// Boundary-response values over a grid of core radii (CSV).
    TauScan(Params),
    /// Admissible set and gap of a boundary-response scan (JSON).
    Gap(Params),
    /// Sign scan and boundary values of the coefficient mu (JSON).
    MuCheck(Params),
    /// Curvature, isoperimetric and hot-spot bounds of one pair (JSON).
    Bounds(Params),
    /// Isoparametric profile (CSV), or a descent check when --group is given (JSON).
    Iso(Params),
    /// Boundary-slope imbalance curves for k = -1 (CSV).
    FigGap(Params),
    /// mu along affine Helmholtz profiles on S^3 (CSV).
    FigMu(Params),
    /// Run reference criteria 1-12 and write the fixed artifacts.
    Selftest,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::InvalidParameter(_) => (2, "invalid-parameter"),
            Error::Domain(_) => (2, "domain"),
            Error::UnsupportedGroup(_) => (2, "unsupported-group"),
            Error::MissingDerivative(_) => (2, "missing-derivative"),
            Error::EmptyGrid => (2, "empty-grid"),
            Error::Singularity { .. } => (3, "singularity"),
            Error::NoZeroFound { .. } => (3, "no-zero-found"),
            Error::NotAdmissible(_) => (3, "not-admissible"),
            Error::StepFailure { .. } => (3, "step-failure"),
            Error::Bracketing(_) => (3, "bracketing"),
            Error::Quadrature(_) => (3, "quadrature"),
            Error::AllRowsFailed(_) => (3, "all-rows-failed"),
            Error::InsufficientRange(_) => (3, "insufficient-range"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => Ok(write_text(path, text)?),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure { code: 3, kind: "io", message: e.to_string() })
        }
    }
}

fn emit_json(out: Option<&Path>, value: &serde_json::Value) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure { code: 3, kind: "io", message: e.to_string() })?;
    emit(out, &(text + "\n"))
}

fn to_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

fn pair_from(p: &Params) -> Result<ComparisonPair, Failure> {
    let sf = p.space_form()?;
    let f = p.nonlinearity()?;
    let profile = solve_profile(&sf, &f, CauchyData::new(p.r_core.unwrap_or(0.0), p.m()?)?, &p.solve_options()?)?;
    let sign = match p.sign.as_deref() {
        None | Some("plus") => Branch::Plus,
        Some("minus") => Branch::Minus,
        Some(other) => return Err(Error::InvalidParameter(format!("sign must be plus or minus, got '{other}'")).into()),
    };
    Ok(ComparisonPair::new(profile, sign)?)
}

fn run(cli: Cli) -> CmdResult {
    let out = cli.output.out.as_deref();
    let load = |mut p: Params| -> Result<Params, Failure> {
        if let Some(path) = &cli.output.config {
            p.override_with(Params::load(path)?);
        }
        Ok(p)
    };
    match cli.command {
        Command::Profile(p) => {
            let p = load(p)?;
            let sf = p.space_form()?;
            let f = p.nonlinearity()?;
            let profile = solve_profile(&sf, &f, CauchyData::new(p.r_core.unwrap_or(0.0), p.m()?)?, &p.solve_options()?)?;
            emit(out, &profile_csv(&profile, p.points_or(201))?)
        }
        Command::TauScan(p) => {
            let p = load(p)?;
            let sf = p.space_form()?;
            let table = tau_scan(&sf, &p.nonlinearity()?, p.m()?, &p.r_grid(&sf)?, &p.solve_options()?)?;
            emit(out, &tau_csv(&table))
        }
        Command::Gap(p) => {
            let p = load(p)?;
            let sf = p.space_form()?;
            let table = tau_scan(&sf, &p.nonlinearity()?, p.m()?, &p.r_grid(&sf)?, &p.solve_options()?)?;
            let gap = gap_estimate(&table, &GapOptions::default())?;
            emit_json(out, &tau_summary(&table, &gap))
        }
        Command::MuCheck(p) => {
            let p = load(p)?;
            let pair = pair_from(&p)?;
            let scan = mu_sign_scan_uniform(&pair, p.points_or(200))?;
            let boundary = |sign: Branch| -> Option<f64> {
                let other = ComparisonPair::new(pair.profile.clone(), sign).ok()?;
                mu_at_boundary(&other, None).ok()
            };
            emit_json(
                out,
                &json!({
                    "min_mu": scan.min_mu,
                    "argmin": scan.argmin,
                    "all_nonnegative": scan.all_nonnegative,
                    "mu_boundary_plus": boundary(Branch::Plus),
                    "mu_boundary_minus": boundary(Branch::Minus),
                    "points": scan.samples.len(),
                }),
            )
        }
        Command::Bounds(p) => {
            let p = load(p)?;
            let pair = pair_from(&p)?;
            let mut report = to_json(&bound_report(&pair, p.points_or(200))?);
            if let Some(ro) = p.r_omega {
                report["hotspot"] = to_json(&hotspot_bounds(&pair, Some(ro))?);
            }
            emit_json(out, &report)
        }
        Command::Iso(p) => {
            let p = load(p)?;
            let need = |x: Option<u32>, name: &str| x.ok_or_else(|| Error::InvalidParameter(format!("missing required parameter '{name}'")));
            let fam = IsoparametricFamily::new(need(p.ell, "ell")?, need(p.m1, "m1")?, need(p.m2, "m2")?, p.n()?)?;
            if let Some(w) = fam.dimension_warning() {
                eprintln!("{}", json!({ "warning": w }));
            }
            if let Some(g) = &p.group {
                let group: QuotientGroup = g.parse()?;
                return emit_json(out, &json!({ "family": fam, "group": group, "result": descent_check(&fam, group) }));
            }
            let f = p.nonlinearity()?;
            let s0 = p.s_core.ok_or_else(|| Error::InvalidParameter("missing required parameter 'S'".into()))?;
            let iso = solve_iso_profile(&fam, &f, s0, p.m()?, &p.solve_options()?)?;
            emit(out, &iso_csv(&iso, p.points_or(201))?)
        }
        Command::FigGap(p) => {
            let p = load(p)?;
            let ns = match &p.n {
                Some(_) => p.n_list()?,
                None => vec![2, 3, 4],
            };
            let m = p.m.unwrap_or_else(gap_curve_mass);
            let grid = if p.r_min.is_some() || p.r_max.is_some() || p.count.is_some() {
                let sf = warpcmp::SpaceForm::new(2, -1.0)?;
                let mut q = p.clone();
                q.r_min = Some(p.r_min.unwrap_or(0.25));
                q.r_max = Some(p.r_max.unwrap_or(20.0));
                q.count = Some(p.count.unwrap_or(80));
                q.r_grid(&sf)?
            } else {
                gap_curve_grid()
            };
            let mut text = String::new();
            for (i, n) in ns.iter().enumerate() {
                let csv = gap_curve_csv(*n, &figure_gap_curve(*n, m, &grid, &p.solve_options()?)?);
                text.push_str(if i == 0 { &csv } else { csv.split_once('\n').map_or("", |x| x.1) });
            }
            emit(out, &text)
        }
        Command::FigMu(p) => {
            let p = load(p)?;
            let mut cases: Vec<(f64, f64, f64)> = mu_scan_radii().into_iter().map(|r| (-0.25, 2.5, r)).collect();
            cases.push((-0.25, 2.5, FRAC_PI_2));
            cases.push((1.0, 2.9, FRAC_PI_2));
            emit(out, &fig_mu_csv(&cases, p.m.unwrap_or(1.0), p.points_or(201))?)
        }
        Command::Selftest => {
            let dir = out.unwrap_or(Path::new("selftest-artifacts"));
            let results = selftest::run_all(dir);
            for r in &results {
                println!("{}", r.line());
            }
            let failed: Vec<u32> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure {
                    code: 3,
                    kind: "criteria-failed",
                    message: format!("criteria {failed:?} failed; artifacts in {}", dir.display()),
                })
            }
        }
    }
}

fn configure_threads() -> CmdResult {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let threads: usize = v.parse().ok().filter(|&t: &usize| t > 0).ok_or_else(|| Failure {
            code: 2,
            kind: "invalid-parameter",
            message: format!("{THREADS_ENV} must be a positive integer, got '{v}'"),
        })?;
        // A second initialization only happens in tests; the first one wins.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": "usage", "message": e.to_string().trim_end(), "exit_code": 2 }));
            return ExitCode::from(2);
        }
    };
    match configure_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.kind, "message": f.message, "exit_code": f.code }));
            ExitCode::from(f.code)
        }
    }
}
