use std::f64::consts::PI;

use proptest::prelude::*;
use warpcmp::estimates::*;
use warpcmp::isoparametric::{solve_iso_profile, IsoparametricFamily};
use warpcmp::numerics::{integrate, QuadOptions};
use warpcmp::tau::tau_scan;
use warpcmp::*;

fn serrin_mass(n: u32, k: f64, frac: f64) -> f64 {
    if k < 0.0 {
        frac / (f64::from(n) * -k)
    } else {
        frac
    }
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn divergence_identity(n in 2u32..6, ki in 0usize..3, r0 in 0.0f64..1.2, frac in 0.05f64..0.9) {
        let k = [-1.0, 0.0, 1.0][ki];
        let sf = SpaceForm::new(n, k).unwrap();
        let f = Nonlinearity::serrin_fk(n, k).unwrap();
        let m = serrin_mass(n, k, frac);
        let p = solve_profile(&sf, &f, CauchyData::new(r0, m).unwrap(), &SolveOptions::default()).unwrap();
        prop_assert!(p.admissible);
        let (lo, hi) = p.support();
        for t in [0.1, 0.5, 0.9] {
            let r = lo + t * (hi - lo);
            let w = |x: f64| sf.s_k(x).unwrap().powi(n as i32 - 1);
            let q = integrate(|x| w(x) * f.eval(p.u(x).unwrap()), r0, r,
                QuadOptions { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 2000 }).unwrap();
            let lhs = p.du(r).unwrap() * w(r) + q;
            prop_assert!(lhs.abs() < 1e-8 * (1.0 + q.abs()), "r={} residual {}", r, lhs);
        }
    }

    // Small cores push the mirrored outer zero to within round-off of the pole at π.
    #[test]
    fn sphere_reflection_of_tau(n in 2u32..5, r0 in 0.3f64..1.5, m in 0.05f64..0.5) {
        let sf = SpaceForm::new(n, 1.0).unwrap();
        let f = Nonlinearity::serrin_fk(n, 1.0).unwrap();
        let t = tau_scan(&sf, &f, m, &[0.0, r0, PI - r0], &SolveOptions::default()).unwrap();
        prop_assert!(t.tau0 <= 1.0);
        let (a, b) = (&t.rows[1], &t.rows[2]);
        prop_assert!((a.tau_plus.unwrap() - b.tau_minus.unwrap()).abs() < 1e-8);
        prop_assert!((a.tau_minus.unwrap() - b.tau_plus.unwrap()).abs() < 1e-8);
    }

    #[test]
    fn gradient_paths_agree(n in 2u32..5, ki in 0usize..3, r0 in 0.0f64..1.0, frac in 0.05f64..0.9, level in 0.0f64..0.999) {
        let k = [-1.0, 0.0, 1.0][ki];
        let sf = SpaceForm::new(n, k).unwrap();
        let f = Nonlinearity::serrin_fk(n, k).unwrap();
        let m = serrin_mass(n, k, frac);
        let p = solve_profile(&sf, &f, CauchyData::new(r0, m).unwrap(), &SolveOptions::default()).unwrap();
        let pair = ComparisonPair::new(p, Branch::Plus).unwrap();
        let s = level * m;
        let r = chi_inverse(&pair, s).unwrap();
        prop_assert!((pair.profile.u(r).unwrap() - s).abs() < 1e-10 * (1.0 + m));
        let w = model_gradient_w(&pair, s).unwrap();
        prop_assert!((w - pair.profile.du(r).unwrap().powi(2)).abs() < 1e-9);
    }

    #[test]
    fn serrin_mu_identity(n in 2u32..5, ki in 0usize..3, r0 in 0.1f64..1.0, frac in 0.05f64..0.9, t in 0.02f64..0.98) {
        let k = [-1.0, 0.0, 1.0][ki];
        let sf = SpaceForm::new(n, k).unwrap();
        let f = Nonlinearity::serrin_fk(n, k).unwrap();
        let m = serrin_mass(n, k, frac);
        let p = solve_profile(&sf, &f, CauchyData::new(r0, m).unwrap(), &SolveOptions::default()).unwrap();
        let pair = ComparisonPair::new(p, Branch::Minus).unwrap();
        let (lo, hi) = pair.profile.support();
        let r = lo + t * (hi - lo);
        prop_assume!((r - r0).abs() > 1e-3);
        let lambda = lambda_of_r(&pair, r).unwrap();
        let u = pair.profile.u(r).unwrap();
        let expect = (f64::from(n) + 2.0) / f64::from(n) * lambda * (f64::from(n) * k * u + 1.0);
        let mu = mu_of_r(&pair, r).unwrap();
        prop_assert!((mu - expect).abs() < 1e-9 * expect.abs().max(1.0), "{} vs {}", mu, expect);
    }

    #[test]
    fn isoperimetric_paths_agree(n in 2u32..5, ki in 0usize..3, r0 in 0.3f64..1.2, frac in 0.05f64..0.9, plus in any::<bool>()) {
        let k = [-1.0, 0.0, 1.0][ki];
        let sf = SpaceForm::new(n, k).unwrap();
        let f = Nonlinearity::serrin_fk(n, k).unwrap();
        let m = serrin_mass(n, k, frac);
        let p = solve_profile(&sf, &f, CauchyData::new(r0, m).unwrap(), &SolveOptions::default()).unwrap();
        let pair = ComparisonPair::new(p, if plus { Branch::Plus } else { Branch::Minus }).unwrap();
        let a = isoperimetric_model_ratio(&pair).unwrap();
        let b = isoperimetric_ratio_coarea(&pair).unwrap();
        prop_assert!(((a - b) / a).abs() < 1e-6, "{} vs {}", a, b);
    }

    #[test]
    fn iso_profiles_are_extremal(li in 0usize..4, t in 0.05f64..0.95, m in 0.005f64..0.05) {
        let (ell, m1, m2) = [(2u32, 1u32, 1u32), (2, 1, 3), (4, 1, 2), (3, 2, 2)][li];
        let n = 1 + ell * (m1 + m2) / 2;
        let fam = IsoparametricFamily::new(ell, m1, m2, n).unwrap();
        let f = Nonlinearity::constant(1.0).unwrap();
        let s0 = t * fam.s_max();
        let iso = solve_iso_profile(&fam, &f, s0, m, &SolveOptions::default()).unwrap();
        prop_assert!(iso.profile.admissible);
        for d in [iso.profile.du_minus.unwrap(), iso.profile.du_plus.unwrap()] {
            prop_assert!(d.is_finite() && d != 0.0);
        }
        let (lo, hi) = iso.profile.support();
        for q in [0.1, 0.4, 0.7, 0.95] {
            let s = lo + q * (hi - lo);
            prop_assert!(iso.residual(s).unwrap().abs() < 1e-8);
        }
        if fam.c == 0.0 {
            let other = solve_iso_profile(&fam, &f, fam.s_max() - s0, m, &SolveOptions::default()).unwrap();
            let s = 0.5 * (s0 + hi);
            prop_assert!((other.profile.u(fam.s_max() - s).unwrap() - iso.profile.u(s).unwrap()).abs() < 1e-8);
        }
    }
}

#[test]
fn centered_flat_boundary_slope() {
    for n in 2..=6u32 {
        for m in [0.1, 1.0, 10.0] {
            let sf = SpaceForm::new(n, 0.0).unwrap();
            let f = Nonlinearity::constant(1.0).unwrap();
            let p = solve_profile(&sf, &f, CauchyData::new(0.0, m).unwrap(), &SolveOptions::default()).unwrap();
            let d = p.du_plus.unwrap();
            assert!((d * d - 2.0 * m / f64::from(n)).abs() < 1e-10);
        }
    }
}

#[test]
fn hyperbolic_ordering() {
    for n in [2u32, 3, 4] {
        let sf = SpaceForm::new(n, -1.0).unwrap();
        let f = Nonlinearity::serrin_fk(n, -1.0).unwrap();
        let grid: Vec<f64> = (0..25).map(|i| 0.2 * f64::from(i)).collect();
        let t = tau_scan(&sf, &f, 0.5 / f64::from(n), &grid, &SolveOptions::default()).unwrap();
        assert!(t.tau_plus_sup <= t.tau_minus_inf + 1e-8);
    }
}
