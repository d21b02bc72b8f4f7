//! Brent's method for bracketed scalar roots.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct BrentOptions {
    /// Absolute tolerance on the abscissa.
    pub xtol: f64,
    /// Relative tolerance on the abscissa.
    pub rtol: f64,
    /// Stop as soon as `|g(x)|` falls below this value.
    pub ftol: f64,
    pub max_iter: usize,
}

impl Default for BrentOptions {
    fn default() -> Self {
        Self { xtol: 1e-15, rtol: 4.0 * f64::EPSILON, ftol: 0.0, max_iter: 200 }
    }
}

/// Finds a root of `g` in `[a, b]`, requiring `g(a)` and `g(b)` of opposite sign
/// (a zero endpoint is returned directly).
pub fn brent<F>(mut g: F, a: f64, b: f64, opts: BrentOptions) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = g(a);
    let mut fb = g(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::Bracketing(format!(
            "g({a}) = {fa} and g({b}) = {fb} do not bracket a root"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..opts.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * opts.rtol * b.abs() + 0.5 * opts.xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 || fb.abs() <= opts.ftol {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = g(b);
    }
    Err(Error::Bracketing(format!("no convergence after {} iterations", opts.max_iter)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_roots() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, BrentOptions::default()).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        let r = brent(|x| x.cos() - x, 0.0, 1.0, BrentOptions::default()).unwrap();
        assert!((r.cos() - r).abs() < 1e-15);
    }

    #[test]
    fn reversed_bracket_and_zero_endpoint() {
        let r = brent(|x| x - 0.25, 1.0, 0.0, BrentOptions::default()).unwrap();
        assert!((r - 0.25).abs() < 1e-15);
        assert_eq!(brent(|x| x, 0.0, 1.0, BrentOptions::default()).unwrap(), 0.0);
    }

    #[test]
    fn rejects_non_bracket() {
        assert!(matches!(
            brent(|x| x * x + 1.0, -1.0, 1.0, BrentOptions::default()),
            Err(Error::Bracketing(_))
        ));
    }

    #[test]
    fn steep_function() {
        let r = brent(|x| (x - 1e-3).powi(3) * 1e9, 0.0, 1.0, BrentOptions::default()).unwrap();
        assert!((r - 1e-3).abs() < 1e-8);
    }
}
