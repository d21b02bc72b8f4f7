//! Dormand–Prince 5(4) stepping with the classical fourth-order continuous
//! extension. Only single steps live here; step-size control and event
//! handling are driven by the caller.

use serde::{Deserialize, Serialize};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

pub type State = [f64; 2];

/// Result of one Dormand–Prince step from `(t0, y0)` with signed step `h`.
#[derive(Debug, Clone, Copy)]
pub struct Step {
    pub t0: f64,
    pub h: f64,
    pub y0: State,
    pub y1: State,
    pub f0: State,
    pub f1: State,
    /// Embedded error estimate (difference of the 5th and 4th order solutions).
    pub err: State,
    dense5: State,
}

/// Coefficients of the continuous extension over one step.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    pub rcont: [State; 5],
}

#[inline]
fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Performs one step; `f0` is the derivative at `(t0, y0)` (FSAL reuse).
pub fn step<F: FnMut(f64, &State) -> State>(rhs: &mut F, t0: f64, y0: &State, f0: &State, h: f64) -> Step {
    let k1 = *f0;
    let k2 = rhs(t0 + C2 * h, &axpy(y0, &[(A21, &k1)], h));
    let k3 = rhs(t0 + C3 * h, &axpy(y0, &[(A31, &k1), (A32, &k2)], h));
    let k4 = rhs(t0 + C4 * h, &axpy(y0, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
    let k5 = rhs(t0 + C5 * h, &axpy(y0, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h));
    let k6 = rhs(
        t0 + h,
        &axpy(y0, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
    );
    let y1 = axpy(y0, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], h);
    let k7 = rhs(t0 + h, &y1);
    let mut err = [0.0; 2];
    let mut dense5 = [0.0; 2];
    for i in 0..2 {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        dense5[i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }
    Step { t0, h, y0: *y0, y1, f0: k1, f1: k7, err, dense5 }
}

impl Step {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// Weighted RMS norm of the error estimate.
    pub fn error_norm(&self, rtol: f64, atol: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..2 {
            let sc = atol + rtol * self.y0[i].abs().max(self.y1[i].abs());
            acc += (self.err[i] / sc).powi(2);
        }
        (acc / 2.0).sqrt()
    }

    #[allow(clippy::needless_range_loop)]
    pub fn dense(&self) -> DenseStep {
        let mut rcont = [[0.0; 2]; 5];
        for i in 0..2 {
            let ydiff = self.y1[i] - self.y0[i];
            let bspl = self.h * self.f0[i] - ydiff;
            rcont[0][i] = self.y0[i];
            rcont[1][i] = ydiff;
            rcont[2][i] = bspl;
            rcont[3][i] = ydiff - self.h * self.f1[i] - bspl;
            rcont[4][i] = self.dense5[i];
        }
        DenseStep { t0: self.t0, h: self.h, rcont }
    }
}

impl DenseStep {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn lo(&self) -> f64 {
        self.t0.min(self.t1())
    }

    pub fn hi(&self) -> f64 {
        self.t0.max(self.t1())
    }

    pub fn eval(&self, t: f64) -> State {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let r = &self.rcont;
        let mut out = [0.0; 2];
        for i in 0..2 {
            out[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
        }
        out
    }
}

/// Initial step guess (Hairer–Nørsett–Wanner), signed by `dir`.
#[allow(clippy::too_many_arguments)]
pub fn initial_step<F: FnMut(f64, &State) -> State>(
    rhs: &mut F,
    t0: f64,
    y0: &State,
    f0: &State,
    dir: f64,
    rtol: f64,
    atol: f64,
    h_max: f64,
) -> f64 {
    let norm = |v: &State| {
        let mut acc = 0.0;
        for i in 0..2 {
            let sc = atol + rtol * y0[i].abs();
            acc += (v[i] / sc).powi(2);
        }
        (acc / 2.0).sqrt()
    };
    let dnf = norm(f0);
    let dny = norm(y0);
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { 0.01 * dny / dnf };
    h = h.min(h_max);
    let y1 = axpy(y0, &[(1.0, f0)], dir * h);
    let f1 = rhs(t0 + dir * h, &y1);
    let diff = [f1[0] - f0[0], f1[1] - f0[1]];
    let der2 = norm(&diff) / h;
    let der12 = der2.max(dnf);
    let h1 = if der12 <= 1e-15 { (1e-6f64).max(h * 1e-3) } else { (0.01 / der12).powf(0.2) };
    dir * (100.0 * h).min(h1).min(h_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(_t: f64, y: &State) -> State {
        [y[1], -y[0]]
    }

    #[test]
    fn fifth_order_convergence() {
        let mut rhs = oscillator;
        let errs: Vec<f64> = [0.2, 0.1]
            .iter()
            .map(|&h| {
                let mut t = 0.0;
                let mut y = [1.0, 0.0];
                let n = (2.0f64 / h).round() as usize;
                for _ in 0..n {
                    let f0 = rhs(t, &y);
                    let s = step(&mut rhs, t, &y, &f0, h);
                    y = s.y1;
                    t = s.t1();
                }
                (y[0] - 2f64.cos()).hypot(y[1] + 2f64.sin())
            })
            .collect();
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 4.6 && order < 5.6, "observed order {order}");
    }

    #[test]
    fn dense_output_matches_endpoints_and_interior() {
        let mut rhs = oscillator;
        let y0 = [1.0, 0.0];
        let f0 = rhs(0.0, &y0);
        let s = step(&mut rhs, 0.0, &y0, &f0, 0.1);
        let d = s.dense();
        assert_eq!(d.eval(0.0), y0);
        let end = d.eval(0.1);
        assert!((end[0] - s.y1[0]).abs() < 1e-15 && (end[1] - s.y1[1]).abs() < 1e-15);
        for th in [0.1, 0.37, 0.5, 0.81] {
            let t = 0.1 * th;
            let y = d.eval(t);
            assert!((y[0] - t.cos()).abs() < 1e-8);
            assert!((y[1] + t.sin()).abs() < 1e-8);
        }
    }

    #[test]
    fn backward_steps() {
        let mut rhs = oscillator;
        let y0 = [1f64.cos(), -1f64.sin()];
        let f0 = rhs(1.0, &y0);
        let s = step(&mut rhs, 1.0, &y0, &f0, -0.05);
        assert!((s.y1[0] - 0.95f64.cos()).abs() < 1e-10);
        let d = s.dense();
        assert!((d.eval(0.97)[0] - 0.97f64.cos()).abs() < 1e-10);
        assert_eq!(d.lo(), 1.0 - 0.05);
    }
}
