//! Dormand–Prince 5(4) embedded Runge–Kutta integrator for autonomous systems.

use crate::error::{Error, Result};

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
// Fifth-order weights (also row 7 of the tableau, FSAL).
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Fifth minus fourth order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// State magnitude treated as divergence.
pub const BLOW_UP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

/// Adaptive integrator over a sequence of output nodes.
pub struct Dopri5<const N: usize, F> {
    rhs: F,
    tol: Tolerance,
    h: f64,
    max_steps: usize,
}

impl<const N: usize, F> Dopri5<N, F>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    pub fn new(rhs: F, tol: Tolerance) -> Self {
        Self {
            rhs,
            tol,
            h: 0.0,
            max_steps: 1_000_000,
        }
    }

    /// Integrate `y` from `t0` to `t1`; the step size carries over between calls.
    pub fn advance(&mut self, y: &mut [f64; N], t0: f64, t1: f64) -> Result<()> {
        let span = t1 - t0;
        if span <= 0.0 {
            return Ok(());
        }
        let h_min = 1e-13 * t1.abs().max(1.0);
        if self.h <= 0.0 {
            self.h = (1e-2 * span).min(1e-3).max(h_min);
        }
        let mut t = t0;
        let mut k1 = (self.rhs)(y);
        let mut steps = 0;
        while t < t1 {
            steps += 1;
            if steps > self.max_steps {
                return Err(Error::BlowUp { eta: t });
            }
            let last = t + self.h >= t1;
            let h = if last { t1 - t } else { self.h };

            let k2 = (self.rhs)(&axpy(y, &[(A21, &k1)], h));
            let k3 = (self.rhs)(&axpy(y, &[(A31, &k1), (A32, &k2)], h));
            let k4 = (self.rhs)(&axpy(y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
            let k5 = (self.rhs)(&axpy(y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h));
            let k6 = (self.rhs)(&axpy(
                y,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                h,
            ));
            let y_new = axpy(y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
            let k7 = (self.rhs)(&y_new);

            let mut err = 0.0;
            for i in 0..N {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = self.tol.abs + self.tol.rel * y[i].abs().max(y_new[i].abs());
                err += (e / scale).powi(2);
            }
            let err = (err / N as f64).sqrt();

            if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                self.h = 0.25 * h;
                if self.h < h_min {
                    return Err(Error::BlowUp { eta: t });
                }
                continue;
            }

            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                t = if last { t1 } else { t + h };
                *y = y_new;
                k1 = k7;
                if y.iter().any(|v| v.abs() > BLOW_UP) {
                    return Err(Error::BlowUp { eta: t });
                }
                // A shortened final step says nothing about the next step size.
                if !last || h >= self.h {
                    self.h = h * factor;
                }
            } else {
                self.h = h * factor.min(1.0);
                if self.h < h_min {
                    return Err(Error::BlowUp { eta: t });
                }
            }
        }
        Ok(())
    }

    /// States at each of `nodes` (which must be increasing), starting from `y0`
    /// at `nodes[0]`.
    pub fn trajectory(&mut self, y0: [f64; N], nodes: &[f64]) -> Result<Vec<[f64; N]>> {
        let mut out = Vec::with_capacity(nodes.len());
        let mut y = y0;
        out.push(y);
        for w in nodes.windows(2) {
            self.advance(&mut y, w[0], w[1])?;
            out.push(y);
        }
        Ok(out)
    }
}
