//! Dormand-Prince 5(4) with PI-free step control, for small fixed-size systems.

use crate::error::{LabError, Result};

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

/// Step-size control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeTolerance {
    pub rel: f64,
    pub abs: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for OdeTolerance {
    fn default() -> Self {
        Self {
            rel: 1e-11,
            abs: 1e-13,
            min_step: 1e-14,
            max_steps: 2_000_000,
        }
    }
}

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Adaptive integrator carrying its step size across successive calls.
pub struct Dopri5<F, const N: usize> {
    rhs: F,
    tol: OdeTolerance,
    step: f64,
    pub steps_taken: usize,
}

impl<F, const N: usize> Dopri5<F, N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    pub fn new(rhs: F, tol: OdeTolerance) -> Self {
        Self {
            rhs,
            tol,
            step: 0.0,
            steps_taken: 0,
        }
    }

    /// Advance `y` from `t0` to `t1` (`t1 > t0`).
    pub fn advance(&mut self, t0: f64, y0: [f64; N], t1: f64) -> Result<[f64; N]> {
        let span = t1 - t0;
        if span <= 0.0 {
            return Ok(y0);
        }
        if self.step <= 0.0 {
            self.step = (span * 1e-2).max(self.tol.min_step);
        }
        let mut t = t0;
        let mut y = y0;
        let mut k1 = (self.rhs)(t, &y);
        let min_step = self.tol.min_step * t1.abs().max(1.0);
        while t < t1 {
            if self.steps_taken >= self.tol.max_steps {
                return Err(LabError::StepCollapse { at: t, step: self.step });
            }
            let last = t + self.step >= t1;
            let h = if last { t1 - t } else { self.step };
            let f = &self.rhs;
            let k2 = f(t + C2 * h, &axpy(&y, &[(A21, &k1)], h));
            let k3 = f(t + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
            let k4 = f(t + C4 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
            let k5 = f(
                t + C5 * h,
                &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
            );
            let k6 = f(
                t + h,
                &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
            );
            let y_new = axpy(&y, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], h);
            let k7 = f(t + h, &y_new);

            let mut err_sq = 0.0;
            for i in 0..N {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = self.tol.abs + self.tol.rel * y[i].abs().max(y_new[i].abs());
                err_sq += (e / scale).powi(2);
            }
            let err = (err_sq / N as f64).sqrt();
            self.steps_taken += 1;
            if !err.is_finite() {
                self.step *= 0.1;
                if self.step < min_step {
                    return Err(LabError::StepCollapse { at: t, step: self.step });
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
                y = y_new;
                k1 = k7;
                // Keep the nominal step when the last step was clipped.
                if !last || h >= self.step {
                    self.step = h * factor;
                }
            } else {
                self.step = h * factor.min(1.0);
                if self.step < min_step {
                    return Err(LabError::StepCollapse { at: t, step: self.step });
                }
            }
        }
        Ok(y)
    }

    /// Integrate through increasing `nodes`, returning the state at each node.
    pub fn sample(&mut self, nodes: &[f64], y0: [f64; N]) -> Result<Vec<[f64; N]>> {
        let mut out = Vec::with_capacity(nodes.len());
        let Some(&first) = nodes.first() else {
            return Ok(out);
        };
        let mut y = y0;
        let mut t = first;
        out.push(y);
        for &next in &nodes[1..] {
            y = self.advance(t, y, next)?;
            t = next;
            out.push(y);
        }
        Ok(out)
    }
}

/// One-shot integration from `t0` to `t1`.
pub fn integrate<F, const N: usize>(rhs: F, t0: f64, y0: [f64; N], t1: f64, tol: OdeTolerance) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    Dopri5::new(rhs, tol).advance(t0, y0, t1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_over_ten_periods() {
        let tol = OdeTolerance {
            rel: 1e-12,
            abs: 1e-14,
            ..OdeTolerance::default()
        };
        let t1 = 20.0 * std::f64::consts::PI;
        let y = integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], t1, tol).unwrap();
        assert!(y[0].abs() < 1e-9, "{y:?}");
        assert!((y[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn observed_order_is_five() {
        // Fixed-step behaviour: make the tolerance loose enough that each
        // span is covered in one step, then compare the errors at h and h/2.
        let exact = (1.0_f64).exp();
        let err_at = |n: usize| {
            let h = 1.0 / n as f64;
            let mut y = [1.0];
            for i in 0..n {
                let tol = OdeTolerance {
                    rel: 1.0,
                    abs: 1.0,
                    ..OdeTolerance::default()
                };
                let mut solver = Dopri5::new(|_, y: &[f64; 1]| [y[0]], tol);
                solver.step = h;
                y = solver.advance(i as f64 * h, y, (i + 1) as f64 * h).unwrap();
            }
            (y[0] - exact).abs()
        };
        let ratio = err_at(8) / err_at(16);
        let order = ratio.log2();
        assert!((order - 5.0).abs() < 0.3, "observed order {order}");
    }

    #[test]
    fn sampling_matches_closed_form() {
        let nodes: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let mut solver = Dopri5::new(|t, _y: &[f64; 1]| [t.cos()], OdeTolerance::default());
        let ys = solver.sample(&nodes, [0.0]).unwrap();
        for (t, y) in nodes.iter().zip(&ys) {
            assert!((y[0] - t.sin()).abs() < 1e-11);
        }
    }
}
