//! Bracketed scalar root finding.

use crate::error::{LabError, Result};

/// A converged root with the final bracket width and residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub bracket_width: f64,
    pub iterations: usize,
}

/// Brent's method on a sign-changing bracket `[lo, hi]`.
///
/// Stops when the bracket is narrower than `xtol` (plus a few ulps) or an
/// exact zero is hit.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<Root> {
    let (f_lo, f_hi) = (f(lo), f(hi));
    brent_with_values(&mut f, lo, f_lo, hi, f_hi, xtol)
}

pub(crate) fn brent_with_values<F: FnMut(f64) -> f64>(
    f: &mut F,
    lo: f64,
    f_lo: f64,
    hi: f64,
    f_hi: f64,
    xtol: f64,
) -> Result<Root> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f_lo, f_hi);
    if fa == 0.0 {
        return Ok(Root { x: a, residual: 0.0, bracket_width: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, residual: 0.0, bracket_width: 0.0, iterations: 0 });
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(LabError::Bracket { lo, hi });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=200 {
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
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(Root { x: b, residual: fb, bracket_width: (c - b).abs(), iterations: iter });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
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
        fb = f(b);
        if !fb.is_finite() {
            return Err(LabError::RootNotConverged { lo, hi });
        }
    }
    Err(LabError::RootNotConverged { lo, hi })
}

/// Plain bisection; used where only the sign is trustworthy.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<Root> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(Root { x: a, residual: 0.0, bracket_width: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, residual: 0.0, bracket_width: 0.0, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(LabError::Bracket { lo, hi });
    }
    let mut iterations = 0;
    let mut fm = fa;
    while (b - a).abs() > xtol && iterations < 400 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        fm = f(m);
        iterations += 1;
        if fm == 0.0 {
            return Ok(Root { x: m, residual: 0.0, bracket_width: 0.0, iterations });
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(Root { x: 0.5 * (a + b), residual: fm, bracket_width: (b - a).abs(), iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_solves_kepler_equation() {
        let (m, ecc) = (1.0, 0.9);
        let r = brent(|e: f64| e - ecc * e.sin() - m, 0.0, 3.0, 1e-15).unwrap();
        assert!((r.x - ecc * r.x.sin() - m).abs() < 1e-14);
    }

    #[test]
    fn brent_rejects_missing_sign_change() {
        assert!(matches!(brent(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12), Err(LabError::Bracket { .. })));
    }

    #[test]
    fn bisection_agrees_with_brent() {
        let f = |x: f64| x.cos() - x;
        let a = bisect(f, 0.0, 1.0, 1e-15).unwrap().x;
        let b = brent(f, 0.0, 1.0, 1e-15).unwrap().x;
        assert!((a - b).abs() < 1e-14);
    }
}
