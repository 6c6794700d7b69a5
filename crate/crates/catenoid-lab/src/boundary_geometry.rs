//! Twist angle, the free-boundary condition, the geodesic radius and the
//! derived scalars `H(a) = sinh r / K` and `y(a) = B(s0)^2 / K^2`.

use serde::Serialize;

use crate::error::{LabError, Result, ResultExt};
use crate::numerics::{self, quadrature, Tolerances};
use crate::profile::{b_squared, ParamA};

/// Boundary-coupled scalars of one surface in the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatenoidGeometry {
    pub a: f64,
    pub k: f64,
    /// Half-length solving the free-boundary condition.
    pub s0: f64,
    /// Twist angle at `s0`.
    pub phi_s0: f64,
    /// Geodesic radius of the supporting ball.
    pub r: f64,
    pub b_s0: f64,
    pub coth_r: f64,
    /// `B(s0)^2 / K^2`.
    pub y: f64,
    /// `sinh r / K`.
    pub h: f64,
    /// `1/2 arccosh(2a)`; `s0 > sG` is the strict form of (G).
    pub s_g: f64,
    /// Zero of `3B^2 - 2K^2` for `a > 1`; zero otherwise.
    pub s_v: f64,
    /// Set when `a <= 1`, where `3B^2 - 2K^2` has no positive zero.
    pub s_v_degenerate: bool,
    /// Residual of the free-boundary equation at `s0`.
    pub fbc_residual: f64,
}

impl CatenoidGeometry {
    pub fn param(&self) -> ParamA {
        ParamA::new(self.a).expect("geometry is only built for valid parameters")
    }

    pub fn b2_s0(&self) -> f64 {
        self.b_s0 * self.b_s0
    }

    pub fn k2(&self) -> f64 {
        self.k * self.k
    }

    pub fn sinh_r(&self) -> f64 {
        self.r.sinh()
    }

    /// `sinh r - 2K`.
    pub fn g_margin(&self) -> f64 {
        self.sinh_r() - 2.0 * self.k
    }

    /// `B(s0)^2 - 2K^2 = a (cosh 2s0 - 2a)`, evaluated as
    /// `2a (sinh^2 s0 - (a - 1/2))`.
    pub fn g_margin_alt(&self) -> f64 {
        let a = self.param();
        let sh = self.s0.sinh();
        2.0 * a.value() * (sh * sh - a.offset())
    }
}

/// `dphi/ds = K / (A^2 B)`.
#[inline]
pub fn phi_integrand(a: ParamA, t: f64) -> f64 {
    let b2 = b_squared(a, t);
    a.k() / ((b2 + 1.0) * b2.sqrt())
}

/// Twist angle `phi(s) = K int_0^s dt / (A^2 B)`; odd in `s`.
pub fn phi_angle(a: ParamA, s: f64, tol: &Tolerances) -> Result<f64> {
    if !s.is_finite() {
        return Err(LabError::InvalidInput(format!("s must be finite, got {s}")));
    }
    let q = quadrature::integrate(|t| phi_integrand(a, t), 0.0, s.abs(), tol.quad)?;
    Ok(q.value.copysign(s))
}

/// Twist angle on a set of increasing nodes starting at 0, accumulated
/// panel by panel.
pub fn phi_on_nodes(a: ParamA, nodes: &[f64], tol: &Tolerances) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(nodes.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &s in nodes {
        if s < prev {
            return Err(LabError::InvalidInput("nodes must be increasing and non-negative".into()));
        }
        if s > prev {
            acc += quadrature::integrate(|t| phi_integrand(a, t), prev, s, tol.quad)?.value;
        }
        out.push(acc);
        prev = s;
    }
    Ok(out)
}

/// Dense cubic Hermite table of the twist angle on `[0, s_max]`, using the
/// exact derivative `K / (A^2 B)` at the nodes. Evaluation is odd in `s`.
#[derive(Debug, Clone)]
pub struct PhiTable {
    a: ParamA,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl PhiTable {
    pub fn new(a: ParamA, s_max: f64, panels: usize, tol: &Tolerances) -> Result<Self> {
        let panels = panels.max(1);
        let step = s_max / panels as f64;
        let nodes: Vec<f64> = (0..=panels).map(|i| i as f64 * step).collect();
        let values = phi_on_nodes(a, &nodes, tol)?;
        let slopes = nodes.iter().map(|&s| phi_integrand(a, s)).collect();
        Ok(Self { a, step, values, slopes })
    }

    pub fn s_max(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }

    pub fn eval(&self, s: f64) -> f64 {
        let x = s.abs();
        let last = self.values.len() - 2;
        let i = ((x / self.step) as usize).min(last);
        let h = self.step;
        let u = (x - i as f64 * h) / h;
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        let v = h00 * self.values[i] + h10 * h * self.slopes[i] + h01 * self.values[i + 1] + h11 * h * self.slopes[i + 1];
        v.copysign(s)
    }

    pub fn derivative(&self, s: f64) -> f64 {
        phi_integrand(self.a, s)
    }
}

/// `tanh phi(s) - B(s) K / (a sinh 2s)`; negative below `s0`, positive above.
pub fn fbc_function(a: ParamA, s: f64, tol: &Tolerances) -> Result<f64> {
    let phi = phi_angle(a, s, tol)?;
    Ok(phi.tanh() - b_squared(a, s).sqrt() * a.k() / (a.value() * (2.0 * s).sinh()))
}

/// Solve the free-boundary condition for `s0(a)` and assemble the geometry.
pub fn solve_s0(a: ParamA, tol: &Tolerances) -> Result<CatenoidGeometry> {
    let f = |s: f64| fbc_function(a, s, tol);
    let mut lo = 0.5 * a.offset().sqrt();
    let mut f_lo = f(lo)?;
    let mut halvings = 0;
    while f_lo >= 0.0 {
        lo *= 0.5;
        halvings += 1;
        if halvings > 60 {
            return Err(LabError::Bracket { lo, hi: 0.5 * a.offset().sqrt() });
        }
        f_lo = f(lo)?;
    }
    let mut hi = lo * 1.5;
    let mut f_hi = f(hi)?;
    while f_hi <= 0.0 {
        lo = hi;
        f_lo = f_hi;
        hi *= 1.5;
        if hi > 50.0 {
            return Err(LabError::Bracket { lo, hi });
        }
        f_hi = f(hi)?;
    }

    let mut err = None;
    let mut g = |s: f64| match f(s) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            f64::NAN
        }
    };
    let root = numerics::roots::brent_with_values(&mut g, lo, f_lo, hi, f_hi, tol.root * hi);
    if let Some(e) = err {
        return Err(e.context("free-boundary root"));
    }
    let root = root.context("free-boundary root")?;
    let s0 = root.x;
    let phi_s0 = phi_angle(a, s0, tol)?;
    let fbc_residual = phi_s0.tanh() - b_squared(a, s0).sqrt() * a.k() / (a.value() * (2.0 * s0).sinh());
    Ok(assemble(a, s0, phi_s0, fbc_residual))
}

fn assemble(a: ParamA, s0: f64, phi_s0: f64, fbc_residual: f64) -> CatenoidGeometry {
    let av = a.value();
    let k2 = a.k_squared();
    let b2 = b_squared(a, s0);
    // sinh^2 r = B^4 / (B^2 - K^2)
    let sinh_r = b2 / (b2 - k2).sqrt();
    let r = sinh_r.asinh();
    let coth_r = (1.0 + sinh_r * sinh_r).sqrt() / sinh_r;
    let (s_v, s_v_degenerate) = vanishing_threshold(a);
    CatenoidGeometry {
        a: av,
        k: k2.sqrt(),
        s0,
        phi_s0,
        r,
        b_s0: b2.sqrt(),
        coth_r,
        y: b2 / k2,
        h: sinh_r / k2.sqrt(),
        s_g: 0.5 * (2.0 * av).acosh(),
        s_v,
        s_v_degenerate,
        fbc_residual,
    }
}

/// Positive zero of `3B^2 - 2K^2`: `cosh(2 sV) = (2a^2 + 1) / (3a)`.
/// Returns `(0, true)` when `a <= 1`.
pub fn vanishing_threshold(a: ParamA) -> (f64, bool) {
    let av = a.value();
    if av <= 1.0 {
        (0.0, true)
    } else {
        (0.5 * ((2.0 * av * av + 1.0) / (3.0 * av)).acosh(), false)
    }
}

/// Derivatives of `r`, `H` and `y` in `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometryDerivatives {
    pub r_prime: f64,
    pub h_prime: f64,
    pub y_prime: f64,
    pub fd_step: f64,
    pub richardson_order: u32,
    /// Largest difference between the two finest Richardson levels.
    pub error_estimate: f64,
    /// `|K^2 H'/H - (K^2 r' coth r - a)|` relative to the size of its terms.
    pub identity_residual: f64,
}

/// Default finite-difference step `min(1e-5 max(1, a), 0.02 (a - 1/2))`.
///
/// The geometry is analytic in `sqrt(a - 1/2)`, so the step must shrink with
/// the offset near the degenerate end.
pub fn default_fd_step(a: ParamA) -> f64 {
    (1e-5 * a.value().max(1.0)).min(0.02 * a.offset())
}

/// `r'`, `H'`, `y'` by Richardson-extrapolated central differences.
pub fn geometry_derivatives(a: ParamA, tol: &Tolerances) -> Result<GeometryDerivatives> {
    geometry_derivatives_with_step(a, default_fd_step(a), tol)
}

pub fn geometry_derivatives_with_step(a: ParamA, step: f64, tol: &Tolerances) -> Result<GeometryDerivatives> {
    let av = a.value();
    if av - 2.0 * step <= 0.5 {
        return Err(LabError::StepUnderflow(step));
    }
    const LEVELS: usize = 1;
    let mut samples: Vec<(f64, CatenoidGeometry)> = Vec::new();
    let mut geom_at = |x: f64| -> Result<CatenoidGeometry> {
        if let Some((_, g)) = samples.iter().find(|(p, _)| *p == x) {
            return Ok(*g);
        }
        let g = solve_s0(ParamA::new(x)?, tol)?;
        samples.push((x, g));
        Ok(g)
    };
    let dr = numerics::central_derivative(|x| geom_at(x).map(|g| g.r), av, step, LEVELS)?;
    let dh = numerics::central_derivative(|x| geom_at(x).map(|g| g.h), av, step, LEVELS)?;
    let dy = numerics::central_derivative(|x| geom_at(x).map(|g| g.y), av, step, LEVELS)?;
    let g = solve_s0(a, tol)?;
    let k2 = g.k2();
    let lhs = k2 * dh.value / g.h;
    let rhs = k2 * dr.value * g.coth_r - av;
    let scale = lhs.abs().max(av);
    Ok(GeometryDerivatives {
        r_prime: dr.value,
        h_prime: dh.value,
        y_prime: dy.value,
        fd_step: step,
        richardson_order: dr.order,
        error_estimate: dr.error_estimate.max(dh.error_estimate).max(dy.error_estimate),
        identity_residual: (lhs - rhs).abs() / scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pa(a: f64) -> ParamA {
        ParamA::new(a).unwrap()
    }

    #[test]
    fn phi_vanishes_at_origin_and_is_odd() {
        let tol = Tolerances::default();
        assert_eq!(phi_angle(pa(1.3), 0.0, &tol).unwrap(), 0.0);
        let p = phi_angle(pa(1.3), 0.7, &tol).unwrap();
        assert_eq!(phi_angle(pa(1.3), -0.7, &tol).unwrap(), -p);
    }

    #[test]
    fn phi_obeys_monotone_bound() {
        let a = pa(1.0);
        let s = 0.5;
        let phi = phi_angle(a, s, &Tolerances::default()).unwrap();
        let bound = s * a.k() / (1.5 * 0.5_f64.sqrt());
        assert!(phi > 0.0 && phi < bound, "{phi} vs {bound}");
    }

    #[test]
    fn s0_exceeds_g_threshold_at_unit_parameter() {
        let g = solve_s0(pa(1.0), &Tolerances::default()).unwrap();
        assert!((g.s_g - 0.5 * 2.0_f64.acosh()).abs() < 1e-15);
        assert!(g.s0 > g.s_g);
        assert!(g.fbc_residual.abs() < 1e-12);
    }

    #[test]
    fn vanishing_threshold_is_degenerate_below_one() {
        assert_eq!(vanishing_threshold(pa(0.9)), (0.0, true));
        let (sv, flag) = vanishing_threshold(pa(2.0));
        assert!(!flag);
        let a = pa(2.0);
        let v = 3.0 * b_squared(a, sv) - 2.0 * a.k_squared();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn derivative_identity_holds() {
        let d = geometry_derivatives(pa(1.0), &Tolerances::default()).unwrap();
        assert!(d.r_prime > 0.0);
        assert!(d.identity_residual < 1e-6, "{d:?}");
    }
}
