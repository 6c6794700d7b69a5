//! Radial Jacobi fields: the rotational field `f*`, the boost field `u*`,
//! and the parametric field `phi_a = d/da` of the family, integrated as an ODE.

use serde::Serialize;

use crate::boundary_geometry::{self, phi_on_nodes, CatenoidGeometry};
use crate::error::{LabError, Result, ResultExt};
use crate::numerics::{roots, Dopri5, Tolerances};
use crate::profile::{b_squared, eval_profile, ParamA};

/// Sampled radial function with its first derivative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
    pub label: String,
}

impl GridFunction {
    pub fn new(label: impl Into<String>, nodes: Vec<f64>, values: Vec<f64>, derivs: Vec<f64>) -> Result<Self> {
        let n = nodes.len();
        if n < 2 || values.len() != n || derivs.len() != n {
            return Err(LabError::InvalidInput(format!(
                "grid function needs >= 2 nodes and matching lengths (nodes {n}, values {}, derivs {})",
                values.len(),
                derivs.len()
            )));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(LabError::InvalidInput("grid nodes must be strictly increasing".into()));
        }
        if values.iter().chain(&derivs).any(|v| !v.is_finite()) {
            return Err(LabError::InvalidInput("grid function has non-finite samples".into()));
        }
        Ok(Self {
            nodes,
            values,
            derivs,
            label: label.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn last_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn last_deriv(&self) -> f64 {
        self.derivs[self.derivs.len() - 1]
    }

    /// Common spacing if the nodes are uniform to rounding, else `None`.
    pub fn uniform_step(&self) -> Option<f64> {
        let n = self.nodes.len();
        let h = (self.nodes[n - 1] - self.nodes[0]) / (n - 1) as f64;
        let ok = self
            .nodes
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
        ok.then_some(h)
    }

    /// Cubic Hermite interpolant on panel `i` at `t`.
    fn hermite(&self, i: usize, t: f64) -> f64 {
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let h = x1 - x0;
        let u = (t - x0) / h;
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        h00 * self.values[i] + h10 * h * self.derivs[i] + h01 * self.values[i + 1] + h11 * h * self.derivs[i + 1]
    }

    /// Zeros strictly inside `(nodes[0], nodes[last])`, located by bisection
    /// on the Hermite interpolant of each sign-changing panel.
    pub fn interior_zeros(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let mut zeros = Vec::new();
        for i in 0..n - 1 {
            let (v0, v1) = (self.values[i], self.values[i + 1]);
            let interior_node = i > 0 && v0 == 0.0;
            if interior_node {
                zeros.push(self.nodes[i]);
                continue;
            }
            if v0 * v1 < 0.0 {
                let root = roots::bisect(|t| self.hermite(i, t), self.nodes[i], self.nodes[i + 1], 1e-14)
                    .map(|r| r.x)
                    .unwrap_or(0.5 * (self.nodes[i] + self.nodes[i + 1]));
                zeros.push(root);
            }
        }
        zeros
    }
}

/// Closed-form fields at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFields {
    pub f_star: f64,
    pub f_star_prime: f64,
    pub u_star: f64,
    pub u_star_prime: f64,
}

/// `f*`, `f*'`, `u*`, `u*'` at `s`, given the twist angle `phi(s)`.
pub fn closed_fields_with_phi(a: ParamA, s: f64, phi: f64) -> ClosedFields {
    let av = a.value();
    let k = a.k();
    let p = eval_profile(a, s);
    let a_prof = p.a2.sqrt();
    let sh2 = (2.0 * s).sinh();
    let g = a_prof * phi.cosh();
    let f_star = (av * p.b * sh2 * phi.cosh() + k * phi.sinh()) / (a_prof * p.b);
    let f_star_prime = 2.0 * g - (p.b_prime / p.b) * f_star;
    let (u_star, u_star_prime) = boost_field(a, s);
    ClosedFields {
        f_star,
        f_star_prime,
        u_star,
        u_star_prime,
    }
}

/// Boost field `u* = -a sinh(2s) / B` and its derivative.
pub fn boost_field(a: ParamA, s: f64) -> (f64, f64) {
    let av = a.value();
    let b2 = b_squared(a, s);
    let b = b2.sqrt();
    let sh2 = (2.0 * s).sinh();
    let ch2 = (2.0 * s).cosh();
    (-av * sh2 / b, -av * (2.0 * ch2 * b2 - av * sh2 * sh2) / (b2 * b))
}

/// Closed-form fields at `s`, computing the twist angle by quadrature.
pub fn closed_fields(a: ParamA, s: f64, tol: &Tolerances) -> Result<ClosedFields> {
    let phi = boundary_geometry::phi_angle(a, s, tol)?;
    Ok(closed_fields_with_phi(a, s, phi))
}

/// Uniform nodes `0 = s_0 < ... < s_{n-1} = s0`.
pub fn uniform_nodes(s0: f64, n_nodes: usize) -> Vec<f64> {
    let n = n_nodes.max(2);
    let h = s0 / (n - 1) as f64;
    let mut nodes: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
    nodes[n - 1] = s0;
    nodes
}

/// `f*` and `u*` sampled on a uniform grid over `[0, s0]`.
pub fn sample_closed_fields(
    geom: &CatenoidGeometry,
    n_nodes: usize,
    tol: &Tolerances,
) -> Result<(GridFunction, GridFunction)> {
    let a = geom.param();
    let nodes = uniform_nodes(geom.s0, n_nodes);
    let phis = phi_on_nodes(a, &nodes, tol)?;
    let fields: Vec<ClosedFields> = nodes
        .iter()
        .zip(&phis)
        .map(|(&s, &phi)| closed_fields_with_phi(a, s, phi))
        .collect();
    let f = GridFunction::new(
        "f_star",
        nodes.clone(),
        fields.iter().map(|c| c.f_star).collect(),
        fields.iter().map(|c| c.f_star_prime).collect(),
    )?;
    let u = GridFunction::new(
        "u_star",
        nodes,
        fields.iter().map(|c| c.u_star).collect(),
        fields.iter().map(|c| c.u_star_prime).collect(),
    )?;
    Ok((f, u))
}

/// Smallest `B(0)` accepted before the rescaled variable is required.
const MIN_B_AT_ORIGIN: f64 = 1e-8;

/// Integrate `u'' + (B'/B) u' + (|II|^2 - 2) u = 0`, `u(0) = 1/(2K)`,
/// `u'(0) = 0` on `[0, s0]`.
pub fn integrate_phi_a(geom: &CatenoidGeometry, n_nodes: usize, tol: &Tolerances) -> Result<GridFunction> {
    if n_nodes < 32 {
        return Err(LabError::InvalidInput(format!("integrate_phi_a needs >= 32 nodes, got {n_nodes}")));
    }
    let a = geom.param();
    if b_squared(a, 0.0).sqrt() <= MIN_B_AT_ORIGIN {
        return Err(LabError::StepCollapse { at: 0.0, step: 0.0 });
    }
    let rhs = |s: f64, y: &[f64; 2]| {
        let p = eval_profile(a, s);
        [y[1], -(p.b_prime / p.b) * y[1] - (p.ii2 - 2.0) * y[0]]
    };
    let nodes = uniform_nodes(geom.s0, n_nodes);
    let mut solver = Dopri5::new(rhs, tol.ode);
    let states = solver
        .sample(&nodes, [0.5 / a.k(), 0.0])
        .context("parametric Jacobi field")?;
    GridFunction::new(
        "phi_a",
        nodes,
        states.iter().map(|y| y[0]).collect(),
        states.iter().map(|y| y[1]).collect(),
    )
}

/// `B (phi_a u*' - phi_a' u*)` at every node of `phi`; constant `-a/K`.
pub fn wronskian(a: ParamA, phi: &GridFunction) -> Vec<f64> {
    phi.nodes
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let (u, du) = boost_field(a, s);
            let b = b_squared(a, s).sqrt();
            b * (phi.values[i] * du - phi.derivs[i] * u)
        })
        .collect()
}

/// Boundary value of `phi_a` from `r'(a)`:
/// `a [K^2 r' sinh(2 s0) - B^2] / (K [B^2 - 2K^2])`.
pub fn phi_s0_closed(geom: &CatenoidGeometry, r_prime: f64) -> Result<f64> {
    let b2 = geom.b2_s0();
    let k2 = geom.k2();
    let denom = geom.g_margin_alt();
    let relative = denom.abs() / b2;
    if relative < 1e-8 {
        return Err(LabError::DegenerateDenominator { value: denom, relative });
    }
    Ok(geom.a * (k2 * r_prime * (2.0 * geom.s0).sinh() - b2) / (geom.k * denom))
}

/// Which field a Robin defect refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldLabel {
    FStar,
    UStar,
    PhiA,
}

/// `Ru(s0) = u'(s0) - coth r u(s0)` compared with its expected value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RobinDefect {
    pub field: FieldLabel,
    pub value_at_s0: f64,
    pub expected: f64,
    /// `|value - expected| / (|u'(s0)| + coth r |u(s0)|)`.
    pub deviation: f64,
}

fn defect(field: FieldLabel, u: f64, du: f64, coth_r: f64, expected: f64) -> RobinDefect {
    let value = du - coth_r * u;
    let scale = du.abs() + coth_r * u.abs();
    RobinDefect {
        field,
        value_at_s0: value,
        expected,
        deviation: (value - expected).abs() / scale.max(f64::MIN_POSITIVE),
    }
}

/// Robin defects of `f*`, `u*` and `phi_a` from precomputed inputs.
pub fn robin_defects_for(geom: &CatenoidGeometry, r_prime: f64, phi: &GridFunction) -> [RobinDefect; 3] {
    let a = geom.param();
    let c = closed_fields_with_phi(a, geom.s0, geom.phi_s0);
    let b = geom.b_s0;
    let b2 = geom.b2_s0();
    [
        defect(FieldLabel::FStar, c.f_star, c.f_star_prime, geom.coth_r, 0.0),
        defect(
            FieldLabel::UStar,
            c.u_star,
            c.u_star_prime,
            geom.coth_r,
            geom.g_margin_alt() / (b2 * b),
        ),
        defect(
            FieldLabel::PhiA,
            phi.last_value(),
            phi.last_deriv(),
            geom.coth_r,
            -r_prime * geom.k / b2,
        ),
    ]
}

/// Default node count for sampled fields.
pub const DEFAULT_NODES: usize = 2049;

/// Robin defects for the three fields at `a`.
pub fn robin_defects(a: ParamA, tol: &Tolerances) -> Result<[RobinDefect; 3]> {
    let geom = boundary_geometry::solve_s0(a, tol)?;
    let d = boundary_geometry::geometry_derivatives(a, tol)?;
    let phi = integrate_phi_a(&geom, DEFAULT_NODES, tol)?;
    Ok(robin_defects_for(&geom, d.r_prime, &phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_geometry::solve_s0;

    fn geom(a: f64) -> CatenoidGeometry {
        solve_s0(ParamA::new(a).unwrap(), &Tolerances::default()).unwrap()
    }

    #[test]
    fn fields_at_origin() {
        for a in [0.6, 1.0, 3.0] {
            let p = ParamA::new(a).unwrap();
            let c = closed_fields(p, 0.0, &Tolerances::default()).unwrap();
            assert_eq!(c.f_star, 0.0);
            assert_eq!(c.u_star, 0.0);
            assert!((c.f_star_prime - 2.0 * (a + 0.5).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn f_star_hits_sinh_r_at_boundary() {
        let g = geom(1.0);
        let c = closed_fields_with_phi(g.param(), g.s0, g.phi_s0);
        assert!((c.f_star - g.sinh_r()).abs() < 1e-8);
    }

    #[test]
    fn phi_a_starts_at_half_inverse_k() {
        let g = geom(1.0);
        let phi = integrate_phi_a(&g, 64, &Tolerances::default()).unwrap();
        assert!((phi.values[0] - 1.0 / (2.0 * 0.75_f64.sqrt())).abs() < 1e-15);
        assert!(phi.values.iter().all(|v| *v > 0.0));
    }

    #[test]
    fn wronskian_at_origin_is_exact() {
        let g = geom(1.3);
        let a = g.param();
        let phi = integrate_phi_a(&g, 64, &Tolerances::default()).unwrap();
        let w = wronskian(a, &phi);
        assert!((w[0] + a.value() / a.k()).abs() < 1e-14);
    }

    #[test]
    fn too_few_nodes_rejected() {
        let g = geom(1.0);
        assert!(integrate_phi_a(&g, 8, &Tolerances::default()).is_err());
    }

    #[test]
    fn hermite_zero_location() {
        let nodes: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let g = GridFunction::new(
            "cos",
            nodes.clone(),
            nodes.iter().map(|x| (3.0 * x).cos()).collect(),
            nodes.iter().map(|x| -3.0 * (3.0 * x).sin()).collect(),
        )
        .unwrap();
        let z = g.interior_zeros();
        assert_eq!(z.len(), 1);
        assert!((z[0] - std::f64::consts::FRAC_PI_6).abs() < 1e-5);
    }
}
