//! Radial Robin eigenproblem of Fourier mode `k`:
//!
//! `-(B u')' - B W_k u = mu B u` on `[0, s0]`, with `u'(0) = 0` (even) or
//! `u(0) = 0` (odd), and `u'(s0) = coth r u(s0)`.
//!
//! Eigenvalues come from a Prufer angle, negative counts from the
//! zero-energy solution, and both are reported side by side.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::boundary_geometry::{CatenoidGeometry, PhiTable};
use crate::error::{LabError, Result, ResultExt};
use crate::jacobi_fields::{self, uniform_nodes, GridFunction};
use crate::numerics::{quadrature, roots, Dopri5, QuadTolerance, Tolerances};
use crate::profile::{b_squared, eval_profile, potential_wk, second_fundamental_form_sq, ParamA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Fourier mode and parity under `s -> -s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ModeSector {
    pub k: u32,
    pub parity: Parity,
}

impl ModeSector {
    pub const fn new(k: u32, parity: Parity) -> Self {
        Self { k, parity }
    }

    pub const fn even(k: u32) -> Self {
        Self::new(k, Parity::Even)
    }

    pub const fn odd(k: u32) -> Self {
        Self::new(k, Parity::Odd)
    }

    /// Prufer angle at `s = 0` for the left boundary condition.
    fn initial_angle(self) -> f64 {
        match self.parity {
            Parity::Even => 0.5 * PI,
            Parity::Odd => 0.0,
        }
    }

    /// Initial `(u, B u')` for the left boundary condition.
    fn initial_state(self) -> [f64; 2] {
        match self.parity {
            Parity::Even => [1.0, 0.0],
            Parity::Odd => [0.0, 1.0],
        }
    }
}

impl fmt::Display for ModeSector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} {}", self.k, self.parity)
    }
}

/// Largest eigenvalue index accepted by [`eigenvalues`].
pub const MAX_INDEX: usize = 8;

/// Relative width of the near-kernel window `|mu| < 1e-6 (1 + |mu_1|)`.
pub const KERNEL_THRESHOLD: f64 = 1e-6;

/// Eigenvalues and counts for one sector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub sector: ModeSector,
    pub eigenvalues: Vec<f64>,
    /// Interior zeros of each eigenfunction, from direct integration.
    pub node_counts: Vec<usize>,
    /// Eigenvalues below zero, excluding near-kernel ones.
    pub negative_count: usize,
    /// `min |mu_n|`.
    pub kernel_margin: f64,
    /// An eigenvalue lies inside the near-kernel window.
    pub near_kernel: bool,
    /// Every computed eigenvalue is negative, so the count is a lower bound.
    pub count_saturated: bool,
    pub shooting: ShootingCount,
}

impl SpectralReport {
    pub fn ground(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Negative count read off the zero-energy solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingCount {
    /// Interior zeros of the zero-energy solution on `(0, s0)`.
    pub zero_count: usize,
    /// 1 when `psi'/psi - coth r < 0` at `s0`.
    pub boundary_correction: usize,
    pub negative_count: usize,
    /// `psi'/psi - coth r` at `s0`.
    pub log_derivative_defect: f64,
    /// Zero-energy solution satisfies the Robin condition to tolerance, or
    /// vanishes at `s0`; the sector then has a (near) kernel.
    pub kernel_proximity: bool,
}

/// Angular target `beta = arccot(coth r B(s0))` in `(0, pi/2)`.
fn target_angle(geom: &CatenoidGeometry) -> f64 {
    (1.0 / (geom.coth_r * geom.b_s0)).atan()
}

/// Prufer angle at `s0`: `theta' = cos^2/B + B (W_k + mu) sin^2`.
pub fn prufer_angle_at_s0(geom: &CatenoidGeometry, sector: ModeSector, mu: f64, tol: &Tolerances) -> Result<f64> {
    let a = geom.param();
    let k = sector.k;
    let rhs = move |s: f64, th: &[f64; 1]| {
        let b = b_squared(a, s).sqrt();
        let (sn, cs) = th[0].sin_cos();
        [cs * cs / b + b * (potential_wk(a, s, k) + mu) * sn * sn]
    };
    let mut solver = Dopri5::new(rhs, tol.ode);
    Ok(solver.advance(0.0, [sector.initial_angle()], geom.s0)?[0])
}

/// Number of eigenvalues strictly below `mu`.
pub fn count_below(geom: &CatenoidGeometry, sector: ModeSector, mu: f64, tol: &Tolerances) -> Result<usize> {
    let excess = prufer_angle_at_s0(geom, sector, mu, tol)? - target_angle(geom);
    Ok(if excess <= 0.0 {
        0
    } else {
        (excess / PI).floor() as usize + 1
    })
}

fn max_abs_potential(geom: &CatenoidGeometry, k: u32) -> f64 {
    let a = geom.param();
    (0..=256)
        .map(|i| potential_wk(a, geom.s0 * i as f64 / 256.0, k).abs())
        .fold(0.0, f64::max)
}

/// Zero-energy-style solution `(u, B u')` sampled on `nodes` at spectral
/// parameter `mu`, started from the sector's left boundary condition.
fn shoot(geom: &CatenoidGeometry, sector: ModeSector, mu: f64, nodes: &[f64], tol: &Tolerances) -> Result<GridFunction> {
    let a = geom.param();
    let k = sector.k;
    let rhs = move |s: f64, y: &[f64; 2]| {
        let b = b_squared(a, s).sqrt();
        [y[1] / b, -b * (potential_wk(a, s, k) + mu) * y[0]]
    };
    let mut solver = Dopri5::new(rhs, tol.ode);
    let states = solver.sample(nodes, sector.initial_state())?;
    let derivs = nodes
        .iter()
        .zip(&states)
        .map(|(&s, y)| y[1] / b_squared(a, s).sqrt())
        .collect();
    GridFunction::new(format!("psi[{sector}]"), nodes.to_vec(), states.iter().map(|y| y[0]).collect(), derivs)
}

/// Node count used when sampling shooting solutions.
const SHOOT_NODES: usize = 1025;

/// The first `n_max + 1` eigenvalues of `sector`, plus the shooting count.
pub fn eigenvalues(geom: &CatenoidGeometry, sector: ModeSector, n_max: usize, tol: &Tolerances) -> Result<SpectralReport> {
    if n_max > MAX_INDEX {
        return Err(LabError::InvalidInput(format!("n_max must be <= {MAX_INDEX}, got {n_max}")));
    }
    let beta = target_angle(geom);
    let scale = 1.0 + max_abs_potential(geom, sector.k);
    let theta = |mu: f64| prufer_angle_at_s0(geom, sector, mu, tol);

    let mut floor = -scale;
    while theta(floor)? >= beta {
        floor *= 2.0;
        if floor < -1e12 {
            return Err(LabError::BracketExhausted { bound: floor });
        }
    }
    let top_target = beta + n_max as f64 * PI;
    let mut ceiling = 50.0 * scale;
    while theta(ceiling)? <= top_target {
        ceiling *= 2.0;
        if ceiling > 1e12 {
            return Err(LabError::BracketExhausted { bound: ceiling });
        }
    }

    let mut eigen = Vec::with_capacity(n_max + 1);
    let mut lo = floor;
    for n in 0..=n_max {
        let target = beta + n as f64 * PI;
        let mut err = None;
        let mut f = |mu: f64| match theta(mu) {
            Ok(t) => t - target,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        };
        let f_lo = f(lo);
        let f_hi = f(ceiling);
        let root = roots::brent_with_values(&mut f, lo, f_lo, ceiling, f_hi, 1e-11);
        if let Some(e) = err {
            return Err(e.context(format!("eigenvalue {n} in {sector}")));
        }
        let mu = root.context("Prufer eigenvalue")?.x;
        eigen.push(mu);
        lo = mu;
    }

    let nodes = uniform_nodes(geom.s0, SHOOT_NODES);
    let node_counts = eigen
        .iter()
        .map(|&mu| shoot(geom, sector, mu, &nodes, tol).map(|u| u.interior_zeros().len()))
        .collect::<Result<Vec<_>>>()?;

    let mu1 = eigen.get(1).copied().unwrap_or(eigen[0]);
    let window = KERNEL_THRESHOLD * (1.0 + mu1.abs());
    let near_kernel = eigen.iter().any(|m| m.abs() < window);
    let negative_count = eigen.iter().filter(|m| **m < 0.0 && m.abs() >= window).count();
    let kernel_margin = eigen.iter().map(|m| m.abs()).fold(f64::INFINITY, f64::min);
    let count_saturated = eigen.iter().all(|m| *m < 0.0);
    let shooting = shooting_count(geom, sector, tol)?;
    Ok(SpectralReport {
        sector,
        eigenvalues: eigen,
        node_counts,
        negative_count,
        kernel_margin,
        near_kernel,
        count_saturated,
        shooting,
    })
}

/// Relative tolerance on the Robin log-derivative for kernel proximity.
const ROBIN_KERNEL_TOL: f64 = 1e-7;

fn count_from_solution(psi: &GridFunction, coth_r: f64) -> ShootingCount {
    let s0 = *psi.nodes.last().expect("non-empty grid");
    let zeros = psi.interior_zeros();
    let zero_near_end = zeros.iter().any(|z| (s0 - z).abs() < 1e-10);
    let (u, du) = (psi.last_value(), psi.last_deriv());
    let vanishing_end = u.abs() <= 1e-10 * du.abs();
    let defect = du / u - coth_r;
    let robin_kernel = defect.abs() <= ROBIN_KERNEL_TOL * ((du / u).abs() + coth_r);
    let kernel_proximity = zero_near_end || vanishing_end || robin_kernel;
    let zero_count = zeros.iter().filter(|z| (s0 - **z).abs() >= 1e-10).count();
    let boundary_correction = usize::from(!kernel_proximity && defect < 0.0);
    ShootingCount {
        zero_count,
        boundary_correction,
        negative_count: zero_count + boundary_correction,
        log_derivative_defect: defect,
        kernel_proximity,
    }
}

/// Negative count `n_z(psi_0) + delta` from the zero-energy solution.
///
/// Mode 0 uses the known fields: `phi_a` (even) and `-u*` (odd). Other
/// sectors integrate `psi_0` from the left boundary condition.
pub fn shooting_count(geom: &CatenoidGeometry, sector: ModeSector, tol: &Tolerances) -> Result<ShootingCount> {
    let psi = match (sector.k, sector.parity) {
        (0, Parity::Even) => jacobi_fields::integrate_phi_a(geom, SHOOT_NODES, tol)?,
        (0, Parity::Odd) => {
            let a = geom.param();
            let nodes = uniform_nodes(geom.s0, SHOOT_NODES);
            let (values, derivs): (Vec<f64>, Vec<f64>) = nodes
                .iter()
                .map(|&s| {
                    let (u, du) = jacobi_fields::boost_field(a, s);
                    (-u, -du)
                })
                .unzip();
            GridFunction::new("-u_star", nodes, values, derivs)?
        }
        _ => shoot(geom, sector, 0.0, &uniform_nodes(geom.s0, SHOOT_NODES), tol)?,
    };
    Ok(count_from_solution(&psi, geom.coth_r))
}

/// Closed form of `psi'/psi - coth r` at `s0` for `psi = -u*`:
/// `(2a - cosh 2s0) / (B^2 sinh 2s0)`.
pub fn odd_mode0_defect_closed(geom: &CatenoidGeometry) -> f64 {
    let s2 = 2.0 * geom.s0;
    -geom.g_margin_alt() / (geom.a * geom.b2_s0() * s2.sinh())
}

/// Half-interval quadratic form
/// `2 int_0^s0 [B u'^2 - B W_k u^2] ds - 2 coth r B(s0) u(s0)^2`
/// for a sampled function on a uniform grid with an odd node count.
pub fn quadratic_form(geom: &CatenoidGeometry, k: u32, u: &GridFunction) -> Result<f64> {
    let step = u
        .uniform_step()
        .ok_or_else(|| LabError::InvalidInput("quadratic_form needs uniform nodes".into()))?;
    if (u.nodes[0]).abs() > 1e-14 || (u.nodes[u.len() - 1] - geom.s0).abs() > 1e-12 * geom.s0 {
        return Err(LabError::InvalidInput("quadratic_form needs nodes spanning [0, s0]".into()));
    }
    let a = geom.param();
    let integrand: Vec<f64> = u
        .nodes
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let b = b_squared(a, s).sqrt();
            b * u.derivs[i] * u.derivs[i] - b * potential_wk(a, s, k) * u.values[i] * u.values[i]
        })
        .collect();
    let interior = quadrature::simpson_uniform(&integrand, step)?;
    let end = u.last_value();
    Ok(2.0 * interior - 2.0 * geom.coth_r * geom.b_s0 * end * end)
}

/// Radial function with derivative, evaluated pointwise on `[-s0, s0]`.
pub trait RadialFn {
    fn eval(&self, s: f64) -> (f64, f64);
}

impl<F: Fn(f64) -> (f64, f64)> RadialFn for F {
    fn eval(&self, s: f64) -> (f64, f64) {
        self(s)
    }
}

fn tight_quad(tol: &Tolerances) -> QuadTolerance {
    QuadTolerance {
        abs: tol.quad.abs.min(1e-14),
        rel: tol.quad.rel.min(1e-12),
        max_intervals: tol.quad.max_intervals.max(4000),
    }
}

/// Integrate over `[-s0, s0]`, split at the origin.
fn integrate_full<F: Fn(f64) -> f64>(f: F, s0: f64, tol: &Tolerances) -> Result<f64> {
    let q = tight_quad(tol);
    Ok(quadrature::integrate(&f, -s0, 0.0, q)?.value + quadrature::integrate(&f, 0.0, s0, q)?.value)
}

/// Full-interval bilinear form
/// `int [B u'v' - B W_k u v] - coth r B(s0) [u v (s0) + u v (-s0)]`.
pub fn bilinear_form_full<U: RadialFn, V: RadialFn>(
    geom: &CatenoidGeometry,
    k: u32,
    u: &U,
    v: &V,
    tol: &Tolerances,
) -> Result<f64> {
    let a = geom.param();
    let interior = integrate_full(
        |s| {
            let (uu, du) = u.eval(s);
            let (vv, dv) = v.eval(s);
            let b = b_squared(a, s).sqrt();
            b * du * dv - b * potential_wk(a, s, k) * uu * vv
        },
        geom.s0,
        tol,
    )?;
    let (up, _) = u.eval(geom.s0);
    let (vp, _) = v.eval(geom.s0);
    let (um, _) = u.eval(-geom.s0);
    let (vm, _) = v.eval(-geom.s0);
    Ok(interior - geom.coth_r * geom.b_s0 * (up * vp + um * vm))
}

/// Real polynomial `sum c_i s^i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    pub fn derivative(&self, s: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, c)| acc * s + i as f64 * c)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| *c == 0.0)
    }

    /// `q - q'(s0) s^2 / (2 s0)`, whose derivative vanishes at `+-s0` when
    /// `q` is even.
    pub fn neumann_projection(&self, s0: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < 3 {
            coeffs.resize(3, 0.0);
        }
        coeffs[2] -= self.derivative(s0) / (2.0 * s0);
        Self { coeffs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PiconeBase {
    FStar,
    B,
}

/// Both sides of a Picone identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PiconeCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / (1 + |lhs|)`.
    pub residual: f64,
}

/// Panels of the twist-angle table used for pointwise `f*`.
const PHI_TABLE_PANELS: usize = 4096;

/// Evaluate a Picone identity for `u = base * h` on `[-s0, s0]`.
///
/// * base `f*`: `S_k(f* h) = (k^2 - 1) int f*^2 h^2 / B + int B f*^2 h'^2`.
/// * base `B`: `S_k(B h) = int [B^3 h'^2 + ((k^2 - 1) B^2 - 2K^2) h^2 / B]`,
///   with `h` the Neumann projection of an even polynomial.
pub fn picone_check(
    geom: &CatenoidGeometry,
    k: u32,
    base: PiconeBase,
    h: &Polynomial,
    tol: &Tolerances,
) -> Result<PiconeCheck> {
    let a = geom.param();
    let kk = f64::from(k) * f64::from(k);
    let (lhs, rhs) = match base {
        PiconeBase::FStar => {
            let table = PhiTable::new(a, geom.s0, PHI_TABLE_PANELS, tol)?;
            let f_star = |s: f64| {
                let c = jacobi_fields::closed_fields_with_phi(a, s, table.eval(s));
                (c.f_star, c.f_star_prime)
            };
            let u = |s: f64| {
                let (f, df) = f_star(s);
                (f * h.eval(s), df * h.eval(s) + f * h.derivative(s))
            };
            let lhs = bilinear_form_full(geom, k, &u, &u, tol)?;
            let rhs = integrate_full(
                |s| {
                    let (f, _) = f_star(s);
                    let b = b_squared(a, s).sqrt();
                    let (hv, dh) = (h.eval(s), h.derivative(s));
                    (kk - 1.0) * f * f * hv * hv / b + b * f * f * dh * dh
                },
                geom.s0,
                tol,
            )?;
            (lhs, rhs)
        }
        PiconeBase::B => {
            if !h.is_even() {
                return Err(LabError::InvalidInput("base-B Picone check needs an even polynomial".into()));
            }
            let hp = h.neumann_projection(geom.s0);
            let u = |s: f64| {
                let p = eval_profile(a, s);
                (p.b * hp.eval(s), p.b_prime * hp.eval(s) + p.b * hp.derivative(s))
            };
            let lhs = bilinear_form_full(geom, k, &u, &u, tol)?;
            let k2 = a.k_squared();
            let rhs = integrate_full(
                |s| {
                    let b2 = b_squared(a, s);
                    let b = b2.sqrt();
                    let (hv, dh) = (hp.eval(s), hp.derivative(s));
                    b2 * b * dh * dh + ((kk - 1.0) * b2 - 2.0 * k2) * hv * hv / b
                },
                geom.s0,
                tol,
            )?;
            (lhs, rhs)
        }
    };
    Ok(PiconeCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / (1.0 + lhs.abs()),
    })
}

/// Form matrix on the span of the four ambient coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmbientFormMatrix {
    /// `S(Phi^A, Phi^B)` from modal radial forms.
    pub entries: [[f64; 4]; 4],
    /// Diagonal from `-int |II|^2 (Phi^A)^2 dA` (minus the boundary term for
    /// `A = 0`).
    pub closed_diagonal: [f64; 4],
}

impl AmbientFormMatrix {
    pub fn max_off_diagonal_ratio(&self) -> f64 {
        let diag = (0..4).map(|i| self.entries[i][i].abs()).fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    worst = worst.max(self.entries[i][j].abs() / diag);
                }
            }
        }
        worst
    }

    pub fn diagonal_negative(&self) -> bool {
        (0..4).all(|i| self.entries[i][i] < 0.0)
    }
}

/// Assemble the 4x4 matrix of the form on `Phi^0 = A cosh phi`,
/// `Phi^1 = A sinh phi`, `Phi^2 = B cos theta`, `Phi^3 = B sin theta`.
pub fn ambient_form_matrix(geom: &CatenoidGeometry, tol: &Tolerances) -> Result<AmbientFormMatrix> {
    let a = geom.param();
    let av = a.value();
    let table = PhiTable::new(a, geom.s0, PHI_TABLE_PANELS, tol)?;
    let timelike = |s: f64| {
        let p = eval_profile(a, s);
        let ap = p.a2.sqrt();
        let dap = av * (2.0 * s).sinh() / ap;
        let phi = table.eval(s);
        let dphi = table.derivative(s);
        (ap * phi.cosh(), dap * phi.cosh() + ap * phi.sinh() * dphi)
    };
    let axial = |s: f64| {
        let p = eval_profile(a, s);
        let ap = p.a2.sqrt();
        let dap = av * (2.0 * s).sinh() / ap;
        let phi = table.eval(s);
        let dphi = table.derivative(s);
        (ap * phi.sinh(), dap * phi.sinh() + ap * phi.cosh() * dphi)
    };
    let radial = |s: f64| {
        let p = eval_profile(a, s);
        (p.b, p.b_prime)
    };

    let two_pi = 2.0 * PI;
    let s00 = two_pi * bilinear_form_full(geom, 0, &timelike, &timelike, tol)?;
    let s11 = two_pi * bilinear_form_full(geom, 0, &axial, &axial, tol)?;
    let s01 = two_pi * bilinear_form_full(geom, 0, &timelike, &axial, tol)?;
    let s22 = PI * bilinear_form_full(geom, 1, &radial, &radial, tol)?;

    // Pairs involving cos(theta) or sin(theta) vanish by angular integration.
    let mut entries = [[0.0; 4]; 4];
    entries[0][0] = s00;
    entries[1][1] = s11;
    entries[0][1] = s01;
    entries[1][0] = s01;
    entries[2][2] = s22;
    entries[3][3] = s22;

    let ii_weighted = |f: &dyn Fn(f64) -> f64| {
        integrate_full(|s| second_fundamental_form_sq(a, s) * f(s).powi(2) * b_squared(a, s).sqrt(), geom.s0, tol)
    };
    let c00 = -two_pi * ii_weighted(&|s| timelike(s).0)? - 4.0 * PI * geom.b_s0 * geom.coth_r;
    let c11 = -two_pi * ii_weighted(&|s| axial(s).0)?;
    let c22 = -PI * ii_weighted(&|s| radial(s).0)?;
    Ok(AmbientFormMatrix {
        entries,
        closed_diagonal: [c00, c11, c22, c22],
    })
}

/// Convenience: all eigenvalue reports for `k in 0..=k_max`, both parities.
pub fn all_sectors(geom: &CatenoidGeometry, k_max: u32, n_max: usize, tol: &Tolerances) -> Result<Vec<SpectralReport>> {
    let mut out = Vec::new();
    for k in 0..=k_max {
        for parity in [Parity::Even, Parity::Odd] {
            out.push(eigenvalues(geom, ModeSector::new(k, parity), n_max, tol)?);
        }
    }
    Ok(out)
}

/// Parameter accessor kept for callers holding only `a`.
pub fn eigenvalues_at(a: ParamA, sector: ModeSector, n_max: usize, tol: &Tolerances) -> Result<SpectralReport> {
    let geom = crate::boundary_geometry::solve_s0(a, tol)?;
    eigenvalues(&geom, sector, n_max, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_geometry::solve_s0;

    fn geom(a: f64) -> CatenoidGeometry {
        solve_s0(ParamA::new(a).unwrap(), &Tolerances::default()).unwrap()
    }

    #[test]
    fn rotational_kernel_in_mode_one() {
        let g = geom(1.0);
        let rep = eigenvalues(&g, ModeSector::odd(1), 2, &Tolerances::default()).unwrap();
        assert!(rep.eigenvalues[0].abs() < 1e-7, "{rep:?}");
        assert!(rep.near_kernel);
        assert_eq!(rep.negative_count, 0);
    }

    #[test]
    fn mode_zero_has_negative_ground_states() {
        let g = geom(1.0);
        let tol = Tolerances::default();
        assert!(eigenvalues(&g, ModeSector::even(0), 1, &tol).unwrap().ground() < 0.0);
        assert!(eigenvalues(&g, ModeSector::odd(0), 1, &tol).unwrap().ground() < 0.0);
    }

    #[test]
    fn shooting_counts_at_unit_parameter() {
        let g = geom(1.0);
        let tol = Tolerances::default();
        let even = shooting_count(&g, ModeSector::even(0), &tol).unwrap();
        assert_eq!((even.zero_count, even.boundary_correction, even.negative_count), (0, 1, 1));
        let odd = shooting_count(&g, ModeSector::odd(0), &tol).unwrap();
        assert_eq!((odd.zero_count, odd.boundary_correction, odd.negative_count), (0, 1, 1));
        assert_eq!(shooting_count(&g, ModeSector::odd(2), &tol).unwrap().negative_count, 0);
    }

    #[test]
    fn odd_mode0_defect_matches_closed_form() {
        let g = geom(1.4);
        let s = shooting_count(&g, ModeSector::odd(0), &Tolerances::default()).unwrap();
        let closed = odd_mode0_defect_closed(&g);
        assert!((s.log_derivative_defect - closed).abs() < 1e-10 * closed.abs().max(1.0));
    }

    #[test]
    fn neumann_projection_kills_end_slopes() {
        let q = Polynomial::new(vec![0.3, 0.0, -1.2, 0.0, 0.7]);
        let h = q.neumann_projection(0.8);
        assert!(h.derivative(0.8).abs() < 1e-15);
        assert!(h.derivative(-0.8).abs() < 1e-15);
    }

    #[test]
    fn f_star_picone_with_constant_h_is_zero() {
        let g = geom(1.0);
        let c = picone_check(&g, 1, PiconeBase::FStar, &Polynomial::new(vec![1.0]), &Tolerances::default()).unwrap();
        assert!(c.residual < 1e-8, "{c:?}");
        assert!(c.lhs.abs() < 1e-8 * (1.0 + g.coth_r * g.b_s0 * g.sinh_r().powi(2)));
    }
}
