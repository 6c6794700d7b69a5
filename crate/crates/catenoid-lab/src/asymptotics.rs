//! Constants of the degenerate limit `a -> 1/2+` and of the large-`a` limit,
//! with endpoint fits against the solved geometry.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::boundary_geometry::{self, GeometryDerivatives};
use crate::error::{LabError, Result, ResultExt};
use crate::numerics::{roots, Tolerances};
use crate::profile::ParamA;

/// Closed-form constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticConstants {
    /// Positive root of `sigma = coth sigma`.
    pub sigma_star: f64,
    /// `sinh sigma*`.
    pub rho_star: f64,
    /// `sigma* cosh sigma*`, the limit of `H(a)`.
    pub c_star: f64,
    /// `sinh^2 sigma*`.
    pub s_val: f64,
    /// Slope of `H` at `a = 1/2+`: `c* (s-1)(3s-2) / (12 s)`.
    pub c0: f64,
    /// `(s-1)(s-4)(s+1) / (12 s sigma* cosh sigma*)`.
    pub xi1: f64,
    /// `-(9 sigma* + (7/2) sinh 2sigma* - 10/sigma*) / 12`.
    pub i_star: f64,
    /// `log(sqrt2 Gamma(1/4)^2 / pi^{3/2})`.
    pub d_inf: f64,
    pub gamma_quarter: f64,
}

impl AsymptoticConstants {
    /// `cosh^2 sigma*`, the limit of `y(a)` at `1/2+`.
    pub fn y_half_limit(&self) -> f64 {
        1.0 + self.s_val
    }

    /// `e^{2 d_inf} / 4`, the limit of `y(a)/a` at infinity.
    pub fn y_slope_infinity(&self) -> f64 {
        (2.0 * self.d_inf).exp() / 4.0
    }
}

/// `sigma* - coth sigma*`; vanishes at the root.
pub fn sigma_equation(sigma: f64) -> f64 {
    sigma - 1.0 / sigma.tanh()
}

/// Bisection of `sigma - coth sigma` on `[0.9, 2]`.
pub fn sigma_star() -> f64 {
    // Both endpoints have fixed signs; the bracket cannot fail.
    roots::bisect(sigma_equation, 0.9, 2.0, 1e-15).map(|r| r.x).unwrap_or(f64::NAN)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos approximation (`g = 7`, 9 terms), valid for `x >= 1/2`.
pub fn gamma_lanczos(x: f64) -> Result<f64> {
    if !(x >= 0.5) || !x.is_finite() {
        return Err(LabError::InvalidInput(format!("Lanczos gamma requires x >= 1/2, got {x}")));
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * series)
}

/// `Gamma(1/4) = 4 Gamma(5/4)`, so the Lanczos series is evaluated away
/// from the reflection branch.
pub fn gamma_quarter() -> f64 {
    4.0 * gamma_lanczos(1.25).unwrap_or(f64::NAN)
}

/// `Gamma(1/4) Gamma(3/4) - pi sqrt2`, relative.
pub fn reflection_residual() -> f64 {
    let product = gamma_quarter() * gamma_lanczos(0.75).unwrap_or(f64::NAN);
    let target = PI * SQRT_2;
    (product - target).abs() / target
}

/// Every constant from its closed form.
pub fn compute_constants() -> AsymptoticConstants {
    let sigma = sigma_star();
    let rho = sigma.sinh();
    let cosh = sigma.cosh();
    let c_star = sigma * cosh;
    let s = rho * rho;
    let c0 = c_star * (s - 1.0) * (3.0 * s - 2.0) / (12.0 * s);
    let xi1 = (s - 1.0) * (s - 4.0) * (s + 1.0) / (12.0 * s * c_star);
    let i_star = -(9.0 * sigma + 3.5 * (2.0 * sigma).sinh() - 10.0 / sigma) / 12.0;
    let gq = gamma_quarter();
    let d_inf = (SQRT_2 * gq * gq / PI.powf(1.5)).ln();
    AsymptoticConstants { sigma_star: sigma, rho_star: rho, c_star, s_val: s, c0, xi1, i_star, d_inf, gamma_quarter: gq }
}

/// Intermediate coefficients of the second-order expansion of `H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionRoute {
    pub xi1: f64,
    pub beta1: f64,
    pub alpha1: f64,
    pub c0: f64,
}

/// Rebuild `C0` from `xi1`, `beta1`, `alpha1` rather than the factored form.
pub fn c0_expansion_route(consts: &AsymptoticConstants) -> ExpansionRoute {
    let rho = consts.rho_star;
    let s = consts.s_val;
    let xi1 = consts.xi1;
    let beta1 = 2.0 * rho * xi1 + s * s / 3.0 + 2.0 * s;
    let alpha1 = xi1 / rho + s / 6.0 + 1.0 - 1.0 / (2.0 * s);
    let c0 = consts.c_star * (beta1 / (1.0 + s) - alpha1 - 0.5);
    ExpansionRoute { xi1, beta1, alpha1, c0 }
}

/// Which end of the parameter range an endpoint check probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EndpointSide {
    Half,
    Infinity,
}

/// Fewest usable grid points accepted by [`endpoint_checks`].
pub const MIN_FIT_POINTS: usize = 4;

/// One quantity tracked toward its endpoint limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitEstimate {
    pub quantity: &'static str,
    /// Closed-form limit.
    pub target: f64,
    /// Value at the grid point nearest the endpoint.
    pub raw: f64,
    pub raw_at: f64,
    /// Linear extrapolation from the two grid points nearest the endpoint.
    pub extrapolated: f64,
    /// Relative deviation of `raw` (absolute when the target is zero).
    pub raw_deviation: f64,
    pub extrapolated_deviation: f64,
    /// `(a, value)` for every usable grid point.
    pub samples: Vec<(f64, f64)>,
}

impl FitEstimate {
    fn build(quantity: &'static str, target: f64, samples: Vec<(f64, f64)>, abscissa: impl Fn(f64) -> f64) -> Self {
        let (a1, v1) = samples[0];
        let (a2, v2) = samples[1];
        let (x1, x2) = (abscissa(a1), abscissa(a2));
        let extrapolated = (x2 * v1 - x1 * v2) / (x2 - x1);
        let dev = |v: f64| if target == 0.0 { v.abs() } else { ((v - target) / target).abs() };
        Self {
            quantity,
            target,
            raw: v1,
            raw_at: a1,
            extrapolated,
            raw_deviation: dev(v1),
            extrapolated_deviation: dev(extrapolated),
            samples,
        }
    }

    /// Value recorded at grid point `a`, if present.
    pub fn value_at(&self, a: f64) -> Option<f64> {
        self.samples.iter().find(|(x, _)| (x - a).abs() <= 1e-12 * a.abs().max(1.0)).map(|p| p.1)
    }
}

/// Endpoint fits on one side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub side: EndpointSide,
    pub fits: Vec<FitEstimate>,
}

impl FitReport {
    pub fn get(&self, quantity: &str) -> Option<&FitEstimate> {
        self.fits.iter().find(|f| f.quantity == quantity)
    }
}

/// Fit the geometry against its endpoint limits.
///
/// `half`: grid within `(1/2 + 1e-4, 1/2 + 1e-1]`; quantities `H_slope`
/// (`(H - c*)/(a-1/2)`), `y`, `g_ratio` (`(K^2 r' - a tanh r)/(a-1/2)^{3/2}`)
/// and `s0_over_rho`, extrapolated linearly in `a - 1/2`.
///
/// `infinity`: grid within `[20, 500]`; quantities `r_residual`
/// (`r - 1.5 ln a - d_inf`) and `y_over_a`, extrapolated linearly in `1/a`.
pub fn endpoint_checks(side: EndpointSide, grid: &[f64], tol: &Tolerances) -> Result<FitReport> {
    let consts = compute_constants();
    let in_range = |a: f64| match side {
        EndpointSide::Half => a > 0.5 + 1e-4 && a <= 0.5 + 1e-1 + 1e-15,
        EndpointSide::Infinity => (20.0..=500.0).contains(&a),
    };
    let mut usable: Vec<f64> = grid.iter().copied().filter(|a| in_range(*a)).collect();
    usable.sort_by(f64::total_cmp);
    usable.dedup();
    if side == EndpointSide::Infinity {
        usable.reverse();
    }
    if usable.len() < MIN_FIT_POINTS {
        return Err(LabError::InvalidInput(format!(
            "endpoint fit needs at least {MIN_FIT_POINTS} grid points in range, got {}",
            usable.len()
        )));
    }
    let fits = match side {
        EndpointSide::Half => {
            let mut slope = Vec::new();
            let mut y = Vec::new();
            let mut g_ratio = Vec::new();
            let mut s0_ratio = Vec::new();
            for &a in &usable {
                let pa = ParamA::new(a)?;
                let geom = boundary_geometry::solve_s0(pa, tol).context("endpoint geometry")?;
                let derivs: GeometryDerivatives =
                    boundary_geometry::geometry_derivatives(pa, tol).context("endpoint r'(a)")?;
                let d = pa.offset();
                slope.push((a, (geom.h - consts.c_star) / d));
                y.push((a, geom.y));
                let g = pa.k_squared() * derivs.r_prime - a * geom.r.tanh();
                g_ratio.push((a, g / d.powf(1.5)));
                s0_ratio.push((a, geom.s0 / d.sqrt()));
            }
            let offset = |a: f64| a - 0.5;
            vec![
                FitEstimate::build("H_slope", consts.c0, slope, offset),
                FitEstimate::build("y", consts.y_half_limit(), y, offset),
                FitEstimate::build("g_ratio", consts.c0, g_ratio, offset),
                FitEstimate::build("s0_over_rho", consts.rho_star, s0_ratio, offset),
            ]
        }
        EndpointSide::Infinity => {
            let mut r_res = Vec::new();
            let mut y_ratio = Vec::new();
            for &a in &usable {
                let geom = boundary_geometry::solve_s0(ParamA::new(a)?, tol).context("endpoint geometry")?;
                r_res.push((a, geom.r - 1.5 * a.ln() - consts.d_inf));
                y_ratio.push((a, geom.y / a));
            }
            let inverse = |a: f64| 1.0 / a;
            vec![
                FitEstimate::build("r_residual", 0.0, r_res, inverse),
                FitEstimate::build("y_over_a", consts.y_slope_infinity(), y_ratio, inverse),
            ]
        }
    };
    Ok(FitReport { side, fits })
}

/// Empirical stand-in for the unquantified local-closure radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Delta0Evidence {
    /// Largest grid `a` such that `H' > margin` at it and every smaller grid point.
    pub largest_a: Option<f64>,
    /// `largest_a - 1/2`.
    pub delta0: Option<f64>,
    pub margin: f64,
    /// `(a, H'(a), finite-difference error estimate)`.
    pub samples: Vec<(f64, f64, f64)>,
    pub status: &'static str,
}

/// Scan an ascending grid for the run of `H' > max(margin, 10 * fd_error)`
/// starting at its smallest point.
pub fn empirical_delta0(grid: &[f64], margin: f64, tol: &Tolerances) -> Result<Delta0Evidence> {
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LabError::InvalidInput("delta0 grid must be non-empty and ascending".into()));
    }
    let mut samples = Vec::with_capacity(grid.len());
    let mut largest_a = None;
    let mut run_intact = true;
    for &a in grid {
        let d = boundary_geometry::geometry_derivatives(ParamA::new(a)?, tol).context("delta0 H'(a)")?;
        samples.push((a, d.h_prime, d.error_estimate));
        if run_intact && d.h_prime > margin.max(10.0 * d.error_estimate) {
            largest_a = Some(a);
        } else {
            run_intact = false;
        }
    }
    Ok(Delta0Evidence { largest_a, delta0: largest_a.map(|a| a - 0.5), margin, samples, status: "evidence" })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_star_solves_its_equation() {
        let c = compute_constants();
        assert!(sigma_equation(c.sigma_star).abs() < 1e-14);
        assert!(c.s_val > 1.0 && c.s_val < 4.0);
        assert!(c.xi1 < 0.0);
    }

    #[test]
    fn c_star_two_expressions() {
        let c = compute_constants();
        assert!((c.c_star - (c.rho_star + 1.0 / c.rho_star)).abs() < 1e-14);
    }

    #[test]
    fn reflection_identity() {
        assert!(reflection_residual() < 1e-12);
    }

    #[test]
    fn lanczos_reproduces_factorials() {
        let mut fact = 1.0;
        for n in 1..15 {
            let g = gamma_lanczos(n as f64).unwrap();
            assert!((g - fact).abs() < 1e-13 * fact, "n = {n}");
            fact *= n as f64;
        }
        assert!(gamma_lanczos(0.2).is_err());
    }

    #[test]
    fn expansion_route_matches_closed_form() {
        let c = compute_constants();
        assert!((c0_expansion_route(&c).c0 - c.c0).abs() < 1e-12);
    }

    #[test]
    fn short_grid_is_rejected() {
        let err = endpoint_checks(EndpointSide::Infinity, &[30.0, 40.0], &Tolerances::default());
        assert!(matches!(err, Err(LabError::InvalidInput(_))));
    }
}
