//! Conditions (E), (F'), (G), the Hardy-type sufficient conditions for (E),
//! and the per-mode index/nullity table.

use std::cell::RefCell;

use serde::Serialize;

use crate::boundary_geometry::{self, CatenoidGeometry, GeometryDerivatives};
use crate::error::{LabError, Result, ResultExt};
use crate::jacobi_fields::{self, GridFunction};
use crate::numerics::{quadrature, roots, Tolerances};
use crate::profile::{b_squared, ParamA};
use crate::robin_spectrum::{self, ModeSector, Parity, SpectralReport};

/// Relative threshold on `|B(s0)^2 - 2K^2| / B(s0)^2` below which the sign
/// comparisons are skipped.
pub const G_TOLERANCE: f64 = 1e-6;

/// Default largest mode computed explicitly.
pub const DEFAULT_K_MAX: u32 = 3;

/// Eigenvalues computed per sector.
pub const DEFAULT_N_MAX: usize = 2;

/// Hardy-type integrals with `V = 3B^2 - 2K^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardyReport {
    pub s_v: f64,
    /// `int_0^sV |V| / B`.
    pub i_v: f64,
    /// `int_0^sV (int_0^t |V|/B) / B(t)^3 dt`.
    pub k_star: f64,
    /// `int_sV^s0 V / B`.
    pub i_v_plus: f64,
    /// `int_sV^s0 (int_t^s0 V/B) / B(t)^3 dt`.
    pub k_star_plus: f64,
    /// `2 K* < 1`.
    pub cond1: bool,
    /// `2 I_V (1 + K*+) / I_V+ < 1`.
    pub cond2: bool,
    /// `2 I_V (1 + K*+) / I_V+`.
    pub cond2_ratio: f64,
}

/// `3B^2 - 2K^2 = 2(a - 1/2)(1 - a) + 6a sinh^2 s`.
fn hardy_potential(a: ParamA, s: f64) -> f64 {
    let sh = s.sinh();
    2.0 * a.offset() * (1.0 - a.value()) + 6.0 * a.value() * sh * sh
}

/// Evaluate the four Hardy integrals by nested adaptive quadrature.
pub fn hardy_report(geom: &CatenoidGeometry, tol: &Tolerances) -> Result<HardyReport> {
    let a = geom.param();
    let s_v = geom.s_v.min(geom.s0);
    let s0 = geom.s0;
    let q = tol.quad;
    let weight = |s: f64| hardy_potential(a, s) / b_squared(a, s).sqrt();
    let inv_b3 = |t: f64| b_squared(a, t).powf(-1.5);

    let i_v = quadrature::integrate(|s| weight(s).abs(), 0.0, s_v, q).context("I_V")?.value;
    let i_v_plus = quadrature::integrate(weight, s_v, s0, q).context("I_V+")?.value;

    let inner_err = RefCell::new(None);
    let k_star = quadrature::integrate(
        |t| match quadrature::integrate(|s| weight(s).abs(), 0.0, t, q) {
            Ok(r) => r.value * inv_b3(t),
            Err(e) => {
                inner_err.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        0.0,
        s_v,
        q,
    )
    .context("K*")?
    .value;
    let k_star_plus = quadrature::integrate(
        |t| match quadrature::integrate(weight, t, s0, q) {
            Ok(r) => r.value * inv_b3(t),
            Err(e) => {
                inner_err.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        s_v,
        s0,
        q,
    )
    .context("K*+")?
    .value;
    if let Some(e) = inner_err.into_inner() {
        return Err(e.context("Hardy inner integral"));
    }

    let cond2_ratio = if i_v == 0.0 {
        0.0
    } else if i_v_plus > 0.0 {
        2.0 * i_v * (1.0 + k_star_plus) / i_v_plus
    } else {
        f64::INFINITY
    };
    Ok(HardyReport {
        s_v,
        i_v,
        k_star,
        i_v_plus,
        k_star_plus,
        cond1: 2.0 * k_star < 1.0,
        cond2: cond2_ratio < 1.0 && i_v_plus > 0.0,
        cond2_ratio,
    })
}

/// Outcome of scanning for the largest `a` where both Hardy conditions hold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AStarScan {
    /// Numerical estimate of the threshold (evidence, not proof).
    pub a_star: f64,
    /// Last grid point (or refined point) where both conditions hold.
    pub bracket_lo: f64,
    /// First point where one fails; equals `a_star` when unsaturated.
    pub bracket_hi: f64,
    /// Every grid point satisfied both conditions.
    pub unsaturated: bool,
    /// `(a, cond1, cond2_ratio)` on the grid.
    pub samples: Vec<(f64, bool, f64)>,
}

fn hardy_holds(a: f64, tol: &Tolerances) -> Result<(bool, HardyReport)> {
    let geom = boundary_geometry::solve_s0(ParamA::new(a)?, tol)?;
    let h = hardy_report(&geom, tol)?;
    Ok((h.cond1 && h.cond2, h))
}

/// `n` points `4^(i/n)`, `i = 1..=n`, log-spaced on `(1, 4]`.
pub fn default_a_star_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| 4f64.powf(i as f64 / n as f64)).collect()
}

/// Bisection width of the A* refinement.
pub const A_STAR_RESOLUTION: f64 = 1e-5;

/// Largest `a` on an ascending grid in `(1, 10]` where both Hardy conditions
/// hold, refined by bisection to [`A_STAR_RESOLUTION`].
pub fn scan_a_star(grid: &[f64], tol: &Tolerances) -> Result<AStarScan> {
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) || grid[0] <= 1.0 || grid[grid.len() - 1] > 10.0 {
        return Err(LabError::InvalidInput("A* grid must be ascending within (1, 10]".into()));
    }
    // At a = 1 both conditions hold with I_V = K* = 0.
    refine_threshold(grid, 1.0, |a| {
        let (ok, h) = hardy_holds(a, tol)?;
        Ok((ok, h.cond1, h.cond2_ratio))
    })
}

/// Threshold search shared by [`scan_a_star`]: `probe(a)` returns
/// `(holds, cond1, cond2_ratio)`, and `anchor` is a point known to hold
/// below the grid.
pub fn refine_threshold<F>(grid: &[f64], anchor: f64, mut probe: F) -> Result<AStarScan>
where
    F: FnMut(f64) -> Result<(bool, bool, f64)>,
{
    let mut samples = Vec::with_capacity(grid.len());
    let mut first_false = None;
    for &a in grid {
        let (ok, cond1, ratio) = probe(a)?;
        samples.push((a, cond1, ratio));
        if !ok {
            first_false = Some(a);
            break;
        }
    }
    let Some(hi) = first_false else {
        let top = grid[grid.len() - 1];
        return Ok(AStarScan { a_star: top, bracket_lo: top, bracket_hi: top, unsaturated: true, samples });
    };
    let lo = if samples.len() >= 2 { samples[samples.len() - 2].0 } else { anchor };
    let mut err = None;
    let root = roots::bisect(
        |a| match probe(a) {
            Ok((true, _, _)) => -1.0,
            Ok((false, _, _)) => 1.0,
            Err(e) => {
                err.get_or_insert(e);
                1.0
            }
        },
        lo,
        hi,
        A_STAR_RESOLUTION,
    )?;
    if let Some(e) = err {
        return Err(e.context("A* bisection"));
    }
    Ok(AStarScan {
        a_star: root.x,
        bracket_lo: root.x - 0.5 * root.bracket_width,
        bracket_hi: root.x + 0.5 * root.bracket_width,
        unsaturated: false,
        samples,
    })
}

/// Spectra of every sector `k <= k_max`, computed once and shared.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorSpectra {
    pub reports: Vec<SpectralReport>,
}

impl SectorSpectra {
    pub fn compute(geom: &CatenoidGeometry, k_max: u32, n_max: usize, tol: &Tolerances) -> Result<Self> {
        let reports = robin_spectrum::all_sectors(geom, k_max, n_max.max(1), tol).context("sector spectra")?;
        Ok(Self { reports })
    }

    pub fn get(&self, sector: ModeSector) -> Option<&SpectralReport> {
        self.reports.iter().find(|r| r.sector == sector)
    }

    fn require(&self, sector: ModeSector) -> Result<&SpectralReport> {
        self.get(sector)
            .ok_or_else(|| LabError::InvalidInput(format!("sector {sector} was not computed")))
    }

    pub fn k_max(&self) -> u32 {
        self.reports.iter().map(|r| r.sector.k).max().unwrap_or(0)
    }
}

/// Named conditions at one parameter value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub a: f64,
    pub h: f64,
    pub h_prime: f64,
    pub y: f64,
    /// `sinh r - 2K`.
    pub g_margin: f64,
    /// `B(s0)^2 - 2K^2`.
    pub g_margin_alt: f64,
    /// `mu_0^even(2)`; (E) is `E_value > 0`.
    pub e_value: f64,
    /// `mu_1^even(0) = mu_2(0)`; (F') is `Fprime_value > 0`.
    pub fprime_value: f64,
    /// `min_n |mu_n(0)|` over both parities, the non-degeneracy margin.
    pub mode0_min_abs_eigenvalue: f64,
    /// `phi_a(s0)` from the ODE.
    pub phi_s0: f64,
    /// `phi_a(s0)` from the closed boundary formula with finite-difference `r'`.
    pub phi_s0_closed: Option<f64>,
    pub phi_interior_zeros: usize,
    /// `phi_a > 0` on `[0, s0]`.
    pub phi_positive: bool,
    /// `sign(phi_a(s0)) = sign(H')` whenever (G) holds with margin.
    pub consistent: bool,
    pub hardy: HardyReport,
}

impl ConditionReport {
    pub fn g_holds(&self) -> bool {
        self.g_margin > 0.0
    }

    pub fn e_holds(&self) -> bool {
        self.e_value > 0.0
    }

    pub fn fprime_holds(&self) -> bool {
        self.fprime_value > 0.0
    }
}

/// Nodes used for the parametric field in condition reports.
const PHI_NODES: usize = 2049;

/// Evaluate every condition from precomputed geometry, derivatives and spectra.
pub fn evaluate_conditions_with(
    geom: &CatenoidGeometry,
    derivs: &GeometryDerivatives,
    spectra: &SectorSpectra,
    tol: &Tolerances,
) -> Result<ConditionReport> {
    let phi: GridFunction = jacobi_fields::integrate_phi_a(geom, PHI_NODES, tol).context("(F') parametric field")?;
    let zeros = phi.interior_zeros().len();
    let phi_positive = phi.values.iter().all(|v| *v > 0.0);
    let phi_s0 = phi.last_value();
    let phi_s0_closed = jacobi_fields::phi_s0_closed(geom, derivs.r_prime).ok();
    let g_alt = geom.g_margin_alt();
    let g_clear = g_alt > G_TOLERANCE * geom.b2_s0();
    let consistent = !g_clear || (phi_s0.signum() == derivs.h_prime.signum());

    let e_value = spectra.require(ModeSector::even(2)).context("(E)")?.ground();
    let even0 = spectra.require(ModeSector::even(0)).context("(F')")?;
    let odd0 = spectra.require(ModeSector::odd(0)).context("(F)")?;
    let fprime_value = *even0
        .eigenvalues
        .get(1)
        .ok_or_else(|| LabError::InvalidInput("(F') needs two even mode-0 eigenvalues".into()))?;
    let mode0_min_abs_eigenvalue = even0.kernel_margin.min(odd0.kernel_margin);
    let hardy = hardy_report(geom, tol).context("Hardy integrals")?;
    Ok(ConditionReport {
        a: geom.a,
        h: geom.h,
        h_prime: derivs.h_prime,
        y: geom.y,
        g_margin: geom.g_margin(),
        g_margin_alt: g_alt,
        e_value,
        fprime_value,
        mode0_min_abs_eigenvalue,
        phi_s0,
        phi_s0_closed,
        phi_interior_zeros: zeros,
        phi_positive,
        consistent,
        hardy,
    })
}

/// Evaluate every condition at `a`.
pub fn evaluate_conditions(a: ParamA, tol: &Tolerances) -> Result<ConditionReport> {
    let geom = boundary_geometry::solve_s0(a, tol).context("geometry")?;
    let derivs = boundary_geometry::geometry_derivatives(a, tol).context("H'(a)")?;
    let spectra = SectorSpectra::compute(&geom, 2, DEFAULT_N_MAX, tol)?;
    evaluate_conditions_with(&geom, &derivs, &spectra, tol)
}

/// Contribution of one Fourier mode to the index and nullity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeContribution {
    pub k: u32,
    /// 1 for `k = 0`, 2 otherwise (`+-k`).
    pub multiplicity: usize,
    pub negative_even: usize,
    pub negative_odd: usize,
    pub ind_contribution: usize,
    /// Kernel known analytically (the rotational field in mode 1).
    pub certified_kernel: usize,
    /// Sectors whose ground state falls in the near-kernel window without
    /// an analytic reason.
    pub kernel_flags: usize,
    pub nul_contribution: usize,
    /// Shooting count and eigenvalue count agree in both parities.
    pub counts_agree: bool,
}

/// Index and nullity summed over modes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexTable {
    pub a: f64,
    pub per_mode: Vec<ModeContribution>,
    pub ind_total: usize,
    pub nul_total: usize,
    /// Upper end of the nullity range when unexplained near-kernels occur.
    pub nul_upper: usize,
    pub truncation_k: u32,
    /// `min_parity mu_0(k_max) + ((k_max+1)^2 - k_max^2) / B(s0)^2`; positive
    /// certifies every mode above `truncation_k`.
    pub truncation_margin: f64,
    pub truncation_certified: bool,
    pub counts_agree: bool,
    /// Always "evidence": the analytic closure covers only an unquantified
    /// neighbourhood of `a = 1/2`.
    pub status: &'static str,
}

/// Index table from precomputed spectra.
pub fn index_nullity_from(geom: &CatenoidGeometry, spectra: &SectorSpectra) -> Result<IndexTable> {
    let k_max = spectra.k_max();
    let mut per_mode = Vec::new();
    for k in 0..=k_max {
        let even = spectra.require(ModeSector::even(k))?;
        let odd = spectra.require(ModeSector::odd(k))?;
        let multiplicity = if k == 0 { 1 } else { 2 };
        let rotational = k == 1;
        let certified_kernel = usize::from(rotational);
        let kernel_flags = usize::from(even.near_kernel) + usize::from(odd.near_kernel && !rotational);
        let negative_even = even.shooting.negative_count;
        let negative_odd = odd.shooting.negative_count;
        let counts_agree = negative_even == even.negative_count && negative_odd == odd.negative_count;
        per_mode.push(ModeContribution {
            k,
            multiplicity,
            negative_even,
            negative_odd,
            ind_contribution: multiplicity * (negative_even + negative_odd),
            certified_kernel,
            kernel_flags,
            nul_contribution: multiplicity * certified_kernel,
            counts_agree,
        });
    }
    let top_even = spectra.require(ModeSector::even(k_max))?.ground();
    let top_odd = spectra.require(ModeSector::odd(k_max))?.ground();
    let kf = f64::from(k_max);
    let truncation_margin = top_even.min(top_odd) + ((kf + 1.0).powi(2) - kf * kf) / geom.b2_s0();
    let ind_total = per_mode.iter().map(|m| m.ind_contribution).sum();
    let nul_total = per_mode.iter().map(|m| m.nul_contribution).sum();
    let nul_upper = nul_total + per_mode.iter().map(|m| m.multiplicity * m.kernel_flags).sum::<usize>();
    Ok(IndexTable {
        a: geom.a,
        counts_agree: per_mode.iter().all(|m| m.counts_agree),
        per_mode,
        ind_total,
        nul_total,
        nul_upper,
        truncation_k: k_max,
        truncation_margin,
        truncation_certified: truncation_margin > 0.0,
        status: "evidence",
    })
}

/// Index and nullity at `a`, computing modes `0..=max(k_max_hint, 2)`.
pub fn index_nullity(a: ParamA, k_max_hint: u32, tol: &Tolerances) -> Result<IndexTable> {
    let geom = boundary_geometry::solve_s0(a, tol)?;
    let spectra = SectorSpectra::compute(&geom, k_max_hint.max(2), DEFAULT_N_MAX, tol)?;
    index_nullity_from(&geom, &spectra)
}

/// Parity sectors used by the index assembly, in display order.
pub fn sectors_up_to(k_max: u32) -> Vec<ModeSector> {
    (0..=k_max)
        .flat_map(|k| [ModeSector::new(k, Parity::Even), ModeSector::new(k, Parity::Odd)])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hardy_degenerate_at_unit_parameter() {
        let tol = Tolerances::default();
        let g = boundary_geometry::solve_s0(ParamA::new(1.0).unwrap(), &tol).unwrap();
        let h = hardy_report(&g, &tol).unwrap();
        assert_eq!(h.i_v, 0.0);
        assert_eq!(h.k_star, 0.0);
        assert!(h.cond1 && h.cond2);
        assert!(h.i_v_plus > 0.0);
    }

    #[test]
    fn hardy_potential_matches_direct_form() {
        let a = ParamA::new(1.7).unwrap();
        for s in [0.0, 0.3, 1.1] {
            let direct = 3.0 * b_squared(a, s) - 2.0 * a.k_squared();
            assert!((hardy_potential(a, s) - direct).abs() < 1e-13 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn index_at_unit_parameter() {
        let t = index_nullity(ParamA::new(1.0).unwrap(), 3, &Tolerances::default()).unwrap();
        assert_eq!((t.ind_total, t.nul_total, t.nul_upper), (4, 2, 2));
        assert!(t.truncation_certified);
        let m1 = t.per_mode.iter().find(|m| m.k == 1).unwrap();
        assert_eq!((m1.ind_contribution, m1.nul_contribution), (2, 2));
    }

    #[test]
    fn refinement_brackets_a_synthetic_boundary() {
        let edge = 2.345_678;
        let scan = refine_threshold(&default_a_star_grid(64), 1.0, |a| Ok((a <= edge, true, a / edge))).unwrap();
        assert!(!scan.unsaturated);
        assert!((scan.a_star - edge).abs() < 1e-4);
        assert!(scan.bracket_lo <= edge && edge <= scan.bracket_hi);
        assert!(scan.bracket_hi - scan.bracket_lo <= A_STAR_RESOLUTION);
    }

    #[test]
    fn default_grid_is_in_range() {
        let g = default_a_star_grid(64);
        assert_eq!(g.len(), 64);
        assert!(g[0] > 1.0 && (g[63] - 4.0).abs() < 1e-12);
    }
}
