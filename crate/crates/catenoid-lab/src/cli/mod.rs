//! Command-line front end. The binary only forwards `std::env::args` to
//! [`main_with_args`].

pub mod output;
pub mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::asymptotics::{self, EndpointSide};
use crate::boundary_geometry::{self, CatenoidGeometry, GeometryDerivatives};
use crate::conditions::{self, ConditionReport, IndexTable, SectorSpectra};
use crate::error::LabError;
use crate::numerics::{OdeTolerance, QuadTolerance, Tolerances};
use crate::profile::ParamA;
use crate::robin_spectrum::{self, ModeSector, Parity};
pub use output::{num, Format, Report};

/// Environment variable overriding the sweep worker count.
pub const WORKERS_ENV: &str = "CATENOID_LAB_WORKERS";

/// Column contract of `sweep` and `conditions` rows.
pub const SWEEP_HEADERS: [&str; 24] = [
    "a",
    "H",
    "H_prime",
    "y",
    "G_margin",
    "E_value",
    "Fprime_value",
    "ind",
    "nul",
    "nul_upper",
    "G_margin_alt",
    "phi_s0",
    "phi_s0_closed",
    "phi_interior_zeros",
    "phi_positive",
    "consistent",
    "mode0_min_abs_mu",
    "hardy_I_V",
    "hardy_K_star",
    "hardy_cond1",
    "hardy_cond2",
    "hardy_cond2_ratio",
    "truncation_margin",
    "status",
];

#[derive(Debug, Parser)]
#[command(name = "catenoid-lab", version, about = "Jacobi spectrum of critical catenoids in hyperbolic space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "table", global = true)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    /// Relative tolerance of adaptive quadrature.
    #[arg(long, global = true, default_value_t = QuadTolerance::default().rel)]
    pub quad_rel: f64,
    /// Absolute tolerance of adaptive quadrature.
    #[arg(long, global = true, default_value_t = QuadTolerance::default().abs)]
    pub quad_abs: f64,
    /// Relative tolerance of the ODE integrator.
    #[arg(long, global = true, default_value_t = OdeTolerance::default().rel)]
    pub ode_rel: f64,
    /// Absolute tolerance of the ODE integrator.
    #[arg(long, global = true, default_value_t = OdeTolerance::default().abs)]
    pub ode_abs: f64,
    /// Absolute tolerance on roots in `s`.
    #[arg(long, global = true, default_value_t = Tolerances::default().root)]
    pub root_tol: f64,
}

impl ToleranceArgs {
    pub fn to_tolerances(&self) -> Result<Tolerances, CliError> {
        let values = [self.quad_rel, self.quad_abs, self.ode_rel, self.ode_abs, self.root_tol];
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(CliError::Config("tolerances must be positive and finite".into()));
        }
        let mut tol = Tolerances::default();
        tol.quad.rel = self.quad_rel;
        tol.quad.abs = self.quad_abs;
        tol.ode.rel = self.ode_rel;
        tol.ode.abs = self.ode_abs;
        tol.root = self.root_tol;
        Ok(tol)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Boundary geometry and its a-derivatives at one parameter.
    Geometry {
        #[arg(long)]
        a: f64,
    },
    /// Robin eigenvalues of one Fourier mode.
    Spectrum {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, value_enum, default_value = "both")]
        parity: ParityArg,
        /// Highest eigenvalue index.
        #[arg(long, default_value_t = 2)]
        n_max: usize,
    },
    /// Named conditions and the index table at one parameter.
    Conditions {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = conditions::DEFAULT_K_MAX)]
        k_max: u32,
        /// Also scan for the Hardy threshold on the default grid.
        #[arg(long)]
        a_star: bool,
    },
    /// Degenerate-limit and large-a constants.
    Asymptotics {
        /// Append endpoint fits on the given side.
        #[arg(long, value_enum)]
        fits: Option<EndpointSide>,
    },
    /// One conditions row per grid point.
    Sweep {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = conditions::DEFAULT_K_MAX)]
        k_max: u32,
        /// Worker threads; the environment variable CATENOID_LAB_WORKERS wins.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Full invariant suite; exits 1 if any invariant fails.
    Verify {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
    Both,
}

impl ParityArg {
    fn parities(self) -> &'static [Parity] {
        match self {
            ParityArg::Even => &[Parity::Even],
            ParityArg::Odd => &[Parity::Odd],
            ParityArg::Both => &[Parity::Even, Parity::Odd],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    /// Uniform in `log(a - 1/2)`.
    LogShifted,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Smallest parameter, above 1/2.
    #[arg(long)]
    pub min: f64,
    /// Largest parameter, inclusive.
    #[arg(long)]
    pub max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 16)]
    pub count: usize,
    #[arg(long, value_enum, default_value = "linear")]
    pub spacing: Spacing,
}

impl GridArgs {
    /// Grid points, ascending.
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.min <= 0.5 {
            return Err(CliError::Config(format!("grid --min must exceed 1/2, got {}", self.min)));
        }
        if self.max < self.min {
            return Err(CliError::Config(format!("grid --max {} is below --min {}", self.max, self.min)));
        }
        if self.count == 0 {
            return Err(CliError::Config("grid --count must be at least 1".into()));
        }
        if self.count == 1 {
            return Ok(vec![self.min]);
        }
        let last = (self.count - 1) as f64;
        let points = (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + t * (self.max - self.min),
                    Spacing::LogShifted => {
                        let (lo, hi) = ((self.min - 0.5).ln(), (self.max - 0.5).ln());
                        0.5 + (lo + t * (hi - lo)).exp()
                    }
                }
            })
            .collect();
        Ok(points)
    }
}

/// Failure classes mapped to exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure in {computation}: {source}")]
    Numerical { computation: String, source: LabError },
    #[error("{failed} invariant(s) failed")]
    VerifyFailed { failed: usize },
    #[error("output error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed { .. } => 1,
            CliError::Config(_) => 2,
            CliError::Numerical { .. } | CliError::Io(_) => 3,
        }
    }

    pub(crate) fn io(err: io::Error) -> Self {
        CliError::Io(err.to_string())
    }

    fn numerical(computation: impl Into<String>) -> impl FnOnce(LabError) -> Self {
        let computation = computation.into();
        move |source| CliError::Numerical { computation, source }
    }
}

fn param(a: f64) -> Result<ParamA, CliError> {
    ParamA::new(a).map_err(|e| CliError::Config(format!("{e}; pass --a with a value above 0.5")))
}

fn geometry_row(geom: &CatenoidGeometry, derivs: &GeometryDerivatives) -> Map<String, Value> {
    let mut row = Map::new();
    let coth_alt = geom.a * (2.0 * geom.s0).sinh() / geom.b2_s0();
    let fields = [
        ("a", geom.a),
        ("s0", geom.s0),
        ("phi_s0", geom.phi_s0),
        ("r", geom.r),
        ("B_s0", geom.b_s0),
        ("coth_r", geom.coth_r),
        ("coth_r_alt", coth_alt),
        ("H", geom.h),
        ("y", geom.y),
        ("G_margin", geom.g_margin()),
        ("G_margin_alt", geom.g_margin_alt()),
        ("s_G", geom.s_g),
        ("s_V", geom.s_v),
        ("fbc_residual", geom.fbc_residual),
        ("r_prime", derivs.r_prime),
        ("H_prime", derivs.h_prime),
        ("y_prime", derivs.y_prime),
        ("fd_step", derivs.fd_step),
        ("fd_error", derivs.error_estimate),
        ("identity_residual", derivs.identity_residual),
    ];
    for (key, value) in fields {
        row.insert(key.into(), num(value));
    }
    row.insert("s_V_degenerate".into(), geom.s_v_degenerate.into());
    row
}

/// One sweep row; columns follow [`SWEEP_HEADERS`].
pub fn sweep_row(report: &ConditionReport, table: &IndexTable) -> Map<String, Value> {
    let mut row = Map::new();
    let values: [Value; 24] = [
        num(report.a),
        num(report.h),
        num(report.h_prime),
        num(report.y),
        num(report.g_margin),
        num(report.e_value),
        num(report.fprime_value),
        table.ind_total.into(),
        table.nul_total.into(),
        table.nul_upper.into(),
        num(report.g_margin_alt),
        num(report.phi_s0),
        report.phi_s0_closed.map_or(Value::Null, num),
        report.phi_interior_zeros.into(),
        report.phi_positive.into(),
        report.consistent.into(),
        num(report.mode0_min_abs_eigenvalue),
        num(report.hardy.i_v),
        num(report.hardy.k_star),
        report.hardy.cond1.into(),
        report.hardy.cond2.into(),
        num(report.hardy.cond2_ratio),
        num(table.truncation_margin),
        table.status.into(),
    ];
    for (key, value) in SWEEP_HEADERS.iter().zip(values) {
        row.insert((*key).into(), value);
    }
    row
}

/// Conditions and index table at one parameter.
pub fn conditions_point(a: f64, k_max: u32, tol: &Tolerances) -> Result<(ConditionReport, IndexTable), CliError> {
    let pa = param(a)?;
    let at = |what: &str| format!("{what} at a = {a}");
    let geom = boundary_geometry::solve_s0(pa, tol).map_err(CliError::numerical(at("free-boundary solve")))?;
    let derivs =
        boundary_geometry::geometry_derivatives(pa, tol).map_err(CliError::numerical(at("H'(a) differences")))?;
    let spectra = SectorSpectra::compute(&geom, k_max.max(2), conditions::DEFAULT_N_MAX, tol)
        .map_err(CliError::numerical(at("Robin spectra")))?;
    let report = conditions::evaluate_conditions_with(&geom, &derivs, &spectra, tol)
        .map_err(CliError::numerical(at("condition evaluation")))?;
    let table =
        conditions::index_nullity_from(&geom, &spectra).map_err(CliError::numerical(at("index assembly")))?;
    Ok((report, table))
}

fn worker_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    match std::env::var(WORKERS_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Config(format!("{WORKERS_ENV} must be a positive integer, got {raw:?}"))),
        Err(_) => match flag {
            Some(0) => Err(CliError::Config("--workers must be positive".into())),
            other => Ok(other),
        },
    }
}

/// Sweep over `points`, computed in parallel and returned in grid order.
pub fn sweep(points: &[f64], k_max: u32, workers: Option<usize>, tol: &Tolerances) -> Result<Report, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    let rows: Vec<Result<Map<String, Value>, CliError>> = pool.install(|| {
        points
            .par_iter()
            .map(|&a| conditions_point(a, k_max, tol).map(|(r, t)| sweep_row(&r, &t)))
            .collect()
    });
    let mut report = Report::new("sweep");
    for row in rows {
        report.push(row?);
    }
    Ok(report)
}

fn asymptotics_report(fits: Option<EndpointSide>, tol: &Tolerances) -> Result<Report, CliError> {
    let c = asymptotics::compute_constants();
    let expansion = asymptotics::c0_expansion_route(&c);
    let entries: [(&str, f64, &str); 12] = [
        ("sigma_star", c.sigma_star, "positive root of sigma = coth sigma"),
        ("rho_star", c.rho_star, "sinh sigma*"),
        ("c_star", c.c_star, "sigma* cosh sigma* = rho* + 1/rho*"),
        ("s_val", c.s_val, "sinh^2 sigma*"),
        ("C0", c.c0, "c* (s-1)(3s-2) / (12 s), s = sinh^2 sigma*"),
        ("C0_expansion", expansion.c0, "c* (beta1 / cosh^2 sigma* - alpha1 - 1/2)"),
        ("xi1", c.xi1, "(s-1)(s-4)(s+1) / (12 s sigma* cosh sigma*)"),
        ("I_star", c.i_star, "-(9 sigma* + (7/2) sinh 2sigma* - 10/sigma*) / 12"),
        ("gamma_quarter", c.gamma_quarter, "4 Gamma(5/4), Lanczos g = 7"),
        ("d_inf", c.d_inf, "log(sqrt2 Gamma(1/4)^2 / pi^(3/2))"),
        ("y_half_limit", c.y_half_limit(), "cosh^2 sigma*"),
        ("y_slope_infinity", c.y_slope_infinity(), "e^(2 d_inf) / 4"),
    ];
    let mut report = Report::new("asymptotics");
    for (name, value, formula) in entries {
        let mut row = Map::new();
        row.insert("name".into(), name.into());
        row.insert("value".into(), num(value));
        row.insert("formula".into(), formula.into());
        report.push(row);
    }
    if let Some(side) = fits {
        let grid: &[f64] = match side {
            EndpointSide::Half => &[0.501, 0.51, 0.55, 0.6],
            EndpointSide::Infinity => &[200.0, 100.0, 50.0, 20.0],
        };
        let fit = asymptotics::endpoint_checks(side, grid, tol).map_err(CliError::numerical("endpoint fits"))?;
        for f in fit.fits {
            let mut row = Map::new();
            row.insert("name".into(), format!("fit:{}", f.quantity).into());
            row.insert("value".into(), num(f.extrapolated));
            row.insert(
                "formula".into(),
                format!("raw {:e} at a = {}, target {:e}, deviation {:.2e}", f.raw, f.raw_at, f.target, f.extrapolated_deviation)
                    .into(),
            );
            report.push(row);
        }
    }
    Ok(report)
}

/// Execute a parsed command and produce its report.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let tol = cli.tolerances.to_tolerances()?;
    match &cli.command {
        Command::Geometry { a } => {
            let pa = param(*a)?;
            let geom = boundary_geometry::solve_s0(pa, &tol).map_err(CliError::numerical("free-boundary solve"))?;
            let derivs = boundary_geometry::geometry_derivatives(pa, &tol)
                .map_err(CliError::numerical("H'(a) differences"))?;
            let mut report = Report::new("geometry");
            report.push(geometry_row(&geom, &derivs));
            Ok(report)
        }
        Command::Spectrum { a, k, parity, n_max } => {
            if *n_max > robin_spectrum::MAX_INDEX {
                return Err(CliError::Config(format!("--n-max must be at most {}", robin_spectrum::MAX_INDEX)));
            }
            let geom = boundary_geometry::solve_s0(param(*a)?, &tol).map_err(CliError::numerical("free-boundary solve"))?;
            let mut report = Report::new("spectrum");
            for &p in parity.parities() {
                let sector = ModeSector::new(*k, p);
                let spec = robin_spectrum::eigenvalues(&geom, sector, *n_max, &tol)
                    .map_err(CliError::numerical(format!("eigenvalues of sector {sector}")))?;
                for (n, (mu, nodes)) in spec.eigenvalues.iter().zip(&spec.node_counts).enumerate() {
                    let mut row = Map::new();
                    row.insert("a".into(), num(*a));
                    row.insert("k".into(), (*k).into());
                    row.insert("parity".into(), p.to_string().into());
                    row.insert("n".into(), n.into());
                    row.insert("mu".into(), num(*mu));
                    row.insert("nodes".into(), (*nodes).into());
                    row.insert("negative_count".into(), spec.negative_count.into());
                    row.insert("shooting_count".into(), spec.shooting.negative_count.into());
                    row.insert("near_kernel".into(), spec.near_kernel.into());
                    report.push(row);
                }
            }
            Ok(report)
        }
        Command::Conditions { a, k_max, a_star } => {
            let (cond, table) = conditions_point(*a, *k_max, &tol)?;
            let mut row = sweep_row(&cond, &table);
            row.insert("truncation_k".into(), table.truncation_k.into());
            row.insert("counts_agree".into(), table.counts_agree.into());
            for m in &table.per_mode {
                row.insert(format!("ind_k{}", m.k), m.ind_contribution.into());
                row.insert(format!("nul_k{}", m.k), m.nul_contribution.into());
            }
            if *a_star {
                let scan = conditions::scan_a_star(&conditions::default_a_star_grid(64), &tol)
                    .map_err(CliError::numerical("Hardy threshold scan"))?;
                row.insert("A_star".into(), num(scan.a_star));
                row.insert("A_star_unsaturated".into(), scan.unsaturated.into());
            }
            let mut report = Report::new("conditions");
            report.push(row);
            Ok(report)
        }
        Command::Asymptotics { fits } => asymptotics_report(*fits, &tol),
        Command::Sweep { grid, k_max, workers } => {
            let points = grid.points()?;
            sweep(&points, *k_max, worker_count(*workers)?, &tol)
        }
        Command::Verify { a } => {
            let checks =
                verify::verify_suite(param(*a)?, &tol).map_err(CliError::numerical(format!("verify suite at a = {a}")))?;
            let mut report = Report::new("verify");
            for c in &checks {
                let mut row = Map::new();
                row.insert("check".into(), c.name.into());
                row.insert("value".into(), num(c.value));
                row.insert("relation".into(), c.relation.into());
                row.insert("threshold".into(), num(c.threshold));
                row.insert("status".into(), (if c.passed { "PASS" } else { "FAIL" }).into());
                report.push(row);
            }
            Ok(report)
        }
    }
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", p.display()))),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

/// Parse, run, render; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = run(&cli).and_then(|report| {
        let mut out = open_output(cli.output.as_ref())?;
        report.render(cli.format, &mut out)?;
        out.flush().map_err(CliError::io)?;
        let failed = if report.command == "verify" {
            report.rows.iter().filter(|r| r.get("status").and_then(Value::as_str) == Some("FAIL")).count()
        } else {
            0
        };
        if failed > 0 {
            Err(CliError::VerifyFailed { failed })
        } else {
            Ok(())
        }
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("catenoid-lab: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_shifted_grid_is_geometric_in_offset() {
        let g = GridArgs { min: 0.501, max: 0.6, count: 3, spacing: Spacing::LogShifted }.points().unwrap();
        assert!((g[1] - 0.5 - 0.01).abs() < 1e-15);
        assert!((g[2] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn grid_rejects_bad_bounds() {
        let bad = GridArgs { min: 0.4, max: 1.0, count: 3, spacing: Spacing::Linear };
        assert_eq!(bad.points().unwrap_err().exit_code(), 2);
        let empty = GridArgs { min: 0.6, max: 1.0, count: 0, spacing: Spacing::Linear };
        assert!(empty.points().is_err());
    }

    #[test]
    fn out_of_domain_parameter_is_config_error() {
        assert_eq!(main_with_args(["catenoid-lab", "geometry", "--a", "0.3"]), 2);
        assert_eq!(main_with_args(["catenoid-lab", "geometry"]), 2);
    }

    #[test]
    fn sweep_headers_match_rows() {
        let (r, t) = conditions_point(0.8, 2, &Tolerances::default()).unwrap();
        let row = sweep_row(&r, &t);
        assert_eq!(row.keys().map(String::as_str).collect::<Vec<_>>(), SWEEP_HEADERS);
    }
}
