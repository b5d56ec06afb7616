//! Command-line front end: reads a lattice-spec file, runs one computation and
//! writes a CSV table or a report.
//!
//! Exit codes: 0 on success, 1 when the input fails validation or a
//! computation fails, 2 on a usage error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use latvib::acoustic::{self, IsotropyOutcome};
use latvib::bloch;
use latvib::dos;
use latvib::geom::Vec3;
use latvib::lattice::{self, CrystalSpec, ADMISSIBILITY_TOL};
use latvib::numerics;
use latvib::thermo::{self, PhysicalConstants, ReferenceModels};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Relative tolerance used to judge the oracle identities.
pub const ORACLE_TOL: f64 = 1e-9;
const ISOTROPY_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "latvib", version, about = "Lattice vibrations of periodic crystal graphs")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a single JSON document instead of CSV or text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the result here (atomically) instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Input {
    /// Lattice-spec file (TOML).
    spec: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Units {
    /// ℏ = K = 1
    Natural,
    /// ℏ and K in SI units
    Si,
}

impl Units {
    fn constants(self) -> PhysicalConstants {
        match self {
            Units::Natural => PhysicalConstants::NATURAL,
            Units::Si => PhysicalConstants::SI,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a lattice spec and report rotation-invariance residuals.
    Validate(Input),
    /// Dispersion along a path of fractional characters.
    Bands {
        #[command(flatten)]
        input: Input,
        /// Waypoints `k1,k2,k3;k1,k2,k3;…` in dual-basis coordinates.
        #[arg(long, default_value = "0,0,0;0.5,0,0;0.5,0.5,0;0.5,0.5,0.5;0,0,0")]
        path: String,
        /// Points per segment.
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
        steps: u32,
    },
    /// Integrated density of states from an N³ grid.
    Dos {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
        grid: u32,
        /// Number of evenly spaced thresholds in [0, λ_max].
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(2..))]
        points: u32,
    },
    /// Sound speeds over the sphere rule and the isotropy fit.
    Acoustic {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(4..))]
        sphere_order: u32,
    },
    /// Debye constant c₀ from sound speeds, optionally with a grid fit.
    C0 {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(4..))]
        sphere_order: u32,
        /// Also fit c₀ from the density of states on this grid.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        grid: Option<u32>,
    },
    /// Internal energy and specific heat over a log-spaced temperature range.
    Heat {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
        grid: u32,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(4..))]
        sphere_order: u32,
        #[arg(long, default_value_t = 0.01)]
        tmin: f64,
        #[arg(long, default_value_t = 100.0)]
        tmax: f64,
        #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u32).range(2..))]
        tsteps: u32,
        /// Einstein frequency squared; defaults to the Debye λ_D.
        #[arg(long)]
        lambda0: Option<f64>,
        #[arg(long, value_enum, default_value_t = Units::Natural)]
        units: Units,
    },
    /// Debye wavenumber, temperature and T³ coefficients.
    Debye {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(4..))]
        sphere_order: u32,
        #[arg(long, value_enum, default_value_t = Units::Natural)]
        units: Units,
    },
    /// Compare the supercell spectrum with the grid union of the dispersion.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        grid: u32,
    },
}

/// Bad flag values that clap cannot see on its own.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// The result of a command before it is rendered.
struct Report {
    text: String,
    json: Value,
    csv: Option<String>,
    /// Set when the input failed a check; the report is still written.
    failure: Option<String>,
}

impl Report {
    fn text(text: String, json: Value) -> Self {
        Report { text, json, csv: None, failure: None }
    }

    fn table(csv: String, json: Value) -> Self {
        Report { text: String::new(), json, csv: Some(csv), failure: None }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    2
                }
            };
        }
    };
    match execute(&cli).and_then(|report| deliver(&cli, report, stdout, stderr)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                2
            } else {
                1
            }
        }
    }
}

fn deliver(cli: &Cli, report: Report, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let body = if cli.json {
        let mut s = serde_json::to_string_pretty(&report.json)?;
        s.push('\n');
        s
    } else if let Some(csv) = &report.csv {
        csv.clone()
    } else {
        report.text.clone()
    };
    match &cli.output {
        Some(path) => write_atomic(path, body.as_bytes())?,
        None => stdout.write_all(body.as_bytes())?,
    }
    // a table owns stdout, so its summary goes to stderr
    if !cli.json && report.csv.is_some() {
        stderr.write_all(report.text.as_bytes())?;
    }
    match report.failure {
        Some(msg) => {
            writeln!(stderr, "{msg}")?;
            Ok(1)
        }
        None => Ok(0),
    }
}

/// Writes to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn load_crystal(path: &Path) -> Result<CrystalSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    lattice::parse_crystal(&text).with_context(|| format!("invalid lattice spec {}", path.display()))
}

fn require_admissible(crystal: &CrystalSpec) -> Result<()> {
    let r = lattice::validate_rotation_invariance(crystal);
    if r > ADMISSIBILITY_TOL {
        bail!("inadmissible crystal: rotation-invariance residual {r:.3e} exceeds {ADMISSIBILITY_TOL:e}; run `latvib validate`");
    }
    Ok(())
}

fn csv_string(write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf)?)
}

fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Validate(input) => validate(&load_crystal(&input.spec)?),
        Command::Bands { input, path, steps } => bands(&load_crystal(&input.spec)?, path, *steps as usize),
        Command::Dos { input, grid, points } => density(&load_crystal(&input.spec)?, *grid as usize, *points as usize),
        Command::Acoustic { input, sphere_order } => {
            acoustic_table(&load_crystal(&input.spec)?, *sphere_order as usize)
        }
        Command::C0 { input, sphere_order, grid } => {
            c0(&load_crystal(&input.spec)?, *sphere_order as usize, grid.map(|g| g as usize))
        }
        Command::Heat { input, grid, sphere_order, tmin, tmax, tsteps, lambda0, units } => {
            if !(*tmin > 0.0 && tmin < tmax && tmax.is_finite()) {
                return Err(usage(format!("need 0 < --tmin < --tmax, got {tmin} and {tmax}")));
            }
            if matches!(lambda0, Some(l) if !(*l > 0.0)) {
                return Err(usage("--lambda0 must be positive"));
            }
            let settings = HeatSettings {
                grid: *grid as usize,
                order: *sphere_order as usize,
                temps: thermo::log_spaced(*tmin, *tmax, *tsteps as usize)?,
                lambda0: *lambda0,
                consts: units.constants(),
            };
            heat(&load_crystal(&input.spec)?, &settings)
        }
        Command::Debye { input, sphere_order, units } => {
            debye(&load_crystal(&input.spec)?, *sphere_order as usize, &units.constants())
        }
        Command::Oracle { input, grid } => oracle(&load_crystal(&input.spec)?, *grid as usize),
    }
}

fn validate(crystal: &CrystalSpec) -> Result<Report> {
    let residuals = lattice::rotation_residuals(crystal);
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    let mut text = format!(
        "lattice: {} ({} vertices, {} bonds, cell volume {})\n",
        crystal.name,
        crystal.vertex_count(),
        crystal.edges.len() / 2,
        crystal.basis.volume
    );
    for (v, r) in crystal.vertices.iter().zip(&residuals) {
        text += &format!("rotation residual {}: {r:.3e}\n", v.id);
    }
    text += &format!("max residual {worst:.3e} (tolerance {ADMISSIBILITY_TOL:e})\n");
    let zeros = if 27 * crystal.dof() <= bloch::DEFAULT_SUPERCELL_CAP {
        let z = bloch::zero_multiplicity(crystal, 3)?;
        text += &format!("zero eigenvalues of the N=3 supercell: {z}\n");
        Some(z)
    } else {
        text += "zero eigenvalues of the N=3 supercell: skipped (supercell too large)\n";
        None
    };
    let admissible = worst <= ADMISSIBILITY_TOL;
    let connected = zeros.is_none_or(|z| z == 3);
    text += if admissible && connected { "admissible\n" } else { "inadmissible\n" };
    let json = json!({
        "name": crystal.name,
        "vertices": crystal.vertex_count(),
        "bonds": crystal.edges.len() / 2,
        "volume": crystal.basis.volume,
        "residuals": crystal.vertices.iter().zip(&residuals).map(|(v, r)| json!({"vertex": v.id, "residual": r})).collect::<Vec<_>>(),
        "max_residual": worst,
        "tolerance": ADMISSIBILITY_TOL,
        "zero_multiplicity": zeros,
        "admissible": admissible && connected,
    });
    let mut report = Report::text(text, json);
    if !admissible {
        let at = residuals.iter().position(|&r| r == worst).unwrap_or(0);
        report.failure = Some(format!(
            "inadmissible: rotation-invariance residual {worst:.3e} at vertex {:?} exceeds {ADMISSIBILITY_TOL:e}",
            crystal.vertices[at].id
        ));
    } else if !connected {
        report.failure =
            Some(format!("inadmissible: N=3 supercell has {} zero eigenvalues, expected 3", zeros.unwrap_or(0)));
    }
    Ok(report)
}

pub fn parse_path(spec: &str) -> Result<Vec<Vec3>> {
    let points = spec
        .split(';')
        .map(|p| {
            let xs: Vec<f64> = p
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| usage(format!("bad waypoint {p:?}")))?;
            match xs.as_slice() {
                [a, b, c] if xs.iter().all(|x| x.is_finite()) => Ok([*a, *b, *c]),
                _ => Err(usage(format!("waypoint {p:?} needs three finite coordinates"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if points.len() < 2 {
        return Err(usage("--path needs at least two waypoints"));
    }
    Ok(points)
}

fn bands(crystal: &CrystalSpec, path: &str, steps: usize) -> Result<Report> {
    let table = bloch::band_path(crystal, &parse_path(path)?, steps)?;
    let csv = csv_string(|b| table.write_csv(b))?;
    let json = json!({
        "name": crystal.name,
        "k": table.path.iter().map(|c| c.fractional.to_vec()).collect::<Vec<_>>(),
        "segment": table.positions.iter().map(|p| p.0).collect::<Vec<_>>(),
        "t": table.positions.iter().map(|p| p.1).collect::<Vec<_>>(),
        "lambda": table.branches,
    });
    Ok(Report::table(csv, json))
}

fn density(crystal: &CrystalSpec, grid: usize, points: usize) -> Result<Report> {
    let samples = dos::sample_spectrum(crystal, grid)?;
    let top = samples.max_lambda();
    let thresholds: Vec<f64> = (0..points).map(|i| top * i as f64 / (points - 1) as f64).collect();
    let curve = dos::ids_curve_from_samples(&samples, &thresholds)?;
    let fit = dos::fit_c0_samples(&samples, dos::default_fit_window(&samples)).ok();
    let csv = csv_string(|b| curve.write_csv(b))?;
    let json = json!({
        "name": crystal.name,
        "grid": grid,
        "lambda_max": top,
        "c0_fit": fit,
        "lambda": curve.thresholds,
        "phi": curve.values,
    });
    Ok(Report::table(csv, json))
}

fn isotropy_json(outcome: &IsotropyOutcome, volume: f64) -> Value {
    match outcome {
        IsotropyOutcome::Isotropic(f) => json!({
            "isotropic": true,
            "a": f.a,
            "b": f.b,
            "c_l": f.c_l,
            "c_t": f.c_t,
            "residual": f.residual,
            "nonpositive_a": f.nonpositive_a,
            "c0_isotropic": acoustic::c0_isotropic(f.c_l, f.c_t, volume).ok(),
        }),
        IsotropyOutcome::Anisotropic { residual } => json!({ "isotropic": false, "residual": residual }),
    }
}

fn isotropy_text(outcome: &IsotropyOutcome, volume: f64) -> String {
    match outcome {
        IsotropyOutcome::Isotropic(f) => {
            let mut s = format!("isotropic: a = {:.6}, b = {:.6}, c_l = {:.6}, c_t = {:.6}", f.a, f.b, f.c_l, f.c_t);
            if f.nonpositive_a {
                s += " (a <= 0)";
            }
            if let Ok(c0) = acoustic::c0_isotropic(f.c_l, f.c_t, volume) {
                s += &format!("\nisotropic c0 = {c0:.10}");
            }
            s + "\n"
        }
        IsotropyOutcome::Anisotropic { residual } => format!("anisotropic (fit residual {residual:.3e})\n"),
    }
}

fn acoustic_table(crystal: &CrystalSpec, order: usize) -> Result<Report> {
    require_admissible(crystal)?;
    let rule = numerics::sphere_rule(order);
    let mut rows = Vec::with_capacity(rule.len());
    for omega in &rule.nodes {
        rows.push((omega, acoustic::sound_speeds(crystal, omega)?.speeds));
    }
    let mut csv = String::from("omega_x,omega_y,omega_z,s1,s2,s3\n");
    for (o, s) in &rows {
        let cells: Vec<String> = o.iter().chain(s.iter()).map(|x| bloch::fmt_f64(*x)).collect();
        csv += &cells.join(",");
        csv.push('\n');
    }
    let c0 = acoustic::c0_quadrature(crystal, order)?;
    let iso = acoustic::isotropy_fit(crystal, ISOTROPY_TOL);
    let text = format!("c0 = {c0:.10}\n{}", isotropy_text(&iso, crystal.basis.volume));
    let json = json!({
        "name": crystal.name,
        "sphere_order": order,
        "c0": c0,
        "isotropy": isotropy_json(&iso, crystal.basis.volume),
        "directions": rows.iter().map(|r| r.0.to_vec()).collect::<Vec<_>>(),
        "speeds": rows.iter().map(|r| r.1.to_vec()).collect::<Vec<_>>(),
    });
    Ok(Report { text, json, csv: Some(csv), failure: None })
}

fn c0(crystal: &CrystalSpec, order: usize, grid: Option<usize>) -> Result<Report> {
    require_admissible(crystal)?;
    let quad = acoustic::c0_quadrature(crystal, order)?;
    let mut text = format!("c0 = {quad:.10}\n");
    let fit = match grid {
        Some(n) => {
            let f = dos::fit_c0(crystal, n, None)?;
            text += &format!("c0 (fit, N={n}) = {f:.6} ({:+.2}%)\n", 100.0 * (f / quad - 1.0));
            Some(f)
        }
        None => None,
    };
    let json = json!({ "name": crystal.name, "sphere_order": order, "c0": quad, "grid": grid, "c0_fit": fit });
    Ok(Report::text(text, json))
}

struct HeatSettings {
    grid: usize,
    order: usize,
    temps: Vec<f64>,
    lambda0: Option<f64>,
    consts: PhysicalConstants,
}

fn heat(crystal: &CrystalSpec, s: &HeatSettings) -> Result<Report> {
    require_admissible(crystal)?;
    let n = crystal.vertex_count();
    let c0 = acoustic::c0_quadrature(crystal, s.order)?;
    let lambda_d = thermo::debye_lambda(c0, n)?;
    let theta = thermo::debye_temperature(lambda_d, &s.consts)?;
    let lambda0 = s.lambda0.unwrap_or(lambda_d);
    let samples = dos::sample_spectrum(crystal, s.grid)?;
    let models = ReferenceModels { theta_debye: theta, lambda0, n };
    let curve = thermo::thermo_curve(&samples, &s.temps, &models, &s.consts)?;
    let csv = csv_string(|b| curve.write_csv(b))?;
    let u0 = thermo::zero_point_energy(&samples, &s.consts);
    let text = format!("c0 = {c0:.10}\ntheta_D = {theta:.10}\nU0 = {u0:.10}\n");
    let json = json!({
        "name": crystal.name,
        "grid": s.grid,
        "hbar": s.consts.hbar,
        "boltzmann": s.consts.boltzmann,
        "c0": c0,
        "lambda_D": lambda_d,
        "theta_D": theta,
        "lambda0": lambda0,
        "zero_point_energy": u0,
        "T": curve.temperatures,
        "U1": curve.u1,
        "C": curve.c,
        "C_debye": curve.c_debye,
        "C_einstein": curve.c_einstein,
    });
    Ok(Report { text, json, csv: Some(csv), failure: None })
}

fn debye(crystal: &CrystalSpec, order: usize, consts: &PhysicalConstants) -> Result<Report> {
    require_admissible(crystal)?;
    let n = crystal.vertex_count();
    let c0 = acoustic::c0_quadrature(crystal, order)?;
    let lambda_d = thermo::debye_lambda(c0, n)?;
    let theta = thermo::debye_temperature(lambda_d, consts)?;
    let (u_coeff, c_coeff) = thermo::t3_coefficients(c0, consts)?;
    let iso = acoustic::isotropy_fit(crystal, ISOTROPY_TOL);
    let text = format!(
        "c0 = {c0:.10}\nlambda_D = {lambda_d:.10}\ntheta_D = {theta:.10}\nU1 ~ {u_coeff:.10e} T^4\nC ~ {c_coeff:.10e} T^3\n{}",
        isotropy_text(&iso, crystal.basis.volume)
    );
    let json = json!({
        "name": crystal.name,
        "c0": c0,
        "lambda_D": lambda_d,
        "theta_D": theta,
        "u_t4_coefficient": u_coeff,
        "c_t3_coefficient": c_coeff,
        "isotropy": isotropy_json(&iso, crystal.basis.volume),
    });
    Ok(Report::text(text, json))
}

/// Discrepancies between the supercell and the Bloch decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub grid: usize,
    pub dimension: usize,
    /// Max relative difference between the sorted eigenvalue multisets.
    pub spectrum: f64,
    /// Relative difference of the per-cell traces of `e^{−λ}`.
    pub trace: f64,
}

pub fn oracle_report(crystal: &CrystalSpec, n: usize) -> Result<OracleReport> {
    let sc = bloch::supercell_spectrum(crystal, n)?;
    let grid = bloch::grid_union(crystal, n)?;
    let cells = (n * n * n) as f64;
    let lhs = sc.iter().map(|l| (-l).exp()).sum::<f64>() / cells;
    let rhs = dos::spectral_average(&dos::sample_spectrum(crystal, n)?, |l| (-l).exp());
    Ok(OracleReport {
        grid: n,
        dimension: sc.len(),
        spectrum: bloch::multiset_discrepancy(&sc, &grid),
        trace: ((lhs - rhs) / rhs).abs(),
    })
}

fn oracle(crystal: &CrystalSpec, n: usize) -> Result<Report> {
    let r = oracle_report(crystal, n).map_err(|e| match e.downcast_ref::<bloch::BlochError>() {
        Some(bloch::BlochError::SupercellTooLarge { .. }) => usage(format!("{e}")),
        _ => e,
    })?;
    let ok = r.spectrum <= ORACLE_TOL && r.trace <= ORACLE_TOL;
    let text = format!(
        "supercell N={} (dimension {})\nspectrum discrepancy {:.3e}\ntrace discrepancy (e^-lambda) {:.3e}\n{}\n",
        r.grid,
        r.dimension,
        r.spectrum,
        r.trace,
        if ok { "agree" } else { "disagree" }
    );
    let json = json!({
        "name": crystal.name,
        "grid": r.grid,
        "dimension": r.dimension,
        "spectrum_discrepancy": r.spectrum,
        "trace_discrepancy": r.trace,
        "agree": ok,
    });
    let mut report = Report::text(text, json);
    if !ok {
        report.failure = Some(format!("oracle identities violated beyond {ORACLE_TOL:e}"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_parsing() {
        let p = parse_path("0,0,0; 0.5, 0, 0 ;0.5,0.5,0").unwrap();
        assert_eq!(p, vec![[0.0; 3], [0.5, 0.0, 0.0], [0.5, 0.5, 0.0]]);
        for bad in ["", "0,0,0", "0,0,0;a,b,c", "0,0,0;1,1", "0,0,0;inf,0,0"] {
            let e = parse_path(bad).unwrap_err();
            assert!(e.downcast_ref::<UsageError>().is_some(), "{bad:?}");
        }
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
