//! `farc`: evaluate, sweep, fit and convert terahertz reflection-coefficient
//! data from the command line.
//!
//! Exit codes: 0 on success, 2 on input or validation errors, 3 on I/O
//! errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use farc_cli::gridspec::parse_axis_spec;
use farc_cli::io::{self, format_significant, LoadError, DISPLAY_SIG_DIGITS};
use farc_cli::materials::{self, LIBRARY};
use farc_cli::report::{class_label, FitReportDoc};
use farc_core::dielectric::{DielectricParams, DrudeParams, LorenzParams};
use farc_core::fitting::{fit_statfarc, FitConfig, ParamBounds};
use farc_core::measurement::{
    gamma_from_powers, GridPolicy, MeasurementGrid, STANDARD_ANGLES_DEG, STANDARD_FREQUENCIES_GHZ,
};
use farc_core::reflection::{
    farc_metallic, farc_nonmetallic, fresnel_reflection, recover_physical_params, statfarc_eval,
    IncidenceGeometry, MaterialClass, MaterialSurface, ReflectionCoefficient, StatFarcParams,
    SurfacePermittivity,
};
use std::fmt::Write as _;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "farc",
    version,
    about = "Terahertz reflection-coefficient models: evaluate, sweep, fit, convert"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one model at a single (angle, frequency) point
    Eval(EvalArgs),
    /// Sweep a model over a frequency x angle grid and emit a samples CSV
    Sweep(SweepArgs),
    /// Fit statistical parameters to a samples CSV and emit a JSON report
    Fit(FitArgs),
    /// Convert a power-record CSV into a samples CSV
    Convert(ConvertArgs),
    /// Print the bundled material library
    Materials(MaterialsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    /// Rough-surface Fresnel with a static real permittivity
    Fresnel,
    /// Frequency-angle model with physical oscillator parameters
    Farc,
    /// Frequency-angle model with fitted statistical parameters
    Statfarc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    #[value(name = "non-metallic")]
    NonMetallic,
    Metallic,
}

impl From<ClassArg> for MaterialClass {
    fn from(value: ClassArg) -> Self {
        match value {
            ClassArg::NonMetallic => MaterialClass::NonMetallic,
            ClassArg::Metallic => MaterialClass::Metallic,
        }
    }
}

/// Model selection shared by `eval` and `sweep`: either a bundled material
/// or explicit parameters for the chosen model family.
#[derive(Args)]
struct ModelArgs {
    /// Model family
    #[arg(long, value_enum)]
    model: ModelKind,
    /// Bundled material name (see `farc materials`)
    #[arg(long)]
    material: Option<String>,
    /// Material class for explicit farc/statfarc parameters
    #[arg(long, value_enum)]
    class: Option<ClassArg>,
    /// Real relative permittivity (explicit fresnel)
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Perfect-conductor surface (explicit fresnel)
    #[arg(long)]
    conductor: bool,
    /// Surface roughness sigma in micrometres (explicit fresnel/farc; default 0)
    #[arg(long, allow_negative_numbers = true)]
    sigma_um: Option<f64>,
    /// Squared plasma frequency in (rad/ns)^2 (explicit farc)
    #[arg(long, allow_negative_numbers = true)]
    omega_p_sq: Option<f64>,
    /// Resonant frequency in rad/ns (explicit non-metallic farc)
    #[arg(long, allow_negative_numbers = true)]
    omega_0: Option<f64>,
    /// Damping constant in rad/ns (explicit farc)
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Statistical coefficient a (explicit statfarc)
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Statistical coefficient b (explicit statfarc)
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Statistical coefficient c (explicit non-metallic statfarc)
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Statistical coefficient d (explicit statfarc)
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Incidence angle in degrees, [0, 90)
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    /// Frequency in GHz
    #[arg(long, allow_negative_numbers = true)]
    freq: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Frequency axis in GHz: value, comma list, or start:stop:step
    /// (default: the standard nine points)
    #[arg(long)]
    freqs: Option<String>,
    /// Angle axis in degrees: value, comma list, or start:stop:step
    /// (default: the standard eight angles)
    #[arg(long)]
    angles: Option<String>,
    /// Output CSV path (stdout when omitted)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Input samples CSV (`frequency_ghz,theta_deg,gamma_mag`)
    #[arg(long, short)]
    input: PathBuf,
    /// Material class of the dataset
    #[arg(long, value_enum)]
    class: ClassArg,
    /// Material label for the report (default: input file stem)
    #[arg(long)]
    material: Option<String>,
    /// Accept off-grid rows instead of rejecting them
    #[arg(long)]
    permissive: bool,
    /// Seed for the random extra starts
    #[arg(long)]
    seed: Option<u64>,
    /// Multistart grid resolution per parameter
    #[arg(long)]
    starts_per_dim: Option<usize>,
    /// Additional seeded random starts inside the bounds
    #[arg(long)]
    random_starts: Option<usize>,
    /// Convergence tolerance on the objective spread
    #[arg(long)]
    tolerance: Option<f64>,
    /// Iteration cap per local search
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Bounds for a as lo:hi
    #[arg(long, allow_hyphen_values = true)]
    bounds_a: Option<String>,
    /// Bounds for b as lo:hi
    #[arg(long, allow_hyphen_values = true)]
    bounds_b: Option<String>,
    /// Bounds for c as lo:hi
    #[arg(long, allow_hyphen_values = true)]
    bounds_c: Option<String>,
    /// Bounds for d as lo:hi
    #[arg(long, allow_hyphen_values = true)]
    bounds_d: Option<String>,
    /// Output JSON path (stdout when omitted)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    /// Input power CSV (`frequency_ghz,theta_deg,p_r,p_ref,d_t_m,d_r_m,d_ref_m`)
    #[arg(long, short)]
    input: PathBuf,
    /// Interpret p_r and p_ref as decibel values
    #[arg(long)]
    db: bool,
    /// Output CSV path (stdout when omitted)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MaterialsArgs {
    /// Machine-readable JSON instead of a table
    #[arg(long)]
    json: bool,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) | CliError::Io(msg) => f.write_str(msg),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Eval(args) => cmd_eval(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Convert(args) => cmd_convert(args),
        Command::Materials(args) => cmd_materials(args),
    }
}

/// A fully resolved model, ready to evaluate at any geometry.
enum ResolvedModel {
    Fresnel(MaterialSurface),
    PhysicalNonMetallic { params: LorenzParams, sigma_m: f64 },
    PhysicalMetallic { params: DrudeParams, sigma_m: f64 },
    Statistical(StatFarcParams),
}

impl ResolvedModel {
    fn evaluate(&self, geom: &IncidenceGeometry) -> ReflectionCoefficient {
        match self {
            ResolvedModel::Fresnel(surface) => fresnel_reflection(surface, geom),
            ResolvedModel::PhysicalNonMetallic { params, sigma_m } => {
                farc_nonmetallic(params, *sigma_m, geom).expect("sigma validated at resolve time")
            }
            ResolvedModel::PhysicalMetallic { params, sigma_m } => {
                farc_metallic(params, *sigma_m, geom).expect("sigma validated at resolve time")
            }
            ResolvedModel::Statistical(params) => statfarc_eval(params, geom),
        }
    }
}

fn require<T: Copy>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Input(format!("{flag} is required for this model")))
}

fn resolve_model(args: &ModelArgs) -> Result<ResolvedModel, CliError> {
    let explicit = args.delta.is_some()
        || args.conductor
        || args.sigma_um.is_some()
        || args.omega_p_sq.is_some()
        || args.omega_0.is_some()
        || args.gamma.is_some()
        || args.a.is_some()
        || args.b.is_some()
        || args.c.is_some()
        || args.d.is_some();
    if args.material.is_some() && explicit {
        return Err(CliError::Input(
            "choose either --material or explicit parameters, not both".into(),
        ));
    }
    let entry = match &args.material {
        Some(name) => Some(materials::find(name).ok_or_else(|| {
            CliError::Input(format!(
                "unknown material `{name}`; run `farc materials` for the bundled list"
            ))
        })?),
        None => None,
    };
    let sigma_m = args.sigma_um.unwrap_or(0.0) * 1e-6;

    match args.model {
        ModelKind::Fresnel => {
            if let Some(entry) = entry {
                return Ok(ResolvedModel::Fresnel(entry.surface()));
            }
            let permittivity = match (args.conductor, args.delta) {
                (true, None) => SurfacePermittivity::PerfectConductor,
                (false, Some(delta)) => SurfacePermittivity::Real(delta),
                (true, Some(_)) => {
                    return Err(CliError::Input("--conductor conflicts with --delta".into()))
                }
                (false, None) => {
                    return Err(CliError::Input(
                        "fresnel needs --material, --delta, or --conductor".into(),
                    ))
                }
            };
            let surface = MaterialSurface::new(permittivity, sigma_m).map_err(input_err)?;
            Ok(ResolvedModel::Fresnel(surface))
        }
        ModelKind::Farc => {
            if let Some(entry) = entry {
                // Bundled materials carry fitted statistical rows; map them
                // back to the physical form (roughness in metres, oscillator
                // parameters in rad/ns).
                let (sigma_m, dielectric) =
                    recover_physical_params(&entry.stat_params()).map_err(input_err)?;
                return Ok(match dielectric {
                    DielectricParams::Lorenz(params) => {
                        ResolvedModel::PhysicalNonMetallic { params, sigma_m }
                    }
                    DielectricParams::Drude(params) => {
                        ResolvedModel::PhysicalMetallic { params, sigma_m }
                    }
                });
            }
            let class = require(args.class, "--class")?;
            let omega_p_sq = require(args.omega_p_sq, "--omega-p-sq")?;
            let gamma = require(args.gamma, "--gamma")?;
            match class {
                ClassArg::NonMetallic => {
                    let omega_0 = require(args.omega_0, "--omega-0")?;
                    let params =
                        LorenzParams::new(omega_p_sq, omega_0, gamma).map_err(input_err)?;
                    MaterialSurface::dielectric(1.0, sigma_m).map_err(input_err)?;
                    Ok(ResolvedModel::PhysicalNonMetallic { params, sigma_m })
                }
                ClassArg::Metallic => {
                    if args.omega_0.is_some() {
                        return Err(CliError::Input(
                            "--omega-0 applies only to non-metallic materials".into(),
                        ));
                    }
                    let params = DrudeParams::new(omega_p_sq, gamma).map_err(input_err)?;
                    MaterialSurface::dielectric(1.0, sigma_m).map_err(input_err)?;
                    Ok(ResolvedModel::PhysicalMetallic { params, sigma_m })
                }
            }
        }
        ModelKind::Statfarc => {
            if let Some(entry) = entry {
                return Ok(ResolvedModel::Statistical(entry.stat_params()));
            }
            let class = require(args.class, "--class")?;
            let a = require(args.a, "--a")?;
            let b = require(args.b, "--b")?;
            let d = require(args.d, "--d")?;
            let params = match class {
                ClassArg::NonMetallic => {
                    let c = require(args.c, "--c")?;
                    StatFarcParams::non_metallic(a, b, c, d).map_err(input_err)?
                }
                ClassArg::Metallic => {
                    if args.c.is_some() {
                        return Err(CliError::Input(
                            "metallic statistical parameters have no c".into(),
                        ));
                    }
                    StatFarcParams::metallic(a, b, d).map_err(input_err)?
                }
            };
            Ok(ResolvedModel::Statistical(params))
        }
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
    }
}

fn cmd_eval(args: EvalArgs) -> Result<(), CliError> {
    let model = resolve_model(&args.model)?;
    let geom = IncidenceGeometry::new(args.theta, args.freq).map_err(input_err)?;
    let gamma = model.evaluate(&geom);
    println!(
        "magnitude: {}",
        format_significant(gamma.magnitude(), DISPLAY_SIG_DIGITS)
    );
    println!("re: {}", format_significant(gamma.re(), DISPLAY_SIG_DIGITS));
    println!("im: {}", format_significant(gamma.im(), DISPLAY_SIG_DIGITS));
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let model = resolve_model(&args.model)?;
    let freqs = match &args.freqs {
        Some(spec) => parse_axis_spec(spec).map_err(input_err)?,
        None => STANDARD_FREQUENCIES_GHZ.to_vec(),
    };
    let angles = match &args.angles {
        Some(spec) => parse_axis_spec(spec).map_err(input_err)?,
        None => STANDARD_ANGLES_DEG.to_vec(),
    };
    let grid = MeasurementGrid::new(freqs, angles).map_err(input_err)?;
    let rows = grid.points().map(|(f, theta)| {
        let geom =
            IncidenceGeometry::new(theta, f).expect("grid coordinates validated at construction");
        (f, theta, model.evaluate(&geom).magnitude())
    });
    let mut body = Vec::new();
    io::write_samples_csv(&mut body, rows).expect("writing to memory cannot fail");
    write_output(
        args.output.as_deref(),
        std::str::from_utf8(&body).expect("CSV output is UTF-8"),
    )
}

fn parse_bounds_flag(spec: &str, flag: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 2 {
        if let (Ok(lo), Ok(hi)) = (parts[0].trim().parse(), parts[1].trim().parse()) {
            return Ok((lo, hi));
        }
    }
    Err(CliError::Input(format!(
        "{flag} must be lo:hi, got `{spec}`"
    )))
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let material = match &args.material {
        Some(name) => name.clone(),
        None => args
            .input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".to_string()),
    };
    let policy = if args.permissive {
        GridPolicy::Permissive
    } else {
        GridPolicy::Strict
    };
    let file = File::open(&args.input)
        .map_err(|e| CliError::Io(format!("cannot open {}: {e}", args.input.display())))?;
    let dataset = io::load_samples_csv(
        file,
        &material,
        args.class.into(),
        MeasurementGrid::standard(),
        policy,
    )?;

    let defaults = FitConfig::default();
    let base = defaults.bounds;
    let bounds = ParamBounds::new(
        match &args.bounds_a {
            Some(s) => parse_bounds_flag(s, "--bounds-a")?,
            None => base.a(),
        },
        match &args.bounds_b {
            Some(s) => parse_bounds_flag(s, "--bounds-b")?,
            None => base.b(),
        },
        match &args.bounds_c {
            Some(s) => parse_bounds_flag(s, "--bounds-c")?,
            None => base.c(),
        },
        match &args.bounds_d {
            Some(s) => parse_bounds_flag(s, "--bounds-d")?,
            None => base.d(),
        },
    )
    .map_err(input_err)?;
    let config = FitConfig {
        bounds,
        starts_per_dim: args.starts_per_dim.unwrap_or(defaults.starts_per_dim),
        extra_random_starts: args.random_starts.unwrap_or(defaults.extra_random_starts),
        tolerance: args.tolerance.unwrap_or(defaults.tolerance),
        max_iterations: args.max_iterations.unwrap_or(defaults.max_iterations),
        seed: args.seed.unwrap_or(defaults.seed),
    };

    let report = fit_statfarc(&dataset, &config).map_err(input_err)?;
    if !report.converged() {
        eprintln!("warning: fit stopped at the iteration cap; reporting the best point found");
    }
    let doc = FitReportDoc::new(&dataset, &report);
    write_output(args.output.as_deref(), &doc.to_json())
}

fn cmd_convert(args: ConvertArgs) -> Result<(), CliError> {
    let file = File::open(&args.input)
        .map_err(|e| CliError::Io(format!("cannot open {}: {e}", args.input.display())))?;
    let records = io::load_power_csv(file, args.db)?;
    let mut rows = Vec::with_capacity(records.len());
    for (line, record) in &records {
        let sample = gamma_from_powers(record);
        if sample.exceeds_unity() {
            eprintln!(
                "warning: row {line}: |Gamma| = {} exceeds 1",
                format_significant(sample.gamma_mag(), DISPLAY_SIG_DIGITS)
            );
        }
        rows.push((
            sample.frequency_ghz(),
            sample.theta_deg(),
            sample.gamma_mag(),
        ));
    }
    let mut body = Vec::new();
    io::write_samples_csv(&mut body, rows).expect("writing to memory cannot fail");
    write_output(
        args.output.as_deref(),
        std::str::from_utf8(&body).expect("CSV output is UTF-8"),
    )
}

fn cmd_materials(args: MaterialsArgs) -> Result<(), CliError> {
    if args.json {
        let docs: Vec<serde_json::Value> = LIBRARY
            .iter()
            .map(|e| {
                let delta = match e.permittivity {
                    SurfacePermittivity::Real(d) => serde_json::json!(d),
                    SurfacePermittivity::PerfectConductor => serde_json::Value::Null,
                };
                serde_json::json!({
                    "name": e.name,
                    "class": class_label(e.class),
                    "delta": delta,
                    "perfect_conductor": e.permittivity == SurfacePermittivity::PerfectConductor,
                    "sigma_um": e.roughness_sigma_um,
                    "params": { "a": e.a, "b": e.b, "c": e.c, "d": e.d },
                })
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&docs).expect("plain data serializes");
        text.push('\n');
        print!("{text}");
        return Ok(());
    }

    let mut table = String::new();
    writeln!(
        table,
        "{:<16} {:<13} {:>6} {:>9} {:>8} {:>6} {:>6} {:>7}",
        "material", "class", "delta", "sigma_um", "a", "b", "c", "d"
    )
    .expect("writing to memory cannot fail");
    for e in &LIBRARY {
        let delta = match e.permittivity {
            SurfacePermittivity::Real(d) => format!("{d}"),
            SurfacePermittivity::PerfectConductor => "inf".to_string(),
        };
        let c = e.c.map_or("-".to_string(), |c| format!("{c}"));
        writeln!(
            table,
            "{:<16} {:<13} {:>6} {:>9.3} {:>8} {:>6} {:>6} {:>7}",
            e.name,
            class_label(e.class),
            delta,
            e.roughness_sigma_um,
            e.a,
            e.b,
            c,
            e.d
        )
        .expect("writing to memory cannot fail");
    }
    print!("{table}");
    Ok(())
}
