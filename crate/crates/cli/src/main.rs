//! `choimap`: classify generalized Choi maps, certify optimality by spanning,
//! and export parameter-space scans.
//!
//! Exit codes: 0 success (positive / spanning), 1 not positive, 2 unknown,
//! 3 inconclusive, 64 usage, 65 invalid input, 66 wrong region,
//! 70 solver failure, 74 I/O.

mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use choimap::geometry::{
    bc_region_class, bc_scan, optimal_points_iee, optimal_points_iev, optimal_points_ivv,
    region_scan, validate_point, BcRegionClass, OptimalPointSet, PointValidation,
};
use choimap::optimality::{spanning_report, CaseLabel};
use choimap::positivity::{
    classify_with_resolution, condition_report, equal_gradient_residual, gradient_check,
    ConditionReport, GradientCheck, PositivityVerdict,
};
use choimap::{CVector9, Error, GeneralizedMap, Hermitian9, MapParams, ToleranceConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use output::{float, open, write_json};

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_REGION: u8 = 66;
const EXIT_SOFTWARE: u8 = 70;
const EXIT_IO: u8 = 74;

const TOLERANCE_ENV: &str = "CHOIMAP_TOLERANCE_FILE";

#[derive(Parser)]
#[command(name = "choimap", version, about = "Positivity and optimality of generalized Choi maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct TolArgs {
    /// Saturation band for condition values.
    #[arg(long, global = true)]
    sat_tol: Option<f64>,
    /// Relative singular-value threshold for the spanning rank.
    #[arg(long, global = true)]
    rank_tol: Option<f64>,
    /// Radicand threshold below which an edge is degenerate.
    #[arg(long, global = true)]
    degenerate_tol: Option<f64>,
    /// Allowed |d+e+f|.
    #[arg(long, global = true)]
    gauge_tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Choi,
    Reduction,
}

#[derive(Args)]
struct MapArgs {
    /// Named map instead of explicit parameters.
    #[arg(long, value_enum, conflicts_with_all = ["input", "a", "b", "c", "d", "e", "f"])]
    map: Option<Preset>,
    /// JSON file with fields a, b, c, d, e, f.
    #[arg(long, conflicts_with_all = ["a", "b", "c", "d", "e", "f"])]
    input: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    e: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    f: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanMode {
    Plane,
    Bc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Auto,
    Ivv,
    Iev,
    Iee,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatePreset {
    /// Maximally entangled state (|00⟩ + |11⟩ + |22⟩)/√3.
    Omega,
    /// Identity over 9.
    Mixed,
}

#[derive(Subcommand)]
enum Command {
    /// Decide positivity; exit 0 positive, 1 not positive, 2 unknown.
    Classify {
        #[command(flatten)]
        map: MapArgs,
        /// Grid subdivisions of the minor scan used for witnesses.
        #[arg(long, default_value_t = 60)]
        resolution: usize,
    },
    /// Spanning-property report; exit 0 spanning, 3 inconclusive, 1 not positive.
    Optimality {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Grid scan of the gauge plane or of the (b, c) plane.
    Scan {
        #[arg(long, value_enum)]
        mode: ScanMode,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        /// Half-width of the plane grid in chart units.
        #[arg(long, default_value_t = 1.5)]
        radius: f64,
        #[arg(long, default_value_t = 201)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Optimal points for a = 3 − b − c, each validated.
    OptimalPoints {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[arg(long = "case", value_enum, default_value_t = CaseArg::Auto)]
        case: CaseArg,
    },
    /// Compare closed-form edge gradients with central differences.
    Gradcheck {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1e-6)]
        h: f64,
        /// Largest accepted relative deviation.
        #[arg(long, default_value_t = 1e-5)]
        max_deviation: f64,
    },
    /// Evaluate Tr(C ρ) for the Choi matrix C of a map.
    Witness {
        #[command(flatten)]
        map: MapArgs,
        /// JSON state: a 9×9 matrix of [re, im] pairs, or {"pure": [[re, im]; 9]}.
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        state: Option<PathBuf>,
        #[arg(long, value_enum)]
        preset: Option<StatePreset>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn io(path: Option<&Path>, err: std::io::Error) -> Self {
        match path {
            Some(p) => Self::new(EXIT_IO, format!("{}: {err}", p.display())),
            None => Self::new(EXIT_IO, err.to_string()),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::InvalidArgument(_) => EXIT_USAGE,
            Error::WrongRegion { .. } => EXIT_REGION,
            Error::ConvergenceFailure { .. } => EXIT_SOFTWARE,
            Error::NotPositive => 1,
            _ => EXIT_DATA,
        };
        Self::new(code, err.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn tolerance(args: &TolArgs) -> Result<ToleranceConfig, Failure> {
    let mut tol = match std::env::var_os(TOLERANCE_ENV) {
        Some(path) => {
            let path = PathBuf::from(path);
            let text = std::fs::read_to_string(&path).map_err(|e| Failure::io(Some(&path), e))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))?
        }
        None => ToleranceConfig::default(),
    };
    if let Some(v) = args.sat_tol {
        tol.saturation = v;
    }
    if let Some(v) = args.rank_tol {
        tol.rank = v;
    }
    if let Some(v) = args.degenerate_tol {
        tol.degenerate = v;
    }
    if let Some(v) = args.gauge_tol {
        tol.gauge = v;
    }
    tol.validate()?;
    Ok(tol)
}

fn build_map(args: &MapArgs, tol: &ToleranceConfig) -> Result<GeneralizedMap, Failure> {
    if let Some(preset) = args.map {
        return Ok(match preset {
            Preset::Choi => GeneralizedMap::choi(),
            Preset::Reduction => GeneralizedMap::reduction(),
        });
    }
    let params = match &args.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::io(Some(path), e))?;
            serde_json::from_str::<MapParams>(&text)
                .map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))?
        }
        None => {
            let (Some(a), Some(b), Some(c)) = (args.a, args.b, args.c) else {
                return Err(Failure::new(EXIT_USAGE, "give --map, --input or all of --a --b --c"));
            };
            MapParams::new(a, b, c, args.d.unwrap_or(0.0), args.e.unwrap_or(0.0), args.f.unwrap_or(0.0))
        }
    };
    Ok(GeneralizedMap::with_tolerance(params, tol)?)
}

fn emit<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut out = open(path).map_err(|e| Failure::io(path, e))?;
    write_json(&mut out, value).map_err(|e| Failure::io(path, e))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ClassifyOutput {
    params: MapParams,
    conditions: ConditionReport,
    verdict: PositivityVerdict,
}

fn cmd_classify(map: &MapArgs, resolution: usize, tol: &ToleranceConfig, out: Option<&Path>) -> Outcome {
    let map = build_map(map, tol)?;
    let verdict = classify_with_resolution(&map, tol, resolution)?;
    let report = ClassifyOutput { params: map.params(), conditions: condition_report(&map, tol), verdict };
    emit(out, &report)?;
    Ok(match verdict {
        PositivityVerdict::Positive => 0,
        PositivityVerdict::NotPositive { .. } => 1,
        PositivityVerdict::UnknownOutsideHessian => 2,
    })
}

fn cmd_optimality(map: &MapArgs, tol: &ToleranceConfig, out: Option<&Path>) -> Outcome {
    let map = build_map(map, tol)?;
    let report = spanning_report(&map, tol)?;
    emit(out, &report)?;
    Ok(if report.case_label == CaseLabel::None {
        1
    } else if report.optimal_by_spanning {
        0
    } else {
        3
    })
}

fn csv_failure(path: Option<&Path>, err: csv::Error) -> Failure {
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Failure::io(path, e),
        other => Failure::new(EXIT_SOFTWARE, format!("{other:?}")),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    mode: ScanMode,
    base: (Option<f64>, Option<f64>, Option<f64>),
    radius: f64,
    n: usize,
    format: Format,
    tol: &ToleranceConfig,
    out: Option<&Path>,
) -> Outcome {
    if n < 2 {
        return Err(Failure::new(EXIT_USAGE, format!("--n must be at least 2, got {n}")));
    }
    match mode {
        ScanMode::Plane => {
            let (Some(a), Some(b), Some(c)) = base else {
                return Err(Failure::new(EXIT_USAGE, "plane scans need --a --b --c"));
            };
            let rows = region_scan(a, b, c, radius, n, tol)?;
            if let Format::Json = format {
                emit(out, &rows)?;
                return Ok(0);
            }
            let sink = open(out).map_err(|e| Failure::io(out, e))?;
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(["u", "v", "d", "e", "f", "inAlice", "inBob", "inHessian", "positivity"])
                .map_err(|e| csv_failure(out, e))?;
            for r in rows {
                let p = r.point;
                w.write_record([
                    float(r.u),
                    float(r.v),
                    float(p.d()),
                    float(p.e()),
                    float(p.f()),
                    r.flags.in_alice.to_string(),
                    r.flags.in_bob.to_string(),
                    r.flags.in_hessian_circle.to_string(),
                    r.positivity.as_str().to_string(),
                ])
                .map_err(|e| csv_failure(out, e))?;
            }
            w.flush().map_err(|e| Failure::io(out, e))?;
        }
        ScanMode::Bc => {
            let rows = bc_scan(n, tol)?;
            if let Format::Json = format {
                emit(out, &rows)?;
                return Ok(0);
            }
            let sink = open(out).map_err(|e| Failure::io(out, e))?;
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(["b", "c", "a", "class"]).map_err(|e| csv_failure(out, e))?;
            for r in rows {
                w.write_record([float(r.b), float(r.c), float(r.a), r.class.as_str().to_string()])
                    .map_err(|e| csv_failure(out, e))?;
            }
            w.flush().map_err(|e| Failure::io(out, e))?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ValidatedSet {
    #[serde(flatten)]
    set: OptimalPointSet,
    validations: Vec<PointValidation>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct OptimalOutput {
    b: f64,
    c: f64,
    region: BcRegionClass,
    sets: Vec<ValidatedSet>,
}

fn cmd_optimal_points(b: f64, c: f64, case: CaseArg, tol: &ToleranceConfig, out: Option<&Path>) -> Outcome {
    let region = bc_region_class(b, c, tol)?;
    let cases: Vec<CaseArg> = match case {
        CaseArg::Auto => match region {
            BcRegionClass::Blue | BcRegionClass::BoundaryBlueViolet => vec![CaseArg::Ivv],
            BcRegionClass::Violet => vec![CaseArg::Iev, CaseArg::Iee],
            _ => vec![CaseArg::Iee],
        },
        other => vec![other],
    };
    let mut sets = Vec::new();
    for case in cases {
        let set = match case {
            CaseArg::Ivv => optimal_points_ivv(b, c, tol)?,
            CaseArg::Iev => optimal_points_iev(b, c, tol)?,
            _ => optimal_points_iee(b, c, tol)?,
        };
        let validations = set
            .points
            .iter()
            .map(|p| validate_point(b, c, p, tol))
            .collect::<choimap::Result<Vec<_>>>()?;
        sets.push(ValidatedSet { set, validations });
    }
    emit(out, &OptimalOutput { b, c, region, sets })?;
    Ok(0)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct GradcheckOutput {
    params: MapParams,
    #[serde(flatten)]
    check: GradientCheck,
    equal_gradient_residual: f64,
}

fn cmd_gradcheck(map: &MapArgs, h: f64, max_dev: f64, tol: &ToleranceConfig, out: Option<&Path>) -> Outcome {
    if !(h > 0.0) {
        return Err(Failure::new(EXIT_USAGE, format!("--h must be positive, got {h}")));
    }
    let map = build_map(map, tol)?;
    let check = gradient_check(&map, h, tol)?;
    let residual = equal_gradient_residual(&map, tol)?;
    let code = if check.saturated_edges.is_empty() {
        3
    } else if check.max_relative_deviation <= max_dev {
        0
    } else {
        1
    };
    emit(out, &GradcheckOutput { params: map.params(), check, equal_gradient_residual: residual })?;
    Ok(code)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StateFile {
    Pure { pure: Vec<[f64; 2]> },
    Density(Box<Hermitian9>),
}

fn load_state(path: &Path, tol: &ToleranceConfig) -> Result<Hermitian9, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(Some(path), e))?;
    let bad = |msg: String| Failure::new(EXIT_DATA, format!("{}: {msg}", path.display()));
    let state: StateFile = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let rho = match state {
        StateFile::Pure { pure } => {
            if pure.len() != 9 {
                return Err(bad(format!("pure state needs 9 amplitudes, got {}", pure.len())));
            }
            let v = CVector9::from_fn(|i, _| Complex64::new(pure[i][0], pure[i][1]));
            Hermitian9::pure_state(&v)?
        }
        StateFile::Density(rho) => *rho,
    };
    rho.check_state(tol.state_psd)?;
    Ok(rho)
}

fn preset_state(preset: StatePreset) -> Hermitian9 {
    match preset {
        StatePreset::Omega => {
            let mut v = CVector9::zeros();
            for i in 0..3 {
                v[4 * i] = Complex64::new(1.0, 0.0);
            }
            Hermitian9::pure_state(&v).expect("nonzero vector")
        }
        StatePreset::Mixed => Hermitian9::maximally_mixed(),
    }
}

#[derive(Serialize)]
struct WitnessOutput {
    params: MapParams,
    value: f64,
}

fn cmd_witness(
    map: &MapArgs,
    state: Option<&Path>,
    preset: Option<StatePreset>,
    tol: &ToleranceConfig,
    out: Option<&Path>,
) -> Outcome {
    let map = build_map(map, tol)?;
    let rho = match (state, preset) {
        (Some(path), _) => load_state(path, tol)?,
        (None, Some(p)) => preset_state(p),
        (None, None) => return Err(Failure::new(EXIT_USAGE, "give --state or --preset")),
    };
    let value = map.witness_value(&rho, tol)?;
    emit(out, &WitnessOutput { params: map.params(), value })?;
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    let tol = tolerance(&cli.tol)?;
    let out = cli.output.as_deref();
    match cli.command {
        Command::Classify { map, resolution } => cmd_classify(&map, resolution, &tol, out),
        Command::Optimality { map } => cmd_optimality(&map, &tol, out),
        Command::Scan { mode, a, b, c, radius, n, format } => cmd_scan(mode, (a, b, c), radius, n, format, &tol, out),
        Command::OptimalPoints { b, c, case } => cmd_optimal_points(b, c, case, &tol, out),
        Command::Gradcheck { map, h, max_deviation } => cmd_gradcheck(&map, h, max_deviation, &tol, out),
        Command::Witness { map, state, preset } => cmd_witness(&map, state.as_deref(), preset, &tol, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let _ = writeln!(std::io::stderr(), "error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
