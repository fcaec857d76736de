//! Argument parsing and subcommand dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use spacelike_core::capillary::BoundaryComponent;
use spacelike_core::catalog::{self, Expectation};
use spacelike_core::lines::{trace_residual, trace_through, Family, StopReason, TraceConfig};
use spacelike_core::{Param, PatchDomain, Tolerances};

use crate::analysis::{self, Prepared, Settings};
use crate::export;
use crate::report::{self, SurfaceInfo};
use crate::spec::{SpecError, SurfaceSpec};

/// Exit status for a completed run.
pub const EXIT_OK: i32 = 0;
/// Usage, input or IO failure.
pub const EXIT_ERROR: i32 = 1;
/// The analysis ran but a verification failed.
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "spacelike", version, about = "Analyse spacelike surfaces in Lorentz-Minkowski space")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Grid resolution per axis (default 129, or the spec's grid=)
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Use centered finite differences with this step
    #[arg(long, global = true)]
    pub fd_step: Option<f64>,
    #[arg(long, global = true)]
    pub tol_isothermal: Option<f64>,
    #[arg(long, global = true)]
    pub tol_cr: Option<f64>,
    #[arg(long, global = true)]
    pub tol_umbilic: Option<f64>,
    #[arg(long, global = true)]
    pub tol_index: Option<f64>,
    #[arg(long, global = true)]
    pub tol_capillary_spread: Option<f64>,
    #[arg(long, global = true)]
    pub tol_joachimsthal: Option<f64>,
    #[arg(long, global = true)]
    pub tol_support: Option<f64>,
    #[arg(long, global = true)]
    pub tol_trihedra: Option<f64>,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Include per-stage wall-clock timings in the report
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List or build catalog surfaces
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Full analysis with checks against the expected values
    Analyze { spec: String },
    /// Umbilic points and their rotation indices
    Umbilics { spec: String },
    /// Singularities of the curvature-line field and the index sum
    Index { spec: String },
    /// Contact-angle verification on the supported boundary edges
    Capillary { spec: String },
    /// Integrate lines of curvature
    Trace(TraceArgs),
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Build { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    First,
    Second,
    Both,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    pub spec: String,
    #[arg(long, value_enum, default_value_t = FamilyArg::Both)]
    pub family: FamilyArg,
    /// Number of seeds along the parameter-domain diagonal
    #[arg(long, default_value_t = 10)]
    pub starts: usize,
    /// Explicit seed `u,v`; may be repeated and replaces the diagonal seeds
    #[arg(long, value_parser = parse_param, allow_hyphen_values = true)]
    pub start: Vec<Param>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn parse_param(s: &str) -> Result<Param, String> {
    let (u, v) = s.split_once(',').ok_or("expected u,v")?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x}: {e}"));
    Ok(Param::new(num(u)?, num(v)?))
}

impl GlobalArgs {
    pub fn settings(&self) -> Settings {
        let d = Tolerances::default();
        Settings {
            grid: self.grid,
            fd_step: self.fd_step,
            tolerances: Tolerances {
                isothermal: self.tol_isothermal.unwrap_or(d.isothermal),
                cr: self.tol_cr.unwrap_or(d.cr),
                umbilic: self.tol_umbilic.unwrap_or(d.umbilic),
                index: self.tol_index.unwrap_or(d.index),
                capillary_spread: self.tol_capillary_spread.unwrap_or(d.capillary_spread),
                joachimsthal: self.tol_joachimsthal.unwrap_or(d.joachimsthal),
                support_membership: self.tol_support.unwrap_or(d.support_membership),
                trihedra: self.tol_trihedra.unwrap_or(d.trihedra),
                ..d
            },
            timings: self.timings,
        }
    }
}

/// A failed run: message for standard error and exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn error(message: impl ToString) -> Self {
        Self {
            code: EXIT_ERROR,
            message: message.to_string(),
        }
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Self::error(e)
    }
}

impl From<spacelike_core::GeometryError> for Failure {
    fn from(e: spacelike_core::GeometryError) -> Self {
        Self::error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::error(e)
    }
}

/// Output of a subcommand: the rendered text and the exit status.
struct Outcome {
    text: String,
    code: i32,
}

fn verdict_code(passed: bool) -> i32 {
    if passed {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

#[derive(Serialize, Deserialize)]
struct CatalogListing {
    surfaces: Vec<CatalogItem>,
}

#[derive(Serialize, Deserialize)]
struct CatalogItem {
    name: String,
    description: String,
}

#[derive(Serialize)]
struct CatalogBuild {
    name: &'static str,
    domain: PatchDomain,
    derivatives: spacelike_core::DerivativeMode,
    edges: Vec<&'static str>,
    supports: Vec<BoundaryComponent>,
    expected: Vec<Expectation>,
}

#[derive(Serialize, Deserialize)]
struct TraceSummary {
    id: usize,
    family: Family,
    start: Param,
    end: Param,
    points: usize,
    length: f64,
    stop: StopReason,
    residual: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct TraceOutput {
    surface: SurfaceInfo,
    traces: Vec<TraceSummary>,
}

fn render<T: Serialize>(value: &T, format: Format, csv: impl FnOnce() -> Option<String>) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(report::to_json(value)),
        Format::Csv => csv().ok_or_else(|| Failure::error("--format csv is not available for this command")),
    }
}

fn load(spec: &str, settings: &Settings) -> Result<Prepared, Failure> {
    Ok(Prepared::new(&SurfaceSpec::load(spec)?, settings)?)
}

fn diagonal_seeds(domain: &PatchDomain, count: usize) -> Vec<Param> {
    let (a, b, c, d) = domain.bounding_box();
    (0..count)
        .map(|k| {
            let t = (k as f64 + 0.5) / count as f64;
            Param::new(a + t * (b - a), c + t * (d - c))
        })
        .filter(|p| domain.contains(*p, 0.0))
        .collect()
}

fn trace_command(args: &TraceArgs, settings: &Settings) -> Result<Outcome, Failure> {
    let p = load(&args.spec, settings)?;
    let patch = &p.entry.patch;
    let seeds = if args.start.is_empty() {
        if args.starts == 0 {
            return Err(Failure::error("--starts must be positive"));
        }
        diagonal_seeds(patch.domain(), args.starts)
    } else {
        args.start.clone()
    };
    let families: &[Family] = match args.family {
        FamilyArg::First => &[Family::First],
        FamilyArg::Second => &[Family::Second],
        FamilyArg::Both => &[Family::First, Family::Second],
    };
    let config = TraceConfig {
        umbilic: p.tolerances.umbilic.max(TraceConfig::for_domain(patch.domain()).umbilic),
        ..TraceConfig::for_domain(patch.domain())
    };
    let mut traces = Vec::new();
    for &family in families {
        for &seed in &seeds {
            traces.push(trace_through(patch, seed, family, &config)?);
        }
    }
    if traces.is_empty() {
        return Err(Failure::error("no seed lies inside the domain"));
    }
    let summary = TraceOutput {
        surface: p.info.clone(),
        traces: traces
            .iter()
            .enumerate()
            .map(|(id, t)| TraceSummary {
                id,
                family: t.family,
                start: t.start(),
                end: t.end(),
                points: t.points.len(),
                length: t.length,
                stop: t.stop,
                residual: trace_residual(patch, t).ok(),
            })
            .collect(),
    };
    if let Some(path) = &args.svg {
        export::write_file(path, export::traces_svg(&traces))?;
    }
    if let Some(path) = &args.csv {
        export::write_file(path, export::traces_csv(&traces))?;
    }
    let text = render(&summary, Format::Json, || None)?;
    Ok(Outcome { text, code: EXIT_OK })
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let settings = cli.global.settings();
    let format = cli.global.format;
    match &cli.command {
        Command::Catalog { action: CatalogAction::List } => {
            let listing = CatalogListing {
                surfaces: catalog::NAMES
                    .iter()
                    .map(|n| CatalogItem {
                        name: (*n).to_owned(),
                        description: catalog::describe(n).unwrap_or_default().to_owned(),
                    })
                    .collect(),
            };
            let text = render(&listing, format, || {
                Some(listing.surfaces.iter().fold(String::from("name,description\n"), |acc, s| acc + &s.name + "," + &s.description + "\n"))
            })?;
            Ok(Outcome { text, code: EXIT_OK })
        }
        Command::Catalog {
            action: CatalogAction::Build { name },
        } => {
            let entry = SurfaceSpec::named(name).build()?;
            let built = CatalogBuild {
                name: entry.name,
                domain: *entry.patch.domain(),
                derivatives: entry.patch.mode(),
                edges: entry.patch.domain().edge_names(),
                supports: entry.supports.clone(),
                expected: entry.expected.clone(),
            };
            Ok(Outcome {
                text: render(&built, format, || None)?,
                code: EXIT_OK,
            })
        }
        Command::Analyze { spec } => {
            let p = load(spec, &settings)?;
            let r = analysis::analyze(&p);
            let text = render(&r, format, || Some(report::to_csv(&r.umbilics, &r.capillary)))?;
            Ok(Outcome {
                text,
                code: verdict_code(r.passed()),
            })
        }
        Command::Umbilics { spec } => {
            let p = load(spec, &settings)?;
            let r = analysis::umbilics(&p)?;
            let text = render(&r, format, || Some(report::to_csv(&r.umbilics, &[])))?;
            Ok(Outcome { text, code: EXIT_OK })
        }
        Command::Index { spec } => {
            let p = load(spec, &settings)?;
            let r = analysis::index(&p)?;
            let text = render(&r, format, || Some(report::to_csv(&r.umbilics, &[])))?;
            Ok(Outcome {
                text,
                code: verdict_code(r.consistent),
            })
        }
        Command::Capillary { spec } => {
            let p = load(spec, &settings)?;
            if p.entry.supports.is_empty() {
                return Err(Failure::error(format!("{} has no support surfaces; add supports.<edge>= to a spec file", p.info.name)));
            }
            let r = analysis::capillary(&p)?;
            let text = render(&r, format, || Some(report::to_csv(&[], &r.capillary)))?;
            Ok(Outcome {
                text,
                code: verdict_code(r.verdict == "pass"),
            })
        }
        Command::Trace(args) => trace_command(args, &settings),
    }
}

/// Run the CLI on `argv` (including the program name), writing the report to
/// `stdout` or `--out`, diagnostics to `stderr`, and return the exit status.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            let written = match &cli.global.out {
                Some(path) => std::fs::write(path, &outcome.text),
                None => stdout.write_all(outcome.text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_ERROR;
            }
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("spacelike").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn catalog_list() {
        let (code, out, _) = run_args(&["catalog", "list"]);
        assert_eq!(code, 0);
        let listing: CatalogListing = serde_json::from_str(&out).unwrap();
        assert!(listing.surfaces.len() >= 5);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["frobnicate"]).0, 1);
        assert_eq!(run_args(&["analyze"]).0, 1);
        assert_eq!(run_args(&["analyze", "no-such-surface"]).0, 1);
        assert_eq!(run_args(&["--grid", "x", "catalog", "list"]).0, 1);
        assert_eq!(run_args(&["catalog", "build", "torus"]).0, 1);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("analyze"));
    }

    #[test]
    fn tolerance_overrides() {
        let cli = Cli::try_parse_from(["spacelike", "--tol-cr", "0.5", "index", "planar-square", "--tol-trihedra", "1e-3"]).unwrap();
        let s = cli.global.settings();
        assert_eq!(s.tolerances.cr, 0.5);
        assert_eq!(s.tolerances.trihedra, 1e-3);
        assert_eq!(s.tolerances.umbilic, Tolerances::default().umbilic);
    }

    #[test]
    fn capillary_without_supports() {
        let (code, _, err) = run_args(&["capillary", "planar-square"]);
        assert_eq!(code, 1);
        assert!(err.contains("no support"));
    }

    #[test]
    fn parse_seed() {
        assert_eq!(parse_param("0.5,-1").unwrap(), Param::new(0.5, -1.0));
        assert!(parse_param("0.5").is_err());
    }

    #[test]
    fn diagonal_seeds_stay_inside() {
        let disk = PatchDomain::disk(1.0).unwrap();
        let seeds = diagonal_seeds(&disk, 10);
        assert!(!seeds.is_empty() && seeds.len() < 10);
        assert_eq!(diagonal_seeds(&PatchDomain::rectangle(0.0, 1.0, 0.0, 1.0).unwrap(), 10).len(), 10);
    }
}
