//! The `lagindex` command-line driver.

pub mod scene;
pub mod svg;

use crate::acceptance::{grassmann_suite, run_all, CriterionResult, GrassmannReport};
use crate::fibers::{
    classify_fiber, fiber_indices, FiberClass, FiberError, FiberIndices, FiberSpec,
};
use crate::framing::{plumbed_sphere_mu2_at, zero_section_oracles};
use crate::index::{regular_point, relative_y, y_index, IndexError, IndexReport, LoopPoint};
use crate::profile::{Closure, ProfileError};
use crate::surface::degree::DegreeOracles;
use crate::surface::{OrbitSurface, SurfaceError};
use crate::surgery::{
    an_relative_table, an_torus_sequence, apply_surgery, candidate_disks, relative_polarity,
    surgery_reference, LaDiskCandidate, Polarity, SurgeryError, SurgeryLedger,
};
use clap::{Args, Parser, Subcommand};
use scene::{emit_scene, parse_scene, Op, Scene, SceneError, SurfaceSpec};
use serde::Serialize;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

pub const SCHEMA: &str = "v1";

#[derive(Parser, Debug)]
#[command(
    name = "lagindex",
    version,
    about = "mu2 and y indices of Lagrangian surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timing in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// mu2, y and the degree oracles of a scene's surface.
    Index {
        scene: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// la-disk candidates and the surgery on the first stable one.
    Surgery {
        scene: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Indices of the fiber {G = a, H = b}.
    Fiber {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Degree of the PLG map of the zero section of T*S^2.
    TssDegree {
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the disk-chart figure.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// y of K double Dehn twists relative to the untwisted surface.
    Twist {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value = "+", value_parser = ["+", "-"], allow_hyphen_values = true)]
        sign: String,
        #[command(flatten)]
        output: Output,
    },
    /// y(T_k) along the A_n chain of tori.
    AnTori {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// The seeded Grassmannian property sweep.
    GrassmannCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// SVG figure of a scene.
    Plot {
        scene: PathBuf,
        /// SVG path; defaults to the scene's `out svg=`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the acceptance suite.
    Verify {
        /// Also write the results as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Scene(SceneError::Parse { .. }) => "scene_parse",
            CliError::Scene(SceneError::Validation { .. }) => "scene_validation",
            CliError::Io { .. } => "io",
            CliError::Profile(_) => "profile",
            CliError::Surface(_) => "surface",
            CliError::Index(_) => "index",
            CliError::Surgery(_) => "surgery",
            CliError::Fiber(_) => "fiber",
            CliError::Failed(_) => "check_failed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Scene(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    schema: &'static str,
    tool_version: &'static str,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    scene: Option<String>,
    result: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_seconds: Option<f64>,
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    }
}

fn read_scene(path: &Path) -> Result<Scene, CliError> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).map_err(|e| io_err(path, e))?
    } else {
        std::fs::read_to_string(path).map_err(|e| io_err(path, e))?
    };
    Ok(parse_scene(&text)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Serializes the report; the text goes to `out` or is returned for stdout.
fn emit<T: Serialize>(
    command: &str,
    scene: Option<&Scene>,
    result: T,
    output: &Output,
    start: Instant,
) -> Result<Option<String>, CliError> {
    let out = output
        .out
        .clone()
        .or_else(|| scene.and_then(|s| s.json_out.as_ref().map(PathBuf::from)));
    let report = Report {
        schema: SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        command,
        scene: scene.map(emit_scene),
        result,
        timing_seconds: output.timing.then(|| start.elapsed().as_secs_f64()),
    };
    let text = serde_json::to_string_pretty(&report).expect("reports are plain data") + "\n";
    match out {
        Some(p) => write_file(&p, &text).map(|_| None),
        None => Ok(Some(text)),
    }
}

#[derive(Serialize)]
struct LoopSummary {
    arcs: usize,
    closure: Closure,
    samples_per_arc: usize,
}

#[derive(Serialize)]
struct IndexResult {
    profile: LoopSummary,
    reference_point: LoopPoint,
    index: IndexReport,
    mu2_formula: i64,
    oracles: DegreeOracles,
    oracle_rows_per_arc: usize,
    oracle_cols: usize,
    ledger: SurgeryLedger,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum IndexOutcome {
    Orbit(Box<IndexResult>),
    Fiber(FiberResult),
}

#[derive(Serialize)]
struct FiberResult {
    a: f64,
    b: f64,
    class: FiberClass,
    indices: FiberIndices,
}

fn orbit_surface(scene: &Scene) -> Result<OrbitSurface, CliError> {
    match scene.profile()? {
        Some(l) => Ok(OrbitSurface::new(&l)?),
        None => Err(CliError::Usage(
            "a fiber with a != 0 has no profile loop".into(),
        )),
    }
}

fn reference(scene: &Scene, s: &OrbitSurface) -> Result<LoopPoint, CliError> {
    match scene.refpoint {
        Some(q) if q.arc >= s.profile.n_arcs() => Err(SceneError::Validation {
            keys: vec!["refpoint".into()],
            msg: format!(
                "arc {} does not exist (loop has {})",
                q.arc,
                s.profile.n_arcs()
            ),
        }
        .into()),
        Some(q) => Ok(q),
        None => Ok(regular_point(s)),
    }
}

fn index_result(scene: &Scene) -> Result<(IndexOutcome, Option<OrbitSurface>), CliError> {
    if let SurfaceSpec::Fiber(f) = scene.surface {
        if f.a != 0.0 {
            return Ok((IndexOutcome::Fiber(fiber_result(f)?), None));
        }
    }
    let s = orbit_surface(scene)?;
    let q = reference(scene, &s)?;
    let index = y_index(&s, q)?;
    let rows = (scene.rows / s.profile.n_arcs()).max(1);
    let oracles = s.degree_oracles(None, rows, scene.cols, scene.seed);
    let res = IndexResult {
        profile: LoopSummary {
            arcs: s.profile.n_arcs(),
            closure: s.profile.closure,
            samples_per_arc: s.profile.arcs[0].n_samples(),
        },
        reference_point: q,
        mu2_formula: s.mu2_formula()?,
        ledger: SurgeryLedger::from_surface(&s, index.reference_domain)?,
        index,
        oracles,
        oracle_rows_per_arc: rows,
        oracle_cols: scene.cols,
    };
    Ok((IndexOutcome::Orbit(Box::new(res)), Some(s)))
}

fn fiber_result(f: FiberSpec) -> Result<FiberResult, CliError> {
    Ok(FiberResult {
        a: f.a,
        b: f.b,
        class: classify_fiber(&f)?,
        indices: fiber_indices(&f)?,
    })
}

#[derive(Serialize)]
struct SurgeryResult {
    candidates: Vec<LaDiskCandidate>,
    chosen: LaDiskCandidate,
    reference_point: [f64; 2],
    relative_y: i64,
    mu2_before: i64,
    mu2_after: i64,
    dual: LaDiskCandidate,
    dual_polarity: Polarity,
    dual_restores_input: bool,
    profile_after: LoopSummary,
}

fn surgery_result(scene: &Scene) -> Result<(SurgeryResult, OrbitSurface), CliError> {
    let s = orbit_surface(scene)?;
    let candidates = candidate_disks(&s);
    let chosen = *candidates
        .iter()
        .find(|c| c.stable)
        .ok_or_else(|| SurgeryError::Obstructed("no stable la-disk candidate".into()))?;
    let out = apply_surgery(&s, &chosen)?;
    let q = surgery_reference(&s, &chosen)
        .ok_or_else(|| SurgeryError::Obstructed("no regular point away from the disk".into()))?;
    let dy = relative_y(&out.surface, &s, q)?;
    let back = apply_surgery(&out.surface, &out.dual)?;
    let res = SurgeryResult {
        chosen,
        reference_point: q,
        relative_y: dy,
        mu2_before: s.mu2_formula()?,
        mu2_after: out.surface.mu2_formula()?,
        dual: out.dual,
        dual_polarity: relative_polarity(&chosen, &out.dual),
        dual_restores_input: back.surface.profile == s.profile && samples_equal(&back.surface, &s),
        profile_after: LoopSummary {
            arcs: out.surface.profile.n_arcs(),
            closure: out.surface.profile.closure,
            samples_per_arc: out.surface.profile.arcs[0].n_samples(),
        },
        candidates,
    };
    Ok((res, out.surface))
}

fn samples_equal(a: &OrbitSurface, b: &OrbitSurface) -> bool {
    a.profile.arcs.iter().zip(&b.profile.arcs).all(|(x, y)| {
        x.samples.len() == y.samples.len()
            && x.samples
                .iter()
                .zip(&y.samples)
                .all(|(p, q)| p[0].to_bits() == q[0].to_bits() && p[1].to_bits() == q[1].to_bits())
    })
}

fn scene_title(scene: &Scene) -> String {
    emit_scene(scene).lines().next().unwrap_or("").to_string()
}

fn scene_svg(scene: &Scene) -> Result<String, CliError> {
    let title = scene_title(scene);
    if let SurfaceSpec::Fiber(f) = scene.surface {
        if f.a != 0.0 {
            return Ok(svg::reduced_svg(&title, &f)?);
        }
    }
    let s = orbit_surface(scene)?;
    let q = reference(scene, &s)?;
    let index = y_index(&s, q).ok();
    let candidates = candidate_disks(&s);
    let p = s.profile.arcs[q.arc].position(q.s);
    Ok(svg::profile_svg(
        &title,
        &s,
        index.as_ref(),
        &candidates,
        Some(p),
    ))
}

/// Writes the scene's figure when it asks for one.
fn maybe_plot(scene: &Scene) -> Result<(), CliError> {
    if let (true, Some(path)) = (scene.ops.contains(&Op::Plot), &scene.svg_out) {
        write_file(Path::new(path), &scene_svg(scene)?)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TssResult {
    grid: usize,
    seed: u64,
    oracles: DegreeOracles,
    jacobian_residual: f64,
    mu2: i64,
    /// `(j, mu2)` for the plumbed spheres `S_j`.
    plumbed_sphere_mu2: Vec<(usize, i64)>,
}

#[derive(Serialize)]
struct TwistResult {
    n: i64,
    sign: i64,
    y_relative: i64,
    mu2_before: i64,
    mu2_after: i64,
    ledger: SurgeryLedger,
}

#[derive(Serialize)]
struct AnTorus {
    k: i64,
    y: i64,
}

#[derive(Serialize)]
struct AnPair {
    k: i64,
    j: i64,
    y: i64,
}

#[derive(Serialize)]
struct AnResult {
    n: usize,
    tori: Vec<AnTorus>,
    relative: Vec<AnPair>,
}

#[derive(Serialize)]
struct GrassmannResult {
    passed: bool,
    report: GrassmannReport,
}

#[derive(Serialize)]
struct PlotResult {
    path: String,
    bytes: usize,
}

#[derive(Serialize)]
struct VerifyResult {
    passed: bool,
    criteria: Vec<CriterionResult>,
}

/// Runs one command; returns the text for stdout.
pub fn execute(cli: Cli) -> Result<Option<String>, CliError> {
    let start = Instant::now();
    match cli.command {
        Command::Index { scene, output } => {
            let scene = read_scene(&scene)?;
            let (res, _) = index_result(&scene)?;
            maybe_plot(&scene)?;
            emit("index", Some(&scene), res, &output, start)
        }
        Command::Surgery { scene, output } => {
            let scene = read_scene(&scene)?;
            let (res, after) = surgery_result(&scene)?;
            if let (true, Some(path)) = (scene.ops.contains(&Op::Plot), &scene.svg_out) {
                let idx = y_index(&after, regular_point(&after)).ok();
                let text = svg::profile_svg(
                    &format!("{} after surgery", scene_title(&scene)),
                    &after,
                    idx.as_ref(),
                    &[res.dual],
                    Some(res.reference_point),
                );
                write_file(Path::new(path), &text)?;
            }
            emit("surgery", Some(&scene), res, &output, start)
        }
        Command::Fiber { a, b, output } => {
            let f = FiberSpec::new(a, b);
            let res = fiber_result(f)?;
            emit("fiber", None, res, &output, start)
        }
        Command::TssDegree {
            grid,
            seed,
            svg,
            output,
        } => {
            if grid < 8 {
                return Err(CliError::Usage("--grid must be at least 8".into()));
            }
            let oracles = zero_section_oracles(grid, seed);
            let rounded = oracles.jacobian.round();
            let res = TssResult {
                grid,
                seed,
                jacobian_residual: (oracles.jacobian - rounded).abs(),
                mu2: rounded as i64,
                oracles,
                plumbed_sphere_mu2: (1..=4).map(|j| (j, plumbed_sphere_mu2_at(j))).collect(),
            };
            if let Some(p) = svg {
                write_file(
                    &p,
                    &svg::disk_chart_svg(
                        "T*S2 zero section",
                        64,
                        &[PI / 8.0, PI / 4.0, 3.0 * PI / 8.0],
                    ),
                )?;
            }
            emit("tss-degree", None, res, &output, start)
        }
        Command::Twist { n, sign, output } => {
            let sign = if sign == "-" { -1 } else { 1 };
            let base = SurgeryLedger::base("T*S2");
            let twisted = base.twists(sign * n)?;
            let res = TwistResult {
                n,
                sign,
                y_relative: twisted.y() - base.y(),
                mu2_before: base.mu2(),
                mu2_after: twisted.mu2(),
                ledger: twisted,
            };
            emit("twist", None, res, &output, start)
        }
        Command::AnTori { n, output } => {
            let res = AnResult {
                n,
                tori: an_torus_sequence(n)
                    .into_iter()
                    .map(|(k, y)| AnTorus { k, y })
                    .collect(),
                relative: an_relative_table(n)
                    .into_iter()
                    .map(|(k, j, y)| AnPair { k, j, y })
                    .collect(),
            };
            emit("an-tori", None, res, &output, start)
        }
        Command::GrassmannCheck {
            seed,
            samples,
            output,
        } => {
            let r = grassmann_suite(seed, samples);
            let passed = r.lagrangian_residual_max < 1e-9
                && r.complex_residual_min > 0.05
                && r.kt_residual_max < 1e-9
                && r.lambda_phase_error_max < 1e-6
                && r.c_equivariance_max < 1e-8
                && r.g_equivariance_max < 1e-8
                && r.m_anti_symplectic
                && r.m_involutive;
            let res = GrassmannResult { passed, report: r };
            let text = emit("grassmann-check", None, res, &output, start)?;
            if !passed {
                if let Some(t) = text {
                    print!("{t}");
                }
                return Err(CliError::Failed(
                    "Grassmannian property check failed".into(),
                ));
            }
            Ok(text)
        }
        Command::Plot { scene, out } => {
            let scene = read_scene(&scene)?;
            let path = out
                .or_else(|| scene.svg_out.as_ref().map(PathBuf::from))
                .ok_or_else(|| {
                    CliError::Usage("plot needs --out or `out svg=` in the scene".into())
                })?;
            let text = scene_svg(&scene)?;
            write_file(&path, &text)?;
            let res = PlotResult {
                path: path.display().to_string(),
                bytes: text.len(),
            };
            emit(
                "plot",
                Some(&scene),
                res,
                &Output {
                    out: None,
                    timing: false,
                },
                start,
            )
        }
        Command::Verify { out } => {
            let criteria = run_all();
            let mut table = String::new();
            for c in &criteria {
                table.push_str(&c.line());
                table.push('\n');
            }
            let passed = criteria.iter().all(|c| c.passed);
            table.push_str(if passed {
                "all criteria passed\n"
            } else {
                "some criteria FAILED\n"
            });
            if let Some(p) = out {
                let res = VerifyResult { passed, criteria };
                emit(
                    "verify",
                    None,
                    res,
                    &Output {
                        out: Some(p),
                        timing: false,
                    },
                    start,
                )?;
            }
            if !passed {
                print!("{table}");
                return Err(CliError::Failed("acceptance suite failed".into()));
            }
            Ok(Some(table))
        }
    }
}

/// Parses `args` and runs the command, returning the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(text) => {
            if let Some(t) = text {
                print!("{t}");
            }
            0
        }
        Err(e) => {
            let body = serde_json::json!({
                "schema": SCHEMA,
                "error": { "code": e.code(), "message": e.to_string() },
            });
            eprintln!("{body}");
            e.exit_code()
        }
    }
}
