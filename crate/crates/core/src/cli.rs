//! Command-line front end.
//!
//! [`run_with`] parses a command line, runs one command against the given
//! writers and returns the process exit code: [`EXIT_OK`], [`EXIT_INPUT`]
//! for malformed input or violated preconditions, [`EXIT_FAILED`] when a
//! verification does not hold. Errors are reported as one line
//! `error kind=<Kind> message=<json string>` on the error stream.

use std::f64::consts::FRAC_PI_4;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{format_table, prop_end_ball_bound, reference_table, table_csv, BoundsReport};
use crate::error::{Error, Result};
use crate::format::g9;
use crate::functionals::{
    average_f_identity_check_with, ball_area_formula_with, f_and_g, find_rich_disk_with,
    FunctionalOptions,
};
use crate::sampling::{run_chunks_from, AreaSampler, MC_CHUNKS};
use crate::surface::{
    build_surface, hexagonal_torus, make_square_klein_bottle, make_staircase_surface,
    make_two_cone_decagon, square_torus, ConeSurface, SurfaceDescription, SurfacePoint,
    SystoleProvenance,
};
use crate::systole::{enumerate_systole, systole, validate_witness, SystoleStatus, Witness};
use crate::unfold::{ball_area_mc_unchecked, point_near_cone, SaddleCache};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cone-systole",
    version,
    about = "Systolic-area checks on flat cone surfaces"
)]
struct Cli {
    /// Write a JSON run manifest (including wall-clock time) to this path.
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a surface and print its invariants.
    Validate(SourceArgs),
    /// Run the four curvature and ball-area checks.
    Verify(VerifyArgs),
    /// CSV of ball area against radius.
    BallGrowth(GrowthArgs),
    /// Certified systole by enumeration.
    Systole(SystoleArgs),
    /// Reference table of systolic areas.
    Table(TableArgs),
    /// Closed-form bounds for a topology.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Builtin {
    TorusSquare,
    TorusHex,
    KleinSquare,
    Staircase,
    TwoConeDecagon,
}

#[derive(Debug, Clone, Args)]
struct SourceArgs {
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    /// Genus of the staircase surface.
    #[arg(long)]
    genus: Option<i64>,
    /// Surface description in JSON.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    r: f64,
    /// Monte Carlo samples for the integral and ball-area checks.
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Basepoint of the ball-area check: CHART:X:Y or cone-offset:DIST:ANGLE.
    #[arg(long)]
    point: Option<String>,
    /// Points tested for F_r ≥ G_r.
    #[arg(long, default_value_t = 1000)]
    fb_points: usize,
    /// Initial sample count of the rich-disk search.
    #[arg(long, default_value_t = 1000)]
    rich_n: usize,
    /// Monte Carlo tolerance in standard errors.
    #[arg(long, default_value_t = 3.0)]
    mc_tol: f64,
    /// Tolerance of deterministic comparisons.
    #[arg(long, default_value_t = 1e-9)]
    exact_tol: f64,
    /// Allow r at or above half the systole.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct GrowthArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    point: Option<String>,
    #[arg(long)]
    r_max: f64,
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct SystoleArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Enumeration cutoff; chosen automatically when absent.
    #[arg(long)]
    cutoff: Option<f64>,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Also write the table as CSV ("-" for standard output).
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with = "genus")]
    chi: Option<i64>,
    /// Orientable genus; implies chi = 2 - 2g.
    #[arg(long)]
    genus: Option<i64>,
    #[arg(long)]
    area: Option<f64>,
    #[arg(long)]
    systole: Option<f64>,
    /// Radius for the ball-area bound; defaults to half the systole.
    #[arg(long)]
    r: Option<f64>,
}

/// Record of one run. Re-running the recorded command reproduces every
/// number except `wall_clock_seconds`.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub source: Option<SourceManifest>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tolerances: Option<Tolerances>,
    pub checks: Vec<CheckOutcome>,
    pub exit_code: i32,
    pub wall_clock_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SourceManifest {
    pub builtin: Option<String>,
    pub genus: Option<i64>,
    pub file: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    pub mc_stderr_multiple: f64,
    pub exact: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub estimate: Option<f64>,
    pub exact: Option<f64>,
    pub stderr: Option<f64>,
}

/// Runs the process command line against stdout and stderr.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let first = e.to_string();
                    let first = first
                        .lines()
                        .next()
                        .unwrap_or("")
                        .trim_start_matches("error: ");
                    error_line(err, "Usage", first);
                    EXIT_INPUT
                }
            };
        }
    };
    let start = Instant::now();
    let mut manifest = RunManifest {
        command: command_name(&cli.command).into(),
        args: args
            .iter()
            .skip(1)
            .map(|a| a.to_string_lossy().into_owned())
            .collect(),
        source: None,
        seed: None,
        samples: None,
        tolerances: None,
        checks: Vec::new(),
        exit_code: EXIT_OK,
        wall_clock_seconds: 0.0,
    };
    let code = match execute(&cli.command, out, &mut manifest) {
        Ok(code) => code,
        Err(e) => {
            error_line(err, e.kind(), &e.to_string());
            EXIT_INPUT
        }
    };
    let _ = out.flush();
    manifest.exit_code = code;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    if let Some(path) = &cli.manifest {
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        if let Err(e) = std::fs::write(path, text + "\n") {
            error_line(err, "Io", &format!("cannot write {}: {e}", path.display()));
            return EXIT_INPUT;
        }
    }
    code
}

fn error_line(err: &mut dyn Write, kind: &str, message: &str) {
    let msg = serde_json::to_string(message).expect("string serializes");
    let _ = writeln!(err, "error kind={kind} message={msg}");
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate(_) => "validate",
        Command::Verify(_) => "verify",
        Command::BallGrowth(_) => "ball-growth",
        Command::Systole(_) => "systole",
        Command::Table(_) => "table",
        Command::Bounds(_) => "bounds",
    }
}

fn execute(c: &Command, out: &mut dyn Write, m: &mut RunManifest) -> Result<i32> {
    let mut text = String::new();
    let code = match c {
        Command::Validate(a) => cmd_validate(a, &mut text, m)?,
        Command::Verify(a) => cmd_verify(a, &mut text, m)?,
        Command::BallGrowth(a) => cmd_ball_growth(a, &mut text, m)?,
        Command::Systole(a) => cmd_systole(a, &mut text, m)?,
        Command::Table(a) => cmd_table(a, &mut text)?,
        Command::Bounds(a) => cmd_bounds(a, &mut text)?,
    };
    out.write_all(text.as_bytes())
        .map_err(io_error("standard output"))?;
    Ok(code)
}

fn io_error(what: &str) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |e| Error::Io(format!("cannot write {what}: {e}"))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(io_error(&path.display().to_string()))
}

macro_rules! line {
    ($buf:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($buf, $($arg)*);
    }};
}

impl SourceArgs {
    fn manifest(&self) -> SourceManifest {
        SourceManifest {
            builtin: self
                .builtin
                .and_then(|b| b.to_possible_value())
                .map(|v| v.get_name().to_string()),
            genus: self.genus,
            file: self.file.as_ref().map(|p| p.display().to_string()),
        }
    }

    fn label(&self) -> String {
        match (&self.builtin, &self.file) {
            (Some(b), _) => {
                let name = b
                    .to_possible_value()
                    .expect("not skipped")
                    .get_name()
                    .to_string();
                match self.genus {
                    Some(g) if *b == Builtin::Staircase => format!("{name} genus={g}"),
                    _ => name,
                }
            }
            (None, Some(f)) => format!("file {}", f.display()),
            (None, None) => String::new(),
        }
    }

    fn load(&self) -> Result<ConeSurface> {
        match (self.builtin, &self.file) {
            (Some(_), Some(_)) => Err(Error::InvalidArgument(
                "--builtin and --file are exclusive".into(),
            )),
            (None, None) => Err(Error::InvalidArgument(
                "one of --builtin or --file is required".into(),
            )),
            (Some(b), None) => {
                if self.genus.is_some() && b != Builtin::Staircase {
                    return Err(Error::InvalidArgument(
                        "--genus applies to the staircase surface only".into(),
                    ));
                }
                match b {
                    Builtin::TorusSquare => Ok(square_torus()),
                    Builtin::TorusHex => Ok(hexagonal_torus()),
                    Builtin::KleinSquare => make_square_klein_bottle(1.0, 1.0),
                    Builtin::Staircase => {
                        let g = self.genus.ok_or_else(|| {
                            Error::InvalidArgument("--genus is required for staircase".into())
                        })?;
                        make_staircase_surface(g)
                    }
                    Builtin::TwoConeDecagon => make_two_cone_decagon(),
                }
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
                let surface = build_surface(SurfaceDescription::from_json(&text)?)?;
                // A certified systole lets radius checks apply to file input.
                if surface.is_nonpositively_curved() {
                    if let Ok(rep) = systole(&surface) {
                        if rep.status != SystoleStatus::HintOnly {
                            return Ok(
                                surface.with_systole_hint(rep.value, SystoleProvenance::Certified)
                            );
                        }
                    }
                }
                Ok(surface)
            }
        }
    }
}

/// Basepoint syntax: `CHART:X:Y` or `cone-offset:DIST:ANGLE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointSpec {
    Chart { chart: usize, x: f64, y: f64 },
    ConeOffset { dist: f64, angle: f64 },
}

impl std::str::FromStr for PointSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Parse(format!(
                "invalid point {s:?}; expected CHART:X:Y or cone-offset:DIST:ANGLE"
            ))
        };
        let parts: Vec<&str> = s.split(':').collect();
        let [head, a, b] = parts[..] else {
            return Err(bad());
        };
        let a: f64 = a.trim().parse().map_err(|_| bad())?;
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        if !a.is_finite() || !b.is_finite() {
            return Err(bad());
        }
        if head == "cone-offset" {
            if !(a > 0.0) {
                return Err(bad());
            }
            Ok(PointSpec::ConeOffset { dist: a, angle: b })
        } else {
            let chart = head.trim().parse().map_err(|_| bad())?;
            Ok(PointSpec::Chart { chart, x: a, y: b })
        }
    }
}

impl PointSpec {
    /// Distance 0.3 from the first cone point, or the centre of polygon 0
    /// on surfaces without cone points.
    pub fn default_for(surface: &ConeSurface) -> PointSpec {
        if surface.cone_points().next().is_some() {
            PointSpec::ConeOffset {
                dist: 0.3,
                angle: FRAC_PI_4,
            }
        } else {
            let c = surface.polygon(0).centroid();
            PointSpec::Chart {
                chart: 0,
                x: c.x,
                y: c.y,
            }
        }
    }

    pub fn resolve(&self, surface: &ConeSurface) -> Result<SurfacePoint> {
        let p = match *self {
            PointSpec::Chart { chart, x, y } => SurfacePoint::new(chart, x, y),
            PointSpec::ConeOffset { dist, angle } => {
                let cone = surface.cone_points().next().ok_or_else(|| {
                    Error::InvalidArgument("cone-offset needs a cone point".into())
                })?;
                let angle = angle.rem_euclid(cone.angle);
                point_near_cone(surface, cone.id, dist, angle)?.base
            }
        };
        if let Some(v) = surface.vertex_at(&p)? {
            if surface.vertex_class(v).is_cone() {
                return Err(Error::BasepointOnConePoint(v));
            }
        }
        Ok(p)
    }

    fn label(&self) -> String {
        match *self {
            PointSpec::Chart { chart, x, y } => format!("{chart}:{}:{}", g9(x), g9(y)),
            PointSpec::ConeOffset { dist, angle } => {
                format!("cone-offset:{}:{}", g9(dist), g9(angle))
            }
        }
    }
}

fn basepoint(spec: &Option<String>, surface: &ConeSurface) -> Result<(PointSpec, SurfacePoint)> {
    let spec = match spec {
        Some(s) => s.parse()?,
        None => PointSpec::default_for(surface),
    };
    Ok((spec, spec.resolve(surface)?))
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn pi_multiple(x: f64) -> String {
    format!("{}pi", g9(x / std::f64::consts::PI))
}

fn surface_header(buf: &mut String, src: &SourceArgs, s: &ConeSurface) {
    line!(buf, "surface: {}", src.label());
    line!(buf, "chi: {}", s.euler_characteristic());
    line!(buf, "area: {}", g9(s.area()));
}

fn cmd_validate(a: &SourceArgs, buf: &mut String, m: &mut RunManifest) -> Result<i32> {
    m.source = Some(a.manifest());
    let s = a.load()?;
    let edges: usize = s.polygons().iter().map(|p| p.len()).sum::<usize>() / 2;
    surface_header(buf, a, &s);
    line!(
        buf,
        "cells: V={} E={} F={}",
        s.vertex_classes().len(),
        edges,
        s.polygons().len()
    );
    line!(buf, "orientable: {}", s.is_orientable());
    line!(buf, "exact: {}", s.is_exact());
    for v in s.vertex_classes() {
        line!(
            buf,
            "vertex {}: angle={} ({}) defect={} ({})",
            v.id,
            g9(v.angle),
            pi_multiple(v.angle),
            g9(v.defect),
            pi_multiple(v.defect)
        );
    }
    line!(buf, "cone points: {}", s.cone_points().count());
    line!(
        buf,
        "total defect: {} (2pi chi = {})",
        g9(s.total_defect()),
        g9(std::f64::consts::TAU * s.euler_characteristic() as f64)
    );
    let residual = s.gauss_bonnet_residual();
    line!(buf, "gauss-bonnet residual: {}", g9(residual));
    line!(buf, "nonpositively curved: {}", s.is_nonpositively_curved());
    if let Some(h) = s.systole_hint() {
        line!(buf, "systole hint: {} ({:?})", g9(h.value), h.provenance);
    }
    let ok = residual.abs() < 1e-9;
    m.checks.push(CheckOutcome {
        name: "gauss-bonnet".into(),
        pass: ok,
        estimate: Some(s.total_defect()),
        exact: Some(std::f64::consts::TAU * s.euler_characteristic() as f64),
        stderr: None,
    });
    line!(buf, "result: {}", pass_fail(ok).to_lowercase());
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_verify(a: &VerifyArgs, buf: &mut String, m: &mut RunManifest) -> Result<i32> {
    m.source = Some(a.source.manifest());
    m.seed = Some(a.seed);
    m.samples = Some(a.n);
    m.tolerances = Some(Tolerances {
        mc_stderr_multiple: a.mc_tol,
        exact: a.exact_tol,
    });
    if !(a.mc_tol > 0.0) || !(a.exact_tol >= 0.0) {
        return Err(Error::InvalidArgument("tolerances must be positive".into()));
    }
    if a.fb_points == 0 {
        return Err(Error::InvalidArgument(
            "--fb-points must be positive".into(),
        ));
    }
    let s = a.source.load()?;
    s.check_radius(a.r, a.force)?;
    let (spec, x) = basepoint(&a.point, &s)?;
    let opts = FunctionalOptions {
        allow_large_radius: a.force,
        ..Default::default()
    };
    surface_header(buf, &a.source, &s);
    line!(buf, "r: {}  n: {}  seed: {}", g9(a.r), a.n, a.seed);

    // Integral of F_r against 2πχ·πr⁴/12.
    let lf = average_f_identity_check_with(&s, a.r, a.n, a.seed, &opts)?;
    let ok1 = (lf.estimate - lf.exact).abs() <= (a.mc_tol * lf.stderr).max(a.exact_tol);
    line!(
        buf,
        "[{}] integral-f: estimate={} exact={} stderr={} z={}",
        pass_fail(ok1),
        g9(lf.estimate),
        g9(lf.exact),
        g9(lf.stderr),
        g9(lf.z_score())
    );
    m.checks.push(CheckOutcome {
        name: "integral-f".into(),
        pass: ok1,
        estimate: Some(lf.estimate),
        exact: Some(lf.exact),
        stderr: Some(lf.stderr),
    });

    // F_r ≥ G_r at area-uniform points.
    let cache = SaddleCache::new(&s, a.r, &opts.unfold)?;
    let sampler = AreaSampler::new(&s);
    let parts = run_chunks_from(
        a.fb_points,
        a.seed,
        2 * MC_CHUNKS,
        |rng, count| -> Result<(usize, f64)> {
            let (mut bad, mut min_gap) = (0, f64::INFINITY);
            for _ in 0..count {
                let p = sampler.point(rng);
                let (f, g) = f_and_g(&s, &p, a.r, Some(&cache), &opts)?;
                let gap = f.value - g.value;
                if gap < -a.exact_tol {
                    bad += 1;
                }
                min_gap = min_gap.min(gap);
            }
            Ok((bad, min_gap))
        },
    );
    let (mut violations, mut min_gap) = (0, f64::INFINITY);
    for p in parts {
        let (b, g) = p?;
        violations += b;
        min_gap = min_gap.min(g);
    }
    let ok2 = violations == 0;
    line!(
        buf,
        "[{}] f-dominates-g: points={} violations={} min(F-G)={}",
        pass_fail(ok2),
        a.fb_points,
        violations,
        g9(min_gap)
    );
    m.checks.push(CheckOutcome {
        name: "f-dominates-g".into(),
        pass: ok2,
        estimate: Some(min_gap),
        exact: None,
        stderr: None,
    });

    // Ball area: πr² − G_r against Monte Carlo.
    let formula = ball_area_formula_with(&s, &x, a.r, &opts)?;
    let mc = ball_area_mc_unchecked(&s, &x, a.r, a.n, a.seed)?;
    let ok3 = (formula.area - mc.estimate).abs() <= (a.mc_tol * mc.stderr).max(a.exact_tol);
    line!(
        buf,
        "[{}] ball-area: point={} formula={} mc={} stderr={}",
        pass_fail(ok3),
        spec.label(),
        g9(formula.area),
        g9(mc.estimate),
        g9(mc.stderr)
    );
    m.checks.push(CheckOutcome {
        name: "ball-area".into(),
        pass: ok3,
        estimate: Some(mc.estimate),
        exact: Some(formula.area),
        stderr: Some(mc.stderr),
    });

    // A basepoint with G_r at most the mean of F_r, and its ball bound.
    let rich = find_rich_disk_with(&s, a.r, a.rich_n, a.seed, &opts)?;
    let bound = prop_end_ball_bound(s.euler_characteristic(), s.area(), a.r)?;
    let ok4 = rich.g <= rich.average_bound + a.exact_tol && bound <= rich.ball_area + a.exact_tol;
    line!(
        buf,
        "[{}] rich-disk: g={} mean-f={} ball-area={} bound={} samples={}",
        pass_fail(ok4),
        g9(rich.g),
        g9(rich.average_bound),
        g9(rich.ball_area),
        g9(bound),
        rich.sample_count
    );
    m.checks.push(CheckOutcome {
        name: "rich-disk".into(),
        pass: ok4,
        estimate: Some(rich.ball_area),
        exact: Some(bound),
        stderr: None,
    });

    let ok = ok1 && ok2 && ok3 && ok4;
    if formula.g.advisory {
        line!(
            buf,
            "note: r is not known to be below half the systole; results are advisory"
        );
    }
    line!(buf, "result: {}", pass_fail(ok).to_lowercase());
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_ball_growth(a: &GrowthArgs, buf: &mut String, m: &mut RunManifest) -> Result<i32> {
    m.source = Some(a.source.manifest());
    m.seed = Some(a.seed);
    m.samples = Some(a.n);
    if !(a.r_max > 0.0) || !a.r_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "--r-max must be positive (got {})",
            a.r_max
        )));
    }
    if a.steps == 0 || a.steps > 10_000 {
        return Err(Error::InvalidArgument(format!(
            "--steps must be in 1..=10000 (got {})",
            a.steps
        )));
    }
    let s = a.source.load()?;
    s.check_radius(a.r_max, a.force)?;
    let (_, x) = basepoint(&a.point, &s)?;
    let opts = FunctionalOptions {
        allow_large_radius: a.force,
        ..Default::default()
    };
    let mut csv = String::from("r,formulaArea,mcArea,mcStderr,propEndBound\n");
    for k in 1..=a.steps {
        let r = a.r_max * k as f64 / a.steps as f64;
        let formula = ball_area_formula_with(&s, &x, r, &opts)?;
        let mc = ball_area_mc_unchecked(&s, &x, r, a.n, a.seed.wrapping_add(k as u64))?;
        let bound = prop_end_ball_bound(s.euler_characteristic(), s.area(), r)?;
        line!(
            csv,
            "{},{},{},{},{}",
            g9(r),
            g9(formula.area),
            g9(mc.estimate),
            g9(mc.stderr),
            g9(bound)
        );
    }
    match &a.csv {
        Some(path) => {
            write_file(path, &csv)?;
            line!(buf, "wrote {} rows to {}", a.steps, path.display());
        }
        None => buf.push_str(&csv),
    }
    Ok(EXIT_OK)
}

fn cmd_systole(a: &SystoleArgs, buf: &mut String, m: &mut RunManifest) -> Result<i32> {
    m.source = Some(a.source.manifest());
    let s = a.source.load()?;
    let report = match a.cutoff {
        Some(c) => enumerate_systole(&s, c)?,
        None => systole(&s)?,
    };
    line!(buf, "surface: {}", a.source.label());
    line!(buf, "systole: {}", g9(report.value));
    line!(buf, "status: {}", report.status);
    match report.cutoff {
        Some(c) => line!(buf, "cutoff: {}", g9(c)),
        None => line!(buf, "cutoff: none"),
    }
    line!(buf, "enumerated: {}", report.enumeration_count);
    let witness = match &report.witness {
        Witness::LatticeVector(v) => format!("lattice vector ({}, {})", g9(v.x), g9(v.y)),
        Witness::Loop {
            length,
            orientation_reversing,
            ..
        } => format!(
            "closed geodesic of length {}{}",
            g9(*length),
            if *orientation_reversing {
                ", orientation-reversing"
            } else {
                ""
            }
        ),
        Witness::SaddleCycle(c) => format!("cycle of {} saddle connections", c.len()),
    };
    line!(buf, "witness: {witness}");
    let err = validate_witness(&s, &report)?;
    line!(buf, "witness error: {}", g9(err));
    let ok = err <= 1e-9;
    m.checks.push(CheckOutcome {
        name: "witness".into(),
        pass: ok,
        estimate: Some(report.value),
        exact: None,
        stderr: None,
    });
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_table(a: &TableArgs, buf: &mut String) -> Result<i32> {
    let rows = reference_table();
    buf.push_str(&format_table(&rows));
    if let Some(path) = &a.csv {
        let csv = table_csv(&rows);
        if path.as_os_str() == "-" {
            buf.push('\n');
            buf.push_str(&csv);
        } else {
            write_file(path, &csv)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_bounds(a: &BoundsArgs, buf: &mut String) -> Result<i32> {
    let chi = match (a.chi, a.genus) {
        (Some(c), None) => c,
        (None, Some(g)) if g >= 0 => 2 - 2 * g,
        (None, Some(g)) => {
            return Err(Error::InvalidArgument(format!(
                "genus must be non-negative (got {g})"
            )))
        }
        _ => {
            return Err(Error::InvalidArgument(
                "exactly one of --chi or --genus is required".into(),
            ))
        }
    };
    let report = BoundsReport::new(chi, a.genus, a.area, a.systole)?;
    line!(buf, "chi: {}", report.chi);
    if let Some(g) = report.genus {
        line!(buf, "genus: {g}");
    }
    line!(buf, "sigma lower bound: {}", g9(report.sqrt_bound));
    if let (Some(sigma), Some(verdict)) = (report.sigma, report.loewner) {
        line!(buf, "sigma: {}", g9(sigma));
        line!(buf, "loewner: {verdict}");
    }
    if let Some(d) = report.loewner_disk {
        line!(buf, "loewner disk constant: {}", g9(d.constant));
        line!(buf, "loewner disk criterion: {}", d.verdict);
    }
    let r = a.r.or(a.systole.map(|s| s / 2.0));
    if let (Some(r), Some(bound)) = (r, r.and_then(|r| report.prop_end_bound(r))) {
        line!(buf, "ball area bound at r={}: {}", g9(r), g9(bound));
    }
    Ok(EXIT_OK)
}
