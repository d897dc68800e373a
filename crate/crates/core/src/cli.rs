//! Command-line wiring of the engine, baseline, metrics, and I/O.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 geometry parse error, 64 usage
//! error. Features are processed independently (optionally in parallel, see
//! `SIMPLIFY_THREADS`), and output order always equals input order.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::engine::{
    self, GammaPolicy, PolygonRings, SimplifyParams, SimplifyReport,
};
use crate::geom::GeomError;
use crate::io::{
    self, svg::{Panel, SvgLayer}, sweep::SweepRow, FeatureRecord, Format, FormatChoice, IoError,
};
use crate::metrics::{self, QualityReport};
use crate::rdp::{self, RdpParams};

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "polysimp",
    version,
    about = "Feature-preserving simplification of 2D polygons",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simplify every polygon of the input.
    Simplify(SimplifyCmd),
    /// Run the simplifier across a range of distance thresholds, emitting CSV.
    Sweep(SweepCmd),
    /// Compare the simplifier against Ramer-Douglas-Peucker.
    Compare(CompareCmd),
    /// Draw the input (optionally with a simplified overlay) as SVG.
    Render(RenderCmd),
}

#[derive(Debug, Args)]
struct IoArgs {
    /// Input path, or `-` for stdin.
    input: String,
    /// Output path, or `-` for stdout.
    #[arg(short, long, default_value = "-")]
    output: String,
    /// Input format (auto-detected from the leading token by default).
    #[arg(long, value_parser = parse_input_format, default_value = "auto")]
    input_format: FormatChoice,
    /// Output format (defaults to the input's format).
    #[arg(long, value_parser = parse_output_format)]
    output_format: Option<Format>,
}

#[derive(Debug, Args)]
struct EngineArgs {
    /// Distance threshold: segments at most this long are simplified.
    #[arg(long)]
    tau: f64,
    /// Angle threshold in radians.
    #[arg(long, default_value_t = engine::DEFAULT_EPSILON)]
    epsilon: f64,
    /// Collinearity threshold in radians.
    #[arg(long, default_value_t = engine::DEFAULT_DELTA)]
    delta: f64,
    /// Joining distance threshold: a number, or `dynamic` for the dequeued
    /// segment's own length.
    #[arg(long, value_parser = parse_gamma, default_value = "dynamic")]
    gamma: GammaPolicy,
    /// Use the literal translate update for the longer-previous case instead
    /// of the corrected sign.
    #[arg(long)]
    legacy_translate_sign: bool,
}

impl EngineArgs {
    fn params(&self, tau: f64) -> Result<SimplifyParams, String> {
        let params = SimplifyParams {
            tau,
            epsilon: self.epsilon,
            delta: self.delta,
            gamma: self.gamma,
            legacy_translate_sign: self.legacy_translate_sign,
        };
        params.validate().map_err(|e| e.to_string())?;
        Ok(params)
    }
}

#[derive(Debug, Args)]
struct SimplifyCmd {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Write a JSON array of per-feature simplification and quality reports.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Write a before/after SVG.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Report (never repair) self-intersections in the output.
    #[arg(long)]
    check_validity: bool,
}

#[derive(Debug, Args)]
struct SweepCmd {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// First tau of the sweep (inclusive).
    #[arg(long)]
    from: f64,
    /// Last tau of the sweep (inclusive).
    #[arg(long)]
    to: f64,
    /// Sweep step, must be positive.
    #[arg(long)]
    step: f64,
    /// Directory receiving one SVG per tau.
    #[arg(long, value_name = "DIR")]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareCmd {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Perpendicular-distance tolerance for the RDP baseline.
    #[arg(long)]
    rdp_tolerance: f64,
    /// Write a three-panel SVG (original / simplifier / RDP).
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RenderCmd {
    #[command(flatten)]
    io: IoArgs,
    /// Overlay the simplification at this distance threshold.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, default_value_t = engine::DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = engine::DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, value_parser = parse_gamma, default_value = "dynamic")]
    gamma: GammaPolicy,
    #[arg(long)]
    legacy_translate_sign: bool,
}

fn parse_gamma(text: &str) -> Result<GammaPolicy, String> {
    if text.eq_ignore_ascii_case("dynamic") {
        return Ok(GammaPolicy::DynamicCurrentLength);
    }
    text.parse::<f64>()
        .map(GammaPolicy::Fixed)
        .map_err(|_| format!("expected a number or `dynamic`, got {text:?}"))
}

fn parse_input_format(text: &str) -> Result<FormatChoice, String> {
    match text.to_ascii_lowercase().as_str() {
        "auto" => Ok(FormatChoice::Auto),
        "geojson" => Ok(FormatChoice::GeoJson),
        "wkt" => Ok(FormatChoice::Wkt),
        other => Err(format!("unknown input format {other:?}")),
    }
}

fn parse_output_format(text: &str) -> Result<Format, String> {
    match text.to_ascii_lowercase().as_str() {
        "geojson" => Ok(Format::GeoJson),
        "wkt" => Ok(Format::Wkt),
        other => Err(format!("unknown output format {other:?}")),
    }
}

/// Parses `args` (not including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, S>(args: I) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = std::iter::once("polysimp".to_string())
        .chain(args.into_iter().map(Into::into))
        .collect();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outcomes, not usage errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Simplify(cmd) => cmd_simplify(cmd),
        Command::Sweep(cmd) => cmd_sweep(cmd),
        Command::Compare(cmd) => cmd_compare(cmd),
        Command::Render(cmd) => cmd_render(cmd),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("polysimp: {e}");
            e.exit_code()
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse(io::ParseError),
    Geometry(GeomError),
    Io(std::io::Error),
    Render(IoError),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Geometry(e) => write!(f, "invalid geometry: {e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Render(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse(_) | CliError::Geometry(_) => EXIT_PARSE,
            CliError::Io(_) => EXIT_IO,
            CliError::Render(e) => match e {
                IoError::Io(_) => EXIT_IO,
                IoError::NothingToRender => EXIT_PARSE,
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<io::ParseError> for CliError {
    fn from(e: io::ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        CliError::Geometry(e)
    }
}

fn read_input(io_args: &IoArgs) -> Result<(Vec<FeatureRecord>, Format), CliError> {
    let text = if io_args.input == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(&io_args.input)?
    };
    let detected = io::detect_format(&text);
    let outcome = io::read_features(&text, io_args.input_format)?;
    if outcome.skipped_non_areal > 0 {
        eprintln!(
            "polysimp: skipped {} non-areal geometries",
            outcome.skipped_non_areal
        );
    }
    let format = io_args
        .output_format
        .or(match io_args.input_format {
            FormatChoice::GeoJson => Some(Format::GeoJson),
            FormatChoice::Wkt => Some(Format::Wkt),
            FormatChoice::Auto => detected,
        })
        .unwrap_or(Format::GeoJson);
    Ok((outcome.records, format))
}

fn write_output(path: &str, bytes: &[u8]) -> Result<(), CliError> {
    if path == "-" {
        std::io::stdout().write_all(bytes)?;
        Ok(())
    } else {
        fs::write(path, bytes)?;
        Ok(())
    }
}

fn write_records(
    records: &[FeatureRecord],
    format: Format,
    path: &str,
) -> Result<(), CliError> {
    let mut buf = Vec::new();
    let skipped = io::write_features(records, format, &mut buf).map_err(render_to_cli)?;
    if skipped > 0 {
        eprintln!("polysimp: {skipped} vanished features omitted from WKT output");
    }
    write_output(path, &buf)
}

fn render_to_cli(e: IoError) -> CliError {
    CliError::Render(e)
}

/// Result of simplifying one feature.
struct FeatureOutcome {
    simplified: Option<PolygonRings>,
    exterior_report: SimplifyReport,
    hole_reports: Vec<SimplifyReport>,
    quality: QualityReport,
}

fn simplify_feature(
    record: &FeatureRecord,
    params: &SimplifyParams,
) -> Result<FeatureOutcome, GeomError> {
    let polygon = record
        .geometry
        .as_ref()
        .expect("read_features only yields live geometries");
    let outcome = engine::simplify_polygon(polygon, params)?;
    let quality = metrics::quality_report(
        &polygon.exterior,
        outcome.polygon.as_ref().map(|p| p.exterior.as_slice()),
    );
    Ok(FeatureOutcome {
        simplified: outcome.polygon,
        exterior_report: outcome.exterior_report,
        hole_reports: outcome.hole_reports,
        quality,
    })
}

/// Runs `f` over the features, honoring the `SIMPLIFY_THREADS` cap
/// (0 or 1 forces sequential execution). Output order equals input order.
fn for_each_feature<T, F>(records: &[FeatureRecord], f: F) -> Result<Vec<T>, GeomError>
where
    T: Send,
    F: Fn(&FeatureRecord) -> Result<T, GeomError> + Send + Sync,
{
    use rayon::prelude::*;
    let threads = std::env::var("SIMPLIFY_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    match threads {
        Some(0) | Some(1) => records.iter().map(f).collect(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("failed to build worker pool");
            pool.install(|| records.par_iter().map(f).collect())
        }
        None => records.par_iter().map(f).collect(),
    }
}

#[derive(Serialize)]
struct FeatureReport<'a> {
    id: Option<&'a str>,
    simplify: &'a SimplifyReport,
    holes: &'a [SimplifyReport],
    quality: &'a QualityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    self_intersects: Option<bool>,
}

fn cmd_simplify(cmd: SimplifyCmd) -> Result<(), CliError> {
    let params = cmd.engine.params(cmd.engine.tau).map_err(CliError::Usage)?;
    let (records, format) = read_input(&cmd.io)?;
    let outcomes = for_each_feature(&records, |r| simplify_feature(r, &params))?;

    let output: Vec<FeatureRecord> = records
        .iter()
        .zip(&outcomes)
        .map(|(record, outcome)| FeatureRecord {
            id: record.id.clone(),
            properties: record.properties.clone(),
            geometry: outcome.simplified.clone(),
        })
        .collect();
    write_records(&output, format, &cmd.io.output)?;

    let validity: Vec<Option<bool>> = if cmd.check_validity {
        outcomes
            .iter()
            .map(|o| {
                o.simplified.as_ref().map(|p| {
                    metrics::self_intersects(&p.exterior)
                        || p.holes.iter().any(|h| metrics::self_intersects(h))
                })
            })
            .collect()
    } else {
        vec![None; outcomes.len()]
    };
    if cmd.check_validity {
        for (record, intersects) in records.iter().zip(&validity) {
            if *intersects == Some(true) {
                eprintln!(
                    "polysimp: feature {} self-intersects after simplification",
                    record.id.as_deref().unwrap_or("<unnamed>")
                );
            }
        }
    }

    if let Some(path) = &cmd.report {
        let reports: Vec<FeatureReport> = records
            .iter()
            .zip(&outcomes)
            .zip(&validity)
            .map(|((record, outcome), intersects)| FeatureReport {
                id: record.id.as_deref(),
                simplify: &outcome.exterior_report,
                holes: &outcome.hole_reports,
                quality: &outcome.quality,
                self_intersects: *intersects,
            })
            .collect();
        let json = serde_json::to_vec_pretty(&reports).expect("reports serialize");
        fs::write(path, json)?;
    }

    if let Some(path) = &cmd.svg {
        let svg = before_after_svg(&records, &outcomes).map_err(render_to_cli)?;
        fs::write(path, svg)?;
    }
    Ok(())
}

fn before_after_svg(
    records: &[FeatureRecord],
    outcomes: &[FeatureOutcome],
) -> Result<String, IoError> {
    let mut before = SvgLayer {
        label: "before".into(),
        stroke: "#9a9a9a".into(),
        ..SvgLayer::default()
    };
    let mut after = SvgLayer {
        label: "after".into(),
        stroke: "#000000".into(),
        ..SvgLayer::default()
    };
    for (record, outcome) in records.iter().zip(outcomes) {
        let polygon = record.geometry.as_ref().unwrap();
        match &outcome.simplified {
            Some(simplified) => {
                before.rings.extend(all_rings(polygon));
                after.rings.extend(all_rings(simplified));
            }
            None => before.hatched.extend(all_rings(polygon)),
        }
    }
    io::svg::render_svg(vec![before, after])
}

fn all_rings(polygon: &PolygonRings) -> Vec<Vec<crate::geom::Point>> {
    std::iter::once(polygon.exterior.clone())
        .chain(polygon.holes.iter().cloned())
        .collect()
}

fn cmd_sweep(cmd: SweepCmd) -> Result<(), CliError> {
    if !(cmd.step > 0.0 && cmd.step.is_finite()) {
        return Err(CliError::Usage(format!(
            "sweep step must be positive, got {}",
            cmd.step
        )));
    }
    if cmd.from > cmd.to {
        return Err(CliError::Usage(format!(
            "sweep range is empty: from {} to {}",
            cmd.from, cmd.to
        )));
    }
    let (records, _) = read_input(&cmd.io)?;

    let mut taus = Vec::new();
    let mut tau = cmd.from;
    while tau <= cmd.to + 1e-12 {
        taus.push(tau);
        tau += cmd.step;
    }

    let mut rows = Vec::with_capacity(taus.len());
    for &tau in &taus {
        let params = cmd.engine.params(tau).map_err(CliError::Usage)?;
        let outcomes = for_each_feature(&records, |r| simplify_feature(r, &params))?;
        let mut segments = 0usize;
        let mut area = 0.0f64;
        let mut hausdorff = 0.0f64;
        for outcome in &outcomes {
            segments += outcome
                .simplified
                .as_ref()
                .map(|p| p.exterior.len() + p.holes.iter().map(Vec::len).sum::<usize>())
                .unwrap_or(0);
            area += outcome.quality.area_after;
            hausdorff = hausdorff.max(outcome.quality.hausdorff);
        }
        rows.push(SweepRow {
            tau,
            segments,
            vertices: segments,
            area,
            hausdorff,
        });

        if let Some(dir) = &cmd.svg {
            fs::create_dir_all(dir)?;
            let svg = before_after_svg(&records, &outcomes).map_err(render_to_cli)?;
            fs::write(dir.join(format!("tau-{tau}.svg")), svg)?;
        }
    }

    let mut buf = Vec::new();
    io::sweep::write_sweep_csv(&rows, &mut buf).map_err(render_to_cli)?;
    write_output(&cmd.io.output, &buf)
}

#[derive(Serialize)]
struct CompareReport<'a> {
    id: Option<&'a str>,
    engine: QualityReport,
    rdp: QualityReport,
}

fn cmd_compare(cmd: CompareCmd) -> Result<(), CliError> {
    let params = cmd.engine.params(cmd.engine.tau).map_err(CliError::Usage)?;
    if !(cmd.rdp_tolerance >= 0.0 && cmd.rdp_tolerance.is_finite()) {
        return Err(CliError::Usage(format!(
            "rdp tolerance must be non-negative, got {}",
            cmd.rdp_tolerance
        )));
    }
    let (records, _) = read_input(&cmd.io)?;
    let rdp_params = RdpParams::new(cmd.rdp_tolerance);

    let engine_outcomes = for_each_feature(&records, |r| simplify_feature(r, &params))?;
    let rdp_outcomes: Vec<(Option<PolygonRings>, QualityReport)> = records
        .iter()
        .map(|record| {
            let polygon = record.geometry.as_ref().unwrap();
            let simplified = rdp_polygon(polygon, rdp_params);
            let quality = metrics::quality_report(
                &polygon.exterior,
                simplified.as_ref().map(|p| p.exterior.as_slice()),
            );
            (simplified, quality)
        })
        .collect();

    let reports: Vec<CompareReport> = records
        .iter()
        .zip(&engine_outcomes)
        .zip(&rdp_outcomes)
        .map(|((record, engine_outcome), (_, rdp_quality))| CompareReport {
            id: record.id.as_deref(),
            engine: engine_outcome.quality.clone(),
            rdp: rdp_quality.clone(),
        })
        .collect();

    let as_csv = Path::new(&cmd.io.output)
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
    let mut buf = Vec::new();
    if as_csv {
        writeln!(
            buf,
            "id,method,segments_before,segments_after,area_before,area_after,hausdorff,\
right_angle_fraction_before,right_angle_fraction_after,vanished"
        )?;
        for report in &reports {
            for (method, q) in [("engine", &report.engine), ("rdp", &report.rdp)] {
                writeln!(
                    buf,
                    "{},{},{},{},{},{},{},{},{},{}",
                    report.id.unwrap_or(""),
                    method,
                    q.segment_count_before,
                    q.segment_count_after,
                    q.area_before,
                    q.area_after,
                    q.hausdorff,
                    q.right_angle_fraction_before,
                    q.right_angle_fraction_after,
                    q.vanished
                )?;
            }
        }
    } else {
        buf = serde_json::to_vec_pretty(&reports).expect("reports serialize");
        buf.push(b'\n');
    }
    write_output(&cmd.io.output, &buf)?;

    if let Some(path) = &cmd.svg {
        let mut original = Panel {
            label: "original".into(),
            layers: vec![SvgLayer {
                label: "original".into(),
                stroke: "#000000".into(),
                ..SvgLayer::default()
            }],
        };
        let mut engine_panel = Panel {
            label: format!("simplified tau={}", cmd.engine.tau),
            layers: vec![SvgLayer {
                label: "engine".into(),
                stroke: "#000000".into(),
                ..SvgLayer::default()
            }],
        };
        let mut rdp_panel = Panel {
            label: format!("rdp tolerance={}", cmd.rdp_tolerance),
            layers: vec![SvgLayer {
                label: "rdp".into(),
                stroke: "#000000".into(),
                ..SvgLayer::default()
            }],
        };
        for ((record, engine_outcome), (rdp_result, _)) in
            records.iter().zip(&engine_outcomes).zip(&rdp_outcomes)
        {
            let polygon = record.geometry.as_ref().unwrap();
            original.layers[0].rings.extend(all_rings(polygon));
            match &engine_outcome.simplified {
                Some(p) => engine_panel.layers[0].rings.extend(all_rings(p)),
                None => engine_panel.layers[0].hatched.extend(all_rings(polygon)),
            }
            match rdp_result {
                Some(p) => rdp_panel.layers[0].rings.extend(all_rings(p)),
                None => rdp_panel.layers[0].hatched.extend(all_rings(polygon)),
            }
        }
        let svg = io::svg::render_panels(&[original, engine_panel, rdp_panel])
            .map_err(render_to_cli)?;
        fs::write(path, svg)?;
    }
    Ok(())
}

fn rdp_polygon(polygon: &PolygonRings, params: RdpParams) -> Option<PolygonRings> {
    let exterior = rdp::rdp_cycle(&polygon.exterior, params)?;
    let holes = polygon
        .holes
        .iter()
        .filter_map(|h| rdp::rdp_cycle(h, params))
        .collect();
    Some(PolygonRings { exterior, holes })
}

fn cmd_render(cmd: RenderCmd) -> Result<(), CliError> {
    let (records, _) = read_input(&cmd.io)?;
    let svg = match cmd.tau {
        None => {
            let mut layer = SvgLayer {
                label: "input".into(),
                stroke: "#000000".into(),
                ..SvgLayer::default()
            };
            for record in &records {
                layer
                    .rings
                    .extend(all_rings(record.geometry.as_ref().unwrap()));
            }
            io::svg::render_svg(vec![layer]).map_err(render_to_cli)?
        }
        Some(tau) => {
            let engine_args = EngineArgs {
                tau,
                epsilon: cmd.epsilon,
                delta: cmd.delta,
                gamma: cmd.gamma,
                legacy_translate_sign: cmd.legacy_translate_sign,
            };
            let params = engine_args.params(tau).map_err(CliError::Usage)?;
            let outcomes = for_each_feature(&records, |r| simplify_feature(r, &params))?;
            before_after_svg(&records, &outcomes).map_err(render_to_cli)?
        }
    };
    write_output(&cmd.io.output, svg.as_bytes())
}
