//! Command-line driver: contract clouds, validate surfaces, measure
//! scaling.
//!
//! Machine-readable JSON goes to standard output; everything meant for
//! humans (progress, warnings, failure details) goes to standard error.
//! Exit codes: 0 success, 1 usage/input/I-O errors, 2 a stalled run or
//! failed checks. `HULLWRAP_THREADS` caps worker threads (0 or unset
//! picks the machine default).

use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hullwrap::bench::{run_bench, write_csv, BenchConfig};
use hullwrap::contraction::{
    Contraction, ContractionConfig, ContractionRun, Outcome, PriorityMode, StepAction,
};
use hullwrap::io::{
    generate_cloud, read_cloud, read_mesh, read_trace, snapshot_path, write_mesh, write_trace,
    Generator, MeshFormat,
};
use hullwrap::mesh::{IngestReport, PointCloud};
use hullwrap::validate::{check_trace_rows, validate, TraceRowChecks, ValidationReport};

#[derive(Parser)]
#[command(
    name = "hullwrap",
    version,
    about = "Shrink-wrap a 3D point cloud: contract its convex hull into a closed surface through every point"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Contract a cloud's convex hull into a surface through every point.
    Contract(ContractArgs),
    /// Check a mesh against its cloud: topology, self-intersection,
    /// containment, and optionally a recorded trace.
    Validate(ValidateArgs),
    /// Time contraction over a size series and fit per-phase growth.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Obj,
    Ply,
}

#[derive(Clone, Copy, ValueEnum)]
enum PriorityArg {
    /// Distance from each point to facet centroids.
    Centroid,
    /// Distance from each point to the nearest point of each facet.
    True,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "generate"])))]
struct ContractArgs {
    /// Cloud file: .xyz, .csv, or .ply.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generator spec, e.g. ball-uniform(500,7) or two-lobes(100).
    #[arg(long)]
    generate: Option<String>,
    /// Mesh output path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Mesh format; defaults from the output extension, then OBJ.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// How pending points pick their target facet each pass.
    #[arg(long, value_enum, default_value_t = PriorityArg::Centroid)]
    priority: PriorityArg,
    /// Candidate facets tried per point before deferring it.
    #[arg(long, default_value_t = 8)]
    fallback_breadth: usize,
    /// Directory for trace.csv.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
    /// Also write step_NNNN.obj into the trace directory, one per
    /// insertion plus the starting surface.
    #[arg(long, requires = "trace_dir")]
    snapshots: bool,
    /// Seed for --generate specs that omit one.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run the full validation suite on the result.
    #[arg(long)]
    validate: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// Mesh file: .obj or .ply.
    #[arg(long)]
    mesh: PathBuf,
    /// Cloud the mesh is supposed to pass through.
    #[arg(long)]
    cloud: PathBuf,
    /// Optional trace.csv recorded by `contract`.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated cloud sizes, strictly ascending.
    #[arg(long, default_value = "100,200,400,800,1600,3200")]
    sizes: String,
    /// Cloud family to generate.
    #[arg(long, default_value = "ball-uniform")]
    generator: String,
    /// Runs per size; repeat r uses seed + r.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the per-run table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let informational =
                matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = err.print();
            return if informational { 0 } else { 1 };
        }
    };
    if let Err(message) = init_threads() {
        eprintln!("hullwrap: {message}");
        return 1;
    }
    let result = match cli.command {
        Command::Contract(args) => cmd_contract(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("hullwrap: {message}");
            1
        }
    }
}

/// Applies `HULLWRAP_THREADS` to the global worker pool.
fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("HULLWRAP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("HULLWRAP_THREADS must be an unsigned integer, got {raw:?}"))?;
    if threads == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("thread pool: {e}"))
}

fn warn_merged(report: &IngestReport) {
    for merged in &report.merged {
        eprintln!(
            "hullwrap: input point {} duplicates point {}; merged",
            merged.input_index, merged.kept_id
        );
    }
}

#[derive(Serialize)]
struct TimingsOut {
    hull_s: f64,
    prioritize_s: f64,
    insert_guard_s: f64,
}

#[derive(Serialize)]
struct BlockedOut {
    point: usize,
    witnesses: usize,
}

#[derive(Serialize)]
struct ContractSummary<'a> {
    command: &'static str,
    source: String,
    n: usize,
    hull_vertices: usize,
    insertions: usize,
    passes: usize,
    outcome: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    blocked: Vec<BlockedOut>,
    metric: f64,
    hausdorff: f64,
    volume: f64,
    area: f64,
    timings_s: TimingsOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    snapshots: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    validation: Option<&'a ValidationReport>,
}

fn cmd_contract(args: ContractArgs) -> Result<i32, String> {
    if args.fallback_breadth == 0 {
        return Err("--fallback-breadth must be at least 1".into());
    }
    let (cloud, source) = load_cloud(&args)?;
    let config = ContractionConfig {
        priority: match args.priority {
            PriorityArg::Centroid => PriorityMode::Centroid,
            PriorityArg::True => PriorityMode::TrueDistance,
        },
        fallback_breadth: args.fallback_breadth,
        ..ContractionConfig::default()
    };

    let snapshot_dir = args.snapshots.then(|| args.trace_dir.clone().unwrap());
    let run = run_contraction(&cloud, config, snapshot_dir.as_deref())?;

    let trace_path = match &args.trace_dir {
        Some(dir) => Some(write_trace(&run.trace, dir).map_err(|e| e.to_string())?),
        None => None,
    };
    let output_path = match &args.output {
        Some(path) => {
            let format = resolve_format(args.format, path);
            write_mesh(&run.mesh, format, path).map_err(|e| e.to_string())?;
            Some(path.clone())
        }
        None => None,
    };

    let validation = args
        .validate
        .then(|| validate(&run.mesh, &cloud, Some(&run.trace), Some(run.on_surface_tolerance)));

    let blocked: Vec<BlockedOut> = match &run.outcome {
        Outcome::Complete => Vec::new(),
        Outcome::Stalled { blocked } => blocked
            .iter()
            .map(|b| BlockedOut { point: b.point, witnesses: b.witnesses.len() })
            .collect(),
    };
    for b in &blocked {
        eprintln!(
            "hullwrap: point {} has no legal insertion ({} intersection witnesses)",
            b.point, b.witnesses
        );
    }
    if let Some(report) = &validation {
        eprint!("{}", report.to_text());
    }

    let last = run.trace.final_sample();
    let summary = ContractSummary {
        command: "contract",
        source,
        n: cloud.len(),
        hull_vertices: run.hull_vertices,
        insertions: run.trace.insertions,
        passes: run.trace.passes,
        outcome: match run.outcome {
            Outcome::Complete => "COMPLETE",
            Outcome::Stalled { .. } => "STALLED",
        },
        blocked,
        metric: last.metric,
        hausdorff: last.hausdorff,
        volume: last.volume,
        area: last.area,
        timings_s: TimingsOut {
            hull_s: run.timings.hull.as_secs_f64(),
            prioritize_s: run.timings.prioritize.as_secs_f64(),
            insert_guard_s: run.timings.insert_guard.as_secs_f64(),
        },
        output: output_path.map(|p| p.display().to_string()),
        trace: trace_path.map(|p| p.display().to_string()),
        snapshots: snapshot_dir.map(|_| run.trace.insertions + 1),
        validation: validation.as_ref(),
    };
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));

    let stalled = !matches!(run.outcome, Outcome::Complete);
    let invalid = validation.as_ref().is_some_and(|r| !r.passed());
    Ok(if stalled || invalid { 2 } else { 0 })
}

fn load_cloud(args: &ContractArgs) -> Result<(PointCloud, String), String> {
    if let Some(path) = &args.input {
        let (cloud, report) = read_cloud(path).map_err(|e| e.to_string())?;
        warn_merged(&report);
        Ok((cloud, path.display().to_string()))
    } else {
        let spec = args.generate.as_deref().expect("clap enforces the source group");
        let (cloud, report) = generate_cloud(spec, args.seed).map_err(|e| e.to_string())?;
        warn_merged(&report);
        Ok((cloud, spec.to_string()))
    }
}

/// Runs the contraction, writing a surface snapshot before the first
/// insertion and after every later one when a directory is given.
fn run_contraction(
    cloud: &PointCloud,
    config: ContractionConfig,
    snapshot_dir: Option<&Path>,
) -> Result<ContractionRun, String> {
    let mut engine = Contraction::new(cloud, config).map_err(|e| e.to_string())?;
    if let Some(dir) = snapshot_dir {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        write_mesh(engine.mesh(), MeshFormat::Obj, &snapshot_path(dir, 0))
            .map_err(|e| e.to_string())?;
        while let Some(record) = engine.step() {
            if record.action == StepAction::Inserted {
                let index = engine.insertions();
                write_mesh(engine.mesh(), MeshFormat::Obj, &snapshot_path(dir, index))
                    .map_err(|e| e.to_string())?;
            }
        }
    } else {
        while engine.step().is_some() {}
    }
    Ok(engine.finish())
}

fn resolve_format(flag: Option<FormatArg>, path: &Path) -> MeshFormat {
    match flag {
        Some(FormatArg::Obj) => MeshFormat::Obj,
        Some(FormatArg::Ply) => MeshFormat::Ply,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("ply") => MeshFormat::Ply,
            _ => MeshFormat::Obj,
        },
    }
}

#[derive(Serialize)]
struct ValidateSummary {
    command: &'static str,
    mesh: String,
    cloud: String,
    report: ValidationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace_rows: Option<TraceRowChecks>,
    passed: bool,
}

fn cmd_validate(args: ValidateArgs) -> Result<i32, String> {
    let mesh = read_mesh(&args.mesh).map_err(|e| e.to_string())?;
    let (cloud, report) = read_cloud(&args.cloud).map_err(|e| e.to_string())?;
    warn_merged(&report);
    let report = validate(&mesh, &cloud, None, None);
    let trace_rows = match &args.trace {
        Some(path) => {
            let rows = read_trace(path).map_err(|e| e.to_string())?;
            Some(check_trace_rows(&rows, report.volume, report.area, report.metric))
        }
        None => None,
    };
    let passed = report.passed() && trace_rows.map_or(true, |c| c.all_ok());
    eprint!("{}", report.to_text());
    let summary = ValidateSummary {
        command: "validate",
        mesh: args.mesh.display().to_string(),
        cloud: args.cloud.display().to_string(),
        report,
        trace_rows,
        passed,
    };
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    Ok(if passed { 0 } else { 2 })
}

fn cmd_bench(args: BenchArgs) -> Result<i32, String> {
    let mut sizes = Vec::new();
    for word in args.sizes.split(',') {
        let n: usize = word
            .trim()
            .parse()
            .map_err(|_| format!("--sizes: {word:?} is not a cloud size"))?;
        sizes.push(n);
    }
    let generator = Generator::from_name(args.generator.trim()).ok_or_else(|| {
        let known: Vec<&str> = Generator::ALL.iter().map(|g| g.name()).collect();
        format!("--generator: unknown name {:?}, expected one of {}", args.generator, known.join(", "))
    })?;
    let config = BenchConfig {
        generator,
        sizes,
        repeats: args.repeats,
        seed: args.seed,
        contraction: ContractionConfig::default(),
    };
    let report = run_bench(&config).map_err(|e| e.to_string())?;
    for r in &report.records {
        eprintln!(
            "hullwrap: n={} m={} insertions={} (n-m={}, n/100={}, {}) passes={} total={:.3}s {}",
            r.n,
            r.m,
            r.insertions,
            r.expected_insertions,
            r.n_over_100,
            if r.n_over_100_mismatch { "counts differ" } else { "counts agree" },
            r.passes,
            r.total_s,
            r.outcome
        );
    }
    eprintln!(
        "hullwrap: slopes total={:.2} hull={:.2} prioritize={:.2} (reference {:.2}) insert+guard={:.2} validate={:.2}",
        report.slopes.total,
        report.slopes.hull,
        report.slopes.prioritize,
        report.slopes.prioritize_reference,
        report.slopes.insert_guard,
        report.slopes.validate
    );
    if let Some(path) = &args.csv {
        write_csv(&report, path).map_err(|e| e.to_string())?;
    }
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(0)
}
