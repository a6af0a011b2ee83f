//! Cloud and mesh file formats, seeded cloud generators, and trace output.
//!
//! Everything here is deterministic: a fixed input file or generator spec
//! yields the same cloud, and a fixed mesh yields the same output bytes on
//! every run. Coordinates are printed in the shortest decimal form that
//! parses back to the identical `f64`, so write-then-read is lossless.
//!
//! Cloud files are XYZ (whitespace-separated `x y z` per line, `#` starts a
//! comment), CSV (`x,y,z`, optional header row), or ASCII PLY; the reader
//! picks the parser from the file extension, defaulting to XYZ. Meshes are
//! OBJ or ASCII PLY, triangles only. All formats are text; there is no
//! binary variant.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::contraction::ContractionTrace;
use crate::geom::Point3;
use crate::mesh::{CloudError, IngestReport, PointCloud, PointId, SurfaceMesh};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}: {reason}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    /// Fewer than four distinct points cannot enclose a volume.
    #[error("cloud is dimensionally deficient: {found} distinct points, need at least 4")]
    DimensionalDeficiency { found: usize },
    #[error("bad generator spec {spec:?}: {reason}")]
    BadGeneratorSpec { spec: String, reason: String },
    #[error(transparent)]
    Cloud(#[from] CloudError),
}

fn file_err(path: &Path, source: std::io::Error) -> IoError {
    IoError::File { path: path.to_path_buf(), source }
}

fn parse_err(path: &Path, line: usize, reason: impl Into<String>) -> IoError {
    IoError::Parse { path: path.to_path_buf(), line, reason: reason.into() }
}

/// Output format for [`write_mesh`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Ply,
}

impl MeshFormat {
    pub fn extension(self) -> &'static str {
        match self {
            MeshFormat::Obj => "obj",
            MeshFormat::Ply => "ply",
        }
    }
}

/// Reads a point cloud from an XYZ, CSV, or ASCII PLY file, chosen by
/// extension (`.csv`, `.ply`, anything else parses as XYZ). Duplicate
/// points are merged; the report lists what was dropped. PLY face data,
/// if present, is ignored.
pub fn read_cloud(path: &Path) -> Result<(PointCloud, IngestReport), IoError> {
    let text = fs::read_to_string(path).map_err(|e| file_err(path, e))?;
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let points = match ext.as_deref() {
        Some("csv") => parse_csv(path, &text)?,
        Some("ply") => parse_ply(path, &text)?.0,
        _ => parse_xyz(path, &text)?,
    };
    build_cloud(points)
}

/// Writes a point cloud in the format matching the path extension (same
/// rule as [`read_cloud`]); reading the file back reproduces the cloud
/// exactly.
pub fn write_cloud(cloud: &PointCloud, path: &Path) -> Result<(), IoError> {
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let mut s = String::new();
    match ext.as_deref() {
        Some("csv") => {
            s.push_str("x,y,z\n");
            for p in cloud.points() {
                let _ = writeln!(s, "{},{},{}", p.x, p.y, p.z);
            }
        }
        Some("ply") => {
            let _ = writeln!(s, "ply\nformat ascii 1.0\nelement vertex {}", cloud.len());
            s.push_str("property double x\nproperty double y\nproperty double z\nend_header\n");
            for p in cloud.points() {
                let _ = writeln!(s, "{} {} {}", p.x, p.y, p.z);
            }
        }
        _ => {
            for p in cloud.points() {
                let _ = writeln!(s, "{} {} {}", p.x, p.y, p.z);
            }
        }
    }
    fs::write(path, s).map_err(|e| file_err(path, e))
}

/// Reads a triangle mesh from an OBJ or ASCII PLY file, chosen by
/// extension.
pub fn read_mesh(path: &Path) -> Result<SurfaceMesh, IoError> {
    let text = fs::read_to_string(path).map_err(|e| file_err(path, e))?;
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let (coords, facets) = match ext.as_deref() {
        Some("obj") => parse_obj(path, &text)?,
        Some("ply") => parse_ply(path, &text)?,
        _ => {
            return Err(parse_err(path, 1, "unknown mesh format, expected .obj or .ply"));
        }
    };
    Ok(SurfaceMesh::from_coords(coords, facets))
}

/// Writes a mesh as OBJ or ASCII PLY. Vertex lines appear in point-id
/// order, one per mesh coordinate (points not used by any facet are still
/// written, so ids stay stable across snapshots of the same run). Facet
/// lines preserve winding. Output bytes are identical for identical
/// meshes.
///
/// Coordinates are printed with the shortest decimal form that parses back
/// to the identical `f64`, so a write/read cycle is lossless:
///
/// ```
/// use hullwrap::contraction::{contract, ContractionConfig};
/// use hullwrap::io::{generate_cloud, read_mesh, write_mesh, MeshFormat};
///
/// let (cloud, _) = generate_cloud("two-lobes(40,5)", 0)?;
/// let run = contract(&cloud, &ContractionConfig::default())?;
///
/// let dir = tempfile::tempdir()?;
/// let path = dir.path().join("surface.obj");
/// write_mesh(&run.mesh, MeshFormat::Obj, &path)?;
/// let back = read_mesh(&path)?;
/// assert_eq!(back.facet_count(), run.mesh.facet_count());
/// assert_eq!(back.coords(), run.mesh.coords());
/// # Ok::<(), Box<dyn std::error::Error>>(())
/// ```
pub fn write_mesh(mesh: &SurfaceMesh, format: MeshFormat, path: &Path) -> Result<(), IoError> {
    let text = match format {
        MeshFormat::Obj => obj_text(mesh),
        MeshFormat::Ply => ply_text(mesh),
    };
    fs::write(path, text).map_err(|e| file_err(path, e))
}

fn obj_text(mesh: &SurfaceMesh) -> String {
    let mut s = String::new();
    for p in mesh.coords() {
        let _ = writeln!(s, "v {} {} {}", p.x, p.y, p.z);
    }
    for (_, [a, b, c]) in mesh.facets() {
        let _ = writeln!(s, "f {} {} {}", a + 1, b + 1, c + 1);
    }
    s
}

fn ply_text(mesh: &SurfaceMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "ply\nformat ascii 1.0\nelement vertex {}", mesh.coords().len());
    s.push_str("property double x\nproperty double y\nproperty double z\n");
    let _ = writeln!(s, "element face {}", mesh.facet_count());
    s.push_str("property list uchar uint vertex_indices\nend_header\n");
    for p in mesh.coords() {
        let _ = writeln!(s, "{} {} {}", p.x, p.y, p.z);
    }
    for (_, [a, b, c]) in mesh.facets() {
        let _ = writeln!(s, "3 {a} {b} {c}");
    }
    s
}

fn build_cloud(points: Vec<Point3>) -> Result<(PointCloud, IngestReport), IoError> {
    let (cloud, report) = PointCloud::from_points(points)?;
    if cloud.len() < 4 {
        return Err(IoError::DimensionalDeficiency { found: cloud.len() });
    }
    Ok((cloud, report))
}

fn parse_coord(path: &Path, line: usize, field: &str) -> Result<f64, IoError> {
    field
        .parse()
        .map_err(|_| parse_err(path, line, format!("{field:?} is not a number")))
}

fn parse_xyz(path: &Path, text: &str) -> Result<Vec<Point3>, IoError> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let data = raw.split('#').next().unwrap_or("").trim();
        if data.is_empty() {
            continue;
        }
        let fields: Vec<&str> = data.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(
                path,
                line,
                format!("expected 3 coordinates, found {}", fields.len()),
            ));
        }
        points.push(Point3::new(
            parse_coord(path, line, fields[0])?,
            parse_coord(path, line, fields[1])?,
            parse_coord(path, line, fields[2])?,
        ));
    }
    Ok(points)
}

fn parse_csv(path: &Path, text: &str) -> Result<Vec<Point3>, IoError> {
    let mut points = Vec::new();
    let mut first = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let data = raw.trim();
        if data.is_empty() {
            continue;
        }
        let fields: Vec<&str> = data.split(',').map(str::trim).collect();
        if std::mem::take(&mut first) && fields.iter().any(|f| f.parse::<f64>().is_err()) {
            // Optional header row: skipped when not fully numeric.
            continue;
        }
        if fields.len() != 3 {
            return Err(parse_err(
                path,
                line,
                format!("expected 3 comma-separated values, found {}", fields.len()),
            ));
        }
        points.push(Point3::new(
            parse_coord(path, line, fields[0])?,
            parse_coord(path, line, fields[1])?,
            parse_coord(path, line, fields[2])?,
        ));
    }
    Ok(points)
}

fn parse_obj(path: &Path, text: &str) -> Result<(Vec<Point3>, Vec<[PointId; 3]>), IoError> {
    let mut coords = Vec::new();
    let mut raw_faces: Vec<(usize, [usize; 3])> = Vec::new();
    for (idx, line_text) in text.lines().enumerate() {
        let line = idx + 1;
        let data = line_text.split('#').next().unwrap_or("").trim();
        if data.is_empty() {
            continue;
        }
        let mut words = data.split_whitespace();
        match words.next().unwrap() {
            "v" => {
                let fields: Vec<&str> = words.collect();
                if fields.len() < 3 {
                    return Err(parse_err(path, line, "vertex line needs 3 coordinates"));
                }
                coords.push(Point3::new(
                    parse_coord(path, line, fields[0])?,
                    parse_coord(path, line, fields[1])?,
                    parse_coord(path, line, fields[2])?,
                ));
            }
            "f" => {
                let mut ids = Vec::with_capacity(3);
                for word in words {
                    // `a/vt/vn` references: only the vertex index matters.
                    let head = word.split('/').next().unwrap_or("");
                    let one_based: usize = head.parse().map_err(|_| {
                        parse_err(path, line, format!("{word:?} is not a vertex index"))
                    })?;
                    if one_based == 0 {
                        return Err(parse_err(path, line, "face indices are 1-based"));
                    }
                    ids.push(one_based - 1);
                }
                if ids.len() != 3 {
                    return Err(parse_err(
                        path,
                        line,
                        format!("only triangular facets are supported, found {}-gon", ids.len()),
                    ));
                }
                raw_faces.push((line, [ids[0], ids[1], ids[2]]));
            }
            // Normals, texture, grouping, and material statements carry no
            // surface topology.
            _ => {}
        }
    }
    let facets = check_faces(path, raw_faces, coords.len())?;
    Ok((coords, facets))
}

/// ASCII PLY reader. Accepts a vertex element (scalar properties, must
/// include `x y z`) and an optional face element whose single property is
/// an index list; any other element is read and discarded.
fn parse_ply(path: &Path, text: &str) -> Result<(Vec<Point3>, Vec<[PointId; 3]>), IoError> {
    #[derive(Clone, Copy, PartialEq)]
    enum El {
        Vertex,
        Face,
        Other,
    }

    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim() == "ply" => {}
        Some((_, _)) => return Err(parse_err(path, 1, "not a PLY file, missing `ply` magic")),
        None => return Err(parse_err(path, 1, "empty file")),
    }

    let mut format_seen = false;
    let mut elements: Vec<(El, usize)> = Vec::new();
    let mut vertex_props: Vec<String> = Vec::new();
    let mut header_end = 1;
    loop {
        let Some((idx, raw)) = lines.next() else {
            return Err(parse_err(path, header_end, "missing end_header"));
        };
        let line = idx + 1;
        header_end = line;
        let data = raw.trim();
        if data.is_empty() || data.starts_with("comment") {
            continue;
        }
        let mut words = data.split_whitespace();
        match words.next().unwrap() {
            "format" => {
                if data != "format ascii 1.0" {
                    return Err(parse_err(path, line, "only `format ascii 1.0` is supported"));
                }
                format_seen = true;
            }
            "element" => {
                let kind = match words.next() {
                    Some("vertex") => El::Vertex,
                    Some("face") => El::Face,
                    Some(_) => El::Other,
                    None => return Err(parse_err(path, line, "element needs a name and a count")),
                };
                let count: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| parse_err(path, line, "element needs a non-negative count"))?;
                elements.push((kind, count));
            }
            "property" => match elements.last() {
                Some((El::Vertex, _)) => {
                    let fields: Vec<&str> = words.collect();
                    if fields.first() == Some(&"list") {
                        return Err(parse_err(path, line, "list property on the vertex element"));
                    }
                    match fields.last() {
                        Some(name) => vertex_props.push((*name).to_string()),
                        None => return Err(parse_err(path, line, "property needs a type and a name")),
                    }
                }
                Some((El::Face, _)) => {
                    if words.next() != Some("list") {
                        return Err(parse_err(
                            path,
                            line,
                            "the face element needs a single list property",
                        ));
                    }
                }
                Some((El::Other, _)) => {}
                None => return Err(parse_err(path, line, "property before any element")),
            },
            "end_header" => break,
            other => {
                return Err(parse_err(path, line, format!("unrecognized header keyword {other:?}")));
            }
        }
    }
    if !format_seen {
        return Err(parse_err(path, header_end, "missing `format ascii 1.0` line"));
    }

    let coord_cols: Vec<usize> = ["x", "y", "z"]
        .iter()
        .filter_map(|n| vertex_props.iter().position(|p| p == n))
        .collect();
    let has_vertices = elements.iter().any(|(k, _)| *k == El::Vertex);
    if has_vertices && coord_cols.len() != 3 {
        return Err(parse_err(path, header_end, "vertex element lacks x, y, z properties"));
    }

    let mut points = Vec::new();
    let mut raw_faces: Vec<(usize, [usize; 3])> = Vec::new();
    for (kind, count) in elements {
        let mut taken = 0;
        while taken < count {
            let Some((idx, raw)) = lines.next() else {
                return Err(parse_err(path, header_end, "file ends before all declared elements"));
            };
            let line = idx + 1;
            let data = raw.trim();
            if data.is_empty() {
                continue;
            }
            taken += 1;
            let fields: Vec<&str> = data.split_whitespace().collect();
            match kind {
                El::Vertex => {
                    if fields.len() != vertex_props.len() {
                        return Err(parse_err(
                            path,
                            line,
                            format!(
                                "expected {} vertex properties, found {}",
                                vertex_props.len(),
                                fields.len()
                            ),
                        ));
                    }
                    points.push(Point3::new(
                        parse_coord(path, line, fields[coord_cols[0]])?,
                        parse_coord(path, line, fields[coord_cols[1]])?,
                        parse_coord(path, line, fields[coord_cols[2]])?,
                    ));
                }
                El::Face => {
                    let arity = fields.first().and_then(|w| w.parse::<usize>().ok());
                    if arity != Some(3) || fields.len() != 4 {
                        return Err(parse_err(path, line, "only triangular facets are supported"));
                    }
                    let mut ids = [0usize; 3];
                    for (slot, field) in ids.iter_mut().zip(&fields[1..]) {
                        *slot = field.parse().map_err(|_| {
                            parse_err(path, line, format!("{field:?} is not a vertex index"))
                        })?;
                    }
                    raw_faces.push((line, ids));
                }
                El::Other => {}
            }
        }
    }
    let facets = check_faces(path, raw_faces, points.len())?;
    Ok((points, facets))
}

fn check_faces(
    path: &Path,
    raw: Vec<(usize, [usize; 3])>,
    vertex_count: usize,
) -> Result<Vec<[PointId; 3]>, IoError> {
    let mut facets = Vec::with_capacity(raw.len());
    for (line, [a, b, c]) in raw {
        if a >= vertex_count || b >= vertex_count || c >= vertex_count {
            return Err(parse_err(
                path,
                line,
                format!("facet index out of range, mesh has {vertex_count} vertices"),
            ));
        }
        if a == b || b == c || a == c {
            return Err(parse_err(path, line, "facet repeats a vertex"));
        }
        facets.push([a, b, c]);
    }
    Ok(facets)
}

/// Seeded point cloud generators. Each is a pure function of `(n, seed)`
/// over its own ChaCha8 stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// Uniform in the unit ball.
    BallUniform,
    /// Uniform directions at radius exactly 1.
    SphereShell,
    /// Isotropic unit-variance Gaussian.
    GaussianBlob,
    /// Two overlapping balls on the x axis; the waist between them forces
    /// pronounced concavity.
    TwoLobes,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::BallUniform,
        Generator::SphereShell,
        Generator::GaussianBlob,
        Generator::TwoLobes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::BallUniform => "ball-uniform",
            Generator::SphereShell => "sphere-shell",
            Generator::GaussianBlob => "gaussian-blob",
            Generator::TwoLobes => "two-lobes",
        }
    }

    pub fn from_name(name: &str) -> Option<Generator> {
        Generator::ALL.into_iter().find(|g| g.name() == name)
    }

    /// The raw sample sequence, before deduplication.
    pub fn points(self, n: usize, seed: u64) -> Vec<Point3> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cube = move || {
            Point3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
        };
        let mut points = Vec::with_capacity(n);
        match self {
            Generator::BallUniform => {
                while points.len() < n {
                    let p = cube();
                    if p.to_vector().norm_squared() <= 1.0 {
                        points.push(p);
                    }
                }
            }
            Generator::SphereShell => {
                while points.len() < n {
                    let p = cube();
                    let r2 = p.to_vector().norm_squared();
                    // Near-zero samples have no usable direction.
                    if r2 <= 1.0 && r2 >= 1e-12 {
                        let inv = 1.0 / r2.sqrt();
                        points.push(Point3::new(p.x * inv, p.y * inv, p.z * inv));
                    }
                }
            }
            Generator::GaussianBlob => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..n {
                    let x: f64 = rng.sample(StandardNormal);
                    let y: f64 = rng.sample(StandardNormal);
                    let z: f64 = rng.sample(StandardNormal);
                    points.push(Point3::new(x, y, z));
                }
            }
            Generator::TwoLobes => {
                // Lobes of radius 0.75 centered at x = ±0.7; alternating
                // assignment keeps every prefix bimodal.
                while points.len() < n {
                    let p = cube();
                    if p.to_vector().norm_squared() <= 1.0 {
                        let dx = if points.len() % 2 == 0 { -0.7 } else { 0.7 };
                        points.push(Point3::new(p.x * 0.75 + dx, p.y * 0.75, p.z * 0.75));
                    }
                }
            }
        }
        points
    }
}

/// Builds a cloud from a generator spec string: `name(n)` or
/// `name(n,seed)`, where `name` is one of the [`Generator`] names. When
/// the spec omits the seed, `default_seed` is used.
///
/// ```
/// use hullwrap::io::generate_cloud;
///
/// let (a, _) = generate_cloud("ball-uniform(50,7)", 0).unwrap();
/// let (b, _) = generate_cloud("ball-uniform(50)", 7).unwrap();
/// assert_eq!(a.points(), b.points());
/// ```
pub fn generate_cloud(spec: &str, default_seed: u64) -> Result<(PointCloud, IngestReport), IoError> {
    let (generator, n, seed) = parse_generator_spec(spec, default_seed)?;
    generate(generator, n, seed)
}

/// [`generate_cloud`] without the spec-string round trip.
pub fn generate(
    generator: Generator,
    n: usize,
    seed: u64,
) -> Result<(PointCloud, IngestReport), IoError> {
    build_cloud(generator.points(n, seed))
}

fn bad_spec(spec: &str, reason: impl Into<String>) -> IoError {
    IoError::BadGeneratorSpec { spec: spec.to_string(), reason: reason.into() }
}

fn parse_generator_spec(spec: &str, default_seed: u64) -> Result<(Generator, usize, u64), IoError> {
    let s = spec.trim();
    let (name, rest) = match s.split_once('(') {
        Some(parts) => parts,
        None => return Err(bad_spec(spec, "expected name(n) or name(n,seed)")),
    };
    let Some(args) = rest.strip_suffix(')') else {
        return Err(bad_spec(spec, "missing closing parenthesis"));
    };
    let generator = Generator::from_name(name.trim()).ok_or_else(|| {
        let known: Vec<&str> = Generator::ALL.iter().map(|g| g.name()).collect();
        bad_spec(spec, format!("unknown generator, expected one of {}", known.join(", ")))
    })?;
    let args: Vec<&str> = args.split(',').map(str::trim).collect();
    if args.len() > 2 || args[0].is_empty() {
        return Err(bad_spec(spec, "expected name(n) or name(n,seed)"));
    }
    let n: usize = args[0]
        .parse()
        .map_err(|_| bad_spec(spec, "point count must be an unsigned integer"))?;
    let seed: u64 = match args.get(1) {
        Some(word) => word
            .parse()
            .map_err(|_| bad_spec(spec, "seed must be an unsigned integer"))?,
        None => default_seed,
    };
    Ok((generator, n, seed))
}

pub const TRACE_HEADER: &str = "k,point_id,action,metric,volume,area";

/// Writes the per-step trace as `trace.csv` in `dir` (created if absent)
/// and returns the file path. The first data row is the starting surface
/// with an empty point id; one row follows per step.
pub fn write_trace(trace: &ContractionTrace, dir: &Path) -> Result<PathBuf, IoError> {
    fs::create_dir_all(dir).map_err(|e| file_err(dir, e))?;
    let mut s = String::new();
    let _ = writeln!(s, "{TRACE_HEADER}");
    let init = trace.initial;
    let _ = writeln!(s, "0,,INITIAL,{},{},{}", init.metric, init.volume, init.area);
    for step in &trace.steps {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            step.k, step.point, step.action, step.metric, step.volume, step.area
        );
    }
    let path = dir.join("trace.csv");
    fs::write(&path, s).map_err(|e| file_err(&path, e))?;
    Ok(path)
}

/// Snapshot file for the surface after `index` insertions; index 0 is the
/// starting surface.
pub fn snapshot_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("step_{index:04}.obj"))
}

/// One parsed row of a trace CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    pub point: Option<PointId>,
    pub action: String,
    pub metric: f64,
    pub volume: f64,
    pub area: f64,
}

/// Reads a trace CSV written by [`write_trace`]. Values parse back to the
/// exact floats that were written.
pub fn read_trace(path: &Path) -> Result<Vec<TraceRow>, IoError> {
    let text = fs::read_to_string(path).map_err(|e| file_err(path, e))?;
    let mut rows = Vec::new();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == TRACE_HEADER => {}
        _ => return Err(parse_err(path, 1, format!("expected header {TRACE_HEADER:?}"))),
    }
    for (idx, raw) in lines {
        let line = idx + 1;
        let data = raw.trim();
        if data.is_empty() {
            continue;
        }
        let fields: Vec<&str> = data.split(',').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(parse_err(path, line, format!("expected 6 fields, found {}", fields.len())));
        }
        let k = fields[0]
            .parse()
            .map_err(|_| parse_err(path, line, format!("{:?} is not a step number", fields[0])))?;
        let point = if fields[1].is_empty() {
            None
        } else {
            Some(fields[1].parse().map_err(|_| {
                parse_err(path, line, format!("{:?} is not a point id", fields[1]))
            })?)
        };
        rows.push(TraceRow {
            k,
            point,
            action: fields[2].to_string(),
            metric: parse_coord(path, line, fields[3])?,
            volume: parse_coord(path, line, fields[4])?,
            area: parse_coord(path, line, fields[5])?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::{contract, ContractionConfig};
    use crate::hull::{classify_points, convex_hull};

    fn scratch() -> tempfile::TempDir {
        tempfile::tempdir().expect("scratch dir")
    }

    fn ball(n: usize, seed: u64) -> PointCloud {
        build_cloud(Generator::BallUniform.points(n, seed)).unwrap().0
    }

    #[test]
    fn xyz_tetrahedron_reads_four_points() {
        let dir = scratch();
        let path = dir.path().join("tetra.xyz");
        fs::write(&path, "# a tetrahedron\n0 0 0\n1 0 0  # apex row next\n\n0 1 0\n0 0 1\n")
            .unwrap();
        let (cloud, report) = read_cloud(&path).unwrap();
        assert_eq!(cloud.len(), 4);
        assert!(report.merged.is_empty());
        assert_eq!(cloud.point(1), Point3::new(1.0, 0.0, 0.0));
    }

    #[test]
    fn csv_duplicate_row_merges_with_a_warning() {
        let dir = scratch();
        let path = dir.path().join("cloud.csv");
        fs::write(&path, "x,y,z\n0,0,0\n2,0,0\n0,2,0\n0,0,2\n2,0,0\n").unwrap();
        let (cloud, report) = read_cloud(&path).unwrap();
        assert_eq!(cloud.len(), 4);
        assert_eq!(report.merged.len(), 1);
        assert_eq!(report.merged[0].input_index, 4);
        assert_eq!(report.merged[0].kept_id, 1);
    }

    #[test]
    fn csv_header_is_optional() {
        let dir = scratch();
        let with = dir.path().join("with.csv");
        let without = dir.path().join("without.csv");
        fs::write(&with, "x,y,z\n0,0,0\n1,0,0\n0,1,0\n0,0,1\n").unwrap();
        fs::write(&without, "0,0,0\n1,0,0\n0,1,0\n0,0,1\n").unwrap();
        let (a, _) = read_cloud(&with).unwrap();
        let (b, _) = read_cloud(&without).unwrap();
        assert_eq!(a.points(), b.points());
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let dir = scratch();
        let path = dir.path().join("bad.xyz");
        fs::write(&path, "0 0 0\n1 0 0\n1 zero 0\n0 0 1\n").unwrap();
        match read_cloud(&path) {
            Err(IoError::Parse { line, reason, .. }) => {
                assert_eq!(line, 3);
                assert!(reason.contains("zero"));
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
        let csv = dir.path().join("bad.csv");
        fs::write(&csv, "x,y,z\n0,0,0\n1,0\n").unwrap();
        match read_cloud(&csv) {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn fewer_than_four_points_is_rejected() {
        let dir = scratch();
        let path = dir.path().join("thin.xyz");
        fs::write(&path, "0 0 0\n1 0 0\n0 1 0\n").unwrap();
        match read_cloud(&path) {
            Err(IoError::DimensionalDeficiency { found }) => assert_eq!(found, 3),
            other => panic!("expected dimensional deficiency, got {other:?}"),
        }
    }

    #[test]
    fn cloud_round_trips_in_every_format() {
        let cloud = ball(30, 4);
        let dir = scratch();
        for name in ["cloud.xyz", "cloud.csv", "cloud.ply"] {
            let path = dir.path().join(name);
            write_cloud(&cloud, &path).unwrap();
            let (back, report) = read_cloud(&path).unwrap();
            assert_eq!(back.points(), cloud.points(), "{name} round trip");
            assert!(report.merged.is_empty());
        }
    }

    #[test]
    fn mesh_round_trips_in_both_formats() {
        let cloud = ball(40, 2);
        let mesh = convex_hull(&cloud).unwrap();
        let dir = scratch();
        for format in [MeshFormat::Obj, MeshFormat::Ply] {
            let path = dir.path().join(format!("hull.{}", format.extension()));
            write_mesh(&mesh, format, &path).unwrap();
            let back = read_mesh(&path).unwrap();
            assert_eq!(back.coords(), mesh.coords());
            let facets: Vec<_> = mesh.facets().map(|(_, v)| v).collect();
            let back_facets: Vec<_> = back.facets().map(|(_, v)| v).collect();
            assert_eq!(back_facets, facets);
            write_mesh(&mesh, format, &path).unwrap();
            let again = fs::read(&path).unwrap();
            let first = {
                let other = dir.path().join(format!("again.{}", format.extension()));
                write_mesh(&mesh, format, &other).unwrap();
                fs::read(&other).unwrap()
            };
            assert_eq!(again, first, "{format:?} output is byte stable");
        }
    }

    #[test]
    fn tetrahedron_obj_has_four_v_and_f_lines() {
        let (cloud, _) = build_cloud(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ])
        .unwrap();
        let mesh = convex_hull(&cloud).unwrap();
        let dir = scratch();
        let path = dir.path().join("tetra.obj");
        write_mesh(&mesh, MeshFormat::Obj, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 4);
    }

    #[test]
    fn mesh_ply_reads_back_as_a_cloud() {
        let cloud = ball(25, 11);
        let mesh = convex_hull(&cloud).unwrap();
        let dir = scratch();
        let path = dir.path().join("hull.ply");
        write_mesh(&mesh, MeshFormat::Ply, &path).unwrap();
        let (back, _) = read_cloud(&path).unwrap();
        assert_eq!(back.points(), cloud.points());
    }

    #[test]
    fn obj_face_index_out_of_range_is_rejected() {
        let dir = scratch();
        let path = dir.path().join("broken.obj");
        fs::write(&path, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n").unwrap();
        match read_mesh(&path) {
            Err(IoError::Parse { line, reason, .. }) => {
                assert_eq!(line, 4);
                assert!(reason.contains("out of range"));
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn generator_runs_are_reproducible() {
        let (a, _) = generate_cloud("ball-uniform(500,7)", 0).unwrap();
        let (b, _) = generate_cloud("ball-uniform(500,7)", 99).unwrap();
        assert_eq!(a.points(), b.points());
    }

    #[test]
    fn omitted_seed_falls_back_to_the_default() {
        let (a, _) = generate_cloud("ball-uniform(50,7)", 0).unwrap();
        let (b, _) = generate_cloud("ball-uniform(50)", 7).unwrap();
        assert_eq!(a.points(), b.points());
    }

    #[test]
    fn sphere_shell_points_sit_on_the_unit_sphere() {
        let (cloud, _) = generate_cloud("sphere-shell(50,7)", 0).unwrap();
        assert_eq!(cloud.len(), 50);
        for (_, p) in cloud.iter() {
            assert!((p.to_vector().norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn two_lobes_leaves_most_points_interior() {
        let (cloud, _) = generate_cloud("two-lobes(100,3)", 0).unwrap();
        let hull = convex_hull(&cloud).unwrap();
        let classes = classify_points(&cloud, &hull).unwrap();
        let hull_vertices = cloud.len() - classes.interior.len();
        assert_eq!(hull_vertices, 34);
        assert!((hull_vertices as f64) < 0.6 * cloud.len() as f64);
    }

    #[test]
    fn bad_generator_specs_are_rejected() {
        for spec in ["donut(50,1)", "ball-uniform", "ball-uniform(ten)", "ball-uniform(50,1,2)"] {
            match generate_cloud(spec, 0) {
                Err(IoError::BadGeneratorSpec { .. }) => {}
                other => panic!("{spec:?} should be rejected, got {other:?}"),
            }
        }
        match generate_cloud("ball-uniform(3,1)", 0) {
            Err(IoError::DimensionalDeficiency { found }) => assert_eq!(found, 3),
            other => panic!("expected dimensional deficiency, got {other:?}"),
        }
    }

    #[test]
    fn trace_csv_written_and_read_back() {
        let mut points = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(1.0, 0.0, 1.0),
            Point3::new(0.0, 1.0, 1.0),
            Point3::new(1.0, 1.0, 1.0),
        ];
        points.push(Point3::new(0.5, 0.5, 0.5));
        let (cloud, _) = build_cloud(points).unwrap();
        let run = contract(&cloud, &ContractionConfig::default()).unwrap();
        assert_eq!(run.trace.insertions, 1);

        let dir = scratch();
        let path = write_trace(&run.trace, dir.path()).unwrap();
        let rows = read_trace(&path).unwrap();
        assert_eq!(rows.len(), 1 + run.trace.steps.len());
        assert_eq!(rows[0].k, 0);
        assert_eq!(rows[0].point, None);
        assert_eq!(rows[0].action, "INITIAL");
        assert_eq!(rows[0].volume, run.trace.initial.volume);
        let last = rows.last().unwrap();
        let step = run.trace.steps.last().unwrap();
        assert_eq!(last.point, Some(step.point));
        assert_eq!(last.action, "INSERTED");
        assert_eq!(last.metric, step.metric);
        assert_eq!(last.volume, step.volume);
        assert_eq!(last.area, step.area);
        assert_eq!(snapshot_path(dir.path(), 3).file_name().unwrap(), "step_0003.obj");
    }
}
