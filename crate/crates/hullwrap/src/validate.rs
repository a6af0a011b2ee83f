//! Checks that certify a contracted surface: closed-manifold topology,
//! consistent orientation, freedom from self-intersection, containment of
//! the cloud, and the distance measurements that drive convergence.
//!
//! Every check is pure and deterministic.  The per-point distance and
//! containment scans parallelize over points; each point's answer depends
//! only on its own data, so thread count never changes a result.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bvh::{Aabb, FacetBvh};
use crate::contraction::{ContractionTrace, StepAction, TraceSample};
use crate::geom::{
    orientation, point_in_triangle_coplanar, signed_tet_volume, Point3, Triangle, Vector3,
};
use crate::mesh::{PointCloud, PointId, SurfaceMesh};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidateError {
    #[error("invalid mesh: {reason}")]
    InvalidMesh { reason: &'static str },
}

/// Topology diagnostics.  `closed` means every edge borders exactly two
/// facets and every vertex fan is a single cycle; `oriented` means the two
/// facets of each edge traverse it in opposite directions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifoldReport {
    pub closed: bool,
    pub oriented: bool,
    /// Edges with a facet count other than two.
    pub boundary_edges: Vec<(PointId, PointId)>,
    /// Edges whose two facets traverse it in the same direction.
    pub misoriented_edges: Vec<(PointId, PointId)>,
    /// Vertices whose incident facets do not close into one fan.
    pub split_vertices: Vec<PointId>,
}

/// ```
/// use hullwrap::mesh::SurfaceMesh;
/// use hullwrap::validate::is_closed_manifold;
/// use hullwrap::Point3;
///
/// // A tetrahedron with one face removed is open along three edges.
/// let coords = vec![
///     Point3::new(0.0, 0.0, 0.0),
///     Point3::new(1.0, 0.0, 0.0),
///     Point3::new(0.0, 1.0, 0.0),
///     Point3::new(0.0, 0.0, 1.0),
/// ];
/// let mesh = SurfaceMesh::from_coords(coords, vec![[0, 2, 1], [0, 1, 3], [1, 2, 3]]);
/// let report = is_closed_manifold(&mesh);
/// assert!(!report.closed);
/// assert_eq!(report.boundary_edges.len(), 3);
/// ```
pub fn is_closed_manifold(mesh: &SurfaceMesh) -> ManifoldReport {
    let mut boundary_edges = Vec::new();
    let mut misoriented_edges = Vec::new();
    for (&edge, incident) in mesh.edges() {
        if incident.len() != 2 {
            boundary_edges.push(edge);
        } else if incident[0].1 == incident[1].1 {
            misoriented_edges.push(edge);
        }
    }

    // Around vertex `v`, the facet (v, x, y) contributes the link step
    // x -> y; a closed fan is exactly one cycle through all steps.
    let mut links: BTreeMap<PointId, BTreeMap<PointId, PointId>> = BTreeMap::new();
    let mut split_vertices = Vec::new();
    for slot in mesh.facet_slots() {
        let [a, b, c] = mesh.facet_verts(slot);
        for (v, x, y) in [(a, b, c), (b, c, a), (c, a, b)] {
            if links.entry(v).or_default().insert(x, y).is_some() {
                split_vertices.push(v);
            }
        }
    }
    for (&v, next) in &links {
        let start = *next.keys().next().expect("non-empty link");
        let mut cur = start;
        let mut steps = 0;
        loop {
            let Some(&succ) = next.get(&cur) else { break };
            steps += 1;
            cur = succ;
            if cur == start || steps == next.len() {
                break;
            }
        }
        if !(cur == start && steps == next.len()) {
            split_vertices.push(v);
        }
    }
    split_vertices.sort_unstable();
    split_vertices.dedup();

    ManifoldReport {
        closed: boundary_edges.is_empty() && split_vertices.is_empty(),
        oriented: misoriented_edges.is_empty(),
        boundary_edges,
        misoriented_edges,
        split_vertices,
    }
}

/// A facet pair in forbidden contact, identified by slot and vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FacetPairWitness {
    pub slots: [u32; 2],
    pub facets: [[PointId; 3]; 2],
}

/// Outcome of a self-intersection scan.  Zero-area facets cannot be tested
/// geometrically, so their presence alone fails the scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionScan {
    pub free: bool,
    pub witnesses: Vec<FacetPairWitness>,
    pub degenerate_facets: Vec<u32>,
}

fn scan_result(mesh: &SurfaceMesh, witnesses: Vec<FacetPairWitness>) -> IntersectionScan {
    let degenerate_facets: Vec<u32> =
        mesh.facet_slots().filter(|&s| mesh.triangle(s).is_none()).collect();
    IntersectionScan {
        free: witnesses.is_empty() && degenerate_facets.is_empty(),
        witnesses,
        degenerate_facets,
    }
}

/// True when the pair is in forbidden contact.  Sharing all three ids is a
/// duplicate facet and forbidden outright; otherwise the geometric test
/// runs with the declared adjacency.
fn forbidden_pair(mesh: &SurfaceMesh, tris: &[Option<Triangle>], s: u32, t: u32) -> bool {
    let (Some(t1), Some(t2)) = (&tris[s as usize], &tris[t as usize]) else {
        return false;
    };
    match mesh.shared_topology(s, t) {
        None => true,
        Some(shared) => crate::geom::triangles_intersect(t1, t2, shared),
    }
}

fn facet_triangles(mesh: &SurfaceMesh) -> Vec<Option<Triangle>> {
    mesh.facet_slots().map(|s| mesh.triangle(s)).collect()
}

/// Self-intersection scan pruned by a bounding-box tree.  Witness pairs
/// come out ascending by slot pair.
pub fn self_intersection_scan(mesh: &SurfaceMesh) -> IntersectionScan {
    let tris = facet_triangles(mesh);
    let bvh = FacetBvh::from_mesh(mesh);
    let mut witnesses = Vec::new();
    let mut buf = Vec::new();
    for s in mesh.facet_slots() {
        let Some(tri) = &tris[s as usize] else { continue };
        bvh.query_box(&Aabb::of_triangle(tri.a(), tri.b(), tri.c()), &mut buf);
        for &t in &buf {
            if t > s && forbidden_pair(mesh, &tris, s, t) {
                witnesses.push(FacetPairWitness {
                    slots: [s, t],
                    facets: [mesh.facet_verts(s), mesh.facet_verts(t)],
                });
            }
        }
    }
    scan_result(mesh, witnesses)
}

/// Reference scan over every facet pair; the pruned scan must match it.
pub fn exhaustive_intersection_scan(mesh: &SurfaceMesh) -> IntersectionScan {
    let tris = facet_triangles(mesh);
    let slots: Vec<u32> = mesh.facet_slots().collect();
    let mut witnesses = Vec::new();
    for (i, &s) in slots.iter().enumerate() {
        for &t in &slots[i + 1..] {
            if forbidden_pair(mesh, &tris, s, t) {
                witnesses.push(FacetPairWitness {
                    slots: [s, t],
                    facets: [mesh.facet_verts(s), mesh.facet_verts(t)],
                });
            }
        }
    }
    scan_result(mesh, witnesses)
}

/// Squared distance from each cloud point to the surface, by point id.
/// A point that is a mesh vertex with identical coordinates scores an
/// exact zero without a scan.
fn point_distances_squared(mesh: &SurfaceMesh, cloud: &PointCloud) -> Vec<f64> {
    let tris = facet_triangles(mesh);
    cloud
        .points()
        .par_iter()
        .enumerate()
        .map(|(id, &p)| {
            if id < mesh.coords().len() && mesh.is_surface_vertex(id) && mesh.point(id) == p {
                return 0.0;
            }
            let mut best = f64::INFINITY;
            for tri in tris.iter().flatten() {
                let d = tri.distance_squared(p);
                if d < best {
                    best = d;
                }
            }
            best
        })
        .collect()
}

/// Sum of squared point-to-surface distances.
pub fn surface_metric(mesh: &SurfaceMesh, cloud: &PointCloud) -> f64 {
    point_distances_squared(mesh, cloud).iter().sum()
}

/// Largest point-to-surface distance.
pub fn directed_hausdorff(cloud: &PointCloud, mesh: &SurfaceMesh) -> f64 {
    point_distances_squared(mesh, cloud).iter().fold(0.0_f64, |m, &d| m.max(d)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Place {
    OnSurface,
    Inside,
    Outside,
}

enum RayHit {
    Miss,
    Cross,
    Degenerate,
}

/// Does the open segment (p, q) cross the triangle's interior?  Any
/// contact with the triangle's boundary or plane-grazing configuration is
/// reported as degenerate so the caller can pick another ray.  `p` is
/// known not to lie on the surface; `q` lies strictly outside it.
fn segment_parity_hit(p: Point3, q: Point3, tri: &Triangle) -> RayHit {
    let [a, b, c] = tri.vertices();
    let dp = orientation(a, b, c, p);
    let dq = orientation(a, b, c, q);
    if dp == 0 || dq == 0 {
        if dp == 0 && dq == 0 {
            return RayHit::Degenerate;
        }
        // An endpoint touches the plane but cannot sit inside the facet:
        // `p` is off-surface and `q` is beyond every facet's box.
        return RayHit::Miss;
    }
    if dp == dq {
        return RayHit::Miss;
    }
    let u = orientation(p, q, a, b);
    let v = orientation(p, q, b, c);
    let w = orientation(p, q, c, a);
    if u == 0 || v == 0 || w == 0 {
        return RayHit::Degenerate;
    }
    if u == v && v == w {
        RayHit::Cross
    } else {
        RayHit::Miss
    }
}

const RAY_SEED: u64 = 0x5eed_5a7e_11ad_90b1;
const MAX_RAY_ATTEMPTS: usize = 32;

fn place_point(
    id: PointId,
    p: Point3,
    tris: &[Option<Triangle>],
    bvh: &FacetBvh,
    reach: f64,
) -> Place {
    let mut buf = Vec::new();
    bvh.query_box(&Aabb { min: p, max: p }, &mut buf);
    for &slot in &buf {
        let Some(tri) = &tris[slot as usize] else { continue };
        let [a, b, c] = tri.vertices();
        if orientation(a, b, c, p) == 0 && point_in_triangle_coplanar(p, tri) {
            return Place::OnSurface;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(RAY_SEED ^ id as u64);
    for attempt in 0..MAX_RAY_ATTEMPTS {
        let dir = if attempt == 0 {
            Vector3::new(0.0, 1.0, 0.0)
        } else {
            let [x, y, z]: [f64; 3] = UnitSphere.sample(&mut rng);
            Vector3::new(x, y, z)
        };
        let q = p + dir * reach;
        let mut crossings = 0_usize;
        let mut degenerate = false;
        bvh.query_segment(p, q, &mut buf);
        for &slot in &buf {
            let Some(tri) = &tris[slot as usize] else { continue };
            match segment_parity_hit(p, q, tri) {
                RayHit::Miss => {}
                RayHit::Cross => crossings += 1,
                RayHit::Degenerate => {
                    degenerate = true;
                    break;
                }
            }
        }
        if !degenerate {
            return if crossings % 2 == 1 { Place::Inside } else { Place::Outside };
        }
    }
    unreachable!("no ray direction avoided all facet boundaries for point {id}");
}

/// Ids of cloud points strictly outside the surface, ascending.  Assumes
/// the mesh already passed the closed-manifold and intersection checks.
fn outside_points(cloud: &PointCloud, mesh: &SurfaceMesh) -> Vec<PointId> {
    let tris = facet_triangles(mesh);
    let bvh = FacetBvh::from_mesh(mesh);
    let (lo, hi) = mesh_bounds(mesh);
    let center = Point3::new(
        0.5 * (lo.x + hi.x),
        0.5 * (lo.y + hi.y),
        0.5 * (lo.z + hi.z),
    );
    let diag = (hi - lo).norm();
    let places: Vec<Place> = cloud
        .points()
        .par_iter()
        .enumerate()
        .map(|(id, &p)| {
            if id < mesh.coords().len() && mesh.is_surface_vertex(id) && mesh.point(id) == p {
                return Place::OnSurface;
            }
            // Far enough that the ray's end is beyond every facet no
            // matter where `p` sits.
            let reach = 2.0 * diag + 2.0 * (p - center).norm() + 1.0;
            place_point(id, p, &tris, &bvh, reach)
        })
        .collect();
    places
        .iter()
        .enumerate()
        .filter(|(_, place)| **place == Place::Outside)
        .map(|(id, _)| id)
        .collect()
}

fn mesh_bounds(mesh: &SurfaceMesh) -> (Point3, Point3) {
    let mut aabb = Aabb::empty();
    for slot in mesh.facet_slots() {
        let [a, b, c] = mesh.facet_verts(slot);
        for v in [a, b, c] {
            aabb.include(mesh.point(v));
        }
    }
    (aabb.min, aabb.max)
}

/// True when every cloud point is inside or on the closed surface.
pub fn containment_check(cloud: &PointCloud, mesh: &SurfaceMesh) -> Result<bool, ValidateError> {
    let manifold = is_closed_manifold(mesh);
    if !(manifold.closed && manifold.oriented) {
        return Err(ValidateError::InvalidMesh {
            reason: "surface is not a closed oriented manifold",
        });
    }
    if !self_intersection_scan(mesh).free {
        return Err(ValidateError::InvalidMesh { reason: "surface intersects itself" });
    }
    Ok(outside_points(cloud, mesh).is_empty())
}

/// The cloud point farthest from the surface when any point misses it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorstOffender {
    pub point: PointId,
    pub distance: f64,
}

/// Per-step replay checks; present in a report only when a trace was
/// supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceChecks {
    /// The metric falls strictly at every insertion and is untouched by
    /// skipped or deferred steps.
    pub metric_strictly_decreasing: bool,
    pub hausdorff_non_increasing: bool,
    /// Each insertion's volume drop equals the cut tetrahedron's volume.
    pub volume_bookkeeping_ok: bool,
    pub area_non_decreasing: bool,
    /// Recorded insertion total matches the number of inserted steps.
    pub insertion_count_ok: bool,
    /// Trace endpoint agrees with the mesh being validated.
    pub final_state_matches: bool,
}

impl TraceChecks {
    pub fn all_ok(&self) -> bool {
        self.metric_strictly_decreasing
            && self.hausdorff_non_increasing
            && self.volume_bookkeeping_ok
            && self.area_non_decreasing
            && self.insertion_count_ok
            && self.final_state_matches
    }
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * scale.abs().max(1.0e-30)
}

fn check_trace(
    trace: &ContractionTrace,
    cloud: &PointCloud,
    mesh_volume: f64,
    mesh_area: f64,
    mesh_metric: f64,
) -> TraceChecks {
    let mut metric_ok = true;
    let mut hausdorff_ok = true;
    let mut volume_ok = true;
    let mut area_ok = true;
    let mut inserted = 0_usize;
    let mut prev = trace.initial;
    for step in &trace.steps {
        match step.action {
            StepAction::Inserted => {
                inserted += 1;
                metric_ok &= step.metric < prev.metric;
                hausdorff_ok &= step.hausdorff <= prev.hausdorff;
                // Signed accounting: each dent subtracts its cut tetrahedron.
                // The cut is never positive, but an exactly coplanar
                // absorption can round to a signed zero either way, so the
                // check is the identity, not the sign.
                let [a, b, c] = step.facet;
                let cut = signed_tet_volume(
                    cloud.point(a),
                    cloud.point(b),
                    cloud.point(c),
                    cloud.point(step.point),
                );
                volume_ok &=
                    close(step.volume, prev.volume + cut, prev.volume.abs().max(cut.abs()));
                area_ok &= step.area >= prev.area * (1.0 - 1e-12);
            }
            StepAction::Deferred | StepAction::SkippedSharedFacet => {
                metric_ok &= step.metric == prev.metric;
                hausdorff_ok &= step.hausdorff == prev.hausdorff;
                volume_ok &= step.volume == prev.volume;
                area_ok &= step.area == prev.area;
            }
        }
        prev = TraceSample {
            metric: step.metric,
            volume: step.volume,
            area: step.area,
            hausdorff: step.hausdorff,
        };
    }
    let last = trace.final_sample();
    TraceChecks {
        metric_strictly_decreasing: metric_ok,
        hausdorff_non_increasing: hausdorff_ok,
        volume_bookkeeping_ok: volume_ok,
        area_non_decreasing: area_ok,
        insertion_count_ok: inserted == trace.insertions,
        final_state_matches: close(last.volume, mesh_volume, mesh_volume)
            && close(last.area, mesh_area, mesh_area)
            && close(last.metric, mesh_metric, last.metric.max(mesh_metric).max(1.0)),
    }
}

/// Checks over a trace read back from CSV. The file carries no facet
/// geometry, so the volume check is monotonicity rather than the exact
/// per-cut accounting of [`TraceChecks`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceRowChecks {
    /// Row 0 is the starting surface, step numbers count up by one, and
    /// every action is a known kind.
    pub well_formed: bool,
    pub metric_strictly_decreasing: bool,
    pub volume_non_increasing: bool,
    pub area_non_decreasing: bool,
    /// Deferred and skipped rows repeat the previous row's values exactly.
    pub steady_outside_insertions: bool,
    /// Last row agrees with the mesh being validated.
    pub final_state_matches: bool,
}

impl TraceRowChecks {
    pub fn all_ok(&self) -> bool {
        self.well_formed
            && self.metric_strictly_decreasing
            && self.volume_non_increasing
            && self.area_non_decreasing
            && self.steady_outside_insertions
            && self.final_state_matches
    }
}

/// Checks CSV trace rows against the mesh-derived end state. Written and
/// re-read values are bit-identical, so the within-trace comparisons are
/// exact; only the cross-check against the mesh uses tolerances.
pub fn check_trace_rows(
    rows: &[crate::io::TraceRow],
    mesh_volume: f64,
    mesh_area: f64,
    mesh_metric: f64,
) -> TraceRowChecks {
    let mut well_formed = !rows.is_empty();
    let mut metric_ok = true;
    let mut volume_ok = true;
    let mut area_ok = true;
    let mut steady_ok = true;
    if let Some(first) = rows.first() {
        well_formed &= first.k == 0 && first.point.is_none() && first.action == "INITIAL";
    }
    for (i, row) in rows.iter().enumerate().skip(1) {
        let prev = &rows[i - 1];
        well_formed &= row.k == i && row.point.is_some();
        match row.action.as_str() {
            "INSERTED" => {
                metric_ok &= row.metric < prev.metric;
                volume_ok &= row.volume <= prev.volume + 1e-12 * prev.volume.abs();
                area_ok &= row.area >= prev.area * (1.0 - 1e-12);
            }
            "DEFERRED" | "SKIPPED_SHARED_FACET" => {
                steady_ok &= row.metric == prev.metric
                    && row.volume == prev.volume
                    && row.area == prev.area;
            }
            _ => well_formed = false,
        }
    }
    let last = rows.last();
    TraceRowChecks {
        well_formed,
        metric_strictly_decreasing: metric_ok,
        volume_non_increasing: volume_ok,
        area_non_decreasing: area_ok,
        steady_outside_insertions: steady_ok,
        final_state_matches: last.is_some_and(|row| {
            close(row.volume, mesh_volume, mesh_volume)
                && close(row.area, mesh_area, mesh_area)
                && close(row.metric, mesh_metric, row.metric.max(mesh_metric).max(1.0))
        }),
    }
}

/// Everything the checks can say about a surface against its cloud.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub closed_manifold: bool,
    pub orientation_consistent: bool,
    /// Topology diagnostics, present when either topology flag is false.
    pub manifold_defects: Option<ManifoldReport>,
    pub self_intersection_free: bool,
    pub intersection_witnesses: Vec<FacetPairWitness>,
    pub degenerate_facets: Vec<u32>,
    pub all_points_on_surface: bool,
    pub worst_offender: Option<WorstOffender>,
    pub containment_ok: bool,
    /// False when the containment scan was skipped because its
    /// preconditions failed.
    pub containment_evaluated: bool,
    pub outside_points: Vec<PointId>,
    pub metric: f64,
    pub hausdorff: f64,
    pub volume: f64,
    pub area: f64,
    pub tolerance: f64,
    pub trace: Option<TraceChecks>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.closed_manifold
            && self.orientation_consistent
            && self.self_intersection_free
            && self.all_points_on_surface
            && self.containment_ok
            && self.trace.as_ref().is_none_or(TraceChecks::all_ok)
    }

    /// One `name=value` line per field; witness lines appear only for
    /// failed checks.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |name: &str, value: &dyn std::fmt::Display| {
            writeln!(out, "{name}={value}").expect("string write");
        };
        line("closed_manifold", &self.closed_manifold);
        line("orientation_consistent", &self.orientation_consistent);
        line("self_intersection_free", &self.self_intersection_free);
        line("intersection_witnesses", &self.intersection_witnesses.len());
        line("degenerate_facets", &self.degenerate_facets.len());
        line("all_points_on_surface", &self.all_points_on_surface);
        if let Some(worst) = &self.worst_offender {
            line("worst_offender_point", &worst.point);
            line("worst_offender_distance", &worst.distance);
        }
        line("containment_ok", &self.containment_ok);
        line("outside_points", &self.outside_points.len());
        line("metric", &self.metric);
        line("hausdorff", &self.hausdorff);
        line("volume", &self.volume);
        line("area", &self.area);
        line("tolerance", &self.tolerance);
        if let Some(trace) = &self.trace {
            line("trace_metric_strictly_decreasing", &trace.metric_strictly_decreasing);
            line("trace_hausdorff_non_increasing", &trace.hausdorff_non_increasing);
            line("trace_volume_bookkeeping_ok", &trace.volume_bookkeeping_ok);
            line("trace_area_non_decreasing", &trace.area_non_decreasing);
            line("trace_insertion_count_ok", &trace.insertion_count_ok);
            line("trace_final_state_matches", &trace.final_state_matches);
        }
        line("passed", &self.passed());
        out
    }
}

/// Runs every check and aggregates the results; failures land in the
/// report instead of an error.  `tolerance` defaults to 1e-9 times the
/// cloud's bounding-box diagonal.
pub fn validate(
    mesh: &SurfaceMesh,
    cloud: &PointCloud,
    trace: Option<&ContractionTrace>,
    tolerance: Option<f64>,
) -> ValidationReport {
    let tolerance = tolerance.unwrap_or_else(|| 1e-9 * cloud.bbox_diagonal());
    let manifold = is_closed_manifold(mesh);
    let scan = self_intersection_scan(mesh);

    let distances = point_distances_squared(mesh, cloud);
    let metric: f64 = distances.iter().sum();
    let worst = distances
        .iter()
        .enumerate()
        .fold(None::<(usize, f64)>, |acc, (id, &d)| match acc {
            Some((_, best)) if best >= d => acc,
            _ => Some((id, d)),
        });
    let hausdorff = worst.map_or(0.0, |(_, d)| d.sqrt());
    let all_on = distances.iter().all(|&d| d.sqrt() <= tolerance);

    let containment_evaluated = manifold.closed && manifold.oriented && scan.free;
    let outside = if containment_evaluated { outside_points(cloud, mesh) } else { Vec::new() };
    let containment_ok = containment_evaluated && outside.is_empty();

    let volume = mesh.enclosed_volume();
    let area = mesh.surface_area();
    let trace_checks = trace.map(|t| check_trace(t, cloud, volume, area, metric));

    ValidationReport {
        closed_manifold: manifold.closed,
        orientation_consistent: manifold.oriented,
        manifold_defects: (!manifold.closed || !manifold.oriented).then_some(manifold),
        self_intersection_free: scan.free,
        intersection_witnesses: scan.witnesses,
        degenerate_facets: scan.degenerate_facets,
        all_points_on_surface: all_on,
        worst_offender: (!all_on)
            .then(|| worst.map(|(point, d)| WorstOffender { point, distance: d.sqrt() }))
            .flatten(),
        containment_ok,
        containment_evaluated,
        outside_points: outside,
        metric,
        hausdorff,
        volume,
        area,
        tolerance,
        trace: trace_checks,
    }
}
