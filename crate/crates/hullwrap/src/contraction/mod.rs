//! The contraction engine: pulls the convex hull inward until every cloud
//! point is a surface vertex, one tetrahedral dent at a time.
//!
//! Work proceeds in passes.  Each pass ranks the remaining points by
//! distance to the current surface and walks that queue once.  A point is
//! inserted at its nearest facet when the guard allows it, retried at the
//! next-nearest facets up to a configured breadth otherwise, and deferred
//! to the next pass when every candidate is blocked.  A point whose queued
//! facet was replaced earlier in the same pass is skipped and re-ranked in
//! the next pass.  A full pass without a single insertion means no legal
//! move exists; the run stalls rather than force an intersection.

mod guard;
mod priority;
mod tracker;

pub use guard::{guard_insertion, GuardDecision, IntersectionWitness};
pub use priority::{compute_priorities, nearest_facets, PriorityMode, QueueEntry};
pub use tracker::{DistanceKind, DistanceTracker};

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bvh::{facet_bounds, FacetBvh};
use crate::geom::{orientation, signed_tet_volume, Point3, Triangle};
use crate::hull::{classify_points, convex_hull, HullError};
use crate::mesh::{FacetRef, PointCloud, PointId, SurfaceMesh};

#[derive(Debug, Clone)]
pub struct ContractionConfig {
    pub priority: PriorityMode,
    /// How many candidate facets to try per point before deferring it.
    pub fallback_breadth: usize,
    /// Distance below which a point counts as on the surface in reports;
    /// `None` derives 1e-9 times the cloud's bounding-box diagonal.
    pub on_surface_tolerance: Option<f64>,
    /// Hard cap on passes; exceeding it stalls the run.  `None` lets the
    /// engine run until completion or a pass without progress.
    pub max_passes: Option<usize>,
    /// Keep a per-step record of the run.
    pub record_steps: bool,
}

impl Default for ContractionConfig {
    fn default() -> Self {
        ContractionConfig {
            priority: PriorityMode::Centroid,
            fallback_breadth: 8,
            on_surface_tolerance: None,
            max_passes: None,
            record_steps: true,
        }
    }
}

/// Where a point stands relative to the current surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    OnSurface,
    Pending,
    /// Every candidate facet was blocked this pass; retried next pass.
    Deferred,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepAction {
    Inserted,
    Deferred,
    SkippedSharedFacet,
}

impl fmt::Display for StepAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepAction::Inserted => "INSERTED",
            StepAction::Deferred => "DEFERRED",
            StepAction::SkippedSharedFacet => "SKIPPED_SHARED_FACET",
        })
    }
}

/// Surface measurements at one moment of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    /// Sum of squared point-to-surface distances.
    pub metric: f64,
    pub volume: f64,
    pub area: f64,
    /// Largest point-to-surface distance.
    pub hausdorff: f64,
}

/// One processed queue entry.  Measurements are taken after the action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub k: usize,
    pub point: PointId,
    /// The replaced facet for insertions; the attempted nearest facet
    /// otherwise.
    pub facet: [PointId; 3],
    pub action: StepAction,
    pub metric: f64,
    pub volume: f64,
    pub area: f64,
    pub hausdorff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionTrace {
    /// State of the starting hull, before any step.
    pub initial: TraceSample,
    pub steps: Vec<StepRecord>,
    pub insertions: usize,
    pub passes: usize,
}

impl ContractionTrace {
    /// Measurements at the end of the run.
    pub fn final_sample(&self) -> TraceSample {
        self.steps.last().map_or(self.initial, |s| TraceSample {
            metric: s.metric,
            volume: s.volume,
            area: s.area,
            hausdorff: s.hausdorff,
        })
    }
}

/// A point left off the surface when a run stalls, with the contacts that
/// blocked its latest attempts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockedPoint {
    pub point: PointId,
    pub witnesses: Vec<IntersectionWitness>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    /// Every cloud point is a vertex of the final surface.
    Complete,
    /// Pending points remain but no legal insertion exists.
    Stalled { blocked: Vec<BlockedPoint> },
}

impl Outcome {
    pub fn is_complete(&self) -> bool {
        matches!(self, Outcome::Complete)
    }
}

/// Wall time spent per phase; informational only, everything else about a
/// run is deterministic.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseTimings {
    pub hull: Duration,
    pub prioritize: Duration,
    pub insert_guard: Duration,
}

/// Everything a finished run produces.
#[derive(Debug, Clone)]
pub struct ContractionRun {
    pub mesh: SurfaceMesh,
    pub trace: ContractionTrace,
    pub outcome: Outcome,
    /// Vertex count of the starting hull.
    pub hull_vertices: usize,
    pub timings: PhaseTimings,
    /// Resolved on-surface tolerance for downstream checks.
    pub on_surface_tolerance: f64,
}

/// Runs a contraction to its end.
pub fn contract(
    cloud: &PointCloud,
    config: &ContractionConfig,
) -> Result<ContractionRun, HullError> {
    let mut engine = Contraction::new(cloud, config.clone())?;
    while engine.step().is_some() {}
    Ok(engine.finish())
}

/// A contraction in progress, driven one queue entry at a time so callers
/// can observe or snapshot the surface between steps.
///
/// ```
/// use hullwrap::contraction::{Contraction, ContractionConfig, StepAction};
/// use hullwrap::io::generate_cloud;
///
/// let (cloud, _) = generate_cloud("ball-uniform(30,1)", 0)?;
/// let mut engine = Contraction::new(&cloud, ContractionConfig::default())?;
/// let mut metric = f64::INFINITY;
/// while let Some(step) = engine.step() {
///     if step.action == StepAction::Inserted {
///         assert!(step.metric < metric);
///         metric = step.metric;
///     }
/// }
/// let run = engine.finish();
/// assert!(run.outcome.is_complete());
/// # Ok::<(), Box<dyn std::error::Error>>(())
/// ```
pub struct Contraction<'a> {
    cloud: &'a PointCloud,
    config: ContractionConfig,
    mesh: SurfaceMesh,
    bvh: FacetBvh,
    /// True nearest-facet distances; feeds the metric and Hausdorff values.
    metric: DistanceTracker,
    /// Present when the priority mode differs from the metric's distance.
    priority: Option<DistanceTracker>,
    status: Vec<PointStatus>,
    queue: Vec<QueueEntry>,
    queue_pos: usize,
    k: usize,
    passes: usize,
    pass_insertions: usize,
    insertions: usize,
    remaining: usize,
    initial: TraceSample,
    current: TraceSample,
    steps: Vec<StepRecord>,
    witnesses: BTreeMap<PointId, Vec<IntersectionWitness>>,
    outcome: Option<Outcome>,
    hull_vertices: usize,
    tolerance: f64,
    timings: PhaseTimings,
}

impl<'a> Contraction<'a> {
    pub fn new(cloud: &'a PointCloud, config: ContractionConfig) -> Result<Self, HullError> {
        assert!(config.fallback_breadth >= 1, "fallback breadth must be at least 1");
        let t0 = Instant::now();
        let mesh = convex_hull(cloud)?;
        let classes = classify_points(cloud, &mesh)?;
        let hull_time = t0.elapsed();

        let bvh = FacetBvh::from_mesh(&mesh);
        let metric =
            DistanceTracker::new(DistanceKind::TrueDistance, &mesh, classes.interior.iter().copied());
        let priority = match config.priority {
            PriorityMode::TrueDistance => None,
            mode => Some(DistanceTracker::new(mode.kind(), &mesh, classes.interior.iter().copied())),
        };
        let mut status = vec![PointStatus::Pending; cloud.len()];
        for &id in &classes.on_surface {
            status[id] = PointStatus::OnSurface;
        }
        let initial = TraceSample {
            metric: metric.sum_squared(),
            volume: mesh.enclosed_volume(),
            area: mesh.surface_area(),
            hausdorff: metric.max_distance(),
        };
        let tolerance =
            config.on_surface_tolerance.unwrap_or_else(|| 1e-9 * cloud.bbox_diagonal());
        Ok(Contraction {
            cloud,
            remaining: classes.interior.len(),
            hull_vertices: classes.on_surface.len(),
            config,
            mesh,
            bvh,
            metric,
            priority,
            status,
            queue: Vec::new(),
            queue_pos: 0,
            k: 0,
            passes: 0,
            pass_insertions: 0,
            insertions: 0,
            initial,
            current: initial,
            steps: Vec::new(),
            witnesses: BTreeMap::new(),
            outcome: None,
            tolerance,
            timings: PhaseTimings { hull: hull_time, ..PhaseTimings::default() },
        })
    }

    pub fn mesh(&self) -> &SurfaceMesh {
        &self.mesh
    }

    pub fn cloud(&self) -> &PointCloud {
        self.cloud
    }

    pub fn status(&self, id: PointId) -> PointStatus {
        self.status[id]
    }

    pub fn outcome(&self) -> Option<&Outcome> {
        self.outcome.as_ref()
    }

    pub fn insertions(&self) -> usize {
        self.insertions
    }

    pub fn passes(&self) -> usize {
        self.passes
    }

    /// Points not yet on the surface.
    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn current_sample(&self) -> TraceSample {
        self.current
    }

    /// Processes the next queue entry, starting a new pass when the current
    /// one is exhausted.  Returns `None` once the outcome is decided.
    pub fn step(&mut self) -> Option<StepRecord> {
        if self.outcome.is_some() {
            return None;
        }
        while self.queue_pos == self.queue.len() {
            if self.remaining == 0 {
                self.outcome = Some(Outcome::Complete);
                return None;
            }
            if self.passes > 0 && self.pass_insertions == 0 {
                self.outcome = Some(self.stalled_outcome());
                return None;
            }
            if self.config.max_passes.is_some_and(|cap| self.passes >= cap) {
                self.outcome = Some(self.stalled_outcome());
                return None;
            }
            self.begin_pass();
        }
        let entry = self.queue[self.queue_pos];
        self.queue_pos += 1;
        let t0 = Instant::now();
        let record = self.process(entry);
        self.timings.insert_guard += t0.elapsed();
        if self.config.record_steps {
            self.steps.push(record);
        }
        Some(record)
    }

    pub fn finish(self) -> ContractionRun {
        let outcome = self.outcome.expect("drive step() until it returns None");
        ContractionRun {
            mesh: self.mesh,
            trace: ContractionTrace {
                initial: self.initial,
                steps: self.steps,
                insertions: self.insertions,
                passes: self.passes,
            },
            outcome,
            hull_vertices: self.hull_vertices,
            timings: self.timings,
            on_surface_tolerance: self.tolerance,
        }
    }

    fn begin_pass(&mut self) {
        let t0 = Instant::now();
        let source = self.priority.as_ref().unwrap_or(&self.metric);
        let entries: Vec<(PointId, f64, FacetRef)> = source.entries().collect();
        let mut queue = Vec::with_capacity(entries.len());
        for (point, dist_sq, facet) in entries {
            self.status[point] = PointStatus::Pending;
            queue.push(QueueEntry {
                point,
                facet,
                facet_verts: self.mesh.facet_verts(facet.slot),
                distance: dist_sq.sqrt(),
            });
        }
        priority::sort_queue(&mut queue);
        self.queue = queue;
        self.queue_pos = 0;
        self.pass_insertions = 0;
        self.passes += 1;
        self.timings.prioritize += t0.elapsed();
    }

    fn process(&mut self, entry: QueueEntry) -> StepRecord {
        self.k += 1;
        debug_assert_eq!(self.status[entry.point], PointStatus::Pending);
        if !self.mesh.is_live(entry.facet) {
            // The queued facet was replaced earlier this pass; the point
            // waits for fresh priorities.
            return self.sample_record(entry.point, entry.facet_verts, StepAction::SkippedSharedFacet);
        }
        let breadth = self.config.fallback_breadth;
        let mut witnesses: Vec<IntersectionWitness> = Vec::new();
        let mut candidates: Vec<FacetRef> = Vec::with_capacity(breadth);
        candidates.push(entry.facet);
        let mut next = 0;
        while next < candidates.len() {
            let facet = candidates[next];
            next += 1;
            if let Some(replaced) = self.attempt(entry.point, facet, &mut witnesses) {
                return self.sample_record(entry.point, replaced, StepAction::Inserted);
            }
            if next == candidates.len() && candidates.len() < breadth {
                // Fallback candidates are ranked by true distance to the
                // facet regardless of queue priority; the dent should go
                // where the point actually is.  Facets the point cannot dent
                // under any circumstances do not consume fallback slots.
                for (_, cand) in nearest_facets(
                    entry.point,
                    &self.mesh,
                    PriorityMode::TrueDistance,
                    self.mesh.facet_count(),
                ) {
                    if candidates.len() >= breadth {
                        break;
                    }
                    if !candidates.contains(&cand) && self.viable(entry.point, cand) {
                        candidates.push(cand);
                    }
                }
            }
        }
        self.status[entry.point] = PointStatus::Deferred;
        self.witnesses.insert(entry.point, witnesses);
        self.sample_record(entry.point, entry.facet_verts, StepAction::Deferred)
    }

    /// Could this facet ever host a dent toward the point?  The point must
    /// sit on or under the facet plane and all three tent walls must be
    /// formable; facets failing either test are not candidates at all.
    fn viable(&self, point: PointId, facet: FacetRef) -> bool {
        let [a, b, c] = self.mesh.facet_verts(facet.slot);
        let p = self.mesh.point(point);
        let (pa, pb, pc) = (self.mesh.point(a), self.mesh.point(b), self.mesh.point(c));
        if orientation(pa, pb, pc, p) > 0 {
            return false;
        }
        [(pa, pb), (pb, pc), (pc, pa)]
            .into_iter()
            .all(|(u, v)| Triangle::new(u, v, p).is_ok())
    }

    /// Tries one candidate facet.  On success the surface, index, trackers,
    /// and running measurements are all updated and the replaced facet's
    /// triple is returned.
    fn attempt(
        &mut self,
        point: PointId,
        facet: FacetRef,
        witnesses: &mut Vec<IntersectionWitness>,
    ) -> Option<[PointId; 3]> {
        debug_assert!(self.mesh.is_live(facet));
        let [a, b, c] = self.mesh.facet_verts(facet.slot);
        let p = self.mesh.point(point);
        // A candidate that would create a flat facet is rejected outright;
        // it cannot contribute a contact witness.
        for (u, v) in [(a, b), (b, c), (c, a)] {
            if Triangle::new(self.mesh.point(u), self.mesh.point(v), p).is_err() {
                return None;
            }
        }
        // A dent must move the facet inward (or absorb a coplanar point);
        // denting a facet away from the point would grow the surface.
        let side = orientation(self.mesh.point(a), self.mesh.point(b), self.mesh.point(c), p);
        if side > 0 {
            return None;
        }
        // Cutting off a tetrahedron that still holds another waiting point
        // would push that point outside the surface for good; distances to
        // the surface must never increase for any waiting point.
        if side < 0 && self.would_expel([a, b, c], point) {
            return None;
        }
        match guard_insertion(&self.mesh, &self.bvh, facet, point) {
            GuardDecision::Illegal(w) => {
                witnesses.push(w);
                None
            }
            GuardDecision::Legal => {
                let replaced = [a, b, c];
                let replaced_area =
                    self.mesh.triangle(facet.slot).expect("live facet").area();
                let delta_volume = signed_tet_volume(
                    self.mesh.point(a),
                    self.mesh.point(b),
                    self.mesh.point(c),
                    p,
                );
                let children =
                    self.mesh.split_facet(facet, point).expect("guarded split cannot fail");
                self.bvh.update(children[0].slot, facet_bounds(&self.mesh, children[0].slot));
                self.bvh.insert(children[1].slot, facet_bounds(&self.mesh, children[1].slot));
                self.bvh.insert(children[2].slot, facet_bounds(&self.mesh, children[2].slot));
                self.metric.remove(point);
                self.metric.apply_split(&self.mesh, children);
                if let Some(pr) = self.priority.as_mut() {
                    pr.remove(point);
                    pr.apply_split(&self.mesh, children);
                }
                let child_area: f64 = children
                    .iter()
                    .map(|c| self.mesh.triangle(c.slot).expect("child facet").area())
                    .sum();
                self.current.volume += delta_volume;
                self.current.area += child_area - replaced_area;
                self.current.metric = self.metric.sum_squared();
                self.current.hausdorff = self.metric.max_distance();
                self.status[point] = PointStatus::OnSurface;
                self.remaining -= 1;
                self.pass_insertions += 1;
                self.insertions += 1;
                self.witnesses.remove(&point);
                Some(replaced)
            }
        }
    }

    /// Would cutting the tetrahedron over `(a, b, c)` with apex `p` strand
    /// a point that is not yet on the surface?  A stranded point lies under
    /// the replaced facet yet strictly beyond all three replacements.
    fn would_expel(&self, [a, b, c]: [PointId; 3], p: PointId) -> bool {
        let (pa, pb, pc) = (self.mesh.point(a), self.mesh.point(b), self.mesh.point(c));
        let pp = self.mesh.point(p);
        let lo = Point3::new(
            pa.x.min(pb.x).min(pc.x).min(pp.x),
            pa.y.min(pb.y).min(pc.y).min(pp.y),
            pa.z.min(pb.z).min(pc.z).min(pp.z),
        );
        let hi = Point3::new(
            pa.x.max(pb.x).max(pc.x).max(pp.x),
            pa.y.max(pb.y).max(pc.y).max(pp.y),
            pa.z.max(pb.z).max(pc.z).max(pp.z),
        );
        for (id, status) in self.status.iter().enumerate() {
            if *status == PointStatus::OnSurface || id == p {
                continue;
            }
            let x = self.cloud.point(id);
            if x.x < lo.x || x.x > hi.x || x.y < lo.y || x.y > hi.y || x.z < lo.z || x.z > hi.z {
                continue;
            }
            if orientation(pa, pb, pc, x) > 0 {
                continue;
            }
            if orientation(pa, pb, pp, x) > 0
                && orientation(pb, pc, pp, x) > 0
                && orientation(pc, pa, pp, x) > 0
            {
                return true;
            }
        }
        false
    }

    fn sample_record(&self, point: PointId, facet: [PointId; 3], action: StepAction) -> StepRecord {
        StepRecord {
            k: self.k,
            point,
            facet,
            action,
            metric: self.current.metric,
            volume: self.current.volume,
            area: self.current.area,
            hausdorff: self.current.hausdorff,
        }
    }

    fn stalled_outcome(&self) -> Outcome {
        let blocked = (0..self.status.len())
            .filter(|&id| self.status[id] != PointStatus::OnSurface)
            .map(|id| BlockedPoint {
                point: id,
                witnesses: self.witnesses.get(&id).cloned().unwrap_or_default(),
            })
            .collect();
        Outcome::Stalled { blocked }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point3;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cloud_of(points: Vec<Point3>) -> PointCloud {
        PointCloud::from_points(points).unwrap().0
    }

    fn ball_cloud(n: usize, seed: u64) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::with_capacity(n);
        while pts.len() < n {
            let p = Point3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if p.to_vector().norm_squared() <= 1.0 {
                pts.push(p);
            }
        }
        cloud_of(pts)
    }

    fn cube_with(extra: &[Point3]) -> PointCloud {
        let mut pts = Vec::new();
        for z in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for x in [0.0, 1.0] {
                    pts.push(Point3::new(x, y, z));
                }
            }
        }
        pts.extend_from_slice(extra);
        cloud_of(pts)
    }

    #[test]
    fn tetrahedron_completes_without_insertions() {
        let cloud = cloud_of(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ]);
        let run = contract(&cloud, &ContractionConfig::default()).unwrap();
        assert!(run.outcome.is_complete());
        assert_eq!(run.trace.insertions, 0);
        assert!(run.trace.steps.is_empty());
        assert_eq!(run.mesh.facet_count(), 4);
        assert_eq!(run.trace.initial.metric, 0.0);
    }

    #[test]
    fn cube_with_centroid_takes_one_insertion() {
        let cloud = cube_with(&[Point3::new(0.5, 0.5, 0.5)]);
        let run = contract(&cloud, &ContractionConfig::default()).unwrap();
        assert!(run.outcome.is_complete());
        assert_eq!(run.trace.insertions, 1);
        assert_eq!(run.mesh.vertex_count(), 9);
        assert_eq!(run.mesh.facet_count(), 14);
        assert_eq!(run.mesh.edge_count(), 21);
        assert_eq!(run.mesh.euler_characteristic(), 2);
        let step = run.trace.steps[0];
        assert_eq!(step.action, StepAction::Inserted);
        assert_eq!(step.point, 8);
        assert_eq!(step.metric, 0.0);
        assert_eq!(step.hausdorff, 0.0);
        // The volume drop is the volume of the cut-off tetrahedron.
        let [a, b, c] = step.facet;
        let tet = signed_tet_volume(cloud.point(a), cloud.point(b), cloud.point(c), cloud.point(8));
        assert!(tet < 0.0);
        assert_relative_eq!(run.trace.initial.volume - step.volume, -tet, max_relative = 1e-12);
        assert!(step.area >= run.trace.initial.area);
    }

    #[test]
    fn sphere_cloud_is_already_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts: Vec<Point3> = (0..50)
            .map(|_| {
                let v = Point3::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                )
                .to_vector();
                let n = v.norm();
                Point3::new(v.x / n, v.y / n, v.z / n)
            })
            .collect();
        let run = contract(&cloud_of(pts), &ContractionConfig::default()).unwrap();
        assert!(run.outcome.is_complete());
        assert_eq!(run.trace.insertions, 0);
        assert_eq!(run.hull_vertices, 50);
    }

    #[test]
    fn ball_cloud_completes_under_both_priority_modes() {
        for (mode, seed) in
            [(PriorityMode::Centroid, 31_u64), (PriorityMode::TrueDistance, 32)]
        {
            let cloud = ball_cloud(80, seed);
            let config = ContractionConfig { priority: mode, ..ContractionConfig::default() };
            let run = contract(&cloud, &config).unwrap();
            assert!(run.outcome.is_complete(), "mode {mode:?}");
            assert_eq!(run.trace.insertions, cloud.len() - run.hull_vertices);
            assert_eq!(run.mesh.vertex_count(), cloud.len());
            assert_eq!(run.mesh.euler_characteristic(), 2);
            for id in 0..cloud.len() {
                assert!(run.mesh.is_surface_vertex(id));
            }
            // The convergence metric falls strictly at every insertion.
            let mut prev = run.trace.initial.metric;
            let mut prev_h = run.trace.initial.hausdorff;
            for step in run.trace.steps.iter().filter(|s| s.action == StepAction::Inserted) {
                assert!(step.metric < prev, "metric rose at k={}", step.k);
                assert!(step.hausdorff <= prev_h, "hausdorff rose at k={}", step.k);
                prev = step.metric;
                prev_h = step.hausdorff;
            }
            assert_eq!(prev, 0.0);
        }
    }

    #[test]
    fn replaced_queue_facets_are_skipped_and_retried() {
        // Both extra points are nearest to the same top-face facet; the
        // second finds its queued facet gone and waits for the next pass.
        let cloud =
            cube_with(&[Point3::new(0.6, 0.4, 0.9), Point3::new(0.65, 0.35, 0.88)]);
        let run = contract(&cloud, &ContractionConfig::default()).unwrap();
        assert!(run.outcome.is_complete());
        assert_eq!(run.trace.insertions, 2);
        assert_eq!(run.trace.passes, 2);
        let actions: Vec<StepAction> = run.trace.steps.iter().map(|s| s.action).collect();
        assert_eq!(
            actions,
            vec![StepAction::Inserted, StepAction::SkippedSharedFacet, StepAction::Inserted]
        );
        assert_eq!(run.trace.steps[0].point, 9);
        assert_eq!(run.trace.steps[1].point, 8);
        assert_eq!(run.trace.steps[2].point, 8);
    }

    #[test]
    fn point_on_a_hull_edge_stalls_the_run() {
        // The midpoint of a hull edge can never be inserted: splits of the
        // two incident facets degenerate, and any other candidate facet
        // would touch the surface at that midpoint.
        let cloud = cloud_of(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
            Point3::new(0.0, 2.0, 0.0),
            Point3::new(0.0, 0.0, 2.0),
            Point3::new(1.0, 0.0, 0.0),
        ]);
        let run = contract(&cloud, &ContractionConfig::default()).unwrap();
        match &run.outcome {
            Outcome::Stalled { blocked } => {
                assert_eq!(blocked.len(), 1);
                assert_eq!(blocked[0].point, 4);
                assert!(!blocked[0].witnesses.is_empty());
            }
            Outcome::Complete => panic!("edge midpoint cannot join the surface"),
        }
        assert_eq!(run.trace.insertions, 0);
        assert_eq!(run.trace.passes, 1);
        assert_eq!(run.mesh.facet_count(), 4);
    }

    #[test]
    fn max_passes_caps_the_run() {
        let cloud =
            cube_with(&[Point3::new(0.6, 0.4, 0.9), Point3::new(0.65, 0.35, 0.88)]);
        let config = ContractionConfig { max_passes: Some(1), ..ContractionConfig::default() };
        let run = contract(&cloud, &config).unwrap();
        match &run.outcome {
            Outcome::Stalled { blocked } => {
                assert_eq!(blocked.len(), 1);
                assert_eq!(blocked[0].point, 8);
            }
            Outcome::Complete => panic!("one pass cannot finish this cloud"),
        }
        assert_eq!(run.trace.passes, 1);
    }

    #[test]
    fn runs_are_reproducible() {
        let a = contract(&ball_cloud(70, 12), &ContractionConfig::default()).unwrap();
        let b = contract(&ball_cloud(70, 12), &ContractionConfig::default()).unwrap();
        assert_eq!(a.trace, b.trace);
        let fa: Vec<_> = a.mesh.facet_slots().map(|s| a.mesh.facet_verts(s)).collect();
        let fb: Vec<_> = b.mesh.facet_slots().map(|s| b.mesh.facet_verts(s)).collect();
        assert_eq!(fa, fb);
    }

    #[test]
    fn stepping_matches_the_batch_run() {
        let cloud = ball_cloud(40, 44);
        let mut engine = Contraction::new(&cloud, ContractionConfig::default()).unwrap();
        let mut seen = Vec::new();
        while let Some(record) = engine.step() {
            seen.push(record);
        }
        let stepped = engine.finish();
        let batch = contract(&cloud, &ContractionConfig::default()).unwrap();
        assert_eq!(stepped.trace.steps, seen);
        assert_eq!(stepped.trace, batch.trace);
        assert_eq!(stepped.outcome, batch.outcome);
    }
}
