//! Ordering of pending points by how close they are to the surface.

use crate::mesh::{FacetRef, PointId, SurfaceMesh};

use super::tracker::{distance_squared, scan_point, DistanceKind};

/// Which distance drives the insertion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PriorityMode {
    /// Distance to facet centroids.  Cheap, and the default.
    #[default]
    Centroid,
    /// Distance to the closest point of each facet.  Consistent with the
    /// convergence metric, at the cost of a closest-point query per facet.
    TrueDistance,
}

impl PriorityMode {
    pub(crate) fn kind(self) -> DistanceKind {
        match self {
            PriorityMode::Centroid => DistanceKind::Centroid,
            PriorityMode::TrueDistance => DistanceKind::TrueDistance,
        }
    }
}

/// One pending point with its nearest facet at queue-build time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueEntry {
    pub point: PointId,
    pub facet: FacetRef,
    /// Vertex triple of `facet` when the queue was built; kept for
    /// reporting because the slot may be rewritten mid-pass.
    pub facet_verts: [PointId; 3],
    /// Distance under the chosen mode (not squared).
    pub distance: f64,
}

/// Ranks `points` by ascending distance to the surface, ties by ascending
/// point id.  Each entry records the argmin facet (lowest slot on ties).
pub fn compute_priorities(
    points: &[PointId],
    surface: &SurfaceMesh,
    mode: PriorityMode,
) -> Vec<QueueEntry> {
    let mut queue: Vec<QueueEntry> = points
        .iter()
        .map(|&point| {
            let (dist_sq, facet) = scan_point(mode.kind(), surface, point);
            QueueEntry {
                point,
                facet,
                facet_verts: surface.facet_verts(facet.slot),
                distance: dist_sq.sqrt(),
            }
        })
        .collect();
    sort_queue(&mut queue);
    queue
}

pub(crate) fn sort_queue(queue: &mut [QueueEntry]) {
    queue.sort_unstable_by(|a, b| {
        a.distance
            .partial_cmp(&b.distance)
            .expect("distances are finite")
            .then(a.point.cmp(&b.point))
    });
}

/// The `k` nearest facets to `point` under `mode`, ascending by distance
/// with ties by slot.  Used when insertion at the nearest facet is blocked
/// and the next-best candidates are needed.
pub fn nearest_facets(
    point: PointId,
    surface: &SurfaceMesh,
    mode: PriorityMode,
    k: usize,
) -> Vec<(f64, FacetRef)> {
    let p = surface.point(point);
    let kind = mode.kind();
    let mut all: Vec<(f64, FacetRef)> = surface
        .facet_slots()
        .map(|slot| {
            let tri = surface.triangle(slot).expect("live facets are non-degenerate");
            (distance_squared(kind, p, &tri), surface.facet_ref(slot))
        })
        .collect();
    all.sort_unstable_by(|a, b| {
        a.0.partial_cmp(&b.0).expect("distances are finite").then(a.1.slot.cmp(&b.1.slot))
    });
    all.truncate(k);
    all
}
