//! Incremental nearest-facet distances for points against a mutating surface.
//!
//! A facet split perturbs the distance field in two narrow ways: any point
//! may have moved closer to one of the three replacement facets, and a point
//! whose recorded nearest facet was the one replaced must search again.
//! Caching the argmin facet per point turns the common case into three
//! distance evaluations, while staying bit-for-bit equal to a fresh
//! brute-force scan: minima over unchanged facets are reused, never
//! recomputed differently.

use std::collections::BTreeMap;

use crate::geom::{Point3, Triangle};
use crate::mesh::{FacetRef, PointId, SurfaceMesh};

/// Which notion of point-to-facet distance a measurement uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceKind {
    /// Distance to the closest point of the triangle.
    TrueDistance,
    /// Distance to the triangle's centroid.
    Centroid,
}

pub(crate) fn distance_squared(kind: DistanceKind, p: Point3, tri: &Triangle) -> f64 {
    match kind {
        DistanceKind::TrueDistance => tri.distance_squared(p),
        DistanceKind::Centroid => p.distance_squared(tri.centroid()),
    }
}

/// Nearest facet of `id` by a full scan; ties keep the lowest slot.
pub(crate) fn scan_point(
    kind: DistanceKind,
    mesh: &SurfaceMesh,
    id: PointId,
) -> (f64, FacetRef) {
    let p = mesh.point(id);
    let mut best = f64::INFINITY;
    let mut facet = None;
    for slot in mesh.facet_slots() {
        let tri = mesh.triangle(slot).expect("live facets are non-degenerate");
        let d = distance_squared(kind, p, &tri);
        if d < best {
            best = d;
            facet = Some(mesh.facet_ref(slot));
        }
    }
    (best, facet.expect("surface has at least one facet"))
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    dist_sq: f64,
    facet: FacetRef,
}

/// Squared nearest-facet distance and its argmin facet for a tracked set of
/// points, maintained across facet splits.
#[derive(Debug, Clone)]
pub struct DistanceTracker {
    kind: DistanceKind,
    entries: BTreeMap<PointId, Entry>,
}

impl DistanceTracker {
    pub fn new(
        kind: DistanceKind,
        mesh: &SurfaceMesh,
        points: impl IntoIterator<Item = PointId>,
    ) -> Self {
        let entries = points
            .into_iter()
            .map(|id| {
                let (dist_sq, facet) = scan_point(kind, mesh, id);
                (id, Entry { dist_sq, facet })
            })
            .collect();
        DistanceTracker { kind, entries }
    }

    pub fn kind(&self) -> DistanceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: PointId) -> Option<(f64, FacetRef)> {
        self.entries.get(&id).map(|e| (e.dist_sq, e.facet))
    }

    /// Stops tracking a point, typically because it joined the surface.
    pub fn remove(&mut self, id: PointId) {
        self.entries.remove(&id);
    }

    /// (point, squared distance, argmin facet) in ascending point order.
    pub fn entries(&self) -> impl Iterator<Item = (PointId, f64, FacetRef)> + '_ {
        self.entries.iter().map(|(&id, e)| (id, e.dist_sq, e.facet))
    }

    /// Sum of squared distances over tracked points, in ascending id order
    /// so the value matches an independent scan term for term.
    pub fn sum_squared(&self) -> f64 {
        // Explicit +0.0 seed: the stdlib's empty float sum is -0.0, which
        // would leak a minus sign into reports once nothing is tracked.
        self.entries.values().map(|e| e.dist_sq).fold(0.0, |a, d| a + d)
    }

    /// Largest tracked distance; zero once nothing is tracked.
    pub fn max_distance(&self) -> f64 {
        self.entries.values().map(|e| e.dist_sq).fold(0.0_f64, f64::max).sqrt()
    }

    /// Refreshes distances after one facet was replaced by `children`.
    /// Call after the mesh mutation, with the refs the split returned.
    pub fn apply_split(&mut self, mesh: &SurfaceMesh, children: [FacetRef; 3]) {
        let tris = children.map(|c| {
            (c, mesh.triangle(c.slot).expect("split children are non-degenerate"))
        });
        for (&id, entry) in self.entries.iter_mut() {
            if !mesh.is_live(entry.facet) {
                // The recorded nearest facet was the one replaced.
                let (dist_sq, facet) = scan_point(self.kind, mesh, id);
                *entry = Entry { dist_sq, facet };
                continue;
            }
            let p = mesh.point(id);
            for (child, tri) in &tris {
                let d = distance_squared(self.kind, p, tri);
                if d < entry.dist_sq {
                    entry.dist_sq = d;
                    entry.facet = *child;
                }
            }
        }
    }
}
