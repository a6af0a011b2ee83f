//! Legality test for a facet split: the three candidate facets may touch
//! the rest of the surface only along the topology they genuinely share.
//!
//! The facet being replaced is exempt (it will not survive the split), and
//! the candidates are also tested against each other, which matters when
//! the new vertex is coplanar with the facet but outside its footprint.

use serde::Serialize;

use crate::bvh::{Aabb, FacetBvh};
use crate::geom::{triangles_intersect, SharedTopology, Triangle};
use crate::mesh::{shared_ids, FacetRef, PointId, SurfaceMesh};

/// One forbidden contact: the candidate facet and the facet it hits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntersectionWitness {
    pub candidate: [PointId; 3],
    pub blocking: [PointId; 3],
    /// Slot of the blocking facet; absent when two candidates of the same
    /// split collide with each other.
    pub blocking_slot: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GuardDecision {
    Legal,
    Illegal(IntersectionWitness),
}

impl GuardDecision {
    pub fn is_legal(&self) -> bool {
        matches!(self, GuardDecision::Legal)
    }
}

/// Decides whether replacing `facet` with the three facets toward `p`
/// keeps the surface free of forbidden contacts.  The caller ensures the
/// facet is live, `p` is not a surface vertex, and no candidate facet is
/// degenerate.  The witness, when any, is the first conflict in candidate
/// order then ascending slot order, so the decision is reproducible.
pub fn guard_insertion(
    mesh: &SurfaceMesh,
    bvh: &FacetBvh,
    facet: FacetRef,
    p: PointId,
) -> GuardDecision {
    debug_assert!(mesh.is_live(facet));
    debug_assert!(!mesh.is_surface_vertex(p));
    let [a, b, c] = mesh.facet_verts(facet.slot);
    let ids = [[a, b, p], [b, c, p], [c, a, p]];
    let tris = ids.map(|[u, v, w]| {
        Triangle::new(mesh.point(u), mesh.point(v), mesh.point(w))
            .expect("caller screened degenerate candidates")
    });

    let mut hits = Vec::new();
    for (candidate, tri) in ids.iter().zip(&tris) {
        bvh.query_box(&Aabb::of_triangle(tri.a(), tri.b(), tri.c()), &mut hits);
        for &slot in &hits {
            if slot == facet.slot {
                continue;
            }
            let other_ids = mesh.facet_verts(slot);
            // `p` is not a surface vertex, so at most the base edge is
            // shared and the duplicate-triangle case cannot arise.
            let shared = shared_ids(*candidate, other_ids)
                .expect("candidate cannot duplicate a retained facet");
            let other = mesh.triangle(slot).expect("live facets are non-degenerate");
            if triangles_intersect(tri, &other, shared) {
                return GuardDecision::Illegal(IntersectionWitness {
                    candidate: *candidate,
                    blocking: other_ids,
                    blocking_slot: Some(slot),
                });
            }
        }
    }

    // Candidate pairs share the edge (common base vertex, p): positions
    // (1, 2) in the first triple and (0, 2) in the next.  They can still
    // fold onto each other when `p` is coplanar with the facet but outside
    // its footprint.
    let sibling = SharedTopology::Edge { first: [1, 2], second: [0, 2] };
    for i in 0..3 {
        let j = (i + 1) % 3;
        if triangles_intersect(&tris[i], &tris[j], sibling) {
            return GuardDecision::Illegal(IntersectionWitness {
                candidate: ids[i],
                blocking: ids[j],
                blocking_slot: None,
            });
        }
    }
    GuardDecision::Legal
}
