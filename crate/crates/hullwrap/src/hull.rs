//! Convex hull construction and point classification.
//!
//! The hull is the starting surface for contraction, so it must come out as
//! a closed, consistently outward-oriented triangle mesh with exact vertex
//! membership: a cloud point is a hull vertex if and only if it is extreme.
//! Visibility during construction therefore uses exact orientation signs;
//! floating point only steers performance choices (which point to lift
//! next), never correctness.
//!
//! Coplanar runs of facets are re-triangulated as a fan from their
//! lowest-index vertex and the facet list is sorted, so the output is a
//! pure function of the cloud and never depends on insertion order.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geom::{collinear3d, orient3d, Point3};
use crate::mesh::{PointCloud, PointId, SurfaceMesh};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HullError {
    /// Fewer than four points: no solid to wrap.
    #[error("need at least 4 points to build a solid hull, found {found}")]
    TooFewPoints { found: usize },
    /// Every point lies on one line.
    #[error("all points are collinear; the hull has no interior")]
    CollinearInput,
    /// Every point lies on one plane.
    #[error("all points are coplanar; the hull has no interior")]
    CoplanarInput,
    /// The mesh handed to classification does not belong to the cloud.
    #[error("mesh does not match the cloud: {reason}")]
    InconsistentInput { reason: &'static str },
}

/// Exact id partition of a cloud against its hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointClasses {
    /// Ids that are hull vertices, ascending.
    pub on_surface: Vec<PointId>,
    /// Everything else, ascending.  Points lying exactly on a hull face but
    /// not at a corner belong here: they still have to be stitched into the
    /// surface later.
    pub interior: Vec<PointId>,
}

/// Builds the convex hull of the cloud as an outward-oriented triangle mesh.
///
/// Every mesh vertex is a cloud point (ids are shared with the cloud) and no
/// cloud point lies strictly outside any facet.
///
/// ```
/// use hullwrap::hull::{classify_points, convex_hull};
/// use hullwrap::io::generate_cloud;
///
/// let (cloud, _) = generate_cloud("ball-uniform(40,3)", 0)?;
/// let hull = convex_hull(&cloud)?;
/// assert_eq!(hull.euler_characteristic(), 2);
///
/// let classes = classify_points(&cloud, &hull)?;
/// assert_eq!(classes.on_surface.len() + classes.interior.len(), cloud.len());
/// # Ok::<(), Box<dyn std::error::Error>>(())
/// ```
pub fn convex_hull(cloud: &PointCloud) -> Result<SurfaceMesh, HullError> {
    let facets = hull_facets(cloud)?;
    Ok(SurfaceMesh::new(cloud, facets))
}

/// Splits cloud ids into hull vertices and the rest.
pub fn classify_points(cloud: &PointCloud, hull: &SurfaceMesh) -> Result<PointClasses, HullError> {
    if hull.coords().len() != cloud.len() {
        return Err(HullError::InconsistentInput { reason: "vertex table size differs from cloud" });
    }
    for id in hull.vertex_ids() {
        if hull.point(id) != cloud.point(id) {
            return Err(HullError::InconsistentInput { reason: "vertex coordinates differ from cloud" });
        }
    }
    let mut on_surface = Vec::new();
    let mut interior = Vec::new();
    for id in 0..cloud.len() {
        if hull.is_surface_vertex(id) {
            on_surface.push(id);
        } else {
            interior.push(id);
        }
    }
    Ok(PointClasses { on_surface, interior })
}

/// Working facet during construction.  `outside` holds ids strictly outside
/// this facet's plane; each unprocessed point lives in at most one set.
struct WorkFacet {
    verts: [PointId; 3],
    outside: Vec<PointId>,
    alive: bool,
}

/// Map from an undirected edge to its (at most two) incident live facets.
type EdgeMap = BTreeMap<(PointId, PointId), [Option<usize>; 2]>;

fn edge_key(u: PointId, v: PointId) -> (PointId, PointId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Float orientation value, used only to pick the most promising point to
/// lift next.  The exact predicate has the final say on every sign.
fn side_magnitude(p: Point3, q: Point3, r: Point3, s: Point3) -> f64 {
    (q - p).cross(r - p).dot(s - p)
}

fn hull_facets(cloud: &PointCloud) -> Result<Vec<[PointId; 3]>, HullError> {
    let n = cloud.len();
    if n < 4 {
        return Err(HullError::TooFewPoints { found: n });
    }
    let pt = |id: PointId| cloud.point(id);

    // Initial simplex.  Selection by float extent, degeneracy by exact sign:
    // if the float pick is exactly flat, scan for any point that is not.
    let mut i0 = 0;
    for id in 1..n {
        let (a, b) = (pt(id), pt(i0));
        if (a.x, a.y, a.z) < (b.x, b.y, b.z) {
            i0 = id;
        }
    }
    let mut i1 = usize::MAX;
    let mut best = f64::NEG_INFINITY;
    for id in 0..n {
        if id == i0 {
            continue;
        }
        let d = pt(i0).distance_squared(pt(id));
        if d > best {
            best = d;
            i1 = id;
        }
    }
    let mut i2 = usize::MAX;
    best = f64::NEG_INFINITY;
    for id in 0..n {
        if id == i0 || id == i1 {
            continue;
        }
        let d = (pt(i1) - pt(i0)).cross(pt(id) - pt(i0)).norm_squared();
        if d > best {
            best = d;
            i2 = id;
        }
    }
    if collinear3d(pt(i0), pt(i1), pt(i2)) {
        i2 = (0..n)
            .find(|&id| id != i0 && id != i1 && !collinear3d(pt(i0), pt(i1), pt(id)))
            .ok_or(HullError::CollinearInput)?;
    }
    let mut i3 = usize::MAX;
    best = f64::NEG_INFINITY;
    for id in 0..n {
        if id == i0 || id == i1 || id == i2 {
            continue;
        }
        let d = side_magnitude(pt(i0), pt(i1), pt(i2), pt(id)).abs();
        if d > best {
            best = d;
            i3 = id;
        }
    }
    if orient3d(pt(i0), pt(i1), pt(i2), pt(i3)) == 0 {
        i3 = (0..n)
            .find(|&id| {
                id != i0 && id != i1 && id != i2 && orient3d(pt(i0), pt(i1), pt(i2), pt(id)) != 0
            })
            .ok_or(HullError::CoplanarInput)?;
    }
    // A negative sign puts i3 on the inner side of (i0, i1, i2), which makes
    // all four faces below outward.
    if orient3d(pt(i0), pt(i1), pt(i2), pt(i3)) > 0 {
        std::mem::swap(&mut i1, &mut i2);
    }
    let seed_facets =
        [[i0, i1, i2], [i0, i2, i3], [i0, i3, i1], [i1, i3, i2]];

    let mut facets: Vec<WorkFacet> = Vec::new();
    let mut edges: EdgeMap = BTreeMap::new();
    for verts in seed_facets {
        add_facet(&mut facets, &mut edges, verts);
    }

    // Every remaining point goes to the first facet it is strictly outside
    // of; points inside or on the simplex are dropped for good, which is
    // safe because the hull only ever grows.
    for id in 0..n {
        if id == i0 || id == i1 || id == i2 || id == i3 {
            continue;
        }
        assign_point(cloud, &mut facets, 0..4, id);
    }

    loop {
        let Some(seed) = facets.iter().position(|f| f.alive && !f.outside.is_empty()) else {
            break;
        };
        // Farthest outside point of the seed facet; the base triangle is
        // fixed, so the raw determinant magnitude orders distances.
        let [a, b, c] = facets[seed].verts;
        let mut lift = usize::MAX;
        let mut best = f64::NEG_INFINITY;
        for &id in &facets[seed].outside {
            let d = side_magnitude(pt(a), pt(b), pt(c), pt(id));
            if d > best || (d == best && id < lift) {
                best = d;
                lift = id;
            }
        }
        let q = pt(lift);

        // Exact-visibility flood fill from the seed.  The region a point
        // sees on a convex polytope is edge-connected, so this finds all of
        // it; the border of the fill is the horizon.
        let mut visible = vec![seed];
        let mut seen = vec![false; facets.len()];
        seen[seed] = true;
        let mut stack = vec![seed];
        let mut horizon: Vec<(PointId, PointId)> = Vec::new();
        while let Some(f) = stack.pop() {
            let [a, b, c] = facets[f].verts;
            for (u, v) in [(a, b), (b, c), (c, a)] {
                let g = neighbor(&edges, f, u, v);
                if seen[g] {
                    continue;
                }
                let [ga, gb, gc] = facets[g].verts;
                if orient3d(pt(ga), pt(gb), pt(gc), q) > 0 {
                    seen[g] = true;
                    visible.push(g);
                    stack.push(g);
                } else {
                    // (u, v) as traversed by the visible facet f; the facet
                    // across it stays, so this edge is on the horizon.
                    horizon.push((u, v));
                }
            }
        }

        // Retire the visible region and pool its unassigned points.
        let mut orphans: Vec<PointId> = Vec::new();
        for &f in &visible {
            facets[f].alive = false;
            let [a, b, c] = facets[f].verts;
            for (u, v) in [(a, b), (b, c), (c, a)] {
                drop_edge(&mut edges, f, u, v);
            }
            orphans.extend(facets[f].outside.drain(..).filter(|&id| id != lift));
        }

        // The horizon of a convex region is one simple cycle; anything else
        // means a predicate lied, which exact arithmetic rules out.
        let mut next: BTreeMap<PointId, PointId> = BTreeMap::new();
        for &(u, v) in &horizon {
            let prev = next.insert(u, v);
            assert!(prev.is_none(), "horizon revisits a vertex");
        }
        let start = *next.keys().next().expect("non-empty horizon");
        let mut cycle = Vec::with_capacity(horizon.len());
        let mut u = start;
        loop {
            let v = next[&u];
            cycle.push((u, v));
            u = v;
            if u == start {
                break;
            }
        }
        assert_eq!(cycle.len(), horizon.len(), "horizon is not a single cycle");

        // Cone from the lifted point over the horizon, windings inherited
        // from the visible side so the new facets face outward.
        let first_new = facets.len();
        for (u, v) in cycle {
            add_facet(&mut facets, &mut edges, [u, v, lift]);
        }
        let new_range = first_new..facets.len();
        for id in orphans {
            assign_point(cloud, &mut facets, new_range.clone(), id);
        }
    }

    let live: Vec<[PointId; 3]> = facets.iter().filter(|f| f.alive).map(|f| f.verts).collect();
    Ok(canonical_facets(cloud, live))
}

fn add_facet(facets: &mut Vec<WorkFacet>, edges: &mut EdgeMap, verts: [PointId; 3]) {
    let idx = facets.len();
    facets.push(WorkFacet { verts, outside: Vec::new(), alive: true });
    let [a, b, c] = verts;
    for (u, v) in [(a, b), (b, c), (c, a)] {
        let slot = edges.entry(edge_key(u, v)).or_insert([None, None]);
        if slot[0].is_none() {
            slot[0] = Some(idx);
        } else {
            assert!(slot[1].is_none(), "edge already has two facets");
            slot[1] = Some(idx);
        }
    }
}

fn drop_edge(edges: &mut EdgeMap, facet: usize, u: PointId, v: PointId) {
    let key = edge_key(u, v);
    let slot = edges.get_mut(&key).expect("edge exists");
    if slot[0] == Some(facet) {
        slot[0] = slot[1].take();
    } else {
        assert_eq!(slot[1], Some(facet), "facet not on its own edge");
        slot[1] = None;
    }
    if slot[0].is_none() {
        edges.remove(&key);
    }
}

fn neighbor(edges: &EdgeMap, facet: usize, u: PointId, v: PointId) -> usize {
    let slot = &edges[&edge_key(u, v)];
    let [a, b] = *slot;
    if a == Some(facet) {
        b.expect("closed surface: every edge has a second facet")
    } else {
        a.expect("closed surface: every edge has a second facet")
    }
}

fn assign_point(
    cloud: &PointCloud,
    facets: &mut [WorkFacet],
    candidates: std::ops::Range<usize>,
    id: PointId,
) {
    let p = cloud.point(id);
    for f in candidates {
        let [a, b, c] = facets[f].verts;
        if orient3d(cloud.point(a), cloud.point(b), cloud.point(c), p) > 0 {
            facets[f].outside.push(id);
            return;
        }
    }
    // Inside or on the current hull: never a vertex, safe to forget.
}

/// Rewrites exactly-coplanar facet patches as fans from their lowest-index
/// vertex, then sorts facets into a canonical order.  The result depends
/// only on the facet set, not on how construction happened to triangulate
/// flat regions.
fn canonical_facets(cloud: &PointCloud, facets: Vec<[PointId; 3]>) -> Vec<[PointId; 3]> {
    let pt = |id: PointId| cloud.point(id);
    let mut edges: EdgeMap = BTreeMap::new();
    for (idx, &[a, b, c]) in facets.iter().enumerate() {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            let slot = edges.entry(edge_key(u, v)).or_insert([None, None]);
            if slot[0].is_none() {
                slot[0] = Some(idx);
            } else {
                slot[1] = Some(idx);
            }
        }
    }

    // Flood coplanar patches: neighbors merge when the neighbor's opposite
    // vertex lies exactly in this facet's plane.
    let mut patch = vec![usize::MAX; facets.len()];
    let mut patches: Vec<Vec<usize>> = Vec::new();
    for start in 0..facets.len() {
        if patch[start] != usize::MAX {
            continue;
        }
        let id = patches.len();
        let mut members = vec![start];
        patch[start] = id;
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            let [a, b, c] = facets[f];
            for (u, v) in [(a, b), (b, c), (c, a)] {
                let g = neighbor(&edges, f, u, v);
                if patch[g] != usize::MAX {
                    continue;
                }
                let [ga, gb, gc] = facets[g];
                let apex = [ga, gb, gc].into_iter().find(|w| *w != u && *w != v).unwrap();
                if orient3d(pt(a), pt(b), pt(c), pt(apex)) == 0 {
                    patch[g] = id;
                    members.push(g);
                    stack.push(g);
                }
            }
        }
        patches.push(members);
    }

    let mut out: Vec<[PointId; 3]> = Vec::new();
    for members in patches {
        if members.len() == 1 {
            out.push(facets[members[0]]);
            continue;
        }
        // Boundary of the patch, directed as its facets traverse it.  A
        // flat patch on a convex body is a convex polygon, so the boundary
        // chains into one cycle with no interior vertices.
        let mut next: BTreeMap<PointId, PointId> = BTreeMap::new();
        for &f in &members {
            let [a, b, c] = facets[f];
            for (u, v) in [(a, b), (b, c), (c, a)] {
                let g = neighbor(&edges, f, u, v);
                if patch[g] != patch[f] {
                    next.insert(u, v);
                }
            }
        }
        let start = *next.keys().next().expect("patch has a boundary");
        let mut cycle = vec![start];
        let mut u = next[&start];
        while u != start {
            cycle.push(u);
            u = next[&u];
        }
        assert_eq!(cycle.len(), next.len(), "patch boundary is not a single cycle");
        let low = cycle.iter().position(|v| *v == *cycle.iter().min().unwrap()).unwrap();
        cycle.rotate_left(low);
        for k in 1..cycle.len() - 1 {
            out.push([cycle[0], cycle[k], cycle[k + 1]]);
        }
    }

    for verts in &mut out {
        let low = (0..3).min_by_key(|&i| verts[i]).unwrap();
        verts.rotate_left(low);
    }
    out.sort_unstable();
    out
}
