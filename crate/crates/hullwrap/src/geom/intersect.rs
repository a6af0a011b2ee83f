//! Exact triangle-triangle contact tests with topology-aware exemptions.
//!
//! Facets of a closed triangulated surface legitimately touch along shared
//! vertices and shared edges. Everything else is forbidden contact: a
//! crossing, a touch at a non-shared point, or a coplanar area overlap.
//! The caller declares what the pair is allowed to share, derived from mesh
//! connectivity indices, never from coordinate comparisons; these tests then
//! decide whether the closed triangles meet outside the declared set.
//!
//! All branches reduce to exact orientation signs plus exact coordinate
//! comparisons, so the answer is reliable even for grazing and coplanar
//! configurations.

use super::point::Point3;
use super::predicates::{orient2d, orient3d};
use super::triangle::Triangle;

/// What two facets are allowed to share, in local vertex indices (0..3).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SharedTopology {
    /// The facets share no mesh vertices; any contact is forbidden.
    None,
    /// The facets share exactly one mesh vertex.
    Vertex { first: usize, second: usize },
    /// The facets share a mesh edge; `first[i]` and `second[i]` name the
    /// same mesh vertex.
    Edge { first: [usize; 2], second: [usize; 2] },
}

impl SharedTopology {
    /// The same declaration with the roles of the two triangles swapped.
    pub fn swapped(self) -> Self {
        match self {
            SharedTopology::None => SharedTopology::None,
            SharedTopology::Vertex { first, second } => {
                SharedTopology::Vertex { first: second, second: first }
            }
            SharedTopology::Edge { first, second } => {
                SharedTopology::Edge { first: second, second: first }
            }
        }
    }
}

/// True iff the closed triangles intersect in any point outside the declared
/// shared vertices or edge.
///
/// Contact exactly at a shared vertex, or contained in a shared edge, is
/// legal and returns false. A coplanar overlap of positive area is forbidden
/// even across a shared edge.
pub fn triangles_intersect(t1: &Triangle, t2: &Triangle, shared: SharedTopology) -> bool {
    match shared {
        SharedTopology::None => intersect_no_shared(t1, t2),
        SharedTopology::Vertex { first, second } => {
            debug_assert_eq!(t1.vertex(first), t2.vertex(second));
            intersect_shared_vertex(t1, first, t2, second)
        }
        SharedTopology::Edge { first, second } => {
            debug_assert_eq!(t1.vertex(first[0]), t2.vertex(second[0]));
            debug_assert_eq!(t1.vertex(first[1]), t2.vertex(second[1]));
            intersect_shared_edge(t1, first, t2, second)
        }
    }
}

/// Any contact between triangles with no shared topology.
///
/// Two triangles meet iff some edge of one meets the other closed triangle,
/// so six segment tests are complete (this covers coplanar containment: a
/// contained triangle's edges lie inside the other).
fn intersect_no_shared(t1: &Triangle, t2: &Triangle) -> bool {
    let v1 = t1.vertices();
    let v2 = t2.vertices();
    for i in 0..3 {
        if segment_triangle_closed(v1[i], v1[(i + 1) % 3], t2) {
            return true;
        }
        if segment_triangle_closed(v2[i], v2[(i + 1) % 3], t1) {
            return true;
        }
    }
    false
}

/// Contact beyond the single shared vertex.
///
/// Every contact point other than the shared vertex lies on an edge of one
/// triangle intersected with the other. Opposite edges get the plain closed
/// test; edges incident to the shared vertex get a test for contact beyond
/// the vertex itself.
fn intersect_shared_vertex(t1: &Triangle, v1: usize, t2: &Triangle, v2: usize) -> bool {
    let b1 = t1.vertex((v1 + 1) % 3);
    let c1 = t1.vertex((v1 + 2) % 3);
    let b2 = t2.vertex((v2 + 1) % 3);
    let c2 = t2.vertex((v2 + 2) % 3);

    if segment_triangle_closed(b2, c2, t1) || segment_triangle_closed(b1, c1, t2) {
        return true;
    }
    wedge_entry(t1, v1, b2)
        || wedge_entry(t1, v1, c2)
        || wedge_entry(t2, v2, b1)
        || wedge_entry(t2, v2, c1)
}

/// Contact beyond the shared edge.
///
/// If the two triangles are not coplanar, their planes meet exactly in the
/// shared edge's line, so the intersection is the shared edge and legal.
/// Coplanar neighbors are forbidden iff both apexes lie strictly on the same
/// side of the edge, which forces a positive-area overlap.
fn intersect_shared_edge(t1: &Triangle, e1: [usize; 2], t2: &Triangle, e2: [usize; 2]) -> bool {
    let a = t1.vertex(e1[0]);
    let b = t1.vertex(e1[1]);
    let c = t1.vertex(3 - e1[0] - e1[1]);
    let d = t2.vertex(3 - e2[0] - e2[1]);

    if orient3d(a, b, c, d) != 0 {
        return false;
    }
    let axis = projection_axis(a, b, c);
    let (pa, pb, pc, pd) = (project(a, axis), project(b, axis), project(c, axis), project(d, axis));
    let oc = orient2d(pa, pb, pc);
    let od = orient2d(pa, pb, pd);
    debug_assert!(oc != 0 && od != 0, "apex on shared edge implies a degenerate triangle");
    oc == od
}

/// Closed-segment versus closed-triangle intersection, decided exactly.
pub(crate) fn segment_triangle_closed(p: Point3, q: Point3, tri: &Triangle) -> bool {
    let [a, b, c] = tri.vertices();
    let s1 = orient3d(a, b, c, p);
    let s2 = orient3d(a, b, c, q);

    if s1 != 0 && s2 != 0 {
        if s1 == s2 {
            return false;
        }
        // The segment pierces the supporting plane once; it passes through
        // the closed triangle iff the three edge orientations do not mix
        // strict signs.
        let u = orient3d(p, q, a, b);
        let v = orient3d(p, q, b, c);
        let w = orient3d(p, q, c, a);
        let pos = u > 0 || v > 0 || w > 0;
        let neg = u < 0 || v < 0 || w < 0;
        return !(pos && neg);
    }

    if s1 == 0 && s2 == 0 {
        return coplanar_segment_triangle(p, q, tri);
    }

    // Exactly one endpoint on the plane: the segment touches the plane only
    // there, so the contact question is point containment.
    let on_plane = if s1 == 0 { p } else { q };
    point_in_triangle_coplanar(on_plane, tri)
}

/// True iff `[v, x]` meets `tri` in any point besides `v`, where `v` is the
/// vertex of `tri` at `v_idx`.
///
/// The intersection of the segment with the closed convex triangle is a
/// segment starting at `v`; it extends beyond `v` iff `x` is coplanar with
/// the triangle and the direction to `x` enters the closed wedge at `v`.
fn wedge_entry(tri: &Triangle, v_idx: usize, x: Point3) -> bool {
    let v = tri.vertex(v_idx);
    let b = tri.vertex((v_idx + 1) % 3);
    let c = tri.vertex((v_idx + 2) % 3);
    debug_assert_ne!(v, x, "query point coincides with the shared vertex");

    if orient3d(v, b, c, x) != 0 {
        return false;
    }

    let axis = projection_axis(v, b, c);
    let pv = project(v, axis);
    let mut pb = project(b, axis);
    let mut pc = project(c, axis);
    let px = project(x, axis);
    let (mut rb, mut rc) = (b, c);
    if orient2d(pv, pb, pc) < 0 {
        std::mem::swap(&mut pb, &mut pc);
        std::mem::swap(&mut rb, &mut rc);
    }

    let o1 = orient2d(pv, pb, px);
    let o2 = orient2d(pv, pc, px);
    if o1 == 0 {
        return same_ray_direction(v, rb, x);
    }
    if o2 == 0 {
        return same_ray_direction(v, rc, x);
    }
    o1 > 0 && o2 < 0
}

/// For `x` exactly collinear with `v -> b`, true iff `x` lies on the `b`
/// side of `v`. Coordinate comparisons are exact on floats.
fn same_ray_direction(v: Point3, b: Point3, x: Point3) -> bool {
    for axis in 0..3 {
        let bv = b.coord(axis);
        let vv = v.coord(axis);
        if bv != vv {
            let xv = x.coord(axis);
            return (xv > vv) == (bv > vv);
        }
    }
    unreachable!("ray endpoints coincide");
}

/// Both endpoints lie in the triangle's plane: a 2D problem after an exact
/// projection.
fn coplanar_segment_triangle(p: Point3, q: Point3, tri: &Triangle) -> bool {
    let [a, b, c] = tri.vertices();
    let axis = projection_axis(a, b, c);
    let (pa, pb, pc) = (project(a, axis), project(b, axis), project(c, axis));
    let (pp, pq) = (project(p, axis), project(q, axis));

    if point_in_triangle_2d(pp, pa, pb, pc) || point_in_triangle_2d(pq, pa, pb, pc) {
        return true;
    }
    segments_intersect_2d(pp, pq, pa, pb)
        || segments_intersect_2d(pp, pq, pb, pc)
        || segments_intersect_2d(pp, pq, pc, pa)
}

/// Membership of a point known to lie in the triangle's plane.
pub fn point_in_triangle_coplanar(x: Point3, tri: &Triangle) -> bool {
    let [a, b, c] = tri.vertices();
    debug_assert_eq!(orient3d(a, b, c, x), 0);
    let axis = projection_axis(a, b, c);
    point_in_triangle_2d(project(x, axis), project(a, axis), project(b, axis), project(c, axis))
}

fn point_in_triangle_2d(x: [f64; 2], mut a: [f64; 2], mut b: [f64; 2], c: [f64; 2]) -> bool {
    if orient2d(a, b, c) < 0 {
        std::mem::swap(&mut a, &mut b);
    }
    orient2d(a, b, x) >= 0 && orient2d(b, c, x) >= 0 && orient2d(c, a, x) >= 0
}

/// Closed 2D segment intersection, including collinear overlap and endpoint
/// touches.
fn segments_intersect_2d(p: [f64; 2], q: [f64; 2], a: [f64; 2], b: [f64; 2]) -> bool {
    let d1 = orient2d(a, b, p);
    let d2 = orient2d(a, b, q);
    let d3 = orient2d(p, q, a);
    let d4 = orient2d(p, q, b);

    if ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)) {
        return true;
    }
    (d1 == 0 && within_collinear_box(a, b, p))
        || (d2 == 0 && within_collinear_box(a, b, q))
        || (d3 == 0 && within_collinear_box(p, q, a))
        || (d4 == 0 && within_collinear_box(p, q, b))
}

/// For `x` collinear with segment `(u, w)`, true iff `x` lies between them.
fn within_collinear_box(u: [f64; 2], w: [f64; 2], x: [f64; 2]) -> bool {
    (0..2).all(|i| u[i].min(w[i]) <= x[i] && x[i] <= u[i].max(w[i]))
}

/// Axis to drop when flattening the plane of `(a, b, c)` to 2D.
///
/// Picks the dominant normal component, then verifies with an exact 2D
/// orientation that the projected triangle is non-degenerate; a degenerate
/// projection falls through to the next best axis.
fn projection_axis(a: Point3, b: Point3, c: Point3) -> usize {
    let n = (b - a).cross(c - a);
    let mags = [n.x.abs(), n.y.abs(), n.z.abs()];
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| mags[j].partial_cmp(&mags[i]).unwrap());
    for axis in order {
        if orient2d(project(a, axis), project(b, axis), project(c, axis)) != 0 {
            return axis;
        }
    }
    unreachable!("non-degenerate triangle projects non-degenerately on some axis");
}

fn project(p: Point3, axis: usize) -> [f64; 2] {
    [p.coord((axis + 1) % 3), p.coord((axis + 2) % 3)]
}
