//! Geometric kernel: points, triangles, exact-sign predicates, distances,
//! and topology-aware triangle contact tests.
//!
//! The rest of the crate builds on two guarantees made here. First, every
//! orientation sign is exact, so meshes derived from these predicates have
//! consistent topology. Second, triangle contact classification honors the
//! declared shared vertices and edges of a mesh, so adjacent facets are never
//! misreported as crossing.

mod intersect;
mod point;
mod predicates;
mod triangle;

pub use intersect::{point_in_triangle_coplanar, triangles_intersect, SharedTopology};
pub use point::{Point3, Vector3};
pub use predicates::{collinear3d, orient2d, orient3d, orient3d_rational};
pub use triangle::{
    signed_tet_volume, triangle_area, GeomError, Triangle, DEGENERACY_FACTOR,
};

/// Distance from a point to a closed triangle (zero iff the point lies on
/// the triangle, up to rounding in the distance arithmetic).
pub fn point_triangle_distance(p: Point3, t: &Triangle) -> f64 {
    t.distance(p)
}

/// Distance from a point to a triangle's centroid.
pub fn centroid_distance(p: Point3, t: &Triangle) -> f64 {
    t.centroid_distance(p)
}

/// Sign of the orientation of the tetrahedron `(p, q, r, s)`; see
/// [`orient3d`].
///
/// ```
/// use hullwrap::geom::{orientation, signed_tet_volume};
/// use hullwrap::Point3;
///
/// let a = Point3::new(0.0, 0.0, 0.0);
/// let b = Point3::new(1.0, 0.0, 0.0);
/// let c = Point3::new(0.0, 1.0, 0.0);
/// let above = Point3::new(0.25, 0.25, 1.0);
/// let below = Point3::new(0.25, 0.25, -1.0);
///
/// // Positive on the side the right-handed normal of (a, b, c) points into.
/// assert_eq!(orientation(a, b, c, above), 1);
/// assert_eq!(orientation(a, b, c, below), -1);
/// assert!(signed_tet_volume(a, b, c, above) > 0.0);
/// ```
pub fn orientation(p: Point3, q: Point3, r: Point3, s: Point3) -> i32 {
    orient3d(p, q, r, s)
}
