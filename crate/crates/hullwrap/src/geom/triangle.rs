use thiserror::Error;

use super::point::{Point3, Vector3};

/// Relative area floor below which a triangle counts as degenerate.
///
/// A triangle is rejected when `area < DEGENERACY_FACTOR * longest_edge_sq`.
/// Both sides scale quadratically with the coordinates, so the test is
/// scale-invariant.
pub const DEGENERACY_FACTOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    /// The three vertices are (numerically) collinear or coincident.
    #[error("degenerate triangle: vertices are collinear or coincident")]
    DegenerateTriangle,
    /// A coordinate was NaN or infinite.
    #[error("non-finite coordinate")]
    NonFiniteCoordinate,
}

/// An oriented triangle with pairwise distinct, non-collinear vertices.
///
/// Construction enforces non-degeneracy, so downstream distance and
/// intersection routines can assume a well-defined supporting plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triangle {
    a: Point3,
    b: Point3,
    c: Point3,
}

impl Triangle {
    pub fn new(a: Point3, b: Point3, c: Point3) -> Result<Self, GeomError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(GeomError::NonFiniteCoordinate);
        }
        if is_degenerate(a, b, c) {
            return Err(GeomError::DegenerateTriangle);
        }
        Ok(Triangle { a, b, c })
    }

    pub fn a(&self) -> Point3 {
        self.a
    }

    pub fn b(&self) -> Point3 {
        self.b
    }

    pub fn c(&self) -> Point3 {
        self.c
    }

    pub fn vertices(&self) -> [Point3; 3] {
        [self.a, self.b, self.c]
    }

    pub fn vertex(&self, i: usize) -> Point3 {
        match i {
            0 => self.a,
            1 => self.b,
            2 => self.c,
            _ => panic!("triangle vertex index out of range: {i}"),
        }
    }

    pub fn centroid(&self) -> Point3 {
        Point3::new(
            (self.a.x + self.b.x + self.c.x) / 3.0,
            (self.a.y + self.b.y + self.c.y) / 3.0,
            (self.a.z + self.b.z + self.c.z) / 3.0,
        )
    }

    pub fn area(&self) -> f64 {
        triangle_area(self.a, self.b, self.c)
    }

    /// Unnormalized right-handed normal `(b - a) x (c - a)`.
    pub fn scaled_normal(&self) -> Vector3 {
        (self.b - self.a).cross(self.c - self.a)
    }

    /// The point of the closed triangle nearest to `p`.
    ///
    /// Voronoi-region walk over the vertices, edges, and face. Squared-term
    /// cancellation is benign here: the result is only used for distances,
    /// never for topological decisions.
    pub fn closest_point(&self, p: Point3) -> Point3 {
        let (a, b, c) = (self.a, self.b, self.c);
        let ab = b - a;
        let ac = c - a;
        let ap = p - a;

        let d1 = ab.dot(ap);
        let d2 = ac.dot(ap);
        if d1 <= 0.0 && d2 <= 0.0 {
            return a;
        }

        let bp = p - b;
        let d3 = ab.dot(bp);
        let d4 = ac.dot(bp);
        if d3 >= 0.0 && d4 <= d3 {
            return b;
        }

        let vc = d1 * d4 - d3 * d2;
        if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
            let v = d1 / (d1 - d3);
            return a + ab * v;
        }

        let cp = p - c;
        let d5 = ab.dot(cp);
        let d6 = ac.dot(cp);
        if d6 >= 0.0 && d5 <= d6 {
            return c;
        }

        let vb = d5 * d2 - d1 * d6;
        if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
            let w = d2 / (d2 - d6);
            return a + ac * w;
        }

        let va = d3 * d6 - d5 * d4;
        if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
            let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
            return b + (c - b) * w;
        }

        let denom = 1.0 / (va + vb + vc);
        let v = vb * denom;
        let w = vc * denom;
        a + ab * v + ac * w
    }

    /// Euclidean distance from `p` to the closed triangle. Zero iff `p`
    /// lies on the triangle (up to the distance arithmetic's rounding).
    pub fn distance(&self, p: Point3) -> f64 {
        self.closest_point(p).distance(p)
    }

    /// Squared distance from `p` to the closed triangle.
    pub fn distance_squared(&self, p: Point3) -> f64 {
        self.closest_point(p).distance_squared(p)
    }

    /// Distance from `p` to the triangle's centroid.
    pub fn centroid_distance(&self, p: Point3) -> f64 {
        self.centroid().distance(p)
    }
}

/// Half the norm of the edge cross product.
pub fn triangle_area(a: Point3, b: Point3, c: Point3) -> f64 {
    0.5 * (b - a).cross(c - a).norm()
}

/// Signed volume of the tetrahedron `(a, b, c, d)`: `det(b-a, c-a, d-a) / 6`.
///
/// For an outward-oriented facet `(a, b, c)` of a closed surface and a point
/// `d` strictly inside, the result is negative.
pub fn signed_tet_volume(a: Point3, b: Point3, c: Point3, d: Point3) -> f64 {
    let u = b - a;
    let v = c - a;
    let w = d - a;
    u.cross(v).dot(w) / 6.0
}

pub(crate) fn is_degenerate(a: Point3, b: Point3, c: Point3) -> bool {
    let area = triangle_area(a, b, c);
    let longest_sq = (b - a)
        .norm_squared()
        .max((c - a).norm_squared())
        .max((c - b).norm_squared());
    area < DEGENERACY_FACTOR * longest_sq
}
