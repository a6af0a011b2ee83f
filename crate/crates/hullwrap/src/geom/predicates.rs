//! Exact-sign orientation predicates.
//!
//! Every topological decision in this crate reduces to the sign of a small
//! determinant. A floating-point evaluation is used first, guarded by a
//! forward error bound: when the magnitude of the float result exceeds the
//! bound, its sign is provably correct. Otherwise we fall back to arbitrary
//! precision rational arithmetic over the exact `f64` inputs, so the returned
//! sign is always the sign of the true determinant.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::point::Point3;

/// Half an ulp of 1.0, the unit roundoff for `f64`.
const EPS: f64 = f64::EPSILON * 0.5;

/// Forward error bound coefficient for the 2x2 difference determinant.
const O2D_BOUND: f64 = (3.0 + 16.0 * EPS) * EPS;

/// Forward error bound coefficient for the 3x3 difference determinant.
const O3D_BOUND: f64 = (7.0 + 56.0 * EPS) * EPS;

/// Sign of the determinant `det(q - p, r - p, s - p)`.
///
/// Positive means `(p, q, r, s)` is a positively oriented tetrahedron: `s`
/// lies on the side of plane `(p, q, r)` that the right-handed normal
/// `(q - p) x (r - p)` points into. Zero means the four points are exactly
/// coplanar. The result is the sign of the real-arithmetic determinant
/// regardless of floating-point cancellation.
pub fn orient3d(p: Point3, q: Point3, r: Point3, s: Point3) -> i32 {
    let adx = q.x - p.x;
    let ady = q.y - p.y;
    let adz = q.z - p.z;
    let bdx = r.x - p.x;
    let bdy = r.y - p.y;
    let bdz = r.z - p.z;
    let cdx = s.x - p.x;
    let cdy = s.y - p.y;
    let cdz = s.z - p.z;

    let bdxcdy = bdx * cdy;
    let cdxbdy = cdx * bdy;
    let cdxady = cdx * ady;
    let adxcdy = adx * cdy;
    let adxbdy = adx * bdy;
    let bdxady = bdx * ady;

    let det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);

    let permanent = (bdxcdy.abs() + cdxbdy.abs()) * adz.abs()
        + (cdxady.abs() + adxcdy.abs()) * bdz.abs()
        + (adxbdy.abs() + bdxady.abs()) * cdz.abs();
    let errbound = O3D_BOUND * permanent;
    if det > errbound || -det > errbound {
        return if det > 0.0 { 1 } else { -1 };
    }

    orient3d_exact(p, q, r, s)
}

/// Sign of the 2D determinant `det(b - a, c - a)` over coordinate pairs.
///
/// Positive means `c` lies to the left of the directed line `a -> b`.
pub fn orient2d(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> i32 {
    let detleft = (a[0] - c[0]) * (b[1] - c[1]);
    let detright = (a[1] - c[1]) * (b[0] - c[0]);
    let det = detleft - detright;

    // Rounding preserves the sign of each product, so opposite (or zero)
    // float signs decide the exact sign without an error bound.
    let detsum;
    if detleft > 0.0 {
        if detright <= 0.0 {
            return sign_of(det);
        }
        detsum = detleft + detright;
    } else if detleft < 0.0 {
        if detright >= 0.0 {
            return sign_of(det);
        }
        detsum = -detleft - detright;
    } else {
        return sign_of(det);
    }

    let errbound = O2D_BOUND * detsum;
    if det >= errbound || -det >= errbound {
        return sign_of(det);
    }

    orient2d_exact(a, b, c)
}

fn sign_of(x: f64) -> i32 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

fn orient3d_exact(p: Point3, q: Point3, r: Point3, s: Point3) -> i32 {
    let ax = rational(q.x) - rational(p.x);
    let ay = rational(q.y) - rational(p.y);
    let az = rational(q.z) - rational(p.z);
    let bx = rational(r.x) - rational(p.x);
    let by = rational(r.y) - rational(p.y);
    let bz = rational(r.z) - rational(p.z);
    let cx = rational(s.x) - rational(p.x);
    let cy = rational(s.y) - rational(p.y);
    let cz = rational(s.z) - rational(p.z);

    let det = &az * (&bx * &cy - &cx * &by) + &bz * (&cx * &ay - &ax * &cy)
        + &cz * (&ax * &by - &bx * &ay);
    rational_sign(&det)
}

fn orient2d_exact(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> i32 {
    let acx = rational(a[0]) - rational(c[0]);
    let acy = rational(a[1]) - rational(c[1]);
    let bcx = rational(b[0]) - rational(c[0]);
    let bcy = rational(b[1]) - rational(c[1]);
    let det = acx * bcy - acy * bcx;
    rational_sign(&det)
}

fn rational_sign(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact collinearity test for three points in 3-space.
///
/// The points are collinear iff all three 2x2 minors of the cross product
/// `(q - p) x (r - p)` vanish; each minor is a planar orientation test.
pub fn collinear3d(p: Point3, q: Point3, r: Point3) -> bool {
    orient2d([p.x, p.y], [q.x, q.y], [r.x, r.y]) == 0
        && orient2d([p.x, p.z], [q.x, q.z], [r.x, r.z]) == 0
        && orient2d([p.y, p.z], [q.y, q.z], [r.y, r.z]) == 0
}

/// Exact determinant `det(q - p, r - p, s - p)` as a rational, exposed for
/// tests that cross-check the filtered predicates against long arithmetic.
pub fn orient3d_rational(p: Point3, q: Point3, r: Point3, s: Point3) -> BigRational {
    let ax = rational(q.x) - rational(p.x);
    let ay = rational(q.y) - rational(p.y);
    let az = rational(q.z) - rational(p.z);
    let bx = rational(r.x) - rational(p.x);
    let by = rational(r.y) - rational(p.y);
    let bz = rational(r.z) - rational(p.z);
    let cx = rational(s.x) - rational(p.x);
    let cy = rational(s.y) - rational(p.y);
    let cz = rational(s.z) - rational(p.z);

    &az * (&bx * &cy - &cx * &by) + &bz * (&cx * &ay - &ax * &cy) + &cz * (&ax * &by - &bx * &ay)
}
