//! Shared helpers and independent reference implementations for the
//! integration suites. The reference code here favors brute force and
//! exact arithmetic over speed so it cannot share a bug with the library
//! paths it checks.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::process::Command;

use num_rational::BigRational;
use num_traits::Zero;

use hullwrap::contraction::{contract, ContractionConfig, ContractionRun};
use hullwrap::geom::{collinear3d, orientation, Point3};
use hullwrap::io::Generator;
use hullwrap::mesh::{PointCloud, PointId, SurfaceMesh};

pub fn generated_cloud(generator: Generator, n: usize, seed: u64) -> PointCloud {
    PointCloud::from_points(generator.points(n, seed)).expect("finite points").0
}

pub fn ball_cloud(n: usize, seed: u64) -> PointCloud {
    generated_cloud(Generator::BallUniform, n, seed)
}

/// Contracts a ball cloud to completion.
pub fn contracted_run(n: usize, seed: u64) -> ContractionRun {
    let cloud = ball_cloud(n, seed);
    let run = contract(&cloud, &ContractionConfig::default()).expect("contraction starts");
    assert!(run.outcome.is_complete(), "ball cloud n={n} seed={seed} should complete");
    run
}

/// The `hullwrap` binary built alongside these tests.
pub fn hullwrap_cmd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hullwrap"))
}

/// Brute-force extreme-vertex set: a triple spans a supporting plane when
/// every other point sits weakly on one side of it, and its corners are
/// then hull vertices. Exact orientation signs throughout. Correct for
/// clouds with no four coplanar points.
pub fn exhaustive_hull_vertices(cloud: &PointCloud) -> BTreeSet<PointId> {
    let n = cloud.len();
    let mut vertices = BTreeSet::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (a, b, c) = (cloud.point(i), cloud.point(j), cloud.point(k));
                if collinear3d(a, b, c) {
                    continue;
                }
                let mut above = false;
                let mut below = false;
                for x in 0..n {
                    if x == i || x == j || x == k {
                        continue;
                    }
                    match orientation(a, b, c, cloud.point(x)).cmp(&0) {
                        Ordering::Greater => above = true,
                        Ordering::Less => below = true,
                        Ordering::Equal => {}
                    }
                    if above && below {
                        break;
                    }
                }
                if !(above && below) {
                    vertices.extend([i, j, k]);
                }
            }
        }
    }
    vertices
}

/// Every cloud point sits weakly inside every facet plane of the mesh
/// (positive side is outside).
pub fn all_points_weakly_inside(cloud: &PointCloud, hull: &SurfaceMesh) -> bool {
    hull.facets().all(|(_, [a, b, c])| {
        let (pa, pb, pc) = (hull.point(a), hull.point(b), hull.point(c));
        (0..cloud.len()).all(|x| orientation(pa, pb, pc, cloud.point(x)) <= 0)
    })
}

type R3 = [BigRational; 3];

fn exact(p: Point3) -> R3 {
    let r = |v: f64| BigRational::from_float(v).expect("finite coordinate");
    [r(p.x), r(p.y), r(p.z)]
}

fn sub(a: &R3, b: &R3) -> R3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn cross(a: &R3, b: &R3) -> R3 {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

fn dot(a: &R3, b: &R3) -> BigRational {
    &(&a[0] * &b[0]) + &(&(&a[1] * &b[1]) + &(&a[2] * &b[2]))
}

/// Exact test: does the closed segment `p..q` meet the closed triangle?
/// Returns `None` for configurations this oracle does not decide (segment
/// coplanar with the triangle, or a degenerate triangle).
pub fn rational_segment_hits_triangle(p: Point3, q: Point3, tri: [Point3; 3]) -> Option<bool> {
    let (p, q) = (exact(p), exact(q));
    let (a, b, c) = (exact(tri[0]), exact(tri[1]), exact(tri[2]));
    let n = cross(&sub(&b, &a), &sub(&c, &a));
    if n.iter().all(Zero::is_zero) {
        return None;
    }
    let sp = dot(&n, &sub(&p, &a));
    let sq = dot(&n, &sub(&q, &a));
    if sp.is_zero() && sq.is_zero() {
        return None;
    }
    let zero = BigRational::zero();
    if (sp > zero && sq > zero) || (sp < zero && sq < zero) {
        return Some(false);
    }
    // The crossing point of the segment with the triangle's plane.
    let t = &sp / &(&sp - &sq);
    let h = [
        &p[0] + &(&t * &(&q[0] - &p[0])),
        &p[1] + &(&t * &(&q[1] - &p[1])),
        &p[2] + &(&t * &(&q[2] - &p[2])),
    ];
    let side = |u: &R3, v: &R3| dot(&n, &cross(&sub(v, u), &sub(&h, u))) >= BigRational::zero();
    Some(side(&a, &b) && side(&b, &c) && side(&c, &a))
}

/// Exact closed-set intersection test for a generic triangle pair: two
/// non-coplanar triangles meet iff an edge of one meets the other's
/// closed face. `None` when any edge test declines.
pub fn rational_triangles_intersect(t1: [Point3; 3], t2: [Point3; 3]) -> Option<bool> {
    let mut hit = false;
    for i in 0..3 {
        match rational_segment_hits_triangle(t1[i], t1[(i + 1) % 3], t2) {
            None => return None,
            Some(h) => hit |= h,
        }
        match rational_segment_hits_triangle(t2[i], t2[(i + 1) % 3], t1) {
            None => return None,
            Some(h) => hit |= h,
        }
    }
    Some(hit)
}

/// Small meshes that must fail the self-intersection scan, with the
/// defect each one carries.
pub fn crafted_intersecting_meshes() -> Vec<(&'static str, SurfaceMesh)> {
    let tetra = |o: Point3| {
        vec![
            o,
            Point3::new(o.x + 2.0, o.y, o.z),
            Point3::new(o.x, o.y + 2.0, o.z),
            Point3::new(o.x, o.y, o.z + 2.0),
        ]
    };
    let tetra_facets = |base: usize| {
        vec![
            [base, base + 2, base + 1],
            [base, base + 1, base + 3],
            [base + 1, base + 2, base + 3],
            [base, base + 3, base + 2],
        ]
    };

    let mut meshes = Vec::new();

    let mut coords = tetra(Point3::new(0.0, 0.0, 0.0));
    coords.extend(tetra(Point3::new(0.3, 0.25, 0.2)));
    let mut facets = tetra_facets(0);
    facets.extend(tetra_facets(4));
    meshes.push(("interlocking tetrahedra", SurfaceMesh::from_coords(coords, facets)));

    let coords = tetra(Point3::new(0.0, 0.0, 0.0));
    let mut facets = tetra_facets(0);
    facets.push([0, 2, 1]);
    meshes.push(("duplicated facet", SurfaceMesh::from_coords(coords, facets)));

    let mut coords = tetra(Point3::new(0.0, 0.0, 0.0));
    coords.extend([
        Point3::new(0.3, 0.3, -0.5),
        Point3::new(0.3, 0.3, 0.9),
        Point3::new(1.2, 1.2, 0.1),
    ]);
    let mut facets = tetra_facets(0);
    facets.push([4, 5, 6]);
    meshes.push(("edge through a facet", SurfaceMesh::from_coords(coords, facets)));

    let mut coords = tetra(Point3::new(10.0, 10.0, 10.0));
    coords.extend([
        Point3::new(-1.0, 0.0, 0.0),
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(0.0, 0.0, 1.0),
        Point3::new(0.0, -1.0, 0.5),
        Point3::new(0.0, 1.0, 0.5),
        Point3::new(0.0, 0.0, -0.5),
    ]);
    let mut facets = tetra_facets(0);
    facets.extend([[4, 5, 6], [7, 8, 9]]);
    meshes.push(("crossing triangle pair", SurfaceMesh::from_coords(coords, facets)));

    let mut coords = tetra(Point3::new(0.0, 0.0, 0.0));
    coords.extend([
        Point3::new(4.0, 0.0, 0.0),
        Point3::new(5.0, 0.0, 0.0),
        Point3::new(6.0, 0.0, 0.0),
    ]);
    let mut facets = tetra_facets(0);
    facets.push([4, 5, 6]);
    meshes.push(("zero-area facet", SurfaceMesh::from_coords(coords, facets)));

    meshes
}
