//! Cross-checks the floating-point triangle-pair test and the mesh scans
//! against an exact rational reference.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{crafted_intersecting_meshes, rational_triangles_intersect};
use hullwrap::geom::{triangles_intersect, Point3, SharedTopology, Triangle};
use hullwrap::validate::{exhaustive_intersection_scan, self_intersection_scan};

fn random_triangle(rng: &mut ChaCha8Rng, scale: f64, center: Point3) -> Option<[Point3; 3]> {
    let mut p = || {
        Point3::new(
            center.x + scale * rng.gen_range(-1.0..1.0),
            center.y + scale * rng.gen_range(-1.0..1.0),
            center.z + scale * rng.gen_range(-1.0..1.0),
        )
    };
    let tri = [p(), p(), p()];
    Triangle::new(tri[0], tri[1], tri[2]).ok().map(|_| tri)
}

#[test]
fn pair_test_agrees_with_the_rational_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut decided = 0;
    let mut hits = 0;
    while decided < 400 {
        let Some(t1) = random_triangle(&mut rng, 1.0, Point3::new(0.0, 0.0, 0.0)) else {
            continue;
        };
        // Varying the second center keeps a healthy mix of hits and misses.
        let shift = rng.gen_range(0.0..2.0);
        let Some(t2) = random_triangle(&mut rng, 1.0, Point3::new(shift, 0.0, 0.0)) else {
            continue;
        };
        let Some(want) = rational_triangles_intersect(t1, t2) else {
            continue;
        };
        let a = Triangle::new(t1[0], t1[1], t1[2]).unwrap();
        let b = Triangle::new(t2[0], t2[1], t2[2]).unwrap();
        let got = triangles_intersect(&a, &b, SharedTopology::None);
        assert_eq!(got, want, "disagreement on {t1:?} vs {t2:?}");
        decided += 1;
        hits += usize::from(want);
    }
    // The sample must actually exercise both outcomes.
    assert!(hits > 50 && hits < 350, "unbalanced sample: {hits}/400 hits");
}

#[test]
fn crafted_bad_meshes_fail_both_scans() {
    for (label, mesh) in crafted_intersecting_meshes() {
        let fast = self_intersection_scan(&mesh);
        let slow = exhaustive_intersection_scan(&mesh);
        assert!(!fast.free, "accelerated scan missed: {label}");
        assert!(!slow.free, "exhaustive scan missed: {label}");
        assert_eq!(fast, slow, "scan reports differ on: {label}");
    }
}

#[test]
fn scans_agree_on_contracted_surfaces() {
    for seed in [3u64, 17, 29] {
        let run = common::contracted_run(60, seed);
        let fast = self_intersection_scan(&run.mesh);
        let slow = exhaustive_intersection_scan(&run.mesh);
        assert!(fast.free, "contracted surface should be clean, seed={seed}");
        assert_eq!(fast, slow, "scan reports differ, seed={seed}");
    }
}
