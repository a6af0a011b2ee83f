//! Release gate for the pipeline. Each test checks one promised behavior
//! end to end at its stated tolerance and prints a single verdict line;
//! run with `--nocapture` to see the verdicts of passing tests too.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use serde_json::Value;

use common::{
    all_points_weakly_inside, crafted_intersecting_meshes, exhaustive_hull_vertices, hullwrap_cmd,
};
use hullwrap::bench::{run_bench, BenchConfig};
use hullwrap::contraction::{contract, ContractionConfig, ContractionRun, StepAction, TraceSample};
use hullwrap::geom::signed_tet_volume;
use hullwrap::hull::convex_hull;
use hullwrap::io::Generator;
use hullwrap::mesh::PointCloud;
use hullwrap::validate::{
    exhaustive_intersection_scan, self_intersection_scan, validate, ValidationReport,
};

/// One benchmark run shared by the suites below: ball clouds at the two
/// reference sizes, ten seeds each, contracted and validated once.
struct Fixture {
    n: usize,
    seed: u64,
    cloud: PointCloud,
    run: ContractionRun,
    report: ValidationReport,
    wall: Duration,
}

static FIXTURES: OnceLock<Vec<Fixture>> = OnceLock::new();

fn fixtures() -> &'static [Fixture] {
    FIXTURES.get_or_init(|| {
        let mut out = Vec::new();
        for n in [50usize, 500] {
            for seed in 0..10u64 {
                let cloud = common::ball_cloud(n, seed);
                let started = Instant::now();
                let run = contract(&cloud, &ContractionConfig::default()).unwrap();
                let report =
                    validate(&run.mesh, &cloud, Some(&run.trace), Some(run.on_surface_tolerance));
                let wall = started.elapsed();
                out.push(Fixture { n, seed, cloud, run, report, wall });
            }
        }
        out
    })
}

/// Prints the verdict line for one gate and fails the test when it did
/// not hold.
fn conclude(gate: &str, ok: bool, detail: &str) {
    println!("[{}] {gate}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{gate}: {detail}");
}

fn sample_of(step: &hullwrap::contraction::StepRecord) -> TraceSample {
    TraceSample {
        metric: step.metric,
        volume: step.volume,
        area: step.area,
        hausdorff: step.hausdorff,
    }
}

#[test]
fn a1_benchmark_clouds_contract_to_valid_surfaces_in_time() {
    let budget = Duration::from_secs(5);
    let mut failures = Vec::new();
    for f in fixtures() {
        let r = &f.report;
        let ok = f.run.outcome.is_complete()
            && r.closed_manifold
            && r.orientation_consistent
            && r.self_intersection_free
            && r.all_points_on_surface
            && r.containment_ok
            && f.wall < budget;
        if !ok {
            failures.push(format!(
                "n={} seed={} wall={:.3}s outcome_complete={}\n{}",
                f.n,
                f.seed,
                f.wall.as_secs_f64(),
                f.run.outcome.is_complete(),
                r.to_text()
            ));
        }
    }
    let slowest = fixtures().iter().map(|f| f.wall).max().unwrap();
    conclude(
        "a1 every benchmark cloud contracts to a valid closed surface within 5 s",
        failures.is_empty(),
        &if failures.is_empty() {
            format!("20/20 runs complete and valid, slowest {:.3}s", slowest.as_secs_f64())
        } else {
            failures.join("\n")
        },
    );
}

#[test]
fn a2_error_metric_falls_with_every_insertion() {
    let mut insertions = 0usize;
    let mut failures = Vec::new();
    for f in fixtures() {
        let mut prev = f.run.trace.initial;
        for step in &f.run.trace.steps {
            if step.action != StepAction::Inserted {
                continue;
            }
            // Comparisons use the recorded step values only.
            if step.metric >= prev.metric {
                failures.push(format!(
                    "n={} seed={} k={}: metric {} -> {}",
                    f.n, f.seed, step.k, prev.metric, step.metric
                ));
            }
            if step.hausdorff > prev.hausdorff {
                failures.push(format!(
                    "n={} seed={} k={}: hausdorff {} -> {}",
                    f.n, f.seed, step.k, prev.hausdorff, step.hausdorff
                ));
            }
            insertions += 1;
            prev = sample_of(step);
        }
    }
    conclude(
        "a2 squared-distance metric strictly falls and Hausdorff never rises per insertion",
        failures.is_empty(),
        &if failures.is_empty() {
            format!("{insertions} insertions over 20 runs, zero violations")
        } else {
            failures.join("\n")
        },
    );
}

#[test]
fn a3_each_insertion_cuts_exactly_one_tetrahedron() {
    let mut insertions = 0usize;
    let mut worst_rel = 0.0f64;
    let mut failures = Vec::new();
    for f in fixtures() {
        let mut prev = f.run.trace.initial;
        for step in &f.run.trace.steps {
            if step.action != StepAction::Inserted {
                continue;
            }
            let [a, b, c] = step.facet;
            let cut = signed_tet_volume(
                f.cloud.point(a),
                f.cloud.point(b),
                f.cloud.point(c),
                f.cloud.point(step.point),
            );
            let scale = prev.volume.abs().max(cut.abs()).max(1e-300);
            let rel = ((step.volume - (prev.volume + cut)) / scale).abs();
            worst_rel = worst_rel.max(rel);
            if rel > 1e-9 {
                failures.push(format!(
                    "n={} seed={} k={}: volume off by {rel:.3e} relative",
                    f.n, f.seed, step.k
                ));
            }
            if step.area < prev.area * (1.0 - 1e-12) {
                failures.push(format!(
                    "n={} seed={} k={}: area fell {} -> {}",
                    f.n, f.seed, step.k, prev.area, step.area
                ));
            }
            insertions += 1;
            prev = sample_of(step);
        }
    }
    conclude(
        "a3 volume drops by the cut tetrahedron (rel err <= 1e-9) and area never falls",
        failures.is_empty(),
        &if failures.is_empty() {
            format!("{insertions} insertions, worst relative volume error {worst_rel:.3e}")
        } else {
            failures.join("\n")
        },
    );
}

#[test]
fn a4_hull_vertices_match_an_exhaustive_search() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for i in 0..20usize {
        let generator = Generator::ALL[i % Generator::ALL.len()];
        let n = 10 + (i * 40) / 19;
        let seed = 1000 + i as u64;
        let cloud = common::generated_cloud(generator, n, seed);
        let hull = convex_hull(&cloud).unwrap();
        let got: BTreeSet<usize> = hull.vertex_ids().into_iter().collect();
        let want = exhaustive_hull_vertices(&cloud);
        if got != want {
            failures.push(format!("{}({n},{seed}): vertex sets differ", generator.name()));
        }
        if !all_points_weakly_inside(&cloud, &hull) {
            failures.push(format!("{}({n},{seed}): point outside a facet", generator.name()));
        }
    }
    let wall = started.elapsed();
    let in_time = wall < Duration::from_secs(10);
    conclude(
        "a4 hull vertex sets equal the brute-force search and enclose every point within 10 s",
        failures.is_empty() && in_time,
        &if failures.is_empty() && in_time {
            format!("20/20 clouds agree, {:.2}s total", wall.as_secs_f64())
        } else {
            format!("{} ({:.2}s)", failures.join("; "), wall.as_secs_f64())
        },
    );
}

#[test]
fn a5_accelerated_scan_equals_the_all_pairs_scan() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut largest = 0usize;
    for i in 0..50usize {
        let n = [24, 43, 62, 81, 100][i % 5];
        let run = common::contracted_run(n, 300 + i as u64);
        largest = largest.max(run.mesh.facet_count());
        assert!(run.mesh.facet_count() <= 200);
        let fast = self_intersection_scan(&run.mesh);
        let slow = exhaustive_intersection_scan(&run.mesh);
        if fast != slow {
            failures.push(format!("n={n} seed={}: scans differ", 300 + i as u64));
        }
        if !fast.free {
            failures.push(format!("n={n} seed={}: clean surface flagged", 300 + i as u64));
        }
    }
    for (label, mesh) in crafted_intersecting_meshes() {
        let fast = self_intersection_scan(&mesh);
        let slow = exhaustive_intersection_scan(&mesh);
        if fast != slow {
            failures.push(format!("{label}: scans differ"));
        }
        if fast.free {
            failures.push(format!("{label}: intersection missed"));
        }
    }
    let wall = started.elapsed();
    let in_time = wall < Duration::from_secs(10);
    conclude(
        "a5 accelerated and all-pairs intersection scans agree on 55 meshes within 10 s",
        failures.is_empty() && in_time,
        &if failures.is_empty() && in_time {
            format!("50 clean + 5 crafted meshes agree, largest {largest} facets, {:.2}s", wall.as_secs_f64())
        } else {
            format!("{} ({:.2}s)", failures.join("; "), wall.as_secs_f64())
        },
    );
}

#[test]
fn a6_insertions_account_for_every_interior_point() {
    let mut failures = Vec::new();
    for f in fixtures() {
        let n_minus_m = f.n - f.run.hull_vertices;
        let rule_of_thumb = f.n as f64 / 100.0;
        let verdict = if (n_minus_m as f64 - rule_of_thumb).abs() > 0.5 {
            "counts differ"
        } else {
            "counts agree"
        };
        println!(
            "    n={} seed={}: insertions={} n-m={} n/100={:.2} ({verdict})",
            f.n, f.seed, f.run.trace.insertions, n_minus_m, rule_of_thumb
        );
        if f.run.trace.insertions != n_minus_m {
            failures.push(format!(
                "n={} seed={}: {} insertions but n-m={}",
                f.n, f.seed, f.run.trace.insertions, n_minus_m
            ));
        }
    }
    conclude(
        "a6 insertion count equals cloud size minus hull vertices on every run",
        failures.is_empty(),
        &if failures.is_empty() {
            "20/20 runs, n/100 shown above for comparison".to_string()
        } else {
            failures.join("\n")
        },
    );
}

#[test]
fn a7_runtime_scales_subquadratically() {
    let config = BenchConfig {
        generator: Generator::BallUniform,
        sizes: vec![100, 200, 400, 800, 1600, 3200],
        repeats: 2,
        seed: 0,
        contraction: ContractionConfig::default(),
    };
    let started = Instant::now();
    let report = run_bench(&config).unwrap();
    let wall = started.elapsed();

    let all_good = report.records.iter().all(|r| r.outcome == "COMPLETE" && r.validation_passed);
    let s = &report.slopes;
    let sort_gap = (s.prioritize - s.prioritize_reference).abs();
    let soft = if s.total <= 2.2 { "meets the 2.2 target" } else { "above the 2.2 target" };
    let ok = all_good && s.total <= 2.5 && sort_gap <= 0.5 && wall < Duration::from_secs(300);
    conclude(
        "a7 doubling sweep stays subquadratic and the sort phase tracks its model",
        ok,
        &format!(
            "total slope {:.2} ({soft}, hard limit 2.5), sort {:.2} vs model {:.2} (gap {:.2} <= 0.5), \
             all runs complete={all_good}, {:.1}s of 300s",
            s.total, s.prioritize, s.prioritize_reference, sort_gap, wall.as_secs_f64()
        ),
    );
}

#[test]
fn a8_identical_invocations_are_byte_identical() {
    let mut failures = Vec::new();
    for (label, extra) in [
        ("default settings", vec![]),
        ("true-distance priority, breadth 4", vec!["--priority", "true", "--fallback-breadth", "4"]),
    ] {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            // Relative paths from a fresh working directory keep the two
            // summaries comparable; only timings may legitimately differ.
            let dir = tempfile::tempdir().unwrap();
            let out = hullwrap_cmd()
                .current_dir(dir.path())
                .args(["contract", "--generate", "ball-uniform(120,13)", "--validate"])
                .args(["--output", "mesh.obj", "--trace-dir", "trace"])
                .args(&extra)
                .output()
                .unwrap();
            assert_eq!(out.status.code(), Some(0), "{label}: run failed");
            let mut summary: Value = serde_json::from_slice(&out.stdout).unwrap();
            summary.as_object_mut().unwrap().remove("timings_s");
            outputs.push((
                fs::read(dir.path().join("mesh.obj")).unwrap(),
                fs::read(dir.path().join("trace/trace.csv")).unwrap(),
                summary,
            ));
        }
        if outputs[0].0 != outputs[1].0 {
            failures.push(format!("{label}: meshes differ"));
        }
        if outputs[0].1 != outputs[1].1 {
            failures.push(format!("{label}: traces differ"));
        }
        if outputs[0].2 != outputs[1].2 {
            failures.push(format!("{label}: summaries differ"));
        }
    }
    conclude(
        "a8 repeated runs reproduce meshes, traces, and summaries byte for byte",
        failures.is_empty(),
        &if failures.is_empty() {
            "two configurations, mesh/trace/summary identical across reruns".to_string()
        } else {
            failures.join("; ")
        },
    );
}
