//! Contracts the convex hull of a 3D point cloud into a closed triangulated
//! surface that passes through every point of the cloud.
//!
//! The surface starts as the hull and tightens one point at a time: each
//! interior point replaces its nearest facet with the three triangles that
//! join the facet's edges to the point, denting the surface inward by one
//! tetrahedron. Candidate dents are screened so that after every step the
//! surface is still a closed, consistently oriented manifold free of
//! self-intersections, and the sum of squared point-to-surface distances
//! falls strictly. A run either finishes with every point on the surface or
//! reports exactly which points could not be placed and what blocked them.
//!
//! ```
//! use hullwrap::contraction::{contract, ContractionConfig};
//! use hullwrap::io::generate_cloud;
//! use hullwrap::validate::validate;
//!
//! let (cloud, _) = generate_cloud("ball-uniform(60,7)", 0)?;
//! let run = contract(&cloud, &ContractionConfig::default())?;
//! assert!(run.outcome.is_complete());
//! assert_eq!(run.trace.insertions, cloud.len() - run.hull_vertices);
//!
//! let report = validate(&run.mesh, &cloud, Some(&run.trace), Some(run.on_surface_tolerance));
//! assert!(report.passed());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! The crate splits along the pipeline:
//!
//! - [`geom`]: exact-sign orientation predicates, triangles, distances, and
//!   topology-aware triangle contact tests.
//! - [`mesh`]: point clouds with duplicate merging, and the indexed
//!   triangle surface the engine mutates.
//! - [`hull`]: deterministic convex hull construction and the split of a
//!   cloud into hull vertices and interior points.
//! - [`bvh`]: the bounding-volume tree behind nearest-facet ranking and
//!   overlap queries.
//! - [`contraction`]: the insertion engine, its configuration, and the
//!   step-by-step trace it records.
//! - [`validate`]: structural and bookkeeping checks that certify a
//!   finished surface against its cloud and trace.
//! - [`io`]: cloud and mesh file formats, seeded cloud generators, and
//!   trace CSVs.
//! - [`bench`]: scaling measurements over generated cloud families.
//!
//! The `hullwrap` binary wraps the pipeline in three subcommands:
//! `contract`, `validate`, and `bench`. The guide under `book/` walks
//! through the concepts chapter by chapter; its code snippets are the doc
//! examples from this crate.

pub mod bench;
pub mod bvh;
pub mod contraction;
pub mod geom;
pub mod hull;
pub mod io;
pub mod mesh;
pub mod validate;

pub use geom::{Point3, Triangle, Vector3};
