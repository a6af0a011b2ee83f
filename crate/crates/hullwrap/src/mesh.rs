//! Point clouds and indexed triangulated surfaces.
//!
//! A [`SurfaceMesh`] references cloud points by id and owns the edge
//! topology needed for adjacency queries. The only mutation a contraction
//! ever performs is [`SurfaceMesh::split_facet`]: replace one facet with the
//! three facets coning its boundary to a new vertex. That operation keeps a
//! closed 2-manifold closed, shifting Euler counts by exactly (+1 vertex,
//! +3 edges, +2 facets).

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::geom::{
    signed_tet_volume, triangle_area, GeomError, Point3, SharedTopology, Triangle,
};

/// Index of a point in its [`PointCloud`]; stable for the life of a run.
pub type PointId = usize;

/// Fraction of the bounding-box diagonal under which two input points are
/// considered duplicates and merged at ingestion.
pub const DUPLICATE_TOLERANCE_FACTOR: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CloudError {
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
}

/// A duplicate input point that was merged away during ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergedDuplicate {
    /// Position of the dropped point in the original input sequence.
    pub input_index: usize,
    /// Id of the retained point it collided with.
    pub kept_id: PointId,
}

/// Diagnostics from cloud ingestion.
#[derive(Debug, Clone, Default)]
pub struct IngestReport {
    pub merged: Vec<MergedDuplicate>,
}

/// An immutable, deduplicated set of points. Ids are positions in input
/// order after duplicate removal.
#[derive(Debug, Clone)]
pub struct PointCloud {
    points: Vec<Point3>,
    bbox_min: Point3,
    bbox_max: Point3,
}

impl PointCloud {
    /// Ingest points: reject non-finite coordinates, then merge points
    /// closer than [`DUPLICATE_TOLERANCE_FACTOR`] times the bounding-box
    /// diagonal (earliest occurrence wins).
    pub fn from_points(input: Vec<Point3>) -> Result<(Self, IngestReport), CloudError> {
        for (index, p) in input.iter().enumerate() {
            if !p.is_finite() {
                return Err(CloudError::NonFinite { index });
            }
        }

        let mut bbox_min = Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut bbox_max = Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &input {
            bbox_min = bbox_min.min_components(*p);
            bbox_max = bbox_max.max_components(*p);
        }

        let tol = if input.is_empty() {
            0.0
        } else {
            DUPLICATE_TOLERANCE_FACTOR * (bbox_max - bbox_min).norm()
        };

        let mut report = IngestReport::default();
        let mut points: Vec<Point3> = Vec::with_capacity(input.len());
        if tol > 0.0 {
            // Uniform grid keyed by tolerance-sized cells; a point only needs
            // comparing against kept points in its own and adjacent cells.
            let mut grid: HashMap<(i64, i64, i64), Vec<PointId>> = HashMap::new();
            let cell = |p: &Point3| {
                (
                    ((p.x - bbox_min.x) / tol).floor() as i64,
                    ((p.y - bbox_min.y) / tol).floor() as i64,
                    ((p.z - bbox_min.z) / tol).floor() as i64,
                )
            };
            'next_point: for (input_index, p) in input.iter().enumerate() {
                let (cx, cy, cz) = cell(p);
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        for dz in -1..=1 {
                            if let Some(ids) = grid.get(&(cx + dx, cy + dy, cz + dz)) {
                                for &id in ids {
                                    if points[id].distance(*p) < tol {
                                        report.merged.push(MergedDuplicate {
                                            input_index,
                                            kept_id: id,
                                        });
                                        continue 'next_point;
                                    }
                                }
                            }
                        }
                    }
                }
                let id = points.len();
                points.push(*p);
                grid.entry((cx, cy, cz)).or_default().push(id);
            }
        } else {
            // Zero diagonal: every point is identical, keep the first.
            for (input_index, p) in input.iter().enumerate() {
                if points.is_empty() {
                    points.push(*p);
                } else {
                    report.merged.push(MergedDuplicate { input_index, kept_id: 0 });
                }
            }
        }

        let cloud = PointCloud { points, bbox_min, bbox_max };
        Ok((cloud, report))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, id: PointId) -> Point3 {
        self.points[id]
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = (PointId, Point3)> + '_ {
        self.points.iter().copied().enumerate()
    }

    pub fn bbox(&self) -> (Point3, Point3) {
        (self.bbox_min, self.bbox_max)
    }

    pub fn bbox_diagonal(&self) -> f64 {
        if self.points.is_empty() {
            0.0
        } else {
            (self.bbox_max - self.bbox_min).norm()
        }
    }
}

/// Handle to a facet slot at a particular generation.
///
/// Splitting a facet reuses its slot for one replacement and bumps the
/// generation, so stale handles held across mutations are detectable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacetRef {
    pub slot: u32,
    pub gen: u32,
}

#[derive(Debug, Clone, Copy)]
struct FacetData {
    verts: [PointId; 3],
    gen: u32,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SplitError {
    #[error("facet handle is stale: slot {slot} is at generation {current}, not {requested}")]
    StaleFacet { slot: u32, current: u32, requested: u32 },
    #[error("point {point} is already a vertex of the surface")]
    DuplicateVertex { point: PointId },
    #[error("splitting facet {facet:?} at point {point} creates a degenerate facet")]
    DegenerateFacet { facet: [PointId; 3], point: PointId },
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// A triangulated surface over a point cloud.
///
/// Owns a copy of the full cloud coordinate array so facet ids remain cloud
/// ids; unreferenced coordinates are simply not on the surface. Edge
/// incidences are tracked permissively (a broken mesh loaded from a file may
/// have any multiplicity); the validation pass decides manifoldness.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    coords: Vec<Point3>,
    facets: Vec<FacetData>,
    edges: BTreeMap<(PointId, PointId), Vec<(u32, bool)>>,
    vertex_use: Vec<u32>,
    vertex_count: usize,
}

impl SurfaceMesh {
    /// Build a mesh over a cloud from facet triples (cloud ids).
    pub fn new(cloud: &PointCloud, facets: Vec<[PointId; 3]>) -> Self {
        Self::from_coords(cloud.points().to_vec(), facets)
    }

    /// Build a mesh from raw coordinates, e.g. loaded from a file. Facet
    /// indices refer to positions in `coords`.
    pub fn from_coords(coords: Vec<Point3>, facets: Vec<[PointId; 3]>) -> Self {
        let mut mesh = SurfaceMesh {
            vertex_use: vec![0; coords.len()],
            coords,
            facets: Vec::with_capacity(facets.len()),
            edges: BTreeMap::new(),
            vertex_count: 0,
        };
        for verts in facets {
            let slot = mesh.facets.len() as u32;
            mesh.facets.push(FacetData { verts, gen: 0 });
            mesh.link_facet(slot, verts);
        }
        mesh
    }

    fn link_facet(&mut self, slot: u32, verts: [PointId; 3]) {
        for i in 0..3 {
            let a = verts[i];
            let b = verts[(i + 1) % 3];
            let key = (a.min(b), a.max(b));
            let forward = a < b;
            self.edges.entry(key).or_default().push((slot, forward));
        }
        for v in verts {
            if self.vertex_use[v] == 0 {
                self.vertex_count += 1;
            }
            self.vertex_use[v] += 1;
        }
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Number of cloud points used by at least one facet.
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// V - E + F; equals 2 for a surface homeomorphic to a sphere.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edge_count() as i64 + self.facet_count() as i64
    }

    pub fn coords(&self) -> &[Point3] {
        &self.coords
    }

    pub fn point(&self, id: PointId) -> Point3 {
        self.coords[id]
    }

    pub fn is_surface_vertex(&self, id: PointId) -> bool {
        self.vertex_use[id] > 0
    }

    /// Ids of cloud points on the surface, ascending.
    pub fn vertex_ids(&self) -> Vec<PointId> {
        (0..self.coords.len()).filter(|&v| self.vertex_use[v] > 0).collect()
    }

    pub fn facet_verts(&self, slot: u32) -> [PointId; 3] {
        self.facets[slot as usize].verts
    }

    pub fn facet_ref(&self, slot: u32) -> FacetRef {
        FacetRef { slot, gen: self.facets[slot as usize].gen }
    }

    /// Resolve a handle; `None` when the slot has been reused since.
    pub fn resolve(&self, f: FacetRef) -> Option<[PointId; 3]> {
        let data = self.facets.get(f.slot as usize)?;
        (data.gen == f.gen).then_some(data.verts)
    }

    pub fn is_live(&self, f: FacetRef) -> bool {
        self.resolve(f).is_some()
    }

    pub fn facet_slots(&self) -> impl Iterator<Item = u32> + '_ {
        0..self.facets.len() as u32
    }

    pub fn facets(&self) -> impl Iterator<Item = (FacetRef, [PointId; 3])> + '_ {
        self.facets
            .iter()
            .enumerate()
            .map(|(slot, data)| (FacetRef { slot: slot as u32, gen: data.gen }, data.verts))
    }

    /// The facet's geometry; `None` for a degenerate facet, which can only
    /// occur in meshes loaded from external files.
    pub fn triangle(&self, slot: u32) -> Option<Triangle> {
        let [a, b, c] = self.facets[slot as usize].verts;
        Triangle::new(self.coords[a], self.coords[b], self.coords[c]).ok()
    }

    /// Facet slots incident to the undirected edge `(a, b)`, with traversal
    /// direction (`true` when stored ascending).
    pub fn edge_facets(&self, a: PointId, b: PointId) -> &[(u32, bool)] {
        self.edges
            .get(&(a.min(b), a.max(b)))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(PointId, PointId), &Vec<(u32, bool)>)> {
        self.edges.iter()
    }

    /// The declared contact between two distinct facets, derived from their
    /// vertex ids. Three shared ids means a duplicate facet; callers treat
    /// that as forbidden without a geometric test.
    pub fn shared_topology(&self, s1: u32, s2: u32) -> Option<SharedTopology> {
        shared_ids(self.facets[s1 as usize].verts, self.facets[s2 as usize].verts)
    }

    /// Replace facet `f = (a, b, c)` with `(a, b, p)`, `(b, c, p)`,
    /// `(c, a, p)`, absorbing `p` as a new surface vertex.
    ///
    /// The replaced slot is reused for the first child (generation bumped)
    /// and the other two children are appended, so facet slots never die.
    /// Returns the three child handles.
    pub fn split_facet(&mut self, f: FacetRef, p: PointId) -> Result<[FacetRef; 3], SplitError> {
        let data = self
            .facets
            .get(f.slot as usize)
            .ok_or(SplitError::StaleFacet { slot: f.slot, current: 0, requested: f.gen })?;
        if data.gen != f.gen {
            return Err(SplitError::StaleFacet {
                slot: f.slot,
                current: data.gen,
                requested: f.gen,
            });
        }
        if self.vertex_use[p] > 0 {
            return Err(SplitError::DuplicateVertex { point: p });
        }
        let [a, b, c] = data.verts;
        let pp = self.coords[p];
        for (u, v) in [(a, b), (b, c), (c, a)] {
            if Triangle::new(self.coords[u], self.coords[v], pp).is_err() {
                return Err(SplitError::DegenerateFacet { facet: [a, b, c], point: p });
            }
        }

        // Slot f keeps edge (a, b); hand (b, c) and (c, a) to the new slots.
        let s2 = self.facets.len() as u32;
        let s3 = s2 + 1;
        let gen = data.gen + 1;
        self.facets[f.slot as usize] = FacetData { verts: [a, b, p], gen };
        self.facets.push(FacetData { verts: [b, c, p], gen: 0 });
        self.facets.push(FacetData { verts: [c, a, p], gen: 0 });

        self.reassign_edge(b, c, f.slot, s2);
        self.reassign_edge(c, a, f.slot, s3);
        // Cone edges, each incident to two children with opposite traversal:
        // (b,p) on f and s2, (c,p) on s2 and s3, (a,p) on s3 and f.
        self.push_directed_edge(b, p, f.slot);
        self.push_directed_edge(p, b, s2);
        self.push_directed_edge(c, p, s2);
        self.push_directed_edge(p, c, s3);
        self.push_directed_edge(a, p, s3);
        self.push_directed_edge(p, a, f.slot);

        self.vertex_use[a] += 1;
        self.vertex_use[b] += 1;
        self.vertex_use[c] += 1;
        self.vertex_use[p] = 3;
        self.vertex_count += 1;

        Ok([
            FacetRef { slot: f.slot, gen },
            FacetRef { slot: s2, gen: 0 },
            FacetRef { slot: s3, gen: 0 },
        ])
    }

    fn reassign_edge(&mut self, a: PointId, b: PointId, from: u32, to: u32) {
        let key = (a.min(b), a.max(b));
        let entry = self.edges.get_mut(&key).expect("edge exists");
        for item in entry.iter_mut() {
            if item.0 == from {
                item.0 = to;
                return;
            }
        }
        panic!("facet {from} not incident to edge {key:?}");
    }

    fn push_directed_edge(&mut self, a: PointId, b: PointId, slot: u32) {
        let key = (a.min(b), a.max(b));
        self.edges.entry(key).or_default().push((slot, a < b));
    }

    /// Sum of signed tetrahedron volumes from the origin; the enclosed
    /// volume for a closed, consistently outward-oriented surface,
    /// independent of the reference point up to rounding.
    pub fn enclosed_volume(&self) -> f64 {
        let origin = Point3::new(0.0, 0.0, 0.0);
        self.facets
            .iter()
            .map(|f| {
                let [a, b, c] = f.verts;
                signed_tet_volume(origin, self.coords[a], self.coords[b], self.coords[c])
            })
            .sum()
    }

    /// Total facet area.
    pub fn surface_area(&self) -> f64 {
        self.facets
            .iter()
            .map(|f| {
                let [a, b, c] = f.verts;
                triangle_area(self.coords[a], self.coords[b], self.coords[c])
            })
            .sum()
    }
}

/// The declared contact between two vertex triples. `None` means they name
/// the same triangle (all three ids shared).
pub fn shared_ids(v1: [PointId; 3], v2: [PointId; 3]) -> Option<SharedTopology> {
    let mut pairs = [(0usize, 0usize); 3];
    let mut count = 0;
    for (i, a) in v1.iter().enumerate() {
        for (j, b) in v2.iter().enumerate() {
            if a == b {
                if count == 2 {
                    return None;
                }
                pairs[count] = (i, j);
                count += 1;
            }
        }
    }
    match count {
        0 => Some(SharedTopology::None),
        1 => Some(SharedTopology::Vertex { first: pairs[0].0, second: pairs[0].1 }),
        _ => Some(SharedTopology::Edge {
            first: [pairs[0].0, pairs[1].0],
            second: [pairs[0].1, pairs[1].1],
        }),
    }
}
