//! Axis-aligned bounding volumes over mesh facets.
//!
//! The contraction loop asks one spatial question over and over: which
//! retained facets could a given triangle or segment possibly touch?  A
//! static median-split tree answers it in logarithmic time, and a small
//! overflow list absorbs mutations between rebuilds so the index never
//! answers from stale geometry.
//!
//! Mutated slots are marked dirty.  Tree hits on dirty slots are discarded
//! (the tree's internal unions predate the mutation) and every dirty slot
//! is instead checked linearly against its current box.  Once the dirty
//! list grows past a fixed limit the tree is rebuilt and the list drains.

use crate::geom::Point3;
use crate::mesh::SurfaceMesh;

/// Items per leaf before a node splits.
const LEAF_CAPACITY: usize = 8;

/// Dirty slots tolerated before a full rebuild.
const REBUILD_DIRTY_LIMIT: usize = 256;

/// Axis-aligned box.  Overlap tests are inclusive: boxes that merely touch
/// count as overlapping, which errs on the safe side when pruning exact
/// geometry tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point3,
    pub max: Point3,
}

impl Aabb {
    /// Box containing nothing; any `include` or `merge` replaces it.
    pub fn empty() -> Self {
        Aabb {
            min: Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY),
            max: Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn of_triangle(a: Point3, b: Point3, c: Point3) -> Self {
        Aabb {
            min: a.min_components(b).min_components(c),
            max: a.max_components(b).max_components(c),
        }
    }

    pub fn of_points(points: impl IntoIterator<Item = Point3>) -> Self {
        let mut aabb = Aabb::empty();
        for p in points {
            aabb.include(p);
        }
        aabb
    }

    pub fn include(&mut self, p: Point3) {
        self.min = self.min.min_components(p);
        self.max = self.max.max_components(p);
    }

    pub fn merge(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: self.min.min_components(other.min),
            max: self.max.max_components(other.max),
        }
    }

    pub fn overlaps(&self, other: &Aabb) -> bool {
        (0..3).all(|axis| {
            self.min.coord(axis) <= other.max.coord(axis)
                && other.min.coord(axis) <= self.max.coord(axis)
        })
    }

    pub fn contains(&self, p: Point3) -> bool {
        (0..3).all(|axis| {
            self.min.coord(axis) <= p.coord(axis) && p.coord(axis) <= self.max.coord(axis)
        })
    }

    /// Slab test for the closed segment from `p` to `q`, inclusive at the
    /// box boundary.  Axes along which the segment has no extent reduce to
    /// a point-in-slab check, so axis-aligned segments need no special case.
    pub fn overlaps_segment(&self, p: Point3, q: Point3) -> bool {
        let mut t0 = 0.0_f64;
        let mut t1 = 1.0_f64;
        for axis in 0..3 {
            let s = p.coord(axis);
            let d = q.coord(axis) - s;
            let lo = self.min.coord(axis);
            let hi = self.max.coord(axis);
            if d == 0.0 {
                if s < lo || s > hi {
                    return false;
                }
            } else {
                let inv = 1.0 / d;
                let mut ta = (lo - s) * inv;
                let mut tb = (hi - s) * inv;
                if ta > tb {
                    std::mem::swap(&mut ta, &mut tb);
                }
                t0 = t0.max(ta);
                t1 = t1.min(tb);
                if t0 > t1 {
                    return false;
                }
            }
        }
        true
    }

    fn center(&self, axis: usize) -> f64 {
        0.5 * (self.min.coord(axis) + self.max.coord(axis))
    }

    fn longest_axis(&self) -> usize {
        let extent = |axis: usize| self.max.coord(axis) - self.min.coord(axis);
        let mut best = 0;
        for axis in 1..3 {
            if extent(axis) > extent(best) {
                best = axis;
            }
        }
        best
    }
}

/// Current bounding box of one mesh facet.
pub fn facet_bounds(mesh: &SurfaceMesh, slot: u32) -> Aabb {
    let [a, b, c] = mesh.facet_verts(slot);
    Aabb::of_triangle(mesh.point(a), mesh.point(b), mesh.point(c))
}

#[derive(Debug, Clone, Copy)]
enum NodeKind {
    Leaf { start: u32, len: u32 },
    Internal { left: u32, right: u32 },
}

#[derive(Debug, Clone, Copy)]
struct Node {
    aabb: Aabb,
    kind: NodeKind,
}

/// Bounding-volume index over facet slots.  Slots are dense and never
/// removed: a facet split rewrites one slot in place and appends two more,
/// which maps onto `update` plus two `insert` calls.
#[derive(Debug, Clone)]
pub struct FacetBvh {
    nodes: Vec<Node>,
    items: Vec<u32>,
    boxes: Vec<Aabb>,
    dirty: Vec<u32>,
    is_dirty: Vec<bool>,
}

impl FacetBvh {
    pub fn build(boxes: Vec<Aabb>) -> Self {
        let n = boxes.len();
        let mut items: Vec<u32> = (0..n as u32).collect();
        let mut nodes = Vec::new();
        if n > 0 {
            build_recursive(&boxes, &mut items, 0, &mut nodes);
        }
        FacetBvh { nodes, items, boxes, dirty: Vec::new(), is_dirty: vec![false; n] }
    }

    pub fn from_mesh(mesh: &SurfaceMesh) -> Self {
        Self::build(mesh.facet_slots().map(|s| facet_bounds(mesh, s)).collect())
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Replace the box of an existing slot after its facet was rewritten.
    pub fn update(&mut self, slot: u32, aabb: Aabb) {
        self.boxes[slot as usize] = aabb;
        self.mark_dirty(slot);
        self.maybe_rebuild();
    }

    /// Register a freshly appended slot.  Slots arrive in order.
    pub fn insert(&mut self, slot: u32, aabb: Aabb) {
        assert_eq!(slot as usize, self.boxes.len(), "facet slots are dense and ordered");
        self.boxes.push(aabb);
        self.is_dirty.push(false);
        self.mark_dirty(slot);
        self.maybe_rebuild();
    }

    /// All slots whose current box overlaps `probe`, ascending.
    pub fn query_box(&self, probe: &Aabb, out: &mut Vec<u32>) {
        self.query_with(|b| b.overlaps(probe), out);
    }

    /// All slots whose current box meets the closed segment, ascending.
    pub fn query_segment(&self, p: Point3, q: Point3, out: &mut Vec<u32>) {
        self.query_with(|b| b.overlaps_segment(p, q), out);
    }

    fn query_with(&self, hit: impl Fn(&Aabb) -> bool, out: &mut Vec<u32>) {
        out.clear();
        if !self.nodes.is_empty() {
            let mut stack = vec![0u32];
            while let Some(idx) = stack.pop() {
                let node = &self.nodes[idx as usize];
                if !hit(&node.aabb) {
                    continue;
                }
                match node.kind {
                    NodeKind::Leaf { start, len } => {
                        for &slot in &self.items[start as usize..(start + len) as usize] {
                            if !self.is_dirty[slot as usize] && hit(&self.boxes[slot as usize]) {
                                out.push(slot);
                            }
                        }
                    }
                    NodeKind::Internal { left, right } => {
                        stack.push(left);
                        stack.push(right);
                    }
                }
            }
        }
        for &slot in &self.dirty {
            if hit(&self.boxes[slot as usize]) {
                out.push(slot);
            }
        }
        out.sort_unstable();
    }

    fn mark_dirty(&mut self, slot: u32) {
        if !self.is_dirty[slot as usize] {
            self.is_dirty[slot as usize] = true;
            self.dirty.push(slot);
        }
    }

    fn maybe_rebuild(&mut self) {
        if self.dirty.len() > REBUILD_DIRTY_LIMIT {
            let boxes = std::mem::take(&mut self.boxes);
            *self = Self::build(boxes);
        }
    }
}

/// Builds the subtree over `items`, which occupies `items[base..]` of the
/// final item array, and returns its node index.
fn build_recursive(boxes: &[Aabb], items: &mut [u32], base: usize, nodes: &mut Vec<Node>) -> u32 {
    let mut bounds = Aabb::empty();
    for &slot in items.iter() {
        bounds = bounds.merge(&boxes[slot as usize]);
    }
    let idx = nodes.len() as u32;
    if items.len() <= LEAF_CAPACITY {
        nodes.push(Node {
            aabb: bounds,
            kind: NodeKind::Leaf { start: base as u32, len: items.len() as u32 },
        });
        return idx;
    }
    let axis = bounds.longest_axis();
    // Ties broken by slot so the tree layout is a pure function of the input.
    items.sort_unstable_by(|&a, &b| {
        boxes[a as usize]
            .center(axis)
            .partial_cmp(&boxes[b as usize].center(axis))
            .expect("finite coordinates")
            .then(a.cmp(&b))
    });
    let mid = items.len() / 2;
    nodes.push(Node { aabb: bounds, kind: NodeKind::Internal { left: 0, right: 0 } });
    let (l, r) = items.split_at_mut(mid);
    let left = build_recursive(boxes, l, base, nodes);
    let right = build_recursive(boxes, r, base + mid, nodes);
    nodes[idx as usize].kind = NodeKind::Internal { left, right };
    idx
}
