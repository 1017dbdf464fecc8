//! From a user outerplanar graph to plane coordinates.
//!
//! The input names its vertices, fixes their cyclic order on the outer
//! face, and lists edges; chords must be pairwise non-crossing with respect
//! to that order. The pipeline completes the graph to a maximal outerplanar
//! one (outer cycle plus fan triangulations), walks the dual tree of
//! triangles to name every vertex inside the triangle tree, samples a point
//! of the unit torus, and evaluates the vertex polynomials. A drawing is
//! accepted only after the validator's separation and length-class checks
//! pass; failed samples are retried with an evolved seed.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::encoding::{edge_class, is_tstar_edge, EdgeClass, SConvention, VertexLabel};
use crate::symbolic::psi_of_vertex;
use crate::torus::{sample_torus, TorusPoint};
use crate::truncation::truncate_tstar;
use crate::validator::{validate_drawing, Tolerances, ValidationReport};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GraphError {
    BadOrder(String),
    EdgeOutOfRange(usize, usize),
    LoopEdge(usize),
    DuplicateEdge(usize, usize),
    CrossingChords((usize, usize), (usize, usize)),
    TooSmall(usize),
    BaseEdgeNotOnOuterFace(usize, usize),
    /// A mapped edge failed the triangle-tree adjacency check; indicates a
    /// bug in the traversal, never a property of valid input.
    MappingInvariant(String),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::BadOrder(why) => write!(f, "bad outer order: {why}"),
            GraphError::EdgeOutOfRange(a, b) => write!(f, "edge ({a}, {b}) out of range"),
            GraphError::LoopEdge(a) => write!(f, "loop edge at {a}"),
            GraphError::DuplicateEdge(a, b) => write!(f, "duplicate edge ({a}, {b})"),
            GraphError::CrossingChords(e, g) => write!(
                f,
                "chords ({}, {}) and ({}, {}) cross",
                e.0, e.1, g.0, g.1
            ),
            GraphError::TooSmall(n) => write!(f, "triangulation needs n >= 3, got {n}"),
            GraphError::BaseEdgeNotOnOuterFace(a, b) => {
                write!(f, "base edge ({a}, {b}) is not on the outer face")
            }
            GraphError::MappingInvariant(why) => write!(f, "mapping invariant violated: {why}"),
        }
    }
}

impl core::error::Error for GraphError {}

/// An outerplanar graph given by its outer-face order and edge set.
/// Construction validates; the edge set is stored normalized.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlaneGraphInput {
    n: usize,
    outer_order: Vec<usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl PlaneGraphInput {
    pub fn new(
        n: usize,
        outer_order: Vec<usize>,
        edge_list: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        if outer_order.len() != n {
            return Err(GraphError::BadOrder(format!(
                "outer order lists {} vertices, expected {n}",
                outer_order.len()
            )));
        }
        let mut seen = alloc::vec![false; n];
        for &v in &outer_order {
            if v >= n {
                return Err(GraphError::BadOrder(format!("vertex {v} out of range")));
            }
            if seen[v] {
                return Err(GraphError::BadOrder(format!("vertex {v} repeated")));
            }
            seen[v] = true;
        }
        let mut edges = BTreeSet::new();
        for &(a, b) in edge_list {
            if a >= n || b >= n {
                return Err(GraphError::EdgeOutOfRange(a, b));
            }
            if a == b {
                return Err(GraphError::LoopEdge(a));
            }
            let e = (a.min(b), a.max(b));
            if !edges.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        let g = PlaneGraphInput {
            n,
            outer_order,
            edges,
        };
        g.check_chords()?;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn outer_order(&self) -> &[usize] {
        &self.outer_order
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    fn position_of(&self) -> Vec<usize> {
        let mut pos = alloc::vec![0usize; self.n];
        for (i, &v) in self.outer_order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// Edge as a position pair `(i, j)` with `i < j`, or `None` for an
    /// outer-cycle pair.
    fn chord_positions(&self, pos: &[usize], e: (usize, usize)) -> Option<(usize, usize)> {
        let (mut i, mut j) = (pos[e.0], pos[e.1]);
        if i > j {
            core::mem::swap(&mut i, &mut j);
        }
        let adjacent = j - i == 1 || (i == 0 && j == self.n - 1);
        (!adjacent).then_some((i, j))
    }

    /// Two chords cross exactly when one separates the other's endpoints in
    /// the cyclic order.
    fn check_chords(&self) -> Result<(), GraphError> {
        let pos = self.position_of();
        let chords: Vec<((usize, usize), (usize, usize))> = self
            .edges
            .iter()
            .filter_map(|&e| self.chord_positions(&pos, e).map(|p| (p, e)))
            .collect();
        for (i, &((i1, j1), e1)) in chords.iter().enumerate() {
            for &((i2, j2), e2) in &chords[i + 1..] {
                let crossing = (i1 < i2 && i2 < j1 && j1 < j2) || (i2 < i1 && i1 < j2 && j2 < j1);
                if crossing {
                    return Err(GraphError::CrossingChords(e1, e2));
                }
            }
        }
        Ok(())
    }
}

/// A maximal outerplanar completion: the input's edges plus the outer cycle
/// and fan chords, with the triangle list of the bounded faces.
#[derive(Clone, Debug)]
pub struct Triangulated {
    pub n: usize,
    pub outer_order: Vec<usize>,
    pub edges: BTreeSet<(usize, usize)>,
    pub triangles: Vec<[usize; 3]>,
}

/// Completes the graph so that every bounded face is a triangle.
///
/// Each chord-bounded sub-polygon is fanned from its lowest-numbered
/// vertex, which keeps the output deterministic. The result has `2n - 3`
/// edges.
pub fn triangulate(g: &PlaneGraphInput) -> Result<Triangulated, GraphError> {
    let n = g.n;
    if n < 3 {
        return Err(GraphError::TooSmall(n));
    }
    let pos = g.position_of();
    // chords in position space, sorted lists of far endpoints per start
    let mut chords_from: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for &e in &g.edges {
        if let Some((i, j)) = g.chord_positions(&pos, e) {
            chords_from[i].push(j);
        }
    }
    for list in chords_from.iter_mut() {
        list.sort_unstable_by(|a, b| b.cmp(a));
    }

    let mut edges: BTreeSet<(usize, usize)> = g.edges.clone();
    for i in 0..n {
        let a = g.outer_order[i];
        let b = g.outer_order[(i + 1) % n];
        edges.insert((a.min(b), a.max(b)));
    }

    let mut triangles = Vec::with_capacity(n.saturating_sub(2));
    // regions to fan, each bounded by the closure (lo, hi) and the walk
    // between them through chords and outer arcs
    let mut stack = alloc::vec![(0usize, n - 1)];
    while let Some((lo, hi)) = stack.pop() {
        let mut face = alloc::vec![lo];
        let mut t = lo;
        while t < hi {
            let next = chords_from[t]
                .iter()
                .copied()
                .find(|&b| b <= hi && (t, b) != (lo, hi));
            match next {
                Some(b) => {
                    stack.push((t, b));
                    face.push(b);
                    t = b;
                }
                None => {
                    face.push(t + 1);
                    t += 1;
                }
            }
        }
        if face.len() < 3 {
            continue;
        }
        // fan from the lowest-numbered vertex of the face
        let ids: Vec<usize> = face.iter().map(|&p| g.outer_order[p]).collect();
        let apex_at = ids
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(i, _)| i)
            .unwrap();
        let k = ids.len();
        let apex = ids[apex_at];
        for off in 1..k - 1 {
            let i = (apex_at + off) % k;
            let j = (apex_at + off + 1) % k;
            triangles.push([apex, ids[i], ids[j]]);
        }
        for off in 2..k - 1 {
            let v = ids[(apex_at + off) % k];
            edges.insert((apex.min(v), apex.max(v)));
        }
    }
    debug_assert_eq!(edges.len(), 2 * n - 3);
    debug_assert_eq!(triangles.len(), n - 2);
    Ok(Triangulated {
        n,
        outer_order: g.outer_order.clone(),
        edges,
        triangles,
    })
}

/// Names every vertex inside the triangle tree.
///
/// The base edge becomes the root edge, its triangle's apex the root
/// apex, and each further triangle's apex extends the apex label of the
/// triangle it glues to by `0` (left side) or `1` (right side).
pub fn map_to_tstar(
    t: &Triangulated,
    base_edge: (usize, usize),
) -> Result<BTreeMap<usize, VertexLabel>, GraphError> {
    let n = t.n;
    let outer_adjacent = t
        .outer_order
        .iter()
        .enumerate()
        .any(|(i, &v)| {
            let w = t.outer_order[(i + 1) % n];
            (v, w) == base_edge || (w, v) == base_edge
        });
    if !outer_adjacent || base_edge.0 == base_edge.1 {
        return Err(GraphError::BaseEdgeNotOnOuterFace(base_edge.0, base_edge.1));
    }

    let mut tri_of_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (idx, tri) in t.triangles.iter().enumerate() {
        for (a, b) in [(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])] {
            tri_of_edge
                .entry((a.min(b), a.max(b)))
                .or_default()
                .push(idx);
        }
    }

    let base_key = (base_edge.0.min(base_edge.1), base_edge.0.max(base_edge.1));
    let hosts = tri_of_edge
        .get(&base_key)
        .ok_or(GraphError::BaseEdgeNotOnOuterFace(base_edge.0, base_edge.1))?;
    debug_assert_eq!(hosts.len(), 1, "outer edges border one triangle");
    let root_tri = hosts[0];

    let mut labels: BTreeMap<usize, VertexLabel> = BTreeMap::new();
    labels.insert(base_edge.0, VertexLabel::root());
    labels.insert(base_edge.1, VertexLabel::root_mate());

    let third = |idx: usize, a: usize, b: usize| {
        t.triangles[idx]
            .iter()
            .copied()
            .find(|&v| v != a && v != b)
            .expect("triangle has a third vertex")
    };

    let root_apex = third(root_tri, base_edge.0, base_edge.1);
    let root_apex_label = VertexLabel::parse("010").expect("root apex label");
    labels.insert(root_apex, root_apex_label.clone());

    // (triangle, left base endpoint, right base endpoint, apex, apex label)
    let mut stack = alloc::vec![(root_tri, base_edge.0, base_edge.1, root_apex, root_apex_label)];
    let mut visited = alloc::vec![false; t.triangles.len()];
    visited[root_tri] = true;
    while let Some((tri, p, q, apex, apex_label)) = stack.pop() {
        // left side (p, apex) and right side (q, apex)
        for (x, y, bit) in [(p, apex, 0u8), (q, apex, 1u8)] {
            let key = (x.min(y), x.max(y));
            for &next in tri_of_edge.get(&key).into_iter().flatten() {
                if visited[next] || next == tri {
                    continue;
                }
                visited[next] = true;
                let nv = third(next, x, y);
                let label = apex_label.child(bit);
                labels.insert(nv, label.clone());
                // a left glue keeps the left base endpoint; a right glue
                // keeps the right one
                let state = if bit == 0 {
                    (next, x, apex, nv, label)
                } else {
                    (next, apex, x, nv, label)
                };
                stack.push(state);
            }
        }
    }

    if labels.len() != n || !visited.iter().all(|&v| v) {
        return Err(GraphError::MappingInvariant(format!(
            "reached {} of {} vertices",
            labels.len(),
            n
        )));
    }
    for &(a, b) in &t.edges {
        if !is_tstar_edge(&labels[&a], &labels[&b]) {
            return Err(GraphError::MappingInvariant(format!(
                "edge ({a}, {b}) maps to non-adjacent labels {} and {}",
                labels[&a], labels[&b]
            )));
        }
    }
    Ok(labels)
}

/// Knobs for producing a drawing.
#[derive(Clone, Debug)]
pub struct DrawOptions {
    pub seed: u64,
    /// Scale factor in `(0, 1]`; edge lengths become `a` and `a |x_i - 1|`.
    pub scale: f64,
    pub convention: SConvention,
    /// Root edge override; defaults to the first two outer-order vertices.
    pub base_edge: Option<(usize, usize)>,
    /// Keep the triangulation's fill edges in the output.
    pub keep_augmented: bool,
    pub retry_budget: u32,
    pub tolerances: Tolerances,
}

impl Default for DrawOptions {
    fn default() -> Self {
        DrawOptions {
            seed: 1,
            scale: 0.5,
            convention: SConvention::Figure,
            base_edge: None,
            keep_augmented: false,
            retry_budget: 5,
            tolerances: Tolerances::default(),
        }
    }
}

/// One drawn edge, pointing into the drawing's class table.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DrawnEdge {
    pub u: usize,
    pub v: usize,
    pub class: usize,
}

/// A length class: all edges of one kind share one numeric length.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct LengthClass {
    pub kind: EdgeClass,
    pub length: f64,
}

/// A validated straight-line drawing with its provenance.
#[derive(Clone, Debug)]
pub struct Drawing {
    pub scale: f64,
    pub convention: SConvention,
    pub torus: TorusPoint,
    pub labels: BTreeMap<usize, VertexLabel>,
    pub coords: BTreeMap<usize, Complex64>,
    pub edges: Vec<DrawnEdge>,
    pub classes: Vec<LengthClass>,
    /// Torus samples consumed, counting the accepted one.
    pub attempts: u32,
}

#[derive(Clone, Debug)]
pub enum DrawError {
    Graph(GraphError),
    BadScale(f64),
    /// No sampled torus point passed validation within the retry budget.
    RetryBudgetExhausted {
        attempts: u32,
        last_report: ValidationReport,
    },
}

impl fmt::Display for DrawError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DrawError::Graph(e) => e.fmt(f),
            DrawError::BadScale(a) => write!(f, "scale must lie in (0, 1], got {a}"),
            DrawError::RetryBudgetExhausted {
                attempts,
                last_report,
            } => write!(
                f,
                "no valid drawing in {attempts} attempts; last failure: {}; min vertex gap {:.3e}, min vertex-edge gap {:.3e}",
                last_report
                    .failures
                    .first()
                    .map(|fl| format!("{fl}"))
                    .unwrap_or_else(|| String::from("none")),
                last_report.min_vertex_gap,
                last_report.min_vertex_edge_gap,
            ),
        }
    }
}

impl core::error::Error for DrawError {}

impl From<GraphError> for DrawError {
    fn from(e: GraphError) -> Self {
        DrawError::Graph(e)
    }
}

/// Deterministic seed evolution between retry attempts.
pub fn evolve_seed(seed: u64) -> u64 {
    seed.wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407)
}

/// Draws a labeled vertex set: evaluates the vertex polynomials at sampled
/// torus points until the validator accepts, then records classes.
fn draw_labeled(
    labels: BTreeMap<usize, VertexLabel>,
    out_edges: &[(usize, usize)],
    opts: &DrawOptions,
) -> Result<Drawing, DrawError> {
    if !(opts.scale > 0.0 && opts.scale <= 1.0) {
        return Err(DrawError::BadScale(opts.scale));
    }
    let polys: BTreeMap<usize, _> = labels
        .iter()
        .map(|(&v, l)| (v, psi_of_vertex(l, opts.convention)))
        .collect();

    // symbolic length class of each edge, independent of the sample
    let mut kinds = Vec::with_capacity(out_edges.len());
    let mut kind_set = BTreeSet::new();
    for &(a, b) in out_edges {
        let k = edge_class(&labels[&a], &labels[&b], opts.convention)
            .map_err(|e| GraphError::MappingInvariant(format!("edge ({a}, {b}): {e}")))?;
        kinds.push(k);
        kind_set.insert(k);
    }
    let kind_table: Vec<EdgeClass> = kind_set.into_iter().collect();
    let class_of = |k: EdgeClass| kind_table.iter().position(|&t| t == k).unwrap();

    let mut seed = opts.seed;
    let mut last_report = None;
    let budget = opts.retry_budget.max(1);
    for attempt in 1..=budget {
        let torus = sample_torus(seed);
        let coords: BTreeMap<usize, Complex64> = polys
            .iter()
            .map(|(&v, p)| (v, p.eval(&torus) * opts.scale))
            .collect();
        let classes: Vec<LengthClass> = kind_table
            .iter()
            .map(|&kind| LengthClass {
                kind,
                length: match kind {
                    EdgeClass::Unit => opts.scale,
                    EdgeClass::Diagonal(t) => {
                        (torus.value(t) - Complex64::new(1.0, 0.0)).norm() * opts.scale
                    }
                },
            })
            .collect();
        let drawing = Drawing {
            scale: opts.scale,
            convention: opts.convention,
            torus,
            labels: labels.clone(),
            coords,
            edges: out_edges
                .iter()
                .zip(&kinds)
                .map(|(&(u, v), &k)| DrawnEdge {
                    u,
                    v,
                    class: class_of(k),
                })
                .collect(),
            classes,
            attempts: attempt,
        };
        let report = validate_drawing(&drawing, &opts.tolerances);
        if report.failures.is_empty() {
            return Ok(drawing);
        }
        last_report = Some(report);
        seed = evolve_seed(seed);
    }
    Err(DrawError::RetryBudgetExhausted {
        attempts: budget,
        last_report: last_report.expect("at least one attempt ran"),
    })
}

/// Draws a user graph. Inputs with fewer than three vertices become the
/// trivial point or segment drawings.
pub fn draw(g: &PlaneGraphInput, opts: &DrawOptions) -> Result<Drawing, DrawError> {
    if g.n < 3 {
        let mut labels = BTreeMap::new();
        let mut edges = Vec::new();
        if g.n >= 1 {
            labels.insert(g.outer_order[0], VertexLabel::root());
        }
        if g.n == 2 {
            labels.insert(g.outer_order[1], VertexLabel::root_mate());
            if opts.keep_augmented || g.num_edges() == 1 {
                edges.push((g.outer_order[0].min(g.outer_order[1]), g.outer_order[0].max(g.outer_order[1])));
            }
        }
        return draw_labeled(labels, &edges, opts);
    }
    let t = triangulate(g)?;
    let base = opts
        .base_edge
        .unwrap_or((g.outer_order[0], g.outer_order[1]));
    let labels = map_to_tstar(&t, base)?;
    let out_edges: Vec<(usize, usize)> = if opts.keep_augmented {
        t.edges.iter().copied().collect()
    } else {
        g.edges.iter().copied().collect()
    };
    draw_labeled(labels, &out_edges, opts)
}

/// Draws the triangle tree itself, truncated at a rhombus-tree depth.
/// Vertices are numbered in label order.
pub fn draw_truncation(depth: usize, opts: &DrawOptions) -> Result<Drawing, DrawError> {
    let t = truncate_tstar(depth);
    let index: BTreeMap<&VertexLabel, usize> =
        t.labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let edges: Vec<(usize, usize)> = t
        .edges
        .iter()
        .map(|(a, b)| {
            let (i, j) = (index[a], index[b]);
            (i.min(j), i.max(j))
        })
        .collect();
    let labels: BTreeMap<usize, VertexLabel> = t
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| (i, l.clone()))
        .collect();
    draw_labeled(labels, &edges, opts)
}
