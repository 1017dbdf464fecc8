//! Certification of drawings, numeric and symbolic.
//!
//! The numeric side checks a concrete drawing: vertices pairwise separated,
//! vertices clear of non-incident open segments, and edge lengths falling
//! into at most thirteen classes that match the predicted values. The
//! symbolic side is independent of any sample: a geometric oracle rebuilds
//! coordinates by gluing rhombi one at a time (no vertex formula involved),
//! and the incidence certificate classifies every vertex/edge pair of a
//! truncation exactly.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::embedder::Drawing;
use crate::encoding::{
    covering_label, type_of, Corner, NodePath, SConvention, TypeIndex, VertexLabel,
};
use crate::symbolic::{IncidenceContext, IncidenceError, IncidenceVerdict, Monomial, Polynomial};
use crate::torus::TorusPoint;
use crate::truncation::truncate_tstar;

/// Thresholds for accepting a drawing.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Minimum distance between distinct vertex images.
    pub vertex_gap: f64,
    /// Minimum distance from a vertex to a non-incident open segment.
    pub vertex_edge_gap: f64,
    /// Clustering radius for edge lengths, and the slack allowed between a
    /// class and its predicted value.
    pub class_radius: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            vertex_gap: 1e-6,
            vertex_edge_gap: 1e-6,
            class_radius: 1e-9,
        }
    }
}

/// A named violation; a clean report has none.
#[derive(Clone, PartialEq, Debug)]
pub enum CheckFailure {
    VertexGap { a: usize, b: usize, gap: f64 },
    VertexEdge { v: usize, u: usize, w: usize, dist: f64 },
    TooManyClasses { count: usize },
    UnexpectedLength { length: f64 },
    CoordMismatch { v: usize, delta: f64 },
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckFailure::VertexGap { a, b, gap } => {
                write!(f, "vertices {a} and {b} are {gap:.3e} apart")
            }
            CheckFailure::VertexEdge { v, u, w, dist } => {
                write!(f, "vertex {v} is {dist:.3e} from edge ({u}, {w})")
            }
            CheckFailure::TooManyClasses { count } => {
                write!(f, "{count} length classes exceed the bound of 13")
            }
            CheckFailure::UnexpectedLength { length } => {
                write!(f, "length class {length:.12} matches no predicted value")
            }
            CheckFailure::CoordMismatch { v, delta } => {
                write!(f, "vertex {v} deviates {delta:.3e} from its polynomial")
            }
        }
    }
}

/// Outcome of the numeric checks on one drawing.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub min_vertex_gap: f64,
    pub min_vertex_edge_gap: f64,
    pub n_length_classes: usize,
    pub class_values: Vec<f64>,
    pub failures: Vec<CheckFailure>,
}

/// Minimum pairwise distance of vertex images; failures list pairs at or
/// under the tolerance.
pub fn check_distinct_vertices(d: &Drawing, tol: f64) -> (f64, Vec<CheckFailure>) {
    let pts: Vec<(usize, Complex64)> = d.coords.iter().map(|(&v, &z)| (v, z)).collect();
    let mut min_gap = f64::INFINITY;
    let mut failures = Vec::new();
    for (i, &(a, za)) in pts.iter().enumerate() {
        for &(b, zb) in &pts[i + 1..] {
            let gap = (za - zb).norm();
            if gap < min_gap {
                min_gap = gap;
            }
            if gap <= tol {
                failures.push(CheckFailure::VertexGap { a, b, gap });
            }
        }
    }
    (min_gap, failures)
}

/// Distance from every vertex to every non-incident open segment.
///
/// Only projections falling strictly inside the segment count: a vertex
/// beyond an endpoint cannot meet the open segment, however close it comes
/// to the supporting line. Lattice-offset vertices are exactly that case.
pub fn check_vertex_edge_separation(d: &Drawing, tol: f64) -> (f64, Vec<CheckFailure>) {
    let mut min_dist = f64::INFINITY;
    let mut failures = Vec::new();
    let pts: Vec<(usize, Complex64)> = d.coords.iter().map(|(&v, &z)| (v, z)).collect();
    for e in &d.edges {
        let zu = d.coords[&e.u];
        let zw = d.coords[&e.v];
        let dir = zw - zu;
        let len2 = dir.norm_sqr();
        if len2 == 0.0 {
            continue; // degenerate edge is reported by the vertex-gap check
        }
        for &(v, zv) in &pts {
            if v == e.u || v == e.v {
                continue;
            }
            let rel = zv - zu;
            let t = (rel.re * dir.re + rel.im * dir.im) / len2;
            if t <= 0.0 || t >= 1.0 {
                continue;
            }
            let dist = (rel - dir * t).norm();
            if dist < min_dist {
                min_dist = dist;
            }
            if dist <= tol {
                failures.push(CheckFailure::VertexEdge {
                    v,
                    u: e.u,
                    w: e.v,
                    dist,
                });
            }
        }
    }
    (min_dist, failures)
}

/// The lengths a drawing is allowed to use: the scale itself and the scaled
/// diagonal of each of the twelve rhombus types.
pub fn predicted_lengths(d: &Drawing) -> Vec<f64> {
    let mut out = Vec::with_capacity(13);
    out.push(d.scale);
    for i in TypeIndex::all() {
        out.push((d.torus.value(i) - Complex64::new(1.0, 0.0)).norm() * d.scale);
    }
    out
}

/// Single-linkage clustering of the edge lengths at radius `tol`; every
/// class must match a predicted value and there may be at most thirteen.
pub fn count_length_classes(d: &Drawing, tol: f64) -> (usize, Vec<f64>, Vec<CheckFailure>) {
    let mut lengths: Vec<f64> = d
        .edges
        .iter()
        .map(|e| (d.coords[&e.u] - d.coords[&e.v]).norm())
        .collect();
    lengths.sort_by(f64::total_cmp);
    let mut classes: Vec<f64> = Vec::new();
    let mut failures = Vec::new();
    let predicted = predicted_lengths(d);
    let mut i = 0;
    while i < lengths.len() {
        let mut j = i + 1;
        while j < lengths.len() && lengths[j] - lengths[j - 1] <= tol {
            j += 1;
        }
        let value = lengths[i + (j - i) / 2];
        if !predicted.iter().any(|p| (p - value).abs() <= tol) {
            failures.push(CheckFailure::UnexpectedLength { length: value });
        }
        classes.push(value);
        i = j;
    }
    if classes.len() > 13 {
        failures.push(CheckFailure::TooManyClasses {
            count: classes.len(),
        });
    }
    (classes.len(), classes, failures)
}

/// Runs the three numeric checks and aggregates every violation.
pub fn validate_drawing(d: &Drawing, tols: &Tolerances) -> ValidationReport {
    let (min_vertex_gap, mut failures) = check_distinct_vertices(d, tols.vertex_gap);
    let (min_vertex_edge_gap, f2) = check_vertex_edge_separation(d, tols.vertex_edge_gap);
    let (n_length_classes, class_values, f3) = count_length_classes(d, tols.class_radius);
    failures.extend(f2);
    failures.extend(f3);
    ValidationReport {
        min_vertex_gap,
        min_vertex_edge_gap,
        n_length_classes,
        class_values,
        failures,
    }
}

/// Coordinate oracle that never touches the vertex formula: it places the
/// root rhombus and glues one rotated copy per arc, reading off corner
/// positions.
pub struct GeometricOracle {
    depth: usize,
    conv: SConvention,
}

impl GeometricOracle {
    pub fn new(depth: usize, conv: SConvention) -> Self {
        GeometricOracle { depth, conv }
    }

    /// Coordinates of every vertex covered by nodes within the depth.
    pub fn coordinates(&self, x: &TorusPoint) -> BTreeMap<VertexLabel, Complex64> {
        let mut out = BTreeMap::new();
        if self.depth == 0 {
            return out;
        }
        let root = NodePath::root();
        let root_labels = Corner::ALL.map(|c| covering_label(&root, c));
        let z2 = x.value(type_of(&root, self.conv));
        let root_coords = [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            z2,
            z2 + Complex64::new(1.0, 0.0),
        ];
        for (l, z) in root_labels.iter().zip(root_coords) {
            out.insert(l.clone(), z);
        }
        let mut stack = alloc::vec![(root, root_labels, root_coords)];
        while let Some((node, labels, coords)) = stack.pop() {
            if node.depth() >= self.depth {
                continue;
            }
            for arc in 0..3u8 {
                let child = node.child(arc);
                // base corners come from the glued side of the parent
                let (b0, b1) = match arc {
                    0 => (Corner::V0, Corner::V2),
                    1 => (Corner::V2, Corner::V3),
                    _ => (Corner::V1, Corner::V3),
                };
                let l0 = labels[b0 as usize].clone();
                let l1 = labels[b1 as usize].clone();
                let l2 = covering_label(&child, Corner::V2);
                let l3 = covering_label(&child, Corner::V3);
                let z0 = coords[b0 as usize];
                let z1 = coords[b1 as usize];
                let rot = x.value(type_of(&child, self.conv));
                let z2 = z0 + rot * (z1 - z0);
                let z3 = z2 + (z1 - z0);
                out.entry(l2.clone()).or_insert(z2);
                out.entry(l3.clone()).or_insert(z3);
                stack.push((child, [l0, l1, l2, l3], [z0, z1, z2, z3]));
            }
        }
        out
    }
}

/// One lattice-offset incidence found by the certificate.
#[derive(Clone, Debug)]
pub struct OffsetCase {
    pub v: VertexLabel,
    pub u: VertexLabel,
    pub w: VertexLabel,
    pub verdict: IncidenceVerdict,
}

/// Tally of the exact classification of every vertex/edge pair.
#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub depth: usize,
    pub pairs: usize,
    pub non_real: usize,
    pub integer_offsets: usize,
    pub diagonal_offsets: usize,
    pub offset_cases: Vec<OffsetCase>,
}

/// Classifies every (vertex, edge) pair of the depth-truncated triangle
/// tree. Any contradiction (a real ratio that is not an exact lattice
/// offset) aborts the certificate; offsets are collected for numeric
/// cross-checks.
pub fn symbolic_certificate(
    depth: usize,
    conv: SConvention,
) -> Result<CertificateReport, IncidenceError> {
    let t = truncate_tstar(depth);
    let mut ctx = IncidenceContext::new(conv);
    let mut report = CertificateReport {
        depth,
        pairs: 0,
        non_real: 0,
        integer_offsets: 0,
        diagonal_offsets: 0,
        offset_cases: Vec::new(),
    };
    for (u, w) in &t.edges {
        for v in &t.labels {
            report.pairs += 1;
            match ctx.classify(v, u, w)? {
                IncidenceVerdict::NonRealRatio => report.non_real += 1,
                verdict @ IncidenceVerdict::IntegerOffset(_) => {
                    report.integer_offsets += 1;
                    report.offset_cases.push(OffsetCase {
                        v: v.clone(),
                        u: u.clone(),
                        w: w.clone(),
                        verdict,
                    });
                }
                verdict @ IncidenceVerdict::DiagonalOffset(_) => {
                    report.diagonal_offsets += 1;
                    report.offset_cases.push(OffsetCase {
                        v: v.clone(),
                        u: u.clone(),
                        w: w.clone(),
                        verdict,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// The worked vertex polynomials pinned as golden fixtures: the labeled
/// corners of the first few rhombi along the left spine.
pub fn golden_vertex_fixtures() -> Vec<(VertexLabel, Polynomial)> {
    let x000 = Monomial::var(TypeIndex::new(0, 0, 0).unwrap());
    let x101 = Monomial::var(TypeIndex::new(1, 0, 1).unwrap());
    let x102 = Monomial::var(TypeIndex::new(1, 0, 2).unwrap());
    let one = Monomial::one();
    let from_terms = |terms: &[(i64, Monomial)]| {
        let mut p = Polynomial::zero();
        for &(c, m) in terms {
            p.add_term(c, m);
        }
        p
    };
    alloc::vec![
        ("0", from_terms(&[])),
        ("01", from_terms(&[(1, one)])),
        ("010", from_terms(&[(1, x000)])),
        ("0101", from_terms(&[(1, one), (1, x000)])),
        ("01010", from_terms(&[(2, x000)])),
        ("010101", from_terms(&[(1, one), (2, x000)])),
        ("010100", from_terms(&[(1, x000), (1, x000.mul(&x101))])),
        ("0101001", from_terms(&[(2, x000), (1, x000.mul(&x101))])),
        ("010100101", from_terms(&[(2, x000), (2, x000.mul(&x101))])),
        (
            "010100100",
            from_terms(&[
                (1, x000),
                (1, x000.mul(&x101)),
                (1, x000.mul(&x101).mul(&x102)),
            ]),
        ),
        (
            "0101001001",
            from_terms(&[
                (1, x000),
                (2, x000.mul(&x101)),
                (1, x000.mul(&x101).mul(&x102)),
            ]),
        ),
    ]
    .into_iter()
    .map(|(l, p)| (VertexLabel::parse(l).unwrap(), p))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedder::{draw, draw_truncation, DrawOptions, PlaneGraphInput};
    use crate::symbolic::psi_of_vertex;
    use crate::torus::sample_torus;
    use alloc::string::ToString;
    use alloc::vec;

    const FIG: SConvention = SConvention::Figure;

    #[test]
    fn oracle_root_values() {
        let x = sample_torus(5);
        let coords = GeometricOracle::new(1, FIG).coordinates(&x);
        let x000 = x.value(TypeIndex::new(0, 0, 0).unwrap());
        assert_eq!(coords.len(), 4);
        assert!((coords[&VertexLabel::parse("0").unwrap()]).norm() < 1e-15);
        assert!((coords[&VertexLabel::parse("01").unwrap()] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((coords[&VertexLabel::parse("010").unwrap()] - x000).norm() < 1e-15);
        assert!(
            (coords[&VertexLabel::parse("0101").unwrap()] - (x000 + Complex64::new(1.0, 0.0)))
                .norm()
                < 1e-15
        );
    }

    #[test]
    fn oracle_matches_vertex_formula() {
        for seed in [2u64, 77, 4099] {
            let x = sample_torus(seed);
            let coords = GeometricOracle::new(5, FIG).coordinates(&x);
            for (label, z) in &coords {
                let by_formula = psi_of_vertex(label, FIG).eval(&x);
                assert!(
                    (z - by_formula).norm() <= 1e-9,
                    "label {label}: oracle {z}, formula {by_formula}"
                );
            }
        }
    }

    #[test]
    fn truncation_drawing_validates() {
        let d = draw_truncation(4, &DrawOptions::default()).unwrap();
        let report = validate_drawing(&d, &Tolerances::default());
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        assert!(report.n_length_classes <= 13);
        assert!(report.min_vertex_gap > 1e-6);
    }

    #[test]
    fn single_rhombus_has_two_classes() {
        let d = draw_truncation(1, &DrawOptions::default()).unwrap();
        assert_eq!(d.coords.len(), 4);
        assert_eq!(d.edges.len(), 5);
        let (n, _, failures) = count_length_classes(&d, 1e-9);
        assert_eq!(n, 2);
        assert!(failures.is_empty());
    }

    #[test]
    fn duplicate_vertices_are_reported() {
        let mut d = draw_truncation(2, &DrawOptions::default()).unwrap();
        let clone_target = *d.coords.iter().next().unwrap().1;
        let last = *d.coords.keys().last().unwrap();
        d.coords.insert(last, clone_target);
        let (_, failures) = check_distinct_vertices(&d, 1e-6);
        assert!(!failures.is_empty());
    }

    #[test]
    fn midpoint_vertex_is_reported() {
        let g = PlaneGraphInput::new(3, vec![0, 1, 2], &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let mut d = draw(&g, &DrawOptions::default()).unwrap();
        let mid = (d.coords[&0] + d.coords[&1]) * 0.5;
        d.coords.insert(2, mid);
        let (_, failures) = check_vertex_edge_separation(&d, 1e-6);
        assert!(failures
            .iter()
            .any(|f| matches!(f, CheckFailure::VertexEdge { v: 2, .. })));
    }

    #[test]
    fn collinear_beyond_segment_passes() {
        // vertex 01010 sits at twice the left-side vector of the root: on
        // the line through (0, 010) but outside the open segment
        let d = draw_truncation(3, &DrawOptions::default()).unwrap();
        let report = validate_drawing(&d, &Tolerances::default());
        assert!(report.failures.is_empty());
        let idx_of = |s: &str| {
            *d.labels
                .iter()
                .find(|(_, l)| l.to_string() == s)
                .map(|(v, _)| v)
                .unwrap()
        };
        let (p, u, w) = (idx_of("01010"), idx_of("0"), idx_of("010"));
        let (zu, zw, zp) = (d.coords[&u], d.coords[&w], d.coords[&p]);
        let t = ((zp - zu).re * (zw - zu).re + (zp - zu).im * (zw - zu).im) / (zw - zu).norm_sqr();
        assert!((t - 2.0).abs() < 1e-9);
        let line_dist = (zp - zu - (zw - zu) * t).norm();
        assert!(line_dist < 1e-9, "collinear by construction");
    }

    #[test]
    fn certificate_small_depth() {
        let report = symbolic_certificate(3, FIG).unwrap();
        let t = truncate_tstar(3);
        assert_eq!(report.pairs, t.labels.len() * t.edges.len());
        assert!(report.non_real > 0);
        assert!(report.integer_offsets > 0);
        assert!(report.diagonal_offsets > 0);
        for case in &report.offset_cases {
            match case.verdict {
                IncidenceVerdict::IntegerOffset(k) | IncidenceVerdict::DiagonalOffset(k) => {
                    assert!(!(0 < k && k < 1), "offset strictly inside the segment");
                }
                IncidenceVerdict::NonRealRatio => unreachable!(),
            }
        }
    }

    #[test]
    fn golden_fixtures_parse() {
        let fixtures = golden_vertex_fixtures();
        assert_eq!(fixtures.len(), 11);
        assert_eq!(fixtures[10].1.to_string().matches("x[").count(), 6);
    }
}
