//! Cross-module checks at depths the per-module unit tests do not reach.

use td13_core::embedder::{draw, draw_truncation, DrawOptions, PlaneGraphInput};
use td13_core::encoding::{
    covering_label, covering_label_closed, host_node_of, is_tstar_edge, proper_node_of, qr_decode,
    qr_encode, Corner, SConvention,
};
use td13_core::symbolic::{psi_of_vertex, psi_polynomial, IncidenceVerdict};
use td13_core::torus::{sample_torus, SplitMix64};
use td13_core::truncation::{labels_up_to, nodes_to_depth, truncate_tstar};
use td13_core::validator::{symbolic_certificate, validate_drawing, GeometricOracle, Tolerances};

const FIG: SConvention = SConvention::Figure;

#[test]
fn encoding_bijections_depth_eight() {
    for node in nodes_to_depth(8) {
        assert_eq!(qr_decode(&qr_encode(&node)), node);
        for corner in [Corner::V2, Corner::V3] {
            assert_eq!(
                covering_label_closed(&node, corner).unwrap(),
                covering_label(&node, corner)
            );
        }
    }
}

#[test]
fn host_and_proper_nodes_cover_all_small_labels() {
    let labels = labels_up_to(9);
    let mut proper_nodes = std::collections::BTreeSet::new();
    for v in &labels {
        if !v.is_root_edge_vertex() {
            let (node, corner) = host_node_of(v).unwrap();
            assert_eq!(covering_label(&node, corner), *v);
        }
        let node = proper_node_of(v);
        assert!(qr_encode(&node).is_proper());
        assert_eq!(covering_label(&node, Corner::V0), *v);
        assert!(proper_nodes.insert(node), "duplicate proper node for {v}");
    }
}

#[test]
fn psi_injective_on_small_labels() {
    let labels = labels_up_to(7);
    let polys: Vec<_> = labels.iter().map(|v| psi_polynomial(v, FIG)).collect();
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            assert_ne!(polys[i], polys[j], "{} vs {}", labels[i], labels[j]);
        }
    }
}

#[test]
fn collapses_ascend_to_depth_six() {
    for v in truncate_tstar(6).labels {
        assert!(psi_of_vertex(&v, FIG).collapse().is_ascending(), "{v}");
    }
}

#[test]
fn oracle_agrees_with_formula_to_depth_six() {
    let oracle = GeometricOracle::new(6, FIG);
    for seed in 0..5u64 {
        let x = sample_torus(seed);
        for (label, z) in oracle.coordinates(&x) {
            let w = psi_of_vertex(&label, FIG).eval(&x);
            assert!((z - w).norm() <= 1e-9, "{label}: {z} vs {w}");
        }
    }
}

#[test]
fn certificate_depth_five_is_clean() {
    let report = symbolic_certificate(5, FIG).expect("no contradictions");
    assert_eq!(report.pairs, report.non_real + report.offset_cases.len());
    // every offset is an integer outside the open unit interval, and the
    // numeric picture agrees with the symbolic verdict
    let xs: Vec<_> = (0..20u64).map(sample_torus).collect();
    for case in &report.offset_cases {
        let k = match case.verdict {
            IncidenceVerdict::IntegerOffset(k) | IncidenceVerdict::DiagonalOffset(k) => k,
            IncidenceVerdict::NonRealRatio => unreachable!(),
        };
        assert!(k <= 0 || k >= 1);
        for x in &xs {
            let zv = psi_polynomial(&case.v, FIG).eval(x);
            let zu = psi_polynomial(&case.u, FIG).eval(x);
            let zw = psi_polynomial(&case.w, FIG).eval(x);
            let expect = zw + (zu - zw) * (k as f64);
            assert!((zv - expect).norm() <= 1e-9);
        }
    }
}

#[test]
#[ignore = "several minutes; run with --ignored"]
fn certificate_depth_seven_is_clean() {
    let report = symbolic_certificate(7, FIG).expect("no contradictions");
    assert_eq!(report.pairs, 9_568_124);
    assert_eq!(report.pairs, report.non_real + report.offset_cases.len());
}

#[test]
fn truncation_drawings_validate_across_seeds() {
    for seed in 1..=10u64 {
        let opts = DrawOptions {
            seed,
            ..DrawOptions::default()
        };
        let d = draw_truncation(5, &opts).unwrap();
        let report = validate_drawing(&d, &Tolerances::default());
        assert!(report.failures.is_empty(), "seed {seed}: {:?}", report.failures);
        assert!(report.n_length_classes <= 13);
    }
}

#[test]
fn random_outerplanar_graphs_roundtrip() {
    let mut rng = SplitMix64::new(0xd13);
    for case in 0..40 {
        let n = 3 + rng.next_below(48);
        let g = random_maximal_outerplanar(n, &mut rng);
        let labels_free = g
            .edges()
            .collect::<Vec<_>>();
        assert_eq!(labels_free.len(), 2 * n - 3);
        let opts = DrawOptions {
            seed: rng.next_u64(),
            ..DrawOptions::default()
        };
        let d = draw(&g, &opts).unwrap();
        let report = validate_drawing(&d, &Tolerances::default());
        assert!(report.failures.is_empty(), "case {case}: {:?}", report.failures);
        // drawn edges carry labels adjacent in the triangle tree
        for e in &d.edges {
            assert!(is_tstar_edge(&d.labels[&e.u], &d.labels[&e.v]));
        }
    }
}

/// Random triangle-gluing process: start from a triangle and repeatedly
/// glue a new vertex onto a random outer-cycle edge.
fn random_maximal_outerplanar(n: usize, rng: &mut SplitMix64) -> PlaneGraphInput {
    assert!(n >= 3);
    let mut cycle = vec![0usize, 1, 2];
    let mut edges = vec![(0, 1), (1, 2), (0, 2)];
    for v in 3..n {
        let at = rng.next_below(cycle.len());
        let a = cycle[at];
        let b = cycle[(at + 1) % cycle.len()];
        edges.push((a, v));
        edges.push((b, v));
        cycle.insert(at + 1, v);
    }
    PlaneGraphInput::new(n, cycle, &edges).unwrap()
}
