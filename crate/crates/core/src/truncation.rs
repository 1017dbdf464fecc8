//! Bounded-depth enumeration of the rhombus tree and the triangle tree.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::encoding::{covering_label, Corner, NodePath, VertexLabel};

/// All node paths of length at most `depth`, in breadth-first order.
/// `depth = 1` yields just the root; the count is `sum of 3^j for j < depth`.
pub fn nodes_to_depth(depth: usize) -> Vec<NodePath> {
    let mut out = Vec::new();
    if depth == 0 {
        return out;
    }
    out.push(NodePath::root());
    let mut level_start = 0;
    for _ in 1..depth {
        let level_end = out.len();
        for i in level_start..level_end {
            for arc in 0..3 {
                let child = out[i].child(arc);
                out.push(child);
            }
        }
        level_start = level_end;
    }
    out
}

/// Every vertex label of length at most `max_len`, sorted. There are
/// `2^(k-3)` labels of each length `k >= 3`.
pub fn labels_up_to(max_len: usize) -> Vec<VertexLabel> {
    let mut out = Vec::new();
    if max_len >= 1 {
        out.push(VertexLabel::root());
    }
    if max_len >= 2 {
        out.push(VertexLabel::root_mate());
    }
    if max_len >= 3 {
        let mut frontier = alloc::vec![VertexLabel::root_mate().child(0)];
        out.extend(frontier.iter().cloned());
        while let Some(v) = frontier.pop() {
            if v.len() >= max_len {
                continue;
            }
            for bit in 0..=1 {
                let child = v.child(bit);
                out.push(child.clone());
                frontier.push(child);
            }
        }
    }
    out.sort();
    out
}

/// The part of the triangle tree covered by rhombus nodes up to a depth.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub depth: usize,
    /// Sorted, deduplicated vertex labels.
    pub labels: Vec<VertexLabel>,
    /// Deduplicated edges, shorter label first.
    pub edges: Vec<(VertexLabel, VertexLabel)>,
}

const RHOMBUS_EDGES: [(Corner, Corner); 5] = [
    (Corner::V0, Corner::V1),
    (Corner::V0, Corner::V2),
    (Corner::V2, Corner::V3),
    (Corner::V1, Corner::V3),
    (Corner::V1, Corner::V2),
];

/// Collects the vertices and edges of every node within `depth`.
///
/// Each node past the root contributes two fresh vertices and four fresh
/// edges, so the totals are `2 + 2k` and `5 + 4(k - 1)` for `k` nodes.
pub fn truncate_tstar(depth: usize) -> Truncation {
    let mut labels = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for node in nodes_to_depth(depth) {
        let corner_labels = Corner::ALL.map(|c| covering_label(&node, c));
        for (a, b) in RHOMBUS_EDGES {
            let la = &corner_labels[a as usize];
            let lb = &corner_labels[b as usize];
            let pair = if la.len() <= lb.len() {
                (la.clone(), lb.clone())
            } else {
                (lb.clone(), la.clone())
            };
            edges.insert(pair);
        }
        for l in corner_labels {
            labels.insert(l);
        }
    }
    Truncation {
        depth,
        labels: labels.into_iter().collect(),
        edges: edges.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::is_tstar_edge;

    #[test]
    fn node_counts() {
        assert_eq!(nodes_to_depth(0).len(), 0);
        assert_eq!(nodes_to_depth(1).len(), 1);
        assert_eq!(nodes_to_depth(2).len(), 4);
        assert_eq!(nodes_to_depth(4).len(), 1 + 3 + 9 + 27);
    }

    #[test]
    fn truncation_counts() {
        for depth in 1..=5 {
            let t = truncate_tstar(depth);
            let k = nodes_to_depth(depth).len();
            assert_eq!(t.labels.len(), 2 + 2 * k);
            assert_eq!(t.edges.len(), 5 + 4 * (k - 1));
        }
    }

    #[test]
    fn truncation_edges_are_edges() {
        let t = truncate_tstar(4);
        for (a, b) in &t.edges {
            assert!(is_tstar_edge(a, b), "({a}, {b})");
            assert!(a.len() < b.len());
        }
    }

    #[test]
    fn label_counts() {
        assert_eq!(labels_up_to(0).len(), 0);
        assert_eq!(labels_up_to(2).len(), 2);
        // 2 + sum of 2^(k-3) for k in 3..=8
        assert_eq!(labels_up_to(8).len(), 2 + 63);
        for v in labels_up_to(6) {
            assert!(v.len() <= 6);
        }
    }
}
