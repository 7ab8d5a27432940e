//! Concrete dissimilarity measures for real vectors and labeled graphs.
//!
//! Every measure satisfies `d >= 0`, `d(x, x) = 0`, and symmetry. The
//! Euclidean distance is additionally a metric; the graph dissimilarity is a
//! greedy alignment surrogate and makes no triangle-inequality claim.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{Dataset, DatasetError};

#[derive(Debug, Error, PartialEq)]
pub enum MeasureError {
    #[error("vector dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("coordinate {index} is {value}, coordinates must be finite")]
    NonFiniteCoordinate { index: usize, value: f64 },
    #[error("labels mix symbols and points; both graphs must share one label space")]
    LabelKindMismatch,
    #[error("measure produced {value}, dissimilarities must be finite and non-negative")]
    InvalidDissimilarity { value: f64 },
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("edge ({i}, {j}) references a node outside 0..{nodes}")]
    NodeIndexOutOfRange { i: usize, j: usize, nodes: usize },
    #[error("edge ({i}, {j}) is a self-loop")]
    SelfLoop { i: usize, j: usize },
    #[error("edge ({i}, {j}) appears more than once")]
    DuplicateEdge { i: usize, j: usize },
}

/// A fixed-length real feature vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VectorElement(Vec<f64>);

impl VectorElement {
    pub fn new(coords: Vec<f64>) -> Result<Self, MeasureError> {
        for (index, &value) in coords.iter().enumerate() {
            if !value.is_finite() {
                return Err(MeasureError::NonFiniteCoordinate { index, value });
            }
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl Dataset<VectorElement> {
    /// Builds a vector dataset, checking that every element has the same
    /// dimension.
    pub fn from_vectors(elements: Vec<VectorElement>) -> Result<Self, DatasetError> {
        let ds = Dataset::new(elements)?;
        let expected = ds.elements()[0].dim();
        for (index, element) in ds.iter().enumerate() {
            if element.dim() != expected {
                return Err(DatasetError::MixedDimensions {
                    index,
                    expected,
                    found: element.dim(),
                });
            }
        }
        Ok(ds)
    }

    pub fn dim(&self) -> usize {
        self.elements()[0].dim()
    }
}

/// L2 distance between equal-length vectors.
pub fn euclidean(a: &VectorElement, b: &VectorElement) -> Result<f64, MeasureError> {
    if a.dim() != b.dim() {
        return Err(MeasureError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let sum: f64 = a
        .coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum.sqrt())
}

/// A node or edge label: a categorical symbol or a real point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Symbol(String),
    Point(Vec<f64>),
}

impl Label {
    /// Substitution cost between two labels: 0/1 for symbols, Euclidean
    /// distance for points.
    fn mismatch_cost(&self, other: &Label) -> Result<f64, MeasureError> {
        match (self, other) {
            (Label::Symbol(a), Label::Symbol(b)) => Ok(if a == b { 0.0 } else { 1.0 }),
            (Label::Point(a), Label::Point(b)) => {
                if a.len() != b.len() {
                    return Err(MeasureError::DimensionMismatch {
                        left: a.len(),
                        right: b.len(),
                    });
                }
                let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                Ok(sum.sqrt())
            }
            _ => Err(MeasureError::LabelKindMismatch),
        }
    }

    /// Total order used for deterministic tie-breaking and edge-set merging;
    /// symbols sort before points.
    fn order(&self, other: &Label) -> Ordering {
        match (self, other) {
            (Label::Symbol(a), Label::Symbol(b)) => a.cmp(b),
            (Label::Point(a), Label::Point(b)) => {
                for (x, y) in a.iter().zip(b) {
                    match x.total_cmp(y) {
                        Ordering::Equal => continue,
                        unequal => return unequal,
                    }
                }
                a.len().cmp(&b.len())
            }
            (Label::Symbol(_), Label::Point(_)) => Ordering::Less,
            (Label::Point(_), Label::Symbol(_)) => Ordering::Greater,
        }
    }
}

/// An undirected labeled graph. Edges are stored as `(i, j, label)` with
/// `i < j`, without self-loops or duplicates. Empty graphs are allowed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct LabeledGraph {
    nodes: Vec<Label>,
    edges: Vec<(usize, usize, Label)>,
}

#[derive(Deserialize)]
struct RawGraph {
    nodes: Vec<Label>,
    edges: Vec<(usize, usize, Label)>,
}

impl TryFrom<RawGraph> for LabeledGraph {
    type Error = GraphError;

    fn try_from(raw: RawGraph) -> Result<Self, GraphError> {
        LabeledGraph::new(raw.nodes, raw.edges)
    }
}

impl LabeledGraph {
    /// Validates and normalizes the edge list: endpoints are reordered to
    /// `i < j`, self-loops and duplicate edges are rejected.
    pub fn new(nodes: Vec<Label>, edges: Vec<(usize, usize, Label)>) -> Result<Self, GraphError> {
        let n = nodes.len();
        let mut normalized = Vec::with_capacity(edges.len());
        for (i, j, label) in edges {
            if i >= n || j >= n {
                return Err(GraphError::NodeIndexOutOfRange { i, j, nodes: n });
            }
            if i == j {
                return Err(GraphError::SelfLoop { i, j });
            }
            normalized.push(((i.min(j)), (i.max(j)), label));
        }
        let mut seen: Vec<(usize, usize)> = normalized.iter().map(|&(i, j, _)| (i, j)).collect();
        seen.sort_unstable();
        for pair in seen.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateEdge {
                    i: pair[0].0,
                    j: pair[0].1,
                });
            }
        }
        Ok(Self {
            nodes,
            edges: normalized,
        })
    }

    pub fn nodes(&self) -> &[Label] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize, Label)] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn degrees(&self) -> Vec<usize> {
        let mut degrees = vec![0usize; self.nodes.len()];
        for &(i, j, _) in &self.edges {
            degrees[i] += 1;
            degrees[j] += 1;
        }
        degrees
    }

    /// Node indices sorted by descending degree, ties by label order then
    /// index.
    fn rank_order(&self) -> Vec<usize> {
        let degrees = self.degrees();
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by(|&a, &b| {
            degrees[b]
                .cmp(&degrees[a])
                .then_with(|| self.nodes[a].order(&self.nodes[b]))
                .then_with(|| a.cmp(&b))
        });
        order
    }
}

/// Weights of the graph dissimilarity components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphWeights {
    /// Cost multiplier for aligned node label mismatches.
    pub node_mismatch: f64,
    /// Cost per unmatched node (size difference).
    pub node_insertion: f64,
    /// Cost per edge in the symmetric difference under the alignment.
    pub edge_diff: f64,
}

impl Default for GraphWeights {
    fn default() -> Self {
        Self {
            node_mismatch: 1.0,
            node_insertion: 1.0,
            edge_diff: 0.5,
        }
    }
}

/// Greedy alignment-based edit surrogate between labeled graphs.
///
/// Nodes of each graph are sorted by degree (ties by label order) and
/// aligned rank by rank. The cost sums aligned node-label mismatches, a
/// size-difference insertion term, and the symmetric difference of the edge
/// sets translated through the alignment; the result is symmetrized as the
/// maximum over both directions. Zero on identical graphs; not claimed to
/// satisfy the triangle inequality.
pub fn graph_dissimilarity(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    weights: &GraphWeights,
) -> Result<f64, MeasureError> {
    let forward = directed_cost(g1, g2, weights)?;
    let backward = directed_cost(g2, g1, weights)?;
    Ok(forward.max(backward))
}

fn directed_cost(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    weights: &GraphWeights,
) -> Result<f64, MeasureError> {
    let order1 = g1.rank_order();
    let order2 = g2.rank_order();
    let matched = order1.len().min(order2.len());

    let mut node_cost = 0.0;
    for k in 0..matched {
        node_cost += g1.nodes[order1[k]].mismatch_cost(&g2.nodes[order2[k]])?;
    }
    node_cost *= weights.node_mismatch;
    let insertion_cost =
        (g1.node_count() as f64 - g2.node_count() as f64).abs() * weights.node_insertion;

    // Translate g1's edges through the rank alignment into g2's index space.
    let mut map = vec![usize::MAX; g1.node_count()];
    for k in 0..matched {
        map[order1[k]] = order2[k];
    }
    let mut translated: Vec<(usize, usize, &Label)> = Vec::with_capacity(g1.edges.len());
    let mut unmatched = 0usize;
    for (i, j, label) in &g1.edges {
        let (a, b) = (map[*i], map[*j]);
        if a == usize::MAX || b == usize::MAX {
            unmatched += 1;
        } else {
            translated.push((a.min(b), a.max(b), label));
        }
    }
    let mut target: Vec<(usize, usize, &Label)> = g2
        .edges
        .iter()
        .map(|(i, j, label)| (*i, *j, label))
        .collect();
    let by_key = |x: &(usize, usize, &Label), y: &(usize, usize, &Label)| {
        x.0.cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.order(y.2))
    };
    translated.sort_by(by_key);
    target.sort_by(by_key);

    // Two-pointer symmetric difference over (i, j, label) triples.
    let mut diff = unmatched;
    let (mut p, mut q) = (0, 0);
    while p < translated.len() && q < target.len() {
        match by_key(&translated[p], &target[q]) {
            Ordering::Equal => {
                p += 1;
                q += 1;
            }
            Ordering::Less => {
                diff += 1;
                p += 1;
            }
            Ordering::Greater => {
                diff += 1;
                q += 1;
            }
        }
    }
    diff += translated.len() - p;
    diff += target.len() - q;

    Ok(node_cost + insertion_cost + diff as f64 * weights.edge_diff)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Label {
        Label::Symbol(s.to_string())
    }

    fn vec_el(coords: &[f64]) -> VectorElement {
        VectorElement::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn euclidean_zero_on_identical() {
        let a = vec_el(&[0.0, 0.0]);
        assert_eq!(euclidean(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn euclidean_three_four_five() {
        let a = vec_el(&[0.0, 0.0]);
        let b = vec_el(&[3.0, 4.0]);
        assert_eq!(euclidean(&a, &b).unwrap(), 5.0);
        assert_eq!(euclidean(&b, &a).unwrap(), 5.0);
    }

    #[test]
    fn euclidean_rejects_length_mismatch() {
        let a = vec_el(&[0.0]);
        let b = vec_el(&[0.0, 1.0]);
        assert_eq!(
            euclidean(&a, &b).unwrap_err(),
            MeasureError::DimensionMismatch { left: 1, right: 2 }
        );
    }

    #[test]
    fn vector_element_rejects_non_finite() {
        assert!(matches!(
            VectorElement::new(vec![1.0, f64::INFINITY]),
            Err(MeasureError::NonFiniteCoordinate { index: 1, .. })
        ));
    }

    #[test]
    fn vector_dataset_checks_dimensions() {
        let err = Dataset::from_vectors(vec![vec_el(&[1.0, 2.0]), vec_el(&[1.0])]).unwrap_err();
        assert_eq!(
            err,
            DatasetError::MixedDimensions {
                index: 1,
                expected: 2,
                found: 1
            }
        );
    }

    fn path_graph(labels: &[&str]) -> LabeledGraph {
        let nodes: Vec<Label> = labels.iter().map(|l| sym(l)).collect();
        let edges = (0..labels.len().saturating_sub(1))
            .map(|k| (k, k + 1, sym("e")))
            .collect();
        LabeledGraph::new(nodes, edges).unwrap()
    }

    #[test]
    fn graph_validation() {
        assert!(matches!(
            LabeledGraph::new(vec![sym("a")], vec![(0, 1, sym("e"))]),
            Err(GraphError::NodeIndexOutOfRange { .. })
        ));
        assert!(matches!(
            LabeledGraph::new(vec![sym("a"), sym("b")], vec![(1, 1, sym("e"))]),
            Err(GraphError::SelfLoop { .. })
        ));
        // Duplicate detection is order-insensitive: (0,1) == (1,0).
        assert!(matches!(
            LabeledGraph::new(
                vec![sym("a"), sym("b")],
                vec![(0, 1, sym("e")), (1, 0, sym("f"))]
            ),
            Err(GraphError::DuplicateEdge { i: 0, j: 1 })
        ));
        let g = LabeledGraph::new(vec![sym("a"), sym("b")], vec![(1, 0, sym("e"))]).unwrap();
        assert_eq!(g.edges()[0].0, 0);
        assert_eq!(g.edges()[0].1, 1);
    }

    #[test]
    fn identical_graphs_have_zero_dissimilarity() {
        let g = path_graph(&["a", "b", "c", "b"]);
        assert_eq!(
            graph_dissimilarity(&g, &g, &GraphWeights::default()).unwrap(),
            0.0
        );
    }

    #[test]
    fn empty_vs_edgeless_costs_node_insertions() {
        let empty = LabeledGraph::new(vec![], vec![]).unwrap();
        let nodes = LabeledGraph::new(vec![sym("a"), sym("b"), sym("c")], vec![]).unwrap();
        let w = GraphWeights::default();
        assert_eq!(graph_dissimilarity(&empty, &nodes, &w).unwrap(), 3.0);
        assert_eq!(graph_dissimilarity(&nodes, &empty, &w).unwrap(), 3.0);

        let custom = GraphWeights {
            node_insertion: 2.5,
            ..GraphWeights::default()
        };
        assert_eq!(graph_dissimilarity(&empty, &nodes, &custom).unwrap(), 7.5);
    }

    #[test]
    fn label_substitution_and_edge_difference() {
        let g1 = path_graph(&["a", "b"]);
        let g2 = path_graph(&["a", "c"]);
        // One aligned label mismatch; edge sets coincide under the alignment.
        let d = graph_dissimilarity(&g1, &g2, &GraphWeights::default()).unwrap();
        assert_eq!(d, 1.0);

        // Same nodes, one graph missing the edge: symmetric difference of 1.
        let g3 = LabeledGraph::new(vec![sym("a"), sym("b")], vec![]).unwrap();
        let d = graph_dissimilarity(&g1, &g3, &GraphWeights::default()).unwrap();
        assert_eq!(d, 0.5);
    }

    #[test]
    fn point_labels_use_euclidean_mismatch() {
        let g1 = LabeledGraph::new(vec![Label::Point(vec![0.0, 0.0])], vec![]).unwrap();
        let g2 = LabeledGraph::new(vec![Label::Point(vec![3.0, 4.0])], vec![]).unwrap();
        let d = graph_dissimilarity(&g1, &g2, &GraphWeights::default()).unwrap();
        assert_eq!(d, 5.0);

        let g3 = LabeledGraph::new(vec![sym("a")], vec![]).unwrap();
        assert_eq!(
            graph_dissimilarity(&g1, &g3, &GraphWeights::default()).unwrap_err(),
            MeasureError::LabelKindMismatch
        );
    }

    #[test]
    fn graph_record_round_trip() {
        let g = LabeledGraph::new(
            vec![sym("a"), sym("b"), Label::Point(vec![1.5, -2.0])],
            vec![(0, 1, sym("e")), (1, 2, sym("f"))],
        )
        .unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.starts_with(r#"{"nodes":["a","b",[1.5,-2.0]],"edges":[[0,1,"e"],"#));
        let parsed: LabeledGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, g);
    }

    #[test]
    fn graph_record_rejects_invalid_structures() {
        let bad = r#"{"nodes":["a"],"edges":[[0,0,"e"]]}"#;
        assert!(serde_json::from_str::<LabeledGraph>(bad).is_err());
        let bad = r#"{"nodes":["a","b"],"edges":[[0,5,"e"]]}"#;
        assert!(serde_json::from_str::<LabeledGraph>(bad).is_err());
    }
}
