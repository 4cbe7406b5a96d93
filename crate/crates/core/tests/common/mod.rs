#![allow(dead_code)]

use covercheck_core::Graph;
use proptest::prelude::*;

/// Graph on `1..=max_n` vertices, each possible edge present per a random mask.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |mask| {
            Graph::new(n, pairs.iter().zip(&mask).filter(|(_, &keep)| keep).map(|(&e, _)| e)).unwrap()
        })
    })
}

/// Graph with at most `max_edges` edges.
pub fn arb_sparse_graph(max_n: usize, max_edges: usize) -> impl Strategy<Value = Graph> {
    arb_graph(max_n).prop_map(move |g| Graph::new(g.vertex_count(), g.edges().iter().copied().take(max_edges)).unwrap())
}

/// Random labelled tree on `1..=max_n` vertices: vertex `i > 0` attaches to a
/// uniformly chosen earlier vertex.
pub fn arb_tree(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        (1..n.max(2)).map(|i| 0..i).collect::<Vec<_>>().prop_map(move |parents| {
            Graph::new(n, parents.iter().enumerate().take(n - 1).map(|(i, &p)| (p, i + 1))).unwrap()
        })
    })
}

/// Model on `g` with couplings in `j_range` and fields in `[-1, 1]`.
pub fn arb_model_on(
    g: Graph,
    j_lo: f64,
    j_hi: f64,
) -> impl Strategy<Value = covercheck_core::PairwiseModel> {
    let (m, n) = (g.edge_count(), g.vertex_count());
    (proptest::collection::vec(j_lo..j_hi, m), proptest::collection::vec(-1.0..1.0f64, n))
        .prop_map(move |(j, h)| covercheck_core::PairwiseModel::new(g.clone(), j, h).unwrap())
}
