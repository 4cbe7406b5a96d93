mod common;

use common::{arb_graph, arb_sparse_graph};
use covercheck_core::covers::{
    assignment_count, build_cover, enumerate_assignments, sample_assignment, trivial_cover, DEFAULT_ENUMERATION_CAP,
};
use covercheck_core::VoltageAssignment;
use proptest::prelude::*;

proptest! {
    #[test]
    fn sampled_covers_are_valid(g in arb_graph(7), m in 1usize..=4, seed in any::<u64>()) {
        let a = sample_assignment(&g, m, seed).unwrap();
        let cover = build_cover(&g, &a).unwrap();
        prop_assert!(cover.validate().is_ok());
        prop_assert_eq!(cover.graph().vertex_count(), m * g.vertex_count());
        prop_assert_eq!(cover.graph().edge_count(), m * g.edge_count());

        let mut vfib = vec![0; g.vertex_count()];
        for &v in cover.vertex_proj() { vfib[v] += 1; }
        prop_assert!(vfib.iter().all(|&c| c == m));
        let mut efib = vec![0; g.edge_count()];
        for &e in cover.edge_proj() { efib[e] += 1; }
        prop_assert!(efib.iter().all(|&c| c == m));

        for (ce, &(x, y)) in cover.graph().edges().iter().enumerate() {
            let (bu, bv) = g.edge(cover.edge_proj()[ce]);
            let (px, py) = (cover.vertex_proj()[x], cover.vertex_proj()[y]);
            prop_assert_eq!((px.min(py), px.max(py)), (bu, bv));
        }
        for w in 0..cover.graph().vertex_count() {
            prop_assert_eq!(cover.cover_vertex(cover.vertex_proj()[w], cover.layer()[w]), w);
        }
    }

    #[test]
    fn identity_assignment_equals_trivial_cover(g in arb_graph(7), m in 1usize..=3) {
        let a = VoltageAssignment::identity(g.edge_count(), m).unwrap();
        prop_assert_eq!(build_cover(&g, &a).unwrap(), trivial_cover(&g, m).unwrap());
    }

    #[test]
    fn enumeration_count_is_factorial_power(g in arb_sparse_graph(5, 4), m in 1usize..=3) {
        let all: Vec<_> = enumerate_assignments(&g, m, DEFAULT_ENUMERATION_CAP).unwrap().collect();
        let expected = assignment_count(g.edge_count(), m).unwrap();
        prop_assert_eq!(all.len() as u128, expected);
        let mut distinct = all.clone();
        distinct.sort_by_key(|a| a.perms().iter().map(|p| p.rank()).collect::<Vec<_>>());
        distinct.dedup();
        prop_assert_eq!(distinct.len(), all.len());
        for a in &all {
            prop_assert!(build_cover(&g, a).is_ok());
        }
    }
}
