//! M-fold covers built from permutation voltage assignments.
//!
//! Each undirected edge `u < v` carries one permutation `σ` of the layers
//! `0..M`; the cover joins `(u, k)` to `(v, σ(k))`. The reverse orientation
//! implicitly carries `σ⁻¹`, so the inverse constraint cannot be violated.
//! Cover vertex `(v, k)` has dense index `k * n + v`, and cover edge
//! `(base edge i, layer k of its lower endpoint)` has index `k * |E| + i`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Default refusal threshold for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("cover degree must be at least 1")]
    ZeroDegree,
    #[error("assignment has {assignment} edge permutations but the graph has {graph} edges")]
    EdgeCountMismatch { assignment: usize, graph: usize },
    #[error("assignment edge {index} is {found:?} but the graph edge is {expected:?}")]
    EdgeMismatch { index: usize, found: (usize, usize), expected: (usize, usize) },
    #[error("permutation on edge {index} is not a bijection of 0..{m}")]
    NotAPermutation { index: usize, m: usize },
    #[error("{count} assignments exceed the enumeration cap of {cap}")]
    TooMany { count: String, cap: u64 },
    #[error("cover fails local isomorphism at cover vertex {vertex}")]
    NotLocallyIsomorphic { vertex: usize },
}

/// A permutation of `0..m`, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation((0..m).collect())
    }

    /// Validates that `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in &images {
            if x >= m || std::mem::replace(&mut seen[x], true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    /// Rank in lexicographic order of image vectors (identity is 0).
    pub fn rank(&self) -> u64 {
        let m = self.0.len();
        let mut used = vec![false; m];
        let mut rank = 0u64;
        for (i, &x) in self.0.iter().enumerate() {
            let smaller_unused = used[..x].iter().filter(|u| !**u).count() as u64;
            rank += smaller_unused * factorial(m - 1 - i).expect("rank of a representable permutation");
            used[x] = true;
        }
        rank
    }

    /// Inverse of [`Permutation::rank`]; `rank` must be below `m!`.
    pub fn unrank(m: usize, mut rank: u64) -> Self {
        let mut pool: Vec<usize> = (0..m).collect();
        let mut images = Vec::with_capacity(m);
        for i in 0..m {
            let f = factorial(m - 1 - i).expect("unrank of a representable permutation");
            let idx = (rank / f) as usize;
            rank %= f;
            images.push(pool.remove(idx));
        }
        Permutation(images)
    }
}

/// `n!`, or `None` when it does not fit in a `u64`.
pub fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// `(m!)^edges`, or `None` on `u128` overflow.
pub fn assignment_count(edges: usize, m: usize) -> Option<u128> {
    let per_edge = factorial(m)? as u128;
    (0..edges).try_fold(1u128, |acc, _| acc.checked_mul(per_edge))
}

/// One permutation per undirected edge, keyed by the edge's canonical
/// orientation `u → v` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VoltageAssignment {
    m: usize,
    perms: Vec<Permutation>,
}

impl VoltageAssignment {
    pub fn new(m: usize, perms: Vec<Permutation>) -> Result<Self, CoverError> {
        if m == 0 {
            return Err(CoverError::ZeroDegree);
        }
        if let Some(index) = perms.iter().position(|p| p.degree() != m) {
            return Err(CoverError::NotAPermutation { index, m });
        }
        Ok(VoltageAssignment { m, perms })
    }

    /// All-identity assignment on `edges` edges.
    pub fn identity(edges: usize, m: usize) -> Result<Self, CoverError> {
        Self::new(m, vec![Permutation::identity(m); edges])
    }

    /// Assignment at position `rank` of the lexicographic enumeration
    /// (edge 0 is the most significant digit).
    pub fn from_rank(edges: usize, m: usize, mut rank: u128) -> Result<Self, CoverError> {
        if m == 0 {
            return Err(CoverError::ZeroDegree);
        }
        let radix = factorial(m).expect("cover degree small enough to enumerate") as u128;
        let mut perms = vec![Permutation::identity(m); edges];
        for slot in perms.iter_mut().rev() {
            *slot = Permutation::unrank(m, (rank % radix) as u64);
            rank /= radix;
        }
        Ok(VoltageAssignment { m, perms })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edge_count(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    /// Permutation on the oriented edge `from → to` (inverse for `from > to`).
    pub fn oriented(&self, g: &Graph, from: usize, to: usize) -> Option<Permutation> {
        let e = g.edge_between(from, to)?;
        Some(if from < to { self.perms[e].clone() } else { self.perms[e].inverse() })
    }

    pub fn is_trivial(&self) -> bool {
        self.perms.iter().all(Permutation::is_identity)
    }

    fn check_base(&self, g: &Graph) -> Result<(), CoverError> {
        if self.perms.len() != g.edge_count() {
            return Err(CoverError::EdgeCountMismatch {
                assignment: self.perms.len(),
                graph: g.edge_count(),
            });
        }
        Ok(())
    }

    pub fn to_doc(&self, g: &Graph) -> AssignmentDoc {
        AssignmentDoc {
            m: self.m,
            edges: g
                .edges()
                .iter()
                .zip(&self.perms)
                .map(|(&(u, v), p)| EdgeVoltage { u, v, perm: p.images().to_vec() })
                .collect(),
        }
    }

    /// Reads a serialized assignment, checking it edge by edge against `g`.
    /// Edges may be listed with endpoints in either order; a listed `v → u`
    /// permutation is inverted onto the canonical orientation.
    pub fn from_doc(g: &Graph, doc: &AssignmentDoc) -> Result<Self, CoverError> {
        if doc.edges.len() != g.edge_count() {
            return Err(CoverError::EdgeCountMismatch { assignment: doc.edges.len(), graph: g.edge_count() });
        }
        let mut perms = Vec::with_capacity(doc.edges.len());
        for (index, (ev, &expected)) in doc.edges.iter().zip(g.edges()).enumerate() {
            let found = (ev.u, ev.v);
            if (found.0.min(found.1), found.0.max(found.1)) != expected {
                return Err(CoverError::EdgeMismatch { index, found, expected });
            }
            let p = Permutation::from_images(ev.perm.clone())
                .filter(|p| p.degree() == doc.m)
                .ok_or(CoverError::NotAPermutation { index, m: doc.m })?;
            perms.push(if ev.u < ev.v { p } else { p.inverse() });
        }
        Self::new(doc.m, perms)
    }
}

/// JSON form: `{"m": M, "edges": [{"u":u,"v":v,"perm":[...]}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentDoc {
    pub m: usize,
    pub edges: Vec<EdgeVoltage>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeVoltage {
    pub u: usize,
    pub v: usize,
    pub perm: Vec<usize>,
}

/// An M-cover together with its natural projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverGraph {
    base: Graph,
    m: usize,
    graph: Graph,
    vertex_proj: Vec<usize>,
    edge_proj: Vec<usize>,
    layer: Vec<usize>,
}

impl CoverGraph {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_proj(&self) -> &[usize] {
        &self.vertex_proj
    }

    pub fn edge_proj(&self) -> &[usize] {
        &self.edge_proj
    }

    pub fn layer(&self) -> &[usize] {
        &self.layer
    }

    pub fn cover_vertex(&self, v: usize, layer: usize) -> usize {
        layer * self.base.vertex_count() + v
    }

    /// Checks that the projection restricted to every neighborhood is a
    /// bijection onto the base neighborhood, and that edge projection agrees
    /// with vertex projection.
    pub fn validate(&self) -> Result<(), CoverError> {
        let mut images = Vec::new();
        for w in 0..self.graph.vertex_count() {
            let base_v = self.vertex_proj[w];
            images.clear();
            for &(x, e) in self.graph.neighbors(w) {
                let (bu, bv) = self.base.edge(self.edge_proj[e]);
                let bx = self.vertex_proj[x];
                if (bu.min(bv), bu.max(bv)) != (base_v.min(bx), base_v.max(bx)) {
                    return Err(CoverError::NotLocallyIsomorphic { vertex: w });
                }
                images.push(bx);
            }
            images.sort_unstable();
            let expected = self.base.neighbors(base_v).iter().map(|&(y, _)| y);
            if images.len() != self.base.degree(base_v) || !images.iter().copied().eq(expected) {
                return Err(CoverError::NotLocallyIsomorphic { vertex: w });
            }
        }
        Ok(())
    }
}

/// Builds the cover of `g` determined by `a` and validates local isomorphism.
pub fn build_cover(g: &Graph, a: &VoltageAssignment) -> Result<CoverGraph, CoverError> {
    a.check_base(g)?;
    let n = g.vertex_count();
    let m = a.m();
    let mut edges = Vec::with_capacity(m * g.edge_count());
    let mut edge_proj = Vec::with_capacity(m * g.edge_count());
    for k in 0..m {
        for (i, (&(u, v), sigma)) in g.edges().iter().zip(a.perms()).enumerate() {
            edges.push((k * n + u, sigma.apply(k) * n + v));
            edge_proj.push(i);
        }
    }
    let graph = Graph::new(m * n, edges).expect("lift of a simple graph is simple");
    let cover = CoverGraph {
        base: g.clone(),
        m,
        graph,
        vertex_proj: (0..m * n).map(|w| w % n).collect(),
        edge_proj,
        layer: (0..m * n).map(|w| w / n).collect(),
    };
    cover.validate()?;
    Ok(cover)
}

/// `m` disjoint copies of `g`.
pub fn trivial_cover(g: &Graph, m: usize) -> Result<CoverGraph, CoverError> {
    build_cover(g, &VoltageAssignment::identity(g.edge_count(), m)?)
}

/// Lexicographic stream over all `(m!)^|E|` assignments.
#[derive(Debug, Clone)]
pub struct Assignments {
    edges: usize,
    m: usize,
    next: u128,
    end: u128,
}

impl Assignments {
    pub fn total(&self) -> u128 {
        self.end
    }

    /// Restricts the stream to ranks in `start..end`.
    pub fn range(mut self, start: u128, end: u128) -> Self {
        self.next = start.min(self.end);
        self.end = end.min(self.end);
        self
    }
}

impl Iterator for Assignments {
    type Item = VoltageAssignment;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let a = VoltageAssignment::from_rank(self.edges, self.m, self.next).expect("m >= 1 checked on creation");
        self.next += 1;
        Some(a)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = usize::try_from(self.end - self.next).ok();
        (left.unwrap_or(usize::MAX), left)
    }
}

/// Every assignment of degree `m` on `g`, refusing when there are more than `cap`.
pub fn enumerate_assignments(g: &Graph, m: usize, cap: u64) -> Result<Assignments, CoverError> {
    if m == 0 {
        return Err(CoverError::ZeroDegree);
    }
    match assignment_count(g.edge_count(), m) {
        Some(count) if count <= cap as u128 => Ok(Assignments { edges: g.edge_count(), m, next: 0, end: count }),
        Some(count) => Err(CoverError::TooMany { count: count.to_string(), cap }),
        None => Err(CoverError::TooMany { count: format!("({m}!)^{}", g.edge_count()), cap }),
    }
}

/// Reproducible stream of uniformly random assignments.
#[derive(Debug, Clone)]
pub struct AssignmentSampler {
    edges: usize,
    m: usize,
    rng: ChaCha8Rng,
}

impl AssignmentSampler {
    pub fn new(g: &Graph, m: usize, seed: u64) -> Result<Self, CoverError> {
        if m == 0 {
            return Err(CoverError::ZeroDegree);
        }
        Ok(AssignmentSampler { edges: g.edge_count(), m, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn sample(&mut self) -> VoltageAssignment {
        let perms = (0..self.edges)
            .map(|_| {
                let mut images: Vec<usize> = (0..self.m).collect();
                images.shuffle(&mut self.rng);
                Permutation(images)
            })
            .collect();
        VoltageAssignment { m: self.m, perms }
    }
}

impl Iterator for AssignmentSampler {
    type Item = VoltageAssignment;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.sample())
    }
}

/// Each edge's permutation drawn independently and uniformly from `S_m`.
pub fn sample_assignment(g: &Graph, m: usize, seed: u64) -> Result<VoltageAssignment, CoverError> {
    Ok(AssignmentSampler::new(g, m, seed)?.sample())
}

/// Switching (layer-relabeling) normal form of assignments.
///
/// Two assignments give covers that are isomorphic over the base exactly when
/// `σ'_uv = τ_v ∘ σ_uv ∘ τ_u⁻¹` for some per-vertex relabeling `τ`. Fixing a
/// BFS spanning forest to the identity leaves one free relabeling per
/// component, which acts by simultaneous conjugation; the canonical
/// representative is the conjugate with the lexicographically smallest rank
/// sequence.
pub mod switching {
    use std::collections::VecDeque;

    use super::{Permutation, VoltageAssignment};
    use crate::graph::Graph;

    /// Spanning forest data: tree-edge flags and the component of each edge.
    #[derive(Debug, Clone)]
    pub struct Forest {
        tree: Vec<bool>,
        edge_component: Vec<usize>,
        components: usize,
        /// Vertices in BFS order with the tree edge and parent that reached them.
        order: Vec<(usize, Option<(usize, usize)>)>,
    }

    impl Forest {
        pub fn new(g: &Graph) -> Self {
            let mut component = vec![usize::MAX; g.vertex_count()];
            let mut tree = vec![false; g.edge_count()];
            let mut order = Vec::with_capacity(g.vertex_count());
            let mut components = 0;
            let mut queue = VecDeque::new();
            for root in 0..g.vertex_count() {
                if component[root] != usize::MAX {
                    continue;
                }
                component[root] = components;
                order.push((root, None));
                queue.push_back(root);
                while let Some(v) = queue.pop_front() {
                    for &(w, e) in g.neighbors(v) {
                        if component[w] == usize::MAX {
                            component[w] = components;
                            tree[e] = true;
                            order.push((w, Some((v, e))));
                            queue.push_back(w);
                        }
                    }
                }
                components += 1;
            }
            let edge_component = g.edges().iter().map(|&(u, _)| component[u]).collect();
            Forest { tree, edge_component, components, order }
        }

        pub fn is_tree_edge(&self, e: usize) -> bool {
            self.tree[e]
        }

        /// Number of edges outside the forest (the cycle rank).
        pub fn cotree_edges(&self) -> usize {
            self.tree.iter().filter(|t| !**t).count()
        }
    }

    /// Relabels layers so every forest edge carries the identity.
    pub fn gauge_fix(g: &Graph, forest: &Forest, a: &VoltageAssignment) -> VoltageAssignment {
        let m = a.m();
        let mut tau: Vec<Permutation> = vec![Permutation::identity(m); g.vertex_count()];
        for &(v, reached) in &forest.order {
            if let Some((parent, e)) = reached {
                let sigma = &a.perms()[e];
                tau[v] = if parent < v {
                    tau[parent].compose(&sigma.inverse())
                } else {
                    tau[parent].compose(sigma)
                };
            }
        }
        let perms = g
            .edges()
            .iter()
            .zip(a.perms())
            .map(|(&(u, v), sigma)| tau[v].compose(sigma).compose(&tau[u].inverse()))
            .collect();
        VoltageAssignment::new(m, perms).expect("relabeling preserves degree")
    }

    /// Canonical representative of the switching class of `a`.
    pub fn canonical(g: &Graph, forest: &Forest, a: &VoltageAssignment) -> VoltageAssignment {
        let fixed = gauge_fix(g, forest, a);
        let m = fixed.m();
        let mut best: Vec<Option<Vec<u64>>> = vec![None; forest.components];
        let mut best_rho: Vec<Permutation> = vec![Permutation::identity(m); forest.components];
        let rhos: Vec<Permutation> =
            (0..super::factorial(m).expect("small degree")).map(|r| Permutation::unrank(m, r)).collect();
        for rho in &rhos {
            let rho_inv = rho.inverse();
            let mut keys: Vec<Vec<u64>> = vec![Vec::new(); forest.components];
            for (e, sigma) in fixed.perms().iter().enumerate() {
                if !forest.tree[e] {
                    keys[forest.edge_component[e]].push(rho.compose(sigma).compose(&rho_inv).rank());
                }
            }
            for (c, key) in keys.into_iter().enumerate() {
                if best[c].as_ref().is_none_or(|b| key < *b) {
                    best[c] = Some(key);
                    best_rho[c] = rho.clone();
                }
            }
        }
        let perms = fixed
            .perms()
            .iter()
            .enumerate()
            .map(|(e, sigma)| {
                let rho = &best_rho[forest.edge_component[e]];
                rho.compose(sigma).compose(&rho.inverse())
            })
            .collect();
        VoltageAssignment::new(m, perms).expect("conjugation preserves degree")
    }

    /// Gauge-fixed assignments (forest edges identity) at `rank` over the
    /// cotree edges, in lexicographic order.
    pub fn gauge_fixed_from_rank(g: &Graph, forest: &Forest, m: usize, rank: u128) -> VoltageAssignment {
        let cotree = VoltageAssignment::from_rank(forest.cotree_edges(), m, rank).expect("m >= 1");
        let mut rest = cotree.perms().iter();
        let perms = (0..g.edge_count())
            .map(|e| {
                if forest.tree[e] {
                    Permutation::identity(m)
                } else {
                    rest.next().expect("cotree count matches").clone()
                }
            })
            .collect();
        VoltageAssignment::new(m, perms).expect("m >= 1")
    }
}
