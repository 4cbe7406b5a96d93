//! Structure families and their multivariate generating polynomials.
//!
//! Enumeration is branch-and-prune over word bitsets, always branching on the
//! smallest undecided element. Each visitor call receives the chosen ground
//! elements (vertices or edges) in increasing order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::graph::{is_bipartite, Graph};
use crate::poly::{GroundKind, GroundSet, Monomial, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureFamily {
    IndependentSet,
    Matching,
    PerfectMatching,
    #[serde(rename = "eulerian")]
    EulerianSubset,
}

impl StructureFamily {
    pub const ALL: [StructureFamily; 4] = [
        StructureFamily::IndependentSet,
        StructureFamily::Matching,
        StructureFamily::PerfectMatching,
        StructureFamily::EulerianSubset,
    ];

    pub fn ground_kind(self) -> GroundKind {
        match self {
            StructureFamily::IndependentSet => GroundKind::Vertices,
            _ => GroundKind::Edges,
        }
    }

    pub fn ground_set(self, g: &Graph) -> GroundSet {
        GroundSet::of_graph(g, self.ground_kind())
    }

    /// Whether the dominance conjecture for this family is claimed on `g`:
    /// bipartite for independent sets and matchings, an even vertex count
    /// for perfect matchings, anything for Eulerian subsets.
    pub fn admissible(self, g: &Graph) -> bool {
        match self {
            StructureFamily::IndependentSet | StructureFamily::Matching => is_bipartite(g).is_some(),
            StructureFamily::PerfectMatching => g.vertex_count().is_multiple_of(2),
            StructureFamily::EulerianSubset => true,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StructureFamily::IndependentSet => "independent-set",
            StructureFamily::Matching => "matching",
            StructureFamily::PerfectMatching => "perfect-matching",
            StructureFamily::EulerianSubset => "eulerian",
        }
    }
}

impl fmt::Display for StructureFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StructureFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StructureFamily::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown family {s:?}; expected independent-set, matching, perfect-matching or eulerian"))
    }
}

/// Fixed-width bitset backed by a slice of words.
#[derive(Clone, Debug)]
struct Bits {
    words: usize,
    data: Vec<u64>,
}

impl Bits {
    /// `rows` bitsets of `len` bits each, stored contiguously.
    fn table(len: usize, rows: usize) -> Self {
        let words = len.div_ceil(64).max(1);
        Bits { words, data: vec![0; words * rows] }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn set(&mut self, r: usize, bit: usize) {
        self.data[r * self.words + bit / 64] |= 1 << (bit % 64);
    }

    fn clear(&mut self, r: usize, bit: usize) {
        self.data[r * self.words + bit / 64] &= !(1 << (bit % 64));
    }

    fn first(&self, r: usize) -> Option<usize> {
        self.row(r)
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn contains(&self, r: usize, bit: usize) -> bool {
        self.data[r * self.words + bit / 64] & (1 << (bit % 64)) != 0
    }
}

/// Enumerates independent sets of the conflict structure given by
/// `conflicts` (row `i` = elements incompatible with `i`, including `i`).
fn for_each_conflict_free<F: FnMut(&[usize])>(len: usize, conflicts: &Bits, visit: &mut F) {
    // levels[d] = candidates still available at depth d
    let mut levels = Bits::table(len, len + 1);
    for i in 0..len {
        levels.set(0, i);
    }
    let mut chosen = Vec::with_capacity(len);
    conflict_free_rec(0, conflicts, &mut levels, &mut chosen, visit);
}

fn conflict_free_rec<F: FnMut(&[usize])>(
    depth: usize,
    conflicts: &Bits,
    levels: &mut Bits,
    chosen: &mut Vec<usize>,
    visit: &mut F,
) {
    let Some(i) = levels.first(depth) else {
        visit(chosen);
        return;
    };
    let w = levels.words;
    let (head, tail) = levels.data.split_at_mut((depth + 1) * w);
    let cur = &head[depth * w..];
    let next = &mut tail[..w];

    // include i
    for ((n, c), k) in next.iter_mut().zip(cur).zip(conflicts.row(i)) {
        *n = c & !k;
    }
    chosen.push(i);
    conflict_free_rec(depth + 1, conflicts, levels, chosen, visit);
    chosen.pop();

    // exclude i
    let (head, tail) = levels.data.split_at_mut((depth + 1) * w);
    tail[..w].copy_from_slice(&head[depth * w..]);
    levels.clear(depth + 1, i);
    conflict_free_rec(depth + 1, conflicts, levels, chosen, visit);
}

fn independent_sets<F: FnMut(&[usize])>(g: &Graph, visit: &mut F) {
    let n = g.vertex_count();
    let mut conflicts = Bits::table(n, n);
    for v in 0..n {
        conflicts.set(v, v);
        for &(w, _) in g.neighbors(v) {
            conflicts.set(v, w);
        }
    }
    for_each_conflict_free(n, &conflicts, visit);
}

fn matchings<F: FnMut(&[usize])>(g: &Graph, visit: &mut F) {
    let m = g.edge_count();
    let mut conflicts = Bits::table(m, m);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        for x in [u, v] {
            for &(_, f) in g.neighbors(x) {
                conflicts.set(e, f);
            }
        }
    }
    for_each_conflict_free(m, &conflicts, visit);
}

fn perfect_matchings<F: FnMut(&[usize])>(g: &Graph, visit: &mut F) {
    let n = g.vertex_count();
    if n % 2 == 1 {
        return;
    }
    let mut uncovered = Bits::table(n, 1);
    for v in 0..n {
        uncovered.set(0, v);
    }
    let mut chosen = Vec::with_capacity(n / 2);
    perfect_rec(g, &mut uncovered, &mut chosen, visit);
}

fn perfect_rec<F: FnMut(&[usize])>(g: &Graph, uncovered: &mut Bits, chosen: &mut Vec<usize>, visit: &mut F) {
    let Some(v) = uncovered.first(0) else {
        let mut sorted = chosen.clone();
        sorted.sort_unstable();
        visit(&sorted);
        return;
    };
    uncovered.clear(0, v);
    for &(w, e) in g.neighbors(v) {
        if uncovered.contains(0, w) {
            uncovered.clear(0, w);
            chosen.push(e);
            perfect_rec(g, uncovered, chosen, visit);
            chosen.pop();
            uncovered.set(0, w);
        }
    }
    uncovered.set(0, v);
}

fn eulerian_subsets<F: FnMut(&[usize])>(g: &Graph, visit: &mut F) {
    // last incident edge index per vertex; after it is decided the vertex's
    // degree is final and must not be 1
    let last: Vec<Option<usize>> = (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().map(|&(_, e)| e).max())
        .collect();
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); g.edge_count()];
    for (v, l) in last.iter().enumerate() {
        if let Some(e) = *l {
            closes[e].push(v);
        }
    }
    let mut degree = vec![0u8; g.vertex_count()];
    let mut chosen = Vec::with_capacity(g.edge_count());
    eulerian_rec(g, 0, &closes, &mut degree, &mut chosen, visit);
}

fn eulerian_rec<F: FnMut(&[usize])>(
    g: &Graph,
    e: usize,
    closes: &[Vec<usize>],
    degree: &mut [u8],
    chosen: &mut Vec<usize>,
    visit: &mut F,
) {
    if e == g.edge_count() {
        visit(chosen);
        return;
    }
    let (u, v) = g.edge(e);
    let closed_ok = |degree: &[u8]| closes[e].iter().all(|&x| degree[x] != 1);

    if degree[u] < 2 && degree[v] < 2 {
        degree[u] += 1;
        degree[v] += 1;
        if closed_ok(degree) {
            chosen.push(e);
            eulerian_rec(g, e + 1, closes, degree, chosen, visit);
            chosen.pop();
        }
        degree[u] -= 1;
        degree[v] -= 1;
    }
    if closed_ok(degree) {
        eulerian_rec(g, e + 1, closes, degree, chosen, visit);
    }
}

/// Calls `visit` once per structure of family `f` in `g` with its members in
/// increasing order.
pub fn for_each_structure<F: FnMut(&[usize])>(g: &Graph, f: StructureFamily, mut visit: F) {
    match f {
        StructureFamily::IndependentSet => independent_sets(g, &mut visit),
        StructureFamily::Matching => matchings(g, &mut visit),
        StructureFamily::PerfectMatching => perfect_matchings(g, &mut visit),
        StructureFamily::EulerianSubset => eulerian_subsets(g, &mut visit),
    }
}

/// One square-free monomial per structure, coefficient 1.
pub fn generating_polynomial(g: &Graph, f: StructureFamily) -> Polynomial {
    let ground = f.ground_set(g);
    let mut p = Polynomial::zero(ground);
    for_each_structure(g, f, |members| {
        p.add_term(Monomial::from_support(ground.size, members), BigUint::from(1u8));
    });
    p
}

/// Number of structures, counted directly from the enumerator.
pub fn count_structures(g: &Graph, f: StructureFamily) -> BigUint {
    let mut count: u64 = 0;
    let mut spill = BigUint::default();
    for_each_structure(g, f, |_| {
        count = count.checked_add(1).unwrap_or_else(|| {
            spill += u64::MAX;
            1
        });
    });
    spill + count
}

/// Independent membership test, used to re-verify enumerated structures.
pub fn is_structure(g: &Graph, f: StructureFamily, members: &[usize]) -> bool {
    match f {
        StructureFamily::IndependentSet => members.iter().enumerate().all(|(i, &u)| {
            u < g.vertex_count() && members[i + 1..].iter().all(|&v| u != v && g.edge_between(u, v).is_none())
        }),
        _ => {
            if members.iter().any(|&e| e >= g.edge_count()) {
                return false;
            }
            let mut sorted = members.to_vec();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
            let mut degree = vec![0usize; g.vertex_count()];
            for &e in members {
                let (u, v) = g.edge(e);
                degree[u] += 1;
                degree[v] += 1;
            }
            match f {
                StructureFamily::Matching => degree.iter().all(|&d| d <= 1),
                StructureFamily::PerfectMatching => degree.iter().all(|&d| d == 1),
                StructureFamily::EulerianSubset => degree.iter().all(|&d| d == 0 || d == 2),
                StructureFamily::IndependentSet => unreachable!(),
            }
        }
    }
}
