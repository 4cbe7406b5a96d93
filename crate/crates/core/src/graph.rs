//! Finite simple undirected graphs.
//!
//! Vertices are dense indices `0..n`. Edges are stored in the order they were
//! given, each normalized so that `u < v`; the position of an edge in that list
//! is its index everywhere else in the crate (edge indeterminates, voltage
//! assignments, couplings).

use std::collections::{HashSet, VecDeque};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: malformed input: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("header declares {declared} edges but {found} were listed")]
    EdgeCountMismatch { declared: usize, found: usize },
}

/// A simple undirected graph with an oriented-edge view.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// Per-vertex sorted `(neighbor, edge index)` pairs.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Builds a graph from an edge list. Endpoints may be given in either
    /// order; line numbers in errors are 1-based edge positions.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut builder = Builder::new(n);
        for (i, (u, v)) in edges.into_iter().enumerate() {
            builder.push(i + 1, u, v)?;
        }
        Ok(builder.finish())
    }

    /// A graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adjacency: vec![Vec::new(); n] }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in index order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> (usize, usize) {
        self.edges[index]
    }

    /// Sorted neighbors of `v`, each paired with the index of the joining edge.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Index of the edge joining `u` and `v`, if any.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        let adj = self.adjacency.get(u)?;
        adj.binary_search_by_key(&v, |&(w, _)| w).ok().map(|pos| adj[pos].1)
    }

    /// Both orientations of every edge: `(u, v)` then `(v, u)` per edge.
    pub fn oriented_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)])
    }

    /// Vertex-disjoint union; vertices of `other` are shifted by `self.vertex_count()`
    /// and its edges follow this graph's edges.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph::new(self.n + other.n, edges).expect("disjoint union of simple graphs is simple")
    }

    /// Serializes to the edge-list text format (no comments, trailing LF).
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// SHA-256 of the canonical edge-list serialization, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_edge_list().as_bytes()))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph(s)
    }
}

struct Builder {
    n: usize,
    edges: Vec<(usize, usize)>,
    seen: HashSet<(usize, usize)>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder { n, edges: Vec::new(), seen: HashSet::new() }
    }

    fn push(&mut self, line: usize, u: usize, v: usize) -> Result<(), GraphError> {
        for vertex in [u, v] {
            if vertex >= self.n {
                return Err(GraphError::VertexOutOfRange { line, vertex, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { line, vertex: u });
        }
        let key = (u.min(v), u.max(v));
        if !self.seen.insert(key) {
            return Err(GraphError::DuplicateEdge { line, u: key.0, v: key.1 });
        }
        self.edges.push(key);
        Ok(())
    }

    fn finish(self) -> Graph {
        let mut adjacency = vec![Vec::new(); self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            adjacency[u].push((v, i));
            adjacency[v].push((u, i));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Graph { n: self.n, edges: self.edges, adjacency }
    }
}

/// Parses the edge-list format: a header line `n m`, then `m` lines `u v`.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| GraphError::Malformed { line: 1, reason: "missing header".into() })?;
    let [n, m] = parse_pair(header_line, header)?;

    let mut builder = Builder::new(n);
    let mut found = 0;
    for (line, l) in lines {
        let [u, v] = parse_pair(line, l)?;
        builder.push(line, u, v)?;
        found += 1;
    }
    if found != m {
        return Err(GraphError::EdgeCountMismatch { declared: m, found });
    }
    Ok(builder.finish())
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2], GraphError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(GraphError::Malformed {
            line,
            reason: format!("expected two integers, found {} fields", fields.len()),
        });
    }
    let parse = |s: &str| {
        s.parse::<usize>().map_err(|_| GraphError::Malformed {
            line,
            reason: format!("not a non-negative integer: {s:?}"),
        })
    };
    Ok([parse(fields[0])?, parse(fields[1])?])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A proper 2-coloring of a graph's vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side: Vec<Side>,
}

impl Bipartition {
    pub fn side(&self, v: usize) -> Side {
        self.side[v]
    }

    pub fn sides(&self) -> &[Side] {
        &self.side
    }
}

/// Returns a bipartition iff `g` has no odd cycle. The lowest-index vertex of
/// each connected component is placed on the left.
pub fn is_bipartite(g: &Graph) -> Option<Bipartition> {
    let mut side: Vec<Option<Side>> = vec![None; g.vertex_count()];
    let mut queue = VecDeque::new();
    for root in 0..g.vertex_count() {
        if side[root].is_some() {
            continue;
        }
        side[root] = Some(Side::Left);
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let s = side[v].expect("queued vertices are colored");
            for &(w, _) in g.neighbors(v) {
                match side[w] {
                    None => {
                        side[w] = Some(s.other());
                        queue.push_back(w);
                    }
                    Some(t) if t == s => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(Bipartition { side: side.into_iter().map(|s| s.expect("all vertices visited")).collect() })
}

/// Inserts a new vertex on every edge. Original vertices keep their indices;
/// the midpoint of edge `i` is vertex `n + i`. Returns the subdivided graph and
/// the edge-to-midpoint map.
pub fn subdivide(g: &Graph) -> (Graph, Vec<usize>) {
    let n = g.vertex_count();
    let midpoints: Vec<usize> = (0..g.edge_count()).map(|i| n + i).collect();
    let edges = g
        .edges()
        .iter()
        .zip(&midpoints)
        .flat_map(|(&(u, v), &mid)| [(u, mid), (v, mid)]);
    let sub = Graph::new(n + g.edge_count(), edges).expect("subdivision of a simple graph is simple");
    (sub, midpoints)
}

/// Standard named graphs.
pub mod named {
    use super::Graph;

    /// Cycle `0-1-…-(n-1)-0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    /// `K_{a,b}` with the `a` side on vertices `0..a`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).unwrap()
    }

    /// `rows x cols` grid, vertex `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Graph {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Graph::new(rows * cols, edges).unwrap()
    }

    /// The `d`-dimensional hypercube graph.
    pub fn hypercube(d: u32) -> Graph {
        let n = 1usize << d;
        let edges = (0..n).flat_map(|v| (0..d).map(move |b| (v, v ^ (1 << b)))).filter(|&(u, v)| u < v);
        Graph::new(n, edges).unwrap()
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_c4() {
        let g = parse_graph("4 4\n0 1\n1 2\n2 3\n3 0").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert_eq!(g.oriented_edges().count(), 8);
        assert_eq!(g.neighbors(0), &[(1, 0), (3, 3)]);
        assert_eq!(g.edge_between(3, 0), Some(3));
        assert_eq!(g.edge_between(0, 2), None);
    }

    #[test]
    fn parses_triangle_with_comments() {
        let g = parse_graph("# triangle\n3 3\n0 1\n\n1 2\n# closing edge\n0 2\n").unwrap();
        assert_eq!(g, named::cycle(3));
    }

    #[test]
    fn parse_errors_are_distinct() {
        assert_eq!(parse_graph("2 1\n0 0"), Err(GraphError::SelfLoop { line: 2, vertex: 0 }));
        assert_eq!(
            parse_graph("2 1\n0 2"),
            Err(GraphError::VertexOutOfRange { line: 2, vertex: 2, n: 2 })
        );
        assert_eq!(
            parse_graph("3 2\n0 1\n1 0"),
            Err(GraphError::DuplicateEdge { line: 3, u: 0, v: 1 })
        );
        assert!(matches!(parse_graph("3 1\n0 x"), Err(GraphError::Malformed { line: 2, .. })));
        assert!(matches!(parse_graph("3 1\n0 1 2"), Err(GraphError::Malformed { .. })));
        assert!(matches!(parse_graph(""), Err(GraphError::Malformed { .. })));
        assert_eq!(
            parse_graph("3 2\n0 1"),
            Err(GraphError::EdgeCountMismatch { declared: 2, found: 1 })
        );
    }

    #[test]
    fn serialization_round_trips() {
        let g = named::grid(3, 3);
        let text = g.to_edge_list();
        assert_eq!(parse_graph(&text).unwrap().to_edge_list(), text);
    }

    #[test]
    fn bipartition_of_even_cycle() {
        let b = is_bipartite(&named::cycle(4)).unwrap();
        assert_eq!(b.sides(), &[Side::Left, Side::Right, Side::Left, Side::Right]);
    }

    #[test]
    fn odd_cycles_are_not_bipartite() {
        assert!(is_bipartite(&named::cycle(3)).is_none());
        assert!(is_bipartite(&named::cycle(5)).is_none());
    }

    #[test]
    fn each_component_root_is_left() {
        let g = Graph::new(5, [(1, 2), (3, 4)]).unwrap();
        let b = is_bipartite(&g).unwrap();
        assert_eq!(b.side(0), Side::Left);
        assert_eq!(b.side(1), Side::Left);
        assert_eq!(b.side(3), Side::Left);
        assert_eq!(b.side(4), Side::Right);
    }

    #[test]
    fn subdivision_examples() {
        let (p3, mids) = subdivide(&named::path(2));
        assert_eq!(mids, vec![2]);
        assert_eq!(p3.edges(), &[(0, 2), (1, 2)]);

        for (base, len) in [(named::cycle(4), 8), (named::cycle(3), 6)] {
            let (sub, _) = subdivide(&base);
            assert_eq!(sub.vertex_count(), len);
            assert_eq!(sub.edge_count(), len);
            assert!((0..len).all(|v| sub.degree(v) == 2));
            assert!(is_bipartite(&sub).is_some());
        }
    }

    #[test]
    fn named_graph_sizes() {
        assert_eq!(named::grid(3, 3).edge_count(), 12);
        assert_eq!(named::hypercube(3).edge_count(), 12);
        assert_eq!(named::complete_bipartite(2, 3).edge_count(), 6);
        assert_eq!(named::complete(4).edge_count(), 6);
        assert_eq!(named::star(3).degree(0), 3);
    }
}
