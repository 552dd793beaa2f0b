//! Simple undirected graphs on which the dragons sit.
//!
//! Nodes are indexed from 0. The cube carries an extra structure, the
//! pairing of each face with its opposite face, which enables the
//! invariant-subspace decomposition in [`crate::spectral`].

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Neighbor lists of the cube's faces, read off the nonzero pattern of
/// the stealing matrix
///
/// ```text
///     0   1/4 1/4 1/4 1/4  0
///    1/4   0  1/4  0  1/4 1/4
///    1/4  1/4  0  1/4  0  1/4
///    1/4   0  1/4  0  1/4 1/4
///    1/4  1/4  0  1/4  0  1/4
///     0   1/4 1/4 1/4 1/4  0
/// ```
///
/// with faces renumbered from 1..=6 to 0..=5.
const CUBE_NEIGHBORS: [[usize; 4]; 6] = [
    [1, 2, 3, 4],
    [0, 2, 4, 5],
    [0, 1, 3, 5],
    [0, 2, 4, 5],
    [0, 1, 3, 5],
    [1, 2, 3, 4],
];

/// Opposite faces: 0↔5, 1↔3, 2↔4 (the zero off-diagonal entries above).
const CUBE_OPPOSITE: [usize; 6] = [5, 3, 4, 1, 2, 0];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    neighbors: Vec<BTreeSet<usize>>,
    opposite: Option<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge collection, rejecting self-loops,
    /// duplicates (in either orientation) and out-of-range indices.
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidSize { size: 0, reason: "a graph needs at least one node" });
        }
        let mut neighbors = vec![BTreeSet::new(); node_count];
        for (u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
            }
            if !neighbors[u].insert(v) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            neighbors[v].insert(u);
        }
        Ok(Self { neighbors, opposite: None })
    }

    /// The face-adjacency graph of the cube, with its opposite-face pairing.
    pub fn cube() -> Self {
        let neighbors = CUBE_NEIGHBORS.iter().map(|row| row.iter().copied().collect()).collect();
        Self { neighbors, opposite: Some(CUBE_OPPOSITE.to_vec()) }
    }

    /// The n-cycle: node `i` is adjacent to `i ± 1 (mod n)`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSize { size: n, reason: "a cycle needs at least 3 nodes" });
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// The path `0 – 1 – … – (n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize { size: n, reason: "a path needs at least 2 nodes" });
        }
        Self::new(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Parses the edge-list format: one `u v` pair per line, `#` comments
    /// and blank lines ignored. The node count is one more than the
    /// largest index mentioned.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut seen = BTreeSet::new();
        let mut max_index = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(parse_err(format!(
                    "expected two node indices, found {} fields",
                    fields.len()
                )));
            }
            let index = |s: &str| {
                s.parse::<usize>().map_err(|_| parse_err(format!("invalid node index {s:?}")))
            };
            let (u, v) = (index(fields[0])?, index(fields[1])?);
            if u == v {
                return Err(parse_err(format!("self-loop at node {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(parse_err(format!("duplicate edge {u} {v}")));
            }
            max_index = Some(max_index.map_or(u.max(v), |m: usize| m.max(u).max(v)));
            edges.push((u, v));
        }
        let Some(max_index) = max_index else {
            return Err(Error::Parse { line: 0, message: "edge list contains no edges".into() });
        };
        Self::new(max_index + 1, edges)
    }

    /// Canonical edge-list rendering: `u v` with `u < v`, lexicographic.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbors[v].iter().copied()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].contains(&v)
    }

    /// Number of neighbors of `v`. Panics if `v` is out of range.
    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// `Some(d)` when every node has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.neighbors.iter().all(|ns| ns.len() == d).then_some(d)
    }

    /// The face opposite `v`, for graphs that carry an opposite pairing.
    pub fn opposite(&self, v: usize) -> Option<usize> {
        self.opposite.as_ref().map(|o| o[v])
    }

    pub fn has_opposite_pairing(&self) -> bool {
        self.opposite.is_some()
    }

    /// Attaches an opposite pairing. It must be a fixed-point-free
    /// involution that never pairs adjacent nodes.
    pub fn with_opposite_pairing(mut self, pairing: Vec<usize>) -> Result<Self> {
        let n = self.node_count();
        if pairing.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: pairing.len() });
        }
        for (v, &w) in pairing.iter().enumerate() {
            if w >= n || w == v || pairing[w] != v {
                return Err(Error::InvalidGraph(format!(
                    "opposite pairing is not a fixed-point-free involution at node {v}"
                )));
            }
            if self.is_adjacent(v, w) {
                return Err(Error::InvalidGraph(format!("node {v} is adjacent to its opposite {w}")));
            }
        }
        self.opposite = Some(pairing);
        Ok(self)
    }

    /// True iff every node is reachable from node 0.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.node_count()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.node_count()
    }

    /// A proper 2-coloring (colors 0 and 1) if the graph has no odd
    /// cycle. Each component is colored by BFS with its smallest node
    /// getting color 0.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let n = self.node_count();
        let mut color: Vec<Option<u8>> = vec![None; n];
        for start in 0..n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(0);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].expect("queued nodes are colored");
                for v in self.neighbors(u) {
                    match color[v] {
                        None => {
                            color[v] = Some(1 - cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.expect("every node visited")).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn neighbor_set(g: &Graph, v: usize) -> Vec<usize> {
        g.neighbors(v).collect()
    }

    #[test]
    fn cube_matches_stealing_matrix_pattern() {
        let g = Graph::cube();
        assert_eq!(g.node_count(), 6);
        assert_eq!(neighbor_set(&g, 0), vec![1, 2, 3, 4]);
        assert!(!g.is_adjacent(0, 5));
        assert!((0..6).all(|v| g.degree(v) == 4));
        assert_eq!(g.regular_degree(), Some(4));
        assert_eq!(g.edge_count(), 12);
        // corner triple
        assert!(g.is_adjacent(0, 1) && g.is_adjacent(1, 2) && g.is_adjacent(0, 2));
        for v in 0..6 {
            let w = g.opposite(v).unwrap();
            assert_eq!(g.opposite(w), Some(v));
            assert_ne!(v, w);
            assert!(!g.is_adjacent(v, w));
            // adjacent to everything except itself and its opposite
            assert!((0..6).filter(|&u| u != v && u != w).all(|u| g.is_adjacent(v, u)));
        }
        // the stored pairing passes the public validator
        let pairing = (0..6).map(|v| g.opposite(v).unwrap()).collect();
        let rebuilt = Graph::new(6, g.edges()).unwrap().with_opposite_pairing(pairing).unwrap();
        assert_eq!(rebuilt, g);
    }

    #[test]
    fn cycles() {
        let c3 = Graph::cycle(3).unwrap();
        assert!((0..3).all(|v| c3.degree(v) == 2));
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(neighbor_set(&c4, 0), vec![1, 3]);
        assert!(!c4.has_opposite_pairing());
        assert_eq!(Graph::cycle(6).unwrap().two_coloring(), Some(vec![0, 1, 0, 1, 0, 1]));
        assert!(matches!(Graph::cycle(2), Err(Error::InvalidSize { size: 2, .. })));
        assert!(Graph::cycle(0).is_err());
    }

    #[test]
    fn connectivity() {
        assert!(Graph::cube().is_connected());
        assert!(Graph::cycle(5).unwrap().is_connected());
        let two_triangles = Graph::from_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n").unwrap();
        assert!(!two_triangles.is_connected());
    }

    #[test]
    fn bipartiteness() {
        assert!(!Graph::cube().is_bipartite());
        assert!(!Graph::cycle(5).unwrap().is_bipartite());
        assert!(Graph::cycle(6).unwrap().is_bipartite());
        for n in 3..=64 {
            assert_eq!(Graph::cycle(n).unwrap().is_bipartite(), n % 2 == 0, "n = {n}");
        }
    }

    #[test]
    fn degrees() {
        let path = Graph::from_edge_list("0 1\n1 2\n").unwrap();
        assert_eq!(path.degree(1), 2);
        assert_eq!(path.degree(0), 1);
        assert_eq!(path, Graph::path(3).unwrap());
        assert_eq!(path.regular_degree(), None);
        assert!((0..7).all(|v| Graph::cycle(7).unwrap().degree(v) == 2));
    }

    #[test]
    fn edge_list_comments_and_errors() {
        let g = Graph::from_edge_list("# a path\n\n0 1\n  1   2  \n# done\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.to_edge_list(), "0 1\n1 2\n");

        let err = Graph::from_edge_list("0 1\n1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = Graph::from_edge_list("0 1\n# c\n1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = Graph::from_edge_list("0 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = Graph::from_edge_list("0 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(Graph::from_edge_list("# nothing\n").is_err());
        assert!(err.to_string().starts_with("line 1:"));
    }

    #[test]
    fn opposite_pairing_validation() {
        let c4 = Graph::cycle(4).unwrap();
        // 0↔2, 1↔3 are non-adjacent in C4
        assert!(c4.clone().with_opposite_pairing(vec![2, 3, 0, 1]).is_ok());
        // adjacent pair
        assert!(c4.clone().with_opposite_pairing(vec![1, 0, 3, 2]).is_err());
        // fixed point
        assert!(c4.clone().with_opposite_pairing(vec![0, 3, 2, 1]).is_err());
        // not an involution
        assert!(c4.with_opposite_pairing(vec![2, 3, 1, 0]).is_err());
    }

    #[test]
    fn triangle_is_never_bipartite() {
        let g = Graph::from_edge_list("0 1\n1 2\n0 2\n2 3\n3 4\n").unwrap();
        assert!(!g.is_bipartite());
    }

    fn arbitrary_graph() -> impl Strategy<Value = Graph> {
        (2usize..12).prop_flat_map(|n| {
            proptest::collection::btree_set((0..n, 0..n), 1..30).prop_map(move |pairs| {
                let edges: BTreeSet<(usize, usize)> = pairs
                    .into_iter()
                    .filter(|(u, v)| u != v)
                    .map(|(u, v)| (u.min(v), u.max(v)))
                    .collect();
                Graph::new(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn edge_list_round_trip(g in arbitrary_graph()) {
            // isolated trailing nodes cannot be expressed in the format
            let text = g.to_edge_list();
            prop_assume!(!text.is_empty());
            let parsed = Graph::from_edge_list(&text).unwrap();
            prop_assert_eq!(parsed.to_edge_list(), text);
            let last = parsed.node_count();
            prop_assert!(g.edges().all(|(u, v)| u < last && v < last));
        }

        #[test]
        fn coloring_is_proper(g in arbitrary_graph()) {
            if let Some(colors) = g.two_coloring() {
                prop_assert!(g.edges().all(|(u, v)| colors[u] != colors[v]));
            }
        }
    }
}
