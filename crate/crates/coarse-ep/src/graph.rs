//! Undirected simple graphs on dense integer ids, plus the breadth-first
//! primitives everything else is built on: set-to-set distance, balls,
//! cycle rank, components, and a deterministic cycle search.
//!
//! Induced subgraphs keep the host id space (dropped vertices become
//! isolated), so vertex sets computed in a subgraph are valid in the host
//! without translation. Cycle rank is insensitive to isolated vertices,
//! which keeps that convention honest.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

/// Normalized undirected edge: smaller endpoint first.
pub type Edge = (usize, usize);

/// Set of vertex ids. BTreeSet so all iteration is in ascending id order.
pub type VertexSet = BTreeSet<usize>;

/// Normalize an endpoint pair into an `Edge`.
pub fn edge(u: usize, v: usize) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line 1: missing \"n m\" header")]
    MissingHeader,
    #[error("line {line}: expected \"n m\" header, got {content:?}")]
    BadHeader { line: usize, content: String },
    #[error("line {line}: expected \"u v\" edge, got {content:?}")]
    BadEdge { line: usize, content: String },
    #[error("line {line}: {source}")]
    BadGraph { line: usize, source: GraphError },
    #[error("expected {expected} edge lines, found {found}")]
    WrongEdgeCount { expected: usize, found: usize },
    #[error("line {line}: trailing content after edge list")]
    TrailingContent { line: usize },
}

/// Distance between vertex sets. `Infinite` is an explicit variant, never a
/// sentinel value. The derived order puts `Infinite` above every `Finite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    /// True when the distance exceeds `d` (Infinite exceeds everything).
    pub fn exceeds(self, d: usize) -> bool {
        match self {
            Distance::Finite(x) => x > d,
            Distance::Infinite => true,
        }
    }

    pub fn at_most(self, r: usize) -> bool {
        !self.exceeds(r)
    }
}

/// Finite simple undirected graph with vertices `0..n`.
/// Neighbor lists are kept sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Graph {
        Graph {
            n,
            m: 0,
            adj: vec![Vec::new(); n],
        }
    }

    /// Build from an edge list. Duplicate edges (in either orientation) are
    /// collapsed; out-of-range endpoints and self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut set: BTreeSet<Edge> = BTreeSet::new();
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            set.insert(edge(u, v));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            m: set.len(),
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges, sorted.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        0..self.n
    }

    /// Non-isolated vertices.
    pub fn support(&self) -> VertexSet {
        (0..self.n).filter(|&v| !self.adj[v].is_empty()).collect()
    }

    /// Multi-source BFS distances. `None` means unreachable. When `cap` is
    /// given, exploration stops at that depth (deeper vertices stay `None`).
    /// Sources are seeded in ascending order.
    pub fn bfs_distances<'a, I>(&self, sources: I, cap: Option<usize>) -> Vec<Option<usize>>
    where
        I: IntoIterator<Item = &'a usize>,
    {
        let mut dist: Vec<Option<usize>> = vec![None; self.n];
        let mut queue = std::collections::VecDeque::new();
        let seeds: BTreeSet<usize> = sources.into_iter().copied().collect();
        for s in seeds {
            assert!(s < self.n, "BFS source {s} out of range");
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            if let Some(cap) = cap {
                if dv == cap {
                    continue;
                }
            }
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Graph distance between two nonempty vertex sets (0 if they intersect).
    pub fn distance(&self, xs: &VertexSet, ys: &VertexSet) -> Distance {
        assert!(!xs.is_empty() && !ys.is_empty(), "distance between empty sets");
        let dist = self.bfs_distances(xs.iter(), None);
        let best = ys.iter().filter_map(|&y| dist[y]).min();
        match best {
            Some(d) => Distance::Finite(d),
            None => Distance::Infinite,
        }
    }

    /// Closed ball: all vertices within distance `r` of the set `xs`.
    pub fn ball(&self, xs: &VertexSet, r: usize) -> VertexSet {
        let dist = self.bfs_distances(xs.iter(), Some(r));
        (0..self.n).filter(|&v| dist[v].is_some()).collect()
    }

    /// Induced subgraph on `keep`, padded to the host id space: vertices
    /// outside `keep` become isolated.
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let edges: Vec<Edge> = self
            .edges()
            .into_iter()
            .filter(|&(u, v)| keep.contains(&u) && keep.contains(&v))
            .collect();
        Graph::from_edges(self.n, &edges).expect("induced edges are valid")
    }

    /// Copy of the graph with the listed edges deleted. Edges absent from
    /// the graph are ignored.
    pub fn without_edges(&self, drop: &[Edge]) -> Graph {
        let drop: BTreeSet<Edge> = drop.iter().map(|&(u, v)| edge(u, v)).collect();
        let edges: Vec<Edge> = self
            .edges()
            .into_iter()
            .filter(|e| !drop.contains(e))
            .collect();
        Graph::from_edges(self.n, &edges).expect("remaining edges are valid")
    }

    /// Subgraph with the vertices in `remove` deleted (padded id space).
    pub fn remove_vertices(&self, remove: &VertexSet) -> Graph {
        let keep: VertexSet = (0..self.n).filter(|v| !remove.contains(v)).collect();
        self.induced(&keep)
    }

    /// Connected components restricted to `within`, each sorted ascending,
    /// listed in order of their minimum vertex.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut out = Vec::new();
        for &start in within {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for &w in &self.adj[v] {
                    if within.contains(&w) && seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Number of connected components, isolated vertices included.
    pub fn component_count(&self) -> usize {
        let all: VertexSet = (0..self.n).collect();
        self.components_within(&all).len()
    }

    /// Cycle rank |E| - |V| + (number of components). Zero iff the graph is
    /// a forest. Isolated vertices contribute nothing, so the padded-subgraph
    /// convention is safe here.
    pub fn cycle_rank(&self) -> usize {
        self.m + self.component_count() - self.n
    }

    /// Deterministic search for a cycle avoiding the set `avoid`: DFS from
    /// the smallest id, neighbors in ascending order. Returns the cycle as a
    /// vertex sequence (consecutive entries adjacent, first adjacent to last),
    /// or None if `G - avoid` is a forest.
    pub fn find_cycle_avoiding(&self, avoid: &VertexSet) -> Option<Vec<usize>> {
        const UNSEEN: u8 = 0;
        const ON_PATH: u8 = 1;
        const DONE: u8 = 2;
        let mut state = vec![UNSEEN; self.n];
        let mut parent: Vec<Option<usize>> = vec![None; self.n];
        for start in 0..self.n {
            if avoid.contains(&start) || state[start] != UNSEEN {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            state[start] = ON_PATH;
            while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
                if *idx < self.adj[v].len() {
                    let w = self.adj[v][*idx];
                    *idx += 1;
                    if avoid.contains(&w) {
                        continue;
                    }
                    if state[w] == UNSEEN {
                        parent[w] = Some(v);
                        state[w] = ON_PATH;
                        stack.push((w, 0));
                    } else if state[w] == ON_PATH && parent[v] != Some(w) {
                        // Back edge: the tree path w..v plus vw closes a cycle.
                        let mut seq = vec![v];
                        let mut cur = v;
                        while cur != w {
                            cur = parent[cur].expect("back edge target is an ancestor");
                            seq.push(cur);
                        }
                        seq.reverse();
                        return Some(seq);
                    }
                } else {
                    state[v] = DONE;
                    stack.pop();
                }
            }
        }
        None
    }
}

/// Parse the plain edge-list format: first line `n m`, then `m` lines `u v`
/// with 0-based endpoints. Malformed input is rejected with a line number.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let parse_pair = |s: &str| -> Option<(usize, usize)> {
        let mut it = s.split_whitespace();
        let a = it.next()?.parse().ok()?;
        let b = it.next()?.parse().ok()?;
        if it.next().is_some() {
            return None;
        }
        Some((a, b))
    };
    let (n, m) = parse_pair(header).ok_or_else(|| ParseError::BadHeader {
        line: 1,
        content: header.to_string(),
    })?;
    let mut edges = Vec::with_capacity(m);
    let mut found = 0usize;
    for (i, raw) in lines {
        let line = i + 1;
        if raw.trim().is_empty() {
            // Blank lines are only tolerated after the full edge list.
            if found < m {
                return Err(ParseError::BadEdge {
                    line,
                    content: raw.to_string(),
                });
            }
            continue;
        }
        if found == m {
            return Err(ParseError::TrailingContent { line });
        }
        let (u, v) = parse_pair(raw).ok_or_else(|| ParseError::BadEdge {
            line,
            content: raw.to_string(),
        })?;
        // Validate endpoints eagerly so the error carries this line number.
        Graph::from_edges(n, &[(u, v)]).map_err(|source| ParseError::BadGraph { line, source })?;
        edges.push((u, v));
        found += 1;
    }
    if found < m {
        return Err(ParseError::WrongEdgeCount {
            expected: m,
            found,
        });
    }
    Ok(Graph::from_edges(n, &edges).expect("edges validated per line"))
}

/// Serialize in the same edge-list format parsed by [`parse_edge_list`].
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let edges = g.edges();
    writeln!(out, "{} {}", g.n(), edges.len()).unwrap();
    for (u, v) in edges {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Convenience: vertex set from a slice.
pub fn vset(vs: &[usize]) -> VertexSet {
    vs.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_triangles_bridge3() -> Graph {
        // Triangles {0,1,2} and {3,4,5} joined by the path 0-6-7-3.
        Graph::from_edges(
            8,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (0, 6),
                (6, 7),
                (7, 3),
            ],
        )
        .unwrap()
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn distance_and_ball() {
        let g = two_triangles_bridge3();
        assert_eq!(g.distance(&vset(&[0, 1, 2]), &vset(&[3, 4, 5])), Distance::Finite(3));
        assert_eq!(g.distance(&vset(&[0]), &vset(&[0, 5])), Distance::Finite(0));
        assert_eq!(g.ball(&vset(&[4]), 1), vset(&[3, 4, 5]));
        assert_eq!(g.ball(&vset(&[4]), 2), vset(&[3, 4, 5, 7]));
        let h = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(h.distance(&vset(&[0]), &vset(&[3])), Distance::Infinite);
        assert!(h.distance(&vset(&[0]), &vset(&[3])).exceeds(1_000_000));
    }

    #[test]
    fn rank_counts_independent_cycles() {
        let g = two_triangles_bridge3();
        assert_eq!(g.cycle_rank(), 2);
        let forest = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(forest.cycle_rank(), 0);
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(k4.cycle_rank(), 3);
        // Padding invariance: isolated vertices change nothing.
        let padded = k4.induced(&vset(&[0, 1, 2, 3]));
        assert_eq!(padded.cycle_rank(), 3);
    }

    #[test]
    fn find_cycle_skips_avoided_component() {
        // Two disjoint triangles; avoiding 0 breaks the first one.
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let c = g.find_cycle_avoiding(&vset(&[0])).unwrap();
        let cs: VertexSet = c.iter().copied().collect();
        assert_eq!(cs, vset(&[3, 4, 5]));
        assert!(g.find_cycle_avoiding(&vset(&[0, 4])).is_none());
    }

    #[test]
    fn induced_keeps_id_space() {
        let g = two_triangles_bridge3();
        let sub = g.induced(&vset(&[3, 4, 5, 7]));
        assert_eq!(sub.n(), 8);
        assert_eq!(sub.m(), 4);
        assert!(sub.has_edge(7, 3));
        assert!(!sub.has_edge(0, 1));
    }

    #[test]
    fn parser_round_trip_and_errors() {
        let g = two_triangles_bridge3();
        let text = to_edge_list(&g);
        assert_eq!(parse_edge_list(&text).unwrap(), g);

        assert_eq!(parse_edge_list(""), Err(ParseError::MissingHeader));
        assert!(matches!(
            parse_edge_list("a b\n"),
            Err(ParseError::BadHeader { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 2\n0 1\nx y\n"),
            Err(ParseError::BadEdge { line: 3, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n"),
            Err(ParseError::WrongEdgeCount { expected: 2, found: 1 })
        ));
        assert!(matches!(
            parse_edge_list("3 1\n0 1\n1 2\n"),
            Err(ParseError::TrailingContent { line: 3 })
        ));
        assert!(matches!(
            parse_edge_list("3 1\n0 5\n"),
            Err(ParseError::BadGraph { line: 2, .. })
        ));
    }

    fn arb_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
        (2..max_n).prop_flat_map(move |n| {
            proptest::collection::vec((0..n, 0..n), 0..max_m).prop_map(move |pairs| {
                let edges: Vec<(usize, usize)> =
                    pairs.into_iter().filter(|(u, v)| u != v).collect();
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn distance_symmetric(g in arb_graph(24, 60), a in 0usize..24, b in 0usize..24) {
            let a = a % g.n();
            let b = b % g.n();
            let (xs, ys) = (vset(&[a]), vset(&[b]));
            prop_assert_eq!(g.distance(&xs, &ys), g.distance(&ys, &xs));
        }

        #[test]
        fn ball_matches_distance(g in arb_graph(24, 60), a in 0usize..24, r in 0usize..6) {
            let a = a % g.n();
            let xs = vset(&[a]);
            let ball = g.ball(&xs, r);
            for v in 0..g.n() {
                let inside = ball.contains(&v);
                let close = g.distance(&xs, &vset(&[v])).at_most(r);
                prop_assert_eq!(inside, close, "v={}", v);
            }
        }

        #[test]
        fn ball_monotone(g in arb_graph(24, 60), a in 0usize..24, r in 0usize..5) {
            let a = a % g.n();
            let xs = vset(&[a]);
            let small = g.ball(&xs, r);
            let big = g.ball(&xs, r + 1);
            prop_assert!(small.is_subset(&big));
        }

        #[test]
        fn cycle_found_iff_rank_positive(g in arb_graph(20, 40)) {
            let found = g.find_cycle_avoiding(&VertexSet::new());
            prop_assert_eq!(found.is_some(), g.cycle_rank() > 0);
            if let Some(seq) = found {
                prop_assert!(seq.len() >= 3);
                let distinct: VertexSet = seq.iter().copied().collect();
                prop_assert_eq!(distinct.len(), seq.len());
                for i in 0..seq.len() {
                    prop_assert!(g.has_edge(seq[i], seq[(i + 1) % seq.len()]));
                }
            }
        }

        #[test]
        fn parse_round_trip(g in arb_graph(20, 40)) {
            let text = to_edge_list(&g);
            prop_assert_eq!(parse_edge_list(&text).unwrap(), g);
        }

        #[test]
        fn triangle_inequality_on_sets(g in arb_graph(16, 40), a in 0usize..16, b in 0usize..16, c in 0usize..16) {
            let (a, b, c) = (a % g.n(), b % g.n(), c % g.n());
            let ab = g.distance(&vset(&[a]), &vset(&[b]));
            let bc = g.distance(&vset(&[b]), &vset(&[c]));
            let ac = g.distance(&vset(&[a]), &vset(&[c]));
            if let (Distance::Finite(x), Distance::Finite(y)) = (ab, bc) {
                prop_assert!(ac.at_most(x + y));
            }
        }
    }
}
